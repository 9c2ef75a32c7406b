mod common;

use proptest::prelude::*;
use qwalk_core::coins::{self, ProjectorPartition};
use qwalk_core::group::{GroupElement, Letter};
use qwalk_core::linalg::{self, c, ComplexMatrix, C64};
use qwalk_core::unitarity::{self, build_full_operator, Side};
use qwalk_core::walk;
use qwalk_core::{check_cayley_conditions, GraphRealization, GroupPresentation, RealizationParams};
use rand::Rng;

use common::*;

const PRESENTATIONS: [&str; 8] = [
    "free:a,b",
    "free:a,a^-1,b",
    "cyclicprod:q=2,3",
    "cyclicprod:q=3,3,4",
    "abelian:n=3",
    "abelian:n=2,lazy",
    "hypercube:n=4",
    "abelianrel:sq",
];

fn random_word<R: Rng>(p: &GroupPresentation, rng: &mut R) -> Vec<Letter> {
    let len = rng.random_range(0..8);
    (0..len)
        .map(|_| Letter {
            base: rng.random_range(0..p.rank()),
            exp: rng.random_range(-3..=3),
        })
        .collect()
}

/// A coin family on `p` that need not be unitary, so that residuals are
/// generic.
fn generic_coins<R: Rng>(p: &GroupPresentation, rng: &mut R) -> qwalk_core::CoinSet {
    let d = rng.random_range(1..=3);
    let ms = p
        .delta()
        .iter()
        .map(|_| ComplexMatrix::from_fn(d, d, |_, _| linalg::random_complex(rng)))
        .collect();
    qwalk_core::CoinSet::new(p.clone(), ms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_law(seed in any::<u64>(), which in 0..PRESENTATIONS.len()) {
        let mut rng = rng(seed);
        let p = GroupPresentation::parse(PRESENTATIONS[which]).unwrap();
        let (w1, w2, w3) = (random_word(&p, &mut rng), random_word(&p, &mut rng), random_word(&p, &mut rng));
        let (x, y, z) = (p.canonicalize(&w1).unwrap(), p.canonicalize(&w2).unwrap(), p.canonicalize(&w3).unwrap());
        let joined: Vec<Letter> = w1.iter().chain(&w2).copied().collect();
        prop_assert_eq!(p.canonicalize(&joined).unwrap(), p.multiply(&x, &y));
        prop_assert_eq!(
            p.multiply(&p.multiply(&x, &y), &z),
            p.multiply(&x, &p.multiply(&y, &z))
        );
        prop_assert!(p.is_identity(&p.multiply(&x, &p.inverse(&x))));
        prop_assert!(p.is_identity(&p.multiply(&p.inverse(&x), &x)));
        prop_assert_eq!(p.multiply(&p.identity_element(), &x), x.clone());
        // printing and reparsing is the identity on canonical forms
        prop_assert_eq!(p.canonicalize_str(&p.format_element(&x)).unwrap(), x);
    }

    #[test]
    fn delta2_closed_under_inversion(which in 0..PRESENTATIONS.len()) {
        let p = GroupPresentation::parse(PRESENTATIONS[which]).unwrap();
        let set = p.delta2_set();
        for u in &set {
            prop_assert!(set.contains(&p.inverse(u)));
        }
        let right: Vec<GroupElement> = p.right_condition_groups().into_iter().map(|g| g.0).collect();
        for u in &right {
            prop_assert!(right.contains(&p.inverse(u)));
        }
        let k = p.delta().len();
        let left: usize = p.left_condition_groups().iter().map(|(_, g)| g.len()).sum();
        let right: usize = p.right_condition_groups().iter().map(|(_, g)| g.len()).sum();
        prop_assert_eq!(left, k * k);
        prop_assert_eq!(right, k * k);
    }

    #[test]
    fn inverse_elements_have_equal_residuals(seed in any::<u64>(), which in 0..PRESENTATIONS.len()) {
        let mut rng = rng(seed);
        let p = GroupPresentation::parse(PRESENTATIONS[which]).unwrap();
        let coins = generic_coins(&p, &mut rng);
        let report = check_cayley_conditions(&coins, 1e-10);
        // the sum for u⁻¹ is the adjoint of the sum for u
        for (side, groups) in [(Side::Left, p.left_condition_groups()), (Side::Right, p.right_condition_groups())] {
            for (u, _) in groups {
                let a = report.residual(side, &p.format_element(&u)).unwrap();
                let b = report.residual(side, &p.format_element(&p.inverse(&u))).unwrap();
                prop_assert!((a - b).abs() <= 1e-14 * a.max(1.0), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn realization_is_a_right_action(seed in any::<u64>(), which in 0..PRESENTATIONS.len()) {
        let mut rng = rng(seed);
        let p = GroupPresentation::parse(PRESENTATIONS[which]).unwrap();
        let probe = qwalk_core::CoinSet::new(
            p.clone(),
            vec![ComplexMatrix::identity(1, 1); p.delta().len()],
        ).unwrap();
        let r = realization_for(&probe, 4096, &mut rng);
        let x = p.canonicalize(&random_word(&p, &mut rng)).unwrap();
        for k in 0..p.delta().len() {
            let xd = p.multiply(&x, &p.delta_element(k));
            prop_assert_eq!(r.vertex_of(&xd), r.shift(k, r.vertex_of(&x)));
            prop_assert_eq!(r.unshift(k, r.vertex_of(&xd)), r.vertex_of(&x));
        }
    }

    #[test]
    fn graph_conditions_match_cayley_conditions(seed in any::<u64>(), which in 0..PRESENTATIONS.len()) {
        let mut rng = rng(seed);
        let p = GroupPresentation::parse(PRESENTATIONS[which]).unwrap();
        let coins = generic_coins(&p, &mut rng);
        let r = realization_for(&coins, 4096, &mut rng);
        let cayley = check_cayley_conditions(&coins, 1e-10);
        let graph = unitarity::check_graph_conditions(&coins, &r, 1e-10).unwrap();
        prop_assert!((cayley.max_residual - graph.max_residual).abs() <= 1e-14 * cayley.max_residual.max(1.0));
        prop_assert_eq!(cayley.pass, graph.pass);
    }

    #[test]
    fn projector_coins_stay_unitary_under_any_partition(seed in any::<u64>(), which in 0..PRESENTATIONS.len()) {
        let mut rng = rng(seed);
        let coins = random_free_projector(PRESENTATIONS[which], &mut rng);
        prop_assert!(check_cayley_conditions(&coins, 1e-10).pass);
    }
}

/// On the presentations offered here, repeated quotients only arise inside
/// abelian factors, so grouping the `W W†` pairs by `δ₁⁻¹δ₂` or by `δ₁δ₂⁻¹`
/// yields the same partition; only the labels differ.
#[test]
fn right_pair_partition_is_label_independent() {
    for spec in PRESENTATIONS
        .iter()
        .chain(&["free:a,b,c", "free:a,a^-1,b,b^-1", "cyclicprod:q=2,2,3"])
    {
        let p = GroupPresentation::parse(spec).unwrap();
        let mut by_right: Vec<Vec<(usize, usize)>> = p.right_condition_groups().into_iter().map(|g| g.1).collect();
        let mut by_left: Vec<Vec<(usize, usize)>> = p.left_condition_groups().into_iter().map(|g| g.1).collect();
        by_right.sort();
        by_left.sort();
        assert_eq!(by_right, by_left, "{spec}");
    }
}

/// Vertex map of a lattice symmetry on a torus.
fn lattice_map(r: &GraphRealization, f: impl Fn(&[i64]) -> Vec<i64>) -> Vec<usize> {
    (0..r.vertex_count())
        .map(|v| r.vertex_of(&GroupElement::Exponents(f(&r.coordinates(v).unwrap()))))
        .collect()
}

/// `(S ⊗ Π) W (S ⊗ Π)†` for a vertex permutation `Π` and internal unitary `S`.
fn conjugate(w: &ComplexMatrix, s: &ComplexMatrix, map: &[usize]) -> ComplexMatrix {
    let d = s.nrows();
    let n = map.len();
    let mut g = ComplexMatrix::zeros(n * d, n * d);
    for (v, &image) in map.iter().enumerate() {
        g.view_mut((image * d, v * d), (d, d)).copy_from(s);
    }
    &g * w * g.adjoint()
}

#[test]
fn symmetric_line_walk_is_mirror_invariant() {
    let mut rng = rng(11);
    let p = GroupPresentation::free_abelian(1, false).unwrap();
    let r = GraphRealization::realize(&p, &RealizationParams::Torus { side: 7 }).unwrap();
    let mirror = lattice_map(&r, |x| vec![-x[0]]);
    for _ in 0..20 {
        let (theta, alpha, phase) = (angle(&mut rng), angle(&mut rng), angle(&mut rng));
        let w = build_full_operator(&coins::symmetric_1d(&p, theta, alpha, phase).unwrap(), &r).unwrap();
        let s = coins::symmetric_1d_mirror(alpha);
        assert!(linalg::unitarity_defect(&s) < 1e-15);
        assert!(linalg::max_abs(&(conjugate(&w, &s, &mirror) - &w)) < 1e-13);
    }
    // a generic line walk has no such symmetry
    let generic = coins::free_projector_coin(
        &p,
        &linalg::random_unitary(2, &mut rng),
        &ProjectorPartition::singletons(&p),
    )
    .unwrap();
    let w = build_full_operator(&generic, &r).unwrap();
    assert!(linalg::max_abs(&(conjugate(&w, &coins::symmetric_1d_mirror(0.3), &mirror) - &w)) > 1e-3);
}

#[test]
fn symmetric_square_walk_is_invariant_under_the_square_group() {
    let mut rng = rng(12);
    let p = GroupPresentation::free_abelian(2, false).unwrap();
    let r = GraphRealization::realize(&p, &RealizationParams::Torus { side: 5 }).unwrap();
    let maps = [
        lattice_map(&r, |x| vec![-x[0], x[1]]),
        lattice_map(&r, |x| vec![-x[1], x[0]]),
    ];
    for _ in 0..10 {
        let (a, b, cc) = random_symmetric_abc(&mut rng);
        let d = linalg::random_diagonal_unitary(4, &mut rng);
        let w = build_full_operator(&coins::abelian2d_dim4_symmetric(a, b, cc, &d).unwrap(), &r).unwrap();
        for (sigma, map) in coins::square_symmetry_permutations().iter().zip(&maps) {
            // the internal basis is labelled by generators, so the symmetry
            // permutes it the same way, seen through D
            let mut perm = ComplexMatrix::zeros(4, 4);
            for (k, &img) in sigma.iter().enumerate() {
                perm[(img, k)] = c(1.0, 0.0);
            }
            let s = d.adjoint() * perm * &d;
            assert!(linalg::max_abs(&(conjugate(&w, &s, map) - &w)) < 1e-13);
        }
    }
}

#[test]
fn clifford_walk_with_identity_never_reaches_the_antipode() {
    // words reaching 1…1 use every σᵢ an odd number of times; anticommutation
    // makes their signed sum vanish
    for n in [2usize, 3, 4, 5] {
        let set = coins::hypercube_clifford(n, &linalg::identity(1 << (n / 2))).unwrap();
        let trace = walk::antipodal_probability(&set, n, 16, None).unwrap();
        assert!(trace.iter().all(|&(_, p)| p < 1e-28), "n = {n}: {trace:?}");
    }
    let mut rng = rng(14);
    let set = coins::hypercube_clifford(3, &linalg::random_unitary(2, &mut rng)).unwrap();
    let trace = walk::antipodal_probability(&set, 3, 16, None).unwrap();
    assert!(trace.iter().any(|&(_, p)| p > 1e-3));
}

#[test]
fn grover_walk_hits_the_antipode_of_the_cube() {
    let p = GroupPresentation::hypercube(3).unwrap();
    let grover = coins::standard_coin(coins::StandardCoin::Grover, 3).unwrap();
    let set = coins::free_projector_coin(&p, &grover, &ProjectorPartition::singletons(&p)).unwrap();
    let trace = walk::antipodal_probability(&set, 3, 10, None).unwrap();
    let peak = trace.iter().map(|x| x.1).fold(0.0, f64::max);
    assert!(peak > 0.5, "{trace:?}");
    // bipartite graph, odd antipode
    assert!(trace.iter().filter(|x| x.0 % 2 == 0).all(|x| x.1 == 0.0));
}

#[test]
fn antipodal_trace_matches_a_manual_walk() {
    let mut rng = rng(15);
    let set = random_clifford(4, &mut rng);
    let v: Vec<C64> = linalg::random_unitary(set.dim(), &mut rng)
        .column(0)
        .iter()
        .copied()
        .collect();
    let trace = walk::antipodal_probability(&set, 4, 12, Some(&v)).unwrap();
    let p = GroupPresentation::hypercube(4).unwrap();
    let r = GraphRealization::realize(&p, &RealizationParams::Hypercube).unwrap();
    // dense operator powers as the reference
    let w = build_full_operator(&set, &r).unwrap();
    let mut psi = nalgebra::DVector::<C64>::zeros(16 * set.dim());
    psi.rows_mut(0, set.dim()).copy_from_slice(&v);
    for &(t, prob) in &trace {
        psi = &w * psi;
        let at = psi.rows(15 * set.dim(), set.dim()).norm_squared();
        assert!((at - prob).abs() < 1e-13, "t = {t}");
    }
}

#[test]
fn reports_are_deterministic() {
    let mut a = rng(16);
    let mut b = rng(16);
    for family in FAMILIES {
        let x = sample(family, &mut a);
        let y = sample(family, &mut b);
        assert_eq!(
            check_cayley_conditions(&x, 1e-10).to_json(),
            check_cayley_conditions(&y, 1e-10).to_json()
        );
        assert_eq!(x.to_json(), y.to_json());
    }
}
