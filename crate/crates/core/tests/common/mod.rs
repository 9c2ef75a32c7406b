#![allow(dead_code)]

use qwalk_core::coins::{self, Abelian3dParams, CoinSet, ProjectorPartition, ScalarSign};
use qwalk_core::group::{GroupKind, GroupPresentation, RealizationParams};
use qwalk_core::linalg::{self, c, ComplexMatrix, C64};
use qwalk_core::GraphRealization;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}

pub const FAMILIES: [&str; 11] = [
    "free_projector_coin",
    "lazy_1d_dim3",
    "lazy_1d_dim2",
    "symmetric_1d",
    "abelian2d_dim2",
    "abelian_paired",
    "abelian2d_dim4_rank2",
    "abelian2d_dim4_symmetric",
    "abelian3d_dim4",
    "scalar_1d",
    "hypercube_clifford",
];

const FREE_PRESENTATIONS: [&str; 6] = [
    "free:a,b",
    "free:a,b,c",
    "free:a,a^-1,b",
    "free:a,a^-1,b,b^-1",
    "cyclicprod:q=2,2,3",
    "cyclicprod:q=2,3",
];

const ANY_PRESENTATIONS: [&str; 5] = [
    "abelian:n=2",
    "abelian:n=1,lazy",
    "hypercube:n=3",
    "abelianrel:sq",
    "free:a,b",
];

/// Every basis index lands in some block; each generator gets at least one.
pub fn random_partition<R: Rng>(p: &GroupPresentation, dim: usize, rng: &mut R) -> ProjectorPartition {
    let k = p.delta().len();
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = idx[..k].iter().map(|&i| vec![i]).collect();
    for &i in &idx[k..] {
        blocks[rng.random_range(0..k)].push(i);
    }
    let named = p.delta().iter().map(|s| s.name.clone()).zip(blocks).collect();
    ProjectorPartition::new(dim, named).unwrap()
}

pub fn random_free_projector<R: Rng>(spec: &str, rng: &mut R) -> CoinSet {
    let p = GroupPresentation::parse(spec).unwrap();
    let dim = p.delta().len() + rng.random_range(0..=2);
    let part = random_partition(&p, dim, rng);
    coins::free_projector_coin(&p, &linalg::random_unitary(dim, rng), &part).unwrap()
}

/// Unitary `(a, b, c)` matrix from its three eigenvalues
/// `a+b+2c`, `a+b-2c`, `a-b`.
pub fn random_symmetric_abc<R: Rng>(rng: &mut R) -> (C64, C64, C64) {
    let (e1, e2, e3) = (
        linalg::random_phase(rng),
        linalg::random_phase(rng),
        linalg::random_phase(rng),
    );
    let s = (e1 + e2) * 0.5;
    ((s + e3) * 0.5, (s - e3) * 0.5, (e1 - e2) * 0.25)
}

pub fn random_3d_params<R: Rng>(rng: &mut R) -> Abelian3dParams {
    Abelian3dParams {
        lambda: linalg::random_complex(rng),
        mu: linalg::random_complex(rng),
        nu: linalg::random_phase(rng),
        phases: std::array::from_fn(|_| linalg::random_phase(rng)),
        u_basis: linalg::random_unitary(4, rng),
        v_basis: linalg::random_unitary(4, rng),
    }
}

pub fn random_paired<R: Rng>(n: usize, rng: &mut R) -> CoinSet {
    let pairs: Vec<(ComplexMatrix, ComplexMatrix)> = (0..n / 2)
        .map(|_| (linalg::random_unitary(2, rng), linalg::random_unitary(2, rng)))
        .collect();
    let tail = (n % 2 == 1).then(|| linalg::random_unitary(2, rng));
    coins::abelian_paired(n, &pairs, tail.as_ref()).unwrap()
}

pub fn random_clifford<R: Rng>(n: usize, rng: &mut R) -> CoinSet {
    let d = 1 << (n / 2);
    coins::hypercube_clifford(n, &linalg::random_unitary(d, rng)).unwrap()
}

/// One random member of a family.
pub fn sample<R: Rng>(family: &str, rng: &mut R) -> CoinSet {
    let line = GroupPresentation::free_abelian(1, false).unwrap();
    let lazy = GroupPresentation::free_abelian(1, true).unwrap();
    match family {
        "free_projector_coin" => {
            let pool: Vec<&str> = FREE_PRESENTATIONS.iter().chain(&ANY_PRESENTATIONS).copied().collect();
            random_free_projector(pool[rng.random_range(0..pool.len())], rng)
        }
        "lazy_1d_dim3" => coins::lazy_1d_dim3(&lazy, &linalg::random_unitary(3, rng)).unwrap(),
        "lazy_1d_dim2" => coins::lazy_1d_dim2(&lazy, &linalg::random_unitary(2, rng), angle(rng)).unwrap(),
        "symmetric_1d" => coins::symmetric_1d(&line, angle(rng), angle(rng), angle(rng)).unwrap(),
        "abelian2d_dim2" => {
            coins::abelian2d_dim2(&linalg::random_unitary(2, rng), &linalg::random_unitary(2, rng)).unwrap()
        }
        "abelian_paired" => random_paired(rng.random_range(2..=6), rng),
        "abelian2d_dim4_rank2" => {
            coins::abelian2d_dim4_rank2(&linalg::random_unitary(4, rng), &linalg::random_unitary(4, rng)).unwrap()
        }
        "abelian2d_dim4_symmetric" => {
            let (a, b, cc) = random_symmetric_abc(rng);
            coins::abelian2d_dim4_symmetric(a, b, cc, &linalg::random_diagonal_unitary(4, rng)).unwrap()
        }
        "abelian3d_dim4" => coins::abelian3d_dim4(&random_3d_params(rng)).unwrap(),
        "scalar_1d" => {
            let sign = if rng.random_bool(0.5) {
                ScalarSign::Plus
            } else {
                ScalarSign::Minus
            };
            coins::scalar_1d(angle(rng), angle(rng), sign).unwrap()
        }
        "hypercube_clifford" => random_clifford(rng.random_range(1..=6), rng),
        other => panic!("unknown family {other}"),
    }
}

fn random_perm_with_order_dividing<R: Rng>(degree: usize, q: Option<u32>, rng: &mut R) -> Vec<usize> {
    loop {
        let mut p: Vec<usize> = (0..degree).collect();
        p.shuffle(rng);
        let Some(q) = q else { return p };
        let mut acc: Vec<usize> = (0..degree).collect();
        for _ in 0..q {
            acc = acc.iter().map(|&i| p[i]).collect();
        }
        if acc.iter().enumerate().all(|(i, &j)| i == j) {
            return p;
        }
    }
}

/// A finite realization on which distinct Δ₂ elements stay distinct, with
/// `d·|X| ≤ max_total`.
pub fn realization_for<R: Rng>(coins: &CoinSet, max_total: usize, rng: &mut R) -> GraphRealization {
    let p = coins.presentation();
    let d = coins.dim();
    for _ in 0..1000 {
        let params = match p.kind() {
            GroupKind::FreeAbelian => RealizationParams::Torus {
                side: rng.random_range(5..=9),
            },
            GroupKind::Hypercube => RealizationParams::Hypercube,
            GroupKind::AbelianWithRelation => RealizationParams::Torus {
                side: 2 * rng.random_range(5..=8),
            },
            GroupKind::Free => RealizationParams::Permutations {
                images: (0..p.rank())
                    .map(|_| random_perm_with_order_dividing(5, None, rng))
                    .collect(),
            },
            GroupKind::CyclicFreeProduct(q) => RealizationParams::Permutations {
                images: q
                    .iter()
                    .map(|&qi| random_perm_with_order_dividing(5, Some(qi), rng))
                    .collect(),
            },
        };
        let Ok(r) = GraphRealization::realize(p, &params) else {
            continue;
        };
        if r.vertex_count() * d <= max_total && r.preserves_delta2() {
            return r;
        }
    }
    panic!("no admissible realization found for {}", p.spec());
}

/// Adds a visible non-unitary perturbation to one coin.
pub fn corrupt<R: Rng>(coins: &CoinSet, rng: &mut R) -> CoinSet {
    let mut ms = coins.coins().to_vec();
    let k = rng.random_range(0..ms.len());
    let d = coins.dim();
    ms[k] += ComplexMatrix::from_fn(d, d, |_, _| linalg::random_complex(rng) * c(0.2, 0.0));
    CoinSet::new(coins.presentation().clone(), ms).unwrap()
}
