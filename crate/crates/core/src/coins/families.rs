//! Explicit coin families.
//!
//! Generator order in the free-abelian presentations is
//! `d1, d1^-1, d2, d2^-1, …`; every constructor below assigns its matrices
//! by name, so the order only affects report and file layout.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::coins::{CoinSet, ProjectorPartition};
use crate::error::{Error, Result};
use crate::group::{GroupKind, GroupPresentation};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector, C64, DEFAULT_MATRIX_TOL, ZERO};

/// Tolerance for the unitarity of the symmetric `(a, b, c)` matrix.
const U0_TOL: f64 = 1e-10;

fn check_square(u: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if u.nrows() != dim { u.nrows() } else { u.ncols() },
        });
    }
    linalg::ensure_unitary(u, what, DEFAULT_MATRIX_TOL)
}

/// `M_δ = U P_δ` with `{P_δ}` a complete family of coordinate projectors.
pub fn free_projector_coin(
    presentation: &GroupPresentation,
    u: &ComplexMatrix,
    partition: &ProjectorPartition,
) -> Result<CoinSet> {
    let dim = partition.dim();
    check_square(u, dim, "U")?;
    let delta = presentation.delta();
    if partition.blocks().len() != delta.len() {
        return Err(Error::InvalidPartition(format!(
            "partition has {} blocks but Δ has {} generators",
            partition.blocks().len(),
            delta.len()
        )));
    }
    let coins = delta
        .iter()
        .map(|s| {
            partition
                .projector(&s.name)
                .map(|p| u * p)
                .ok_or_else(|| Error::InvalidPartition(format!("no block for generator `{}`", s.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    CoinSet::new(presentation.clone(), coins)
}

/// Δ indices of `(δ, δ⁻¹, e)` for a one-generator presentation.
fn one_dim_indices(p: &GroupPresentation, identity: bool) -> Result<(usize, usize, Option<usize>)> {
    let delta = p.delta();
    let expected = if identity { 3 } else { 2 };
    let fwd = delta.iter().position(|s| s.base.is_some() && !s.is_inverse);
    let back = delta.iter().position(|s| s.base.is_some() && s.is_inverse);
    let e = delta.iter().position(|s| s.is_identity());
    match (fwd, back, e) {
        (Some(f), Some(b), e)
            if p.rank() == 1
                && delta.len() == expected
                && e.is_some() == identity
                && !matches!(p.kind(), GroupKind::Hypercube) =>
        {
            Ok((f, b, e))
        }
        _ => Err(Error::IncompatiblePresentation(format!(
            "expected Δ = {{δ, δ^-1{}}}, got {}",
            if identity { ", e" } else { "" },
            p.spec()
        ))),
    }
}

/// Lazy one-dimensional walk with a three-dimensional internal space:
/// `M_δ = U P₁`, `M_{δ⁻¹} = U P₂`, `M_e = U P₃`.
pub fn lazy_1d_dim3(presentation: &GroupPresentation, u: &ComplexMatrix) -> Result<CoinSet> {
    let (f, b, e) = one_dim_indices(presentation, true)?;
    let e = e.expect("identity requested");
    let names = |i: usize| presentation.delta()[i].name.clone();
    let partition = ProjectorPartition::new(3, vec![(names(f), vec![0]), (names(b), vec![1]), (names(e), vec![2])])?;
    free_projector_coin(presentation, u, &partition)
}

/// Lazy one-dimensional walk with a two-dimensional internal space:
/// `M_δ = cos θ U P₁`, `M_{δ⁻¹} = cos θ U P₂`, `M_e = sin θ U R` where
/// `R = [[0, 1], [-1, 0]]`.
pub fn lazy_1d_dim2(presentation: &GroupPresentation, u: &ComplexMatrix, theta: f64) -> Result<CoinSet> {
    let (f, b, e) = one_dim_indices(presentation, true)?;
    let e = e.expect("identity requested");
    check_square(u, 2, "U")?;
    let r = linalg::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let (cos, sin) = (c(theta.cos(), 0.0), c(theta.sin(), 0.0));
    let mut coins = vec![ComplexMatrix::zeros(2, 2); 3];
    coins[f] = u * linalg::coordinate_projector(2, &[0]) * cos;
    coins[b] = u * linalg::coordinate_projector(2, &[1]) * cos;
    coins[e] = u * r * sin;
    CoinSet::new(presentation.clone(), coins)
}

/// Left-right symmetric one-dimensional walk,
/// `U = e^{iφ₀} [[cos θ/2, e^{iα} sin θ/2], [-e^{-iα} sin θ/2, cos θ/2]]`.
pub fn symmetric_1d(presentation: &GroupPresentation, theta: f64, alpha: f64, global_phase: f64) -> Result<CoinSet> {
    let (f, b, _) = one_dim_indices(presentation, false)?;
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let u = linalg::from_rows(&[
        &[c(ch, 0.0), linalg::phase(alpha) * sh],
        &[-linalg::phase(-alpha) * sh, c(ch, 0.0)],
    ]) * linalg::phase(global_phase);
    let mut coins = vec![ComplexMatrix::zeros(2, 2); 2];
    coins[f] = &u * linalg::coordinate_projector(2, &[0]);
    coins[b] = &u * linalg::coordinate_projector(2, &[1]);
    CoinSet::new(presentation.clone(), coins)
}

/// Internal unitary `S` realizing the mirror symmetry of [`symmetric_1d`]:
/// conjugating by `S ⊗ Π` (with `Π : x ↦ -x`) leaves the walk unchanged.
pub fn symmetric_1d_mirror(alpha: f64) -> ComplexMatrix {
    linalg::from_rows(&[&[ZERO, -linalg::phase(2.0 * alpha)], &[c(1.0, 0.0), ZERO]])
}

/// Two-dimensional walk with a two-dimensional internal space:
/// `M_{d1} = U P₁ V P₁`, `M_{d1⁻¹} = U P₂ V P₂`, `M_{d2} = U P₁ V P₂`,
/// `M_{d2⁻¹} = U P₂ V P₁`.
pub fn abelian2d_dim2(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<CoinSet> {
    check_square(u, 2, "U")?;
    check_square(v, 2, "V")?;
    let p = GroupPresentation::free_abelian(2, false)?;
    let p1 = linalg::coordinate_projector(2, &[0]);
    let p2 = linalg::coordinate_projector(2, &[1]);
    let coins = vec![
        u * &p1 * v * &p1,
        u * &p2 * v * &p2,
        u * &p1 * v * &p2,
        u * &p2 * v * &p1,
    ];
    CoinSet::new(p, coins)
}

/// The two half-step factors of the [`abelian2d_dim2`] walk on a torus of
/// the given side, returned as `(outer, inner)` with `W = outer · inner`.
///
/// `inner` maps the lattice sites `(x, y)` to the shifted sites
/// `(x + ½, y + ½)` using `V` and the diagonal half-steps `(±½, ∓½)`;
/// `outer` maps them back with `U` and the half-steps `±(½, ½)`. Shifted
/// site `(x + ½, y + ½)` has the same index as `(x, y)`; both use the
/// vertex-major layout of the full operator.
pub fn half_step_factors(u: &ComplexMatrix, v: &ComplexMatrix, side: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_square(u, 2, "U")?;
    check_square(v, 2, "V")?;
    if side == 0 {
        return Err(Error::InvalidParameter("side must be positive".into()));
    }
    let n = side * side;
    let site = |x: usize, y: usize| (x % side) * side + (y % side);
    let mut inner = ComplexMatrix::zeros(2 * n, 2 * n);
    let mut outer = ComplexMatrix::zeros(2 * n, 2 * n);
    for x in 0..side {
        for y in 0..side {
            let from = site(x, y);
            // P₁: (+½, −½) lands on shifted site (x, y − 1); P₂: (−½, +½) on (x − 1, y)
            let inner_targets = [site(x, y + side - 1), site(x + side - 1, y)];
            // P₁: (+½, +½) lands on lattice site (x + 1, y + 1); P₂: (−½, −½) on (x, y)
            let outer_targets = [site(x + 1, y + 1), site(x, y)];
            for j in 0..2 {
                for i in 0..2 {
                    inner[(2 * inner_targets[j] + i, 2 * from + j)] = v[(i, j)];
                    outer[(2 * outer_targets[j] + i, 2 * from + j)] = u[(i, j)];
                }
            }
        }
    }
    Ok((outer, inner))
}

/// Block-diagonal walk on ℤⁿ with internal dimension `n` (even) or `n + 1`
/// (odd). Block `k` carries the [`abelian2d_dim2`] construction for the
/// generator pair `(d_{2k+1}, d_{2k+2})`; for odd `n` the last generator
/// gets a one-dimensional walk block `U P₁`, `U P₂`.
pub fn abelian_paired(
    n: usize,
    pairs: &[(ComplexMatrix, ComplexMatrix)],
    tail: Option<&ComplexMatrix>,
) -> Result<CoinSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    if pairs.len() != n / 2 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} needs {} (U, V) pairs, got {}",
            n / 2,
            pairs.len()
        )));
    }
    if (n % 2 == 1) != tail.is_some() {
        return Err(Error::InvalidParameter(format!(
            "a one-dimensional tail coin is required exactly when n is odd (n = {n})"
        )));
    }
    let dim = n + n % 2;
    let p = GroupPresentation::free_abelian(n, false)?;
    let mut coins = vec![ComplexMatrix::zeros(dim, dim); 2 * n];
    for (k, (u, v)) in pairs.iter().enumerate() {
        let block = abelian2d_dim2(u, v)?;
        for (local, m) in block.coins().iter().enumerate() {
            // local order d1, d1^-1, d2, d2^-1 maps to generators 2k, 2k+1
            let global = 4 * k + local;
            coins[global].view_mut((2 * k, 2 * k), (2, 2)).copy_from(m);
        }
    }
    if let Some(u) = tail {
        check_square(u, 2, "tail U")?;
        let off = n - 1;
        let p1 = linalg::coordinate_projector(2, &[0]);
        let p2 = linalg::coordinate_projector(2, &[1]);
        coins[2 * off].view_mut((off, off), (2, 2)).copy_from(&(u * p1));
        coins[2 * off + 1].view_mut((off, off), (2, 2)).copy_from(&(u * p2));
    }
    CoinSet::new(p, coins)
}

fn frame_columns(basis: &ComplexMatrix, what: &str) -> Result<Vec<ComplexVector>> {
    if basis.nrows() != 4 || basis.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: basis.nrows(),
        });
    }
    let defect = linalg::identity_defect(&(basis.adjoint() * basis));
    if defect > DEFAULT_MATRIX_TOL {
        return Err(Error::NotUnitary {
            what: format!("{what} (frame not orthonormal)"),
            defect,
        });
    }
    Ok((0..4).map(|k| basis.column(k).into_owned()).collect())
}

/// Rank-two solution on ℤ² with a four-dimensional internal space, built
/// from two orthonormal frames given as matrix columns.
pub fn abelian2d_dim4_rank2(u_basis: &ComplexMatrix, v_basis: &ComplexMatrix) -> Result<CoinSet> {
    let u = frame_columns(u_basis, "u basis")?;
    let v = frame_columns(v_basis, "v basis")?;
    let d = |i: usize, j: usize| linalg::dyad(&u[i - 1], &v[j - 1]);
    let s = c(FRAC_1_SQRT_2, 0.0);
    let coins = vec![
        (d(1, 1) + d(2, 3)) * s,
        (-d(3, 4) + d(4, 2)) * s,
        (d(1, 2) + d(3, 3)) * s,
        (-d(4, 1) + d(2, 4)) * s,
    ];
    CoinSet::new(GroupPresentation::free_abelian(2, false)?, coins)
}

/// `U₀` with rows `[a b c c; b a c c; c c a b; c c b a]`.
pub fn symmetric_u0(a: C64, b: C64, cc: C64) -> ComplexMatrix {
    linalg::from_rows(&[&[a, b, cc, cc], &[b, a, cc, cc], &[cc, cc, a, b], &[cc, cc, b, a]])
}

/// Square-symmetric walk on ℤ²: `M_δ = P_δ D⁻¹ U₀ D` with singleton
/// projectors in the order `(d1, d1^-1, d2, d2^-1)`.
pub fn abelian2d_dim4_symmetric(a: C64, b: C64, cc: C64, d: &ComplexMatrix) -> Result<CoinSet> {
    if d.nrows() != 4 || d.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: d.nrows(),
        });
    }
    for i in 0..4 {
        for j in 0..4 {
            let z = d[(i, j)];
            let bad = if i == j {
                (z.norm() - 1.0).abs() > DEFAULT_MATRIX_TOL
            } else {
                z.norm() > 0.0
            };
            if bad {
                return Err(Error::InvalidParameter("D must be a diagonal unitary".into()));
            }
        }
    }
    let u0 = symmetric_u0(a, b, cc);
    linalg::ensure_finite(&u0, "U0")?;
    let gram = &u0 * u0.adjoint();
    for i in 0..4 {
        for j in i..4 {
            let target = if i == j { 1.0 } else { 0.0 };
            let z = gram[(i, j)];
            if (z - c(target, 0.0)).norm() > U0_TOL {
                return Err(Error::NotUnitary {
                    what: format!("U0 (rows {} and {} have inner product {z})", i + 1, j + 1),
                    defect: (z - c(target, 0.0)).norm(),
                });
            }
        }
    }
    let u = d.adjoint() * u0 * d;
    let coins = (0..4).map(|k| linalg::coordinate_projector(4, &[k]) * &u).collect();
    CoinSet::new(GroupPresentation::free_abelian(2, false)?, coins)
}

/// Index permutations of `(d1, d1^-1, d2, d2^-1)` for the two generators of
/// the square's symmetry group: reflection `x ↦ -x` and the quarter turn
/// `(x, y) ↦ (-y, x)`. Entry `k` is the image of generator `k`.
pub fn square_symmetry_permutations() -> [[usize; 4]; 2] {
    [[1, 0, 2, 3], [2, 3, 1, 0]]
}

/// Parameters of the rank-two family on ℤ³.
#[derive(Clone, Debug)]
pub struct Abelian3dParams {
    pub lambda: C64,
    pub mu: C64,
    /// Must be unimodular.
    pub nu: C64,
    /// Unimodular phases of `α₁, β₁, γ₁, δ₁`.
    pub phases: [C64; 4],
    pub u_basis: ComplexMatrix,
    pub v_basis: ComplexMatrix,
}

impl Abelian3dParams {
    /// Unit phases and canonical frames.
    pub fn canonical(lambda: C64, mu: C64, nu: C64) -> Self {
        Self {
            lambda,
            mu,
            nu,
            phases: [c(1.0, 0.0); 4],
            u_basis: linalg::identity(4),
            v_basis: linalg::identity(4),
        }
    }
}

/// Six rank-two coins on ℤ³ with a four-dimensional internal space.
pub fn abelian3d_dim4(params: &Abelian3dParams) -> Result<CoinSet> {
    let Abelian3dParams {
        lambda,
        mu,
        nu,
        phases,
        u_basis,
        v_basis,
    } = params;
    if (nu.norm() - 1.0).abs() > DEFAULT_MATRIX_TOL {
        return Err(Error::InvalidParameter(format!("|nu| must be 1, got {}", nu.norm())));
    }
    if let Some(p) = phases.iter().find(|p| (p.norm() - 1.0).abs() > DEFAULT_MATRIX_TOL) {
        return Err(Error::InvalidParameter(format!("phase {p} is not unimodular")));
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() || !mu.re.is_finite() || !mu.im.is_finite() {
        return Err(Error::InvalidParameter("lambda and mu must be finite".into()));
    }
    let u = frame_columns(u_basis, "u basis")?;
    let v = frame_columns(v_basis, "v basis")?;
    let modulus = 1.0 / (1.0 + lambda.norm_sqr() + mu.norm_sqr()).sqrt();
    let [a1, b1, g1, d1] = phases.map(|p| p * modulus);
    let (l, m, n) = (*lambda, *mu, *nu);
    let a2 = l * a1;
    let a3 = m * a1;
    let b2 = l.conj() * n * b1;
    let b3 = -m.conj() * n * b1;
    let g2 = -l * n.conj() * g1;
    let g3 = -m.conj() * g1;
    let d2 = -l.conj() * d1;
    let d3 = m * n.conj() * d1;
    let dy = |i: usize, j: usize| linalg::dyad(&u[i - 1], &v[j - 1]);
    let coins = vec![
        dy(1, 2) * a1 + dy(2, 1) * b1,
        dy(3, 4) * g1 + dy(4, 3) * d1,
        dy(1, 3) * a2 + dy(3, 1) * g2,
        dy(2, 4) * b2 + dy(4, 2) * d2,
        dy(1, 4) * a3 + dy(4, 1) * d3,
        dy(2, 3) * b3 + dy(3, 2) * g3,
    ];
    CoinSet::new(GroupPresentation::free_abelian(3, false)?, coins)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarSign {
    Plus,
    Minus,
}

impl ScalarSign {
    pub fn value(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Scalar walk on `ℤ²/(d1² = d2²)`:
/// `M_{d1} = e^{iθ}/2`, `M_{d2} = ±e^{iθ}/2`, `M_{d1⁻¹} = e^{iφ}/2`,
/// `M_{d2⁻¹} = ∓e^{iφ}/2`.
pub fn scalar_1d(theta: f64, phi: f64, sign: ScalarSign) -> Result<CoinSet> {
    let p = GroupPresentation::abelian_with_relation();
    let s = sign.value();
    let (fwd, back) = (linalg::phase(theta) * 0.5, linalg::phase(phi) * 0.5);
    let scalar = |z: C64| ComplexMatrix::from_element(1, 1, z);
    let mut coins = vec![ComplexMatrix::zeros(1, 1); 4];
    for (k, sym) in p.delta().iter().enumerate() {
        coins[k] = match (sym.base, sym.is_inverse) {
            (Some(0), false) => scalar(fwd),
            (Some(0), true) => scalar(back),
            (Some(1), false) => scalar(fwd * s),
            (Some(1), true) => scalar(back * -s),
            _ => unreachable!("relation presentation has no identity"),
        };
    }
    CoinSet::new(p, coins)
}
