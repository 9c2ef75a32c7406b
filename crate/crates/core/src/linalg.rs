//! Dense complex matrix helpers.
//!
//! Every matrix in the crate is a [`ComplexMatrix`] (`nalgebra::DMatrix<Complex64>`).
//! Comparisons use the max-entry magnitude `‖A‖_max = max_ij |a_ij|`, which is
//! what the unitarity reports record.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Absolute tolerance used for matrix equality and for validating
/// caller-supplied unitaries.
pub const DEFAULT_MATRIX_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{i theta}`
#[inline]
pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs_diff(a, b) <= tol
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// `‖A - I‖_max`
pub fn identity_defect(a: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, j), z) in a.iter().enumerate().map(|(k, z)| ((k % a.nrows(), k / a.nrows()), z)) {
        let target = if i == j { ONE } else { ZERO };
        worst = worst.max((z - target).norm());
    }
    worst
}

/// `max(‖A†A - I‖_max, ‖AA† - I‖_max)`; infinite for non-square input.
pub fn unitarity_defect(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let left = identity_defect(&(a.adjoint() * a));
    let right = identity_defect(&(a * a.adjoint()));
    left.max(right)
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    unitarity_defect(a) <= tol
}

pub fn ensure_finite(a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} has non-finite entries")))
    }
}

/// Rejects (never renormalizes) a matrix that is not unitary to `tol`.
pub fn ensure_unitary(a: &ComplexMatrix, what: &str, tol: f64) -> Result<()> {
    ensure_finite(a, what)?;
    let defect = unitarity_defect(a);
    if defect <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary {
            what: what.to_string(),
            defect,
        })
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Orthogonal projector onto the span of the given standard basis vectors.
pub fn coordinate_projector(dim: usize, indices: &[usize]) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for &k in indices {
        p[(k, k)] = ONE;
    }
    p
}

/// The dyad `|u⟩⟨v|`.
pub fn dyad(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

pub fn basis_vector(dim: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[k] = ONE;
    v
}

pub fn from_rows(rows: &[&[C64]]) -> ComplexMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j], 0.0))
}

pub fn pauli_x() -> ComplexMatrix {
    from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    from_real_rows(&[&[h, h], &[h, -h]])
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    phase(rng.random_range(0.0..std::f64::consts::TAU))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let (mut q, r) = g.qr().unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Diagonal unitary with independent uniform phases.
pub fn random_diagonal_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(dim, dim);
    for k in 0..dim {
        d[(k, k)] = random_phase(rng);
    }
    d
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank: number of singular values above `tol`.
pub fn rank(a: &ComplexMatrix, tol: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol).count()
}

/// Eigenvalues of a general square complex matrix, read off the diagonal
/// of its complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<C64> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let (_, t) = a.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

/// Largest distance between matched elements of two multisets of complex
/// numbers, using greedy nearest matching after a lexicographic sort by
/// argument. Returns infinity if the sizes differ.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut remaining: Vec<C64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for z in a {
        let (k, d) = remaining
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        worst = worst.max(d);
        remaining.swap_remove(k);
    }
    worst
}

/// Row-major `[[[re, im], …], …]` form used by the JSON interchange files.
/// Signed zeros are written as `0.0`.
pub fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re + 0.0, m[(i, j)].im + 0.0])
                .collect()
        })
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::Format("matrix must have at least one entry".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    let m = ComplexMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j][0], rows[i][j][1]));
    ensure_finite(&m, "matrix")?;
    Ok(m)
}
