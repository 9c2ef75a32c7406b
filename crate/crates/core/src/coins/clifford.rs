//! Hermitian anticommuting matrices and the hypercube coin family built
//! from them.
//!
//! Generators follow the Jordan–Wigner pattern on `m = ⌊n/2⌋` qubits
//! (qubit 0 is the leftmost tensor factor):
//!
//! ```text
//! σ_{2k+1} = Z^{⊗k} ⊗ X ⊗ I^{⊗(m-k-1)}
//! σ_{2k+2} = Z^{⊗k} ⊗ Y ⊗ I^{⊗(m-k-1)}
//! ```
//!
//! For odd `n` the last generator is the chirality element
//! `σ_n = (-i)^m σ_1 σ_2 ⋯ σ_{2m}`, so three generators give exactly the Pauli
//! matrices `X, Y, Z` and the matrix size is the minimal `2^⌊n/2⌋`.

use crate::coins::CoinSet;
use crate::error::{Error, Result};
use crate::group::{GroupKind, GroupPresentation};
use crate::linalg::{self, c, ComplexMatrix};

pub const MAX_CLIFFORD_GENERATORS: usize = 24;

pub fn clifford_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 || n > MAX_CLIFFORD_GENERATORS {
        return Err(Error::InvalidParameter(format!(
            "number of Clifford generators must be in 1..={MAX_CLIFFORD_GENERATORS}, got {n}"
        )));
    }
    let m = n / 2;
    let (x, y, z) = (linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z());
    let id2 = linalg::identity(2);
    let chain = |k: usize, middle: &ComplexMatrix| {
        let mut acc = linalg::identity(1);
        for q in 0..m {
            let factor = if q < k {
                &z
            } else if q == k {
                middle
            } else {
                &id2
            };
            acc = linalg::kron(&acc, factor);
        }
        acc
    };
    let mut gens = Vec::with_capacity(n);
    for k in 0..m {
        gens.push(chain(k, &x));
        gens.push(chain(k, &y));
    }
    if n % 2 == 1 {
        let product = gens.iter().fold(linalg::identity(1 << m), |acc, g| acc * g);
        let scale = (0..m).fold(c(1.0, 0.0), |acc, _| acc * c(0.0, -1.0));
        gens.push(product * scale);
    }
    Ok(gens)
}

/// `M_{δᵢ} = σᵢ U / √n` on the `n`-dimensional hypercube.
pub fn hypercube_clifford(n: usize, u: &ComplexMatrix) -> Result<CoinSet> {
    let sigma = clifford_generators(n)?;
    let dim = sigma[0].nrows();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.nrows(),
        });
    }
    linalg::ensure_unitary(u, "U", linalg::DEFAULT_MATRIX_TOL)?;
    let presentation = GroupPresentation::hypercube(n)?;
    debug_assert_eq!(presentation.kind(), &GroupKind::Hypercube);
    let scale = c(1.0 / (n as f64).sqrt(), 0.0);
    let coins = sigma.iter().map(|s| s * u * scale).collect();
    CoinSet::new(presentation, coins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_generators_are_the_paulis() {
        let g = clifford_generators(3).unwrap();
        assert!(linalg::max_abs_diff(&g[0], &linalg::pauli_x()) < 1e-15);
        assert!(linalg::max_abs_diff(&g[1], &linalg::pauli_y()) < 1e-15);
        assert!(linalg::max_abs_diff(&g[2], &linalg::pauli_z()) < 1e-15);
    }

    #[test]
    fn one_generator_squares_to_identity() {
        let g = clifford_generators(1).unwrap();
        assert_eq!(g.len(), 1);
        assert!(linalg::identity_defect(&(&g[0] * &g[0])) < 1e-15);
    }

    #[test]
    fn sizes_are_minimal() {
        for n in 1..=9 {
            let g = clifford_generators(n).unwrap();
            assert_eq!(g.len(), n);
            assert_eq!(g[0].nrows(), 1 << (n / 2), "n={n}");
        }
    }

    #[test]
    fn five_generators_anticommute() {
        let g = clifford_generators(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let anti = &g[i] * &g[j] + &g[j] * &g[i];
                let target = if i == j {
                    linalg::identity(4) * c(2.0, 0.0)
                } else {
                    ComplexMatrix::zeros(4, 4)
                };
                assert!(linalg::max_abs_diff(&anti, &target) < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(clifford_generators(0).is_err());
        assert!(clifford_generators(25).is_err());
    }

    #[test]
    fn hypercube_three_with_identity_is_scaled_paulis() {
        let set = hypercube_clifford(3, &linalg::identity(2)).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let want = [linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()];
        for (m, p) in set.coins().iter().zip(&want) {
            assert!(linalg::max_abs_diff(m, &(p * c(s, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(matches!(
            hypercube_clifford(4, &linalg::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
