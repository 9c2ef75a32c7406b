use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};

/// Reference coins used in comparison experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardCoin {
    /// `2/d · J − I`
    Grover,
    /// `ω^{jk} / √d`
    Dft,
    Hadamard,
}

impl std::str::FromStr for StandardCoin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grover" => Ok(Self::Grover),
            "dft" => Ok(Self::Dft),
            "hadamard" => Ok(Self::Hadamard),
            _ => Err(Error::InvalidParameter(format!(
                "unknown standard coin `{s}` (expected grover, dft or hadamard)"
            ))),
        }
    }
}

pub fn standard_coin(kind: StandardCoin, d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("coin dimension must be ≥ 2, got {d}")));
    }
    match kind {
        StandardCoin::Grover => {
            let off = 2.0 / d as f64;
            Ok(ComplexMatrix::from_fn(d, d, |i, j| {
                c(if i == j { off - 1.0 } else { off }, 0.0)
            }))
        }
        StandardCoin::Dft => {
            let norm = 1.0 / (d as f64).sqrt();
            Ok(ComplexMatrix::from_fn(d, d, |j, k| {
                linalg::phase(TAU * ((j * k) % d) as f64 / d as f64) * norm
            }))
        }
        StandardCoin::Hadamard if d == 2 => Ok(linalg::hadamard()),
        StandardCoin::Hadamard => Err(Error::InvalidParameter(format!(
            "the Hadamard coin is 2×2, requested d = {d}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grover_entries() {
        let g = standard_coin(StandardCoin::Grover, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { -0.5 } else { 0.5 };
                assert!((g[(i, j)] - c(want, 0.0)).norm() < 1e-16);
            }
        }
    }

    #[test]
    fn dft_two_is_hadamard() {
        let f = standard_coin(StandardCoin::Dft, 2).unwrap();
        assert!(linalg::max_abs_diff(&f, &linalg::hadamard()) < 1e-15);
    }

    #[test]
    fn grover_three_is_unitary() {
        let g = standard_coin(StandardCoin::Grover, 3).unwrap();
        // direct multiplication, not the shared defect helper
        let prod = g.adjoint() * &g;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn invalid_dimensions() {
        assert!(standard_coin(StandardCoin::Grover, 1).is_err());
        assert!(standard_coin(StandardCoin::Hadamard, 3).is_err());
    }
}
