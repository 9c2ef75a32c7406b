//! Coin sets `{M_δ}` and the constructors for every explicit coin family.
//!
//! A [`CoinSet`] assigns one `d × d` matrix to each entry of the
//! presentation's Δ; the walk operator is `W = Σ_δ M_δ ⊗ T_δ`.

mod clifford;
mod families;
pub mod registry;
mod standard;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GeneratorSymbol, GroupPresentation};
use crate::linalg::{self, ComplexMatrix};

pub use clifford::{clifford_generators, hypercube_clifford, MAX_CLIFFORD_GENERATORS};
pub use families::{
    abelian2d_dim2, abelian2d_dim4_rank2, abelian2d_dim4_symmetric, abelian3d_dim4, abelian_paired,
    free_projector_coin, half_step_factors, lazy_1d_dim2, lazy_1d_dim3, scalar_1d, square_symmetry_permutations,
    symmetric_1d, symmetric_1d_mirror, symmetric_u0, Abelian3dParams, ScalarSign,
};
pub use standard::{standard_coin, StandardCoin};

#[derive(Clone, Debug)]
pub struct CoinSet {
    dim: usize,
    presentation: GroupPresentation,
    /// Aligned with `presentation.delta()`.
    coins: Vec<ComplexMatrix>,
}

impl CoinSet {
    /// Coins listed in Δ order.
    pub fn new(presentation: GroupPresentation, coins: Vec<ComplexMatrix>) -> Result<Self> {
        let k = presentation.delta().len();
        if coins.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: coins.len(),
            });
        }
        let dim = coins[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidParameter("coin dimension must be positive".into()));
        }
        for (sym, m) in presentation.delta().iter().zip(&coins) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if m.nrows() != dim { m.nrows() } else { m.ncols() },
                });
            }
            linalg::ensure_finite(m, &format!("coin for `{}`", sym.name))?;
        }
        Ok(Self {
            dim,
            presentation,
            coins,
        })
    }

    /// Coins keyed by generator name; every Δ entry needs exactly one.
    pub fn from_named(presentation: GroupPresentation, named: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        let mut by_name: BTreeMap<String, ComplexMatrix> = BTreeMap::new();
        for (name, m) in named {
            if presentation.delta_index(&name).is_none() {
                return Err(Error::UnknownSymbol(name));
            }
            if by_name.insert(name.clone(), m).is_some() {
                return Err(Error::Format(format!("generator `{name}` has two coins")));
            }
        }
        let coins = presentation
            .delta()
            .iter()
            .map(|s| {
                by_name
                    .remove(&s.name)
                    .ok_or_else(|| Error::Format(format!("no coin for generator `{}`", s.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(presentation, coins)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn coins(&self) -> &[ComplexMatrix] {
        &self.coins
    }

    pub fn coin(&self, name: &str) -> Option<&ComplexMatrix> {
        self.presentation.delta_index(name).map(|i| &self.coins[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorSymbol, &ComplexMatrix)> {
        self.presentation.delta().iter().zip(&self.coins)
    }

    /// `Σ_δ M_δ`.
    pub fn coin_sum(&self) -> ComplexMatrix {
        self.coins
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, m| acc + m)
    }

    pub fn approx_eq(&self, other: &CoinSet, tol: f64) -> bool {
        self.presentation == other.presentation
            && self.dim == other.dim
            && self
                .coins
                .iter()
                .zip(&other.coins)
                .all(|(a, b)| linalg::approx_eq(a, b, tol))
    }

    pub fn to_json(&self) -> String {
        let doc = CoinSetDoc {
            dim: self.dim,
            presentation: self.presentation.spec(),
            coins: self
                .iter()
                .map(|(s, m)| CoinDoc {
                    gen: s.name.clone(),
                    matrix: linalg::matrix_to_rows(m),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("coin sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CoinSetDoc = serde_json::from_str(text)?;
        let presentation = GroupPresentation::parse(&doc.presentation)?;
        let named = doc
            .coins
            .into_iter()
            .map(|c| Ok((c.gen, linalg::matrix_from_rows(&c.matrix)?)))
            .collect::<Result<Vec<_>>>()?;
        let set = Self::from_named(presentation, named)?;
        if set.dim != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                found: set.dim,
            });
        }
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoinSetDoc {
    dim: usize,
    presentation: String,
    coins: Vec<CoinDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoinDoc {
    gen: String,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// A complete family of coordinate projectors, one block of basis indices
/// per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorPartition {
    dim: usize,
    blocks: Vec<(String, Vec<usize>)>,
}

impl ProjectorPartition {
    /// Blocks must be nonempty, pairwise disjoint and cover `0..dim`.
    pub fn new(dim: usize, blocks: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let mut covered = BTreeSet::new();
        let mut names = BTreeSet::new();
        for (name, idx) in &blocks {
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidPartition(format!("generator `{name}` has two blocks")));
            }
            if idx.is_empty() {
                return Err(Error::InvalidPartition(format!("block for `{name}` is empty")));
            }
            for &k in idx {
                if k >= dim {
                    return Err(Error::InvalidPartition(format!("index {k} out of range 0..{dim}")));
                }
                if !covered.insert(k) {
                    return Err(Error::InvalidPartition(format!("index {k} appears in two blocks")));
                }
            }
        }
        if covered.len() != dim {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {} of {dim} basis vectors",
                covered.len()
            )));
        }
        Ok(Self { dim, blocks })
    }

    /// One basis vector per Δ entry, in Δ order.
    pub fn singletons(presentation: &GroupPresentation) -> Self {
        let blocks = presentation
            .delta()
            .iter()
            .enumerate()
            .map(|(k, s)| (s.name.clone(), vec![k]))
            .collect();
        Self::new(presentation.delta().len(), blocks).expect("singleton partition is complete")
    }

    /// Consecutive blocks in Δ order; earlier generators get the remainder.
    pub fn contiguous(presentation: &GroupPresentation, dim: usize) -> Result<Self> {
        let k = presentation.delta().len();
        if dim < k {
            return Err(Error::InvalidPartition(format!(
                "dimension {dim} is smaller than |Δ| = {k}"
            )));
        }
        let mut start = 0;
        let blocks = presentation
            .delta()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let len = dim / k + usize::from(i < dim % k);
                let block = (start..start + len).collect();
                start += len;
                (s.name.clone(), block)
            })
            .collect();
        Self::new(dim, blocks)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, name: &str) -> Option<&[usize]> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn blocks(&self) -> &[(String, Vec<usize>)] {
        &self.blocks
    }

    pub fn projector(&self, name: &str) -> Option<ComplexMatrix> {
        self.block(name).map(|b| linalg::coordinate_projector(self.dim, b))
    }
}
