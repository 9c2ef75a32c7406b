//! Local unitarity conditions and the brute-force operator oracle.
//!
//! On a Cayley graph `W = Σ_δ M_δ ⊗ T_δ` is unitary exactly when, for every
//! `u ∈ Δ₂`,
//!
//! ```text
//! left:  Σ_{δ₁δ₂⁻¹ = u} M_{δ₁}† M_{δ₂} = [u = e] 𝟙
//! right: Σ_{δ₁⁻¹δ₂ = u} M_{δ₁} M_{δ₂}† = [u = e] 𝟙
//! ```
//!
//! Residuals are max-entry magnitudes of the difference.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coins::CoinSet;
use crate::error::{Error, Result};
use crate::group::GraphRealization;
use crate::linalg::{self, ComplexMatrix, C64, ONE, ZERO};

pub const DEFAULT_CONDITION_TOL: f64 = 1e-10;

/// Largest `d·|X|` for which a dense operator is built.
pub const FULL_OPERATOR_CAP: usize = 16384;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub side: Side,
    pub u: String,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleDefect {
    /// `‖W†W − I‖_max`
    pub left: f64,
    /// `‖WW† − I‖_max`
    pub right: f64,
}

impl OracleDefect {
    pub fn max(&self) -> f64 {
        self.left.max(self.right)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() < tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub pass: bool,
    pub tolerance: f64,
    pub max_residual: f64,
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDefect>,
}

impl UnitarityReport {
    pub fn from_rows(rows: Vec<ReportRow>, tolerance: f64) -> Self {
        let max_residual = rows.iter().fold(0.0, |m: f64, r| m.max(r.residual));
        Self {
            pass: max_residual < tolerance,
            tolerance,
            max_residual,
            rows,
            oracle: None,
        }
    }

    pub fn residual(&self, side: Side, u: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.side == side && r.u == u)
            .map(|r| r.residual)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn defect(sum: &ComplexMatrix, identity: bool) -> f64 {
    if identity {
        linalg::identity_defect(sum)
    } else {
        linalg::max_abs(sum)
    }
}

/// Evaluates both condition families for every element of Δ₂.
pub fn check_cayley_conditions(coins: &CoinSet, tol: f64) -> UnitarityReport {
    let p = coins.presentation();
    let m = coins.coins();
    let d = coins.dim();
    let left = p.left_condition_groups();
    let right = p.right_condition_groups();
    let jobs: Vec<_> = left
        .iter()
        .map(|g| (Side::Left, g))
        .chain(right.iter().map(|g| (Side::Right, g)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|(side, (u, pairs))| {
            let mut sum = ComplexMatrix::zeros(d, d);
            for &(i, j) in pairs {
                match side {
                    Side::Left => sum += m[i].adjoint() * &m[j],
                    Side::Right => sum += &m[i] * m[j].adjoint(),
                }
            }
            ReportRow {
                side: *side,
                u: p.format_element(u),
                residual: defect(&sum, p.is_identity(u)),
            }
        })
        .collect();
    UnitarityReport::from_rows(rows, tol)
}

/// Column-sparse square operator.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    size: usize,
    columns: Vec<Vec<(usize, C64)>>,
}

impl SparseOperator {
    /// Entries are accumulated; repeated `(row, col)` pairs add up.
    pub fn from_triplets(size: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut acc: Vec<HashMap<usize, C64>> = vec![HashMap::new(); size];
        for (r, c, z) in triplets {
            *acc[c].entry(r).or_insert(ZERO) += z;
        }
        let columns = acc
            .into_iter()
            .map(|col| {
                let mut v: Vec<(usize, C64)> = col.into_iter().filter(|(_, z)| *z != ZERO).collect();
                v.sort_by_key(|&(r, _)| r);
                v
            })
            .collect();
        Self { size, columns }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut w = ComplexMatrix::zeros(self.size, self.size);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, z) in col {
                w[(r, c)] = z;
            }
        }
        w
    }

    fn rows(&self) -> Vec<Vec<(usize, C64)>> {
        let mut rows = vec![Vec::new(); self.size];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, z) in col {
                rows[r].push((c, z));
            }
        }
        rows
    }

    /// `‖W†W − I‖_max` and `‖WW† − I‖_max`, computed exactly from the
    /// nonzero pattern.
    pub fn unitarity_defects(&self) -> OracleDefect {
        // (W†W)_{ab} = Σ_r conj(W_ra) W_rb: pairs within each row
        let left = gram_defect(&self.rows(), self.size);
        // (WW†)_{rs} = Σ_a W_ra conj(W_sa): pairs within each column
        let right = gram_defect(&self.columns, self.size);
        OracleDefect { left, right }
    }
}

/// Defect of `Σ_lines conj(x_a) x_b` against the identity, where each line
/// lists `(index, value)` pairs.
fn gram_defect(lines: &[Vec<(usize, C64)>], size: usize) -> f64 {
    let mut gram: HashMap<(usize, usize), C64> = HashMap::new();
    for line in lines {
        for &(a, x) in line {
            for &(b, y) in line {
                *gram.entry((a, b)).or_insert(ZERO) += x.conj() * y;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..size {
        if !gram.contains_key(&(k, k)) {
            worst = worst.max(1.0);
        }
    }
    for (&(a, b), z) in &gram {
        let target = if a == b { ONE } else { ZERO };
        worst = worst.max((z - target).norm());
    }
    worst
}

fn check_realization(coins: &CoinSet, realization: &GraphRealization) -> Result<usize> {
    if coins.presentation() != realization.presentation() {
        return Err(Error::IncompatiblePresentation(format!(
            "coins target {}, realization is of {}",
            coins.presentation().spec(),
            realization.presentation().spec()
        )));
    }
    Ok(coins.dim() * realization.vertex_count())
}

/// `W = Σ_δ M_δ ⊗ T_δ` in sparse form; basis index `vertex·d + internal`.
pub fn build_sparse_operator(coins: &CoinSet, realization: &GraphRealization) -> Result<SparseOperator> {
    let size = check_realization(coins, realization)?;
    let d = coins.dim();
    let mut triplets = Vec::new();
    for (k, m) in coins.coins().iter().enumerate() {
        for x in 0..realization.vertex_count() {
            let y = realization.shift(k, x);
            for j in 0..d {
                for i in 0..d {
                    let z = m[(i, j)];
                    if z != ZERO {
                        triplets.push((y * d + i, x * d + j, z));
                    }
                }
            }
        }
    }
    Ok(SparseOperator::from_triplets(size, triplets))
}

pub fn build_full_operator(coins: &CoinSet, realization: &GraphRealization) -> Result<ComplexMatrix> {
    build_full_operator_capped(coins, realization, FULL_OPERATOR_CAP)
}

pub fn build_full_operator_capped(
    coins: &CoinSet,
    realization: &GraphRealization,
    cap: usize,
) -> Result<ComplexMatrix> {
    let size = check_realization(coins, realization)?;
    if size > cap {
        return Err(Error::SizeCap { required: size, cap });
    }
    Ok(build_sparse_operator(coins, realization)?.to_dense())
}

/// Unitarity defects of the full operator on a finite realization.
pub fn oracle_check(coins: &CoinSet, realization: &GraphRealization) -> Result<OracleDefect> {
    let size = check_realization(coins, realization)?;
    if size > FULL_OPERATOR_CAP {
        return Err(Error::SizeCap {
            required: size,
            cap: FULL_OPERATOR_CAP,
        });
    }
    Ok(build_sparse_operator(coins, realization)?.unitarity_defects())
}

/// Condition check through the general-graph equations, applied to the
/// Cayley digraph of a realization.
pub fn check_graph_conditions(coins: &CoinSet, realization: &GraphRealization, tol: f64) -> Result<UnitarityReport> {
    let walk = crate::generalized::embed_cayley_walk(coins, realization)?;
    crate::generalized::check_generalized_conditions(&walk.graph, &walk.spaces, &walk.maps, tol)
}
