//! Discrete-time coined quantum walks on Cayley graphs.
//!
//! A walk on the Cayley graph of a group with generating set Δ is
//! `W = Σ_δ M_δ ⊗ T_δ`, where `T_δ` moves a vertex `x` to `xδ` and the coins
//! `M_δ` act on a `d`-dimensional internal space.
//!
//! * [`group`]: presentations, canonical words, Δ₂ bookkeeping and finite
//!   realizations (tori, hypercubes, permutation quotients).
//! * [`coins`]: the coin families and the [`coins::CoinSet`] interchange
//!   format.
//! * [`unitarity`]: local condition checks and the full-operator oracle.
//! * [`walk`]: simulation and observables.
//! * [`generalized`]: walks on arbitrary digraphs with per-vertex spaces.

pub mod coins;
pub mod error;
pub mod generalized;
pub mod group;
pub mod linalg;
pub mod unitarity;
pub mod walk;

pub use coins::{CoinSet, ProjectorPartition};
pub use error::{Error, Result};
pub use group::{GraphRealization, GroupElement, GroupPresentation, RealizationParams};
pub use unitarity::{check_cayley_conditions, oracle_check, UnitarityReport};
pub use walk::{Walk, WalkState};
