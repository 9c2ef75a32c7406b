//! Time evolution on finite realizations.
//!
//! States are stored in the layout of the full operator (index
//! `vertex·d + internal`) but the operator itself is never formed: a step
//! pulls `ψ'(z) = Σ_δ M_δ ψ(z δ⁻¹)` vertex by vertex.

mod momentum;

use rayon::prelude::*;

use crate::coins::CoinSet;
use crate::error::{Error, Result};
use crate::group::{GraphRealization, GroupPresentation, RealizationParams, Topology};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};

pub use momentum::MomentumWalk;

/// Allowed deviation of `‖ψ‖₂` from one, for inputs and after each step.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    dim: usize,
    origin: usize,
    time: u64,
    amplitudes: Vec<C64>,
}

impl WalkState {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex the walk started from.
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn vertex_count(&self) -> usize {
        self.amplitudes.len() / self.dim
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest amplitude difference to another state of the same shape.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        assert_eq!(self.amplitudes.len(), other.amplitudes.len(), "state shape mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Replaces the amplitudes, keeping origin and time.
    pub fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes,
            ..self.clone()
        })
    }
}

/// Localized state `|vertex⟩ ⊗ |internal⟩`.
pub fn initial_state(realization: &GraphRealization, vertex: usize, internal: &[C64]) -> Result<WalkState> {
    let n = realization.vertex_count();
    if vertex >= n {
        return Err(Error::InvalidParameter(format!("vertex {vertex} out of range 0..{n}")));
    }
    let d = internal.len();
    if d == 0 {
        return Err(Error::InvalidParameter("internal vector is empty".into()));
    }
    if internal.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("internal vector has non-finite entries".into()));
    }
    let norm = internal.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let mut amplitudes = vec![ZERO; n * d];
    amplitudes[vertex * d..(vertex + 1) * d].copy_from_slice(internal);
    Ok(WalkState {
        dim: d,
        origin: vertex,
        time: 0,
        amplitudes,
    })
}

/// `(1, 1, …)/√d`.
pub fn uniform_internal(d: usize) -> Vec<C64> {
    vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d]
}

/// A coin set bound to a realization, with the shift tables precomputed.
#[derive(Clone, Debug)]
pub struct Walk {
    coins: CoinSet,
    adjoints: Vec<ComplexMatrix>,
    realization: GraphRealization,
    /// `pull[k][z] = z δ_k⁻¹`
    pull: Vec<Vec<usize>>,
    /// `push[k][x] = x δ_k`
    push: Vec<Vec<usize>>,
    enforce_norm: bool,
}

impl Walk {
    pub fn new(coins: CoinSet, realization: GraphRealization) -> Result<Self> {
        if coins.presentation() != realization.presentation() {
            return Err(Error::IncompatiblePresentation(format!(
                "coins target {}, realization is of {}",
                coins.presentation().spec(),
                realization.presentation().spec()
            )));
        }
        let k = coins.coins().len();
        let n = realization.vertex_count();
        let pull = (0..k)
            .map(|d| (0..n).map(|z| realization.unshift(d, z)).collect())
            .collect();
        let push = (0..k).map(|d| realization.shift_table(d)).collect();
        let adjoints = coins.coins().iter().map(|m| m.adjoint()).collect();
        Ok(Self {
            coins,
            adjoints,
            realization,
            pull,
            push,
            enforce_norm: true,
        })
    }

    /// Disables the per-step norm check; drift can then be read off the
    /// returned states.
    pub fn unchecked(mut self) -> Self {
        self.enforce_norm = false;
        self
    }

    pub fn coins(&self) -> &CoinSet {
        &self.coins
    }

    pub fn realization(&self) -> &GraphRealization {
        &self.realization
    }

    pub fn dim(&self) -> usize {
        self.coins.dim()
    }

    pub fn initial_state(&self, vertex: usize, internal: &[C64]) -> Result<WalkState> {
        let s = initial_state(&self.realization, vertex, internal)?;
        self.check_shape(&s)?;
        Ok(s)
    }

    fn check_shape(&self, state: &WalkState) -> Result<()> {
        if state.dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim,
            });
        }
        if state.vertex_count() != self.realization.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: self.realization.vertex_count(),
                found: state.vertex_count(),
            });
        }
        Ok(())
    }

    fn finish(&self, state: &WalkState, amplitudes: Vec<C64>, time: u64) -> Result<WalkState> {
        let next = WalkState {
            dim: state.dim,
            origin: state.origin,
            time,
            amplitudes,
        };
        if self.enforce_norm {
            let norm = next.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(next)
    }

    fn apply(&self, state: &WalkState, mats: &[ComplexMatrix], tables: &[Vec<usize>]) -> Vec<C64> {
        let d = self.dim();
        let src = &state.amplitudes;
        let mut out = vec![ZERO; src.len()];
        out.par_chunks_mut(d).enumerate().for_each(|(z, block)| {
            for (m, table) in mats.iter().zip(tables) {
                let y = table[z];
                let input = &src[y * d..(y + 1) * d];
                for (i, slot) in block.iter_mut().enumerate() {
                    let mut acc = ZERO;
                    for (j, a) in input.iter().enumerate() {
                        acc += m[(i, j)] * a;
                    }
                    *slot += acc;
                }
            }
        });
        out
    }

    /// One application of `W`.
    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        self.check_shape(state)?;
        let out = self.apply(state, self.coins.coins(), &self.pull);
        self.finish(state, out, state.time + 1)
    }

    /// One application of `W† = Σ_δ M_δ† ⊗ T_δ⁻¹`; decrements time.
    pub fn adjoint_step(&self, state: &WalkState) -> Result<WalkState> {
        self.check_shape(state)?;
        let out = self.apply(state, &self.adjoints, &self.push);
        self.finish(state, out, state.time.saturating_sub(1))
    }

    /// `t` applications of [`Walk::step`].
    pub fn evolve(&self, state: &WalkState, t: u64) -> Result<WalkState> {
        let mut s = state.clone();
        for _ in 0..t {
            s = self.step(&s)?;
        }
        Ok(s)
    }
}

/// Probability per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.0[v]
    }

    /// Header and rows for CSV output. On tori the columns are the signed
    /// displacements `x1..xn` from `origin`; elsewhere a `vertex` label.
    /// Rows are sorted lexicographically.
    pub fn table(&self, realization: &GraphRealization, origin: usize) -> (Vec<String>, Vec<(Vec<String>, f64)>) {
        match realization.topology() {
            Topology::Torus { rank, .. } => {
                let mut rows: Vec<(Vec<i64>, f64)> = self
                    .0
                    .iter()
                    .enumerate()
                    .map(|(v, &p)| (realization.signed_displacement(origin, v).expect("torus"), p))
                    .collect();
                rows.sort_by(|a, b| a.0.cmp(&b.0));
                let header = (1..=*rank)
                    .map(|k| format!("x{k}"))
                    .chain(["prob".to_string()])
                    .collect();
                let rows = rows
                    .into_iter()
                    .map(|(x, p)| (x.iter().map(i64::to_string).collect(), p))
                    .collect();
                (header, rows)
            }
            _ => {
                let mut rows: Vec<(Vec<String>, f64)> = self
                    .0
                    .iter()
                    .enumerate()
                    .map(|(v, &p)| (vec![realization.label(v)], p))
                    .collect();
                rows.sort_by(|a, b| a.0.cmp(&b.0));
                (vec!["vertex".into(), "prob".into()], rows)
            }
        }
    }
}

pub fn position_distribution(state: &WalkState) -> Distribution {
    Distribution(
        state
            .amplitudes
            .chunks(state.dim)
            .map(|b| b.iter().map(C64::norm_sqr).sum())
            .collect(),
    )
}

/// Mass at graph distance greater than `t` from the origin.
pub fn light_cone_violation(dist: &Distribution, distances: &[Option<u32>], t: u64) -> f64 {
    dist.0
        .iter()
        .zip(distances)
        .filter(|(_, d)| d.is_none_or(|d| u64::from(d) > t))
        .fold(0.0, |acc, (p, _)| acc + p)
}

/// Summed per-axis variance of the signed displacement from the starting
/// vertex, for `t = 1..=t_max`. Needs a torus with `side > 2·t_max + 1` so
/// that the walk never wraps.
pub fn variance_trace(walk: &Walk, initial: &WalkState, t_max: u64) -> Result<Vec<(u64, f64)>> {
    let Topology::Torus { side, .. } = walk.realization().topology() else {
        return Err(Error::InvalidRealization("variance needs a torus realization".into()));
    };
    let min_side = 2 * t_max + 2;
    if (*side as u64) < min_side {
        return Err(Error::InvalidRealization(format!(
            "side {side} lets the walk wrap within {t_max} steps; use side ≥ {min_side}"
        )));
    }
    let r = walk.realization();
    let disp: Vec<Vec<i64>> = (0..r.vertex_count())
        .map(|v| r.signed_displacement(initial.origin(), v).expect("torus"))
        .collect();
    let mut s = initial.clone();
    let mut out = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        s = walk.step(&s)?;
        out.push((t, variance(&position_distribution(&s), &disp)));
    }
    Ok(out)
}

/// `Σ_axes (E[x²] − E[x]²)`.
pub fn variance(dist: &Distribution, displacement: &[Vec<i64>]) -> f64 {
    let rank = displacement.first().map_or(0, Vec::len);
    (0..rank)
        .map(|a| {
            let (mut m1, mut m2) = (0.0, 0.0);
            for (p, x) in dist.0.iter().zip(displacement) {
                let x = x[a] as f64;
                m1 += p * x;
                m2 += p * x * x;
            }
            m2 - m1 * m1
        })
        .sum()
}

/// Probability at the vertex `1…1` of the `n`-cube for `t = 1..=t_max`,
/// starting at `0…0` with the given internal vector (uniform by default).
pub fn antipodal_probability(
    coins: &CoinSet,
    n: usize,
    t_max: u64,
    internal: Option<&[C64]>,
) -> Result<Vec<(u64, f64)>> {
    let p = GroupPresentation::hypercube(n)?;
    let r = GraphRealization::realize(&p, &RealizationParams::Hypercube)?;
    let walk = Walk::new(coins.clone(), r)?;
    let uniform = uniform_internal(coins.dim());
    let mut s = walk.initial_state(0, internal.unwrap_or(&uniform))?;
    let target = (1usize << n) - 1;
    let mut out = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        s = walk.step(&s)?;
        out.push((t, position_distribution(&s).get(target)));
    }
    Ok(out)
}

/// Internal basis vector `e_k`.
pub fn basis_internal(d: usize, k: usize) -> Result<Vec<C64>> {
    if k >= d {
        return Err(Error::InvalidParameter(format!("basis index {k} out of range 0..{d}")));
    }
    let mut v = vec![ZERO; d];
    v[k] = ONE;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{self, ProjectorPartition};
    use crate::linalg::{self, c};
    use crate::unitarity::build_full_operator;

    fn line(side: usize, u: &ComplexMatrix) -> Walk {
        let p = GroupPresentation::free_abelian(1, false).unwrap();
        let set = coins::free_projector_coin(&p, u, &ProjectorPartition::singletons(&p)).unwrap();
        let r = GraphRealization::realize(&p, &RealizationParams::Torus { side }).unwrap();
        Walk::new(set, r).unwrap()
    }

    fn sym() -> Vec<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(h, 0.0), c(0.0, h)]
    }

    #[test]
    fn localized_states() {
        let w = line(8, &linalg::hadamard());
        let s = w.initial_state(0, &[ONE, ZERO]).unwrap();
        assert_eq!(s.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert!((w.initial_state(3, &sym()).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(w.initial_state(0, &[ONE, ONE]), Err(Error::NotNormalized(_))));
        assert!(w.initial_state(8, &[ONE, ZERO]).is_err());
    }

    #[test]
    fn hypercube_state() {
        let p = GroupPresentation::hypercube(3).unwrap();
        let r = GraphRealization::realize(&p, &RealizationParams::Hypercube).unwrap();
        let s = initial_state(&r, 0, &[ONE, ZERO]).unwrap();
        assert_eq!(s.amplitudes().len(), 16);
    }

    #[test]
    fn identity_coin_translates() {
        let w = line(16, &linalg::identity(2));
        let s = w.evolve(&w.initial_state(0, &[ONE, ZERO]).unwrap(), 5).unwrap();
        let d = position_distribution(&s);
        assert_eq!(d.get(5), 1.0);
    }

    #[test]
    fn step_matches_dense_power() {
        let w = line(64, &linalg::hadamard());
        let s0 = w.initial_state(0, &sym()).unwrap();
        let direct = w.evolve(&s0, 20).unwrap();
        let op = build_full_operator(w.coins(), w.realization()).unwrap();
        let mut v = linalg::ComplexVector::from_column_slice(s0.amplitudes());
        for _ in 0..20 {
            v = &op * v;
        }
        let dense = s0.with_amplitudes(v.iter().copied().collect()).unwrap();
        assert!(direct.max_abs_diff(&dense) < 1e-10);
    }

    #[test]
    fn evolve_zero_and_one() {
        let w = line(8, &linalg::hadamard());
        let s0 = w.initial_state(0, &sym()).unwrap();
        assert_eq!(w.evolve(&s0, 0).unwrap(), s0);
        assert_eq!(w.evolve(&s0, 1).unwrap(), w.step(&s0).unwrap());
        let a = w.evolve(&w.evolve(&s0, 3).unwrap(), 4).unwrap();
        assert_eq!(a, w.evolve(&s0, 7).unwrap());
    }

    #[test]
    fn hadamard_two_steps_by_hand() {
        // M_± = H P_±. From (1,0) at 0: step 1 moves it to +1 as H(1,0) = (1,1)/√2.
        // Step 2 sends H(1/√2, 0) = (1,1)/2 to +2 and H(0, 1/√2) = (1,-1)/2 to 0.
        let w = line(16, &linalg::hadamard());
        let s1 = w.step(&w.initial_state(0, &[ONE, ZERO]).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s1.amplitudes()[2] - c(h, 0.0)).norm() < 1e-15);
        assert!((s1.amplitudes()[3] - c(h, 0.0)).norm() < 1e-15);
        let d = position_distribution(&w.step(&s1).unwrap());
        assert!((d.get(2) - 0.5).abs() < 1e-15);
        assert!((d.get(0) - 0.5).abs() < 1e-15);
        assert!(d.get(14) < 1e-30);
    }

    #[test]
    fn uniform_superposition_stays_uniform() {
        let w = line(8, &linalg::hadamard());
        let s0 = w.initial_state(0, &[ONE, ZERO]).unwrap();
        let amp = c(1.0 / 4.0, 0.0);
        let s = s0.with_amplitudes(vec![amp; 16]).unwrap();
        let d = position_distribution(&s);
        assert!(d.probs().iter().all(|p| (p - 0.125).abs() < 1e-15));
    }

    #[test]
    fn adjoint_undoes_step() {
        let w = line(16, &linalg::hadamard());
        let s0 = w.initial_state(0, &sym()).unwrap();
        let back = w.adjoint_step(&w.step(&s0).unwrap()).unwrap();
        assert!(back.max_abs_diff(&s0) < 1e-15);
    }

    #[test]
    fn non_unitary_walk_trips_the_norm_check() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let m = linalg::identity(1) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let set = CoinSet::new(p.clone(), vec![m.clone(), m]).unwrap();
        let r = GraphRealization::realize(&p, &RealizationParams::CyclicQuotient { orders: vec![5, 7] }).unwrap();
        let w = Walk::new(set, r).unwrap();
        let s0 = w.initial_state(0, &[ONE]).unwrap();
        // the quotient is abelian, so ab = ba and the norm grows at step two
        let mut s = s0.clone();
        let mut tripped = false;
        for _ in 0..10 {
            match w.step(&s) {
                Ok(n) => s = n,
                Err(Error::NotNormalized(_)) => {
                    tripped = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(tripped);
        let loose = w.clone().unchecked();
        assert!(loose.evolve(&s0, 10).is_ok());
    }

    #[test]
    fn variance_guard_and_identity_motion() {
        let w = line(64, &linalg::identity(2));
        let s0 = w.initial_state(0, &sym()).unwrap();
        assert!(variance_trace(&w, &s0, 40).is_err());
        let tr = variance_trace(&w, &s0, 20).unwrap();
        for (t, v) in tr {
            assert!((v - (t * t) as f64).abs() < 1e-9, "t={t} v={v}");
        }
    }

    #[test]
    fn antipodal_on_an_edge() {
        let p = GroupPresentation::hypercube(1).unwrap();
        let set = CoinSet::new(p, vec![linalg::identity(1)]).unwrap();
        let tr = antipodal_probability(&set, 1, 4, None).unwrap();
        let probs: Vec<f64> = tr.iter().map(|x| x.1).collect();
        assert_eq!(probs, [1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn distribution_table_is_sorted() {
        let w = line(8, &linalg::hadamard());
        let s = w.evolve(&w.initial_state(0, &sym()).unwrap(), 2).unwrap();
        let (header, rows) = position_distribution(&s).table(w.realization(), 0);
        assert_eq!(header, ["x1", "prob"]);
        let xs: Vec<i64> = rows.iter().map(|r| r.0[0].parse().unwrap()).collect();
        assert_eq!(xs, [-3, -2, -1, 0, 1, 2, 3, 4]);
    }
}
