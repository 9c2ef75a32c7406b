//! Evolution in momentum space on tori.
//!
//! With `ψ̂(k) = Σ_x e^{-2πi k·x/L} ψ(x)` a step becomes
//! `ψ̂'(k) = W(k) ψ̂(k)`, `W(k) = Σ_δ e^{-2πi k·v_δ/L} M_δ`, where `v_δ` is
//! the displacement of `δ`.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::group::Topology;
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::walk::{Walk, WalkState};

pub struct MomentumWalk {
    side: usize,
    rank: usize,
    dim: usize,
    /// `W(k)` in vertex order of `k`.
    bloch: Vec<ComplexMatrix>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    enforce_norm: bool,
}

impl MomentumWalk {
    pub fn new(walk: &Walk) -> Result<Self> {
        let r = walk.realization();
        let Topology::Torus { rank, side } = *r.topology() else {
            return Err(Error::InvalidRealization(
                "momentum evolution needs a torus realization".into(),
            ));
        };
        let d = walk.dim();
        let displacements: Vec<Vec<i64>> = (0..walk.coins().coins().len())
            .map(|k| r.displacement(k).expect("torus"))
            .collect();
        let tau = std::f64::consts::TAU / side as f64;
        let bloch = (0..r.vertex_count())
            .map(|kv| {
                let k = r.coordinates(kv).expect("torus");
                let mut w = ComplexMatrix::zeros(d, d);
                for (m, v) in walk.coins().coins().iter().zip(&displacements) {
                    let dot: i64 = k.iter().zip(v).map(|(a, b)| a * b).sum();
                    w += m * C64::from_polar(1.0, -tau * dot as f64);
                }
                w
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            side,
            rank,
            dim: d,
            bloch,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
            enforce_norm: true,
        })
    }

    pub fn unchecked(mut self) -> Self {
        self.enforce_norm = false;
        self
    }

    /// `W(k)` for the momentum with torus vertex index `k`.
    pub fn bloch(&self, k: usize) -> &ComplexMatrix {
        &self.bloch[k]
    }

    fn transform(&self, data: &mut [C64], inverse: bool) {
        let (l, d) = (self.side, self.dim);
        let n = data.len() / d;
        let fft = if inverse { &self.inverse } else { &self.forward };
        let mut buf = vec![ZERO; l];
        for axis in 0..self.rank {
            let stride = l.pow((self.rank - 1 - axis) as u32);
            for v in (0..n).filter(|v| (v / stride) % l == 0) {
                for i in 0..d {
                    for (j, b) in buf.iter_mut().enumerate() {
                        *b = data[(v + j * stride) * d + i];
                    }
                    fft.process(&mut buf);
                    for (j, b) in buf.iter().enumerate() {
                        data[(v + j * stride) * d + i] = *b;
                    }
                }
            }
        }
        if inverse {
            let scale = 1.0 / n as f64;
            data.iter_mut().for_each(|z| *z *= scale);
        }
    }

    fn apply_bloch(&self, data: &mut [C64], times: u64) {
        let d = self.dim;
        for (k, block) in data.chunks_mut(d).enumerate() {
            let mut v = nalgebra::DVector::from_column_slice(block);
            for _ in 0..times {
                v = &self.bloch[k] * v;
            }
            block.copy_from_slice(v.as_slice());
        }
    }

    /// `t` steps with a single forward and inverse transform.
    pub fn evolve(&self, state: &WalkState, t: u64) -> Result<WalkState> {
        if state.dim() != self.dim || state.vertex_count() != self.bloch.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.bloch.len(),
                found: state.amplitudes().len(),
            });
        }
        let mut data = state.amplitudes().to_vec();
        self.transform(&mut data, false);
        self.apply_bloch(&mut data, t);
        self.transform(&mut data, true);
        let mut next = state.with_amplitudes(data)?;
        next.time += t;
        if self.enforce_norm {
            let norm = next.norm();
            if (norm - 1.0).abs() > super::NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(next)
    }

    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        self.evolve(state, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{self, ProjectorPartition};
    use crate::group::{GraphRealization, GroupPresentation, RealizationParams};
    use crate::linalg::{self, c, ONE};

    fn torus_walk(u: &ComplexMatrix, rank: usize, side: usize) -> Walk {
        let p = GroupPresentation::free_abelian(rank, false).unwrap();
        let set = coins::free_projector_coin(&p, u, &ProjectorPartition::singletons(&p)).unwrap();
        Walk::new(
            set,
            GraphRealization::realize(&p, &RealizationParams::Torus { side }).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn matches_direct_step_on_a_cycle() {
        let w = torus_walk(&linalg::hadamard(), 1, 8);
        let m = MomentumWalk::new(&w).unwrap();
        let s0 = w.initial_state(2, &[ONE, linalg::ZERO]).unwrap();
        let a = w.step(&s0).unwrap();
        let b = m.step(&s0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert_eq!(b.time(), 1);
    }

    #[test]
    fn identity_coins_give_diagonal_phases() {
        let w = torus_walk(&linalg::identity(2), 1, 8);
        let m = MomentumWalk::new(&w).unwrap();
        for k in 0..8 {
            let b = m.bloch(k);
            assert_eq!(b[(0, 1)], linalg::ZERO);
            assert_eq!(b[(1, 0)], linalg::ZERO);
            assert!((b[(0, 0)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_tori() {
        let p = GroupPresentation::hypercube(2).unwrap();
        let set = coins::free_projector_coin(&p, &linalg::identity(2), &ProjectorPartition::singletons(&p)).unwrap();
        let w = Walk::new(
            set,
            GraphRealization::realize(&p, &RealizationParams::Hypercube).unwrap(),
        )
        .unwrap();
        assert!(MomentumWalk::new(&w).is_err());
    }

    #[test]
    fn lazy_walk_with_rest_generator() {
        let p = GroupPresentation::free_abelian(1, true).unwrap();
        let set = coins::lazy_1d_dim3(&p, &coins::standard_coin(coins::StandardCoin::Dft, 3).unwrap()).unwrap();
        let w = Walk::new(
            set,
            GraphRealization::realize(&p, &RealizationParams::Torus { side: 9 }).unwrap(),
        )
        .unwrap();
        let m = MomentumWalk::new(&w).unwrap();
        let h = 1.0 / 3f64.sqrt();
        let s0 = w.initial_state(0, &[c(h, 0.0), c(0.0, h), c(h, 0.0)]).unwrap();
        assert!(w.evolve(&s0, 7).unwrap().max_abs_diff(&m.evolve(&s0, 7).unwrap()) < 1e-12);
    }
}
