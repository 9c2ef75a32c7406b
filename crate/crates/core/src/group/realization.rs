//! Finite Cayley-graph realizations on which walks are simulated.
//!
//! Infinite groups are replaced by finite quotients. The local condition
//! equations only see Δ₂, so a quotient that maps Δ₂ injectively (see
//! [`GraphRealization::preserves_delta2`]) gives a full operator whose
//! unitarity is decided by exactly the same equations.

use std::collections::{HashMap, VecDeque};

use super::{GroupElement, GroupKind, GroupPresentation, Letter};
use crate::error::{Error, Result};

/// Smallest admissible torus side; below it distinct Δ₂ elements collide
/// (for example `d²` and `d⁻²` when the side is 4).
pub const MIN_TORUS_SIDE: usize = 5;
pub const MAX_REALIZED_HYPERCUBE: usize = 24;
pub const MAX_TABLE_VERTICES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationParams {
    /// `(ℤ_L)ⁿ` for free abelian groups; for `abelianrel:sq` the quotient by
    /// `d1^(L/2)`, which has `L` vertices (`L` even).
    Torus {
        side: usize,
    },
    Hypercube,
    /// Base generator `i` is sent to a generator of `ℤ_{orders[i]}`; the
    /// realization is the Cayley graph of the direct product.
    CyclicQuotient {
        orders: Vec<usize>,
    },
    /// Base generator `i` is sent to the permutation `images[i]`; the
    /// realization is the Cayley graph of the generated permutation group.
    Permutations {
        images: Vec<Vec<usize>>,
    },
}

impl RealizationParams {
    /// Parses `torus:L=8`, `hypercube`, `cyclic:q=5,7` or
    /// `perm:[1,2,0],[0,2,1]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
        let bad = |expected: &str, position: usize| Error::Parse {
            position,
            expected: expected.to_string(),
            found: format!("`{}`", &spec[position.min(spec.len())..]),
        };
        let body_at = kind.len() + 1;
        match kind {
            "torus" => {
                let n = body.strip_prefix("L=").ok_or_else(|| bad("`L=`", body_at))?;
                let side = n.parse().map_err(|_| bad("unsigned integer", body_at + 2))?;
                Ok(Self::Torus { side })
            }
            "hypercube" if body.is_empty() => Ok(Self::Hypercube),
            "hypercube" => Err(bad("end of input", body_at)),
            "cyclic" => {
                let list = body.strip_prefix("q=").ok_or_else(|| bad("`q=`", body_at))?;
                let orders = list
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("comma-separated unsigned integers", body_at + 2))?;
                Ok(Self::CyclicQuotient { orders })
            }
            "perm" => {
                let mut images = Vec::new();
                let mut rest = body.trim();
                while !rest.is_empty() {
                    let inner = rest
                        .strip_prefix('[')
                        .and_then(|r| r.split_once(']'))
                        .ok_or_else(|| bad("`[i,j,...]`", spec.len() - rest.len()))?;
                    let perm = inner
                        .0
                        .split(',')
                        .map(|x| x.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("permutation images", spec.len() - rest.len()))?;
                    images.push(perm);
                    rest = inner.1.trim_start_matches(',').trim();
                }
                Ok(Self::Permutations { images })
            }
            _ => Err(Error::Parse {
                position: 0,
                expected: "one of `torus`, `hypercube`, `cyclic`, `perm`".into(),
                found: format!("`{kind}`"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// `(ℤ_side)^rank`, row-major vertex index.
    Torus { rank: usize, side: usize },
    /// `(ℤ₂)^rank`, vertex index is the bit vector.
    Hypercube { rank: usize },
    /// Quotient of `ℤ²/(d1² = d2²)`; vertex `2x + s` stands for the class of
    /// `d1^(x-s) d2^s`, `x` taken modulo `half`.
    RelationTorus { half: usize },
    /// Explicit permutation group.
    Table,
}

#[derive(Clone, Debug)]
struct PermTable {
    base: Vec<Vec<u32>>,
    base_inv: Vec<Vec<u32>>,
    elements: Vec<Vec<u32>>,
    labels: Vec<String>,
    index: HashMap<Vec<u32>, usize>,
}

#[derive(Clone, Debug)]
pub struct GraphRealization {
    presentation: GroupPresentation,
    topology: Topology,
    vertex_count: usize,
    /// Explicit forward/backward shift tables, only for `Topology::Table`.
    shifts: Vec<Vec<u32>>,
    unshifts: Vec<Vec<u32>>,
    table: Option<PermTable>,
}

impl GraphRealization {
    /// Builds a realization, enforcing the admissibility guards.
    pub fn realize(presentation: &GroupPresentation, params: &RealizationParams) -> Result<Self> {
        match (presentation.kind(), params) {
            (GroupKind::FreeAbelian, RealizationParams::Torus { side }) => {
                if *side < MIN_TORUS_SIDE {
                    return Err(Error::InvalidRealization(format!(
                        "torus side {side} < {MIN_TORUS_SIDE} would identify distinct Δ₂ elements"
                    )));
                }
                Self::torus_any_side(presentation, *side)
            }
            (GroupKind::AbelianWithRelation, RealizationParams::Torus { side }) => {
                if side % 2 != 0 || *side < 6 {
                    return Err(Error::InvalidRealization(format!(
                        "relation torus needs an even side ≥ 6, got {side}"
                    )));
                }
                Ok(Self::simple(
                    presentation,
                    Topology::RelationTorus { half: side / 2 },
                    *side,
                ))
            }
            (GroupKind::Hypercube, RealizationParams::Hypercube) => {
                let n = presentation.rank();
                if n > MAX_REALIZED_HYPERCUBE {
                    return Err(Error::InvalidRealization(format!(
                        "hypercube rank {n} exceeds {MAX_REALIZED_HYPERCUBE}"
                    )));
                }
                Ok(Self::simple(presentation, Topology::Hypercube { rank: n }, 1 << n))
            }
            (GroupKind::Free | GroupKind::CyclicFreeProduct(_), RealizationParams::CyclicQuotient { orders }) => {
                let images = cyclic_images(presentation, orders)?;
                Self::from_permutations(presentation, &images)
            }
            (GroupKind::Free | GroupKind::CyclicFreeProduct(_), RealizationParams::Permutations { images }) => {
                Self::from_permutations(presentation, images)
            }
            (kind, params) => Err(Error::InvalidRealization(format!(
                "{params:?} cannot realize a {kind:?} presentation"
            ))),
        }
    }

    /// A free-abelian torus without the minimum-side guard. Small sides are
    /// legitimate finite groups but may merge distinct condition equations.
    pub fn torus_any_side(presentation: &GroupPresentation, side: usize) -> Result<Self> {
        if !matches!(presentation.kind(), GroupKind::FreeAbelian) {
            return Err(Error::InvalidRealization(
                "torus requires a free abelian presentation".into(),
            ));
        }
        if side == 0 {
            return Err(Error::InvalidRealization("torus side must be positive".into()));
        }
        let rank = presentation.rank();
        let count = (0..rank)
            .try_fold(1usize, |acc, _| acc.checked_mul(side))
            .filter(|&c| c <= MAX_TABLE_VERTICES * 64)
            .ok_or_else(|| Error::InvalidRealization(format!("torus {side}^{rank} is too large")))?;
        Ok(Self::simple(presentation, Topology::Torus { rank, side }, count))
    }

    fn simple(presentation: &GroupPresentation, topology: Topology, vertex_count: usize) -> Self {
        Self {
            presentation: presentation.clone(),
            topology,
            vertex_count,
            shifts: Vec::new(),
            unshifts: Vec::new(),
            table: None,
        }
    }

    fn from_permutations(presentation: &GroupPresentation, images: &[Vec<usize>]) -> Result<Self> {
        let rank = presentation.rank();
        if images.len() != rank {
            return Err(Error::InvalidRealization(format!(
                "expected {rank} permutations, got {}",
                images.len()
            )));
        }
        let degree = images.first().map_or(0, Vec::len);
        let mut base = Vec::with_capacity(rank);
        for (i, img) in images.iter().enumerate() {
            if img.len() != degree {
                return Err(Error::InvalidRealization("permutations of unequal degree".into()));
            }
            let mut seen = vec![false; degree];
            for &k in img {
                if k >= degree || std::mem::replace(&mut seen[k], true) {
                    return Err(Error::InvalidRealization(format!(
                        "image list {i} is not a permutation of 0..{degree}"
                    )));
                }
            }
            base.push(img.iter().map(|&k| k as u32).collect::<Vec<u32>>());
        }
        if let GroupKind::CyclicFreeProduct(q) = presentation.kind() {
            for (i, p) in base.iter().enumerate() {
                if !perm_is_identity(&perm_power(p, q[i] as i64)) {
                    return Err(Error::InvalidRealization(format!(
                        "permutation for {} does not satisfy its order relation",
                        presentation.base_names()[i]
                    )));
                }
            }
        }
        let base_inv: Vec<Vec<u32>> = base.iter().map(|p| perm_inverse(p)).collect();

        // Breadth-first closure under right multiplication by generators.
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut words = vec![presentation.identity_element()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for g in 0..rank {
                for (perm, exp) in [(&base[g], 1), (&base_inv[g], -1)] {
                    let next = perm_compose(&elements[v], perm);
                    if !index.contains_key(&next) {
                        if elements.len() >= MAX_TABLE_VERTICES {
                            return Err(Error::InvalidRealization(format!(
                                "quotient group exceeds {MAX_TABLE_VERTICES} elements"
                            )));
                        }
                        let letter = presentation.letter_element(Letter { base: g, exp })?;
                        words.push(presentation.multiply(&words[v], &letter));
                        index.insert(next.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(next);
                    }
                }
            }
        }
        let labels = words.iter().map(|w| presentation.format_element(w)).collect();
        let table = PermTable {
            base,
            base_inv,
            elements,
            labels,
            index,
        };

        let n = table.elements.len();
        let mut shifts = Vec::with_capacity(presentation.delta().len());
        for sym in presentation.delta() {
            let row: Vec<u32> = match sym.base {
                None => (0..n as u32).collect(),
                Some(g) => {
                    let perm = if sym.is_inverse {
                        &table.base_inv[g]
                    } else {
                        &table.base[g]
                    };
                    table
                        .elements
                        .iter()
                        .map(|x| table.index[&perm_compose(x, perm)] as u32)
                        .collect()
                }
            };
            shifts.push(row);
        }
        let unshifts = shifts.iter().map(|s| perm_inverse(s)).collect();
        Ok(Self {
            presentation: presentation.clone(),
            topology: Topology::Table,
            vertex_count: n,
            shifts,
            unshifts,
            table: Some(table),
        })
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Vertex of the group identity.
    pub fn origin(&self) -> usize {
        0
    }

    /// `x ↦ x δ` for the Δ entry at `delta_index`.
    pub fn shift(&self, delta_index: usize, v: usize) -> usize {
        self.step_by(delta_index, v, false)
    }

    /// `x ↦ x δ⁻¹`.
    pub fn unshift(&self, delta_index: usize, v: usize) -> usize {
        self.step_by(delta_index, v, true)
    }

    fn step_by(&self, delta_index: usize, v: usize, backwards: bool) -> usize {
        let sym = &self.presentation.delta()[delta_index];
        let Some(g) = sym.base else { return v };
        let forward = sym.is_inverse == backwards;
        match &self.topology {
            Topology::Torus { rank, side } => {
                let stride = side.pow((rank - 1 - g) as u32);
                let coord = (v / stride) % side;
                let next = if forward {
                    (coord + 1) % side
                } else {
                    (coord + side - 1) % side
                };
                v - coord * stride + next * stride
            }
            Topology::Hypercube { .. } => v ^ (1 << g),
            Topology::RelationTorus { half } => {
                let (x, s) = (v / 2, v % 2);
                let x = if forward { (x + 1) % half } else { (x + half - 1) % half };
                let s = if g == 1 { 1 - s } else { s };
                2 * x + s
            }
            Topology::Table => {
                let table = if backwards { &self.unshifts } else { &self.shifts };
                table[delta_index][v] as usize
            }
        }
    }

    /// The shift permutation of the Δ entry at `delta_index`.
    pub fn shift_table(&self, delta_index: usize) -> Vec<usize> {
        (0..self.vertex_count).map(|v| self.shift(delta_index, v)).collect()
    }

    /// Directed edges `(x, xδ, δ-index)` in vertex-major, Δ-minor order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let k = self.presentation.delta().len();
        (0..self.vertex_count)
            .flat_map(|v| (0..k).map(move |d| (v, d)))
            .map(|(v, d)| (v, self.shift(d, v), d))
            .collect()
    }

    /// Vertex holding the image of a group element.
    pub fn vertex_of(&self, x: &GroupElement) -> usize {
        match (&self.topology, x) {
            (Topology::Torus { rank, side }, GroupElement::Exponents(e)) => {
                let s = *side as i64;
                (0..*rank).fold(0usize, |acc, a| acc * side + e[a].rem_euclid(s) as usize)
            }
            (Topology::Hypercube { .. }, GroupElement::Bits(b)) => *b as usize,
            (Topology::RelationTorus { half }, GroupElement::Relation { d1, d2 }) => {
                let x = (d1 + *d2 as i64).rem_euclid(*half as i64) as usize;
                2 * x + *d2 as usize
            }
            (Topology::Table, GroupElement::Word(w)) => {
                let table = self.table.as_ref().expect("table topology");
                let mut acc = table.elements[0].clone();
                for &(g, e) in w {
                    let p = if e >= 0 {
                        perm_power(&table.base[g], e)
                    } else {
                        perm_power(&table.base_inv[g], -e)
                    };
                    acc = perm_compose(&acc, &p);
                }
                table.index[&acc]
            }
            _ => panic!("element kind does not match the realization"),
        }
    }

    pub fn label(&self, v: usize) -> String {
        match &self.topology {
            Topology::Torus { .. } => {
                let c: Vec<String> = self.coordinates(v).unwrap().iter().map(i64::to_string).collect();
                format!("({})", c.join(","))
            }
            Topology::Hypercube { rank } => (0..*rank).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect(),
            Topology::RelationTorus { .. } => format!("({},{})", v / 2, v % 2),
            Topology::Table => self.table.as_ref().unwrap().labels[v].clone(),
        }
    }

    /// Raw torus coordinates in `0..side`; `None` off tori.
    pub fn coordinates(&self, v: usize) -> Option<Vec<i64>> {
        match &self.topology {
            Topology::Torus { rank, side } => {
                let mut c = vec![0i64; *rank];
                let mut rest = v;
                for a in (0..*rank).rev() {
                    c[a] = (rest % side) as i64;
                    rest /= side;
                }
                Some(c)
            }
            _ => None,
        }
    }

    /// Coordinates of `v` relative to `origin`, each wrapped into
    /// `(-side/2, side/2]`.
    pub fn signed_displacement(&self, origin: usize, v: usize) -> Option<Vec<i64>> {
        let Topology::Torus { side, .. } = &self.topology else {
            return None;
        };
        let s = *side as i64;
        let a = self.coordinates(origin)?;
        let b = self.coordinates(v)?;
        Some(
            a.iter()
                .zip(&b)
                .map(|(x, y)| {
                    let d = (y - x).rem_euclid(s);
                    if d > s / 2 {
                        d - s
                    } else {
                        d
                    }
                })
                .collect(),
        )
    }

    /// Displacement vector of a Δ entry on a torus.
    pub fn displacement(&self, delta_index: usize) -> Option<Vec<i64>> {
        let Topology::Torus { rank, .. } = &self.topology else {
            return None;
        };
        let mut v = vec![0i64; *rank];
        let sym = &self.presentation.delta()[delta_index];
        if let Some(g) = sym.base {
            v[g] = if sym.is_inverse { -1 } else { 1 };
        }
        Some(v)
    }

    /// Directed graph distance from `start` along Δ edges.
    pub fn distances_from(&self, start: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        let k = self.presentation.delta().len();
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for d in 0..k {
                let w = self.shift(d, v);
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Whether both Δ₂ groupings (left `δδ'⁻¹`, right `δ⁻¹δ'`) map
    /// injectively into the quotient. When they do, the full operator is
    /// unitary exactly when the local condition equations hold.
    pub fn preserves_delta2(&self) -> bool {
        let p = &self.presentation;
        let injective = |elements: Vec<GroupElement>| {
            let mut seen = std::collections::HashSet::new();
            elements.iter().all(|u| seen.insert(self.vertex_of(u)))
        };
        injective(p.delta2_set()) && injective(p.right_condition_groups().into_iter().map(|(u, _)| u).collect())
    }
}

fn cyclic_images(presentation: &GroupPresentation, orders: &[usize]) -> Result<Vec<Vec<usize>>> {
    let rank = presentation.rank();
    if orders.len() != rank || orders.contains(&0) {
        return Err(Error::InvalidRealization(format!(
            "need {rank} positive cyclic orders, got {orders:?}"
        )));
    }
    if let GroupKind::CyclicFreeProduct(q) = presentation.kind() {
        for (i, (&r, &qi)) in orders.iter().zip(q).enumerate() {
            if !(qi as usize).is_multiple_of(r) {
                return Err(Error::InvalidRealization(format!(
                    "quotient order {r} for generator {} does not divide {qi}",
                    i + 1
                )));
            }
        }
    }
    // Disjoint cycles: generator i rotates its own block of points.
    let degree: usize = orders.iter().sum();
    let mut offset = 0;
    let mut images = Vec::with_capacity(rank);
    for &r in orders {
        let mut img: Vec<usize> = (0..degree).collect();
        for k in 0..r {
            img[offset + k] = offset + (k + 1) % r;
        }
        offset += r;
        images.push(img);
    }
    Ok(images)
}

/// `(x·y)(i) = y(x(i))`: apply `x` first.
fn perm_compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&i| y[i as usize]).collect()
}

fn perm_inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

fn perm_power(p: &[u32], e: i64) -> Vec<u32> {
    let mut acc: Vec<u32> = (0..p.len() as u32).collect();
    for _ in 0..e {
        acc = perm_compose(&acc, p);
    }
    acc
}

fn perm_is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i as u32 == j)
}
