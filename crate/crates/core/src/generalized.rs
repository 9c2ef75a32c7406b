//! Walks on arbitrary finite digraphs with a Hilbert space `H_x` per vertex
//! and a linear map `M_{x,y} : H_x → H_y` per edge.
//!
//! `W = Σ_{(x,y)} M_{x,y}` is unitary exactly when
//!
//! ```text
//! Σ_y M_{x,y}† M_{x',y} = [x = x'] 1_x      (pairs sharing an out-neighbour)
//! Σ_x M_{x,y} M_{x,y'}† = [y = y'] 1_y      (pairs sharing an in-neighbour)
//! ```

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coins::CoinSet;
use crate::error::{Error, Result};
use crate::group::GraphRealization;
use crate::linalg::{self, ComplexMatrix, ComplexVector, DEFAULT_MATRIX_TOL};
use crate::unitarity::{ReportRow, Side, SparseOperator, UnitarityReport, FULL_OPERATOR_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    /// Vertices are `0..labels.len()`; repeated edges are merged.
    pub fn new(labels: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidGraph("vertex labels must be distinct".into()));
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(x, y) in &edges {
            if x >= n || y >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({x}, {y}) leaves the vertex range 0..{n}"
                )));
            }
            out_adj[x].push(y);
            in_adj[y].push(x);
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Self {
            labels,
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Vertices labelled `0, 1, …`.
    pub fn unlabeled(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|k| k.to_string()).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x, y))
    }

    /// Sorted out-neighbours.
    pub fn out_neighbors(&self, x: usize) -> &[usize] {
        &self.out_adj[x]
    }

    /// Sorted in-neighbours.
    pub fn in_neighbors(&self, y: usize) -> &[usize] {
        &self.in_adj[y]
    }
}

/// `dim(H_x)` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpaces(Vec<usize>);

impl VertexSpaces {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(v) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} has a zero-dimensional space"
            )));
        }
        Ok(Self(dims))
    }

    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dim(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Start of each vertex block in the direct sum.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }
}

/// `M_{x,y}` keyed by edge.
#[derive(Clone, Debug, Default)]
pub struct EdgeMapSet(BTreeMap<(usize, usize), ComplexMatrix>);

impl EdgeMapSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: usize, y: usize, m: ComplexMatrix) -> Option<ComplexMatrix> {
        self.0.insert((x, y), m)
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&ComplexMatrix> {
        self.0.get(&(x, y))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &ComplexMatrix)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A digraph with its vertex spaces and edge maps.
#[derive(Clone, Debug)]
pub struct GeneralizedWalk {
    pub graph: Digraph,
    pub spaces: VertexSpaces,
    pub maps: EdgeMapSet,
}

fn validate(graph: &Digraph, spaces: &VertexSpaces, maps: &EdgeMapSet) -> Result<()> {
    if spaces.dims().len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            found: spaces.dims().len(),
        });
    }
    for (&(x, y), m) in maps.iter() {
        if !graph.has_edge(x, y) {
            return Err(Error::InvalidGraph(format!(
                "map given on non-edge ({}, {})",
                graph.label(x),
                graph.label(y)
            )));
        }
        if m.nrows() != spaces.dim(y) || m.ncols() != spaces.dim(x) {
            return Err(Error::DimensionMismatch {
                expected: spaces.dim(y) * spaces.dim(x),
                found: m.nrows() * m.ncols(),
            });
        }
        linalg::ensure_finite(m, "edge map")?;
    }
    if let Some((x, y)) = graph.edges().find(|&(x, y)| maps.get(x, y).is_none()) {
        return Err(Error::InvalidGraph(format!(
            "edge ({}, {}) has no map",
            graph.label(x),
            graph.label(y)
        )));
    }
    Ok(())
}

/// Evaluates both condition families on every ordered vertex pair that
/// shares a neighbour, plus every diagonal pair.
pub fn check_generalized_conditions(
    graph: &Digraph,
    spaces: &VertexSpaces,
    maps: &EdgeMapSet,
    tol: f64,
) -> Result<UnitarityReport> {
    validate(graph, spaces, maps)?;
    let n = graph.vertex_count();
    let m = |x: usize, y: usize| maps.get(x, y).expect("validated");

    let mut left: BTreeMap<(usize, usize), ComplexMatrix> = BTreeMap::new();
    let mut right: BTreeMap<(usize, usize), ComplexMatrix> = BTreeMap::new();
    for x in 0..n {
        left.insert((x, x), ComplexMatrix::zeros(spaces.dim(x), spaces.dim(x)));
        right.insert((x, x), ComplexMatrix::zeros(spaces.dim(x), spaces.dim(x)));
    }
    for y in 0..n {
        for &x in graph.in_neighbors(y) {
            for &x2 in graph.in_neighbors(y) {
                let term = m(x, y).adjoint() * m(x2, y);
                *left
                    .entry((x, x2))
                    .or_insert_with(|| ComplexMatrix::zeros(spaces.dim(x), spaces.dim(x2))) += term;
            }
        }
    }
    for x in 0..n {
        for &y in graph.out_neighbors(x) {
            for &y2 in graph.out_neighbors(x) {
                let term = m(x, y) * m(x, y2).adjoint();
                *right
                    .entry((y, y2))
                    .or_insert_with(|| ComplexMatrix::zeros(spaces.dim(y), spaces.dim(y2))) += term;
            }
        }
    }
    let row = |side: Side, (a, b): (usize, usize), sum: &ComplexMatrix| ReportRow {
        side,
        u: format!("{},{}", graph.label(a), graph.label(b)),
        residual: if a == b {
            linalg::identity_defect(sum)
        } else {
            linalg::max_abs(sum)
        },
    };
    let rows = left
        .iter()
        .map(|(&k, s)| row(Side::Left, k, s))
        .chain(right.iter().map(|(&k, s)| row(Side::Right, k, s)))
        .collect();
    Ok(UnitarityReport::from_rows(rows, tol))
}

fn sparse_operator(graph: &Digraph, spaces: &VertexSpaces, maps: &EdgeMapSet) -> Result<SparseOperator> {
    validate(graph, spaces, maps)?;
    let total = spaces.total();
    if total > FULL_OPERATOR_CAP {
        return Err(Error::SizeCap {
            required: total,
            cap: FULL_OPERATOR_CAP,
        });
    }
    let off = spaces.offsets();
    let mut triplets = Vec::new();
    for (&(x, y), m) in maps.iter() {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                triplets.push((off[y] + i, off[x] + j, m[(i, j)]));
            }
        }
    }
    Ok(SparseOperator::from_triplets(total, triplets))
}

/// Dense `W` on `⊕_x H_x` with block `(y, x) = M_{x,y}`.
pub fn build_generalized_operator(graph: &Digraph, spaces: &VertexSpaces, maps: &EdgeMapSet) -> Result<ComplexMatrix> {
    Ok(sparse_operator(graph, spaces, maps)?.to_dense())
}

/// `(‖W†W − I‖_max, ‖WW† − I‖_max)` for the generalized operator.
pub fn generalized_oracle(graph: &Digraph, spaces: &VertexSpaces, maps: &EdgeMapSet) -> Result<(f64, f64)> {
    let d = sparse_operator(graph, spaces, maps)?.unitarity_defects();
    Ok((d.left, d.right))
}

fn check_frame(frame: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if frame.nrows() != dim || frame.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: frame.ncols(),
        });
    }
    let defect = linalg::identity_defect(&(frame.adjoint() * frame));
    if defect > DEFAULT_MATRIX_TOL {
        return Err(Error::NotUnitary {
            what: format!("{what} (frame not orthonormal)"),
            defect,
        });
    }
    Ok(())
}

/// Rank-one coin `M_{x,y} = |φ_y^in(x)⟩⟨φ_x^out(y)|`.
///
/// `bases_in[y]` has one column per in-neighbour of `y` and `bases_out[x]`
/// one column per out-neighbour of `x`, both in ascending neighbour order.
/// Every vertex needs equal, nonzero in- and out-degree; `dim(H_x)` is that
/// degree.
pub fn coin_solution(
    graph: &Digraph,
    bases_in: &[ComplexMatrix],
    bases_out: &[ComplexMatrix],
) -> Result<GeneralizedWalk> {
    let n = graph.vertex_count();
    let dims = degrees(graph)?;
    if bases_in.len() != n || bases_out.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bases_in.len().min(bases_out.len()),
        });
    }
    for x in 0..n {
        check_frame(&bases_in[x], dims[x], &format!("incoming frame at {}", graph.label(x)))?;
        check_frame(&bases_out[x], dims[x], &format!("outgoing frame at {}", graph.label(x)))?;
    }
    let mut maps = EdgeMapSet::new();
    for (x, y) in graph.edges() {
        let in_pos = graph.in_neighbors(y).binary_search(&x).expect("edge is listed");
        let out_pos = graph.out_neighbors(x).binary_search(&y).expect("edge is listed");
        let ket: ComplexVector = bases_in[y].column(in_pos).into_owned();
        let bra: ComplexVector = bases_out[x].column(out_pos).into_owned();
        maps.insert(x, y, linalg::dyad(&ket, &bra));
    }
    Ok(GeneralizedWalk {
        graph: graph.clone(),
        spaces: VertexSpaces::new(dims)?,
        maps,
    })
}

/// Common in/out degree of every vertex, rejecting imbalance and isolated
/// vertices.
pub fn degrees(graph: &Digraph) -> Result<Vec<usize>> {
    (0..graph.vertex_count())
        .map(|x| {
            let (i, o) = (graph.in_neighbors(x).len(), graph.out_neighbors(x).len());
            if i != o {
                Err(Error::DegreeImbalance {
                    vertex: graph.label(x).to_string(),
                    in_degree: i,
                    out_degree: o,
                })
            } else if i == 0 {
                Err(Error::InvalidGraph(format!("vertex {} has no edges", graph.label(x))))
            } else {
                Ok(i)
            }
        })
        .collect()
}

/// Identity frames for every vertex.
pub fn canonical_frames(graph: &Digraph) -> Result<Vec<ComplexMatrix>> {
    Ok(degrees(graph)?.into_iter().map(linalg::identity).collect())
}

/// Haar-random frames for every vertex.
pub fn random_frames<R: Rng + ?Sized>(graph: &Digraph, rng: &mut R) -> Result<Vec<ComplexMatrix>> {
    Ok(degrees(graph)?
        .into_iter()
        .map(|d| linalg::random_unitary(d, rng))
        .collect())
}

/// Cayley digraph of a realization, vertices in realization order.
pub fn cayley_digraph(realization: &GraphRealization) -> Result<Digraph> {
    let labels = (0..realization.vertex_count()).map(|v| realization.label(v)).collect();
    Digraph::new(labels, realization.edges().into_iter().map(|(x, y, _)| (x, y)))
}

/// The Cayley walk as a generalized walk: uniform spaces and
/// `M_{x, xδ} = M_δ`. Distinct Δ entries landing on the same vertex have
/// their coins added.
pub fn embed_cayley_walk(coins: &CoinSet, realization: &GraphRealization) -> Result<GeneralizedWalk> {
    if coins.presentation() != realization.presentation() {
        return Err(Error::IncompatiblePresentation(format!(
            "coins target {}, realization is of {}",
            coins.presentation().spec(),
            realization.presentation().spec()
        )));
    }
    let graph = cayley_digraph(realization)?;
    let mut maps = EdgeMapSet::new();
    for (x, y, k) in realization.edges() {
        let m = &coins.coins()[k];
        match maps.0.get_mut(&(x, y)) {
            Some(acc) => *acc += m,
            None => {
                maps.insert(x, y, m.clone());
            }
        }
    }
    Ok(GeneralizedWalk {
        spaces: VertexSpaces::uniform(graph.vertex_count(), coins.dim())?,
        graph,
        maps,
    })
}

/// Union of edge-disjoint random directed cycles over `n` vertices: a
/// spanning cycle plus `extra` more attempts. In- and out-degree agree at
/// every vertex.
pub fn random_eulerian_digraph<R: Rng + ?Sized>(n: usize, extra: usize, rng: &mut R) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: BTreeSet<(usize, usize)> = (0..n).map(|k| (order[k], order[(k + 1) % n])).collect();
    for _ in 0..extra {
        let len = rng.random_range(1..=n);
        order.shuffle(rng);
        let cycle: Vec<(usize, usize)> = (0..len).map(|k| (order[k], order[(k + 1) % len])).collect();
        if cycle.iter().all(|e| !edges.contains(e)) {
            edges.extend(cycle);
        }
    }
    Digraph::unlabeled(n, edges)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkDoc {
    vertices: Vec<String>,
    dims: BTreeMap<String, usize>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl GeneralizedWalk {
    pub fn check(&self, tol: f64) -> Result<UnitarityReport> {
        check_generalized_conditions(&self.graph, &self.spaces, &self.maps, tol)
    }

    pub fn operator(&self) -> Result<ComplexMatrix> {
        build_generalized_operator(&self.graph, &self.spaces, &self.maps)
    }

    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let doc = WalkDoc {
            vertices: g.labels().to_vec(),
            dims: (0..g.vertex_count())
                .map(|v| (g.label(v).to_string(), self.spaces.dim(v)))
                .collect(),
            edges: self
                .maps
                .iter()
                .map(|(&(x, y), m)| EdgeDoc {
                    from: g.label(x).to_string(),
                    to: g.label(y).to_string(),
                    matrix: linalg::matrix_to_rows(m),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("walks serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WalkDoc = serde_json::from_str(text)?;
        let index: BTreeMap<&str, usize> = doc.vertices.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };
        let dims = doc
            .vertices
            .iter()
            .map(|v| {
                doc.dims
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::Format(format!("no dimension for vertex `{v}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = doc.dims.keys().find(|k| !index.contains_key(k.as_str())) {
            return Err(Error::InvalidGraph(format!(
                "dimension given for unknown vertex `{extra}`"
            )));
        }
        let mut maps = EdgeMapSet::new();
        let mut edges = Vec::new();
        for e in &doc.edges {
            let (x, y) = (lookup(&e.from)?, lookup(&e.to)?);
            if maps.insert(x, y, linalg::matrix_from_rows(&e.matrix)?).is_some() {
                return Err(Error::InvalidGraph(format!("edge ({}, {}) listed twice", e.from, e.to)));
            }
            edges.push((x, y));
        }
        let graph = Digraph::new(doc.vertices.clone(), edges)?;
        let spaces = VertexSpaces::new(dims)?;
        validate(&graph, &spaces, &maps)?;
        Ok(Self { graph, spaces, maps })
    }
}
