//! Edge-labelled graphs on {0, .., n-1}.
//!
//! Every unordered pair carries a label in {2, 3, ..} or infinity; a
//! pair labelled infinity is treated as a non-edge. Labels are stored
//! densely in a flat upper triangle, so the natural size limit is a few
//! thousand vertices.

use serde::{Deserialize, Serialize};

use crate::bits::VertexSet;
use crate::error::{CoxError, Result};
use crate::label::EdgeLabel;
use crate::rng;
use crate::schedule::{EvaluatedSchedule, ProbabilitySchedule};

/// Hard cap on dense graphs: 5000 vertices is 12.5M labels, beyond
/// that the flat triangle stops being a sensible representation.
pub const MAX_DENSE_VERTICES: usize = 5000;

/// A complete edge-labelling of the pairs of {0, .., n-1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct LabelledGraph {
    n: usize,
    /// Upper triangle in row-major order: (0,1), (0,2), .., (1,2), ..
    labels: Vec<EdgeLabel>,
}

impl LabelledGraph {
    /// Graph with every pair carrying the same label.
    pub fn filled(n: usize, label: EdgeLabel) -> Result<LabelledGraph> {
        if n > MAX_DENSE_VERTICES {
            return Err(CoxError::GraphTooLarge { n, cap: MAX_DENSE_VERTICES });
        }
        Ok(LabelledGraph { n, labels: vec![label; n * n.saturating_sub(1) / 2] })
    }

    /// Graph from an explicit edge list; pairs not listed are labelled
    /// infinity. Rejects loops, out-of-range endpoints, and pairs
    /// listed twice.
    pub fn from_edges(n: usize, edges: &[(usize, usize, EdgeLabel)]) -> Result<LabelledGraph> {
        let mut g = LabelledGraph::filled(n, EdgeLabel::INFINITY)?;
        let mut seen = vec![false; g.labels.len()];
        for &(u, v, label) in edges {
            if u >= n {
                return Err(CoxError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(CoxError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(CoxError::Config(format!("loop at vertex {u}")));
            }
            let i = triangle_index(n, u, v);
            if seen[i] {
                return Err(CoxError::Config(format!("pair ({u}, {v}) listed twice")));
            }
            seen[i] = true;
            g.labels[i] = label;
        }
        Ok(g)
    }

    /// Samples a graph: every pair independently gets label m with
    /// probability p_m(n) and infinity with the leftover mass. The
    /// outcome of a pair is a pure function of (seed, n, pair), so a
    /// graph is reproducible from its seed alone.
    pub fn sample(n: usize, schedule: &ProbabilitySchedule, seed: u64) -> Result<LabelledGraph> {
        let mut g = LabelledGraph::filled(n, EdgeLabel::INFINITY)?;
        if n < 2 {
            return Ok(g);
        }
        let cuts = categorical_cuts(&schedule.evaluate(n)?);
        for u in 0..n {
            for v in (u + 1)..n {
                let r = rng::pair_value(seed, n, u, v) as u128;
                let i = triangle_index(n, u, v);
                for &(cut, label) in &cuts {
                    if r < cut {
                        g.labels[i] = label;
                        break;
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Label of the pair {u, v}. Panics if u == v or either endpoint
    /// is out of range, like slice indexing.
    pub fn label(&self, u: usize, v: usize) -> EdgeLabel {
        self.labels[triangle_index(self.n, u, v)]
    }

    /// Overwrites the label of the pair {u, v}. Panics like `label`.
    pub fn set_label(&mut self, u: usize, v: usize, label: EdgeLabel) {
        self.labels[triangle_index(self.n, u, v)] = label;
    }

    /// Unordered pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |u| ((u + 1)..n).map(move |v| (u, v)))
    }

    /// Pairs with a finite label, in lexicographic order.
    pub fn finite_edges(&self) -> impl Iterator<Item = (usize, usize, EdgeLabel)> + '_ {
        self.pairs().filter_map(|(u, v)| {
            let l = self.label(u, v);
            l.is_finite().then_some((u, v, l))
        })
    }

    /// Subgraph induced by a vertex set. The set is sorted and deduped,
    /// and vertex i of the result is the i-th smallest input vertex.
    pub fn induced(&self, vertices: &[usize]) -> Result<LabelledGraph> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if let Some(&v) = vs.iter().find(|&&v| v >= self.n) {
            return Err(CoxError::VertexOutOfRange { v, n: self.n });
        }
        let k = vs.len();
        let mut g = LabelledGraph::filled(k, EdgeLabel::INFINITY)?;
        for a in 0..k {
            for b in (a + 1)..k {
                g.set_label(a, b, self.label(vs[a], vs[b]));
            }
        }
        Ok(g)
    }

    /// Unlabelled view keeping exactly the pairs with the given label.
    pub fn label_projection(&self, label: EdgeLabel) -> SimpleGraph {
        self.projection(|l| l == label)
    }

    /// Unlabelled view keeping every pair with a finite label.
    pub fn finite_projection(&self) -> SimpleGraph {
        self.projection(|l| l.is_finite())
    }

    pub(crate) fn projection(&self, keep: impl Fn(EdgeLabel) -> bool) -> SimpleGraph {
        let mut rows = vec![VertexSet::empty(self.n); self.n];
        for (u, v) in self.pairs() {
            if keep(self.label(u, v)) {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
        SimpleGraph { n: self.n, rows }
    }

    /// GraphViz rendering of the Coxeter diagram: pairs labelled 2 are
    /// omitted, finite labels >= 3 are solid edges annotated with the
    /// label, and infinity is a dashed edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph diagram {\n");
        for v in 0..self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.pairs() {
            match self.label(u, v).finite_value() {
                Some(2) => {}
                Some(m) => out.push_str(&format!("  {u} -- {v} [label=\"{m}\"];\n")),
                None => out.push_str(&format!("  {u} -- {v} [style=dashed];\n")),
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Position of {u, v} in the flat upper triangle.
fn triangle_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    assert!(a < b && b < n, "pair ({u}, {v}) out of range for n = {n}");
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// Cumulative u64-scaled thresholds for the finite labels; a pair draw
/// r lands on the first label whose threshold exceeds r, or infinity.
fn categorical_cuts(ev: &EvaluatedSchedule) -> Vec<(u128, EdgeLabel)> {
    let mut cuts = Vec::with_capacity(ev.finite_probabilities().len());
    let mut cum = 0.0f64;
    for &(m, p) in ev.finite_probabilities() {
        cum += p;
        let cut = (cum.min(1.0) * 18_446_744_073_709_551_616.0) as u128;
        cuts.push((cut, EdgeLabel::fin(m)));
    }
    cuts
}

/// An unlabelled graph as adjacency bitsets; projections of a
/// `LabelledGraph` land here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl SimpleGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        self.rows[v].to_vec()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub(crate) fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, EdgeLabel)>,
}

impl TryFrom<GraphJson> for LabelledGraph {
    type Error = CoxError;

    fn try_from(json: GraphJson) -> Result<Self> {
        LabelledGraph::from_edges(json.n, &json.edges)
    }
}

impl From<LabelledGraph> for GraphJson {
    fn from(g: LabelledGraph) -> GraphJson {
        GraphJson { n: g.n, edges: g.finite_edges().collect() }
    }
}
