//! Classification of Coxeter diagrams.
//!
//! The diagram of a vertex subset keeps exactly the pairs whose label
//! is not 2. Every connected component is matched against the catalog
//! of irreducible finite types (A, B, D, E6-E8, F4, H3, H4, I2(m)) and
//! Euclidean affine types (A~, B~, C~, D~, E~6-E~8, F~4, G~2);
//! everything else is indefinite. All catalog diagrams are paths,
//! single cycles, or trees with at most two forks, so recognition is a
//! fixed decision table on degrees, arm lengths, and label sequences.
//! No isomorphism search is involved and the matcher runs in linear
//! time in the component size.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{CoxError, Result};
use crate::graph::LabelledGraph;
use crate::label::EdgeLabel;

/// Irreducible finite types. The parameter is the rank (vertex count),
/// except for I2(m) where it is the edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

/// Irreducible Euclidean (affine) types. The parameter n is the usual
/// subscript; the diagram has n + 1 vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffineType {
    ATilde(usize),
    BTilde(usize),
    CTilde(usize),
    DTilde(usize),
    ETilde6,
    ETilde7,
    ETilde8,
    FTilde4,
    GTilde2,
}

/// Verdict for one irreducible diagram component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    Finite(FiniteType),
    Affine(AffineType),
    Indefinite,
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => write!(f, "E6"),
            FiniteType::E7 => write!(f, "E7"),
            FiniteType::E8 => write!(f, "E8"),
            FiniteType::F4 => write!(f, "F4"),
            FiniteType::H3 => write!(f, "H3"),
            FiniteType::H4 => write!(f, "H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::ATilde(n) => write!(f, "A~{n}"),
            AffineType::BTilde(n) => write!(f, "B~{n}"),
            AffineType::CTilde(n) => write!(f, "C~{n}"),
            AffineType::DTilde(n) => write!(f, "D~{n}"),
            AffineType::ETilde6 => write!(f, "E~6"),
            AffineType::ETilde7 => write!(f, "E~7"),
            AffineType::ETilde8 => write!(f, "E~8"),
            AffineType::FTilde4 => write!(f, "F~4"),
            AffineType::GTilde2 => write!(f, "G~2"),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::Finite(t) => t.fmt(f),
            CoxeterType::Affine(t) => t.fmt(f),
            CoxeterType::Indefinite => write!(f, "indefinite"),
        }
    }
}

impl Serialize for CoxeterType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl CoxeterType {
    /// The classifier reports each diagram under a single name; the
    /// aliases B2 = I2(4) and I2(3) = A2 map to the reported one.
    pub fn canonical(self) -> CoxeterType {
        match self {
            CoxeterType::Finite(FiniteType::B(2)) => CoxeterType::Finite(FiniteType::I2(4)),
            CoxeterType::Finite(FiniteType::I2(3)) => CoxeterType::Finite(FiniteType::A(2)),
            other => other,
        }
    }

    /// Number of diagram vertices, if the type denotes one diagram.
    pub fn vertex_count(&self) -> Option<usize> {
        Some(match self {
            CoxeterType::Finite(t) => match t {
                FiniteType::A(n) | FiniteType::B(n) | FiniteType::D(n) => *n,
                FiniteType::E6 => 6,
                FiniteType::E7 => 7,
                FiniteType::E8 => 8,
                FiniteType::F4 | FiniteType::H4 => 4,
                FiniteType::H3 => 3,
                FiniteType::I2(_) => 2,
            },
            CoxeterType::Affine(t) => match t {
                AffineType::ATilde(n)
                | AffineType::BTilde(n)
                | AffineType::CTilde(n)
                | AffineType::DTilde(n) => *n + 1,
                AffineType::ETilde6 => 7,
                AffineType::ETilde7 => 8,
                AffineType::ETilde8 => 9,
                AffineType::FTilde4 => 5,
                AffineType::GTilde2 => 3,
            },
            CoxeterType::Indefinite => return None,
        })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CoxeterType::Finite(_))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, CoxeterType::Affine(_))
    }
}

/// The diagram of a vertex subset: vertices plus every pair among them
/// whose label differs from 2 (including infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDiagram {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize, EdgeLabel)>,
}

/// Extracts the Coxeter diagram of a nonempty subset. Vertices keep
/// their identity in the ambient graph.
pub fn diagram(g: &LabelledGraph, subset: &[usize]) -> Result<CoxeterDiagram> {
    let mut vs = subset.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if vs.is_empty() {
        return Err(CoxError::EmptySubset);
    }
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        return Err(CoxError::VertexOutOfRange { v, n: g.n() });
    }
    let mut edges = Vec::new();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            let l = g.label(vs[i], vs[j]);
            if l != EdgeLabel::fin(2) {
                edges.push((vs[i], vs[j], l));
            }
        }
    }
    Ok(CoxeterDiagram { vertices: vs, edges })
}

impl CoxeterDiagram {
    /// Subset vertices in increasing order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Diagram edges (u < v, lexicographic), labels in {3, ..} or
    /// infinity.
    pub fn edges(&self) -> &[(usize, usize, EdgeLabel)] {
        &self.edges
    }

    /// Connected components, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<CoxeterDiagram> {
        let k = self.vertices.len();
        let local = |v: usize| self.vertices.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); k];
        for &(u, v, _) in &self.edges {
            let (a, b) = (local(u), local(v));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut comp = vec![usize::MAX; k];
        let mut count = 0;
        for root in 0..k {
            if comp[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            comp[root] = count;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        let mut out: Vec<CoxeterDiagram> = (0..count)
            .map(|c| CoxeterDiagram {
                vertices: (0..k).filter(|&v| comp[v] == c).map(|v| self.vertices[v]).collect(),
                edges: Vec::new(),
            })
            .collect();
        for &(u, v, l) in &self.edges {
            out[comp[local(u)]].edges.push((u, v, l));
        }
        out
    }
}

/// Matches one connected diagram against the catalogs. A component
/// that fits neither the finite nor the affine catalog is Indefinite.
pub fn classify_component(component: &CoxeterDiagram) -> CoxeterType {
    use CoxeterType::{Affine, Finite, Indefinite};

    let verts = component.vertices();
    let v_count = verts.len();
    if v_count == 1 {
        return Finite(FiniteType::A(1));
    }
    // The only catalog diagram with an infinity edge is A~1.
    if component.edges().iter().any(|&(_, _, l)| l.is_infinite()) {
        return if v_count == 2 { Affine(AffineType::ATilde(1)) } else { Indefinite };
    }

    let e_count = component.edges().len();
    let local = |v: usize| verts.binary_search(&v).unwrap();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); v_count];
    let mut all3 = true;
    for &(u, v, l) in component.edges() {
        let m = l.finite_value().expect("infinity handled above");
        all3 &= m == 3;
        let (a, b) = (local(u), local(v));
        adj[a].push((b, m));
        adj[b].push((a, m));
    }

    // A connected component with a cycle matches only the all-3 pure
    // cycle A~_n.
    if e_count >= v_count {
        let pure_cycle = e_count == v_count && adj.iter().all(|a| a.len() == 2);
        return if pure_cycle && all3 {
            Affine(AffineType::ATilde(v_count - 1))
        } else {
            Indefinite
        };
    }

    // Tree. Degree 4 appears only in the D~4 star; degree >= 5 never.
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    if max_degree >= 4 {
        let star = v_count == 5
            && all3
            && adj.iter().filter(|a| a.len() == 4).count() == 1
            && adj.iter().filter(|a| a.len() == 1).count() == 4;
        return if star { Affine(AffineType::DTilde(4)) } else { Indefinite };
    }

    let branch: Vec<usize> = (0..v_count).filter(|&v| adj[v].len() == 3).collect();
    match branch.len() {
        0 => classify_path(&adj),
        1 => classify_fork(branch[0], &adj, all3),
        2 => classify_double_fork(&branch, &adj, all3),
        _ => Indefinite,
    }
}

/// Label-sequence table for path diagrams (two or more vertices, all
/// labels finite).
fn classify_path(adj: &[Vec<(usize, u32)>]) -> CoxeterType {
    use AffineType::{BTilde, CTilde, FTilde4, GTilde2};
    use CoxeterType::{Affine, Finite, Indefinite};
    use FiniteType::{A, B, F4, H3, H4, I2};

    let v_count = adj.len();
    let start = (0..v_count).find(|&v| adj[v].len() == 1).expect("a path has endpoints");
    let mut ls = Vec::with_capacity(v_count - 1);
    let (mut prev, mut cur) = (usize::MAX, start);
    while ls.len() < v_count - 1 {
        let &(next, m) = adj[cur].iter().find(|&&(w, _)| w != prev).expect("interior degree 2");
        ls.push(m);
        prev = cur;
        cur = next;
    }

    if v_count == 2 {
        let m = ls[0];
        return Finite(if m == 3 { A(2) } else { I2(m) });
    }
    if ls.iter().all(|&m| m == 3) {
        return Finite(A(v_count));
    }
    if ls.iter().any(|&m| m >= 7) {
        return Indefinite;
    }
    let big: Vec<(usize, u32)> =
        ls.iter().copied().enumerate().filter(|&(_, m)| m != 3).collect();
    let last = ls.len() - 1;
    match big[..] {
        [(i, 4)] if i == 0 || i == last => Finite(B(v_count)),
        [(1, 4)] if v_count == 4 => Finite(F4),
        [(i, 4)] if v_count == 5 && (i == 1 || i == 2) => Affine(FTilde4),
        [(i, 5)] if (i == 0 || i == last) && v_count == 3 => Finite(H3),
        [(i, 5)] if (i == 0 || i == last) && v_count == 4 => Finite(H4),
        [(_, 6)] if v_count == 3 => Affine(GTilde2),
        [(0, 4), (j, 4)] if j == last && v_count == 3 => Affine(BTilde(2)),
        [(0, 4), (j, 4)] if j == last => Affine(CTilde(v_count - 1)),
        _ => Indefinite,
    }
}

/// Trees with exactly one degree-3 vertex: the D/E series when every
/// label is 3, or B~ when a lone 4 sits on the leaf edge of the long
/// arm of a (1, 1, t) fork.
fn classify_fork(b: usize, adj: &[Vec<(usize, u32)>], all3: bool) -> CoxeterType {
    use AffineType::{BTilde, ETilde6, ETilde7, ETilde8};
    use CoxeterType::{Affine, Finite, Indefinite};
    use FiniteType::{D, E6, E7, E8};

    let mut arms: Vec<Vec<u32>> = adj[b]
        .iter()
        .map(|&(nb, m)| {
            let mut labels = vec![m];
            let (mut prev, mut cur) = (b, nb);
            while adj[cur].len() == 2 {
                let &(next, lm) =
                    adj[cur].iter().find(|&&(w, _)| w != prev).expect("interior degree 2");
                labels.push(lm);
                prev = cur;
                cur = next;
            }
            labels
        })
        .collect();
    arms.sort_by_key(Vec::len);

    if all3 {
        return match (arms[0].len(), arms[1].len(), arms[2].len()) {
            (1, 1, k) => Finite(D(k + 3)),
            (1, 2, 2) => Finite(E6),
            (1, 2, 3) => Finite(E7),
            (1, 2, 4) => Finite(E8),
            (2, 2, 2) => Affine(ETilde6),
            (1, 3, 3) => Affine(ETilde7),
            (1, 2, 5) => Affine(ETilde8),
            _ => Indefinite,
        };
    }
    let non3: Vec<(usize, usize)> = arms
        .iter()
        .enumerate()
        .flat_map(|(i, arm)| {
            arm.iter().enumerate().filter(|&(_, &m)| m != 3).map(move |(p, _)| (i, p))
        })
        .collect();
    if let [(fa, pos)] = non3[..] {
        let arm = &arms[fa];
        if arm[pos] == 4
            && pos == arm.len() - 1
            && arms.iter().enumerate().all(|(i, other)| i == fa || other.len() == 1)
        {
            return Affine(BTilde(arm.len() + 2));
        }
    }
    Indefinite
}

/// Trees with two degree-3 vertices: only D~_n, the all-3 path with a
/// fork of two leaves at each end.
fn classify_double_fork(branch: &[usize], adj: &[Vec<(usize, u32)>], all3: bool) -> CoxeterType {
    if !all3 {
        return CoxeterType::Indefinite;
    }
    let two_leaves =
        |b: usize| adj[b].iter().filter(|&&(w, _)| adj[w].len() == 1).count() == 2;
    if two_leaves(branch[0]) && two_leaves(branch[1]) {
        CoxeterType::Affine(AffineType::DTilde(adj.len() - 1))
    } else {
        CoxeterType::Indefinite
    }
}

/// One classified irreducible component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedComponent {
    pub vertices: Vec<usize>,
    #[serde(rename = "type")]
    pub cox_type: CoxeterType,
}

/// Full decomposition of a subset into classified components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    /// Components partition the subset, ordered by smallest vertex.
    pub components: Vec<ClassifiedComponent>,
    /// True iff every component is finite.
    pub overall_finite: bool,
    /// Some affine component on at least 3 vertices, if one exists.
    pub overall_affine_rank3plus_witness: Option<Vec<usize>>,
}

/// Decomposes the diagram of a subset and classifies each component.
/// The empty subset has no components and counts as finite.
pub fn classify(g: &LabelledGraph, subset: &[usize]) -> ClassificationResult {
    let mut components = Vec::new();
    if !subset.is_empty() {
        let d = diagram(g, subset).expect("nonempty subset");
        for c in d.components() {
            let cox_type = classify_component(&c);
            components.push(ClassifiedComponent { vertices: c.vertices, cox_type });
        }
    }
    let overall_finite = components.iter().all(|c| c.cox_type.is_finite());
    let overall_affine_rank3plus_witness = components
        .iter()
        .find(|c| c.cox_type.is_affine() && c.vertices.len() >= 3)
        .map(|c| c.vertices.clone());
    ClassificationResult { components, overall_finite, overall_affine_rank3plus_witness }
}

/// True iff the subset generates a finite group: every component of
/// its diagram has finite type.
pub fn is_finite(g: &LabelledGraph, subset: &[usize]) -> bool {
    if subset.is_empty() {
        return true;
    }
    let d = diagram(g, subset).expect("nonempty subset");
    d.components().iter().all(|c| classify_component(c).is_finite())
}

/// Builds the reference diagram of a catalog type: exactly the diagram
/// edges, every other pair labelled 2. Fails on out-of-range
/// parameters (including Indefinite, which names no diagram).
pub fn catalog_instance(t: CoxeterType) -> Result<LabelledGraph> {
    use AffineType::*;
    use FiniteType::*;

    let bad = |msg: String| CoxError::InvalidRank(msg);
    // (vertex count, diagram edges); path_3s(a, b) is the all-3 path a-..-b.
    let path_3s = |a: usize, b: usize| (a..b).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
    let (v_count, mut edges): (usize, Vec<(usize, usize, u32)>) = match t {
        CoxeterType::Finite(ft) => match ft {
            A(n) if n >= 1 => (n, path_3s(0, n - 1)),
            B(n) if n >= 2 => {
                let mut e = path_3s(0, n - 1);
                e[0].2 = 4;
                (n, e)
            }
            D(n) if n >= 4 => {
                let mut e = vec![(0, 2, 3), (1, 2, 3)];
                e.extend(path_3s(2, n - 1));
                (n, e)
            }
            E6 => {
                let mut e = path_3s(0, 4);
                e.push((2, 5, 3));
                (6, e)
            }
            E7 => {
                let mut e = path_3s(0, 5);
                e.push((2, 6, 3));
                (7, e)
            }
            E8 => {
                let mut e = path_3s(0, 6);
                e.push((2, 7, 3));
                (8, e)
            }
            F4 => (4, vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)]),
            H3 => (3, vec![(0, 1, 5), (1, 2, 3)]),
            H4 => (4, vec![(0, 1, 5), (1, 2, 3), (2, 3, 3)]),
            I2(m) if m >= 3 && EdgeLabel::finite(m).is_ok() => (2, vec![(0, 1, m)]),
            other => return Err(bad(format!("no catalog diagram for {other:?}"))),
        },
        CoxeterType::Affine(at) => match at {
            ATilde(1) => {
                let mut g = LabelledGraph::filled(2, EdgeLabel::fin(2))?;
                g.set_label(0, 1, EdgeLabel::INFINITY);
                return Ok(g);
            }
            ATilde(n) if n >= 2 => {
                let mut e = path_3s(0, n);
                e.push((0, n, 3));
                (n + 1, e)
            }
            BTilde(2) => (3, vec![(0, 1, 4), (1, 2, 4)]),
            BTilde(n) if n >= 3 => {
                let mut e = vec![(0, 1, 4)];
                e.extend(path_3s(1, n - 2));
                e.push((n - 2, n - 1, 3));
                e.push((n - 2, n, 3));
                (n + 1, e)
            }
            CTilde(n) if n >= 3 => {
                let mut e = path_3s(0, n);
                e[0].2 = 4;
                e[n - 1].2 = 4;
                (n + 1, e)
            }
            DTilde(n) if n >= 4 => {
                let mut e = vec![(0, 2, 3), (1, 2, 3)];
                e.extend(path_3s(2, n - 2));
                e.push((n - 2, n - 1, 3));
                e.push((n - 2, n, 3));
                (n + 1, e)
            }
            ETilde6 => {
                let mut e = path_3s(0, 4);
                e.push((2, 5, 3));
                e.push((5, 6, 3));
                (7, e)
            }
            ETilde7 => {
                let mut e = path_3s(0, 6);
                e.push((3, 7, 3));
                (8, e)
            }
            ETilde8 => {
                let mut e = path_3s(0, 7);
                e.push((2, 8, 3));
                (9, e)
            }
            FTilde4 => (5, vec![(0, 1, 3), (1, 2, 4), (2, 3, 3), (3, 4, 3)]),
            GTilde2 => (3, vec![(0, 1, 6), (1, 2, 3)]),
            other => return Err(bad(format!("no catalog diagram for {other:?}"))),
        },
        CoxeterType::Indefinite => {
            return Err(bad("indefinite names no single diagram".to_string()))
        }
    };
    edges.sort_unstable();
    let mut g = LabelledGraph::filled(v_count, EdgeLabel::fin(2))?;
    for (u, v, m) in edges {
        g.set_label(u, v, EdgeLabel::fin(m));
    }
    Ok(g)
}

/// Every catalog type with subscript at most `max_rank`, plus I2(m)
/// for m in 4..=max_i2, in a fixed order. Only canonical names appear:
/// no B2 and no I2(3).
pub fn catalog(max_rank: usize, max_i2: u32) -> Vec<CoxeterType> {
    use AffineType::*;
    use CoxeterType::{Affine, Finite};
    use FiniteType::*;

    let mut out = Vec::new();
    out.extend((1..=max_rank).map(|n| Finite(A(n))));
    out.extend((3..=max_rank).map(|n| Finite(B(n))));
    out.extend((4..=max_rank).map(|n| Finite(D(n))));
    for t in [Finite(E6), Finite(E7), Finite(E8), Finite(F4), Finite(H3), Finite(H4)] {
        if t.vertex_count().unwrap() <= max_rank {
            out.push(t);
        }
    }
    out.extend((4..=max_i2).map(|m| Finite(I2(m))));
    out.extend((1..=max_rank).map(|n| Affine(ATilde(n))));
    out.extend((2..=max_rank).map(|n| Affine(BTilde(n))));
    out.extend((3..=max_rank).map(|n| Affine(CTilde(n))));
    out.extend((4..=max_rank).map(|n| Affine(DTilde(n))));
    for t in
        [Affine(ETilde6), Affine(ETilde7), Affine(ETilde8), Affine(FTilde4), Affine(GTilde2)]
    {
        if t.vertex_count().unwrap() <= max_rank + 1 {
            out.push(t);
        }
    }
    out
}
