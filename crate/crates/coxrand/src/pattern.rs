//! Labelled subgraph patterns and their symmetry factors.
//!
//! A pattern fixes a constraint for every pair of its `k` vertices: an exact
//! label, a label class ("any finite label >= b"), or no constraint at all.
//! Instances of a pattern in a host graph are counted unordered, i.e. the
//! number of ordered embeddings divided by the pattern's automorphism count.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{CoxError, Result};
use crate::graph::LabelledGraph;
use crate::label::EdgeLabel;
use crate::schedule::EvaluatedSchedule;

use num_rational::BigRational;
use num_traits::One;

/// Largest pattern for which automorphisms are enumerated (10! permutations).
pub const MAX_PATTERN_VERTICES: usize = 10;

/// Constraint a pattern places on one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternLabel {
    /// The pair must carry exactly this label (possibly infinity).
    Exact(EdgeLabel),
    /// The pair must carry a finite label >= the bound.
    AtLeast(u32),
    /// The pair is unconstrained.
    Any,
}

impl PatternLabel {
    /// Whether a concrete edge label satisfies this constraint.
    pub fn matches(self, label: EdgeLabel) -> bool {
        match self {
            PatternLabel::Exact(want) => label == want,
            PatternLabel::AtLeast(bound) => match label.finite_value() {
                Some(m) => m >= bound,
                None => false,
            },
            PatternLabel::Any => true,
        }
    }

    /// Probability that a random pair satisfies this constraint.
    pub fn probability(self, ev: &EvaluatedSchedule) -> f64 {
        match self {
            PatternLabel::Exact(label) => ev.probability(label),
            PatternLabel::AtLeast(bound) => ev.class_probability(bound),
            PatternLabel::Any => 1.0,
        }
    }

    /// Exact rational form of `probability`.
    pub fn rational(self, ev: &EvaluatedSchedule) -> BigRational {
        match self {
            PatternLabel::Exact(label) => ev.rational(label),
            PatternLabel::AtLeast(bound) => ev.class_rational(bound),
            PatternLabel::Any => BigRational::one(),
        }
    }

    /// A concrete label satisfying the constraint, used to materialize
    /// pattern instances. `Any` pairs are realized as 2.
    pub fn representative(self) -> EdgeLabel {
        match self {
            PatternLabel::Exact(label) => label,
            PatternLabel::AtLeast(bound) => EdgeLabel::fin(bound),
            PatternLabel::Any => EdgeLabel::fin(2),
        }
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternLabel::Exact(label) => write!(f, "{label}"),
            PatternLabel::AtLeast(bound) => write!(f, ">={bound}"),
            PatternLabel::Any => write!(f, "any"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Number(u32),
    Word(String),
    Class { at_least: u32 },
}

impl Serialize for PatternLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            PatternLabel::Exact(label) => match label.finite_value() {
                Some(m) => LabelRepr::Number(m),
                None => LabelRepr::Word("inf".to_owned()),
            },
            PatternLabel::AtLeast(bound) => LabelRepr::Class { at_least: bound },
            PatternLabel::Any => LabelRepr::Word("any".to_owned()),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match LabelRepr::deserialize(deserializer)? {
            LabelRepr::Number(m) => {
                let label = EdgeLabel::finite(m).map_err(D::Error::custom)?;
                Ok(PatternLabel::Exact(label))
            }
            LabelRepr::Word(word) => match word.as_str() {
                "inf" | "infinity" | "oo" => Ok(PatternLabel::Exact(EdgeLabel::INFINITY)),
                "any" => Ok(PatternLabel::Any),
                other => Err(D::Error::custom(format!("unknown pattern label {other:?}"))),
            },
            LabelRepr::Class { at_least } => {
                if at_least < 3 {
                    return Err(D::Error::custom("label class bound must be >= 3"));
                }
                Ok(PatternLabel::AtLeast(at_least))
            }
        }
    }
}

/// A pattern on `k` vertices with a constraint for every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    k: usize,
    labels: Vec<PatternLabel>,
}

fn triangle_index(k: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    assert!(a < b && b < k, "pair ({u}, {v}) out of range for {k} vertices");
    a * (2 * k - a - 1) / 2 + (b - a - 1)
}

impl PatternGraph {
    /// Pattern with every pair carrying the same constraint.
    pub fn filled(k: usize, label: PatternLabel) -> Result<PatternGraph> {
        if k < 2 {
            return Err(CoxError::Config("a pattern needs at least 2 vertices".into()));
        }
        Ok(PatternGraph { k, labels: vec![label; k * (k - 1) / 2] })
    }

    /// Pattern with the listed pairs constrained and all others unconstrained.
    pub fn from_pairs(k: usize, pairs: &[(usize, usize, PatternLabel)]) -> Result<PatternGraph> {
        let mut pattern = PatternGraph::filled(k, PatternLabel::Any)?;
        let mut seen = vec![false; pattern.labels.len()];
        for &(u, v, label) in pairs {
            if u == v {
                return Err(CoxError::Config(format!("pattern pair ({u}, {v}) is a loop")));
            }
            if u >= k || v >= k {
                return Err(CoxError::VertexOutOfRange { v: u.max(v), n: k });
            }
            let idx = triangle_index(k, u, v);
            if seen[idx] {
                return Err(CoxError::Config(format!("duplicate pattern pair ({u}, {v})")));
            }
            seen[idx] = true;
            pattern.labels[idx] = label;
        }
        Ok(pattern)
    }

    /// Number of pattern vertices.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Constraint on the pair {u, v}.
    pub fn label(&self, u: usize, v: usize) -> PatternLabel {
        self.labels[triangle_index(self.k, u, v)]
    }

    /// Overwrite the constraint on the pair {u, v}.
    pub fn set_label(&mut self, u: usize, v: usize, label: PatternLabel) {
        let idx = triangle_index(self.k, u, v);
        self.labels[idx] = label;
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, PatternLabel)> + '_ {
        let k = self.k;
        (0..k).flat_map(move |u| (u + 1..k).map(move |v| (u, v, self.label(u, v))))
    }

    /// A smallest concrete graph containing the pattern exactly once,
    /// realizing each constraint by its representative label.
    pub fn instance(&self) -> LabelledGraph {
        let edges: Vec<(usize, usize, EdgeLabel)> = self
            .pairs()
            .map(|(u, v, label)| (u, v, label.representative()))
            .collect();
        LabelledGraph::from_edges(self.k, &edges).expect("pattern pairs are in range")
    }

    /// Number of label-preserving vertex permutations.
    pub fn automorphism_count(&self) -> Result<u64> {
        if self.k > MAX_PATTERN_VERTICES {
            return Err(CoxError::PatternTooLarge { k: self.k, max: MAX_PATTERN_VERTICES });
        }
        let mut perm: Vec<usize> = (0..self.k).collect();
        let mut count = 0u64;
        loop {
            let preserves = self
                .pairs()
                .all(|(u, v, label)| self.label(perm[u], perm[v]) == label);
            if preserves {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(count)
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Unordered instances of the pattern in the graph: ordered embeddings
/// divided by the automorphism count.
pub fn count_embeddings(graph: &LabelledGraph, pattern: &PatternGraph) -> Result<u64> {
    let b = pattern.automorphism_count()?;
    if pattern.k() > graph.n() {
        return Ok(0);
    }
    let ordered = count_embeddings_ordered(graph, pattern);
    debug_assert_eq!(ordered % b, 0);
    Ok(ordered / b)
}

fn count_embeddings_ordered(graph: &LabelledGraph, pattern: &PatternGraph) -> u64 {
    let mut assignment = Vec::with_capacity(pattern.k());
    let mut used = vec![false; graph.n()];
    extend_embedding(graph, pattern, &mut assignment, &mut used)
}

fn extend_embedding(
    graph: &LabelledGraph,
    pattern: &PatternGraph,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
) -> u64 {
    let depth = assignment.len();
    if depth == pattern.k() {
        return 1;
    }
    let mut count = 0;
    for w in 0..graph.n() {
        if used[w] {
            continue;
        }
        let consistent = (0..depth)
            .all(|d| pattern.label(d, depth).matches(graph.label(assignment[d], w)));
        if !consistent {
            continue;
        }
        assignment.push(w);
        used[w] = true;
        count += extend_embedding(graph, pattern, assignment, used);
        assignment.pop();
        used[w] = false;
    }
    count
}

/// Complete graph on `k` vertices with every pair labelled 2.
pub fn all2_clique(k: usize) -> Result<PatternGraph> {
    PatternGraph::filled(k, PatternLabel::Exact(EdgeLabel::fin(2)))
}

/// Triangle with the three pair constraints (0,1), (1,2), (0,2).
pub fn triangle(labels: [PatternLabel; 3]) -> PatternGraph {
    PatternGraph::from_pairs(
        3,
        &[(0, 1, labels[0]), (1, 2, labels[1]), (0, 2, labels[2])],
    )
    .expect("triangle pairs are in range")
}

/// Cycle of 3-labelled edges on `k` vertices, other pairs unconstrained.
pub fn three_cycle(k: usize) -> Result<PatternGraph> {
    if k < 3 {
        return Err(CoxError::Config(format!("a cycle needs at least 3 vertices, got {k}")));
    }
    let three = PatternLabel::Exact(EdgeLabel::fin(3));
    let mut pairs: Vec<(usize, usize, PatternLabel)> =
        (0..k - 1).map(|i| (i, i + 1, three)).collect();
    pairs.push((k - 1, 0, three));
    PatternGraph::from_pairs(k, &pairs)
}

fn three_tree(vertices: usize, edges: &[(usize, usize)]) -> PatternGraph {
    let two = PatternLabel::Exact(EdgeLabel::fin(2));
    let three = PatternLabel::Exact(EdgeLabel::fin(3));
    let mut pattern = PatternGraph::filled(vertices, two).expect("trees have >= 2 vertices");
    for &(u, v) in edges {
        pattern.set_label(u, v, three);
    }
    pattern
}

/// The trees on `vertices` vertices (2 <= vertices <= 5), one pattern per
/// isomorphism class, with 3-labelled tree edges and 2-labels elsewhere.
pub fn three_trees(vertices: usize) -> Result<Vec<PatternGraph>> {
    let shapes: &[&[(usize, usize)]] = match vertices {
        2 => &[&[(0, 1)]],
        3 => &[&[(0, 1), (1, 2)]],
        4 => &[&[(0, 1), (1, 2), (2, 3)], &[(0, 1), (0, 2), (0, 3)]],
        5 => &[
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            &[(0, 1), (1, 2), (2, 3), (2, 4)],
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        ],
        other => {
            return Err(CoxError::Config(format!(
                "tree patterns are catalogued for 2..=5 vertices, got {other}"
            )))
        }
    };
    Ok(shapes.iter().map(|edges| three_tree(vertices, edges)).collect())
}

/// Two edges sharing a vertex, both in the label class >= `bound`.
pub fn b_pair(bound: u32) -> PatternGraph {
    let class = PatternLabel::AtLeast(bound);
    PatternGraph::from_pairs(3, &[(0, 1, class), (1, 2, class)])
        .expect("pair indices are in range")
}

/// Square of 2-labelled edges whose diagonals are labelled infinity.
pub fn empty_square() -> PatternGraph {
    let two = PatternLabel::Exact(EdgeLabel::fin(2));
    let inf = PatternLabel::Exact(EdgeLabel::INFINITY);
    PatternGraph::from_pairs(
        4,
        &[
            (0, 1, two),
            (1, 2, two),
            (2, 3, two),
            (3, 0, two),
            (0, 2, inf),
            (1, 3, inf),
        ],
    )
    .expect("square pairs are in range")
}

/// The Z_k pattern on 2k+2 vertices: vertices 0..=k are x_0^+..x_k^+ and
/// vertices k+1..=2k+1 are x_0^-..x_k^-; the two arcs plus the wrap edges
/// (x_k^+, x_0^-) and (x_k^-, x_0^+) are labelled 3, the antipodal pairs
/// (x_i^+, x_i^-) are labelled infinity, and all other pairs are labelled 2.
pub fn zk_pattern(k: usize) -> Result<PatternGraph> {
    if k < 1 {
        return Err(CoxError::Config("Z_k requires k >= 1".into()));
    }
    let vertices = 2 * k + 2;
    if vertices > MAX_PATTERN_VERTICES {
        return Err(CoxError::PatternTooLarge { k: vertices, max: MAX_PATTERN_VERTICES });
    }
    let two = PatternLabel::Exact(EdgeLabel::fin(2));
    let three = PatternLabel::Exact(EdgeLabel::fin(3));
    let inf = PatternLabel::Exact(EdgeLabel::INFINITY);
    let mut pattern = PatternGraph::filled(vertices, two)?;
    for i in 0..k {
        pattern.set_label(i, i + 1, three);
        pattern.set_label(k + 1 + i, k + 2 + i, three);
    }
    pattern.set_label(k, k + 1, three);
    pattern.set_label(2 * k + 1, 0, three);
    for i in 0..=k {
        pattern.set_label(i, k + 1 + i, inf);
    }
    Ok(pattern)
}

const TRIANGLE_NAMES: [&str; 8] = [
    "triangle-333",
    "triangle-BBB",
    "triangle-BB3",
    "triangle-BB2",
    "triangle-B33",
    "triangle-B32",
    "triangle-442",
    "triangle-632",
];

const TREE_NAMES: [&str; 6] = [
    "tree3-path",
    "tree4-path",
    "tree4-star",
    "tree5-path",
    "tree5-spider",
    "tree5-star",
];

fn triangle_char_label(c: char) -> Option<PatternLabel> {
    match c {
        'B' => Some(PatternLabel::AtLeast(4)),
        '2'..='9' => Some(PatternLabel::Exact(EdgeLabel::fin(c as u32 - '0' as u32))),
        _ => None,
    }
}

/// Every pattern name `pattern_by_name` accepts.
pub fn pattern_names() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    names.extend((2..=MAX_PATTERN_VERTICES).map(|k| format!("clique2-{k}")));
    names.extend(TRIANGLE_NAMES.iter().map(|s| s.to_string()));
    names.extend((3..=MAX_PATTERN_VERTICES).map(|k| format!("cycle3-{k}")));
    names.extend(TREE_NAMES.iter().map(|s| s.to_string()));
    names.push("b-pair".to_owned());
    names.push("empty-square".to_owned());
    names.extend((1..=(MAX_PATTERN_VERTICES - 2) / 2).map(|k| format!("zk-{k}")));
    names
}

/// Look up a catalogued pattern by name.
pub fn pattern_by_name(name: &str) -> Result<PatternGraph> {
    let unknown = || CoxError::UnknownPattern {
        name: name.to_owned(),
        known: pattern_names().join(", "),
    };
    if let Some(rest) = name.strip_prefix("clique2-") {
        let k: usize = rest.parse().map_err(|_| unknown())?;
        if !(2..=MAX_PATTERN_VERTICES).contains(&k) {
            return Err(unknown());
        }
        return all2_clique(k);
    }
    if let Some(rest) = name.strip_prefix("cycle3-") {
        let k: usize = rest.parse().map_err(|_| unknown())?;
        if !(3..=MAX_PATTERN_VERTICES).contains(&k) {
            return Err(unknown());
        }
        return three_cycle(k);
    }
    if let Some(rest) = name.strip_prefix("zk-") {
        let k: usize = rest.parse().map_err(|_| unknown())?;
        if !(1..=(MAX_PATTERN_VERTICES - 2) / 2).contains(&k) {
            return Err(unknown());
        }
        return zk_pattern(k);
    }
    if let Some(rest) = name.strip_prefix("triangle-") {
        if TRIANGLE_NAMES.contains(&name) {
            let labels: Vec<PatternLabel> =
                rest.chars().filter_map(triangle_char_label).collect();
            return Ok(triangle([labels[0], labels[1], labels[2]]));
        }
        return Err(unknown());
    }
    match name {
        "tree3-path" => Ok(three_trees(3)?.remove(0)),
        "tree4-path" => Ok(three_trees(4)?.remove(0)),
        "tree4-star" => Ok(three_trees(4)?.remove(1)),
        "tree5-path" => Ok(three_trees(5)?.remove(0)),
        "tree5-spider" => Ok(three_trees(5)?.remove(1)),
        "tree5-star" => Ok(three_trees(5)?.remove(2)),
        "b-pair" => Ok(b_pair(4)),
        "empty-square" => Ok(empty_square()),
        _ => Err(unknown()),
    }
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    k: usize,
    pairs: Vec<(usize, usize, PatternLabel)>,
}

impl Serialize for PatternGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self
            .pairs()
            .filter(|&(_, _, label)| label != PatternLabel::Any)
            .collect();
        PatternJson { k: self.k, pairs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PatternGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = PatternJson::deserialize(deserializer)?;
        PatternGraph::from_pairs(json.k, &json.pairs).map_err(D::Error::custom)
    }
}
