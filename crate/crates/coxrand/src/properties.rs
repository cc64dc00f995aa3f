//! Group-theoretic property deciders: FC type, hyperbolicity, nerve
//! dimension, and detection of the Z_k pattern.
//!
//! Hyperbolicity follows Moussong's criterion. The group is not hyperbolic
//! exactly when some subset carries an irreducible affine diagram on at
//! least 3 vertices, or two disjoint infinite subsets are joined entirely
//! by 2-labelled pairs. Both conditions reduce to minimal infinite subsets:
//! infiniteness is upward-closed, the all-cross-2 condition passes to
//! subsets, and an irreducible affine diagram is itself minimal infinite
//! because dropping any vertex leaves finite type.

use serde::Serialize;

use crate::bits::VertexSet;
use crate::error::{CoxError, Result};
use crate::graph::{LabelledGraph, SimpleGraph};
use crate::label::EdgeLabel;
use crate::nerve::build_nerve;
use crate::recognition;

/// Outcome of the FC-type test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FcVerdict {
    pub fc_type: bool,
    /// A minimal clique of finite labels generating an infinite group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_clique: Option<Vec<usize>>,
}

/// Certificate for a non-hyperbolic verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A subset whose diagram is one irreducible affine component on
    /// at least 3 vertices.
    Affine(Vec<usize>),
    /// Disjoint infinite subsets with every cross pair labelled 2.
    Join(Vec<usize>, Vec<usize>),
}

/// Outcome of the hyperbolicity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperbolicityVerdict {
    pub hyperbolic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A located copy of the Z_k pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZkEmbedding {
    pub k: usize,
    /// Graph vertices playing x_0^+ .. x_k^+.
    pub plus: Vec<usize>,
    /// Graph vertices playing x_0^- .. x_k^-.
    pub minus: Vec<usize>,
    /// True iff no outside vertex is finite-adjacent to every x_i^+.
    pub plus_common_neighbor_free: bool,
}

/// Decides FC type: every clique of the finite-label graph must have
/// finite type. Only maximal cliques are tested, which suffices because
/// finite type is inherited by subsets. `max_cliques` caps how many
/// maximal cliques are enumerated.
pub fn is_fc_type(g: &LabelledGraph, max_cliques: usize) -> Result<FcVerdict> {
    let fin = g.finite_projection();
    let mut witness: Option<Vec<usize>> = None;
    maximal_cliques(&fin, max_cliques, &mut |clique| {
        if recognition::is_finite(g, clique) {
            false
        } else {
            let mut shrunk = shrink_infinite(g, clique);
            shrunk.sort_unstable();
            witness = Some(shrunk);
            true
        }
    })?;
    match witness {
        Some(clique) => Ok(FcVerdict { fc_type: false, witness_clique: Some(clique) }),
        None => Ok(FcVerdict { fc_type: true, witness_clique: None }),
    }
}

/// Greedily removes vertices while the subset still has infinite type.
fn shrink_infinite(g: &LabelledGraph, subset: &[usize]) -> Vec<usize> {
    let mut witness = subset.to_vec();
    let mut shrunk = true;
    while shrunk {
        shrunk = false;
        for i in 0..witness.len() {
            let mut candidate = witness.clone();
            candidate.remove(i);
            if !recognition::is_finite(g, &candidate) {
                witness = candidate;
                shrunk = true;
                break;
            }
        }
    }
    witness
}

/// Enumerates maximal cliques (Bron-Kerbosch with pivoting); the visitor
/// returns true to stop early. Errors out after `max_cliques` cliques.
fn maximal_cliques<F>(g: &SimpleGraph, max_cliques: usize, visit: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> bool,
{
    let n = g.n();
    let mut all = VertexSet::empty(n);
    for v in 0..n {
        all.insert(v);
    }
    let mut r = Vec::new();
    let mut reported = 0usize;
    bron_kerbosch(g, &mut r, all, VertexSet::empty(n), &mut reported, max_cliques, visit)?;
    Ok(())
}

fn bron_kerbosch<F>(
    g: &SimpleGraph,
    r: &mut Vec<usize>,
    p: VertexSet,
    mut x: VertexSet,
    reported: &mut usize,
    max_cliques: usize,
    visit: &mut F,
) -> Result<bool>
where
    F: FnMut(&[usize]) -> bool,
{
    if p.is_empty() && x.is_empty() {
        if r.is_empty() {
            return Ok(false);
        }
        if *reported == max_cliques {
            return Err(CoxError::CliqueBudgetExceeded { budget: max_cliques });
        }
        *reported += 1;
        return Ok(visit(r));
    }
    // pivot on the vertex covering most of p, so only non-neighbors branch
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| {
            let mut covered = p.clone();
            covered.intersect_with(g.neighbors(u));
            covered.len()
        })
        .expect("p or x is nonempty");
    let mut branch = p.clone();
    for u in g.neighbors(pivot).iter() {
        branch.remove(u);
    }
    let mut p = p;
    for v in branch.to_vec() {
        let mut p_next = p.clone();
        p_next.intersect_with(g.neighbors(v));
        let mut x_next = x.clone();
        x_next.intersect_with(g.neighbors(v));
        r.push(v);
        let stop = bron_kerbosch(g, r, p_next, x_next, reported, max_cliques, visit)?;
        r.pop();
        if stop {
            return Ok(true);
        }
        p.remove(v);
        x.insert(v);
    }
    Ok(false)
}

/// Size of the largest finite-type clique, by depth-first search over
/// finite-type cliques of the finite-label graph. Stops early once
/// `target` is reached, and prunes branches that cannot beat the best.
fn largest_finite_clique(
    g: &LabelledGraph,
    target: Option<usize>,
    max_cliques: usize,
) -> Result<usize> {
    let fin = g.finite_projection();
    let mut best = 0usize;
    let mut visited = 0usize;
    let mut face = Vec::new();
    for v in 0..g.n() {
        let mut cand = fin.neighbors(v).clone();
        cand.retain_above(v);
        let done = grow_finite_clique(
            g,
            &fin,
            &mut face,
            v,
            cand,
            &mut best,
            target,
            &mut visited,
            max_cliques,
        )?;
        if done {
            break;
        }
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn grow_finite_clique(
    g: &LabelledGraph,
    fin: &SimpleGraph,
    face: &mut Vec<usize>,
    v: usize,
    cand: VertexSet,
    best: &mut usize,
    target: Option<usize>,
    visited: &mut usize,
    max_cliques: usize,
) -> Result<bool> {
    if *visited == max_cliques {
        return Err(CoxError::CliqueBudgetExceeded { budget: max_cliques });
    }
    *visited += 1;
    face.push(v);
    let mut done = false;
    if recognition::is_finite(g, face) {
        *best = (*best).max(face.len());
        if target.is_some_and(|t| *best >= t) {
            done = true;
        } else if face.len() + cand.len() > *best {
            for u in cand.to_vec() {
                let mut next = cand.clone();
                next.intersect_with(fin.neighbors(u));
                next.retain_above(u);
                done = grow_finite_clique(
                    g,
                    fin,
                    face,
                    u,
                    next,
                    best,
                    target,
                    visited,
                    max_cliques,
                )?;
                if done {
                    break;
                }
            }
        }
    }
    face.pop();
    Ok(done)
}

/// Dimension of the nerve: one less than the size of the largest
/// finite-type clique, without building the complex.
pub fn nerve_dimension(g: &LabelledGraph, max_cliques: usize) -> Result<isize> {
    let best = largest_finite_clique(g, None, max_cliques)?;
    Ok(best as isize - 1)
}

/// Whether the nerve has dimension at least `dim`, with early exit.
pub fn nerve_dimension_at_least(
    g: &LabelledGraph,
    dim: usize,
    max_cliques: usize,
) -> Result<bool> {
    Ok(largest_finite_clique(g, Some(dim + 1), max_cliques)? > dim)
}

/// All subsets of at most `size_cap` vertices that generate an infinite
/// group while every proper subset generates a finite one. Such sets are
/// connected in the Coxeter diagram, so they are found by enumerating
/// connected diagram subgraphs, never extending past an infinite set.
pub fn minimal_infinite_subsets(g: &LabelledGraph, size_cap: usize) -> Vec<Vec<usize>> {
    assert!(size_cap >= 2, "minimal infinite subsets have at least 2 vertices");
    let diagram = g.projection(|l| l != EdgeLabel::fin(2));
    minimal_infinite_core(g, &diagram, size_cap, usize::MAX)
        .expect("enumeration is unbudgeted")
}

fn minimal_infinite_core(
    g: &LabelledGraph,
    diagram: &SimpleGraph,
    size_cap: usize,
    max_nodes: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut sub = Vec::new();
    for v in 0..n {
        let mut closed = diagram.neighbors(v).clone();
        closed.insert(v);
        let ext: Vec<usize> = diagram.neighbors(v).iter().filter(|&u| u > v).collect();
        sub.push(v);
        extend_minimal(g, diagram, v, &mut sub, &ext, &closed, size_cap, max_nodes, &mut visited, &mut out)?;
        sub.pop();
    }
    Ok(out)
}

/// Connected-subgraph enumeration over the diagram, rooted at `root`:
/// each candidate in `ext` exceeds the root and is adjacent to the
/// current set; `closed` is the set together with its neighborhood, so
/// each connected set is reached exactly once.
#[allow(clippy::too_many_arguments)]
fn extend_minimal(
    g: &LabelledGraph,
    diagram: &SimpleGraph,
    root: usize,
    sub: &mut Vec<usize>,
    ext: &[usize],
    closed: &VertexSet,
    size_cap: usize,
    max_nodes: usize,
    visited: &mut usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if *visited == max_nodes {
        return Err(CoxError::SearchBudgetExceeded { budget: max_nodes });
    }
    *visited += 1;
    let mut sorted = sub.clone();
    sorted.sort_unstable();
    if !recognition::is_finite(g, &sorted) {
        let minimal = (0..sorted.len()).all(|i| {
            let mut proper = sorted.clone();
            proper.remove(i);
            recognition::is_finite(g, &proper)
        });
        if minimal {
            out.push(sorted);
        }
        return Ok(());
    }
    if sub.len() == size_cap {
        return Ok(());
    }
    for (i, &w) in ext.iter().enumerate() {
        let mut ext_next: Vec<usize> = ext[i + 1..].to_vec();
        let mut closed_next = closed.clone();
        for u in diagram.neighbors(w).iter() {
            if u > root && !closed.contains(u) {
                ext_next.push(u);
            }
            closed_next.insert(u);
        }
        closed_next.insert(w);
        sub.push(w);
        extend_minimal(
            g,
            diagram,
            root,
            sub,
            &ext_next,
            &closed_next,
            size_cap,
            max_nodes,
            visited,
            out,
        )?;
        sub.pop();
    }
    Ok(())
}

/// Applies Moussong's criterion. Condition (a) scans the minimal infinite
/// subsets for a single irreducible affine component on >= 3 vertices.
/// Condition (b) holds iff some minimal infinite subset S has an infinite
/// set among the vertices 2-joined to all of S; any minimal infinite
/// subset in there is the partner witness. `max_nodes` caps the subset
/// enumeration.
pub fn is_hyperbolic(g: &LabelledGraph, max_nodes: usize) -> Result<HyperbolicityVerdict> {
    let diagram = g.projection(|l| l != EdgeLabel::fin(2));
    let cap = g.n().max(2);
    let minimal = minimal_infinite_core(g, &diagram, cap, max_nodes)?;
    for s in &minimal {
        if s.len() >= 3 {
            let classified = recognition::classify(g, s);
            debug_assert_eq!(classified.components.len(), 1);
            if classified.components[0].cox_type.is_affine() {
                return Ok(HyperbolicityVerdict {
                    hyperbolic: false,
                    witness: Some(Witness::Affine(s.clone())),
                });
            }
        }
    }
    let two = g.label_projection(EdgeLabel::fin(2));
    for s in &minimal {
        let mut common = two.neighbors(s[0]).clone();
        for &v in &s[1..] {
            common.intersect_with(two.neighbors(v));
        }
        if common.is_empty() {
            continue;
        }
        let candidates = common.to_vec();
        if recognition::is_finite(g, &candidates) {
            continue;
        }
        let induced = g.induced(&candidates).expect("common neighbors are in range");
        let partner = minimal_infinite_subsets(&induced, candidates.len().max(2))
            .into_iter()
            .next()
            .expect("an infinite set contains a minimal infinite subset");
        let t: Vec<usize> = partner.into_iter().map(|i| candidates[i]).collect();
        return Ok(HyperbolicityVerdict {
            hyperbolic: false,
            witness: Some(Witness::Join(s.clone(), t)),
        });
    }
    Ok(HyperbolicityVerdict { hyperbolic: true, witness: None })
}

/// Re-derives whether a witness certifies non-hyperbolicity.
pub fn verify_witness(g: &LabelledGraph, witness: &Witness) -> bool {
    match witness {
        Witness::Affine(s) => {
            if s.len() < 3 || s.iter().any(|&v| v >= g.n()) {
                return false;
            }
            let classified = recognition::classify(g, s);
            classified.components.len() == 1 && classified.components[0].cox_type.is_affine()
        }
        Witness::Join(s, t) => {
            if s.is_empty() || t.is_empty() {
                return false;
            }
            if s.iter().chain(t).any(|&v| v >= g.n()) {
                return false;
            }
            if s.iter().any(|v| t.contains(v)) {
                return false;
            }
            let crossed = s.iter().all(|&u| {
                t.iter().all(|&v| g.label(u, v) == EdgeLabel::fin(2))
            });
            crossed && !recognition::is_finite(g, s) && !recognition::is_finite(g, t)
        }
    }
}

/// Label the Z_k pattern puts on positions p < q, where positions
/// 0..=k are x_0^+..x_k^+ and k+1..=2k+1 are x_0^-..x_k^-: the pattern
/// is a (2k+2)-cycle of 3s with infinity between antipodal positions
/// and 2 everywhere else.
fn zk_label(k: usize, p: usize, q: usize) -> EdgeLabel {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    let m = 2 * k + 2;
    if q - p == 1 || (p == 0 && q == m - 1) {
        EdgeLabel::fin(3)
    } else if q - p == k + 1 {
        EdgeLabel::INFINITY
    } else {
        EdgeLabel::fin(2)
    }
}

/// The Z_k pattern as a standalone graph on 2k+2 vertices.
fn zk_graph(k: usize) -> LabelledGraph {
    let m = 2 * k + 2;
    let mut edges = Vec::new();
    for p in 0..m {
        for q in p + 1..m {
            edges.push((p, q, zk_label(k, p, q)));
        }
    }
    LabelledGraph::from_edges(m, &edges).expect("pattern edges are valid")
}

/// A vertex outside the assignment that is finite-adjacent to every
/// x_i^+, if one exists.
fn common_plus_neighbor(g: &LabelledGraph, plus: &[usize], inside: &[bool]) -> Option<usize> {
    (0..g.n()).find(|&v| {
        !inside[v] && plus.iter().all(|&p| g.label(v, p).is_finite())
    })
}

/// Searches for an embedded copy of Z_k by backtracking over the pattern
/// positions with label pruning. With `require_no_common_neighbor`, only
/// embeddings whose x_i^+ have no common finite-labelled neighbor are
/// accepted; otherwise the first embedding is returned and the flag
/// reports whether such a neighbor exists.
pub fn find_zk(
    g: &LabelledGraph,
    k: usize,
    require_no_common_neighbor: bool,
) -> Option<ZkEmbedding> {
    assert!(k >= 1, "Z_k is defined for k >= 1");
    let m = 2 * k + 2;
    if g.n() < m {
        return None;
    }
    let mut assignment = Vec::with_capacity(m);
    let mut used = vec![false; g.n()];
    if !extend_zk(g, k, require_no_common_neighbor, &mut assignment, &mut used) {
        return None;
    }
    let plus = assignment[..=k].to_vec();
    let minus = assignment[k + 1..].to_vec();
    let free = common_plus_neighbor(g, &plus, &used).is_none();
    Some(ZkEmbedding { k, plus, minus, plus_common_neighbor_free: free })
}

fn extend_zk(
    g: &LabelledGraph,
    k: usize,
    require_free: bool,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let depth = assignment.len();
    if depth == 2 * k + 2 {
        if require_free && common_plus_neighbor(g, &assignment[..=k], used).is_some() {
            return false;
        }
        return true;
    }
    for w in 0..g.n() {
        if used[w] {
            continue;
        }
        let fits = (0..depth).all(|p| g.label(assignment[p], w) == zk_label(k, p, depth));
        if !fits {
            continue;
        }
        assignment.push(w);
        used[w] = true;
        if extend_zk(g, k, require_free, assignment, used) {
            return true;
        }
        assignment.pop();
        used[w] = false;
    }
    false
}

/// Verifies the retraction of the nerve onto the nerve of an embedded
/// Z_k: embedded vertices map to themselves, and every other vertex maps
/// to x_i^- for the smallest i with label(v, x_i^+) infinite. The map is
/// checked face by face: the image of every nerve face must be a face of
/// the standalone Z_k nerve.
pub fn retraction_check(
    g: &LabelledGraph,
    embedding: &ZkEmbedding,
    max_faces: usize,
) -> Result<bool> {
    let k = embedding.k;
    let m = 2 * k + 2;
    let order: Vec<usize> = embedding.plus.iter().chain(&embedding.minus).copied().collect();
    let pre = |msg: String| CoxError::PreconditionViolated(msg);
    if embedding.plus.len() != k + 1 || embedding.minus.len() != k + 1 {
        return Err(pre(format!("Z_{k} needs {} vertices on each side", k + 1)));
    }
    let mut inside = vec![false; g.n()];
    for &v in &order {
        if v >= g.n() {
            return Err(pre(format!("embedded vertex {v} is out of range")));
        }
        if inside[v] {
            return Err(pre(format!("embedded vertex {v} is used twice")));
        }
        inside[v] = true;
    }
    for p in 0..m {
        for q in p + 1..m {
            let want = zk_label(k, p, q);
            let got = g.label(order[p], order[q]);
            if got != want {
                return Err(pre(format!(
                    "pair ({}, {}) is labelled {got}, the pattern needs {want}",
                    order[p], order[q]
                )));
            }
        }
    }
    if let Some(v) = common_plus_neighbor(g, &embedding.plus, &inside) {
        return Err(pre(format!(
            "vertex {v} is finite-adjacent to every x_i^+, so the map is undefined"
        )));
    }
    let mut image = vec![0usize; g.n()];
    for (p, &v) in order.iter().enumerate() {
        image[v] = p;
    }
    for v in 0..g.n() {
        if inside[v] {
            continue;
        }
        let i = (0..=k)
            .find(|&i| g.label(v, embedding.plus[i]).is_infinite())
            .expect("no common neighbor exists");
        image[v] = k + 1 + i;
    }
    let target = build_nerve(&zk_graph(k), max_faces)?;
    let nerve = build_nerve(g, max_faces)?;
    for d in 0..=nerve.dimension().max(0) as usize {
        for face in nerve.faces(d) {
            let mut mapped: Vec<usize> = face.iter().map(|&v| image[v]).collect();
            mapped.sort_unstable();
            mapped.dedup();
            if !target.contains(&mapped) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
