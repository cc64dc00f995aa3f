//! The nerve of an edge-labelled graph.
//!
//! Faces of the nerve are the nonempty vertex subsets that generate a
//! finite group, i.e. subsets whose pairs all carry finite labels and
//! whose diagram classifies as finite. Finiteness is downward closed,
//! so the face set is a simplicial complex and can be enumerated by
//! growing cliques of the finite-label projection depth first, pruning
//! as soon as a subset stops being finite.

use serde::{Deserialize, Serialize};

use crate::bits::VertexSet;
use crate::error::{CoxError, Result};
use crate::graph::LabelledGraph;
use crate::recognition;

/// Faces of one dimension, stored back to back in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FaceLevel {
    width: usize,
    data: Vec<usize>,
}

impl FaceLevel {
    fn new(width: usize) -> FaceLevel {
        FaceLevel { width, data: Vec::new() }
    }

    fn len(&self) -> usize {
        self.data.len() / self.width
    }

    fn face(&self, i: usize) -> &[usize] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    fn push(&mut self, face: &[usize]) {
        debug_assert_eq!(face.len(), self.width);
        self.data.extend_from_slice(face);
    }

    fn index_of(&self, face: &[usize]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.face(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// A finite simplicial complex on vertices 0..n with explicit face
/// lists per dimension and a facet list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComplexJson", into = "ComplexJson")]
pub struct SimplicialComplex {
    n: usize,
    levels: Vec<FaceLevel>,
    /// (dimension, index) of each maximal face, in level order.
    facet_refs: Vec<(usize, usize)>,
}

impl SimplicialComplex {
    /// Number of vertices of the ambient vertex set (isolated vertices
    /// that are not faces do not count; this is the graph's n).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the complex; the empty complex has dimension -1.
    pub fn dimension(&self) -> isize {
        self.levels.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Number of faces of dimension d.
    pub fn face_count(&self, d: usize) -> usize {
        self.levels.get(d).map_or(0, FaceLevel::len)
    }

    pub fn total_faces(&self) -> usize {
        self.levels.iter().map(FaceLevel::len).sum()
    }

    /// Faces of dimension d in lexicographic order, as sorted vertex
    /// slices.
    pub fn faces(&self, d: usize) -> impl Iterator<Item = &[usize]> {
        self.levels
            .get(d)
            .into_iter()
            .flat_map(|level| (0..level.len()).map(move |i| level.face(i)))
    }

    /// Position of a face within its dimension's lexicographic list.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        if face.is_empty() {
            return None;
        }
        self.levels.get(face.len() - 1)?.index_of(face)
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        f.len() == face.len() && self.face_index(&f).is_some()
    }

    /// Maximal faces, in order of dimension then lexicographic.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        self.facet_refs
            .iter()
            .map(|&(d, i)| self.levels[d].face(i).to_vec())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(d, level)| {
                let f = level.len() as i64;
                if d % 2 == 0 {
                    f
                } else {
                    -f
                }
            })
            .sum()
    }

    /// Marks maximal faces: a face is a facet iff no face one
    /// dimension up contains it.
    fn compute_facets(&mut self) {
        let mut covered: Vec<Vec<bool>> =
            self.levels.iter().map(|level| vec![false; level.len()]).collect();
        let mut sub = Vec::new();
        for d in 1..self.levels.len() {
            let level = &self.levels[d];
            for i in 0..level.len() {
                let face = level.face(i);
                for drop in 0..face.len() {
                    sub.clear();
                    sub.extend(face.iter().copied());
                    sub.remove(drop);
                    let j = self.levels[d - 1]
                        .index_of(&sub)
                        .expect("complexes are downward closed");
                    covered[d - 1][j] = true;
                }
            }
        }
        self.facet_refs = covered
            .iter()
            .enumerate()
            .flat_map(|(d, c)| {
                c.iter().enumerate().filter(|&(_, hit)| !hit).map(move |(i, _)| (d, i))
            })
            .collect();
    }
}

/// Builds the nerve of a graph: all finite-type subsets as faces.
/// Fails once more than `max_faces` faces exist.
pub fn build_nerve(g: &LabelledGraph, max_faces: usize) -> Result<SimplicialComplex> {
    build_nerve_skeleton(g, usize::MAX, max_faces)
}

/// Builds only the faces of dimension at most `max_dim`. The k-th
/// homology of the nerve is already determined by its (k+1)-skeleton,
/// which is often far smaller than the full nerve.
pub fn build_nerve_skeleton(
    g: &LabelledGraph,
    max_dim: usize,
    max_faces: usize,
) -> Result<SimplicialComplex> {
    let n = g.n();
    let fin = g.finite_projection();
    let mut builder = Builder { g, fin: &fin, levels: Vec::new(), total: 0, max_dim, max_faces };
    let mut all = VertexSet::empty(n.max(1));
    for v in 0..n {
        all.insert(v);
    }
    let mut face = Vec::new();
    builder.grow(&mut face, &all)?;
    let mut cx = SimplicialComplex { n, levels: builder.levels, facet_refs: Vec::new() };
    cx.compute_facets();
    Ok(cx)
}

struct Builder<'a> {
    g: &'a LabelledGraph,
    fin: &'a crate::graph::SimpleGraph,
    levels: Vec<FaceLevel>,
    total: usize,
    max_dim: usize,
    max_faces: usize,
}

impl Builder<'_> {
    fn grow(&mut self, face: &mut Vec<usize>, cand: &VertexSet) -> Result<()> {
        for v in cand.iter() {
            face.push(v);
            if recognition::is_finite(self.g, face) {
                self.record(face)?;
                if face.len() <= self.max_dim {
                    let mut next = cand.clone();
                    next.intersect_with(self.fin.neighbors(v));
                    next.retain_above(v);
                    if !next.is_empty() {
                        self.grow(face, &next)?;
                    }
                }
            }
            face.pop();
        }
        Ok(())
    }

    fn record(&mut self, face: &[usize]) -> Result<()> {
        if self.total == self.max_faces {
            return Err(CoxError::FaceBudgetExceeded { budget: self.max_faces });
        }
        self.total += 1;
        let d = face.len() - 1;
        if self.levels.len() <= d {
            self.levels.push(FaceLevel::new(d + 1));
        }
        self.levels[d].push(face);
        Ok(())
    }
}

/// Builds the downward closure of an explicit list of faces. The list
/// does not have to consist of maximal faces; facets are recomputed.
pub fn from_facets(
    n: usize,
    facets: &[Vec<usize>],
    max_faces: usize,
) -> Result<SimplicialComplex> {
    use std::collections::BTreeSet;
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in facets {
        let mut fs = f.clone();
        fs.sort_unstable();
        fs.dedup();
        if fs.is_empty() {
            return Err(CoxError::EmptySubset);
        }
        if let Some(&v) = fs.iter().find(|&&v| v >= n) {
            return Err(CoxError::VertexOutOfRange { v, n });
        }
        if fs.len() >= usize::BITS as usize - 1
            || (1usize << fs.len()) - 1 > max_faces
        {
            return Err(CoxError::FaceBudgetExceeded { budget: max_faces });
        }
        for mask in 1usize..(1 << fs.len()) {
            let sub: Vec<usize> =
                (0..fs.len()).filter(|i| mask >> i & 1 == 1).map(|i| fs[i]).collect();
            if all.insert(sub) && all.len() > max_faces {
                return Err(CoxError::FaceBudgetExceeded { budget: max_faces });
            }
        }
    }
    let mut levels: Vec<FaceLevel> = Vec::new();
    let dim = all.iter().map(|f| f.len() - 1).max().unwrap_or(0);
    for d in 0..=dim {
        levels.push(FaceLevel::new(d + 1));
    }
    // BTreeSet iteration is lexicographic, which is also lexicographic
    // within each fixed length.
    for f in &all {
        levels[f.len() - 1].push(f);
    }
    if all.is_empty() {
        levels.clear();
    }
    let mut cx = SimplicialComplex { n, levels, facet_refs: Vec::new() };
    cx.compute_facets();
    Ok(cx)
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: usize,
    facets: Vec<Vec<usize>>,
}

impl TryFrom<ComplexJson> for SimplicialComplex {
    type Error = CoxError;

    fn try_from(json: ComplexJson) -> Result<Self> {
        from_facets(json.n, &json.facets, crate::error::Budgets::default().faces)
    }
}

impl From<SimplicialComplex> for ComplexJson {
    fn from(cx: SimplicialComplex) -> ComplexJson {
        ComplexJson { n: cx.n(), facets: cx.facets() }
    }
}
