//! Rational homology of simplicial complexes.
//!
//! Faces are oriented by ascending vertex order and boundary signs
//! alternate by position, so every boundary matrix has entries in
//! {-1, 0, +1}. Betti numbers come from exact integer ranks of the
//! boundary matrices: b_k = f_k - rank d_k - rank d_{k+1}, unreduced,
//! so b_0 counts connected components. Ranks are computed twice over
//! in tests: by exact elimination and modulo large primes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::nerve::SimplicialComplex;

/// Betti numbers b_0..b_top of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    /// Dimension of the complex itself (-1 when empty), independent of
    /// how many Betti numbers were requested.
    pub dim: isize,
}

/// Rational Betti numbers b_0..b_min(max_dim, dim). Passing None
/// computes the full profile.
pub fn betti_numbers(cx: &SimplicialComplex, max_dim: Option<usize>) -> HomologyProfile {
    let dim = cx.dimension();
    if dim < 0 {
        return HomologyProfile { betti: Vec::new(), dim: -1 };
    }
    let top = max_dim.map_or(dim as usize, |m| m.min(dim as usize));
    let mut rank = vec![0usize; top + 2];
    for (k, r) in rank.iter_mut().enumerate().skip(1) {
        *r = boundary_rank(cx, k);
    }
    let betti = (0..=top).map(|k| cx.face_count(k) - rank[k] - rank[k + 1]).collect();
    HomologyProfile { betti, dim }
}

/// Exact rank of the boundary map d_k (from k-faces to (k-1)-faces).
/// d_0 is the zero map.
pub fn boundary_rank(cx: &SimplicialComplex, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let rows: Vec<Vec<(usize, BigInt)>> = boundary_rows(cx, k)
        .into_iter()
        .map(|row| row.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect())
        .collect();
    exact_rank(rows)
}

/// Rank of d_k over the field Z/p, p prime. An independent check of
/// the exact path: ranks mod p never exceed the rational rank, and
/// agree with it for all p outside a finite bad set.
pub fn boundary_rank_mod_p(cx: &SimplicialComplex, k: usize, p: u64) -> usize {
    if k == 0 {
        return 0;
    }
    let rows: Vec<Vec<(usize, u64)>> = boundary_rows(cx, k)
        .into_iter()
        .map(|row| {
            row.into_iter().map(|(c, v)| (c, v.rem_euclid(p as i64) as u64)).collect()
        })
        .collect();
    rank_mod_p(rows, p)
}

/// One sparse row per k-face: its boundary in (k-1)-face indices.
fn boundary_rows(cx: &SimplicialComplex, k: usize) -> Vec<Vec<(usize, i64)>> {
    assert!(k >= 1, "d_0 has no rows");
    let mut rows = Vec::with_capacity(cx.face_count(k));
    let mut sub = Vec::with_capacity(k);
    for face in cx.faces(k) {
        let mut row = Vec::with_capacity(k + 1);
        for drop in 0..=k {
            sub.clear();
            sub.extend(face.iter().copied());
            sub.remove(drop);
            let idx = cx.face_index(&sub).expect("complexes are downward closed");
            row.push((idx, if drop % 2 == 0 { 1 } else { -1 }));
        }
        row.sort_unstable_by_key(|&(c, _)| c);
        rows.push(row);
    }
    rows
}

/// Integer elimination rank. Row operations are s <- pivot*s - s_c*r
/// followed by division by the row's content, both rank-preserving, so
/// no rationals appear; pivots of magnitude 1 are preferred to keep
/// entries small.
fn exact_rank(mut rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut rank = 0;
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() {
        let mut best = 0;
        let mut best_key = (usize::MAX, usize::MAX);
        for (i, r) in rows.iter().enumerate() {
            let unit = if r.iter().any(|(_, v)| v.abs().is_one()) { 0 } else { 1 };
            if (unit, r.len()) < best_key {
                best_key = (unit, r.len());
                best = i;
            }
        }
        let prow = rows.swap_remove(best);
        let (pcol, pval) = prow
            .iter()
            .min_by_key(|(_, v)| (if v.abs().is_one() { 0u8 } else { 1 }, v.abs()))
            .map(|(c, v)| (*c, v.clone()))
            .expect("pivot row is nonempty");
        rank += 1;
        for r in rows.iter_mut() {
            if let Ok(pos) = r.binary_search_by_key(&pcol, |e| e.0) {
                let sc = r[pos].1.clone();
                *r = eliminate(&pval, r, &sc, &prow, pcol);
            }
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

/// pval*s - sc*r with the pivot column dropped, divided by the gcd of
/// the result.
fn eliminate(
    pval: &BigInt,
    s: &[(usize, BigInt)],
    sc: &BigInt,
    r: &[(usize, BigInt)],
    pcol: usize,
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(s.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < s.len() || j < r.len() {
        let (col, val) = match (s.get(i), r.get(j)) {
            (Some((cs, vs)), Some((cr, vr))) if cs == cr => {
                i += 1;
                j += 1;
                (*cs, pval * vs - sc * vr)
            }
            (Some((cs, vs)), Some((cr, _))) if cs < cr => {
                i += 1;
                (*cs, pval * vs)
            }
            (Some((cs, vs)), None) => {
                i += 1;
                (*cs, pval * vs)
            }
            (_, Some((cr, vr))) => {
                j += 1;
                (*cr, -(sc * vr))
            }
            (None, None) => unreachable!(),
        };
        if col != pcol && !val.is_zero() {
            out.push((col, val));
        }
    }
    let mut content = BigInt::zero();
    for (_, v) in &out {
        content = content.gcd(v);
        if content.is_one() {
            return out;
        }
    }
    if !content.is_zero() && !content.is_one() {
        for (_, v) in &mut out {
            *v /= &content;
        }
    }
    out
}

/// Elimination rank over Z/p.
fn rank_mod_p(mut rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    for r in &mut rows {
        r.retain(|&(_, v)| v % p != 0);
    }
    let mut rank = 0;
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() {
        let best = rows
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.len())
            .map(|(i, _)| i)
            .expect("rows is nonempty");
        let prow = rows.swap_remove(best);
        let (pcol, pval) = prow[0];
        rank += 1;
        for r in rows.iter_mut() {
            if let Ok(pos) = r.binary_search_by_key(&pcol, |e| e.0) {
                let sc = r[pos].1;
                let mut out = Vec::with_capacity(r.len() + prow.len());
                let (mut i, mut j) = (0, 0);
                while i < r.len() || j < prow.len() {
                    let (col, val) = match (r.get(i), prow.get(j)) {
                        (Some(&(cs, vs)), Some(&(cr, vr))) if cs == cr => {
                            i += 1;
                            j += 1;
                            (cs, mulsub(pval, vs, sc, vr, p))
                        }
                        (Some(&(cs, vs)), Some(&(cr, _))) if cs < cr => {
                            i += 1;
                            (cs, mulmod(pval, vs, p))
                        }
                        (Some(&(cs, vs)), None) => {
                            i += 1;
                            (cs, mulmod(pval, vs, p))
                        }
                        (_, Some(&(cr, vr))) => {
                            j += 1;
                            (cr, p - mulmod(sc, vr, p))
                        }
                        (None, None) => unreachable!(),
                    };
                    if col != pcol && val % p != 0 {
                        out.push((col, val % p));
                    }
                }
                *r = out;
            }
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn mulsub(pval: u64, vs: u64, sc: u64, vr: u64, p: u64) -> u64 {
    let a = pval as u128 * vs as u128 % p as u128;
    let b = sc as u128 * vr as u128 % p as u128;
    ((a + p as u128 - b) % p as u128) as u64
}

/// A formal integer combination of faces, each face sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    /// (face, coefficient) pairs in lexicographic face order, all
    /// coefficients nonzero.
    pub terms: Vec<(Vec<usize>, i64)>,
}

impl Chain {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Simplicial boundary with alternating signs, terms recombined.
    pub fn boundary(&self) -> Chain {
        let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for (face, coeff) in &self.terms {
            if face.len() == 1 {
                continue;
            }
            for drop in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(drop);
                let sign = if drop % 2 == 0 { *coeff } else { -coeff };
                *acc.entry(sub).or_insert(0) += sign;
            }
        }
        Chain { terms: acc.into_iter().filter(|&(_, c)| c != 0).collect() }
    }
}

/// The fundamental k-cycle of the Z_k pattern on vertices 0..2k+2,
/// where x_i^+ = i and x_i^- = k+1+i: the signed sum over all sign
/// choices sigma of [x_0^{sigma(0)}, .., x_k^{sigma(k)}], rewritten in
/// ascending vertex order. It is a nonzero cycle, and the nerve of Z_k
/// has no (k+1)-faces, so its class generates nontrivial H_k.
pub fn zk_fundamental_cycle(k: usize) -> Chain {
    assert!(k >= 1, "Z_k needs k >= 1");
    let mut terms = Vec::with_capacity(1 << (k + 1));
    for mask in 0u32..1 << (k + 1) {
        let minus = |i: usize| mask >> i & 1 == 1;
        let mut face: Vec<usize> = (0..=k).filter(|&i| !minus(i)).collect();
        face.extend((0..=k).filter(|&i| minus(i)).map(|i| k + 1 + i));
        let d = mask.count_ones() as usize;
        // Sorting pluses before minuses inverts exactly the pairs
        // i < j with sigma(i) = minus, sigma(j) = plus.
        let inv: usize =
            (0..=k).filter(|&j| !minus(j)).map(|j| (0..j).filter(|&i| minus(i)).count()).sum();
        terms.push((face, if (d + inv).is_multiple_of(2) { 1 } else { -1 }));
    }
    terms.sort();
    Chain { terms }
}
