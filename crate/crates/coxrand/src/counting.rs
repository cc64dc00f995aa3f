//! Exact expectations, leading-order asymptotics, and second moments for
//! pattern counts under a probability schedule.
//!
//! Expectations are exact rationals built from the quantized per-label
//! probabilities, with the falling factorial keeping every factor of
//! n(n-1)...(n-k+1). Asymptotic signatures summarize the leading monomial
//! c n^a (ln n)^b of the expectation as the pair of exponents plus the
//! direction of its limit.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CoxError, Result};
use crate::pattern::{PatternGraph, PatternLabel};
use crate::schedule::{EvaluatedSchedule, ProbabilitySchedule, ScheduleEntry};

/// Largest pattern for which second moments are enumerated.
pub const MAX_SECOND_MOMENT_VERTICES: usize = 6;

/// Falling factorial n(n-1)...(n-k+1) with exactly k factors.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    let mut product = BigInt::one();
    for i in 0..k {
        if i >= n {
            return BigInt::zero();
        }
        product *= BigInt::from(n - i);
    }
    product
}

/// Expected number of unordered instances of the pattern in a random graph
/// on n vertices: (n)_k / b times the product of the pair probabilities.
pub fn expected_count_exact(
    pattern: &PatternGraph,
    schedule: &ProbabilitySchedule,
    n: usize,
) -> Result<BigRational> {
    let b = pattern.automorphism_count()?;
    if n < pattern.k() {
        return Ok(BigRational::zero());
    }
    let ev = schedule.evaluate(n)?;
    let mut value = BigRational::new(falling_factorial(n, pattern.k()), BigInt::from(b));
    for (_, _, label) in pattern.pairs() {
        value *= label.rational(&ev);
    }
    Ok(value)
}

fn ordered_expectation(pattern: &PatternGraph, ev: &EvaluatedSchedule, n: usize) -> BigRational {
    let mut value = BigRational::from(falling_factorial(n, pattern.k()));
    for (_, _, label) in pattern.pairs() {
        value *= label.rational(ev);
    }
    value
}

/// Direction of the limit of the expected count as n grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVerdict {
    Vanishes,
    Bounded,
    Diverges,
}

/// Exponent pair of the leading monomial n^a (ln n)^b of the expectation,
/// with the direction of its limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSignature {
    pub n_exponent: f64,
    pub log_exponent: f64,
    pub verdict: LimitVerdict,
}

const EXPONENT_EPS: f64 = 1e-9;

fn curve_grows(alpha: f64, beta: f64) -> bool {
    alpha > 0.0 || (alpha == 0.0 && beta > 0.0)
}

/// Limit of a single decaying-or-constant curve, clamped into [0, 1].
fn curve_limit(entry: &ScheduleEntry) -> Result<f64> {
    if curve_grows(entry.alpha, entry.beta) {
        return Err(CoxError::IndeterminateAsymptotics(format!(
            "the curve for label {} grows without bound, so no leading monomial exists",
            entry.label
        )));
    }
    if entry.alpha < 0.0 || entry.beta < 0.0 {
        Ok(0.0)
    } else {
        Ok(entry.c.min(1.0))
    }
}

/// Leading exponents of the expected pattern count: combines k powers of n
/// from the vertex choices with one curve exponent per constrained pair.
pub fn asymptotic_signature(
    pattern: &PatternGraph,
    schedule: &ProbabilitySchedule,
) -> Result<AsymptoticSignature> {
    let entries = schedule.entries();
    let mut n_exponent = pattern.k() as f64;
    let mut log_exponent = 0.0;
    let mut residual_limit: Option<f64> = None;
    for (u, v, label) in pattern.pairs() {
        let (alpha, beta) = match label {
            PatternLabel::Any => continue,
            PatternLabel::Exact(l) => match l.finite_value() {
                Some(m) => {
                    let entry = entries.iter().find(|e| e.label == m && e.c > 0.0).ok_or_else(
                        || {
                            CoxError::IndeterminateAsymptotics(format!(
                                "pair ({u}, {v}) needs label {m} but the schedule has no curve for it"
                            ))
                        },
                    )?;
                    (entry.alpha, entry.beta)
                }
                None => {
                    let limit = match residual_limit {
                        Some(limit) => limit,
                        None => {
                            let total: f64 = entries
                                .iter()
                                .filter(|e| e.c > 0.0)
                                .map(curve_limit)
                                .sum::<Result<f64>>()?;
                            residual_limit = Some(1.0 - total);
                            1.0 - total
                        }
                    };
                    if limit <= 0.0 {
                        return Err(CoxError::IndeterminateAsymptotics(
                            "the infinity mass tends to 0, so infinity-labelled pairs have no \
                             leading constant"
                                .into(),
                        ));
                    }
                    (0.0, 0.0)
                }
            },
            PatternLabel::AtLeast(bound) => {
                let lead = entries
                    .iter()
                    .filter(|e| e.label >= bound && e.c > 0.0)
                    .map(|e| (e.alpha, e.beta))
                    .max_by(|a, b| a.partial_cmp(b).expect("exponents are finite"));
                lead.ok_or_else(|| {
                    CoxError::IndeterminateAsymptotics(format!(
                        "pair ({u}, {v}) needs a label >= {bound} but no curve feeds that class"
                    ))
                })?
            }
        };
        if curve_grows(alpha, beta) {
            return Err(CoxError::IndeterminateAsymptotics(format!(
                "the curve on pair ({u}, {v}) grows without bound, so no leading monomial exists"
            )));
        }
        n_exponent += alpha;
        log_exponent += beta;
    }
    let verdict = if n_exponent > EXPONENT_EPS {
        LimitVerdict::Diverges
    } else if n_exponent < -EXPONENT_EPS {
        LimitVerdict::Vanishes
    } else if log_exponent > EXPONENT_EPS {
        LimitVerdict::Diverges
    } else if log_exponent < -EXPONENT_EPS {
        LimitVerdict::Vanishes
    } else {
        LimitVerdict::Bounded
    };
    Ok(AsymptoticSignature { n_exponent, log_exponent, verdict })
}

/// Exact second moment of the ordered instance count, with the ratio
/// E[X^2] / E[X]^2 when the expectation is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMoment {
    pub second_moment: BigRational,
    pub ratio: Option<BigRational>,
}

fn intersect_labels(a: PatternLabel, b: PatternLabel) -> Option<PatternLabel> {
    match (a, b) {
        (PatternLabel::Any, other) | (other, PatternLabel::Any) => Some(other),
        (PatternLabel::Exact(x), PatternLabel::Exact(y)) => {
            (x == y).then_some(PatternLabel::Exact(x))
        }
        (PatternLabel::Exact(x), PatternLabel::AtLeast(bound))
        | (PatternLabel::AtLeast(bound), PatternLabel::Exact(x)) => {
            PatternLabel::AtLeast(bound).matches(x).then_some(PatternLabel::Exact(x))
        }
        (PatternLabel::AtLeast(x), PatternLabel::AtLeast(y)) => {
            Some(PatternLabel::AtLeast(x.max(y)))
        }
    }
}

/// E[X^2] for the ordered instance count X, by enumerating how two pattern
/// copies can overlap: the first copy occupies universe vertices 0..k, the
/// second maps each position either onto a shared first-copy vertex or onto
/// a fresh vertex; every gluing contributes (n)_{2k-l} times the product of
/// the intersected pair constraints, and contributes 0 when shared pairs
/// force conflicting labels.
pub fn second_moment_exact(
    pattern: &PatternGraph,
    schedule: &ProbabilitySchedule,
    n: usize,
) -> Result<SecondMoment> {
    let k = pattern.k();
    if k > MAX_SECOND_MOMENT_VERTICES {
        return Err(CoxError::PatternTooLarge { k, max: MAX_SECOND_MOMENT_VERTICES });
    }
    if n < k {
        return Ok(SecondMoment { second_moment: BigRational::zero(), ratio: None });
    }
    let ev = schedule.evaluate(n)?;
    let mut total = BigRational::zero();
    for shared_mask in 0u32..1 << k {
        let shared: Vec<usize> = (0..k).filter(|i| shared_mask >> i & 1 == 1).collect();
        let l = shared.len();
        let universe = 2 * k - l;
        for image in (0..k).permutations(l) {
            let mut place: Vec<usize> = Vec::with_capacity(k);
            let mut next_fresh = k;
            let mut shared_at = 0;
            for position in 0..k {
                if shared_mask >> position & 1 == 1 {
                    place.push(image[shared_at]);
                    shared_at += 1;
                } else {
                    place.push(next_fresh);
                    next_fresh += 1;
                }
            }
            let mut constraints: Vec<Option<PatternLabel>> =
                vec![None; universe * (universe - 1) / 2];
            let mut consistent = true;
            let copies = [
                None,
                Some(&place),
            ];
            'copies: for copy in copies {
                for (u, v, label) in pattern.pairs() {
                    let (a, b) = match copy {
                        None => (u, v),
                        Some(place) => (place[u], place[v]),
                    };
                    let (a, b) = if a < b { (a, b) } else { (b, a) };
                    let idx = a * (2 * universe - a - 1) / 2 + (b - a - 1);
                    let merged = match constraints[idx] {
                        None => Some(label),
                        Some(existing) => intersect_labels(existing, label),
                    };
                    match merged {
                        Some(label) => constraints[idx] = Some(label),
                        None => {
                            consistent = false;
                            break 'copies;
                        }
                    }
                }
            }
            if !consistent {
                continue;
            }
            let mut probability = BigRational::from(falling_factorial(n, universe));
            for label in constraints.into_iter().flatten() {
                probability *= label.rational(&ev);
            }
            total += probability;
        }
    }
    let expectation = ordered_expectation(pattern, &ev, n);
    let ratio = if expectation.is_zero() {
        None
    } else {
        Some(total.clone() / (expectation.clone() * expectation))
    };
    Ok(SecondMoment { second_moment: total, ratio })
}

/// Symbolic leading term of the expectation: coefficient 1/b, n to the k,
/// and one probability factor per constrained pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingTerm {
    pub coefficient: BigRational,
    pub n_exponent: usize,
    pub label_factors: Vec<(PatternLabel, usize)>,
}

impl LeadingTerm {
    /// Numeric value of the leading term at the schedule's n.
    pub fn evaluate(&self, ev: &EvaluatedSchedule) -> f64 {
        let mut value = self.coefficient.to_f64().unwrap_or(f64::NAN)
            * (ev.n() as f64).powi(self.n_exponent as i32);
        for &(label, count) in &self.label_factors {
            value *= label.probability(ev).powi(count as i32);
        }
        value
    }
}

fn label_sort_key(label: PatternLabel) -> (u8, u32) {
    match label {
        PatternLabel::Exact(l) => match l.finite_value() {
            Some(m) => (0, m),
            None => (1, 0),
        },
        PatternLabel::AtLeast(bound) => (2, bound),
        PatternLabel::Any => (3, 0),
    }
}

/// Leading term of the pattern's expected count, independent of any schedule.
pub fn leading_term(pattern: &PatternGraph) -> Result<LeadingTerm> {
    let b = pattern.automorphism_count()?;
    let mut factors: BTreeMap<(u8, u32), (PatternLabel, usize)> = BTreeMap::new();
    for (_, _, label) in pattern.pairs() {
        if label == PatternLabel::Any {
            continue;
        }
        factors.entry(label_sort_key(label)).or_insert((label, 0)).1 += 1;
    }
    Ok(LeadingTerm {
        coefficient: BigRational::new(BigInt::one(), BigInt::from(b)),
        n_exponent: pattern.k(),
        label_factors: factors.into_values().collect(),
    })
}

/// Everything the expectation machinery knows about one pattern at one n.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub b: u64,
    pub exact_expectation: BigRational,
    pub leading: LeadingTerm,
    pub second_moment: Option<BigRational>,
    pub ratio: Option<BigRational>,
}

/// Assemble the exact expectation, the leading term, and optionally the
/// second moment for one pattern at one n.
pub fn moment_report(
    pattern: &PatternGraph,
    schedule: &ProbabilitySchedule,
    n: usize,
    with_second_moment: bool,
) -> Result<MomentReport> {
    let b = pattern.automorphism_count()?;
    let exact_expectation = expected_count_exact(pattern, schedule, n)?;
    let leading = leading_term(pattern)?;
    let (second_moment, ratio) = if with_second_moment {
        let sm = second_moment_exact(pattern, schedule, n)?;
        (Some(sm.second_moment), sm.ratio)
    } else {
        (None, None)
    };
    Ok(MomentReport { b, exact_expectation, leading, second_moment, ratio })
}
