//! Probability schedules.
//!
//! A schedule assigns each finite label m a curve
//! p_m(n) = clamp(c * n^alpha * (ln n)^beta, 0, 1); whatever mass the
//! finite labels leave over goes to infinity. All threshold regimes of
//! interest (powers of n with optional logarithmic corrections) are
//! expressible in this family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};
use crate::label::EdgeLabel;

fn default_coefficient() -> f64 {
    1.0
}

/// One curve of the schedule: p_label(n) = clamp(c n^alpha (ln n)^beta, 0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    /// Finite label (>= 2) this curve feeds.
    pub label: u32,
    /// Leading coefficient c >= 0.
    #[serde(default = "default_coefficient")]
    pub c: f64,
    /// Exponent of n.
    #[serde(default)]
    pub alpha: f64,
    /// Exponent of ln n.
    #[serde(default)]
    pub beta: f64,
}

impl ScheduleEntry {
    /// Constant curve p_label(n) = c.
    pub fn constant(label: u32, c: f64) -> ScheduleEntry {
        ScheduleEntry { label, c, alpha: 0.0, beta: 0.0 }
    }

    /// Power curve p_label(n) = c * n^alpha.
    pub fn power(label: u32, c: f64, alpha: f64) -> ScheduleEntry {
        ScheduleEntry { label, c, alpha, beta: 0.0 }
    }

    fn value_at(&self, n: usize) -> f64 {
        let n = n as f64;
        (self.c * n.powf(self.alpha) * n.ln().powf(self.beta)).clamp(0.0, 1.0)
    }
}

/// A family {p_m(n)} of finite-label curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleJson", into = "ScheduleJson")]
pub struct ProbabilitySchedule {
    entries: Vec<ScheduleEntry>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleJson {
    entries: Vec<ScheduleEntry>,
}

impl TryFrom<ScheduleJson> for ProbabilitySchedule {
    type Error = CoxError;

    fn try_from(json: ScheduleJson) -> Result<Self> {
        ProbabilitySchedule::new(json.entries)
    }
}

impl From<ProbabilitySchedule> for ScheduleJson {
    fn from(s: ProbabilitySchedule) -> ScheduleJson {
        ScheduleJson { entries: s.entries }
    }
}

impl ProbabilitySchedule {
    /// Builds a schedule, checking labels are finite (>= 2), distinct,
    /// and coefficients non-negative. Entries are kept sorted by label.
    pub fn new(mut entries: Vec<ScheduleEntry>) -> Result<ProbabilitySchedule> {
        entries.sort_by_key(|e| e.label);
        for pair in entries.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(CoxError::Config(format!(
                    "duplicate schedule entry for label {}",
                    pair[0].label
                )));
            }
        }
        for e in &entries {
            EdgeLabel::finite(e.label)?;
            if !(e.c >= 0.0 && e.c.is_finite()) {
                return Err(CoxError::Config(format!(
                    "schedule coefficient for label {} must be finite and >= 0",
                    e.label
                )));
            }
            if !e.alpha.is_finite() || !e.beta.is_finite() {
                return Err(CoxError::Config(format!(
                    "schedule exponents for label {} must be finite",
                    e.label
                )));
            }
        }
        Ok(ProbabilitySchedule { entries })
    }

    /// Empty schedule: every pair gets label infinity.
    pub fn empty() -> ProbabilitySchedule {
        ProbabilitySchedule { entries: Vec::new() }
    }

    /// Schedule of constant curves, one per (label, probability) pair.
    pub fn constants(pairs: &[(u32, f64)]) -> Result<ProbabilitySchedule> {
        ProbabilitySchedule::new(
            pairs.iter().map(|&(label, c)| ScheduleEntry::constant(label, c)).collect(),
        )
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    /// Evaluates every curve at n. Fails with `ScheduleOverflow` if the
    /// finite labels claim total mass above 1.
    pub fn evaluate(&self, n: usize) -> Result<EvaluatedSchedule> {
        if n < 2 {
            return Err(CoxError::Config(format!("schedules are evaluated at n >= 2, got {n}")));
        }
        let probs: Vec<(u32, f64)> =
            self.entries.iter().map(|e| (e.label, e.value_at(n))).collect();
        let total: f64 = probs.iter().map(|&(_, p)| p).sum();
        if total > 1.0 + 1e-12 {
            return Err(CoxError::ScheduleOverflow { n, total });
        }
        Ok(EvaluatedSchedule { n, probs, p_infinity: (1.0 - total).max(0.0) })
    }
}

/// A schedule pinned at a concrete n: one probability per finite label
/// plus the residual infinity mass.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedSchedule {
    n: usize,
    /// (label, probability), sorted by label.
    probs: Vec<(u32, f64)>,
    p_infinity: f64,
}

impl EvaluatedSchedule {
    pub fn n(&self) -> usize {
        self.n
    }

    /// (label, probability) pairs in increasing label order.
    pub fn finite_probabilities(&self) -> &[(u32, f64)] {
        &self.probs
    }

    pub fn p_infinity(&self) -> f64 {
        self.p_infinity
    }

    /// Probability of a single label; finite labels without an entry
    /// have probability 0.
    pub fn probability(&self, label: EdgeLabel) -> f64 {
        match label.finite_value() {
            None => self.p_infinity,
            Some(m) => self
                .probs
                .iter()
                .find(|&&(l, _)| l == m)
                .map(|&(_, p)| p)
                .unwrap_or(0.0),
        }
    }

    /// Aggregate probability of the label class {m : m >= min}. The two
    /// conventions for p_B in use (every label >= 3, or every label
    /// >= 4) are both instances of this call.
    pub fn class_probability(&self, min: u32) -> f64 {
        self.probs.iter().filter(|&&(l, _)| l >= min).map(|&(_, p)| p).sum()
    }

    /// Exact rational view of a label probability. Floating values are
    /// quantized to 12 significant decimal digits first, and the
    /// infinity mass is defined as exactly 1 minus the quantized finite
    /// masses, so downstream exact arithmetic is reproducible.
    pub fn rational(&self, label: EdgeLabel) -> BigRational {
        match label.finite_value() {
            Some(m) => self
                .probs
                .iter()
                .find(|&&(l, _)| l == m)
                .map(|&(_, p)| quantize(p))
                .unwrap_or_else(BigRational::zero),
            None => {
                let finite: BigRational =
                    self.probs.iter().map(|&(_, p)| quantize(p)).sum();
                BigRational::one() - finite
            }
        }
    }

    /// Exact rational mass of the class {m : m >= min}.
    pub fn class_rational(&self, min: u32) -> BigRational {
        self.probs.iter().filter(|&&(l, _)| l >= min).map(|&(_, p)| quantize(p)).sum()
    }
}

/// Rounds a probability to 12 significant decimal digits, exactly.
pub(crate) fn quantize(p: f64) -> BigRational {
    assert!((0.0..=1.0).contains(&p), "probabilities live in [0,1], got {p}");
    if p == 0.0 {
        return BigRational::zero();
    }
    if p == 1.0 {
        return BigRational::one();
    }
    // Scale so the mantissa keeps 12 significant digits: for p with
    // decimal exponent e (p in [10^e, 10^{e+1})), use denominator
    // 10^(11 - e).
    let e = p.log10().floor() as i32;
    let digits = (11 - e).clamp(0, 330);
    let denom = BigInt::from(10u32).pow(digits as u32);
    let num = BigInt::from((p * 10f64.powi(digits)).round() as i128);
    let q = BigRational::new(num, denom);
    debug_assert!(!q.is_negative() && q <= BigRational::one());
    q
}
