//! Monte Carlo harness: sweep a schedule across n, estimate property
//! probabilities with Wilson intervals, and emit CSV/SVG artifacts.
//!
//! Trials run in parallel but aggregate in trial order, and each trial
//! seeds its own generator from (seed, n, trial), so results are
//! byte-identical no matter how work is scheduled. Trials that blow a
//! search budget are excluded from estimates and reported per cell.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::expected_count_exact;
use crate::error::{Budgets, CoxError, Result};
use crate::graph::LabelledGraph;
use crate::homology::betti_numbers;
use crate::nerve::build_nerve;
use crate::pattern::{count_embeddings, pattern_by_name, PatternGraph};
use crate::properties;
use crate::rng::trial_seed;
use crate::schedule::{ProbabilitySchedule, ScheduleEntry};

/// 97.5% normal quantile, for two-sided 95% Wilson intervals.
pub const WILSON_Z: f64 = 1.959963984540054;

/// A graph property estimated by the harness. Each is evaluated per
/// sampled graph as a boolean; pattern counts additionally record the
/// count itself for moment comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Property {
    FcType,
    Hyperbolic,
    NerveDimGe { dim: usize },
    BettiNonzero { degree: usize },
    ContainsZk { k: usize },
    ContainsZkNoCommonNeighbor { k: usize },
    PatternCount { pattern: String },
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::FcType => write!(f, "fc_type"),
            Property::Hyperbolic => write!(f, "hyperbolic"),
            Property::NerveDimGe { dim } => write!(f, "nerve_dim_ge({dim})"),
            Property::BettiNonzero { degree } => write!(f, "betti_nonzero({degree})"),
            Property::ContainsZk { k } => write!(f, "contains_zk({k})"),
            Property::ContainsZkNoCommonNeighbor { k } => {
                write!(f, "contains_zk_no_common_neighbor({k})")
            }
            Property::PatternCount { pattern } => write!(f, "pattern_count({pattern})"),
        }
    }
}

/// A full experiment: one schedule swept over n_values, every property
/// evaluated on the same graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schedule: ProbabilitySchedule,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub properties: Vec<Property>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Checks the config and resolves every referenced pattern.
    fn validate(&self) -> Result<Vec<(String, PatternGraph)>> {
        if self.trials == 0 {
            return Err(CoxError::Config("trials must be at least 1".to_owned()));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoxError::Config("n_values must be strictly increasing".to_owned()));
        }
        if self.n_values.first().is_some_and(|&n| n < 2) {
            return Err(CoxError::Config("n_values must all be at least 2".to_owned()));
        }
        let mut patterns = Vec::new();
        for prop in &self.properties {
            if let Property::PatternCount { pattern } = prop {
                if !patterns.iter().any(|(name, _)| name == pattern) {
                    patterns.push((pattern.clone(), pattern_by_name(pattern)?));
                }
            }
        }
        Ok(patterns)
    }
}

/// Estimate for one (n, property) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCell {
    pub n: usize,
    pub property: String,
    pub successes: usize,
    pub failures: usize,
    pub excluded: usize,
    pub trials: usize,
    /// successes / (successes + failures); 0 when every trial was excluded.
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Count statistics for one (n, pattern) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternStats {
    pub n: usize,
    pub pattern: String,
    pub sample_mean: f64,
    /// Unbiased sample variance; 0 with fewer than two counted trials.
    pub sample_variance: f64,
    pub analytic_expectation: f64,
}

/// Everything a run produces. Wall time is informational and never
/// serialized, so serialized results stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub cells: Vec<PropertyCell>,
    pub pattern_stats: Vec<PatternStats>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Failure,
    Excluded,
}

struct Outcome {
    status: Status,
    count: Option<u64>,
}

fn budget_blown(e: &CoxError) -> bool {
    matches!(
        e,
        CoxError::FaceBudgetExceeded { .. }
            | CoxError::CliqueBudgetExceeded { .. }
            | CoxError::SearchBudgetExceeded { .. }
    )
}

fn to_outcome(r: Result<Outcome>) -> Result<Outcome> {
    match r {
        Err(e) if budget_blown(&e) => Ok(Outcome { status: Status::Excluded, count: None }),
        other => other,
    }
}

fn evaluate(
    g: &LabelledGraph,
    prop: &Property,
    budgets: &Budgets,
    patterns: &[(String, PatternGraph)],
) -> Result<Outcome> {
    let boolean = |holds: bool| Outcome {
        status: if holds { Status::Success } else { Status::Failure },
        count: None,
    };
    let raw = match prop {
        Property::FcType => {
            properties::is_fc_type(g, budgets.cliques).map(|v| boolean(v.fc_type))
        }
        Property::Hyperbolic => {
            properties::is_hyperbolic(g, budgets.search).map(|v| boolean(v.hyperbolic))
        }
        Property::NerveDimGe { dim } => {
            properties::nerve_dimension_at_least(g, *dim, budgets.cliques).map(boolean)
        }
        Property::BettiNonzero { degree } => build_nerve(g, budgets.faces).map(|nerve| {
            let profile = betti_numbers(&nerve, Some(*degree));
            boolean(profile.betti.get(*degree).is_some_and(|&b| b > 0))
        }),
        Property::ContainsZk { k } => Ok(boolean(properties::find_zk(g, *k, false).is_some())),
        Property::ContainsZkNoCommonNeighbor { k } => {
            Ok(boolean(properties::find_zk(g, *k, true).is_some()))
        }
        Property::PatternCount { pattern } => {
            let (_, p) = patterns
                .iter()
                .find(|(name, _)| name == pattern)
                .expect("patterns were resolved during validation");
            count_embeddings(g, p).map(|count| Outcome {
                status: if count >= 1 { Status::Success } else { Status::Failure },
                count: Some(count),
            })
        }
    };
    to_outcome(raw)
}

/// Runs the full sweep. Every property is evaluated on the same graph
/// per (n, trial), trials are independent, and the aggregation order is
/// the trial order.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let patterns = config.validate()?;
    let start = Instant::now();
    let mut cells = Vec::new();
    let mut pattern_stats = Vec::new();
    for &n in &config.n_values {
        let per_trial: Vec<Result<Vec<Outcome>>> = (0..config.trials as u64)
            .into_par_iter()
            .map(|t| {
                let g = LabelledGraph::sample(n, &config.schedule, trial_seed(config.seed, n, t))?;
                config
                    .properties
                    .iter()
                    .map(|prop| evaluate(&g, prop, &config.budgets, &patterns))
                    .collect()
            })
            .collect();

        let mut successes = vec![0usize; config.properties.len()];
        let mut failures = vec![0usize; config.properties.len()];
        let mut excluded = vec![0usize; config.properties.len()];
        let mut counts: Vec<Vec<u64>> = vec![Vec::new(); config.properties.len()];
        for trial in per_trial {
            for (i, outcome) in trial?.into_iter().enumerate() {
                match outcome.status {
                    Status::Success => successes[i] += 1,
                    Status::Failure => failures[i] += 1,
                    Status::Excluded => excluded[i] += 1,
                }
                if let Some(c) = outcome.count {
                    counts[i].push(c);
                }
            }
        }
        for (i, prop) in config.properties.iter().enumerate() {
            let counted = successes[i] + failures[i];
            let estimate = if counted == 0 { 0.0 } else { successes[i] as f64 / counted as f64 };
            let (ci_lo, ci_hi) = wilson_interval(successes[i], counted);
            cells.push(PropertyCell {
                n,
                property: prop.to_string(),
                successes: successes[i],
                failures: failures[i],
                excluded: excluded[i],
                trials: config.trials,
                estimate,
                ci_lo,
                ci_hi,
            });
            if let Property::PatternCount { pattern } = prop {
                let (_, p) = patterns
                    .iter()
                    .find(|(name, _)| name == pattern)
                    .expect("patterns were resolved during validation");
                let analytic = expected_count_exact(p, &config.schedule, n)?
                    .to_f64()
                    .expect("expectation fits in f64");
                pattern_stats.push(PatternStats {
                    n,
                    pattern: pattern.clone(),
                    sample_mean: mean(&counts[i]),
                    sample_variance: variance(&counts[i]),
                    analytic_expectation: analytic,
                });
            }
        }
    }
    Ok(ExperimentResult { cells, pattern_stats, wall_time: start.elapsed() })
}

fn mean(counts: &[u64]) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    counts.iter().map(|&c| c as f64).sum::<f64>() / counts.len() as f64
}

fn variance(counts: &[u64]) -> f64 {
    if counts.len() < 2 {
        return 0.0;
    }
    let m = mean(counts);
    let ss: f64 = counts.iter().map(|&c| (c as f64 - m).powi(2)).sum();
    ss / (counts.len() - 1) as f64
}

/// Wilson 95% score interval for `successes` out of `trials`. With no
/// trials the interval is the whole of [0, 1].
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Renders the per-cell estimates as CSV.
pub fn render_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("n,property,estimate,ci_lo,ci_hi,trials,excluded\n");
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{},{}\n",
            c.n, c.property, c.estimate, c.ci_lo, c.ci_hi, c.trials, c.excluded
        ));
    }
    out
}

pub fn emit_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    fs::write(path, render_csv(result))?;
    Ok(())
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 55.0;
const MARGIN_RIGHT: f64 = 15.0;
const MARGIN_TOP: f64 = 15.0;
const MARGIN_BOTTOM: f64 = 40.0;
const PALETTE: [&str; 6] =
    ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085"];

/// Renders estimate-vs-n lines with confidence bands, one series per
/// property. The plot is plain SVG with fixed float formatting, so a
/// given result always renders to the same bytes.
pub fn render_svg(result: &ExperimentResult) -> String {
    let mut ns: Vec<usize> = result.cells.iter().map(|c| c.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let (n_lo, n_hi) = match (ns.first(), ns.last()) {
        (Some(&lo), Some(&hi)) if lo < hi => (lo as f64, hi as f64),
        (Some(&lo), _) => (lo as f64 - 1.0, lo as f64 + 1.0),
        _ => (0.0, 1.0),
    };
    let x = |n: f64| {
        MARGIN_LEFT + (n - n_lo) / (n_hi - n_lo) * (SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    };
    let y = |p: f64| MARGIN_TOP + (1.0 - p) * (SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for tick in 0..=4 {
        let p = tick as f64 / 4.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>\n",
            x(n_lo),
            y(p),
            x(n_hi),
            y(p)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.2}</text>\n",
            x(n_lo) - 6.0,
            y(p) + 4.0,
            p
        ));
    }
    for &n in &ns {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{n}</text>\n",
            x(n as f64),
            SVG_HEIGHT - MARGIN_BOTTOM + 16.0
        ));
    }
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        x(n_lo),
        y(0.0),
        x(n_hi),
        y(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        x(n_lo),
        y(0.0),
        x(n_lo),
        y(1.0)
    ));

    let mut series: Vec<&str> = Vec::new();
    for c in &result.cells {
        if !series.contains(&c.property.as_str()) {
            series.push(&c.property);
        }
    }
    for (si, name) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let points: Vec<&PropertyCell> =
            result.cells.iter().filter(|c| c.property == *name).collect();
        if points.len() > 1 {
            let mut band = String::new();
            for c in &points {
                band.push_str(&format!("{:.2},{:.2} ", x(c.n as f64), y(c.ci_hi)));
            }
            for c in points.iter().rev() {
                band.push_str(&format!("{:.2},{:.2} ", x(c.n as f64), y(c.ci_lo)));
            }
            svg.push_str(&format!(
                "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
                band.trim_end()
            ));
            let line: Vec<String> = points
                .iter()
                .map(|c| format!("{:.2},{:.2}", x(c.n as f64), y(c.estimate)))
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                line.join(" ")
            ));
        }
        for c in &points {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                x(c.n as f64),
                y(c.estimate)
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\">{name}</text>\n",
            MARGIN_LEFT + 10.0,
            MARGIN_TOP + 14.0 + 14.0 * si as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_svg(result: &ExperimentResult, path: &Path) -> Result<()> {
    fs::write(path, render_svg(result))?;
    Ok(())
}

/// Names of the built-in experiment presets.
pub fn preset_names() -> Vec<&'static str> {
    vec![
        "fc-negative-triangle",
        "fc-positive",
        "hyp-positive",
        "hyp-negative-square",
        "hyp-negative-triangle",
        "nerve-dim-sub",
        "nerve-dim-super",
        "zk-homology",
        "triangle-emergence",
        "triangle-moments",
    ]
}

/// A ready-to-run config for a named phase-transition experiment. Each
/// preset pins schedule, n range, trial count, and seed, so two runs of
/// the same preset are identical.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let config = |entries: Vec<ScheduleEntry>,
                  n_values: Vec<usize>,
                  trials: usize,
                  seed: u64,
                  properties: Vec<Property>|
     -> Result<ExperimentConfig> {
        Ok(ExperimentConfig {
            schedule: ProbabilitySchedule::new(entries)?,
            n_values,
            trials,
            seed,
            properties,
            budgets: Budgets::default(),
            csv_out: None,
            svg_out: None,
        })
    };
    match name {
        "fc-negative-triangle" => config(
            vec![ScheduleEntry::power(3, 8.0, -1.0)],
            vec![50, 100, 200, 400, 800],
            500,
            101,
            vec![Property::FcType],
        ),
        "fc-positive" => config(
            vec![
                ScheduleEntry::power(2, 1.0, -1.1),
                ScheduleEntry::power(3, 1.0, -1.5),
                ScheduleEntry::power(4, 1.0, -1.5),
            ],
            vec![100, 400, 1600],
            500,
            102,
            vec![Property::FcType],
        ),
        "hyp-positive" => config(
            vec![ScheduleEntry::power(2, 1.0, -1.2), ScheduleEntry::power(3, 1.0, -1.2)],
            vec![50, 100, 200, 400],
            200,
            103,
            vec![Property::Hyperbolic],
        ),
        "hyp-negative-square" => config(
            vec![ScheduleEntry::constant(2, 0.6)],
            vec![10, 20, 40],
            200,
            104,
            vec![Property::Hyperbolic],
        ),
        "hyp-negative-triangle" => config(
            vec![ScheduleEntry::constant(3, 0.5)],
            vec![10, 20, 40],
            200,
            105,
            vec![Property::Hyperbolic],
        ),
        "nerve-dim-sub" => config(
            vec![ScheduleEntry::power(2, 0.25, -2.0 / 3.0)],
            vec![300],
            300,
            106,
            vec![Property::NerveDimGe { dim: 3 }],
        ),
        "nerve-dim-super" => config(
            vec![ScheduleEntry::power(2, 4.0, -2.0 / 3.0)],
            vec![300],
            300,
            106,
            vec![Property::NerveDimGe { dim: 3 }],
        ),
        "zk-homology" => config(
            vec![ScheduleEntry::power(3, 1.0, -0.6)],
            vec![12, 16, 20],
            100,
            107,
            vec![
                Property::ContainsZkNoCommonNeighbor { k: 1 },
                Property::BettiNonzero { degree: 1 },
            ],
        ),
        "triangle-emergence" => config(
            vec![ScheduleEntry::power(3, 4.0, -1.0)],
            vec![100, 200, 400],
            300,
            108,
            vec![Property::PatternCount { pattern: "triangle-333".to_owned() }],
        ),
        "triangle-moments" => config(
            vec![ScheduleEntry::constant(3, 0.1)],
            vec![60],
            20_000,
            109,
            vec![Property::PatternCount { pattern: "triangle-333".to_owned() }],
        ),
        _ => Err(CoxError::UnknownPreset {
            name: name.to_owned(),
            known: preset_names().join(", "),
        }),
    }
}
