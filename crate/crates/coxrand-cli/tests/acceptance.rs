//! The acceptance gate. One test per shipping criterion; each prints a
//! single `ACCEPTANCE <k> <name>: PASS/FAIL (<detail>)` line before
//! asserting, so `--nocapture` yields a checklist. Criteria with a
//! pinned runtime budget enforce it with a wall-clock assert.

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use coxrand::counting::{expected_count_exact, falling_factorial, second_moment_exact};
use coxrand::experiment::{self, preset, PropertyCell};
use coxrand::homology::betti_numbers;
use coxrand::nerve::build_nerve;
use coxrand::pattern::{count_embeddings, pattern_by_name, three_trees, zk_pattern};
use coxrand::properties::{find_zk, is_hyperbolic, verify_witness, Witness};
use coxrand::recognition::{
    catalog, catalog_instance, classify, is_finite, AffineType, CoxeterType, FiniteType,
};
use coxrand::{trial_seed, EdgeLabel, LabelledGraph, ProbabilitySchedule};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use tempfile::TempDir;

const BIG: usize = 1 << 30;

fn report(number: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number} {name}: {verdict} ({detail})");
}

fn whole(g: &LabelledGraph) -> Vec<usize> {
    (0..g.n()).collect()
}

#[test]
fn criterion_1_catalog_round_trip() {
    let start = Instant::now();
    let types = catalog(9, 12);
    let mut mismatches = 0;
    for t in &types {
        let g = catalog_instance(*t).unwrap();
        let result = classify(&g, &whole(&g));
        if result.components.len() != 1 || result.components[0].cox_type != *t {
            mismatches += 1;
        }
    }
    for m in 3..=12 {
        let g = LabelledGraph::from_edges(2, &[(0, 1, EdgeLabel::fin(m))]).unwrap();
        let expected = CoxeterType::Finite(FiniteType::I2(m)).canonical();
        if classify(&g, &whole(&g)).components[0].cox_type != expected {
            mismatches += 1;
        }
    }
    let g = LabelledGraph::from_edges(2, &[(0, 1, EdgeLabel::INFINITY)]).unwrap();
    if classify(&g, &whole(&g)).components[0].cox_type
        != CoxeterType::Affine(AffineType::ATilde(1))
    {
        mismatches += 1;
    }

    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed < Duration::from_secs(1);
    report(
        1,
        "catalog-round-trip",
        pass,
        &format!("{} types + 11 dihedral cases, {mismatches} mismatches, {elapsed:.2?}", types.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_2_zk_nerve_homology() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for k in 1..=3 {
        let instance = zk_pattern(k).unwrap().instance();
        let profile = betti_numbers(&build_nerve(&instance, BIG).unwrap(), None);
        let mut expected = vec![0; k + 1];
        expected[0] = 1;
        expected[k] = 1;
        if profile.betti != expected {
            bad.push(format!("k={k}: {:?}", profile.betti));
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && elapsed < Duration::from_secs(10);
    report(2, "zk-nerve-homology", pass, &format!("k=1..3, bad={bad:?}, {elapsed:.2?}"));
    assert!(pass);
}

#[test]
fn criterion_3_retraction_composition() {
    let schedule = ProbabilitySchedule::constants(&[(2, 0.7), (3, 0.2)]).unwrap();
    let mut detections = 0;
    let mut counterexamples = 0;
    for seed in 0..200 {
        let g = LabelledGraph::sample(40, &schedule, seed).unwrap();
        if find_zk(&g, 1, true).is_some() {
            detections += 1;
            let profile = betti_numbers(&build_nerve(&g, 1 << 24).unwrap(), Some(1));
            if profile.betti[1] < 1 {
                counterexamples += 1;
            }
        }
    }
    let pass = counterexamples == 0;
    report(
        3,
        "retraction-composition",
        pass,
        &format!("200 graphs, {detections} detections, {counterexamples} counterexamples"),
    );
    assert!(pass);
}

/// Moussong's criterion evaluated literally over all subset pairs.
fn hyperbolic_brute(g: &LabelledGraph) -> bool {
    let n = g.n();
    let vertices_of =
        |mask: u32| -> Vec<usize> { (0..n).filter(|&v| mask >> v & 1 == 1).collect() };
    let finite: Vec<bool> = (0..1u32 << n)
        .map(|mask| mask == 0 || is_finite(g, &vertices_of(mask)))
        .collect();
    for mask in 1u32..1 << n {
        if classify(g, &vertices_of(mask)).overall_affine_rank3plus_witness.is_some() {
            return false;
        }
    }
    for s in 1u32..1 << n {
        if finite[s as usize] {
            continue;
        }
        for t in 1u32..1 << n {
            if finite[t as usize] || s & t != 0 {
                continue;
            }
            let crossed = vertices_of(s).iter().all(|&u| {
                vertices_of(t).iter().all(|&v| g.label(u, v) == EdgeLabel::fin(2))
            });
            if crossed {
                return false;
            }
        }
    }
    true
}

#[test]
fn criterion_4_hyperbolicity_oracle_equivalence() {
    let start = Instant::now();
    let mut disagreements = 0;

    let labels = [EdgeLabel::fin(2), EdgeLabel::fin(3), EdgeLabel::INFINITY];
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for code in 0..729 {
        let mut g = LabelledGraph::filled(4, EdgeLabel::fin(2)).unwrap();
        let mut rest = code;
        for &(u, v) in &pairs {
            g.set_label(u, v, labels[rest % 3]);
            rest /= 3;
        }
        if is_hyperbolic(&g, BIG).unwrap().hyperbolic != hyperbolic_brute(&g) {
            disagreements += 1;
        }
    }

    let sixth = 1.0 / 6.0;
    let schedule = ProbabilitySchedule::constants(&[
        (2, sixth),
        (3, sixth),
        (4, sixth),
        (5, sixth),
        (6, sixth),
    ])
    .unwrap();
    for t in 0..10_000u64 {
        let n = (t % 6) as usize + 2;
        let g = LabelledGraph::sample(n, &schedule, trial_seed(404, n, t)).unwrap();
        if is_hyperbolic(&g, BIG).unwrap().hyperbolic != hyperbolic_brute(&g) {
            disagreements += 1;
        }
    }

    let elapsed = start.elapsed();
    let pass = disagreements == 0 && elapsed < Duration::from_secs(120);
    report(
        4,
        "hyperbolicity-oracle-equivalence",
        pass,
        &format!("729 exhaustive + 10000 random, {disagreements} disagreements, {elapsed:.2?}"),
    );
    assert!(pass);
}

/// Consecutive estimate pairs violating the expected direction, split
/// into (not excused, excused by overlapping Wilson intervals).
fn monotonicity_violations(cells: &[&PropertyCell], increasing: bool) -> (usize, usize) {
    let mut hard = 0;
    let mut excused = 0;
    for pair in cells.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let violates =
            if increasing { b.estimate < a.estimate } else { b.estimate > a.estimate };
        if violates {
            if a.ci_lo <= b.ci_hi && b.ci_lo <= a.ci_hi {
                excused += 1;
            } else {
                hard += 1;
            }
        }
    }
    (hard, excused)
}

#[test]
fn criterion_5_fc_phase_transition() {
    let start = Instant::now();
    let negative = experiment::run(&preset("fc-negative-triangle").unwrap()).unwrap();
    let positive = experiment::run(&preset("fc-positive").unwrap()).unwrap();
    let neg_cells: Vec<&PropertyCell> = negative.cells.iter().collect();
    let pos_cells: Vec<&PropertyCell> = positive.cells.iter().collect();

    let neg_end = neg_cells.iter().find(|c| c.n == 800).unwrap();
    let pos_end = pos_cells.iter().find(|c| c.n == 1600).unwrap();
    let (neg_hard, neg_excused) = monotonicity_violations(&neg_cells, false);
    let (pos_hard, pos_excused) = monotonicity_violations(&pos_cells, true);

    let elapsed = start.elapsed();
    let pass = neg_end.estimate <= 0.1
        && pos_end.estimate >= 0.9
        && neg_end.trials == 500
        && pos_end.trials == 500
        && neg_hard == 0
        && neg_excused <= 1
        && pos_hard == 0
        && pos_excused <= 1
        && elapsed < Duration::from_secs(600);
    report(
        5,
        "fc-phase-transition",
        pass,
        &format!(
            "negative P(800)={:.3}, positive P(1600)={:.3}, violations {}+{}/{}+{}, {elapsed:.2?}",
            neg_end.estimate, pos_end.estimate, neg_hard, neg_excused, pos_hard, pos_excused
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_expected_count_exactness() {
    let result = experiment::run(&preset("triangle-moments").unwrap()).unwrap();
    let stats = &result.pattern_stats[0];
    let pattern = pattern_by_name("triangle-333").unwrap();
    let schedule = ProbabilitySchedule::constants(&[(3, 0.1)]).unwrap();

    let six = BigRational::from_integer(BigInt::from(6));
    let mean_exact = expected_count_exact(&pattern, &schedule, 60).unwrap();
    let ordered_mean = &mean_exact * &six;
    let sm = second_moment_exact(&pattern, &schedule, 60).unwrap();
    let var_exact = (&sm.second_moment - &ordered_mean * &ordered_mean) / (&six * &six);
    let se = (var_exact.to_f64().unwrap() / 20_000.0).sqrt();
    let deviation = (stats.sample_mean - mean_exact.to_f64().unwrap()).abs();
    let mc_ok = deviation <= 4.0 * se && stats.n == 60;

    let all3 = ProbabilitySchedule::constants(&[(3, 1.0)]).unwrap();
    let mut cycles_ok = true;
    for k in 3..=6 {
        let cycle = pattern_by_name(&format!("cycle3-{k}")).unwrap();
        let count = expected_count_exact(&cycle, &all3, 12).unwrap();
        let truth = BigRational::new(falling_factorial(12, k), BigInt::from(2 * k));
        cycles_ok &= count == truth;
    }

    let halves = ProbabilitySchedule::constants(&[(2, 0.5), (3, 0.5)]).unwrap();
    let tree_sum: BigRational = three_trees(5)
        .unwrap()
        .iter()
        .map(|t| expected_count_exact(t, &halves, 12).unwrap())
        .fold(BigRational::zero(), |acc, e| acc + e);
    let claimed = BigRational::new(BigInt::from(49), BigInt::from(24))
        * BigRational::from_integer(falling_factorial(12, 5))
        * BigRational::new(BigInt::from(1), BigInt::from(1 << 10));
    let trees_ok = tree_sum == claimed;

    let pass = mc_ok && cycles_ok && trees_ok;
    report(
        6,
        "expected-count-exactness",
        pass,
        &format!(
            "triangle mean dev {deviation:.4} vs 4se={:.4}, cycles_exact={cycles_ok}, \
             tree_sum={tree_sum} vs claimed {claimed}",
            4.0 * se
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_non_hyperbolic_witnesses() {
    let square = ProbabilitySchedule::constants(&[(2, 0.6)]).unwrap();
    let mut non_hyperbolic = 0;
    let mut join_witnesses = 0;
    let mut join_failures = 0;
    for seed in 0..200 {
        let g = LabelledGraph::sample(40, &square, seed).unwrap();
        let verdict = is_hyperbolic(&g, BIG).unwrap();
        if !verdict.hyperbolic {
            non_hyperbolic += 1;
        }
        if let Some(w @ Witness::Join(_, _)) = &verdict.witness {
            join_witnesses += 1;
            if !verify_witness(&g, w) {
                join_failures += 1;
            }
        }
    }

    let triangle = ProbabilitySchedule::constants(&[(3, 0.5)]).unwrap();
    let mut affine_witnesses = 0;
    let mut affine_failures = 0;
    for seed in 0..200 {
        let g = LabelledGraph::sample(40, &triangle, 10_000 + seed).unwrap();
        let verdict = is_hyperbolic(&g, BIG).unwrap();
        if let Some(w @ Witness::Affine(s)) = &verdict.witness {
            if s.len() >= 3 {
                affine_witnesses += 1;
            }
            if !verify_witness(&g, w) {
                affine_failures += 1;
            }
        }
    }

    let pass = non_hyperbolic >= 190
        && join_failures == 0
        && affine_witnesses >= 198
        && affine_failures == 0;
    report(
        7,
        "non-hyperbolic-witnesses",
        pass,
        &format!(
            "square regime {non_hyperbolic}/200 non-hyperbolic ({join_witnesses} joins, \
             {join_failures} invalid), affine regime {affine_witnesses}/200 \
             ({affine_failures} invalid)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_nerve_dimension_threshold() {
    let sub = experiment::run(&preset("nerve-dim-sub").unwrap()).unwrap();
    let superc = experiment::run(&preset("nerve-dim-super").unwrap()).unwrap();
    let low = sub.cells[0].estimate;
    let high = superc.cells[0].estimate;
    let pass = low <= 0.1 && high >= 0.9 && sub.cells[0].trials == 300;
    report(
        8,
        "nerve-dimension-threshold",
        pass,
        &format!("P(dim>=3) = {low:.3} at c=0.25, {high:.3} at c=4, n=300"),
    );
    assert!(pass);
}

fn run_with_threads(args: &[&str], threads: &str) -> (Vec<u8>, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_coxrand"))
        .args(args)
        .args(["--threads", threads])
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    (output.stdout, output.stderr)
}

#[test]
fn criterion_9_cli_thread_determinism() {
    let dir = TempDir::new().unwrap();
    let write = |name: &str, content: &str| -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, content).unwrap();
        path
    };
    let schedule = write(
        "sched.json",
        r#"{"entries": [{"label": 2, "c": 0.5, "alpha": 0.0, "beta": 0.0},
                        {"label": 3, "c": 0.3, "alpha": 0.0, "beta": 0.0}]}"#,
    );
    let spec = write(
        "spec.json",
        r#"{"n": 12, "schedule": {"entries": [{"label": 2, "c": 0.4, "alpha": 0.0, "beta": 0.0},
                                              {"label": 3, "c": 0.3, "alpha": 0.0, "beta": 0.0}]}}"#,
    );
    let sweep = write(
        "sweep.json",
        r#"{
  "schedule": {"entries": [{"label": 2, "c": 0.45, "alpha": 0.0, "beta": 0.0},
                           {"label": 3, "c": 0.25, "alpha": 0.0, "beta": 0.0}]},
  "n_values": [6, 8, 10],
  "trials": 40,
  "seed": 7,
  "properties": [{"kind": "fc_type"}, {"kind": "hyperbolic"},
                 {"kind": "nerve_dim_ge", "dim": 2}, {"kind": "contains_zk", "k": 1},
                 {"kind": "pattern_count", "pattern": "triangle-333"}]
}"#,
    );
    let sched = schedule.to_str().unwrap();
    let graph_spec = spec.to_str().unwrap();
    let sweep_cfg = sweep.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["catalog", "--max-rank", "6"],
        vec!["catalog", "--format", "dot"],
        vec!["sample", "--config", sched, "--n", "25", "--seed", "9"],
        vec!["sample", "--config", sched, "--n", "25", "--seed", "9", "--format", "dot"],
        vec!["analyze", "--config", graph_spec, "--seed", "4", "--betti"],
        vec![
            "expect", "--pattern", "triangle-333", "--config", sched, "--n-range",
            "10:30:10", "--second-moment",
        ],
        vec!["sweep", "--config", sweep_cfg, "--format", "csv"],
        vec!["sweep", "--config", sweep_cfg, "--format", "json"],
        vec!["sweep", "--config", sweep_cfg, "--format", "svg"],
    ];

    let mut mismatched = Vec::new();
    for args in &commands {
        let (one, _) = run_with_threads(args, "1");
        let (eight, _) = run_with_threads(args, "8");
        if one != eight || one.is_empty() {
            mismatched.push(args.join(" "));
        }
    }
    let pass = mismatched.is_empty();
    report(
        9,
        "cli-thread-determinism",
        pass,
        &format!("{} commands, mismatched: {mismatched:?}", commands.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_10_second_moment_self_consistency() {
    let pattern = pattern_by_name("triangle-333").unwrap();
    let schedule = ProbabilitySchedule::constants(&[(3, 0.2)]).unwrap();
    let trials = 10_000usize;
    let n = 30;

    let counts: Vec<f64> = (0..trials as u64)
        .map(|t| {
            let g = LabelledGraph::sample(n, &schedule, trial_seed(1010, n, t)).unwrap();
            count_embeddings(&g, &pattern).unwrap() as f64
        })
        .collect();
    let t = trials as f64;
    let mean = counts.iter().sum::<f64>() / t;
    let s2 = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
    let m4 = counts.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / t;
    let se_var = ((m4 - (t - 3.0) / (t - 1.0) * s2 * s2) / t).sqrt();

    let six = BigRational::from_integer(BigInt::from(6));
    let ordered_mean = expected_count_exact(&pattern, &schedule, n).unwrap() * &six;
    let sm = second_moment_exact(&pattern, &schedule, n).unwrap();
    let var_exact = ((&sm.second_moment - &ordered_mean * &ordered_mean) / (&six * &six))
        .to_f64()
        .unwrap();

    let deviation = (var_exact - s2).abs();
    let pass = deviation <= 4.0 * se_var;
    report(
        10,
        "second-moment-self-consistency",
        pass,
        &format!(
            "exact var {var_exact:.3}, sample var {s2:.3}, |diff| {deviation:.3} vs 4se {:.3}",
            4.0 * se_var
        ),
    );
    assert!(pass);
}
