//! Randomized structural invariants: downward closure and boundary
//! algebra of nerves, Euler characteristic versus Betti numbers,
//! permutation equivariance of classification and embedding counts,
//! second-moment domination, Wilson interval bracketing, sampler
//! determinism, and exact schedule mass conservation.

use coxrand::counting::{expected_count_exact, second_moment_exact};
use coxrand::homology::{betti_numbers, zk_fundamental_cycle, Chain};
use coxrand::nerve::build_nerve;
use coxrand::pattern::{count_embeddings, pattern_by_name};
use coxrand::recognition::classify;
use coxrand::experiment::wilson_interval;
use coxrand::{EdgeLabel, LabelledGraph, ProbabilitySchedule, ScheduleEntry};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

const CAP: usize = 1 << 20;

/// Sampling parameters small enough that every derived computation is
/// instant: vertex count, seed, and three constant label weights.
fn graph_params() -> impl Strategy<Value = (usize, u64, f64, f64, f64)> {
    (2usize..=7, 0u64..1_000_000, 0.0..0.45f64, 0.0..0.3f64, 0.0..0.2f64)
}

fn sample_graph(n: usize, seed: u64, c2: f64, c3: f64, c4: f64) -> LabelledGraph {
    let schedule =
        ProbabilitySchedule::constants(&[(2, c2), (3, c3), (4, c4)]).unwrap();
    LabelledGraph::sample(n, &schedule, seed).unwrap()
}

/// Relabels vertex i as perm[i].
fn permute(g: &LabelledGraph, perm: &[usize]) -> LabelledGraph {
    let mut edges = Vec::new();
    for (u, v) in g.pairs() {
        edges.push((perm[u], perm[v], g.label(u, v)));
    }
    LabelledGraph::from_edges(g.n(), &edges).unwrap()
}

/// Argsort of the first n keys; ties keep index order.
fn permutation_from_keys(keys: &[u64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (keys[i], i));
    let mut perm = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        perm[i] = rank;
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampling_is_deterministic_and_round_trips(
        (n, seed, c2, c3, c4) in graph_params(),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let again = sample_graph(n, seed, c2, c3, c4);
        prop_assert_eq!(&g, &again);

        let json = serde_json::to_string(&g).unwrap();
        let back: LabelledGraph = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&g, &back);
    }

    #[test]
    fn nerve_faces_are_downward_closed(
        (n, seed, c2, c3, c4) in graph_params(),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let cx = build_nerve(&g, CAP).unwrap();
        for d in 1..=cx.dimension().max(0) as usize {
            for face in cx.faces(d) {
                for drop in 0..face.len() {
                    let mut sub = face.to_vec();
                    sub.remove(drop);
                    prop_assert!(cx.contains(&sub));
                }
            }
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes(
        (n, seed, c2, c3, c4) in graph_params(),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let cx = build_nerve(&g, CAP).unwrap();
        for d in 0..=cx.dimension().max(0) as usize {
            let chain = Chain {
                terms: cx.faces(d).map(|f| (f.to_vec(), 1)).collect(),
            };
            prop_assert!(chain.boundary().boundary().is_zero());
        }
    }

    #[test]
    fn zk_fundamental_cycles_are_cycles(k in 1usize..=4) {
        prop_assert!(zk_fundamental_cycle(k).boundary().is_zero());
    }

    #[test]
    fn euler_characteristic_matches_betti_alternation(
        (n, seed, c2, c3, c4) in graph_params(),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let cx = build_nerve(&g, CAP).unwrap();
        let profile = betti_numbers(&cx, None);
        let alternating: i64 = profile
            .betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(cx.euler_characteristic(), alternating);
    }

    #[test]
    fn classification_is_permutation_equivariant(
        (n, seed, c2, c3, c4) in graph_params(),
        keys in prop::collection::vec(any::<u64>(), 7),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let perm = permutation_from_keys(&keys, n);
        let h = permute(&g, &perm);

        let all: Vec<usize> = (0..n).collect();
        let before = classify(&g, &all);
        let after = classify(&h, &all);
        prop_assert_eq!(before.overall_finite, after.overall_finite);

        let mut types_before: Vec<String> = before
            .components
            .iter()
            .map(|c| format!("{:?}", c.cox_type))
            .collect();
        let mut types_after: Vec<String> =
            after.components.iter().map(|c| format!("{:?}", c.cox_type)).collect();
        types_before.sort();
        types_after.sort();
        prop_assert_eq!(types_before, types_after);
    }

    #[test]
    fn embedding_counts_are_permutation_invariant(
        (n, seed, c2, c3, c4) in graph_params(),
        keys in prop::collection::vec(any::<u64>(), 7),
    ) {
        let g = sample_graph(n, seed, c2, c3, c4);
        let perm = permutation_from_keys(&keys, n);
        let h = permute(&g, &perm);
        for name in ["triangle-333", "zk-1", "tree3-path"] {
            let pattern = pattern_by_name(name).unwrap();
            prop_assert_eq!(
                count_embeddings(&g, &pattern).unwrap(),
                count_embeddings(&h, &pattern).unwrap()
            );
        }
    }

    #[test]
    fn second_moment_dominates_squared_mean(
        n in 3usize..=12,
        c2 in 0.0..0.4f64,
        c3 in 0.01..0.5f64,
    ) {
        let schedule = ProbabilitySchedule::constants(&[(2, c2), (3, c3)]).unwrap();
        let pattern = pattern_by_name("triangle-333").unwrap();
        let b = BigRational::from_integer(BigInt::from(
            pattern.automorphism_count().unwrap(),
        ));
        let ordered_mean = expected_count_exact(&pattern, &schedule, n).unwrap() * &b;
        let sm = second_moment_exact(&pattern, &schedule, n).unwrap();
        prop_assert!(sm.second_moment >= &ordered_mean * &ordered_mean);
        if let Some(ratio) = sm.ratio {
            prop_assert!(ratio >= BigRational::one());
        }
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(
        successes in 0usize..=500,
        failures in 0usize..=500,
    ) {
        let trials = successes + failures;
        let (lo, hi) = wilson_interval(successes, trials);
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= hi);
        if trials > 0 {
            let estimate = successes as f64 / trials as f64;
            prop_assert!(lo <= estimate + 1e-12);
            prop_assert!(estimate <= hi + 1e-12);
        } else {
            prop_assert_eq!((lo, hi), (0.0, 1.0));
        }
    }

    #[test]
    fn schedule_mass_is_conserved_exactly(
        n in 2usize..=200,
        c2 in 0.0..0.5f64,
        c3 in 0.0..0.3f64,
        alpha2 in -1.0..0.0f64,
        alpha3 in -1.0..0.0f64,
    ) {
        let schedule = ProbabilitySchedule::new(vec![
            ScheduleEntry::power(2, c2, alpha2),
            ScheduleEntry::power(3, c3, alpha3),
        ])
        .unwrap();
        let ev = schedule.evaluate(n).unwrap();
        let total = ev.rational(EdgeLabel::finite(2).unwrap())
            + ev.rational(EdgeLabel::finite(3).unwrap())
            + ev.rational(EdgeLabel::INFINITY);
        prop_assert_eq!(total, BigRational::one());
    }
}
