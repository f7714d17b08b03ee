mod common;

use common::oracle::{enumerate_expected_counts, fuzz_conditionals, max_abs_diff, sampled_expected_counts};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subset_llda::sampler::{CountState, Hyperparameters, Layout, Schedule};

#[test]
fn conditionals_match_exact_rational_evaluation() {
    let (snapshots, worst) = fuzz_conditionals(10, 10, 2024);
    assert_eq!(snapshots, 100);
    assert!(worst <= 1e-12, "max deviation {worst:e}");
}

#[test]
fn expected_counts_match_posterior_enumeration() {
    let docs = vec![vec![0, 0, 1], vec![1, 2, 2]];
    let alpha = [0.7, 1.3];
    let exact = enumerate_expected_counts(&docs, 3, 2, &alpha, 0.5);
    let sampled = sampled_expected_counts(&docs, 3, 2, &alpha, 0.5, 500, 11);
    let d = max_abs_diff(&exact, &sampled);
    assert!(d <= 0.05, "max deviation {d}\nexact {exact:?}\nsampled {sampled:?}");
}

#[test]
fn enumeration_conserves_token_mass() {
    let docs = vec![vec![0, 1], vec![1, 1, 2]];
    let exact = enumerate_expected_counts(&docs, 3, 2, &[1.0, 1.0], 0.1);
    let col = |v: usize| exact[0][v] + exact[1][v];
    assert!((col(0) - 1.0).abs() < 1e-12);
    assert!((col(1) - 3.0).abs() < 1e-12);
    assert!((col(2) - 1.0).abs() < 1e-12);
}

fn small_state(seed: u64) -> (CountState, Hyperparameters) {
    let docs = vec![vec![0, 1, 1, 3], vec![2, 2, 4], vec![0, 4, 4, 4, 1]];
    let allowed = vec![vec![0, 2], vec![1, 2], vec![0, 1, 2]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = CountState::init(&docs, allowed, 5, 3, Layout::Constrained, &mut rng).unwrap();
    let hp = Hyperparameters::symmetric(
        3,
        1.5,
        0.1,
        Schedule {
            iterations: 20,
            burn_in: 5,
            lag: 3,
        },
    );
    (state, hp)
}

#[test]
fn same_seed_gives_identical_trajectories() {
    let run = |seed| {
        let (mut s, hp) = small_state(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trajectory = Vec::new();
        for _ in 0..10 {
            s.sweep(&hp, &mut rng, None);
            trajectory.push((0..s.num_documents()).map(|m| s.assignments(m)).collect::<Vec<_>>());
        }
        trajectory
    };
    assert_eq!(run(3), run(3));
}

#[test]
fn layouts_agree_under_same_stream() {
    let docs = vec![vec![0, 1, 1, 3], vec![2, 2, 4]];
    let allowed = vec![vec![0, 2], vec![1, 2]];
    let hp = Hyperparameters::symmetric(
        3,
        1.5,
        0.1,
        Schedule {
            iterations: 30,
            burn_in: 10,
            lag: 4,
        },
    );
    let run = |layout| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = CountState::init(&docs, allowed.clone(), 5, 3, layout, &mut rng).unwrap();
        let acc = s.run(&hp, &mut rng);
        (s.assignments(0), s.assignments(1), s.expected_triplets(&acc))
    };
    let (a0, a1, ta) = run(Layout::Constrained);
    let (b0, b1, tb) = run(Layout::Dense);
    assert_eq!((a0, a1), (b0, b1));
    let nonzero: Vec<_> = tb.into_iter().filter(|t| t.2 != 0.0).collect();
    let ta: Vec<_> = ta.into_iter().filter(|t| t.2 != 0.0).collect();
    assert_eq!(ta, nonzero);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_stay_consistent(seed in any::<u64>(), sweeps in 1usize..6) {
        let (mut s, hp) = small_state(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sweeps {
            s.sweep(&hp, &mut rng, None);
            prop_assert!(s.is_consistent());
        }
        for m in 0..s.num_documents() {
            for z in s.assignments(m) {
                prop_assert!(s.allowed(m).contains(&z));
            }
        }
    }

    #[test]
    fn expected_mass_equals_token_count(seed in any::<u64>()) {
        let (mut s, hp) = small_state(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let acc = s.run(&hp, &mut rng);
        let retained = hp.schedule.retained_samples();
        prop_assert_eq!(acc.num_samples, retained);
        let tokens: usize = (0..s.num_documents()).map(|m| s.num_tokens(m)).sum();
        let mass: f64 = s.expected_triplets(&acc).iter().map(|t| t.2).sum();
        prop_assert!((mass - (tokens * retained) as f64).abs() < 1e-9);
        for (m, row) in acc.acc_ml.iter().enumerate() {
            let total: f64 = row.iter().sum();
            prop_assert!((total - (s.num_tokens(m) * retained) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn conditionals_are_distributions(seed in any::<u64>()) {
        let (mut s, hp) = small_state(seed);
        for m in 0..s.num_documents() {
            for i in 0..s.num_tokens(m) {
                let p = s.conditional(&hp, m, i);
                prop_assert!(p.iter().all(|&x| x > 0.0));
                prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
