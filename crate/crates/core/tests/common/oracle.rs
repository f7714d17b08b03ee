//! Reference computations that share no code with the sampler.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subset_llda::sampler::{CountState, Hyperparameters, Layout, Schedule};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn int(n: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact normalized training conditional of token `i` in document `m`:
/// the product of the φ and θ predictive terms with the token removed,
/// including the θ normalizer, over the document's allowed labels.
pub fn exact_conditional(state: &CountState, hp: &Hyperparameters, m: usize, i: usize) -> Vec<BigRational> {
    let v = state.token_feature(m, i);
    let z = state.assignment(m, i);
    let beta = rat(hp.beta);
    let v_beta = int(state.num_features() as u32) * &beta;
    let allowed = state.allowed(m);
    let alpha_sum: BigRational = allowed.iter().map(|&l| rat(hp.alpha[l as usize])).sum();
    let n_doc = int(state.num_tokens(m) as u32 - 1);
    let mut scores = Vec::with_capacity(allowed.len());
    for &l in allowed {
        let own = u32::from(l == z);
        let n_lv = int(state.n_lv(l, v) - own);
        let n_l = int(state.n_l(l) - own);
        let n_ml = int(state.n_ml(m, l) - own);
        let phi = (n_lv + &beta) / (n_l + &v_beta);
        let theta = (n_ml + rat(hp.alpha[l as usize])) / (&n_doc + &alpha_sum);
        scores.push(phi * theta);
    }
    let total: BigRational = scores.iter().cloned().sum();
    scores.into_iter().map(|s| s / &total).collect()
}

/// Run `runs` random corpora for `sweeps` sweeps each. After every sweep
/// (one snapshot) compare every token's conditional with the exact value;
/// returns `(snapshots, max |difference|)`.
pub fn fuzz_conditionals(runs: usize, sweeps: usize, seed: u64) -> (usize, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut snapshots = 0;
    for _ in 0..runs {
        let num_features = rng.gen_range(2..12usize);
        let num_labels = rng.gen_range(2..8usize);
        let num_docs = rng.gen_range(1..6usize);
        let mut docs = Vec::new();
        let mut allowed = Vec::new();
        for _ in 0..num_docs {
            let n = rng.gen_range(1..15usize);
            let mut tokens: Vec<u32> = (0..n).map(|_| rng.gen_range(0..num_features as u32)).collect();
            tokens.sort_unstable();
            docs.push(tokens);
            let mut a: Vec<u32> = (0..num_labels as u32).filter(|_| rng.gen_bool(0.5)).collect();
            if a.is_empty() {
                a.push(rng.gen_range(0..num_labels as u32));
            }
            allowed.push(a);
        }
        let alpha: Vec<f64> = (0..num_labels).map(|_| rng.gen_range(0.01..3.0)).collect();
        let hp = Hyperparameters {
            alpha,
            beta: rng.gen_range(0.001..1.0),
            schedule: Schedule::default(),
            chains: 1,
        };
        let layout = if rng.gen_bool(0.5) {
            Layout::Constrained
        } else {
            Layout::Dense
        };
        let mut state = CountState::init(&docs, allowed, num_features, num_labels, layout, &mut rng).unwrap();
        for _ in 0..sweeps {
            state.sweep(&hp, &mut rng, None);
            snapshots += 1;
            for m in 0..state.num_documents() {
                for i in 0..state.num_tokens(m) {
                    let exact = exact_conditional(&state, &hp, m, i);
                    let got = state.conditional(&hp, m, i);
                    assert_eq!(exact.len(), got.len());
                    for (e, g) in exact.iter().zip(&got) {
                        worst = worst.max((e.to_f64().unwrap() - g).abs());
                    }
                }
            }
        }
    }
    (snapshots, worst)
}

/// Posterior expectation of `n_lv` under the collapsed joint, by summing
/// over every assignment of every token. All documents may use every label.
pub fn enumerate_expected_counts(
    docs: &[Vec<u32>],
    num_features: usize,
    num_labels: usize,
    alpha: &[f64],
    beta: f64,
) -> Vec<Vec<f64>> {
    let tokens: Vec<(usize, u32)> = docs
        .iter()
        .enumerate()
        .flat_map(|(m, d)| d.iter().map(move |&v| (m, v)))
        .collect();
    let n = tokens.len();
    let configs = num_labels.pow(n as u32);
    let rising = |x: f64, k: u32| (0..k).map(|j| x + j as f64).product::<f64>();
    let mut expected = vec![vec![0.0; num_features]; num_labels];
    let mut total = 0.0;
    for c in 0..configs {
        let mut z = Vec::with_capacity(n);
        let mut rest = c;
        for _ in 0..n {
            z.push(rest % num_labels);
            rest /= num_labels;
        }
        let mut n_lv = vec![vec![0u32; num_features]; num_labels];
        let mut n_ml = vec![vec![0u32; num_labels]; docs.len()];
        for (&(m, v), &l) in tokens.iter().zip(&z) {
            n_lv[l][v as usize] += 1;
            n_ml[m][l] += 1;
        }
        let mut w = 1.0;
        for row in &n_lv {
            let n_l: u32 = row.iter().sum();
            for &x in row {
                w *= rising(beta, x);
            }
            w /= rising(num_features as f64 * beta, n_l);
        }
        for row in &n_ml {
            for (l, &x) in row.iter().enumerate() {
                w *= rising(alpha[l], x);
            }
        }
        total += w;
        for (l, row) in n_lv.iter().enumerate() {
            for (v, &x) in row.iter().enumerate() {
                expected[l][v] += w * x as f64;
            }
        }
    }
    for row in expected.iter_mut() {
        for x in row.iter_mut() {
            *x /= total;
        }
    }
    expected
}

/// Expected-count estimate of `n_lv` from the sampler with `samples`
/// retained iterations.
pub fn sampled_expected_counts(
    docs: &[Vec<u32>],
    num_features: usize,
    num_labels: usize,
    alpha: &[f64],
    beta: f64,
    samples: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let schedule = Schedule {
        iterations: 100 + 2 * samples,
        burn_in: 100,
        lag: 2,
    };
    assert_eq!(schedule.retained_samples(), samples);
    let hp = Hyperparameters {
        alpha: alpha.to_vec(),
        beta,
        schedule,
        chains: 1,
    };
    let all: Vec<u32> = (0..num_labels as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = CountState::init(
        docs,
        vec![all; docs.len()],
        num_features,
        num_labels,
        Layout::Constrained,
        &mut rng,
    )
    .unwrap();
    let acc = state.run(&hp, &mut rng);
    let mut out = vec![vec![0.0; num_features]; num_labels];
    for (l, v, x) in state.expected_triplets(&acc) {
        out[l as usize][v as usize] = x / acc.num_samples as f64;
    }
    out
}

/// Largest absolute difference between two matrices.
pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}
