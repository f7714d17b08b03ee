mod common;

use common::Synth;
use subset_llda::models::{
    self, predict_dep, predict_llda, predict_prior, predict_subset, predict_with_candidates, train_dep_aux, train_llda,
    DepAuxConfig, TrainConfig,
};
use subset_llda::sampler::Schedule;
use subset_llda::{CandidateSet, Corpus, Method, PredictionConfig, SparseDocument, TfIdfIndex};

const QUICK: Schedule = Schedule {
    iterations: 30,
    burn_in: 10,
    lag: 5,
};

fn quick_train(train: &Corpus, seed: u64) -> subset_llda::TrainedModel {
    let cfg = TrainConfig {
        schedule: QUICK,
        seed,
        ..TrainConfig::default()
    };
    train_llda(train, &cfg).unwrap()
}

fn quick_predict(method: Method, seed: u64) -> PredictionConfig {
    let mut cfg = PredictionConfig::new(method);
    cfg.schedule = QUICK;
    cfg.seed = seed;
    cfg
}

fn full_candidates(test: &Corpus, num_labels: usize) -> Vec<CandidateSet> {
    test.documents
        .iter()
        .map(|d| CandidateSet {
            test_doc: d.doc_id,
            neighbors: Vec::new(),
            labels: (0..num_labels as u32).collect(),
            fallback: false,
        })
        .collect()
}

#[test]
fn disjoint_vocabularies_separate_labels() {
    let doc = |id, f: &[u32], l| SparseDocument::new(id, f.iter().map(|&v| (v, 3.0)).collect(), vec![l], 1000);
    let train = Corpus::from_documents(
        vec![
            doc(0, &[0, 1, 2], 0),
            doc(1, &[1, 2], 0),
            doc(2, &[3, 4, 5], 1),
            doc(3, &[4, 5], 1),
        ],
        6,
        2,
    );
    let model = quick_train(&train, 1);
    let phi = model.phi().unwrap();
    assert!(phi.get(0, 1) > 0.2 && phi.get(1, 1) < 0.01);
    let test = Corpus::from_documents(vec![doc(0, &[0, 2], 0)], 6, 2);
    let scores = predict_llda(&model, &test, &quick_predict(Method::Llda, 2)).unwrap();
    let ranking = &scores.documents[0].ranking;
    assert_eq!(ranking[0].0, 0);
    assert!(ranking[0].1 > ranking[1].1);
}

#[test]
fn learned_mass_only_on_observed_pairs() {
    let (train, _) = Synth::default().generate();
    let model = quick_train(&train, 3);
    for &(l, v, x) in &model.counts {
        assert!(x > 0.0);
        assert!(train
            .documents
            .iter()
            .any(|d| d.labels.contains(&l) && d.features.iter().any(|f| f.0 == v)));
    }
    let mass: f64 = model.counts.iter().map(|t| t.2).sum();
    let tokens: usize = train.documents.iter().map(|d| d.token_count()).sum();
    assert!((mass - (tokens * model.num_samples) as f64).abs() < 1e-6 * mass);
}

#[test]
fn full_candidate_subset_equals_llda() {
    let (train, test) = Synth::default().generate();
    let model = quick_train(&train, 4);
    let llda = predict_llda(&model, &test, &quick_predict(Method::Llda, 9)).unwrap();
    let subset = predict_with_candidates(
        &model,
        &test,
        &quick_predict(Method::Subset, 9),
        full_candidates(&test, train.num_labels),
    )
    .unwrap();
    assert_eq!(llda.to_score_file(), subset.to_score_file());
}

#[test]
fn prior_without_frequency_term_equals_llda() {
    let (train, test) = Synth::default().generate();
    let model = quick_train(&train, 5);
    let llda = predict_llda(&model, &test, &quick_predict(Method::Llda, 2)).unwrap();
    let mut cfg = quick_predict(Method::Prior, 2);
    cfg.eta = Some(0.0);
    let prior = predict_prior(&model, &test, &cfg).unwrap();
    assert_eq!(llda.to_score_file(), prior.to_score_file());
}

#[test]
fn subset_rankings_stay_inside_candidates() {
    let (train, test) = Synth::default().generate();
    let model = quick_train(&train, 6);
    let index = TfIdfIndex::build(&train).unwrap();
    let scores = predict_subset(&model, &test, &index, &train, &quick_predict(Method::Subset, 1)).unwrap();
    for d in &scores.documents {
        let cands = d.candidates.as_ref().unwrap();
        assert_eq!(d.ranking.len(), cands.labels.len());
        assert!(d.ranking.iter().all(|(l, _)| cands.labels.contains(l)));
        let total: f64 = d.ranking.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn paired_labels_share_an_auxiliary_topic() {
    let docs = (0..40)
        .map(|i| {
            let labels = if i % 2 == 0 { vec![0, 1] } else { vec![2, 3] };
            SparseDocument::new(i, vec![(0, 1.0)], labels, 1000)
        })
        .collect();
    let train = Corpus::from_documents(docs, 1, 4);
    let aux = train_dep_aux(
        &train,
        &DepAuxConfig {
            topics: 2,
            schedule: Schedule::default(),
            seed: 3,
            ..DepAuxConfig::default()
        },
    )
    .unwrap();
    for pair in [[0usize, 1], [2, 3]] {
        let found = (0..2).any(|t| pair.iter().all(|&l| aux.phi(t, l) >= 0.4));
        assert!(
            found,
            "pair {pair:?} not captured: {:?}",
            (0..2).map(|t| aux.phi_row(t)).collect::<Vec<_>>()
        );
    }
}

#[test]
fn dep_prediction_is_deterministic_and_normalized() {
    let (train, test) = Synth::default().generate();
    let model = quick_train(&train, 8);
    let aux = train_dep_aux(
        &train,
        &DepAuxConfig {
            topics: 5,
            schedule: QUICK,
            ..DepAuxConfig::default()
        },
    )
    .unwrap();
    let cfg = quick_predict(Method::Dep, 4);
    let a = predict_dep(&model, &aux, &test, &cfg).unwrap();
    let b = predict_dep(&model, &aux, &test, &cfg).unwrap();
    assert_eq!(a.to_score_file(), b.to_score_file());
    for d in &a.documents {
        assert_eq!(d.ranking.len(), train.num_labels);
        let total: f64 = d.ranking.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn predictions_do_not_depend_on_thread_count() {
    let (train, test) = Synth::default().generate();
    let model = quick_train(&train, 10);
    let aux = train_dep_aux(
        &train,
        &DepAuxConfig {
            topics: 4,
            schedule: QUICK,
            ..DepAuxConfig::default()
        },
    )
    .unwrap();
    let index = TfIdfIndex::build(&train).unwrap();
    for method in Method::ALL {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                models::predict(
                    &model,
                    &test,
                    &quick_predict(method, 6),
                    Some(&aux),
                    Some((&index, &train)),
                )
                .unwrap()
                .to_score_file()
            })
        };
        assert_eq!(run(1), run(4), "{method}");
    }
}

#[test]
fn chains_change_training_but_keep_mass() {
    let (train, _) = Synth::default().generate();
    let one = quick_train(&train, 2);
    let two = train_llda(
        &train,
        &TrainConfig {
            schedule: QUICK,
            chains: 2,
            seed: 2,
            ..TrainConfig::default()
        },
    )
    .unwrap();
    assert_eq!(two.num_samples, 2 * one.num_samples);
    let mass = |m: &subset_llda::TrainedModel| m.counts.iter().map(|t| t.2).sum::<f64>() / m.num_samples as f64;
    assert!((mass(&one) - mass(&two)).abs() < 1e-6 * mass(&one));
}

#[test]
fn training_is_reproducible() {
    let (train, _) = Synth::default().generate();
    assert_eq!(quick_train(&train, 12), quick_train(&train, 12));
    assert_ne!(quick_train(&train, 12), quick_train(&train, 13));
}
