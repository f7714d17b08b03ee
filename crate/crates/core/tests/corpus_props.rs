use std::io::BufReader;

use proptest::prelude::*;
use subset_llda::corpus::tokenize;
use subset_llda::{Corpus, LoadOptions, Role, SparseDocument};

fn parse(text: &str, role: Role) -> subset_llda::Result<Corpus> {
    Corpus::parse(BufReader::new(text.as_bytes()), LoadOptions::new(role))
}

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![(1u32..20).prop_map(f64::from), 0.001f64..50.0,]
}

fn corpus(role: Role) -> impl Strategy<Value = Corpus> {
    let min_labels = if role == Role::Train { 1 } else { 0 };
    let doc = (
        prop::collection::btree_map(0u32..40, value(), 0..10),
        prop::collection::btree_set(0u32..15, min_labels..5),
    );
    prop::collection::vec(doc, 1..25).prop_map(|docs| {
        let documents = docs
            .into_iter()
            .enumerate()
            .map(|(i, (f, l))| SparseDocument::new(i, f.into_iter().collect(), l.into_iter().collect(), 1000))
            .collect();
        Corpus::from_documents(documents, 40, 15)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn train_corpus_round_trips(c in corpus(Role::Train)) {
        let text = c.to_repo_format();
        let back = parse(&text, Role::Train).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_repo_format(), text);
    }

    #[test]
    fn test_corpus_round_trips(c in corpus(Role::Test)) {
        let back = parse(&c.to_repo_format(), Role::Test).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn frequencies_agree_with_cardinality(c in corpus(Role::Train)) {
        let f = c.label_frequencies();
        let total: usize = c.documents.iter().map(|d| d.labels.len()).sum();
        let weighted: f64 = f.iter().map(|x| x * c.len() as f64).sum();
        prop_assert!((weighted - total as f64).abs() < 1e-9);
        prop_assert!(f.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!((c.cardinality() - total as f64 / c.len() as f64).abs() < 1e-12);
        for (l, &fl) in f.iter().enumerate() {
            let n = c.documents.iter().filter(|d| d.labels.contains(&(l as u32))).count();
            prop_assert!((fl - n as f64 / c.len() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn token_streams_follow_tokenize(c in corpus(Role::Test)) {
        for d in &c.documents {
            let tokens: Vec<u32> = d.tokens().collect();
            let expected: u32 = d.features.iter().map(|&(_, v)| tokenize(v)).sum();
            prop_assert_eq!(tokens.len(), expected as usize);
            prop_assert_eq!(d.token_count(), expected as usize);
            prop_assert!(tokens.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn tokenize_is_round_half_up_with_floor(x in 0.0f64..1e4) {
        let t = tokenize(x);
        if x == 0.0 {
            prop_assert_eq!(t, 0);
        } else if x < 0.5 {
            prop_assert_eq!(t, 1);
        } else {
            prop_assert_eq!(t as f64, (x + 0.5).floor());
        }
    }
}

#[test]
fn tokenize_examples() {
    assert_eq!(tokenize(3.0), 3);
    assert_eq!(tokenize(0.2), 1);
    assert_eq!(tokenize(2.5), 3);
    assert_eq!(tokenize(0.0), 0);
}

#[test]
fn stats_of_tiny_corpus() {
    let c = parse("2 3 2\n0 0:1\n0,1 1:1 2:1\n", Role::Train).unwrap();
    let s = c.stats();
    assert_eq!(s.cardinality, 1.5);
    assert_eq!(c.label_frequencies(), vec![1.0, 0.5]);
    assert_eq!(s.avg_label_frequency, 1.5);
}

#[test]
fn test_role_keeps_empty_documents() {
    let text = "2 2 2\n 0:1\n1 1:1";
    assert_eq!(parse(text, Role::Test).unwrap().len(), 2);
    let train = parse(text, Role::Train).unwrap();
    assert_eq!((train.len(), train.dropped_empty), (1, 1));
}
