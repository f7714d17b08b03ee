use num::rational::Ratio;
use num::ToPrimitive;
use proptest::prelude::*;
use subset_llda::eval::{
    self, macro_f, micro_f, precision_at_k, ps_precision_at_k, rcut_assign, two_proportion_z, EvalOptions, Measure,
    PropensityModel, Verdict,
};
use subset_llda::models::rank;

fn sets(x: &[&[u32]]) -> Vec<Vec<u32>> {
    x.iter().map(|s| s.to_vec()).collect()
}

fn f1(tp: i64, fp: i64, fn_: i64) -> Ratio<i64> {
    if 2 * tp + fp + fn_ == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(2 * tp, 2 * tp + fp + fn_)
    }
}

#[test]
fn pooled_micro_f_hand_example() {
    let gold = sets(&[&[1, 2], &[3]]);
    let assigned = sets(&[&[1], &[3, 4]]);
    assert_eq!(micro_f(&assigned, &gold), f1(2, 1, 1).to_f64().unwrap());
    assert_eq!(micro_f(&sets(&[&[2]]), &sets(&[&[1]])), 0.0);
}

#[test]
fn macro_f_hand_example() {
    let gold = sets(&[&[0, 1], &[0, 1], &[]]);
    let assigned = sets(&[&[0, 1], &[1], &[1]]);
    let want = (f1(1, 0, 1) + f1(2, 1, 0) + f1(0, 0, 0)) / Ratio::from_integer(3);
    assert_eq!(want, Ratio::new(22, 45));
    assert!((macro_f(&assigned, &gold, 3) - want.to_f64().unwrap()).abs() <= f64::EPSILON);
    let half = macro_f(&sets(&[&[0], &[]]), &sets(&[&[0], &[1]]), 2);
    assert_eq!(half, 0.5);
}

#[test]
fn precision_hand_examples() {
    let r = sets(&[&[3, 1, 2]]);
    let g = sets(&[&[1]]);
    assert_eq!(precision_at_k(&r, &g, 1), 0.0);
    assert_eq!(precision_at_k(&r, &g, 3), Ratio::new(1, 3).to_f64().unwrap());
    let r = sets(&[&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]]);
    let g = sets(&[&[0, 1], &[4]]);
    assert_eq!(precision_at_k(&r, &g, 5), 0.3);
    let mut half = PropensityModel::unit(3);
    half.propensities[2] = 0.5;
    assert_eq!(ps_precision_at_k(&sets(&[&[2, 0]]), &sets(&[&[2]]), &half, 1), 2.0);
}

#[test]
fn rarer_correct_label_scores_higher() {
    let prop = PropensityModel::new(&[5, 500], 1000, 0.55, 1.5);
    assert!(prop.propensities[0] < prop.propensities[1]);
    let rare = ps_precision_at_k(&sets(&[&[0]]), &sets(&[&[0]]), &prop, 1);
    let common = ps_precision_at_k(&sets(&[&[1]]), &sets(&[&[1]]), &prop, 1);
    assert!(rare > common);
}

#[test]
fn z_test_extremes() {
    let t = two_proportion_z(900, 1000, 100, 1000, 0.05);
    assert_eq!(t.verdict, Verdict::Significant);
    let t = two_proportion_z(40, 100, 40, 100, 0.05);
    assert_eq!((t.z, t.verdict), (0.0, Verdict::NotSignificant));
    assert_eq!(two_proportion_z(0, 10, 0, 10, 0.05).verdict, Verdict::Undefined);
    assert_eq!(two_proportion_z(1, 0, 0, 10, 0.05).verdict, Verdict::Undefined);
}

#[test]
fn identical_reports_are_not_significant() {
    let r = sets(&[&[0, 1], &[2, 0], &[1, 2]]);
    let g = sets(&[&[0], &[0], &[2]]);
    let rep = eval::evaluate(&r, &g, 3, 1.0, &PropensityModel::unit(3), &EvalOptions::default()).unwrap();
    for m in [Measure::Rcut, Measure::PrecisionAt(1), Measure::PrecisionAt(5)] {
        let t = eval::z_test(&rep, &rep, m, 0.05);
        assert_eq!(t.z, 0.0);
        assert_eq!(t.verdict, Verdict::NotSignificant);
    }
}

#[test]
fn perfect_rankings_score_one() {
    let g = sets(&[&[0, 2], &[0, 1], &[2, 3]]);
    let r = sets(&[&[2, 0, 1, 3], &[1, 0, 2, 3], &[3, 2, 0, 1]]);
    let opts = EvalOptions {
        ks: vec![1],
        ..EvalOptions::default()
    };
    let rep = eval::evaluate(&r, &g, 4, 2.0, &PropensityModel::unit(4), &opts).unwrap();
    assert_eq!(rep.micro_f, 1.0);
    assert_eq!(rep.macro_f, 1.0);
    assert_eq!(rep.precision, vec![(1, 1.0)]);
    assert_eq!(rep.ps_precision, vec![(1, 1.0)]);
}

#[test]
fn singleton_ranking_gives_short_assignment() {
    assert_eq!(rcut_assign(&sets(&[&[7]]), 5.0), sets(&[&[7]]));
}

fn case() -> impl Strategy<Value = (Vec<Vec<(u32, f64)>>, Vec<Vec<u32>>, Vec<u32>)> {
    let num_labels = 8u32;
    let doc = (
        prop::collection::vec((0..num_labels, 0.0f64..1.0), 1..8),
        prop::collection::btree_set(0..num_labels, 0..4),
    );
    (prop::collection::vec(doc, 1..20), prop::collection::vec(1u32..200, 8)).prop_map(|(docs, counts)| {
        let (scores, gold) = docs
            .into_iter()
            .map(|(mut s, g)| {
                s.sort_by_key(|x| x.0);
                s.dedup_by_key(|x| x.0);
                (s, g.into_iter().collect())
            })
            .unzip();
        (scores, gold, counts)
    })
}

fn rankings(scores: &[Vec<(u32, f64)>]) -> Vec<Vec<u32>> {
    scores
        .iter()
        .map(|s| rank(s.clone()).into_iter().map(|x| x.0).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unit_propensities_reduce_to_precision((scores, gold, _) in case(), k in 1usize..8) {
        let r = rankings(&scores);
        let a = ps_precision_at_k(&r, &gold, &PropensityModel::unit(8), k);
        let b = precision_at_k(&r, &gold, k);
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn metric_ranges((scores, gold, counts) in case(), card in 0.5f64..4.0) {
        let r = rankings(&scores);
        let prop = PropensityModel::new(&counts, 1000, 0.55, 1.5);
        let min_p = prop.propensities.iter().cloned().fold(1.0, f64::min);
        let opts = EvalOptions { ks: vec![1, 3, 5], ..EvalOptions::default() };
        let rep = eval::evaluate(&r, &gold, 8, card, &prop, &opts).unwrap();
        for x in [rep.micro_f, rep.macro_f] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        for (&(_, p), &(_, ps)) in rep.precision.iter().zip(&rep.ps_precision) {
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!(ps >= p - 1e-12);
            prop_assert!(ps <= 1.0 / min_p + 1e-12);
        }
        let weighted = eval::evaluate(&r, &gold, 8, card, &prop, &EvalOptions {
            micro_variant: eval::MicroVariant::Weighted,
            ..opts
        }).unwrap();
        prop_assert!((0.0..=1.0).contains(&weighted.micro_f));
    }

    #[test]
    fn metrics_depend_only_on_rank((scores, gold, counts) in case(), scale in 0.01f64..100.0) {
        let transformed: Vec<Vec<(u32, f64)>> = scores
            .iter()
            .map(|s| s.iter().map(|&(l, x)| (l, (x * scale).exp())).collect())
            .collect();
        let prop = PropensityModel::new(&counts, 500, 0.55, 1.5);
        let opts = EvalOptions::default();
        let a = eval::evaluate(&rankings(&scores), &gold, 8, 2.0, &prop, &opts).unwrap();
        let b = eval::evaluate(&rankings(&transformed), &gold, 8, 2.0, &prop, &opts).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn propensity_is_monotone_and_bounded(n in 3usize..100_000, a in 0u32..10_000, b in 0u32..10_000) {
        let prop = PropensityModel::new(&[a.min(b), a.max(b)], n, 0.55, 1.5);
        prop_assert!(prop.propensities[0] <= prop.propensities[1]);
        for &p in &prop.propensities {
            prop_assert!(p > 0.0 && p <= 1.0);
        }
    }

    #[test]
    fn single_label_top1_micro_equals_p1(labels in prop::collection::vec(0u32..6, 1..30)) {
        let gold: Vec<Vec<u32>> = labels.iter().map(|&l| vec![l]).collect();
        let r: Vec<Vec<u32>> = labels.iter().map(|&l| vec![l, (l + 1) % 6]).collect();
        let rep = eval::evaluate(&r, &gold, 6, 1.0, &PropensityModel::unit(6), &EvalOptions::default()).unwrap();
        prop_assert_eq!(rep.micro_f, rep.precision[0].1);
    }
}

#[test]
fn propensity_tends_to_one() {
    let p = PropensityModel::new(&[1_000_000_000], 1000, 0.55, 1.5).propensities[0];
    assert!(p > 0.99);
}
