mod common;

use actionable::corpus::{DomainKey, Source};
use actionable::metrics::{
    binary_entropy, coverage, mutual_information, prf_accuracy, weighted_aggregate, ConfusionCounts, DomainReport,
};
use common::brute_force_mi;
use proptest::prelude::*;

fn paired_bools() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
    prop::collection::vec(any::<(bool, bool)>(), 0..400).prop_map(|v| v.into_iter().unzip())
}

fn counts() -> impl Strategy<Value = ConfusionCounts> {
    (0u64..50, 0u64..50, 0u64..50, 0u64..50)
        .prop_filter("non-empty", |(a, b, c, d)| a + b + c + d > 0)
        .prop_map(|(tp, fp, tn, fn_)| ConfusionCounts { tp, fp, tn, fn_ })
}

proptest! {
    #[test]
    fn mi_is_symmetric((xs, ys) in paired_bools()) {
        let a = mutual_information(&xs, &ys).unwrap();
        let b = mutual_information(&ys, &xs).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn mi_matches_oracle_and_bounds((xs, ys) in paired_bools()) {
        let mi = mutual_information(&xs, &ys).unwrap();
        prop_assert!((mi - brute_force_mi(&xs, &ys)).abs() <= 1e-12);
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= binary_entropy(&xs).min(binary_entropy(&ys)) + 1e-12);
        prop_assert!(mi <= 1.0 + 1e-12);
    }

    #[test]
    fn scores_lie_in_unit_interval(c in counts()) {
        let s = prf_accuracy(&c).unwrap();
        for v in [s.precision, s.recall, s.f, s.accuracy] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn weighted_f_lies_between_domain_extremes(rows in prop::collection::vec((counts(), 1usize..10_000), 1..8)) {
        let reports: Vec<DomainReport> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (c, p))| DomainReport::new(DomainKey::full(&format!("c{i}"), "en", Source::Tw), p, 10, c).unwrap())
            .collect();
        let (fw, aw) = weighted_aggregate(&reports).unwrap();
        let fs = reports.iter().map(|r| r.scores.f);
        let lo = fs.clone().fold(f64::INFINITY, f64::min);
        let hi = fs.fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo - 1e-12 <= fw && fw <= hi + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&aw));
    }
}

#[test]
fn coverage_edges() {
    assert_eq!(coverage(&[false; 5]), 0.0);
    assert_eq!(coverage(&[true; 5]), 1.0);
    assert_eq!(coverage(&[]), 0.0);
}
