use actionable::learners::{
    logistic_gradient, logistic_loss, stratified_folds, train, Hyperparameters, LabeledExample, ModelState,
    SparseVector, Technique, TrainedModel,
};
use actionable::Label;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points labeled by a hidden hyperplane; with `gap > 0` points closer than
/// `gap` to it are dropped.
fn hyperplane_data(n: usize, dims: usize, gap: f64, seed: u64) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() + 0.1;
        if m.abs() < gap {
            continue;
        }
        let label = if m > 0.0 { Label::Actionable } else { Label::NonActionable };
        out.push(LabeledExample::new(SparseVector::new(x.into_iter().enumerate().map(|(i, v)| (i as u32, v)).collect()), label));
    }
    out
}

fn small_vector() -> impl Strategy<Value = SparseVector> {
    prop::collection::vec((0u32..6, -3.0f64..3.0), 1..6).prop_map(SparseVector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn perceptron_updates_stabilize(seed in any::<u64>()) {
        let data = hyperplane_data(200, 4, 0.1, seed);
        prop_assume!(data.iter().any(|e| e.y > 0.0) && data.iter().any(|e| e.y < 0.0));
        let params = Hyperparameters::default().with_epochs(200).with_seed(seed);
        let model = train(Technique::Perceptron, &params, &data).unwrap();
        let updates = &model.meta.updates_per_epoch;
        prop_assert_eq!(*updates.last().unwrap(), 0);
        let first_clean = updates.iter().position(|&u| u == 0).unwrap();
        prop_assert!(updates[first_clean..].iter().all(|&u| u == 0));
    }

    #[test]
    fn confidence_variances_stay_positive(seed in any::<u64>(), epochs in 1usize..6) {
        let mut data = hyperplane_data(150, 5, 0.0, seed);
        // Flip a few labels so updates keep happening.
        for e in data.iter_mut().step_by(7) {
            e.y = -e.y;
        }
        let params = Hyperparameters::default().with_epochs(epochs).with_seed(seed);
        for technique in [Technique::ConfidenceWeighted, Technique::Arow, Technique::Scw] {
            let model = train(technique, &params, &data).unwrap();
            let ModelState::Variance { sigma, sigma_bias } = &model.state else {
                panic!("{technique} keeps variances");
            };
            prop_assert!(*sigma_bias > 0.0);
            prop_assert!(sigma.iter().all(|s| *s > 0.0 && s.is_finite()), "{}", technique);
            prop_assert!(model.weights.iter().all(|w| w.is_finite()));
        }
    }

    #[test]
    fn positive_scaling_keeps_predictions(seed in any::<u64>(), scale in 1e-3f64..1e3, technique_index in 0usize..7) {
        let data = hyperplane_data(120, 4, 0.0, seed);
        let technique = Technique::ALL[technique_index];
        let model = train(technique, &Hyperparameters::default().with_seed(seed), &data).unwrap();
        let mut scaled = model.clone();
        scaled.weights.iter_mut().for_each(|w| *w *= scale);
        scaled.bias *= scale;
        for e in &data {
            prop_assert_eq!(model.predict(&e.features).label, scaled.predict(&e.features).label);
        }
    }

    #[test]
    fn logistic_gradient_matches_finite_differences(
        w in prop::collection::vec(-2.0f64..2.0, 6),
        b in -2.0f64..2.0,
        x in small_vector(),
        positive in any::<bool>(),
        l2 in 0.0f64..0.5,
    ) {
        let y = if positive { 1.0 } else { -1.0 };
        let (g, gb) = logistic_gradient(&w, b, &x, y, l2);
        let h = 1e-5;
        let close = |analytic: f64, numeric: f64| (analytic - numeric).abs() <= 1e-6 * analytic.abs().max(numeric.abs()).max(1.0);
        for i in 0..w.len() {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[i] += h;
            down[i] -= h;
            let numeric = (logistic_loss(&up, b, &x, y, l2) - logistic_loss(&down, b, &x, y, l2)) / (2.0 * h);
            prop_assert!(close(g[i], numeric), "coordinate {}: {} vs {}", i, g[i], numeric);
        }
        let numeric = (logistic_loss(&w, b + h, &x, y, l2) - logistic_loss(&w, b - h, &x, y, l2)) / (2.0 * h);
        prop_assert!(close(gb, numeric));
    }

    #[test]
    fn model_text_round_trips(seed in any::<u64>(), technique_index in 0usize..7) {
        let data = hyperplane_data(60, 3, 0.0, seed);
        let model = train(Technique::ALL[technique_index], &Hyperparameters::default().with_seed(seed).with_epochs(3), &data).unwrap();
        let mut text = Vec::new();
        model.write(&mut text, |i| format!("f{i}")).unwrap();
        let back = TrainedModel::read(&mut text.as_slice(), |s| s.strip_prefix('f')?.parse().ok()).unwrap();
        prop_assert_eq!(back, model);
    }

    #[test]
    fn folds_are_stratified(actionable in 5usize..60, non in 5usize..60, k in 2usize..6, seed in any::<u64>()) {
        let labels: Vec<Label> = std::iter::repeat(Label::Actionable).take(actionable)
            .chain(std::iter::repeat(Label::NonActionable).take(non))
            .collect();
        let folds = stratified_folds(&labels, k, seed).unwrap();
        for fold in 0..k {
            for label in Label::BOTH {
                let class = labels.iter().filter(|l| **l == label).count();
                let here = labels.iter().zip(&folds).filter(|(l, f)| **l == label && **f == fold).count();
                prop_assert!(here == class / k || here == class / k + 1);
            }
        }
    }
}

#[test]
fn folds_reject_too_small_classes() {
    let labels = [Label::Actionable, Label::Actionable, Label::NonActionable];
    assert!(stratified_folds(&labels, 2, 0).is_err());
}
