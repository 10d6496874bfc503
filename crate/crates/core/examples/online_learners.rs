// All seven online learners on a small separable problem, with k-fold
// cross-validation and the text model format.

use actionable::learners::{cross_validate, train, Hyperparameters, LabeledExample, SparseVector, Technique, TrainedModel};
use actionable::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(n: usize, seed: u64) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let label = if x[0] - 0.5 * x[2] > 0.0 { Label::Actionable } else { Label::NonActionable };
            let features = SparseVector::new(x.into_iter().enumerate().map(|(i, v)| (i as u32, v)).collect());
            LabeledExample::new(features, label)
        })
        .collect()
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let data = dataset(400, 5);
    let params = Hyperparameters::default().with_seed(5);
    for technique in Technique::ALL {
        let model = train(technique, &params, &data)?;
        let f = cross_validate(technique, &params, &data, 5, 5)?;
        println!(
            "{:<20} cv F {f:.3}  updates/epoch {:?}",
            technique.name(),
            model.meta.updates_per_epoch
        );
        assert!(f > 0.8, "{technique}");
    }

    let model = train(Technique::Arow, &params, &data)?;
    let mut text = Vec::new();
    model.write(&mut text, |i| format!("x{i}"))?;
    let back = TrainedModel::read(&mut text.as_slice(), |s| s.strip_prefix('x')?.parse().ok())?;
    assert_eq!(back, model);
    println!("{} bytes of model text round-trip", text.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
