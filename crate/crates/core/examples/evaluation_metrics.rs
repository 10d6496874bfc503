// Confusion metrics, population weighting and mutual information.

use actionable::corpus::{DomainKey, Source};
use actionable::metrics::{
    coverage, mutual_information, prf_accuracy, ConfusionCounts, DomainReport, EvaluationReport,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let counts = ConfusionCounts { tp: 8, fp: 2, tn: 8, fn_: 2 };
    let s = prf_accuracy(&counts)?;
    println!("P {:.2} R {:.2} F {:.2} A {:.2}", s.precision, s.recall, s.f, s.accuracy);

    let reports = vec![
        DomainReport::new(DomainKey::full("acme", "en", Source::Tw), 100, 40, counts)?,
        DomainReport::new(
            DomainKey::full("acme", "en", Source::Fb),
            300,
            12,
            ConfusionCounts { tp: 3, fp: 1, tn: 4, fn_: 2 },
        )?,
    ];
    let report = EvaluationReport::new("two domains", reports)?;
    print!("{}", report.render_table());

    let labels: Vec<bool> = (0..1000).map(|i| i % 2 == 0).collect();
    let firings: Vec<bool> = (0..1000).map(|i| i % 2 == 0 || i % 10 == 1).collect();
    println!(
        "MI {:.4} bits, coverage {:.2}",
        mutual_information(&firings, &labels)?,
        coverage(&firings)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
