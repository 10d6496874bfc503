// Ingest newline-delimited records, balance each domain and split it.

use actionable::corpus::{balance, ingest, split};

const RECORDS: &str = r#"{"id":"1","text":"my order never arrived","company":"Acme","language":"en","source":"tw","label":"actionable"}
{"id":"2","text":"love the new store","company":"acme","language":"en","source":"tw","label":"non_actionable"}
{"id":"3","text":"refund please","company":"acme","language":"en","source":"tw","label":"actionable"}
{"id":"4","text":"nice ad","company":"acme","language":"en","source":"tw","label":"non_actionable"}
{"id":"5","text":"app crashes on login","company":"acme","language":"en","source":"tw","label":"actionable"}
{"id":"6","text":"great service","company":"acme","language":"en","source":"fb","label":"non_actionable"}
{"id":"7","text":"broken json
{"id":"1","text":"duplicate id","company":"acme","language":"en","source":"tw","label":"actionable"}
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ingested = ingest(RECORDS.as_bytes())?;
    print!("{}", ingested.report);
    assert_eq!(ingested.report.accepted, 6);
    assert_eq!(ingested.report.rejected(), 2);

    let balanced = balance(&ingested.corpus, 7);
    for key in &balanced.dropped {
        println!("dropped one-sided domain {key}");
    }
    for key in balanced.corpus.domains() {
        println!("balanced {key}: {:?}", balanced.corpus.label_counts(key));
    }

    let parts = split(&balanced.corpus, 0.5, 7)?;
    println!("train {} / eval {}", parts.train.len(), parts.eval.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
