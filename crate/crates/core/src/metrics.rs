//! Confusion-based metrics, population-weighted aggregates and feature
//! diagnostics (mutual information and coverage over binarized firings).

use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::DomainKey;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("confusion counts are all zero")]
    ZeroTotal,
    #[error("no per-domain reports to aggregate")]
    EmptyReports,
    #[error("domain {0} has zero population")]
    ZeroPopulation(String),
    #[error("length mismatch: {0} firings vs {1} labels")]
    LengthMismatch(usize, usize),
}

/// Positive class is actionable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, actual: bool, predicted: bool) {
        match (actual, predicted) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fn_ += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut c = ConfusionCounts::default();
        for (a, p) in pairs {
            c.record(a, p);
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn add(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall, F1 and accuracy. Zero denominators give 0.
pub fn prf_accuracy(c: &ConfusionCounts) -> Result<Scores, MetricsError> {
    if c.total() == 0 {
        return Err(MetricsError::ZeroTotal);
    }
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Scores {
        precision,
        recall,
        f,
        accuracy: ratio(c.tp + c.tn, c.total()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainReport {
    pub domain: DomainKey,
    /// Total messages in the domain, labeled and unlabeled.
    pub population: usize,
    pub training_size: usize,
    pub counts: ConfusionCounts,
    pub scores: Scores,
}

impl DomainReport {
    pub fn new(domain: DomainKey, population: usize, training_size: usize, counts: ConfusionCounts) -> Result<Self, MetricsError> {
        Ok(DomainReport {
            domain,
            population,
            training_size,
            scores: prf_accuracy(&counts)?,
            counts,
        })
    }
}

/// `(F^W, A^W)`: per-domain F and accuracy weighted by population.
pub fn weighted_aggregate(reports: &[DomainReport]) -> Result<(f64, f64), MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::EmptyReports);
    }
    if let Some(r) = reports.iter().find(|r| r.population == 0) {
        return Err(MetricsError::ZeroPopulation(r.domain.to_string()));
    }
    let total: f64 = reports.iter().map(|r| r.population as f64).sum();
    let f = reports.iter().map(|r| r.population as f64 * r.scores.f).sum::<f64>() / total;
    let a = reports.iter().map(|r| r.population as f64 * r.scores.accuracy).sum::<f64>() / total;
    Ok((f, a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub title: String,
    pub domains: Vec<DomainReport>,
    /// Unweighted means across domains.
    pub f: f64,
    pub accuracy: f64,
    pub f_weighted: f64,
    pub accuracy_weighted: f64,
}

impl EvaluationReport {
    /// Domains are sorted by key so the rendering is canonical.
    pub fn new(title: impl Into<String>, mut domains: Vec<DomainReport>) -> Result<Self, MetricsError> {
        domains.sort_by(|a, b| a.domain.cmp(&b.domain));
        let (f_weighted, accuracy_weighted) = weighted_aggregate(&domains)?;
        let n = domains.len() as f64;
        Ok(EvaluationReport {
            title: title.into(),
            f: domains.iter().map(|d| d.scores.f).sum::<f64>() / n,
            accuracy: domains.iter().map(|d| d.scores.accuracy).sum::<f64>() / n,
            f_weighted,
            accuracy_weighted,
            domains,
        })
    }

    pub fn render_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .domains
            .iter()
            .map(|d| {
                vec![
                    d.domain.to_string(),
                    d.population.to_string(),
                    d.training_size.to_string(),
                    format!("{:.3}", d.scores.precision),
                    format!("{:.3}", d.scores.recall),
                    format!("{:.3}", d.scores.f),
                    format!("{:.3}", d.scores.accuracy),
                ]
            })
            .collect();
        let mut out = format!("{}\n", self.title);
        out.push_str(&aligned_table(&["domain", "P", "T", "precision", "recall", "F", "A"], &rows));
        let _ = writeln!(
            out,
            "F {:.3}  A {:.3}  F^W {:.3}  A^W {:.3}",
            self.f, self.accuracy, self.f_weighted, self.accuracy_weighted
        );
        out
    }

    pub fn render_tsv(&self) -> String {
        let mut out = String::from("domain\tpopulation\ttraining\ttp\tfp\ttn\tfn\tprecision\trecall\tf\taccuracy\n");
        for d in &self.domains {
            let c = d.counts;
            let s = d.scores;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                d.domain.key_string(),
                d.population,
                d.training_size,
                c.tp,
                c.fp,
                c.tn,
                c.fn_,
                s.precision,
                s.recall,
                s.f,
                s.accuracy
            );
        }
        let _ = writeln!(
            out,
            "#aggregate\tf={}\taccuracy={}\tf_weighted={}\taccuracy_weighted={}",
            self.f, self.accuracy, self.f_weighted, self.accuracy_weighted
        );
        out
    }
}

/// 2x2 joint counts indexed `[fires][label]`.
pub fn joint_counts(firings: &[bool], labels: &[bool]) -> Result<[[u64; 2]; 2], MetricsError> {
    if firings.len() != labels.len() {
        return Err(MetricsError::LengthMismatch(firings.len(), labels.len()));
    }
    let mut joint = [[0u64; 2]; 2];
    for (&f, &a) in firings.iter().zip(labels) {
        joint[f as usize][a as usize] += 1;
    }
    Ok(joint)
}

/// Plug-in mutual information in bits from a 2x2 joint count table.
pub fn mutual_information_from_counts(joint: &[[u64; 2]; 2]) -> f64 {
    let n: u64 = joint.iter().flatten().sum();
    if n == 0 {
        return 0.0;
    }
    let row = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let col = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let n = n as f64;
    let mut mi = 0.0;
    for f in 0..2 {
        for a in 0..2 {
            let c = joint[f][a];
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * (c * n / (row[f] as f64 * col[a] as f64)).log2();
        }
    }
    mi.max(0.0)
}

/// MI between a feature's firings (value != 0) and binary labels, in bits.
pub fn mutual_information(firings: &[bool], labels: &[bool]) -> Result<f64, MetricsError> {
    Ok(mutual_information_from_counts(&joint_counts(firings, labels)?))
}

/// Shannon entropy in bits of a binary variable.
pub fn binary_entropy(values: &[bool]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let p = values.iter().filter(|v| **v).count() as f64 / values.len() as f64;
    [p, 1.0 - p].iter().filter(|q| **q > 0.0).map(|q| -q * q.log2()).sum()
}

/// Fraction of messages on which the feature fires; 0 for no messages.
pub fn coverage(firings: &[bool]) -> f64 {
    if firings.is_empty() {
        return 0.0;
    }
    firings.iter().filter(|f| **f).count() as f64 / firings.len() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureDiagnostic {
    pub feature: String,
    pub mutual_information: f64,
    pub coverage: f64,
}

/// Sorted by MI descending, then name.
pub fn rank_diagnostics(mut rows: Vec<FeatureDiagnostic>) -> Vec<FeatureDiagnostic> {
    rows.sort_by(|a, b| {
        b.mutual_information
            .total_cmp(&a.mutual_information)
            .then_with(|| a.feature.cmp(&b.feature))
    });
    rows
}

pub fn render_diagnostics(rows: &[FeatureDiagnostic]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.feature.clone(),
                format!("{:.4}", r.mutual_information),
                format!("{:.2}%", 100.0 * r.coverage),
            ]
        })
        .collect();
    aligned_table(&["feature", "mutual information", "coverage"], &body)
}

pub fn diagnostics_tsv(rows: &[FeatureDiagnostic]) -> String {
    let mut out = String::from("feature\tmutual_information\tcoverage\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.feature, r.mutual_information, r.coverage);
    }
    out
}

/// Left-aligned first column, right-aligned others, two-space gutters.
pub fn aligned_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(s, "{cell:<w$}");
            } else {
                let _ = write!(s, "  {cell:>w$}");
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&mut headers.iter().copied());
    let rule: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
    out.push_str(&"-".repeat(rule));
    out.push('\n');
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn prf_hand_arithmetic() {
        let s = prf_accuracy(&ConfusionCounts { tp: 8, fp: 2, tn: 8, fn_: 2 }).unwrap();
        assert!(close(s.precision, 0.8) && close(s.recall, 0.8) && close(s.f, 0.8) && close(s.accuracy, 0.8));
        let s = prf_accuracy(&ConfusionCounts { tp: 3, fp: 0, tn: 4, fn_: 0 }).unwrap();
        assert_eq!((s.precision, s.recall, s.f, s.accuracy), (1.0, 1.0, 1.0, 1.0));
        let s = prf_accuracy(&ConfusionCounts { tp: 0, fp: 0, tn: 4, fn_: 3 }).unwrap();
        assert_eq!((s.precision, s.recall, s.f), (0.0, 0.0, 0.0));
        assert_eq!(prf_accuracy(&ConfusionCounts::default()), Err(MetricsError::ZeroTotal));
    }

    fn report(company: &str, f: f64, population: usize) -> DomainReport {
        DomainReport {
            domain: DomainKey::full(company, "en", Source::Tw),
            population,
            training_size: 1,
            counts: ConfusionCounts::default(),
            scores: Scores { f, accuracy: f, ..Scores::default() },
        }
    }

    #[test]
    fn weighting() {
        let (f, a) = weighted_aggregate(&[report("a", 0.8, 100), report("b", 0.6, 300)]).unwrap();
        assert!(close(f, 0.65) && close(a, 0.65));
        let (f, _) = weighted_aggregate(&[report("a", 0.7, 5)]).unwrap();
        assert!(close(f, 0.7));
        let (f, _) = weighted_aggregate(&[report("a", 0.2, 9), report("b", 0.6, 9)]).unwrap();
        assert!(close(f, 0.4));
        assert_eq!(weighted_aggregate(&[]), Err(MetricsError::EmptyReports));
        assert!(weighted_aggregate(&[report("a", 0.2, 0)]).is_err());
    }

    #[test]
    fn mi_examples() {
        let mi = mutual_information_from_counts(&[[45, 5], [5, 45]]);
        let expected = 0.9 * 1.8f64.log2() + 0.1 * 0.2f64.log2();
        assert!(close(mi, expected));
        assert!((mi - 0.5310).abs() < 1e-4);
        let labels: Vec<bool> = (0..100).map(|i| i % 2 == 0).collect();
        assert!(close(mutual_information(&labels, &labels).unwrap(), 1.0));
        assert_eq!(mutual_information(&vec![true; 100], &labels).unwrap(), 0.0);
        assert!(mutual_information(&[true], &[]).is_err());
    }

    #[test]
    fn coverage_cases() {
        let mut f = vec![false; 10000];
        f[..1773].iter_mut().for_each(|x| *x = true);
        assert!(close(coverage(&f), 0.1773));
        assert_eq!(coverage(&[false, false]), 0.0);
        assert_eq!(coverage(&[true, true]), 1.0);
    }

    #[test]
    fn report_rendering_is_sorted() {
        let r = EvaluationReport::new("strategy A", vec![report("b", 0.5, 10), report("a", 1.0, 10)]).unwrap();
        assert_eq!(r.domains[0].domain.company.as_deref(), Some("a"));
        assert!(close(r.f, 0.75));
        let table = r.render_table();
        assert!(table.starts_with("strategy A\ndomain"));
        assert!(r.render_tsv().lines().nth(1).unwrap().starts_with("a/en/tw\t10\t1"));
    }

    #[test]
    fn table_alignment() {
        let t = aligned_table(&["x", "value"], &[vec!["long name".into(), "1".into()]]);
        assert_eq!(t, "x          value\n----------------\nlong name      1\n");
    }
}
