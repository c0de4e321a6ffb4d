use serde::Serialize;

/// One row of the metrics history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub epoch: usize,
    pub loss: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Confusion counts, `counts[label][prediction]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    counts: Vec<Vec<usize>>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Confusion {
    pub fn new(labels: &[usize], predictions: &[usize]) -> Self {
        let n = labels.iter().chain(predictions).max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0; n]; n];
        for (&l, &p) in labels.iter().zip(predictions) {
            counts[l][p] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        ratio((0..self.counts.len()).map(|c| self.counts[c][c]).sum(), self.total())
    }

    /// Whether class `c` occurs among the labels or the predictions.
    pub fn is_present(&self, c: usize) -> bool {
        self.counts[c].iter().sum::<usize>() + self.counts.iter().map(|row| row[c]).sum::<usize>() > 0
    }

    /// Precision, recall and F1 of class `c`; undefined ratios are 0.
    pub fn class(&self, c: usize) -> ClassMetrics {
        let tp = self.counts[c][c];
        let predicted: usize = self.counts.iter().map(|row| row[c]).sum();
        let actual: usize = self.counts[c].iter().sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, actual);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        ClassMetrics { precision, recall, f1 }
    }

    /// Macro averages over the classes present in labels or predictions.
    pub fn macro_average(&self) -> ClassMetrics {
        let present: Vec<usize> = (0..self.counts.len()).filter(|&c| self.is_present(c)).collect();
        if present.is_empty() {
            return ClassMetrics { precision: 0.0, recall: 0.0, f1: 0.0 };
        }
        let n = present.len() as f64;
        let per: Vec<ClassMetrics> = present.iter().map(|&c| self.class(c)).collect();
        ClassMetrics {
            precision: per.iter().map(|m| m.precision).sum::<f64>() / n,
            recall: per.iter().map(|m| m.recall).sum::<f64>() / n,
            f1: per.iter().map(|m| m.f1).sum::<f64>() / n,
        }
    }

    pub fn record(&self, epoch: usize, loss: f64) -> MetricsRecord {
        let m = self.macro_average();
        MetricsRecord { epoch, loss, accuracy: self.accuracy(), precision: m.precision, recall: m.recall, f1: m.f1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let r = Confusion::new(&[0, 1, 2, 2], &[0, 1, 2, 2]).record(1, 0.0);
        assert_eq!((r.accuracy, r.precision, r.recall, r.f1), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn binary_confusion_oracle() {
        // TP = 1, FP = 1, FN = 0, TN = 0 for class 1
        let c = Confusion::new(&[1, 0], &[1, 1]);
        let m = c.class(1);
        assert_eq!((m.precision, m.recall), (0.5, 1.0));
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.class(0).f1, 0.0);
        assert_eq!(c.accuracy(), 0.5);
    }

    #[test]
    fn absent_classes_are_skipped() {
        let c = Confusion::new(&[0, 3], &[0, 3]);
        assert!(!c.is_present(1));
        assert_eq!(c.macro_average().f1, 1.0);
    }
}
