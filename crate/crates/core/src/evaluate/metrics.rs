use crate::corpus::Label;
use crate::error::{Error, Result};

/// Rows are gold labels, columns predictions, both in NAG, CAG, OAG order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

/// Precision, recall and F1 of one class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn confusion(gold: &[Label], pred: &[Label]) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            expected: gold.len(),
            found: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::Empty("label lists"));
    }
    let mut m = ConfusionMatrix::default();
    for (g, p) in gold.iter().zip(pred) {
        m.counts[g.index()][p.index()] += 1;
    }
    Ok(m)
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Number of gold examples of `class`.
    pub fn support(&self, class: Label) -> u64 {
        self.counts[class.index()].iter().sum()
    }

    pub fn predicted(&self, class: Label) -> u64 {
        self.counts.iter().map(|row| row[class.index()]).sum()
    }

    pub fn get(&self, gold: Label, pred: Label) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    /// Row-normalized counts; rows without support stay zero.
    pub fn row_normalized(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (g, row) in self.counts.iter().enumerate() {
            let sum: u64 = row.iter().sum();
            for (p, &c) in row.iter().enumerate() {
                out[g][p] = ratio(c as f64, sum as f64);
            }
        }
        out
    }
}

/// Any 0/0 is taken as 0.
pub fn class_prf(matrix: &ConfusionMatrix, class: Label) -> Prf {
    let tp = matrix.get(class, class) as f64;
    let precision = ratio(tp, matrix.predicted(class) as f64);
    let recall = ratio(tp, matrix.support(class) as f64);
    Prf {
        precision,
        recall,
        f1: ratio(2.0 * precision * recall, precision + recall),
    }
}

/// Support-weighted mean of per-class F1.
pub fn weighted_f1(matrix: &ConfusionMatrix) -> f64 {
    let num: f64 = Label::ALL
        .iter()
        .map(|&c| matrix.support(c) as f64 * class_prf(matrix, c).f1)
        .sum();
    ratio(num, matrix.total() as f64)
}

/// Unweighted mean of per-class F1 over all three classes.
pub fn macro_f1(matrix: &ConfusionMatrix) -> f64 {
    Label::ALL.iter().map(|&c| class_prf(matrix, c).f1).sum::<f64>() / 3.0
}

pub fn accuracy(matrix: &ConfusionMatrix) -> f64 {
    let diag: u64 = (0..3).map(|i| matrix.counts[i][i]).sum();
    ratio(diag as f64, matrix.total() as f64)
}
