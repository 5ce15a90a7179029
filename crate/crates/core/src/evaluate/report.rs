use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::metrics::{accuracy, class_prf, macro_f1, weighted_f1, ConfusionMatrix, Prf};
use crate::corpus::{escape_field, Label};
use crate::error::{Error, Result};

/// Everything written by [`render_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    /// Indexed like `Label::ALL`.
    pub per_class: [Prf; 3],
    pub weighted_f1: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
    pub support: [u64; 3],
    /// Mean weighted F1 of random labelings, when requested.
    pub baseline: Option<f64>,
    /// Per class, `(feature, weight)` in rank order.
    pub top_features: Option<[Vec<(String, f64)>; 3]>,
}

impl EvalReport {
    pub fn new(matrix: ConfusionMatrix) -> EvalReport {
        EvalReport {
            per_class: Label::ALL.map(|c| class_prf(&matrix, c)),
            weighted_f1: weighted_f1(&matrix),
            macro_f1: macro_f1(&matrix),
            accuracy: accuracy(&matrix),
            support: Label::ALL.map(|c| matrix.support(c)),
            matrix,
            baseline: None,
            top_features: None,
        }
    }

    pub fn with_baseline(mut self, baseline: f64) -> EvalReport {
        self.baseline = Some(baseline);
        self
    }

    pub fn with_top_features(mut self, features: [Vec<(String, f64)>; 3]) -> EvalReport {
        self.top_features = Some(features);
        self
    }

    /// `metric<TAB>value` rows; rates to 4 decimals, counts as integers.
    pub fn metrics_tsv(&self) -> String {
        let mut out = String::from("metric\tvalue\n");
        let mut row = |name: &str, v: f64| {
            let _ = writeln!(out, "{name}\t{v:.4}");
        };
        row("weighted_f1", self.weighted_f1);
        row("macro_f1", self.macro_f1);
        row("accuracy", self.accuracy);
        for (label, prf) in Label::ALL.iter().zip(&self.per_class) {
            row(&format!("precision_{label}"), prf.precision);
            row(&format!("recall_{label}"), prf.recall);
            row(&format!("f1_{label}"), prf.f1);
        }
        if let Some(b) = self.baseline {
            row("random_baseline_weighted_f1", b);
        }
        for (label, s) in Label::ALL.iter().zip(&self.support) {
            let _ = writeln!(out, "support_{label}\t{s}");
        }
        let _ = writeln!(out, "total\t{}", self.matrix.total());
        out
    }

    pub fn confusion_tsv(&self) -> String {
        let mut out = String::from("gold\\pred\tNAG\tCAG\tOAG\n");
        for (label, row) in Label::ALL.iter().zip(&self.matrix.counts) {
            let _ = writeln!(out, "{label}\t{}\t{}\t{}", row[0], row[1], row[2]);
        }
        out
    }

    /// Heatmap with fill opacity equal to the row-normalized count.
    pub fn confusion_svg(&self) -> String {
        const CELL: usize = 90;
        const LEFT: usize = 110;
        const TOP: usize = 70;
        let size = 3 * CELL;
        let norm = self.matrix.row_normalized();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="14">"#,
            w = LEFT + size + 20,
            h = TOP + size + 20
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" font-weight="bold">Predicted</text>"#,
            LEFT + size / 2
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{y}" text-anchor="middle" font-weight="bold" transform="rotate(-90 20 {y})">Gold</text>"#,
            y = TOP + size / 2
        );
        for (i, label) in Label::ALL.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{label}</text>"#,
                LEFT + i * CELL + CELL / 2,
                TOP - 12
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end">{label}</text>"#,
                LEFT - 10,
                TOP + i * CELL + CELL / 2 + 5
            );
        }
        for (g, gold) in Label::ALL.iter().enumerate() {
            for (p, pred) in Label::ALL.iter().enumerate() {
                let (x, y) = (LEFT + p * CELL, TOP + g * CELL);
                let value = norm[g][p];
                let count = self.matrix.counts[g][p];
                let _ = writeln!(
                    s,
                    r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#08306b" fill-opacity="{value:.4}" stroke="#999999"><title>gold {gold}, predicted {pred}: {count}</title></rect>"##
                );
                let color = if value > 0.5 { "#ffffff" } else { "#000000" };
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" text-anchor="middle" fill="{color}">{count}</text>"#,
                    x + CELL / 2,
                    y + CELL / 2 + 5
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }

    /// `class<TAB>rank<TAB>feature<TAB>weight` rows, when features are set.
    pub fn top_features_tsv(&self) -> Option<String> {
        let features = self.top_features.as_ref()?;
        let mut out = String::from("class\trank\tfeature\tweight\n");
        for (label, list) in Label::ALL.iter().zip(features) {
            for (rank, (name, w)) in list.iter().enumerate() {
                let _ = writeln!(out, "{label}\t{}\t{}\t{w:.6}", rank + 1, escape_field(name));
            }
        }
        Some(out)
    }

    /// Short plain-text summary for the terminal.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "weighted F1 {:.4}  macro F1 {:.4}  accuracy {:.4}  (n = {})\n",
            self.weighted_f1,
            self.macro_f1,
            self.accuracy,
            self.matrix.total()
        );
        for (label, (prf, s)) in Label::ALL.iter().zip(self.per_class.iter().zip(&self.support)) {
            let _ = writeln!(
                out,
                "  {label}: P {:.4}  R {:.4}  F1 {:.4}  support {s}",
                prf.precision, prf.recall, prf.f1
            );
        }
        if let Some(b) = self.baseline {
            let _ = writeln!(out, "  random baseline weighted F1 {b:.4}");
        }
        out
    }
}

/// Writes `metrics.tsv`, `confusion.tsv`, `confusion.svg` and, when the
/// report has them, `top_features.tsv`. Returns the written paths.
pub fn render_report(report: &EvalReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![
        ("metrics.tsv", report.metrics_tsv()),
        ("confusion.tsv", report.confusion_tsv()),
        ("confusion.svg", report.confusion_svg()),
    ];
    if let Some(t) = report.top_features_tsv() {
        files.push(("top_features.tsv", t));
    }
    let mut written = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::metrics::confusion;
    use Label::*;

    fn report() -> EvalReport {
        EvalReport::new(confusion(&[Nag, Nag, Cag, Oag], &[Nag, Cag, Cag, Oag]).unwrap())
    }

    #[test]
    fn files_and_row_sums() {
        let dir = tempfile::tempdir().unwrap();
        let written = render_report(&report(), dir.path()).unwrap();
        assert_eq!(written.len(), 3);
        assert!(!dir.path().join("top_features.tsv").exists());
        let tsv = std::fs::read_to_string(dir.path().join("confusion.tsv")).unwrap();
        let mut lines = tsv.lines();
        assert_eq!(lines.next(), Some("gold\\pred\tNAG\tCAG\tOAG"));
        let sums: Vec<u64> = lines
            .map(|l| l.split('\t').skip(1).map(|c| c.parse::<u64>().unwrap()).sum())
            .collect();
        assert_eq!(sums, report().support);

        let with = report().with_top_features([vec![("unigram_x".into(), 1.5)], vec![], vec![]]);
        assert_eq!(render_report(&with, dir.path()).unwrap().len(), 4);
        let top = std::fs::read_to_string(dir.path().join("top_features.tsv")).unwrap();
        assert_eq!(top, "class\trank\tfeature\tweight\nNAG\t1\tunigram_x\t1.500000\n");
    }

    #[test]
    fn metrics_format() {
        let m = report().with_baseline(1.0 / 3.0).metrics_tsv();
        assert!(m.contains("\nweighted_f1\t0.7500\n"), "{m}");
        assert!(m.contains("\nsupport_NAG\t2\n"));
        assert!(m.contains("\nrandom_baseline_weighted_f1\t0.3333\n"));
        assert!(m.contains("\ntotal\t4\n"));
    }

    #[test]
    fn svg_diagonal_is_darkest() {
        let r = EvalReport::new(confusion(&[Nag, Cag, Oag], &[Nag, Cag, Oag]).unwrap());
        let svg = r.confusion_svg();
        assert_eq!(svg.matches(r#"fill-opacity="1.0000""#).count(), 3);
        assert_eq!(svg.matches(r#"fill-opacity="0.0000""#).count(), 6);
        assert!(svg.contains("<title>gold CAG, predicted CAG: 1</title>"));
        for l in ["NAG", "CAG", "OAG", "Predicted", "Gold"] {
            assert!(svg.contains(&format!(">{l}</text>")));
        }
    }
}
