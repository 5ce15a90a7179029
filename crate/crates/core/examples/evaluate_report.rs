//! Metrics, the random baseline and the rendered report files.

use aggro::evaluate::{class_prf, confusion, random_baseline, render_report, EvalReport};
use aggro::Label;

fn main() -> aggro::Result<()> {
    use Label::*;
    let gold = [Nag, Nag, Nag, Nag, Cag, Cag, Cag, Oag, Oag, Oag];
    let pred = [Nag, Nag, Cag, Nag, Cag, Nag, Oag, Oag, Oag, Cag];
    let matrix = confusion(&gold, &pred)?;
    for c in Label::ALL {
        let prf = class_prf(&matrix, c);
        println!("{c}: P {:.3} R {:.3} F1 {:.3}", prf.precision, prf.recall, prf.f1);
    }
    let report = EvalReport::new(matrix).with_baseline(random_baseline(&gold, 1, 2000)?);
    println!("{}", report.summary());

    let dir = std::env::temp_dir().join("aggro-evaluate-example");
    for path in render_report(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
