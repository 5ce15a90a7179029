use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::metrics::{weighted_f1, ConfusionMatrix};
use crate::corpus::Label;
use crate::error::{Error, Result};

/// How random predictions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaselineMode {
    /// Each label with probability 1/3.
    #[default]
    Uniform,
    /// Labels drawn with the gold label frequencies.
    Prior,
}

impl FromStr for BaselineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(BaselineMode::Uniform),
            "prior" => Ok(BaselineMode::Prior),
            other => Err(Error::Config(format!("unknown baseline mode {other:?}"))),
        }
    }
}

/// Mean weighted F1 of `trials` random labelings. Trial `t` draws from its
/// own generator seeded with `seed + t`, so results do not depend on thread
/// scheduling.
pub fn random_baseline(gold: &[Label], seed: u64, trials: usize) -> Result<f64> {
    random_baseline_with(gold, seed, trials, BaselineMode::Uniform)
}

pub fn random_baseline_with(
    gold: &[Label],
    seed: u64,
    trials: usize,
    mode: BaselineMode,
) -> Result<f64> {
    if gold.is_empty() {
        return Err(Error::Empty("gold labels"));
    }
    if trials == 0 {
        return Err(Error::Config("baseline trials must be at least 1".into()));
    }
    let mut cumulative = [0u64; 3];
    for g in gold {
        cumulative[g.index()] += 1;
    }
    cumulative[1] += cumulative[0];
    cumulative[2] += cumulative[1];
    let n = gold.len() as u64;

    let scores: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
            let mut m = ConfusionMatrix::default();
            for g in gold {
                let p = match mode {
                    BaselineMode::Uniform => rng.random_range(0..3usize),
                    BaselineMode::Prior => {
                        let r = rng.random_range(0..n);
                        cumulative.iter().position(|&c| r < c).expect("r < n")
                    }
                };
                m.counts[g.index()][p] += 1;
            }
            weighted_f1(&m)
        })
        .collect();
    Ok(scores.iter().sum::<f64>() / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_nag_gold_near_half() {
        let gold = vec![Label::Nag; 600];
        let v = random_baseline(&gold, 7, 300).unwrap();
        assert!((v - 0.5).abs() < 0.02, "{v}");
    }

    #[test]
    fn reproducible_single_trial() {
        let gold: Vec<Label> = Label::ALL.repeat(20);
        let a = random_baseline(&gold, 42, 1).unwrap();
        assert_eq!(a, random_baseline(&gold, 42, 1).unwrap());
        assert_ne!(a, random_baseline(&gold, 43, 1).unwrap());
    }

    #[test]
    fn prior_mode_on_single_class_is_perfect() {
        let gold = vec![Label::Oag; 50];
        assert_eq!(random_baseline_with(&gold, 1, 5, BaselineMode::Prior).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(random_baseline(&[], 0, 1).is_err());
        assert!(random_baseline(&[Label::Nag], 0, 0).is_err());
        assert_eq!("prior".parse::<BaselineMode>().unwrap(), BaselineMode::Prior);
        assert!("x".parse::<BaselineMode>().is_err());
    }
}
