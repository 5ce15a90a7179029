use aggro::featurize::SparseVector;
use aggro::model::{train_binary, train_ovr, TrainConfig};
use aggro::Label;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(seed: u64, m: usize, d: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

fn sparse(points: &[Vec<f64>]) -> Vec<SparseVector> {
    points.iter().map(|p| SparseVector::from_dense(p)).collect()
}

#[test]
fn separable_data_is_fit_exactly_without_regularization() {
    // Labelled by a hyperplane with a margin.
    let points: Vec<Vec<f64>> = random_points(1, 200, 4)
        .into_iter()
        .filter(|p| (p[0] + 0.5 * p[1] - 0.3 * p[3]).abs() > 0.1)
        .collect();
    let y: Vec<bool> = points.iter().map(|p| p[0] + 0.5 * p[1] - 0.3 * p[3] > 0.0).collect();
    let config = TrainConfig { reg_lambda: 0.0, max_iters: 3000, ..TrainConfig::default() };
    let model = train_binary(&sparse(&points), &y, &config).unwrap();
    let x = sparse(&points);
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(xi, yi)| (model.decision(xi).unwrap() > 0.0) == **yi)
        .count();
    assert_eq!(correct, y.len());
}

#[test]
fn weight_norm_shrinks_as_lambda_grows() {
    let points = random_points(2, 120, 6);
    let y: Vec<bool> = points.iter().map(|p| p[0] - p[2] + 0.3 * p[5] > 0.1).collect();
    let x = sparse(&points);
    let mut last = f64::INFINITY;
    for lambda in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let config = TrainConfig { reg_lambda: lambda, grad_tol: 1e-9, max_iters: 5000, ..TrainConfig::default() };
        let w = train_binary(&x, &y, &config).unwrap().weights;
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm <= last + 1e-9, "λ={lambda}: {norm} > {last}");
        last = norm;
    }
}

#[test]
fn two_class_ovr_agrees_with_binary() {
    let points = random_points(3, 150, 5);
    let y: Vec<bool> = points.iter().map(|p| p[1] + p[4] > 0.0).collect();
    let labels: Vec<Label> = y.iter().map(|&b| if b { Label::Nag } else { Label::Cag }).collect();
    let x = sparse(&points);
    let config = TrainConfig::default();
    let binary = train_binary(&x, &y, &config).unwrap();
    let ovr = train_ovr(&x, &labels, &config).unwrap();
    for xi in &x {
        let z = binary.decision(xi).unwrap();
        if z.abs() < 1e-6 {
            continue;
        }
        let expected = if z > 0.0 { Label::Nag } else { Label::Cag };
        assert_eq!(ovr.predict(xi).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn probabilities_are_in_unit_interval(seed in 0u64..1000, m in 3usize..30, d in 1usize..6) {
        let points = random_points(seed, m, d);
        let labels: Vec<Label> = (0..m).map(|i| Label::ALL[i % 3]).collect();
        let ovr = train_ovr(&sparse(&points), &labels, &TrainConfig::default()).unwrap();
        for xi in sparse(&random_points(seed + 1, 10, d)) {
            for p in ovr.predict_proba(&xi).unwrap() {
                prop_assert!(p.is_finite() && (0.0..=1.0).contains(&p));
            }
        }
    }
}
