mod common;

use common::oracle::gradient_error;
use common::{dataset, Shape};
use hullsep::trainer::{train, train_points, Mlp, TrainConfig};
use hullsep::{ActivationSpec, LabeledDataset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn gradients_match_central_differences() {
    for a in ActivationSpec::standard() {
        for seed in 0..25 {
            let e = gradient_error(&a, seed);
            assert!(e < 1e-4, "{a} seed {seed}: relative error {e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn params_round_trip(h1 in 1usize..6, h2 in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mlp = Mlp::new(3, (h1, h2), ActivationSpec::tanh(), &mut rng);
        prop_assert_eq!(mlp.n_params(), 3 * h1 + h1 + h1 * h2 + h2 + h2 * 2 + 2);
        let p: Vec<f64> = (0..mlp.n_params()).map(|i| i as f64 * 0.01).collect();
        mlp.set_params(&p).unwrap();
        prop_assert_eq!(mlp.params(), p);
    }

    #[test]
    fn probabilities_sum_to_one(seed: u64, x in prop::collection::vec(-10.0..10.0f64, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mlp = Mlp::new(4, (5, 3), ActivationSpec::sigmoid(), &mut rng);
        let p = mlp.predict_proba(&x);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}

/// Averaged over initializations: single draws are heavy-tailed.
#[test]
fn initial_loss_is_near_ln_two() {
    for shape in common::SHAPES {
        let c = dataset(shape, 4, 100, 100, 9);
        let x = c.x.concat(&c.y).unwrap();
        let t: Vec<usize> = (0..200).map(|i| usize::from(i >= 100)).collect();
        for a in ActivationSpec::standard() {
            let mean = (0..100)
                .map(|seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Mlp::new(4, (36, 6), a.clone(), &mut rng).evaluate(&x, &t).0
                })
                .sum::<f64>()
                / 100.0;
            assert!(
                (mean - 2f64.ln()).abs() < 0.1,
                "{shape:?} {a}: mean initial loss {mean}"
            );
        }
    }
}

#[test]
fn training_is_deterministic_per_seed() {
    let c = dataset(Shape::NoisyXor, 2, 40, 40, 4);
    let x = c.x.concat(&c.y).unwrap();
    let t: Vec<usize> = (0..80).map(|i| usize::from(i >= 40)).collect();
    let cfg = TrainConfig {
        hidden_sizes: (4, 2),
        epochs: 5,
        batch_size: 8,
        runs: 2,
        ..TrainConfig::default()
    };
    let a = train_points(&x, &t, &cfg).unwrap();
    let b = train_points(&x, &t, &cfg).unwrap();
    assert_eq!(a, b);
    let other = train_points(&x, &t, &TrainConfig { seed: 1, ..cfg }).unwrap();
    assert_ne!(a.loss_curve, other.loss_curve);
}

#[test]
fn trains_xor_with_labels() {
    let c = dataset(Shape::NoisyXor, 2, 60, 60, 5);
    let points = c.x.concat(&c.y).unwrap();
    let labels = (0..120)
        .map(|i| if i < 60 { "a" } else { "b" }.to_string())
        .collect();
    let d = LabeledDataset::new(points, labels, "xor").unwrap();
    let r = train(
        &d,
        &TrainConfig {
            hidden_sizes: (9, 3),
            epochs: 200,
            batch_size: 4,
            learning_rate: 0.1,
            runs: 1,
            ..TrainConfig::default()
        },
    )
    .unwrap();
    assert!(r.train_accuracy > 0.95, "{r:?}");
    assert_eq!(r.loss_curve.len(), 200);
}
