mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdc_core::control::{predict_waypoints, GruCell, Linear, LocalPoint, NetworkDims, NetworkWeights, WeightBundle};

fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-9)
}

fn check_gru(hidden: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let scale = 1.0 / (hidden as f64).sqrt();
        let w_ih = random_vec(&mut rng, 3 * hidden * 5, scale);
        let w_hh = random_vec(&mut rng, 3 * hidden * hidden, scale);
        let b_ih = random_vec(&mut rng, 3 * hidden, scale);
        let b_hh = random_vec(&mut rng, 3 * hidden, scale);
        let x = random_vec(&mut rng, 5, 10.0);
        let h = random_vec(&mut rng, hidden, 1.0);
        let cell = GruCell {
            input_to_hidden: Linear { inputs: 5, outputs: 3 * hidden, weight: w_ih.clone(), bias: b_ih.clone() },
            hidden_to_hidden: Linear { inputs: hidden, outputs: 3 * hidden, weight: w_hh.clone(), bias: b_hh.clone() },
        };
        let got = cell.step(&x, &h);
        let want = oracles::scalar_gru(&x, &h, &w_ih, &w_hh, &b_ih, &b_hh);
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max(rel_err(*a, *b));
        }
    }
    assert!(worst <= 1e-6, "hidden {hidden}: worst relative error {worst:e}");
}

#[test]
fn gru_matches_scalar_oracle_hidden_4() {
    check_gru(4, 1);
}

#[test]
fn gru_matches_scalar_oracle_hidden_232() {
    check_gru(232, 2);
}

#[test]
fn constant_delta_head_accumulates() {
    let dims = NetworkDims { features: 8, hidden: 6, mlp_hidden: 4 };
    let net = NetworkWeights::from_bundle(&WeightBundle::constant_delta(dims, 0.5, 2.0)).unwrap();
    let (wp, latent) = predict_waypoints(&[0.3; 8], LocalPoint::new(1.0, 9.0), 3.0, 1.0, 0.0, &net).unwrap();
    assert_eq!(latent.len(), 6);
    for (k, p) in wp.0.iter().enumerate() {
        let n = (k + 1) as f64;
        assert_eq!(*p, LocalPoint::new(0.5 * n, 2.0 * n));
    }
}

#[test]
fn random_bundle_predicts_finite_waypoints() {
    let dims = NetworkDims::default();
    let net = NetworkWeights::from_bundle(&WeightBundle::random(dims, 3)).unwrap();
    let features = vec![0.1; dims.features];
    let (wp, latent) = predict_waypoints(&features, LocalPoint::new(0.0, 10.0), 4.0, 0.0, 1.0, &net).unwrap();
    assert!(wp.0.iter().all(|p| p.x.is_finite() && p.y.is_finite()));
    let controls = sdc_core::control::mlp_agent(&latent, &net);
    assert!(controls.is_legal());
}

#[test]
fn wrong_feature_width_is_rejected() {
    let dims = NetworkDims { features: 8, hidden: 6, mlp_hidden: 4 };
    let net = NetworkWeights::from_bundle(&WeightBundle::zeros(dims)).unwrap();
    assert!(predict_waypoints(&[0.0; 7], LocalPoint::ORIGIN, 0.0, 0.0, 0.0, &net).is_err());
}
