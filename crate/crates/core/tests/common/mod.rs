//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::io::Write;

use kinefault::differentiator::{RlsConfig, RlsEstimator};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Writes a line straight to the process stdout, past the test harness's
/// output capture, so it shows up in a plain `cargo test` log.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

pub struct StepData {
    pub z: f64,
    pub phi_f: DVector<f64>,
    pub d_f: f64,
    pub phi: DVector<f64>,
}

pub fn random_steps(seed: u64, len: usize, l: usize) -> Vec<StepData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| StepData {
            z: rng.random_range(-1.0..1.0),
            phi_f: DVector::from_fn(l, |_, _| rng.random_range(-0.5..0.5)),
            d_f: rng.random_range(-0.2..0.2),
            phi: DVector::from_fn(l, |_, _| rng.random_range(-2.0..2.0)),
        })
        .collect()
}

/// argmin sum_i [R_z (z_i - d_f,i + phi_f,i th)^2 + R_d (phi_i th)^2] + R_th |th|^2
pub fn batch_minimizer(cfg: &RlsConfig, data: &[StepData]) -> DVector<f64> {
    let l = cfg.coeff_len();
    let mut h = DMatrix::identity(l, l) * cfg.r_theta_scale;
    let mut g = DVector::zeros(l);
    for s in data {
        h += &s.phi_f * s.phi_f.transpose() * cfg.r_z + &s.phi * s.phi.transpose() * cfg.r_d;
        g -= &s.phi_f * (cfg.r_z * (s.z - s.d_f));
    }
    h.cholesky().expect("normal matrix is SPD").solve(&g)
}

/// Largest coefficient gap between the recursive and batch solutions over
/// every prefix of a random sequence.
pub fn worst_prefix_gap(cfg: &RlsConfig, seed: u64, len: usize) -> f64 {
    let data = random_steps(seed, len, cfg.coeff_len());
    let mut rls = RlsEstimator::new(cfg).unwrap();
    let mut worst = 0.0f64;
    for (k, s) in data.iter().enumerate() {
        rls.update(s.z, &s.phi_f, s.d_f, &s.phi).unwrap();
        let batch = batch_minimizer(cfg, &data[..=k]);
        worst = worst.max((rls.theta() - batch).amax());
    }
    worst
}
