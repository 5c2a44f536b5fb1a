//! Stepping the coupled Kalman filter by hand on the planar model: watch the
//! covariance trace settle and the estimate lock onto a noisy constant-
//! velocity truth.
//!
//! ```bash
//! cargo run -p lqgkit --example kalman_filtering
//! ```

use lqgkit::airframe::euler_discretize;
use lqgkit::kalman::{kf_init, kf_step, FilterConfig, NoiseSpec};
use lqgkit::linalg::Matrix;
use lqgkit::sim::planar_goal_model;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() {
    let model = euler_discretize(&planar_goal_model(), 0.5).unwrap();
    let noise = NoiseSpec::from_diagonals(
        &[0.25, 0.25],
        &[2500.0, 4.0, 2500.0, 4.0],
        &[0.0, 0.0],
    )
    .unwrap();
    // pure estimation here: the coupled gain is zero
    let cfg = FilterConfig::new(model.clone(), noise, Matrix::zeros(2, 4), vec![0.0; 4]).unwrap();

    let mut truth = vec![0.0, 20.0, 0.0, 15.0]; // constant-velocity start
    let mut state = kf_init(&cfg, &[0.0; 4], &Matrix::from_diag(&[1e4, 100.0, 1e4, 100.0])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut draw = |sigma: f64| -> f64 {
        let g: f64 = StandardNormal.sample(&mut rng);
        sigma * g
    };

    println!("step   cov-trace   est-err-pos   innovation-norm");
    for k in 1..=40 {
        // truth: constant velocity plus acceleration noise
        let w = [draw(0.5), draw(0.5)];
        truth = {
            let mut t = model.a.mul_vec(&truth).unwrap();
            let gw = model.g_noise.mul_vec(&w).unwrap();
            for (ti, gi) in t.iter_mut().zip(&gw) {
                *ti += gi;
            }
            t
        };
        let z: Vec<f64> = truth
            .iter()
            .zip([50.0, 2.0, 50.0, 2.0])
            .map(|(x, sigma)| x + draw(sigma))
            .collect();

        state = kf_step(&state, &z, &cfg).unwrap();
        if k % 4 == 0 {
            let trace: f64 = (0..4).map(|i| state.p_cov.get(i, i)).sum();
            let pos_err = ((state.x_est[0] - truth[0]).powi(2)
                + (state.x_est[2] - truth[2]).powi(2))
            .sqrt();
            let innov = state
                .last_innovation
                .as_ref()
                .map(|d| d.iter().map(|v| v * v).sum::<f64>().sqrt())
                .unwrap_or(0.0);
            println!("{k:>4}   {trace:>9.2}   {pos_err:>11.2}   {innov:>15.2}");
        }
    }
    println!("\nfinal estimate: {:?}", state.x_est.iter().map(|v| (v * 10.0).round() / 10.0).collect::<Vec<_>>());
    println!("final truth:    {:?}", truth.iter().map(|v| (v * 10.0).round() / 10.0).collect::<Vec<_>>());
}
