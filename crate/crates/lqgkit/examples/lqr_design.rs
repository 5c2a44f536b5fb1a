//! LQR synthesis walkthrough: the double integrator with its closed-form
//! gain, then the demonstration airframe, with Riccati residuals and
//! closed-loop spectra.
//!
//! ```bash
//! cargo run -p lqgkit --example lqr_design
//! ```

use lqgkit::airframe::{longitudinal_demo_model, LinearModel};
use lqgkit::linalg::{eigenvalues, Matrix};
use lqgkit::lqr::{closed_loop_matrix, lqr_cost, lqr_gain};

fn main() {
    // double integrator: K = [1, sqrt(3)] for identity weights
    let di = LinearModel::continuous(
        Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
        Matrix::from_rows(&[&[0.0], &[1.0]]),
        Matrix::identity(2),
        Matrix::identity(2),
    )
    .unwrap();
    let design = lqr_gain(&di, &Matrix::identity(2), &Matrix::identity(1)).unwrap();
    println!("== double integrator ==");
    println!("K = [{:.7}, {:.7}]  (closed form: [1, sqrt(3)])", design.k_gain.get(0, 0), design.k_gain.get(0, 1));
    println!("P = [[{:.7}, {:.7}], [{:.7}, {:.7}]]",
        design.p_solution.get(0, 0), design.p_solution.get(0, 1),
        design.p_solution.get(1, 0), design.p_solution.get(1, 1));
    println!("riccati residual = {:.3e}", design.riccati_residual(&di).unwrap());

    // demonstration airframe with identity weights
    let model = longitudinal_demo_model();
    let design = lqr_gain(&model, &Matrix::identity(5), &Matrix::identity(2)).unwrap();
    println!("\n== demonstration airframe ==");
    println!("gain rows:");
    for i in 0..design.k_gain.rows() {
        let row: Vec<String> = (0..design.k_gain.cols())
            .map(|j| format!("{:+.4}", design.k_gain.get(i, j)))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    let closed = closed_loop_matrix(&model, &design.k_gain).unwrap();
    println!("closed-loop eigenvalues:");
    for e in eigenvalues(&closed).unwrap() {
        println!("  {:+.4} {:+.4}i", e.re, e.im);
    }
    println!("riccati residual = {:.3e}", design.riccati_residual(&model).unwrap());

    // the quadratic cost of a short hand-rolled trajectory
    let trajectory = vec![
        (vec![1.0, 0.0, 0.0, 0.0, 10.0], vec![0.1, 0.0]),
        (vec![0.5, 0.1, 0.0, 0.0, 5.0], vec![0.05, 0.0]),
        (vec![0.1, 0.0, 0.0, 0.0, 1.0], vec![0.01, 0.0]),
    ];
    let j = lqr_cost(&trajectory, &Matrix::identity(5), &Matrix::identity(2), 0.5).unwrap();
    println!("\nquadratic cost of a 3-sample trajectory: J = {j:.4}");
}
