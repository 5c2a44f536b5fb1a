//! Firefly search on two classic test functions, showing the non-increasing
//! best-cost history and seed determinism.
//!
//! ```bash
//! cargo run -p lqgkit --example firefly_optimization
//! ```

use lqgkit::firefly::{attractiveness, optimize, FireflyParams, SearchSpace};

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)
}

fn main() {
    println!("attractiveness at r = 0, 1, 2 (beta0 = 2, gamma = 0.3):");
    for r in [0.0, 1.0, 2.0] {
        println!("  beta({r}) = {:.4}", attractiveness(2.0, 0.3, r));
    }

    let space = SearchSpace::new(vec![-5.0, -5.0], vec![5.0, 5.0]).unwrap();
    let params = FireflyParams {
        population: 25,
        iterations: 200,
        seed: 1,
        ..Default::default()
    };

    println!("\n== sphere on [-5, 5]^2 ==");
    let result = optimize(sphere, &space, &params).unwrap();
    for (i, cost) in result.history.iter().enumerate().step_by(40) {
        println!("iter {i:>4}: best cost {cost:.6e}");
    }
    println!("final: {:.6e} at {:?}", result.best_cost, result.best_position);

    println!("\n== rosenbrock on [-5, 5]^2 ==");
    let params = FireflyParams {
        iterations: 500,
        seed: 1,
        ..Default::default()
    };
    let result = optimize(rosenbrock, &space, &params).unwrap();
    println!("final: {:.6e} at {:?}", result.best_cost, result.best_position);

    // same seed, same answer, bit for bit
    let again = optimize(rosenbrock, &space, &params).unwrap();
    println!("rerun identical: {}", again == result);
}
