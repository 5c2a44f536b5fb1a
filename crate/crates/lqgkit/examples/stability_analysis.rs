//! Stability analysis of the longitudinal demonstration model: build it,
//! print the characteristic polynomial and spectrum of the full system and
//! its dynamic core, then show how Euler discretization moves the verdict.
//!
//! ```bash
//! cargo run -p lqgkit --example stability_analysis
//! ```

use lqgkit::airframe::{
    build_longitudinal_model, characteristic_polynomial, dynamic_core, euler_discretize,
    longitudinal_demo_model, stability_roots, StabilityDerivatives,
};

fn main() {
    let model = longitudinal_demo_model();

    println!("== longitudinal demonstration model ==");
    let poly = characteristic_polynomial(&model).unwrap();
    println!("characteristic polynomial: {poly:.4?}");
    let report = stability_roots(&model).unwrap();
    for r in &report.roots {
        println!("  root: {:+.4} {:+.4}i", r.re, r.im);
    }
    println!("stable: {} (the height state is a pure integrator)", report.stable);

    let core = dynamic_core(&model).expect("height state splits off");
    println!("\n== dynamic core (short-period and phugoid pairs) ==");
    let report = stability_roots(&core).unwrap();
    for r in &report.roots {
        println!("  root: {:+.4} {:+.4}i", r.re, r.im);
    }
    println!("stable: {}", report.stable);

    // forward Euler is only conditionally stable: the short-period pair
    // leaves the unit circle at coarse sampling
    println!("\n== Euler discretization of the core ==");
    for dt in [0.5, 0.1, 0.05] {
        let d = euler_discretize(&core, dt).unwrap();
        let report = stability_roots(&d).unwrap();
        let radius = report.roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        println!("dt = {dt:<5} spectral radius = {radius:.4}  stable: {}", report.stable);
    }

    // the same analysis applies to models built from stability derivatives
    let derivs = StabilityDerivatives {
        xu: -0.045,
        xw: 0.036,
        zu: -0.37,
        zw: -2.02,
        zq: -1.0,
        mu: 0.0,
        mw: -0.05,
        mq: -2.05,
        zde: -0.16,
        mde: -11.87,
        ..Default::default()
    };
    let custom = build_longitudinal_model(&derivs).unwrap();
    let report = stability_roots(&custom).unwrap();
    println!("\n== model from stability derivatives ==");
    for r in &report.roots {
        println!("  root: {:+.4} {:+.4}i", r.re, r.im);
    }
    println!("stable: {}", report.stable);
}
