//! Uniform motion: invariance, then the growth rate of kicks on top of it.
//!
//! The rate is the one exact propagation reproduces with unit gain over a
//! delay; compare it with the rest rate over γ and with the moving-frame
//! real root over γ.

use zitterlab::dynamics::{perturbed_uniform_run, propagate_exact, ExactConfig, SeedHistory};

fn main() {
    let cfg = ExactConfig { t_end: 50.0, ..ExactConfig::default() };
    for beta in [0.5, 0.9] {
        let tr = propagate_exact(&SeedHistory::uniform(beta, 0.0), &cfg).expect("uniform run");
        let drift = tr.betas().iter().map(|b| (b - beta).abs()).fold(0.0, f64::max);
        println!("beta {beta}: max |beta - beta0| over {} d/c = {drift:.1e}", tr.end());
    }
    println!();
    println!("{:>5} {:>10} {:>10} {:>12} {:>12} {:>10}", "beta", "measured", "spread", "root/gamma", "rest/gamma", "breakdown");
    for beta in [0.0, 0.3, 0.5, 0.7, 0.9] {
        let run = perturbed_uniform_run(beta, 1e-6, 20.0, &ExactConfig::default()).expect("perturbed run");
        println!(
            "{:5.2} {:10.5} {:10.1e} {:12.5} {:12.5} {:>10}",
            beta,
            run.measured,
            run.gain_spread,
            run.predicted,
            run.rest_scaled,
            run.breakdown.map(|t| format!("{t:.2}")).unwrap_or("-".into())
        );
    }
}
