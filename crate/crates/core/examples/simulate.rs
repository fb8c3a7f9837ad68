//! Exact propagation from a small kick along the growing mode of rest.

use std::time::Instant;
use zitterlab::dynamics::{estimate_growth_rate, linear_window, max_residual, propagate_exact, ExactConfig, SeedHistory};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let t_end = args.first().copied().unwrap_or(100.0);
    let sigma = args.get(1).copied().unwrap_or(0.05);
    let deg = args.get(2).copied().unwrap_or(4.0) as usize;
    let dt = args.get(3).copied().unwrap_or(1e-3);
    let cfg = ExactConfig { t_end, smoothing: sigma, fit_degree: deg, dt, ..Default::default() };
    let t = Instant::now();
    let (traj, status) = match propagate_exact(&SeedHistory::mode_kick(1e-6), &cfg) {
        Ok(tr) => (tr, "completed".to_string()),
        Err(e) => (e.partial().cloned().expect("partial"), e.to_string()),
    };
    println!("{status}; reached t = {:.3} in {:?}", traj.end(), t.elapsed());
    let w = linear_window(&traj, 1e-6).unwrap();
    let g = estimate_growth_rate(&traj, w).unwrap();
    println!("growth rate {:.5} +- {:.1e} over [{:.2}, {:.2}]", g.rate, g.stderr, w.0, w.1);
    let mut t0 = 0.0;
    while t0 < traj.end() - 0.5 {
        let sub = traj.window(t0, t0 + 0.5).unwrap();
        let r = max_residual(&sub, sub.start(), 7).ok();
        let hist = traj.window(traj.start(), t0 + 0.5).unwrap();
        let res = max_residual(&hist, t0, 7).unwrap();
        let bmax = sub.betas().iter().fold(0.0f64, |m, b| m.max(b.abs()));
        println!("t {:5.2}  max|beta| {:.3e}  max residual {:.2e} {}", t0, bmax, res, r.map(|_| "").unwrap_or(""));
        t0 += 0.5;
    }
}
