//! Characteristic roots at rest and the spectrum at a few speeds.

use std::time::Instant;
use zitterlab::roots::{find_roots, rest_instability_rate, spectrum, winding_count, CharEq, Region};

fn main() {
    let eq = CharEq::new(0.0).unwrap();
    let t = Instant::now();
    let set = find_roots(&eq, &Region::new(-1.0, 3.0, -1.0, 1.0).unwrap(), 10.0).unwrap();
    println!("rest roots near the origin ({:?}):", t.elapsed());
    for r in &set.roots {
        println!("  {:+.15} {:+.15}i  residual {:.1e}  multiplicity {}", r.value.re, r.value.im, r.residual, r.multiplicity);
    }
    println!("real unstable rate {:.13}", rest_instability_rate());

    let t = Instant::now();
    let big = Region::new(-10.0, 10.0, -100.0, 100.0).unwrap();
    let set = find_roots(&eq, &big, 10.0).unwrap();
    println!(
        "{} roots in [-10,10]x[-100,100], winding count {} ({:?}); seeds {} non-converged {}",
        set.count_with_multiplicity(),
        winding_count(&eq, &big).unwrap(),
        t.elapsed(),
        set.stats.seeds,
        set.stats.non_converged
    );

    for beta in [0.0, 0.3, 0.6, 0.9] {
        let t = Instant::now();
        let s = spectrum(beta, 10).unwrap();
        let etas: Vec<String> = s.etas.iter().map(|e| format!("{e:.4}")).collect();
        println!("beta {beta}: eta = [{}]", etas.join(", "));
        println!("  slope {:.5} intercept {:.5} R^2 {:.7} ({:?})", s.slope, s.intercept, s.r_squared, t.elapsed());
    }
}
