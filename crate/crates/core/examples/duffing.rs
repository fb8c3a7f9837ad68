//! The double-well potential behind the rest instability, in model units
//! and in SI.

use zitterlab::model::{electron_size, PhysicalConstants};
use zitterlab::potential::{duffing_energy_scale, duffing_force, duffing_potential, duffing_stationary_points};

fn main() {
    let k = PhysicalConstants::codata2018();
    let [left, origin, right] = duffing_stationary_points();
    println!("stationary points {left:.6} {origin:.6} {right:.6}");
    println!("barrier height {:.6}", duffing_potential(origin) - duffing_potential(right));
    println!(
        "length scale {:.4e} m, energy scale {:.4e} J",
        electron_size(&k),
        duffing_energy_scale(&k)
    );
    for i in 0..=12 {
        let x = -1.5 + 0.25 * i as f64;
        println!("{x:6.2} {:12.6} {:12.6}", duffing_potential(x) + 0.0, duffing_force(x) + 0.0);
    }
}
