//! Self-potential U against its series in y = γ⁶β̇², and the quantum-like
//! remainder Q = U − γ.

use zitterlab::model::KinematicState;
use zitterlab::potential::{q_coeff, quantum_potential, self_potential_closed, self_potential_partial_sums};

fn main() {
    let qs: Vec<String> = (1..=6).map(|n| q_coeff(n).unwrap().to_string()).collect();
    println!("series coefficients: {}", qs.join(", "));
    println!("{:>5} {:>6} {:>14} {:>14} {:>14}", "beta", "bdot", "U", "U (8 terms)", "Q");
    for (beta, bd) in [(0.0, 0.0), (0.0, 0.3), (0.5, 0.1), (0.8, 0.02), (-0.6, 0.05)] {
        let s = KinematicState::moving(beta, bd).unwrap();
        let sums = self_potential_partial_sums(&s, 8).unwrap();
        println!(
            "{beta:5.2} {bd:6.3} {:14.10} {:14.10} {:14.6e}",
            self_potential_closed(&s).unwrap(),
            sums.last().unwrap(),
            quantum_potential(&s).unwrap()
        );
    }
}
