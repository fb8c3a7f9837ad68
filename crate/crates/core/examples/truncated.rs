//! The truncated third-order model from a small kick: growth at rate 3 until
//! the nonlinear terms take over.

use zitterlab::dynamics::{estimate_growth_rate, integrate_truncated, DynamicsError};
use zitterlab::model::KinematicState;

fn main() {
    let s0 = KinematicState { beta_dot: 1e-6, ..Default::default() };
    let traj = match integrate_truncated(&s0, 12.0, 1e-3) {
        Ok(t) => t,
        Err(DynamicsError::LightBarrier { t, partial }) => {
            println!("light barrier at t = {t:.3}");
            *partial
        }
        Err(e) => panic!("{e}"),
    };
    let g = estimate_growth_rate(&traj, (2.0, 4.0)).unwrap();
    println!("growth rate {:.5} over [2, 4]", g.rate);
    let mut t = 0.0;
    while t <= traj.end() {
        let (x, b, a) = traj.eval(t);
        println!("t {t:5.2}  x {x:+.4e}  beta {b:+.4e}  beta_dot {a:+.4e}");
        t += 1.0;
    }
}
