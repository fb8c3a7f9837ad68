//! Domain colouring of the characteristic function, written as a PPM.
//!
//! Usage: render [out.ppm] [beta]

use zitterlab::roots::{render_domain_coloring, CharEq, Region};

fn main() {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "domain.ppm".into());
    let beta: f64 = args.next().map(|b| b.parse().expect("beta")).unwrap_or(0.0);
    let eq = CharEq::new(beta).unwrap();
    let region = Region::new(-10.0, 10.0, -100.0, 100.0).unwrap();
    let img = render_domain_coloring(&eq, &region, 200, 400).unwrap();
    std::fs::write(&out, img.to_ppm()).unwrap();
    println!("wrote {out}; phase at the centre {:.4}", img.phase_at(100, 200));
}
