//! Symbolic expansions in the delay: l(r), d(r), its reversion r(d), and the
//! self-force to a few orders.

use zitterlab::series::{
    d_series, l_series, linear_chain_coeffs, r_of_d, self_force_series, verify_identities, BetaTruncation, Truncation,
};

fn main() {
    let full = Truncation::new(5, BetaTruncation::Degree(3));
    println!("l(r) = {}", l_series(full));
    println!("d(r) = {}", d_series(full).unwrap());
    println!("r(d) = {}", r_of_d(Truncation::new(4, BetaTruncation::FirstOrder)).unwrap());

    println!("\nself-force, first order in beta:");
    for term in self_force_series(3).unwrap() {
        println!("  {term}");
    }

    let chain = linear_chain_coeffs(6).unwrap();
    let shown: Vec<String> = chain.iter().map(|c| c.to_string()).collect();
    println!("\nlinear chain coefficients: {}", shown.join(", "));

    let checks = verify_identities().unwrap();
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    println!("{} identities checked, failed: {failed:?}", checks.len());
}
