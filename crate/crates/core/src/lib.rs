//! Numerics for a classical electron modelled as two half-charges held a
//! fixed distance d apart (the "dumbbell").
//!
//! Units are c = d = 1 unless a function says otherwise.
//!
//! - [`model`]: physical constants, scales and kinematic state.
//! - [`series`]: exact rational power series in the delay and the
//!   self-force expansion built from them.
//! - [`roots`]: the characteristic function, its zeros and spectrum.
//! - [`geometry`]: closed-form and implicit retarded geometry.
//! - [`dynamics`]: exact propagation of the delay equation, the truncated
//!   model and growth/spectrum diagnostics.
//! - [`potential`]: self-potential, its series and the double well.
//! - [`cli`]: the `zitterlab` command line and its report.
//!
//! Examples, one per area (`cargo run --release --example NAME`):
//! `roots`, `render`, `series`, `potential`, `duffing`, `simulate`,
//! `truncated`, `uniform`.

pub mod geometry;
pub mod model;
pub mod series;
pub mod potential;
pub mod roots;
pub mod dynamics;
pub mod cli;
