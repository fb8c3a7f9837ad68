use num::{BigInt, BigRational, One, Zero};
use num_complex::Complex64;
use proptest::prelude::*;

use zitterlab::geometry::{potential_denominator, retarded_l_closed, retarded_r_closed};
use zitterlab::model::{lorentz_gamma, KinematicState};
use zitterlab::potential::{quantum_potential, self_potential_closed, self_potential_series};
use zitterlab::roots::{chareq_eval, chareq_uniform_eval};
use zitterlab::series::{BetaTruncation, KinPoly, TruncatedSeries, Truncation, Var};

const ORDER: usize = 6;

fn trunc() -> Truncation {
    Truncation::new(ORDER, BetaTruncation::Degree(2))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn series_with(c0: BigRational, c1: Option<BigRational>) -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(rational(), ORDER + 1).prop_map(move |mut cs| {
        cs[0] = c0.clone();
        if let Some(c1) = &c1 {
            cs[1] = c1.clone();
        }
        let coeffs = cs.into_iter().map(KinPoly::constant).collect();
        TruncatedSeries::from_coeffs(Var::R, trunc(), coeffs)
    })
}

fn state() -> impl Strategy<Value = KinematicState> {
    (-0.99f64..0.99, -3.0f64..3.0).prop_map(|(b, a)| KinematicState::moving(b, a).unwrap())
}

proptest! {
    #[test]
    fn sqrt_squares_back(s in series_with(BigRational::one(), None)) {
        let r = s.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r).unwrap(), s);
    }

    #[test]
    fn reversion_is_an_involution(
        s in series_with(BigRational::zero(), None),
        c1 in rational().prop_filter("invertible", |c| !c.is_zero()),
    ) {
        let mut cs = s.coeffs().to_vec();
        cs[1] = KinPoly::constant(c1);
        let s = TruncatedSeries::from_coeffs(Var::R, trunc(), cs);
        let inv = s.revert().unwrap();
        prop_assert_eq!(inv.var(), Var::D);
        prop_assert_eq!(s.compose(&inv).unwrap(), TruncatedSeries::identity(Var::D, trunc()));
        prop_assert_eq!(inv.revert().unwrap(), s);
    }

    #[test]
    fn recip_inverts(s in series_with(BigRational::new(BigInt::from(3), BigInt::from(2)), None)) {
        let one = TruncatedSeries::constant(Var::R, trunc(), KinPoly::constant(BigRational::one()));
        prop_assert_eq!(s.mul(&s.recip().unwrap()).unwrap(), one);
    }

    #[test]
    fn delay_geometry_closes(s in state()) {
        let r = retarded_r_closed(&s).unwrap();
        let l = retarded_l_closed(&s).unwrap();
        prop_assert!(((r * r - l * l - 1.0) / (r * r)).abs() < 1e-12);
        let g = s.gamma().unwrap();
        let den = potential_denominator(&s).unwrap();
        prop_assert!(((r - l * s.beta) / den - 1.0).abs() < 1e-12);
        prop_assert!((den * g / (1.0 + s.y().unwrap()).sqrt() - 1.0).abs() < 1e-12);
        prop_assert!(r > 0.0);
    }

    #[test]
    fn mirrored_motion_mirrors_geometry(s in state()) {
        let m = KinematicState::moving(-s.beta, -s.beta_dot).unwrap();
        prop_assert_eq!(retarded_r_closed(&m).unwrap(), retarded_r_closed(&s).unwrap());
        prop_assert_eq!(retarded_l_closed(&m).unwrap(), -retarded_l_closed(&s).unwrap());
    }

    #[test]
    fn gamma_is_even(b in -0.999f64..0.999) {
        prop_assert_eq!(lorentz_gamma(b).unwrap(), lorentz_gamma(-b).unwrap());
        prop_assert!(lorentz_gamma(b).unwrap() >= 1.0);
    }

    #[test]
    fn potential_splits_into_gamma_and_q(s in state()) {
        let u = self_potential_closed(&s).unwrap();
        let q = quantum_potential(&s).unwrap();
        prop_assert!((u - (s.gamma().unwrap() + q)).abs() <= 1e-12 * u.abs().max(1.0));
        prop_assert!(q <= 0.0);
    }

    #[test]
    fn potential_series_converges(b in -0.95f64..0.95, frac in 0.0f64..0.5) {
        // β̇ chosen so that y = γ⁶β̇² = frac.
        let g = lorentz_gamma(b).unwrap();
        let s = KinematicState::moving(b, frac.sqrt() / g.powi(3)).unwrap();
        let exact = self_potential_closed(&s).unwrap();
        prop_assert!((self_potential_series(&s, 30).unwrap() - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn characteristic_function_is_real(re in -5.0f64..5.0, im in -50.0f64..50.0, b in 0.0f64..0.99) {
        let z = Complex64::new(re, im);
        let f = chareq_eval(z, b).unwrap();
        let fc = chareq_eval(z.conj(), b).unwrap();
        prop_assert!((f.conj() - fc).norm() <= 1e-12 * f.norm().max(1.0));
    }

    #[test]
    fn uniform_form_is_a_rescaling(re in -3.0f64..3.0, im in -30.0f64..30.0, b in 0.0f64..0.99) {
        let lambda = Complex64::new(re, im);
        let g = lorentz_gamma(b).unwrap();
        let lhs = chareq_uniform_eval(lambda, b).unwrap();
        let rhs = chareq_eval(lambda * g, b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }
}
