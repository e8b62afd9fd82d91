use modval::mpcore::{make_context, ApproxComplex};
use modval::qseries::{eta, hauptmodul_t, varpi, Period, Tau};
use proptest::prelude::*;
use rug::{Complex, Float, Rational};

fn tau(re: f64, im: f64, prec: u32) -> Tau {
    Tau::from_f64(re, im, prec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eta_translation(re in -0.5f64..0.5, im in 0.6f64..2.0) {
        // η(τ+1) = e^{πi/12} η(τ)
        let c = make_context(30).unwrap();
        let p = c.prec();
        let t = tau(re, im, p);
        let t1 = t.shifted(&Rational::from(1));
        let pi12 = Float::with_val(p, rug::float::Constant::Pi) / 12u32;
        let rot = Complex::with_val(p, (Float::with_val(p, 0), pi12)).exp();
        let lhs = eta(&t1, &c).unwrap();
        let rhs = eta(&t, &c).unwrap().mul_complex(&rot);
        prop_assert!(lhs.digits_matched(&rhs) >= 25, "{}", lhs.digits_matched(&rhs));
    }

    #[test]
    fn eta_inversion(re in -0.5f64..0.5, im in 0.6f64..2.0) {
        // η(−1/τ) = sqrt(−iτ) η(τ)
        let c = make_context(30).unwrap();
        let p = c.prec();
        let t = tau(re, im, p);
        let inv = Tau::new(Complex::with_val(p, -1) / t.value()).unwrap();
        let s = Complex::with_val(p, t.value() * Complex::with_val(p, (0, -1))).sqrt();
        let lhs = eta(&inv, &c).unwrap();
        let rhs = eta(&t, &c).unwrap().mul_complex(&s);
        prop_assert!(lhs.digits_matched(&rhs) >= 25, "{}", lhs.digits_matched(&rhs));
    }

    #[test]
    fn hauptmodul_and_periods_are_periodic(re in -0.5f64..0.5, im in 0.6f64..2.0) {
        let c = make_context(25).unwrap();
        let p = c.prec();
        let a = tau(re, im, p);
        let b = a.shifted(&Rational::from(1));
        let check = |x: ApproxComplex, y: ApproxComplex| x.digits_matched(&y) >= 20;
        prop_assert!(check(hauptmodul_t(&a, &c).unwrap(), hauptmodul_t(&b, &c).unwrap()));
        prop_assert!(check(varpi(Period::Two, &a, &c).unwrap(), varpi(Period::Two, &b, &c).unwrap()));
    }
}
