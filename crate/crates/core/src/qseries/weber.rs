use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::{eta, Tau};
use crate::mpcore::{ApproxComplex, PrecisionContext};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeberKind {
    F0,
    F1,
    F2,
}

/// Weber's functions
/// f0(τ) = e^{-πi/24} η((τ+1)/2)/η(τ), f1(τ) = η(τ/2)/η(τ), f2(τ) = √2 η(2τ)/η(τ).
pub fn weber(kind: WeberKind, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec();
    let den = eta(tau, ctx)?;
    match kind {
        WeberKind::F0 => {
            let t = tau.shifted(&Rational::from(1)).scaled(&Rational::from((1, 2)));
            let num = eta(&t, ctx)?;
            let ang = -Float::with_val(p, Constant::Pi) / 24u32;
            let ph = Complex::with_val(p, (0, ang)).exp();
            Ok((&num / &den).mul_complex(&ph))
        }
        WeberKind::F1 => {
            let num = eta(&tau.scaled(&Rational::from((1, 2))), ctx)?;
            Ok(&num / &den)
        }
        WeberKind::F2 => {
            let num = eta(&tau.scaled(&Rational::from(2)), ctx)?;
            Ok((&num / &den).mul_float(&Float::with_val(p, 2).sqrt()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use crate::mpcore::make_context;
    use rand::{Rng, SeedableRng};

    #[test]
    fn f0_at_sqrt_minus_three() {
        let c = make_context(100).unwrap();
        let t = Tau::quadratic(0, 3, 1, c.prec()).unwrap();
        let v = weber(WeberKind::F0, &t, &c).unwrap();
        let want = Float::with_val(c.prec(), 2).pow(Float::with_val(c.prec(), 1) / 3u32);
        let want = ApproxComplex::exact(Complex::with_val(c.prec(), (want, 0)));
        assert!(v.digits_matched(&want) >= 100);
    }

    #[test]
    fn product_is_sqrt2_and_f0_inversion() {
        let c = make_context(60).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let sqrt2 = ApproxComplex::exact(Complex::with_val(c.prec(), (Float::with_val(c.prec(), 2).sqrt(), 0)));
        for _ in 0..3 {
            let t = Tau::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..1.5), c.prec()).unwrap();
            let a = weber(WeberKind::F0, &t, &c).unwrap();
            let b = weber(WeberKind::F1, &t, &c).unwrap();
            let d = weber(WeberKind::F2, &t, &c).unwrap();
            assert!((&(&a * &b) * &d).digits_matched(&sqrt2) >= 60);
            let ai = weber(WeberKind::F0, &t.neg_inv(), &c).unwrap();
            assert!(ai.digits_matched(&a) >= 60);
        }
    }
}
