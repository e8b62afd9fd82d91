use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::{eta_quotient_eval, lambert_sum, EtaQuotientSpec, Tau};
use crate::mpcore::{ApproxComplex, PrecisionContext};
use crate::{Error, Result};

fn spec(f: &[(u32, i32)]) -> EtaQuotientSpec {
    EtaQuotientSpec::new(f.to_vec()).expect("static eta spec is valid")
}

/// t(τ) = -(η(τ)η(3τ) / (η(2τ)η(6τ)))⁶.
pub fn hauptmodul_t(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let v = eta_quotient_eval(&spec(&[(1, 6), (2, -6), (3, 6), (6, -6)]), tau, ctx)?;
    Ok(-v)
}

/// The weight-2 periods ϖ₁ and ϖ₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    /// (η(2τ)η(6τ))⁴ / (η(τ)η(3τ))²
    One,
    /// (η(τ)η(3τ))⁴ / (η(2τ)η(6τ))²
    Two,
}

pub fn varpi(which: Period, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let s = match which {
        Period::One => spec(&[(1, -2), (2, 4), (3, -2), (6, 4)]),
        Period::Two => spec(&[(1, 4), (2, -2), (3, 4), (6, -2)]),
    };
    eta_quotient_eval(&s, tau, ctx)
}

/// E₂ by its Lambert series (no modular reduction).
fn e2(tau: &Tau, prec: u32) -> Result<Complex> {
    let (l, _) = lambert_sum(1, tau, prec)?;
    Ok(Complex::with_val(prec, 1 - l * 24u32))
}

/// d/dτ log t = (πi/2)(E₂(τ) + 3E₂(3τ) − 2E₂(2τ) − 6E₂(6τ)).
pub fn dlog_t(tau: &Tau, prec: u32) -> Result<Complex> {
    let p = prec + 8;
    let mut s = Complex::with_val(p, 0);
    for (m, w) in [(1u32, 1i32), (3, 3), (2, -2), (6, -6)] {
        let v = e2(&tau.scaled(&Rational::from(m)), p)?;
        s += v * w;
    }
    let half_pi_i = Complex::with_val(p, (0, Float::with_val(p, Constant::Pi) / 2u32));
    Ok(Complex::with_val(prec, s * half_pi_i))
}

/// Solve t(τ) = target by Newton's method on τ starting from `seed`.
pub fn invert_t(target: &Complex, seed: &Tau, ctx: &PrecisionContext) -> Result<Tau> {
    let prec = ctx.prec();
    let p = prec + 16;
    let ictx = PrecisionContext::with_guard(ctx.decimal_digits() + 5, ctx.guard_digits())?;
    let mut z = Complex::with_val(p, seed.value());
    let target = Complex::with_val(p, target);
    let tol = Float::with_val(64, Float::with_val(64, 1) >> (prec as i32 - 8));
    let max_iter = 200;
    for _ in 0..max_iter {
        let tau = Tau::new(z.clone())?;
        let t = hauptmodul_t(&tau, &ictx)?.into_mid();
        let d = dlog_t(&tau, p)?;
        let deriv = Complex::with_val(p, &t * &d);
        let mut step = Complex::with_val(p, Complex::with_val(p, &t - &target) / &deriv);
        let size = Float::with_val(64, step.abs_ref());
        if size > 0.1 {
            step *= Float::with_val(p, 0.1) / &size;
        }
        let mut next = Complex::with_val(p, &z - &step);
        while *next.imag() <= 0 {
            step /= 2u32;
            next = Complex::with_val(p, &z - &step);
        }
        z = next;
        if size < tol {
            return Tau::new(Complex::with_val(prec, z));
        }
    }
    Err(Error::NoConvergence { what: "invert_t Newton iteration", limit: max_iter })
}

/// A CM point τ = (b + √−d)/den with its hauptmodul value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmPoint {
    pub t: i64,
    pub b: i64,
    pub d: u64,
    pub den: i64,
}

impl CmPoint {
    pub fn tau(&self, prec: u32) -> Tau {
        Tau::quadratic(self.b, self.d, self.den, prec).expect("CM point lies in the upper half-plane")
    }

    pub fn describe(&self) -> String {
        format!("({} + sqrt(-{}))/{}", self.b, self.d, self.den)
    }
}

const CM_TABLE: [CmPoint; 6] = [
    CmPoint { t: 1, b: -3, d: 15, den: 24 },
    CmPoint { t: -32, b: 0, d: 3, den: 3 },
    CmPoint { t: 4, b: -3, d: 3, den: 12 },
    CmPoint { t: -2, b: 0, d: 3, den: 6 },
    CmPoint { t: 16, b: 3, d: 3, den: 6 },
    CmPoint { t: 64, b: -3, d: 15, den: 6 },
];

pub fn cm_points() -> &'static [CmPoint] {
    &CM_TABLE
}

pub fn cm_point(t: i64) -> Result<CmPoint> {
    CM_TABLE.iter().copied().find(|c| c.t == t).ok_or(Error::Unknown { kind: "CM value", name: t.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::{make_context, ApproxReal};
    use crate::qseries::{weber, WeberKind};
    use rand::{Rng, SeedableRng};

    #[test]
    fn cm_table_values() {
        let c = make_context(100).unwrap();
        for cm in cm_points() {
            let v = hauptmodul_t(&cm.tau(c.prec()), &c).unwrap();
            let want = ApproxComplex::exact(Complex::with_val(c.prec(), (cm.t, 0)));
            assert!(v.digits_matched(&want) >= 98, "t = {}", cm.t);
        }
    }

    #[test]
    fn inversion_round_trip() {
        let c = make_context(80).unwrap();
        let cm = cm_point(1).unwrap();
        let seed = Tau::new(Complex::with_val(c.prec(), cm.tau(c.prec()).value() + Complex::with_val(c.prec(), (0, 0.01)))).unwrap();
        let tau = invert_t(&Complex::with_val(c.prec(), 1), &seed, &c).unwrap();
        let d = Float::with_val(c.prec(), Complex::with_val(c.prec(), tau.value() - cm.tau(c.prec()).value()).abs_ref());
        assert!(d < 1e-78);
        let seed = Tau::from_f64(0.0, 0.3, c.prec()).unwrap();
        let tau = invert_t(&Complex::with_val(c.prec(), -2), &seed, &c).unwrap();
        let t = hauptmodul_t(&tau, &c).unwrap();
        assert!(t.re().digits_matched(&ApproxReal::exact(Float::with_val(c.prec(), -2))) >= 78);
    }

    #[test]
    fn fricke_relations_random() {
        let c = make_context(60).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let t = Tau::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.2..0.9), c.prec()).unwrap();
            // ϖ₁(w₆τ) = −(3/4) τ² ϖ₂(τ)
            let a = varpi(Period::One, &t.fricke(6), &c).unwrap();
            let b = varpi(Period::Two, &t, &c).unwrap();
            let t2 = Complex::with_val(c.prec(), t.value().square_ref()) * Float::with_val(c.prec(), -0.75);
            assert!(a.digits_matched(&b.mul_complex(&t2)) >= 58);
            // η(m w_6 τ) = sqrt(-i (6/m) τ) η((6/m) τ)
            for m in [1u32, 2, 3, 6] {
                let lhs = crate::qseries::eta(&t.fricke(6).scaled(&Rational::from(m)), &c).unwrap();
                let k = Rational::from((6, m));
                let arg = Complex::with_val(c.prec(), t.value() * Float::with_val(c.prec(), &k)) * Complex::with_val(c.prec(), (0, -1));
                let rhs = crate::qseries::eta(&t.scaled(&k), &c).unwrap().mul_complex(&arg.sqrt());
                assert!(lhs.digits_matched(&rhs) >= 58);
            }
        }
    }

    #[test]
    fn varpi2_weber_form() {
        let c = make_context(60).unwrap();
        let t = Tau::from_f64(0.13, 0.41, c.prec()).unwrap();
        let v = varpi(Period::Two, &t, &c).unwrap();
        let e1 = crate::qseries::eta(&t, &c).unwrap();
        let e3 = crate::qseries::eta(&t.scaled(&Rational::from(3)), &c).unwrap();
        let f1 = weber(WeberKind::F2, &t, &c).unwrap();
        let f3 = weber(WeberKind::F2, &t.scaled(&Rational::from(3)), &c).unwrap();
        let r = &(&e1 * &e3) / &(&f1 * &f3);
        assert!(v.digits_matched(&(&r * &r).mul_i64(4)) >= 58);
    }
}
