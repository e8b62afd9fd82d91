use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use super::{q_float, Consts, Relation};
use crate::mpcore::quad::exp_sinh;
use crate::mpcore::{bernoulli, ApproxComplex, PrecisionContext, Radius};
use crate::qseries::{eisenstein_qexp, lambert_sum, QExpansion, Tau};
use crate::{Error, Result};

/// σ_t(n) = Σ_{d|n} d^t, exact for negative `t` as well.
pub fn sigma_power(t: i32, n: u64) -> Rational {
    assert!(n >= 1, "sigma_power needs n >= 1");
    let mut s = Rational::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += power(d, t);
            let e = n / d;
            if e != d {
                s += power(e, t);
            }
        }
        d += 1;
    }
    s
}

fn power(d: u64, t: i32) -> Rational {
    let p = Integer::from(d).pow(t.unsigned_abs());
    if t >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1), p))
    }
}

/// F_s(τ) = Σ σ_{-s}(n) q^n, summed as the Lambert series Σ n^{-s} q^n/(1-q^n).
pub fn grosswald_f(s: u32, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    if s < 3 || s.is_multiple_of(2) {
        return Err(Error::Domain(format!("F_s needs odd s >= 3, got {s}")));
    }
    let p = ctx.prec();
    let (v, tail) = lambert_sum(-(s as i32), tau, p + 8)?;
    let mid = Complex::with_val(p, v);
    let rad = tail.add(&Radius::ulp_complex(&mid, p).scale_f64(16.0));
    Ok(ApproxComplex::new(mid, rad))
}

pub fn f3(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    grosswald_f(3, tau, ctx)
}

/// F_3 through the Eichler integral of E_4:
/// `((2πi)³B₄/16) ∫_τ^{i∞} (E₄(z)−1)(z−τ)² dz` with z = τ + iy.
pub fn grosswald_f_integral(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec() + 16;
    let b4 = bernoulli(4);
    let e4_factor = Float::with_val(p, &(-Rational::from(8) / &b4));
    let t0 = Complex::with_val(p, tau.value());
    let integrand = |y: &Float| -> Result<Complex> {
        let z = Complex::with_val(p, &t0 + Complex::with_val(p, (0, y)));
        let (l, _) = lambert_sum(3, &Tau::new(z)?, p)?;
        let y2 = Float::with_val(p, y.square_ref());
        Ok(l * &e4_factor * y2)
    };
    let zero = Float::with_val(p, 0);
    let integral = exp_sinh(integrand, &zero, p, ctx.tol_log2())?;
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let cube = Complex::with_val(p, (0, -Float::with_val(p, two_pi.pow(3u32))));
    let pre = cube * Float::with_val(p, &b4) / 16u32;
    // dz (z−τ)² = i dy · (iy)² = −i y² dy
    let pre = pre * Complex::with_val(p, (0, -1));
    let v = integral.mul_complex(&pre);
    Ok(ApproxComplex::new(Complex::with_val(ctx.prec(), v.mid()), v.rad().clone()))
}

/// F₃(τ) − τ²F₃(−1/τ) minus the closed-form right side of Grosswald's inversion law.
pub fn inversion_defect(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let k = Consts::new(ctx)?;
    let p = k.prec;
    let t = tau.value();
    let t2 = Complex::with_val(p, t.square_ref());
    let lhs = &f3(tau, ctx)? - &f3(&tau.neg_inv(), ctx)?.mul_complex(&t2);
    let z = k.zeta3.to_complex().mul_complex(&Complex::with_val(p, (&t2 - Complex::with_val(p, 1)) / 2u32));
    let mut poly = Complex::with_val(p, 0);
    for j in 0..=2u32 {
        let c = (bernoulli(2 * j) * bernoulli(4 - 2 * j))
            / Rational::from(Integer::factorial(2 * j)) / Rational::from(Integer::factorial(4 - 2 * j));
        let tj = Complex::with_val(p, t).pow(2 * j);
        poly += tj * Float::with_val(p, &c);
    }
    let pi3 = k.pi_pow(3).mul_i64(-8);
    let coef = Complex::with_val(p, Complex::with_val(p, (0, 1)) / Complex::with_val(p, t * 2u32)) * poly;
    let r = pi3.to_complex().mul_complex(&coef);
    Ok(&(&lhs - &z) - &r)
}

/// F₃(τ+½) + F₃(τ) − (9/4)F₃(2τ) + (1/4)F₃(4τ).
pub fn halfshift_defect(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec();
    let half = Rational::from((1, 2));
    let a = f3(&tau.shifted(&half), ctx)?;
    let b = f3(tau, ctx)?;
    let c = f3(&tau.scaled(&Rational::from(2)), ctx)?;
    let d = f3(&tau.scaled(&Rational::from(4)), ctx)?;
    let s = &(&a + &b) - &c.mul_float(&q_float(p, 9, 4));
    Ok(&s + &d.mul_float(&q_float(p, 1, 4)))
}

/// The four closed evaluations of F₃ at CM points of discriminant −3 and −15.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaIdentity {
    /// F₃(√−3/2+½) = √3π³/90 − ζ(3)/2
    A,
    /// F₃(√−3/6+½) = 7√3π³/810 − ζ(3)/2
    B,
    /// 8(3F₃(√−3/6) − F₃(√−3/2)) − 9(3F₃(√−3/3) − F₃(√−3)) = 7√3π³/135 + ζ(3)
    C,
    /// 24F₃(√−15/6+½) − 8F₃(√−15/2+½) − 3F₃(√−15/3) + F₃(√−15) = π³/√15 − 7ζ(3)
    D,
}

fn combo(k: &Consts, terms: &[(i64, &ApproxComplex)]) -> ApproxComplex {
    let mut acc = ApproxComplex::exact(Complex::with_val(k.prec, 0));
    for (c, v) in terms {
        acc = &acc + &v.mul_i64(*c);
    }
    acc
}

pub fn f3_lemma(which: LemmaIdentity, ctx: &PrecisionContext) -> Result<Relation> {
    let k = Consts::new(ctx)?;
    let p = k.prec;
    let f = |b: i64, d: u64, den: i64| f3(&k.tau(b, d, den), ctx);
    let s3pi3 = k.pi_pow(3).mul_float(&k.sqrt(3));
    let z3 = &k.zeta3;
    let rel = match which {
        LemmaIdentity::A => Relation::new(
            "F3(sqrt(-3)/2+1/2)",
            f(1, 3, 2)?,
            (&s3pi3.div_i64(90) - &z3.div_i64(2)).to_complex(),
        ),
        LemmaIdentity::B => Relation::new(
            "F3(sqrt(-3)/6+1/2)",
            f(3, 3, 6)?,
            (&s3pi3.mul_i64(7).div_i64(810) - &z3.div_i64(2)).to_complex(),
        ),
        LemmaIdentity::C => {
            let (a, b, c, d) = (f(0, 3, 6)?, f(0, 3, 2)?, f(0, 3, 3)?, f(0, 3, 1)?);
            Relation::new(
                "8(3F3(sqrt(-3)/6)-F3(sqrt(-3)/2))-9(3F3(sqrt(-3)/3)-F3(sqrt(-3)))",
                combo(&k, &[(24, &a), (-8, &b), (-27, &c), (9, &d)]),
                (&s3pi3.mul_i64(7).div_i64(135) + z3).to_complex(),
            )
        }
        LemmaIdentity::D => {
            let (a, b, c, d) = (f(3, 15, 6)?, f(1, 15, 2)?, f(0, 15, 3)?, f(0, 15, 1)?);
            let rhs = &k.pi_pow(3).mul_float(&Float::with_val(p, k.sqrt(15).recip_ref())) - &z3.mul_i64(7);
            Relation::new(
                "24F3(sqrt(-15)/6+1/2)-8F3(sqrt(-15)/2+1/2)-3F3(sqrt(-15)/3)+F3(sqrt(-15))",
                combo(&k, &[(24, &a), (-8, &b), (-3, &c), (1, &d)]),
                rhs.to_complex(),
            )
        }
    };
    Ok(rel)
}

/// The intermediate relations among F₃ values at points of discriminant −15
/// that reduce the level-15 evaluation to a single inversion.
pub fn f3_chain_sqrtm15(ctx: &PrecisionContext) -> Result<Vec<Relation>> {
    let k = Consts::new(ctx)?;
    let p = k.prec;
    let f = |b: i64, d: u64, den: i64| f3(&k.tau(b, d, den), ctx);
    let s15 = k.sqrt(15);
    let pi3 = k.pi_pow(3).to_complex();
    let z3 = k.zeta3.to_complex();
    // (x√15 + y i)/den
    let cx = |x: i64, y: i64, den: i64| {
        Complex::with_val(p, (Float::with_val(p, &s15 * x) / den, Float::with_val(p, y) / den))
    };
    // (x√−15 + y)/den = (y + x√15 i)/den
    let cr = |x: i64, y: i64, den: i64| {
        Complex::with_val(p, (Float::with_val(p, y) / den, Float::with_val(p, &s15 * x) / den))
    };

    let f_6h = f(3, 15, 6)?;
    let f_4q = f(1, 15, 4)?;
    let f_3 = f(0, 15, 3)?;
    let f_3p1 = f(3, 15, 3)?;
    let f_8_5 = f(5, 15, 8)?;
    let f_8_1 = f(1, 15, 8)?;
    let f_2h = f(1, 15, 2)?;
    let f_1 = f(0, 15, 1)?;
    let f_4m = f(-1, 15, 4)?;

    let mut out = Vec::new();
    let rhs1 = &(&f_4q.mul_complex(&cr(4, -4, 1)) + &pi3.mul_complex(&cx(37, -81, 270))) + &z3.mul_complex(&cr(2, -14, 1));
    out.push(Relation::new("24F3(sqrt(-15)/6+1/2)", f_6h.mul_i64(24), rhs1));

    out.push(Relation::new("-3F3(sqrt(-15)/3) by periodicity", f_3.mul_i64(-3), f_3p1.mul_i64(-3)));

    let rhs2 = &(&f_8_5.mul_complex(&cr(-2, 2, 1)) - &pi3.mul_complex(&cx(97, -621, 4320))) - &z3.mul_complex(&cr(2, -5, 2));
    out.push(Relation::new("-3F3(sqrt(-15)/3+1)", f_3p1.mul_i64(-3), rhs2));

    let rhs3 = &(&f_4q.mul_float(&q_float(p, 9, 4)) - &f_8_1) - &f_2h.mul_float(&q_float(p, 1, 4));
    out.push(Relation::new("F3(sqrt(-15)/8+5/8)", f_8_5.clone(), rhs3));

    let rhs4 = &(&f_2h.mul_complex(&cr(1, -7, 32)) + &pi3.mul_complex(&cx(392, -72, 61440))) + &z3.mul_complex(&cr(1, -39, 64));
    out.push(Relation::new("F3(sqrt(-15)/8+1/8)", f_8_1.clone(), rhs4));

    let rhs5 = &(&f_2h.mul_i64(9) - &f_4q.mul_i64(4)) - &f_4m.mul_i64(4);
    out.push(Relation::new("F3(sqrt(-15))", f_1, rhs5));
    Ok(out)
}

/// σ(q) = (−E₄(τ) + 16E₄(2τ) + 9E₄(3τ) − 144E₄(6τ))/5 to `n` coefficients.
pub fn sigma_weight_qexp(n: usize) -> Result<QExpansion> {
    if n == 0 {
        return Err(Error::Domain("sigma_weight_qexp needs n >= 1".into()));
    }
    let e4 = eisenstein_qexp(4, n)?;
    let mut acc = e4.scale(&Rational::from(-1));
    for (m, c) in [(2usize, 16i64), (3, 9), (6, -144)] {
        acc = &acc + &e4.dilate(m).scale(&Rational::from(c));
    }
    Ok(acc.truncate(n).scale(&Rational::from((1, 5))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sigma_power_examples() {
        assert_eq!(sigma_power(-3, 4), Rational::from((73, 64)));
        assert_eq!(sigma_power(-3, 1), 1);
        assert_eq!(sigma_power(3, 6), 252);
        assert_eq!(sigma_power(0, 36), 9);
    }

    #[test]
    fn f3_matches_double_series() {
        let c = make_context(30).unwrap();
        let t = Tau::from_f64(0.1, 0.7, c.prec()).unwrap();
        let q = t.q(c.prec());
        let mut s = Complex::with_val(c.prec(), 0);
        for n in 1..200u32 {
            s += Complex::with_val(c.prec(), q.clone().pow(n)) * Float::with_val(c.prec(), &sigma_power(-3, n as u64));
        }
        let v = f3(&t, &c).unwrap();
        assert!(v.digits_matched(&ApproxComplex::rounded(s)) >= 30);
    }

    #[test]
    fn f3_periodic() {
        let c = make_context(50).unwrap();
        let t = Tau::from_f64(0.23, 0.4, c.prec()).unwrap();
        let a = f3(&t, &c).unwrap();
        let b = f3(&t.shifted(&Rational::from(1)), &c).unwrap();
        assert!(a.digits_matched(&b) >= 50);
    }

    #[test]
    fn integral_path_agrees_with_series() {
        let c = make_context(40).unwrap();
        for (re, im) in [(0.0, 1.0), (0.5, 0.5)] {
            let t = Tau::from_f64(re, im, c.prec()).unwrap();
            let a = f3(&t, &c).unwrap();
            let b = grosswald_f_integral(&t, &c).unwrap();
            assert!(a.digits_matched(&b) >= 38, "tau = {re} + {im}i: {}", a.digits_matched(&b));
        }
    }

    #[test]
    fn transformation_laws_random() {
        let c = make_context(60).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let t = Tau::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.4), c.prec()).unwrap();
            assert!(inversion_defect(&t, &c).unwrap().digits_zero() >= 58);
            assert!(halfshift_defect(&t, &c).unwrap().digits_zero() >= 58);
        }
    }

    #[test]
    fn lemma_and_chain() {
        let c = make_context(60).unwrap();
        for w in [LemmaIdentity::A, LemmaIdentity::B, LemmaIdentity::C, LemmaIdentity::D] {
            let r = f3_lemma(w, &c).unwrap();
            assert!(r.digits() >= 58, "{w:?}: {}", r.digits());
        }
        for r in f3_chain_sqrtm15(&c).unwrap() {
            assert!(r.digits() >= 58, "{}: {}", r.name, r.digits());
        }
    }

    #[test]
    fn sigma_weight_start() {
        let s = sigma_weight_qexp(10).unwrap();
        assert_eq!(*s.coeff(0), -24);
        let e4 = eisenstein_qexp(4, 10).unwrap();
        // only −E₄(τ) contributes to q¹
        assert_eq!(*s.coeff(1), (-e4.coeff(1).clone()) / 5);
        assert_eq!(*s.coeff(1), -48);
    }
}
