use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{bernoulli, ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// ln Γ(x) for real x > 0 by shifting x up to roughly 0.37·digits and
/// applying the Stirling series, whose remainder is bounded by the first
/// omitted term.
pub fn ln_gamma_real(x: &Float, prec: u32) -> Result<(Float, Radius)> {
    if *x <= 0 {
        return Err(Error::Domain("ln_gamma_real needs x > 0".into()));
    }
    let p = prec + 24;
    let digits = p as f64 * std::f64::consts::LOG10_2;
    let zmin = (0.37 * (digits + 5.0)).ceil() + 1.0;
    let shift = if x.to_f64() < zmin { (zmin - x.to_f64()).ceil() as u64 } else { 0 };
    let mut z = Float::with_val(p, x);
    let mut prod = Float::with_val(p, 1);
    for _ in 0..shift {
        prod *= &z;
        z += 1u32;
    }
    let half = Float::with_val(p, 0.5);
    let lnz = Float::with_val(p, z.ln_ref());
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let mut s = Float::with_val(p, &z - &half) * &lnz - &z + Float::with_val(p, two_pi.ln_ref()) / 2u32;
    let zinv = Float::with_val(p, z.recip_ref());
    let z2inv = Float::with_val(p, zinv.square_ref());
    let mut zpow = zinv.clone(); // z^(1-2k)
    let target = -(p as f64);
    let mut k = 1u32;
    let bound = loop {
        let b = Float::with_val(p, &bernoulli(2 * k));
        let term = b / ((2 * k) as u64 * (2 * k - 1) as u64) * &zpow;
        let mag = term.clone().abs().log2().to_f64();
        if mag < target {
            break Radius::from_float(&term);
        }
        s += &term;
        k += 1;
        if k > 4 * p {
            return Err(Error::NoConvergence { what: "Stirling series", limit: k as usize });
        }
        zpow *= &z2inv;
    };
    let lnprod = Float::with_val(p, prod.ln_ref());
    let mut out = s - lnprod;
    out.set_prec(prec);
    let rad = bound.add(&Radius::pow2(-(p as i64) + 10)).add(&Radius::ulp(&out, prec));
    Ok((out, rad))
}

/// Γ(p/q) for p/q > 0.
pub fn gamma_rational(p: i64, q: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if q == 0 {
        return Err(Error::Domain("gamma_rational: zero denominator".into()));
    }
    let r = Rational::from((p, q));
    if r <= 0 {
        return Err(Error::Domain(format!("gamma_rational needs a positive argument, got {r}")));
    }
    let prec = ctx.prec();
    let x = Float::with_val(prec + 24, &r);
    let (lg, rad) = ln_gamma_real(&x, prec + 16)?;
    let lg = ApproxReal::new(lg, rad);
    let v = lg.exp();
    let mut mid = v.mid().clone();
    mid.set_prec(prec);
    let rad = v.rad().add(&Radius::ulp(&mid, prec));
    Ok(ApproxReal::new(mid, rad))
}

/// E1(x) = ∫_x^∞ e^-t/t dt for x > 0.
///
/// Power series for x < 2 (little cancellation), continued fraction beyond.
pub fn expint_e1(x: &Float, prec: u32) -> Result<(Float, Radius)> {
    if *x <= 0 {
        return Err(Error::Domain("expint_e1 needs x > 0".into()));
    }
    let xf = x.to_f64();
    let target = -(prec as f64) - 8.0;
    if xf < 2.0 {
        let p = prec + 24;
        let xx = Float::with_val(p, x);
        let mut term = Float::with_val(p, 1);
        let mut sum = Float::with_val(p, 0);
        let mut k = 1u64;
        loop {
            term *= &xx;
            term /= k;
            let t = Float::with_val(p, &term / k);
            if k % 2 == 1 {
                sum += &t;
            } else {
                sum -= &t;
            }
            if t.is_zero() || t.clone().abs().log2().to_f64() < target - 4.0 {
                break;
            }
            k += 1;
            if k > 100_000 {
                return Err(Error::NoConvergence { what: "E1 series", limit: k as usize });
            }
        }
        let euler = Float::with_val(p, Constant::Euler);
        let mut out = sum - euler - Float::with_val(p, xx.ln_ref());
        out.set_prec(prec);
        let rad = Radius::pow2(-(prec as i64) - 6).add(&Radius::ulp(&out, prec));
        return Ok((out, rad));
    }
    // e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))), modified Lentz
    let p = prec + 32;
    let xx = Float::with_val(p, x);
    let tiny = Float::with_val(p, Float::with_val(p, 1) >> (p as i32));
    let mut f = Float::with_val(p, &xx + 1u32);
    let mut c = f.clone();
    let mut d = Float::with_val(p, 0);
    let mut j = 1u64;
    loop {
        let a = Float::with_val(p, -((j * j) as f64));
        let b = Float::with_val(p, &xx + (2 * j + 1));
        d = Float::with_val(p, &a * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = Float::with_val(p, &a / &c) + &b;
        if c.is_zero() {
            c = tiny.clone();
        }
        d.recip_mut();
        let delta = Float::with_val(p, &c * &d);
        f *= &delta;
        let dev = Float::with_val(p, &delta - 1u32).abs();
        if dev.is_zero() || dev.log2().to_f64() < target - 4.0 {
            break;
        }
        j += 1;
        if j > 2_000_000 {
            return Err(Error::NoConvergence { what: "E1 continued fraction", limit: j as usize });
        }
    }
    let ex = Float::with_val(p, (-xx).exp_ref());
    let mut out = ex / f;
    out.set_prec(prec);
    let rad = Radius::ulp(&out, prec).scale_f64(64.0);
    Ok((out, rad))
}

/// Γ(n, x) for integer n ≥ -8 and x > 0.
///
/// For n ≥ 1 this is (n-1)! e^-x Σ_{k<n} x^k/k!; n = 0 is E1(x) and lower
/// orders follow from Γ(a, x) = (Γ(a+1, x) - x^a e^-x) / a.
pub fn incomplete_gamma_int(n: i64, x: &Float, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if *x <= 0 {
        return Err(Error::Domain("incomplete_gamma_int needs x > 0".into()));
    }
    if n < -8 {
        return Err(Error::Domain(format!("incomplete_gamma_int supports n >= -8, got {n}")));
    }
    let prec = ctx.prec();
    let p = prec + 16;
    let xx = Float::with_val(p, x);
    let ex = Float::with_val(p, (-xx.clone()).exp_ref());
    if n >= 1 {
        let mut term = Float::with_val(p, 1);
        let mut sum = Float::with_val(p, 1);
        for k in 1..n as u64 {
            term *= &xx;
            term /= k;
            sum += &term;
        }
        let fact = Float::with_val(p, Integer::from(Integer::factorial((n - 1) as u32)));
        let mut out = fact * sum * ex;
        out.set_prec(prec);
        let rad = Radius::ulp(&out, prec).scale_f64(4.0 * n as f64);
        return Ok(ApproxReal::new(out, rad));
    }
    let (e1, r1) = expint_e1(&xx, p)?;
    let mut g = e1;
    let mut rad = r1;
    let mut a = 0i64;
    while a > n {
        // Γ(a-1) = (Γ(a) - x^(a-1) e^-x) / (a-1)
        let xa = Float::with_val(p, xx.clone().pow(a - 1)) * &ex;
        g = (g - xa) / (a - 1);
        rad = rad.scale_f64(1.0 / (1 - a) as f64).add(&Radius::ulp(&g, p).scale_f64(4.0));
        a -= 1;
    }
    g.set_prec(prec);
    let rad = rad.add(&Radius::ulp(&g, prec));
    Ok(ApproxReal::new(g, rad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::{const_pi, make_context, quad};

    #[test]
    fn half_is_sqrt_pi() {
        let c = make_context(100).unwrap();
        let g = gamma_rational(1, 2, &c).unwrap();
        assert!(g.digits_matched(&const_pi(&c).sqrt()) >= 100);
    }

    #[test]
    fn reflection_third() {
        let c = make_context(100).unwrap();
        let a = gamma_rational(1, 3, &c).unwrap();
        let b = gamma_rational(2, 3, &c).unwrap();
        let three = ApproxReal::exact(Float::with_val(c.prec(), 3));
        let want = const_pi(&c).mul_i64(2) / three.sqrt();
        assert!((&a * &b).digits_matched(&want) >= 100);
    }

    #[test]
    fn reflection_fifteenths() {
        let c = make_context(100).unwrap();
        let pi = const_pi(&c);
        for (p, q) in [(1, 3), (1, 15), (2, 15), (4, 15), (7, 15)] {
            let a = gamma_rational(p, q, &c).unwrap();
            let b = gamma_rational(q - p, q, &c).unwrap();
            let x = Float::with_val(c.prec(), pi.mid() * Float::with_val(c.prec(), Rational::from((p, q))));
            let s = ApproxReal::rounded(x.sin());
            assert!((&a * &b).digits_matched(&(&pi / &s)) >= 100, "{p}/{q}");
        }
    }

    #[test]
    fn matches_mpfr_gamma() {
        let c = make_context(300).unwrap();
        for (p, q) in [(1, 15), (8, 15), (7, 2), (53, 7)] {
            let g = gamma_rational(p, q, &c).unwrap();
            let x = Float::with_val(c.prec() + 40, Rational::from((p, q)));
            let o = ApproxReal::exact(x.gamma());
            assert!(g.digits_matched(&o) >= 300, "{p}/{q}");
            assert!(g.contains(o.mid()));
        }
    }

    #[test]
    fn rejects_nonpositive() {
        let c = make_context(20).unwrap();
        assert!(gamma_rational(0, 3, &c).is_err());
        assert!(gamma_rational(-1, 3, &c).is_err());
    }

    #[test]
    fn incomplete_small_orders() {
        let c = make_context(60).unwrap();
        let x = c.float(1.75);
        let ex = ApproxReal::rounded(Float::with_val(c.prec(), (-x.clone()).exp_ref()));
        assert!(incomplete_gamma_int(1, &x, &c).unwrap().digits_matched(&ex) >= 60);
        let want = ex.mul_float(&Float::with_val(c.prec(), 1 + x.clone()));
        assert!(incomplete_gamma_int(2, &x, &c).unwrap().digits_matched(&want) >= 60);
    }

    #[test]
    fn incomplete_three_by_quadrature() {
        let c = make_context(40).unwrap();
        let x = c.float(1.5);
        let v = incomplete_gamma_int(3, &x, &c).unwrap();
        let q = quad::exp_sinh_real(|t| {
            let t2 = Float::with_val(t.prec(), t.square_ref());
            Ok(t2 * Float::with_val(t.prec(), (-t.clone()).exp_ref()))
        }, &x, c.prec(), c.tol_log2()).unwrap();
        assert!(v.digits_matched(&q) >= 38);
    }

    #[test]
    fn e1_against_mpfr_and_continued_fraction_boundary() {
        let c = make_context(100).unwrap();
        for xv in [0.05, 0.81, 1.9, 2.1, 7.3, 63.0, 250.0] {
            let x = c.float(xv);
            let (e1, _) = expint_e1(&x, c.prec()).unwrap();
            let mut ei = Float::with_val(c.prec() + 64, -x.clone());
            ei = ei.eint();
            let want = ApproxReal::exact(-ei);
            assert!(ApproxReal::exact(e1).digits_matched(&want) >= 100, "x = {xv}");
        }
    }

    #[test]
    fn negative_orders_by_quadrature() {
        let c = make_context(30).unwrap();
        let x = c.float(1.3);
        for n in [0i64, -1, -2] {
            let v = incomplete_gamma_int(n, &x, &c).unwrap();
            let q = quad::exp_sinh_real(|t| {
                let e = Float::with_val(t.prec(), (-t.clone()).exp_ref());
                Ok(e * Float::with_val(t.prec(), t.clone().pow(n - 1)))
            }, &x, c.prec(), c.tol_log2()).unwrap();
            assert!(v.digits_matched(&q) >= 30, "n = {n}");
        }
    }
}
