use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use super::{QExpansion, Tau};
use crate::mpcore::{bernoulli, ApproxComplex, PrecisionContext, Radius};
use crate::{Error, Result};

/// E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n, exact to `n` coefficients.
pub fn eisenstein_qexp(k: u32, n: usize) -> Result<QExpansion> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    let factor = -Rational::from(2 * k) / bernoulli(k) ;
    let mut sig = vec![Integer::new(); n];
    for d in 1..n {
        let dp = Integer::from(d).pow(k - 1);
        let mut m = d;
        while m < n {
            sig[m] += &dp;
            m += d;
        }
    }
    let mut c: Vec<Rational> = sig.into_iter().map(|s| Rational::from(s) * &factor).collect();
    if n > 0 {
        c[0] = Rational::from(1);
    }
    Ok(QExpansion::new(Rational::new(), c))
}

/// Lambert series Σ_{n≥1} n^s q^n / (1 - q^n) = Σ σ_s(m) q^m with a tail bound.
pub fn lambert_sum(s: i32, tau: &Tau, prec: u32) -> Result<(Complex, Radius)> {
    let p = prec + 16;
    let aq = tau.abs_q_f64();
    if aq >= 0.9999 {
        return Err(Error::NoConvergence { what: "Lambert series (|q| too close to 1)", limit: 0 });
    }
    let lq = aq.log2();
    let target = -(p as f64) - 4.0;
    if lq < target - 2.0 * s.max(0) as f64 {
        // every term is below the tolerance: Σ n^s |q|ⁿ/(1 − |q|) ≤ 2|q| for 2^s|q| ≤ 1/2
        let bound = Float::with_val(64, 2.0 * aq.max(f64::MIN_POSITIVE));
        return Ok((Complex::with_val(prec, 0), Radius::from_float(&bound)));
    }
    let q = tau.q(p);
    let mut sum = Complex::with_val(p, 0);
    let mut qn = Complex::with_val(p, 1);
    let mut n: u64 = 1;
    loop {
        qn *= &q;
        let den = Complex::with_val(p, 1 - &qn);
        let mut term = Complex::with_val(p, &qn / &den);
        if s != 0 {
            term *= Float::with_val(p, Float::with_val(p, n).pow(s));
        }
        sum += &term;
        n += 1;
        let est = s as f64 * (n as f64).log2() + n as f64 * lq;
        let decreasing = s <= 0 || (s as f64) / (n as f64) < -lq * std::f64::consts::LN_2 * 0.5;
        if est < target && decreasing {
            let first = Float::with_val(64, n).pow(s) * Float::with_val(64, aq).pow(n as u32);
            let ratio = if s > 0 {
                Float::with_val(64, (1.0 + 1.0 / n as f64).powi(s) * aq)
            } else {
                Float::with_val(64, aq)
            };
            let tail = Radius::geometric_tail(&first, &ratio).scale_f64(1.0 / (1.0 - aq));
            return Ok((Complex::with_val(prec, sum), tail));
        }
        if n > 50_000_000 {
            return Err(Error::NoConvergence { what: "Lambert series", limit: n as usize });
        }
    }
}

/// E_k(τ) by its Lambert series; k = 2 gives the quasimodular E_2.
pub fn eisenstein_eval(k: u32, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    let p = ctx.prec();
    let (l, tail) = lambert_sum(k as i32 - 1, tau, p + 8)?;
    let factor = Float::with_val(p + 8, &(-Rational::from(2 * k) / bernoulli(k)));
    let v = Complex::with_val(p, l * &factor + 1u32);
    let rad = tail.scale(&factor).add(&Radius::ulp_complex(&v, p).scale_f64(64.0));
    Ok(ApproxComplex::new(v, rad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;

    #[test]
    fn e4_first_coefficients() {
        let e = eisenstein_qexp(4, 4).unwrap();
        assert_eq!(e.integer_coeffs().unwrap(), vec![Integer::from(1), Integer::from(240), Integer::from(2160), Integer::from(6720)]);
        let e2 = eisenstein_qexp(2, 3).unwrap();
        assert_eq!(*e2.coeff(1), -24);
        assert!(eisenstein_qexp(3, 5).is_err());
    }

    #[test]
    fn half_shift_identity_200() {
        let n = 200;
        let e = eisenstein_qexp(4, n).unwrap();
        let s = &(&e.half_shift().unwrap() + &e) - &e.dilate(2).scale(&Rational::from(18));
        let s = &s + &e.dilate(4).scale(&Rational::from(16));
        assert!(s.order() >= n - 3);
        assert!(s.truncate(n).is_zero());
    }

    #[test]
    fn eval_matches_qexp_at_i() {
        let c = make_context(100).unwrap();
        let t = Tau::from_f64(0.0, 1.0, c.prec()).unwrap();
        let a = eisenstein_eval(4, &t, &c).unwrap();
        let e = eisenstein_qexp(4, 140).unwrap();
        let b = ApproxComplex::exact(e.evaluate(t.value(), c.prec()));
        assert!(a.digits_matched(&b) >= 100);
        // E4(i) = 3 Γ(1/4)^8 / (2π)^6
        let p = c.prec();
        let g = Float::with_val(p, Float::with_val(p, 0.25).gamma_ref()).pow(8u32) * 3u32;
        let tp = Float::with_val(p, rug::float::Constant::Pi) * 2u32;
        let want = g / tp.pow(6u32);
        assert!(a.re().digits_matched(&crate::mpcore::ApproxReal::exact(want)) >= 100);
    }
}
