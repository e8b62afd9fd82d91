use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{bernoulli, ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// ζ(k) for integer k ≥ 2 by Borwein's alternating-series acceleration.
pub fn zeta_int(k: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if k < 2 {
        return Err(Error::Domain(format!("zeta_int needs k >= 2, got {k}")));
    }
    let p = ctx.prec() + 32;
    // error <= 3 / (3 + sqrt 8)^n / |1 - 2^(1-k)| <= 6 (3 + sqrt 8)^-n
    let n = ((p as f64 + 4.0) / (3.0 + 8f64.sqrt()).log2()).ceil() as u64 + 1;
    let mut e = Integer::from(1);
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut acc = Integer::from(1);
    d.push(acc.clone());
    for i in 0..n {
        e *= 2 * (n + i) * (n - i);
        e /= (i + 1) * (2 * i + 1);
        acc += &e;
        d.push(acc.clone());
    }
    let dn = d[n as usize].clone();
    let mut sum = Float::with_val(p, 0);
    for j in 0..n {
        let num = Integer::from(&d[j as usize] - &dn);
        let mut term = Float::with_val(p, &num);
        term /= Float::with_val(p, Integer::from(j + 1).pow(k));
        if j % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let one = Float::with_val(p, 1);
    let factor = Float::with_val(p, &one - Float::with_val(p, Float::u_pow_u(2, k - 1)).recip());
    let denom = Float::with_val(p, &dn) * factor;
    let val = -sum / denom;
    let mut mid = Float::with_val(ctx.prec(), &val);
    mid.set_prec(ctx.prec());
    let rad = Radius::pow2(-(p as i64) + 4).add(&Radius::ulp(&mid, ctx.prec()));
    Ok(ApproxReal::new(mid, rad))
}

/// ζ(k) as the Hurwitz value at a = 1.
pub fn zeta_int_euler_maclaurin(k: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    hurwitz_zeta_int(k, &Rational::from(1), ctx)
}

/// ζ(s, a) = Σ_{k≥0} (k+a)^-s by Euler–Maclaurin summation.
///
/// The remainder after the last Bernoulli correction is bounded by twice the
/// first omitted term and added to the radius.
pub fn hurwitz_zeta_int(s: u32, a: &Rational, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if s < 2 {
        return Err(Error::Domain(format!("hurwitz_zeta_int needs s >= 2, got {s}")));
    }
    if *a <= 0 || *a > 1 {
        return Err(Error::Domain(format!("hurwitz_zeta_int needs 0 < a <= 1, got {a}")));
    }
    let p = ctx.prec() + 16;
    let target = -(p as f64);
    let n_direct = (0.37 * ctx.working_digits() as f64).ceil() as u64 + 8;
    let af = Float::with_val(p, a);
    let mut sum = Float::with_val(p, 0);
    for k in 0..n_direct {
        let x = Float::with_val(p, &af + k);
        sum += Float::with_val(p, x.pow(-(s as i32)));
    }
    let x = Float::with_val(p, &af + n_direct);
    let xs = Float::with_val(p, x.clone().pow(-(s as i32)));
    sum += Float::with_val(p, &xs * &x) / (s - 1);
    sum += Float::with_val(p, &xs / 2u32);
    let x2inv = Float::with_val(p, x.clone().pow(-2));
    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    let mut poch = Float::with_val(p, s); // s (s+1) ... (s+2j-2)
    let mut fact = Float::with_val(p, 2); // (2j)!
    let mut xpow = Float::with_val(p, &xs / &x); // x^(-s-1)
    let mut j = 1u32;
    let bound = loop {
        let b = Float::with_val(p, &bernoulli(2 * j));
        let term = Float::with_val(p, &b * &poch) / &fact * &xpow;
        let mag = if term.is_zero() { f64::NEG_INFINITY } else { term.clone().abs().log2().to_f64() };
        if mag < target {
            break Radius::from_float(&term).scale_f64(2.0);
        }
        sum += &term;
        j += 1;
        if j > 10 * (p + 50) {
            return Err(Error::NoConvergence { what: "Hurwitz zeta Euler-Maclaurin", limit: j as usize });
        }
        poch *= (s + 2 * j - 3) as u64;
        poch *= (s + 2 * j - 2) as u64;
        fact *= ((2 * j - 1) * (2 * j)) as u64;
        xpow *= &x2inv;
    };
    let mut mid = sum;
    mid.set_prec(ctx.prec());
    let rad = bound.add(&Radius::pow2(-(p as i64) + 8)).add(&Radius::ulp(&mid, ctx.prec()));
    Ok(ApproxReal::new(mid, rad))
}
