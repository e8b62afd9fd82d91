use rug::ops::Pow;
use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::mpcore::{hurwitz_zeta_int, ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// The Kronecker symbol (d/n).
pub fn kronecker_symbol(d: i64, n: i64) -> i32 {
    Integer::from(d).kronecker(&Integer::from(n))
}

fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    let squarefree = |mut m: i64| {
        m = m.abs();
        let mut p = 2;
        while p * p <= m {
            if m % (p * p) == 0 {
                return false;
            }
            p += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// L(s, χ_d) for a fundamental discriminant d and integer s ≥ 1.
///
/// s ≥ 2 goes through |d|^{-s} Σ χ(r) ζ(s, r/|d|); s = 1 uses
/// L(1, χ) = −π |d|^{-3/2} Σ_{a=1}^{|d|} χ(a) a, valid for odd χ (d < 0).
pub fn dirichlet_l(d: i64, s: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if !is_fundamental(d) {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    }
    if s == 0 {
        return Err(Error::Domain("dirichlet_l needs s >= 1".into()));
    }
    let k = d.unsigned_abs() as i64;
    let p = ctx.prec();
    if s == 1 {
        if d > 0 {
            return Err(Error::Domain("s = 1 is only supported for odd characters (d < 0)".into()));
        }
        let b: i64 = (1..=k).map(|a| kronecker_symbol(d, a) as i64 * a).sum();
        let pi = Float::with_val(p + 8, Constant::Pi);
        let kk = Float::with_val(p + 8, k);
        let v = -pi * b / (Float::with_val(p + 8, kk.sqrt_ref()) * &kk);
        let v = Float::with_val(p, v);
        let rad = Radius::ulp(&v, p).scale_f64(8.0);
        return Ok(ApproxReal::new(v, rad));
    }
    let mut acc = ApproxReal::exact(Float::with_val(p, 0));
    for r in 1..=k {
        let chi = kronecker_symbol(d, r);
        if chi == 0 {
            continue;
        }
        let h = hurwitz_zeta_int(s, &Rational::from((r, k)), ctx)?;
        acc = &acc + &h.mul_i64(chi as i64);
    }
    let scale = Float::with_val(p, Float::with_val(p, k).pow(-(s as i32)));
    Ok(acc.mul_float(&scale))
}
