use rug::float::Constant;
use rug::Float;

use super::{ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// J0(x) for x ≥ 0 at binary precision `prec`.
///
/// Power series with enough extra bits to absorb the cancellation (about
/// x·log2 e) for moderate x; Hankel's asymptotic expansion once its
/// smallest term, of size about e^{-2x}, is below the target.
pub fn bessel_j0_raw(x: &Float, prec: u32) -> Result<Float> {
    if *x < 0 {
        return Err(Error::Domain("bessel_j0 needs x >= 0".into()));
    }
    let xf = x.to_f64();
    let target = prec as f64 + 10.0;
    if 2.0 * xf * std::f64::consts::LOG2_E > target + 8.0 {
        return Ok(hankel(x, prec));
    }
    let extra = (xf * std::f64::consts::LOG2_E).ceil() as u32 + 16;
    let p = prec + extra;
    let xx = Float::with_val(p, x);
    let y = Float::with_val(p, xx.square_ref()) / 4u32;
    let mut term = Float::with_val(p, 1);
    let mut sum = Float::with_val(p, 1);
    let mut k = 1u64;
    loop {
        term *= &y;
        term /= k * k;
        term = -term;
        sum += &term;
        if (k as f64) > xf && (term.is_zero() || term.clone().abs().log2().to_f64() < -target - extra as f64) {
            break;
        }
        k += 1;
    }
    Ok(Float::with_val(prec, sum))
}

fn hankel(x: &Float, prec: u32) -> Float {
    let p = prec + 16;
    let xx = Float::with_val(p, x);
    let inv8x = Float::with_val(p, Float::with_val(p, &xx * 8u32).recip_ref());
    // a_k = ((1)(9)(25)...((2k-1)^2)) / (k! 8^k x^k)
    let mut a = Float::with_val(p, 1);
    let mut pp = Float::with_val(p, 1);
    let mut qq = Float::with_val(p, 0);
    let mut k = 1u64;
    let target = -(p as f64) - 4.0;
    let mut last = f64::INFINITY;
    loop {
        a *= ((2 * k - 1) * (2 * k - 1)) as f64;
        a /= k;
        a *= &inv8x;
        let mag = a.clone().abs().log2().to_f64();
        if mag < target || mag > last {
            break;
        }
        last = mag;
        match k % 4 {
            1 => qq -= &a,
            2 => pp -= &a,
            3 => qq += &a,
            _ => pp += &a,
        }
        k += 1;
    }
    let pi = Float::with_val(p, Constant::Pi);
    let phase = Float::with_val(p, &xx - Float::with_val(p, &pi / 4u32));
    let (s, c) = phase.sin_cos(Float::new(p));
    let amp = Float::with_val(p, Float::with_val(p, &pi * &xx).recip_ref()) * 2u32;
    let amp = amp.sqrt();
    Float::with_val(prec, amp * (pp * c - qq * s))
}

pub fn bessel_j0(x: &Float, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let v = bessel_j0_raw(x, ctx.prec())?;
    let rad = Radius::pow2(-(ctx.prec() as i64) + 2);
    Ok(ApproxReal::new(v, rad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;

    #[test]
    fn value_at_zero() {
        let c = make_context(30).unwrap();
        let v = bessel_j0(&c.float(0), &c).unwrap();
        assert_eq!(*v.mid(), 1);
    }

    #[test]
    fn series_oracle_at_two() {
        let c = make_context(80).unwrap();
        let v = bessel_j0(&c.float(2), &c).unwrap();
        let p = c.prec() + 64;
        let mut s = Float::with_val(p, 0);
        let mut t = Float::with_val(p, 1);
        for k in 0..200u64 {
            if k > 0 {
                t /= k * k;
                t = -t;
            }
            s += &t;
        }
        assert!(v.digits_matched(&ApproxReal::exact(s)) >= 80);
    }

    #[test]
    fn agrees_with_mpfr_across_regimes() {
        let c = make_context(40).unwrap();
        for xv in [0.5, 7.0, 33.3, 70.0, 140.0, 1000.5] {
            let x = c.float(xv);
            let v = bessel_j0_raw(&x, c.prec()).unwrap();
            let o = Float::with_val(c.prec() + 40, x.j0_ref());
            let d = Float::with_val(c.prec(), &v - &o).abs();
            assert!(d < 1e-45, "x = {xv}: {d}");
        }
    }
}
