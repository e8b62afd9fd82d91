use rug::{Complex, Float};

use super::{ApproxComplex, PrecisionContext, Radius};
use crate::{Error, Result};

/// cot z + i for Im z > 0, computed as -2i w / (1 - w) with w = e^{2iz}
/// so that no cancellation occurs as cot z → -i.
pub fn cot_plus_i(z: &Complex, prec: u32) -> Complex {
    let p = prec + 8;
    let iz2 = Complex::with_val(p, z * Complex::with_val(p, (0, 2)));
    let w = Complex::with_val(p, iz2.exp_ref());
    let den = Complex::with_val(p, 1 - &w);
    let num = Complex::with_val(p, &w * Complex::with_val(p, (0, -2)));
    Complex::with_val(prec, num / den)
}

/// cot z with exponential evaluation; rejects real-axis points near poles.
pub fn complex_cot(z: &Complex, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let prec = ctx.prec();
    let im = z.imag();
    if im.is_zero() {
        let s = Float::with_val(prec, z.real().sin_ref());
        let tiny = Float::with_val(64, Float::with_val(64, 1) >> (prec as i32 / 2));
        if Float::with_val(64, &*s.as_abs()) < tiny {
            return Err(Error::Singular(format!("cot pole near {}", z.real().to_f64())));
        }
        let c = Float::with_val(prec, z.real().cos_ref());
        let v = Complex::with_val(prec, (c / s, 0));
        return Ok(ApproxComplex::rounded(v).widen(&Radius::pow2(-(prec as i64) + 4)));
    }
    let (v, neg) = if *im > 0 {
        (cot_plus_i(z, prec), false)
    } else {
        (cot_plus_i(&Complex::with_val(prec, -z), prec), true)
    };
    let mut c = Complex::with_val(prec, &v - Complex::with_val(prec, (0, 1)));
    if neg {
        c = -c;
    }
    let rad = Radius::ulp_complex(&c, prec).scale_f64(8.0);
    Ok(ApproxComplex::new(c, rad))
}
