use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::{Consts, Relation};
use crate::mpcore::{cot_plus_i, zeta_int, ApproxComplex, PrecisionContext, Radius};
use crate::qseries::Tau;
use crate::{Error, Result};

/// Σ_{n≥1, n ∈ step·ℕ + offset} g(πnτ)/n^s where g(z) → 0 like |e^{2iz}|.
fn correction_sum<G>(s: u32, tau: &Tau, prec: u32, odd_only: bool, g: G) -> Result<(Complex, Radius)>
where
    G: Fn(&Complex, u32) -> Complex,
{
    let p = prec + 16;
    let aq = tau.abs_q_f64();
    if aq >= 0.99 {
        return Err(Error::NoConvergence { what: "cotangent series (|q| too close to 1)", limit: 0 });
    }
    let pi = Float::with_val(p, Constant::Pi);
    let pitau = Complex::with_val(p, tau.value() * &pi);
    let step = if odd_only { 2 } else { 1 };
    let target = -(p as f64) - 4.0;
    let mut sum = Complex::with_val(p, 0);
    let mut n: u64 = 1;
    loop {
        let z = Complex::with_val(p, &pitau * n);
        let ns = Float::with_val(p, n).pow(s);
        sum += g(&z, p) / ns;
        n += step;
        let lq = n as f64 * aq.log2();
        if lq < target && aq.powf(n as f64) < 0.5 {
            // |g(πnτ)| ≤ 3|q|^n once |q|^n ≤ 1/2
            let first = Float::with_val(64, aq).pow(n as u32) * 3u32;
            let ratio = Float::with_val(64, aq.powi(step as i32));
            return Ok((Complex::with_val(prec, sum), Radius::geometric_tail(&first, &ratio)));
        }
        if n > 10_000_000 {
            return Err(Error::NoConvergence { what: "cotangent series", limit: n as usize });
        }
    }
}

/// ξ_s(τ) = Σ cot(πnτ)/n^s for odd s ≥ 3 and Im τ > 0, split as
/// −iζ(s) + Σ (cot(πnτ) + i)/n^s.
pub fn xi_cotangent(s: u32, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    if s < 3 || s.is_multiple_of(2) {
        return Err(Error::Domain(format!("xi_s needs odd s >= 3, got {s}")));
    }
    let p = ctx.prec();
    let (corr, tail) = correction_sum(s, tau, p, false, cot_plus_i)?;
    let z = zeta_int(s, ctx)?;
    let head = z.to_complex().mul_complex(&Complex::with_val(p, (0, -1)));
    Ok(&head + &ApproxComplex::new(corr, tail.add(&Radius::pow2(-(p as i64) + 8))))
}

/// tan z − i = −2i w/(1 + w), w = e^{2iz}.
fn tan_minus_i(z: &Complex, prec: u32) -> Complex {
    let w = Complex::with_val(prec, Complex::with_val(prec, z * Complex::with_val(prec, (0, 2))).exp_ref());
    let den = Complex::with_val(prec, &w + 1u32);
    Complex::with_val(prec, w * Complex::with_val(prec, (0, -2)) / den)
}

/// Σ_{n odd} tan(πnτ)/n³ = (7/8)iζ(3) + Σ_{n odd} (tan(πnτ) − i)/n³.
pub fn tan_odd_sum(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec();
    let (corr, tail) = correction_sum(3, tau, p, true, tan_minus_i)?;
    let z = zeta_int(3, ctx)?;
    let head = z.mul_i64(7).div_i64(8).to_complex().mul_complex(&Complex::with_val(p, (0, 1)));
    Ok(&head + &ApproxComplex::new(corr, tail.add(&Radius::pow2(-(p as i64) + 8))))
}

fn two_pi3_i_over_sqrt15(k: &Consts, scale: i64, div: i64) -> ApproxComplex {
    let r = k.pi_pow(3).mul_float(&Float::with_val(k.prec, k.sqrt(15).recip_ref())).mul_i64(scale).div_i64(div);
    r.to_complex().mul_complex(&Complex::with_val(k.prec, (0, 1)))
}

fn xi_combo(k: &Consts, terms: &[(i64, (i64, u64, i64))], ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let mut acc = ApproxComplex::exact(Complex::with_val(k.prec, 0));
    for (c, (b, d, den)) in terms {
        acc = &acc + &xi_cotangent(3, &k.tau(*b, *d, *den), ctx)?.mul_i64(*c);
    }
    Ok(acc)
}

/// 3ξ₃(√−15/6) − ξ₃(√−15/2) − 24ξ₃(√−15/12) + 8ξ₃(√−15/4) against 2π³i/√15,
/// exactly as displayed in the source remark.
pub fn xi_identity_printed(ctx: &PrecisionContext) -> Result<Relation> {
    let k = Consts::new(ctx)?;
    let lhs = xi_combo(&k, &[(3, (0, 15, 6)), (-1, (0, 15, 2)), (-24, (0, 15, 12)), (8, (0, 15, 4))], ctx)?;
    Ok(Relation::new("3xi3(sqrt(-15)/6)-xi3(sqrt(-15)/2)-24xi3(sqrt(-15)/12)+8xi3(sqrt(-15)/4)", lhs, two_pi3_i_over_sqrt15(&k, 2, 1)))
}

/// The form consistent with the level-15 F₃ evaluation:
/// 3ξ₃(√−15/3) − ξ₃(√−15) − 24ξ₃(√−15/6+½) + 8ξ₃(√−15/2+½) = 2π³i/√15.
pub fn xi_identity_corrected(ctx: &PrecisionContext) -> Result<Relation> {
    let k = Consts::new(ctx)?;
    let lhs = xi_combo(&k, &[(3, (0, 15, 3)), (-1, (0, 15, 1)), (-24, (3, 15, 6)), (8, (1, 15, 2))], ctx)?;
    Ok(Relation::new("3xi3(sqrt(-15)/3)-xi3(sqrt(-15))-24xi3(sqrt(-15)/6+1/2)+8xi3(sqrt(-15)/2+1/2)", lhs, two_pi3_i_over_sqrt15(&k, 2, 1)))
}

/// 3Σ_{odd} tan(πn√−15/6)/n³ − Σ_{odd} tan(πn√−15/2)/n³ = π³i/(4√15).
pub fn xi_tan_identity(ctx: &PrecisionContext) -> Result<Relation> {
    let k = Consts::new(ctx)?;
    let a = tan_odd_sum(&k.tau(0, 15, 6), ctx)?;
    let b = tan_odd_sum(&k.tau(0, 15, 2), ctx)?;
    Ok(Relation::new("3T(sqrt(-15)/6)-T(sqrt(-15)/2)", &a.mul_i64(3) - &b, two_pi3_i_over_sqrt15(&k, 1, 4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eichler::grosswald_f;
    use crate::mpcore::make_context;

    #[test]
    fn xi_equals_zeta_plus_grosswald() {
        let c = make_context(50).unwrap();
        let t = Tau::from_f64(0.3, 0.45, c.prec()).unwrap();
        let xi = xi_cotangent(3, &t, &c).unwrap();
        let f = grosswald_f(3, &t, &c).unwrap();
        let z = zeta_int(3, &c).unwrap().to_complex();
        let want = (&z + &f.mul_i64(2)).mul_complex(&Complex::with_val(c.prec(), (0, -1)));
        assert!(xi.digits_matched(&want) >= 50);
    }

    #[test]
    fn xi_limit_is_minus_i_zeta() {
        let c = make_context(30).unwrap();
        let t = Tau::from_f64(0.0, 40.0, c.prec()).unwrap();
        let xi = xi_cotangent(3, &t, &c).unwrap();
        let z = zeta_int(3, &c).unwrap().to_complex().mul_complex(&Complex::with_val(c.prec(), (0, -1)));
        assert!(xi.digits_matched(&z) >= 30);
    }

    #[test]
    fn xi_against_partial_sum() {
        let c = make_context(20).unwrap();
        let t = Tau::from_f64(0.0, 0.3, c.prec()).unwrap();
        let xi = xi_cotangent(5, &t, &c).unwrap();
        let p = c.prec();
        let mut s = Complex::with_val(p, 0);
        for n in 1..20000u32 {
            let z = Complex::with_val(p, t.value() * Float::with_val(p, Constant::Pi)) * n;
            let cot = Complex::with_val(p, z.cos_ref()) / Complex::with_val(p, z.sin_ref());
            s += cot / Float::with_val(p, n).pow(5u32);
        }
        assert!(xi.digits_matched(&ApproxComplex::rounded(s)) >= 15);
    }

    #[test]
    fn tan_form_and_corrected_form_hold() {
        let c = make_context(60).unwrap();
        assert!(xi_tan_identity(&c).unwrap().digits() >= 55);
        assert!(xi_identity_corrected(&c).unwrap().digits() >= 55);
    }

    #[test]
    fn printed_form_is_off() {
        let c = make_context(30).unwrap();
        let r = xi_identity_printed(&c).unwrap();
        assert!(r.digits() < 2);
        assert!((r.lhs.mid().imag().to_f64() - 24.0712).abs() < 1e-3);
    }
}
