use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use super::operator::pf_l3;
use super::stencil_derivatives;
use crate::eichler::{f3, psi_dirichlet_sum, sigma_weight_qexp, PsiWeight, Relation};
use crate::lfun::{modular_l, rwz_closed};
use crate::mpcore::{const_pi, gamma_rational, zeta_int, ApproxComplex, ApproxReal, PrecisionContext, Radius};
use crate::qseries::{cm_point, cm_points, invert_t, varpi, NewformId, Period, Tau};
use crate::{Error, Result};

/// Σ_{n≥1} ψ(n) n^{-3} qⁿ/(1 − qⁿ).
pub fn psi_lambert(tau: &Tau, prec: u32) -> Result<(Complex, Radius)> {
    let p = prec + 16;
    let q = tau.q(p);
    let aq = tau.abs_q_f64();
    if aq >= 0.9999 {
        return Err(Error::NoConvergence { what: "psi Lambert series (|q| too close to 1)", limit: 0 });
    }
    let target = -(p as f64) - 16.0;
    let mut sum = Complex::with_val(p, 0);
    let mut qn = Complex::with_val(p, 1);
    let mut n: u64 = 0;
    loop {
        n += 1;
        qn *= &q;
        let term = Complex::with_val(p, &qn / Complex::with_val(p, 1 - &qn));
        let w = Float::with_val(p, PsiWeight::at(n as i64)) / Float::with_val(p, n).pow(3u32);
        sum += term * w;
        if (n as f64) * aq.log2() + 13.0 < target {
            break;
        }
        if n > 10_000_000 {
            return Err(Error::NoConvergence { what: "psi Lambert series", limit: n as usize });
        }
    }
    let first = Float::with_val(64, aq).pow(n as u32 + 1) * 5760u32 / (1.0 - aq);
    Ok((Complex::with_val(prec, sum), Radius::geometric_tail(&first, &Float::with_val(64, aq))))
}

/// I(t(τ)) = ϖ₁(τ)(16ζ(3) + Σ ψ(n) n^{-3} qⁿ/(1 − qⁿ) − 4(2πiτ)³).
///
/// This is ϖ₁(τ)((τ/2πi) D(τ) − 4(2πiτ)³) with the m-sum of
/// D(τ) = Σ_{m∈ℤ,n≥1} ψ(n) n^{-2}/(m² − n²τ²) collapsed by the cotangent
/// partial fractions.
pub fn i_modular(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec();
    let w = varpi(Period::One, tau, ctx)?;
    let (g, grad) = psi_lambert(tau, p + 8)?;
    let g = ApproxComplex::new(Complex::with_val(p, g), grad.add(&Radius::pow2(-(p as i64))));
    let zeta_part = psi_dirichlet_sum(3, ctx)?.div_i64(2).to_complex();
    let l = two_pi_i_tau(tau, p + 8);
    let cube = ApproxComplex::rounded(Complex::with_val(p, l.pow(3u32) * 4u32));
    Ok(&w * &(&(&zeta_part + &g) - &cube))
}

fn two_pi_i_tau(tau: &Tau, p: u32) -> Complex {
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    Complex::with_val(p, tau.value() * Complex::with_val(p, (0, two_pi)))
}

/// The CM values of t at which the closed forms are available.
pub const I_CM_VALUES: [i64; 5] = [-32, -2, 1, 4, 16];

fn real_part_checked(v: ApproxComplex, what: &str, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let im = v.im();
    let tol = Float::with_val(64, 10u32).pow(-(ctx.decimal_digits() as i32 - 5));
    let slack = Float::with_val(64, v.rad().as_float() + &tol);
    if Float::with_val(64, im.mid().abs_ref()) > slack {
        return Err(Error::Inconsistent(format!("{what} is not real: imaginary part {}", im.to_decimal(12))));
    }
    let extra = Radius::from_float(&Float::with_val(64, im.mid().abs_ref()));
    Ok(v.re().widen(&extra))
}

/// I(t) through [`i_modular`] at the CM point with hauptmodul value t.
pub fn i_cm(t: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if !I_CM_VALUES.contains(&t) {
        return Err(Error::Unknown { kind: "CM value for I(t)", name: t.to_string() });
    }
    let cm = cm_point(t)?;
    let v = i_modular(&cm.tau(ctx.prec()), ctx)?;
    real_part_checked(v, &format!("I({t})"), ctx)
}

/// ϖ₂((3+√−3)/6) = 24 Γ(1/3)⁶ / (2^{17/3} π⁴).
pub fn varpi2_tau4_closed(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let g = gamma_rational(1, 3, ctx)?.pow_i32(6);
    let two = Float::with_val(p, 2u32);
    let t = Float::with_val(p, two.pow(Float::with_val(p, 17u32) / 3u32));
    let den = const_pi(ctx).pow_i32(4).mul_float(&t);
    Ok((&g / &den).mul_i64(24))
}

/// 3F₃(√−3/3) − F₃(√−3), real at these points.
fn x_sqrt3(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let a = f3(&Tau::quadratic(0, 3, 3, p)?, ctx)?;
    let b = f3(&Tau::quadratic(0, 3, 1, p)?, ctx)?;
    real_part_checked(&a.mul_i64(3) - &b, "3F3(sqrt(-3)/3) - F3(sqrt(-3))", ctx)
}

/// Closed-form right-hand sides for I(t), t ∈ {−32, −2, 1, 4, 16}.
pub fn i_closed(t: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let pi = const_pi(ctx);
    if t == 1 {
        let l = modular_l(NewformId::F15, 2, ctx)?;
        let k = pi.mul_i64(12).mul_float(&Float::with_val(p, 15u32).sqrt().recip());
        return Ok(&k * &l);
    }
    // I(t) = ϖ₂(τ₄)(a√3π³ + b(ζ(3) + X))
    let (a, b) = match t {
        16 => ((32, 135), (-2, 1)),
        4 => ((16, 135), (-1, 1)),
        -2 => ((23, 540), (7, 4)),
        -32 => ((7, 540), (2, 1)),
        _ => return Err(Error::Unknown { kind: "CM value for I(t)", name: t.to_string() }),
    };
    let w = varpi2_tau4_closed(ctx)?;
    let zx = &zeta_int(3, ctx)? + &x_sqrt3(ctx)?;
    let s3pi3 = pi.pow_i32(3).mul_float(&Float::with_val(p, 3u32).sqrt());
    let ra = |(n, d): (i64, i64)| Float::with_val(p, Rational::from((n, d)));
    let inner = &s3pi3.mul_float(&ra(a)) + &zx.mul_float(&ra(b));
    Ok(&w * &inner)
}

/// (36π/√12) L(g, 2), the value of I(−32) + I(16).
pub fn i_sum_closed(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let l = rwz_closed(NewformId::G12, ctx)?;
    let k = const_pi(ctx).mul_i64(36).mul_float(&Float::with_val(p, 12u32).sqrt().recip());
    Ok(&k * &l)
}

/// Re I(64) through [`i_modular`] at (−3+√−15)/6 minus
/// (L(f,2)/(8π²))(43√15π³/15 − 45ζ(3) − 45(3F₃(√−15/3) − F₃(√−15))).
pub fn re_i64_defect(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let v = i_modular(&Tau::quadratic(-3, 15, 6, p)?, ctx)?.re();
    let pi = const_pi(ctx);
    let l = modular_l(NewformId::F15, 2, ctx)?;
    let a = f3(&Tau::quadratic(0, 15, 3, p)?, ctx)?;
    let b = f3(&Tau::quadratic(0, 15, 1, p)?, ctx)?;
    let x = (&a.mul_i64(3) - &b).re();
    let head = pi.pow_i32(3).mul_float(&Float::with_val(p, 15u32).sqrt()).mul_i64(43).div_i64(15);
    let bracket = &(&head - &zeta_int(3, ctx)?.mul_i64(45)) - &x.mul_i64(45);
    let k = &l / &pi.pow_i32(2).mul_i64(8);
    Ok(&v - &(&k * &bracket))
}

/// Σ_{n≥1} c_n n^{-k} qⁿ for the coefficients c_n of σ (weight 4, level 6).
pub(crate) fn sigma_series(tau: &Tau, k: u32, prec: u32) -> Result<(Complex, Radius)> {
    let p = prec + 16;
    let aq = tau.abs_q_f64();
    if aq >= 0.99 {
        return Err(Error::NoConvergence { what: "sigma series (|q| too close to 1)", limit: 0 });
    }
    // |c_n| ≤ 8160 ζ(3) n³ < 9900 n³
    let e = 3.0 - k as f64;
    let target = -(p as f64) - 16.0;
    let mut n = 1usize;
    while 13.3 + e * (n as f64).log2() + n as f64 * aq.log2() > target || (e > 0.0 && e / n as f64 > -aq.ln() / 2.0) {
        n += 1;
        if n > 200_000 {
            return Err(Error::NoConvergence { what: "sigma series", limit: n });
        }
    }
    let coeffs = sigma_weight_qexp(n + 1)?;
    let q = tau.q(p);
    let mut acc = Complex::with_val(p, 0);
    for j in (1..=n).rev() {
        let c = Rational::from(coeffs.coeff(j) / Integer::from(j).pow(k));
        acc += Float::with_val(p, &c);
        acc *= &q;
    }
    let ratio = Float::with_val(64, aq) * Float::with_val(64, (1.0 + 1.0 / n as f64).powf(e.max(0.0)));
    let first = Float::with_val(64, aq).pow(n as u32 + 1) * Float::with_val(64, ((n + 1) as f64).powf(e)) * 9900u32;
    Ok((Complex::with_val(prec, acc), Radius::geometric_tail(&first, &ratio)))
}

/// Exact identity c_N = N³ Σ_{d|N} ψ(d)/d³ for N ≤ n: the q-expansion of
/// the termwise integrated σ coincides with the ψ Lambert series.
pub fn bkv_coefficients_match(n: usize) -> Result<bool> {
    let c = sigma_weight_qexp(n + 1)?;
    if *c.coeff(0) != -24 {
        return Ok(false);
    }
    for big_n in 1..=n {
        let mut s = Rational::new();
        for d in (1..=big_n).filter(|d| big_n % d == 0) {
            s += Rational::from((PsiWeight::at(d as i64), Integer::from(d).pow(3)));
        }
        if (s * Integer::from(big_n).pow(3)) != *c.coeff(big_n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Termwise integration of ½∫(log(q̂/q))² σ dlog q̂ against the ψ Lambert series.
pub fn bkv_qpart(tau: &Tau, ctx: &PrecisionContext) -> Result<Relation> {
    let p = ctx.prec();
    let (a, ra) = sigma_series(tau, 3, p)?;
    let (b, rb) = psi_lambert(tau, p)?;
    Ok(Relation::new("sigma q-part vs psi Lambert series", ApproxComplex::new(a, ra), ApproxComplex::new(b, rb)))
}

/// L³I − (−24) at t0 by an order-6 central stencil of step 10^{-digits/6}.
pub fn apply_l3_numeric(t0: &Rational, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let h = Float::with_val(ctx.prec(), 10u32).pow(-(ctx.decimal_digits() as i32) / 6);
    apply_l3_with_step(t0, &h, ctx)
}

/// As [`apply_l3_numeric`] with an explicit step.
pub fn apply_l3_with_step(t0: &Rational, h: &Float, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let p = ctx.prec();
    let t0f = Float::with_val(p, t0);
    let seed = cm_points()
        .iter()
        .filter(|c| c.t < 16)
        .min_by(|a, b| {
            let da = Float::with_val(64, Float::with_val(64, &t0f - a.t).abs());
            let db = Float::with_val(64, Float::with_val(64, &t0f - b.t).abs());
            da.partial_cmp(&db).expect("finite distances")
        })
        .ok_or_else(|| Error::Domain("empty CM table".into()))?
        .tau(p);
    let tau0 = invert_t(&Complex::with_val(p, &t0f), &seed, ctx)?;
    let mut samples = Vec::with_capacity(9);
    let mut rad = Radius::zero();
    for k in -4i32..=4 {
        let target = Complex::with_val(p, Float::with_val(p, h * k) + &t0f);
        let tau = if k == 0 { tau0.clone() } else { invert_t(&target, &tau0, ctx)? };
        let v = i_modular(&tau, ctx)?;
        rad = rad.max(v.rad());
        samples.push(v.into_mid());
    }
    let derivs = stencil_derivatives(&samples, h)?;
    let l = pf_l3().apply_values(&Complex::with_val(p, &t0f), &derivs)?;
    let res = Complex::with_val(p, l + 24u32);
    // sample noise amplified by the third-derivative stencil and leading coefficient
    let lead = Float::with_val(64, pf_l3().leading().eval_float(&t0f).abs()) + 1u32;
    let hh = Float::with_val(64, h.clone().pow(3u32));
    let noise = rad.add(&Radius::ulp_complex(&samples[4], p)).scale(&(lead * 4u32 / hh));
    Ok(ApproxComplex::new(res, noise))
}
