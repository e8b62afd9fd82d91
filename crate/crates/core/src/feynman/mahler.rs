use std::f64::consts::{FRAC_PI_4, LN_2, PI};

use rug::float::Constant;
use rug::Float;

use super::banana::sigma_series;
use crate::lfun::{dirichlet_l, modular_l};
use crate::mpcore::quad::gauss_legendre_f64;
use crate::mpcore::{const_pi, ApproxReal, PrecisionContext, Radius};
use crate::qseries::{cm_point, NewformId, Tau};
use crate::{Error, Result};

/// m(t(τ)) = (1/24)∫ σ dlog q̂ integrated termwise:
/// Re(−2πiτ) + (1/24) Re Σ c_n qⁿ/n.
///
/// The additive constant is 0, matching m(t) = log|t| + o(1) as τ → i∞.
pub fn mahler_q(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let (s, rad) = sigma_series(tau, 1, p + 8)?;
    let two_pi = Float::with_val(p + 8, Constant::Pi) * 2u32;
    let mid = Float::with_val(p, two_pi * tau.im() + Float::with_val(p + 8, s.real() / 24u32));
    let rad = rad.scale_f64(1.0 / 24.0).add(&Radius::ulp(&mid, p).scale_f64(8.0));
    Ok(ApproxReal::new(mid, rad))
}

/// The hauptmodul values with a known Mahler measure.
pub const MAHLER_CM_VALUES: [i64; 5] = [16, 4, -32, -2, 1];

/// [`mahler_q`] at the CM point with t(τ) = t.
pub fn mahler_cm(t: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if !MAHLER_CM_VALUES.contains(&t) {
        return Err(Error::Unknown { kind: "CM value for m(t)", name: t.to_string() });
    }
    mahler_q(&cm_point(t)?.tau(ctx.prec()), ctx)
}

/// L-value closed forms of m(t) for t ∈ {16, 4, −32, −2, 1}.
pub fn mahler_closed(t: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let pi = const_pi(ctx);
    let s3 = Float::with_val(p, 3u32).sqrt();
    let lg3 = || -> Result<ApproxReal> { Ok(modular_l(NewformId::G12, 3, ctx)?.mul_float(&s3)) };
    let cat = || -> Result<ApproxReal> { Ok(&dirichlet_l(-4, 2, ctx)? / &pi) };
    let g = |k: i64| -> Result<ApproxReal> { Ok(&lg3()?.mul_i64(k) / &pi.pow_i32(3)) };
    match t {
        16 => g(48),
        4 => g(12),
        -32 => Ok(&g(48)? + &cat()?.mul_i64(4)),
        -2 => Ok(&g(21)? + &cat()?.mul_i64(2)),
        1 => Ok((&dirichlet_l(-3, 2, ctx)?.mul_float(&s3) / &pi).mul_i64(6).div_i64(5)),
        _ => Err(Error::Unknown { kind: "closed form for m(t)", name: t.to_string() }),
    }
}

/// (21/π²) L(E, 2) for the conductor-14 curve, the common value of
/// m(S₈), 6m(S₂) and (3/5)m(S₋₇).
pub fn mahler_s_closed(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let l = modular_l(NewformId::E14, 2, ctx)?;
    Ok((&l / &const_pi(ctx).pow_i32(2)).mul_i64(21))
}

/// m(1 + x₁ + x₂ + x₃ + x₄) = log 2 + ∫₀^∞ (e^{−u} − J₀(u)⁵) du/u.
pub fn mahler_linear5(ctx: &PrecisionContext) -> Result<ApproxReal> {
    mahler_linear5_with_cutoff(400.0, ctx)
}

/// As [`mahler_linear5`], integrating numerically up to `cutoff` and
/// adding the leading Hankel asymptotics of the oscillatory tail.
pub fn mahler_linear5_with_cutoff(cutoff: f64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if !(cutoff >= 50.0 && cutoff.is_finite()) {
        return Err(Error::Domain(format!("Bessel integral cutoff must be >= 50, got {cutoff}")));
    }
    let f = |u: f64| {
        let j = libm::j0(u);
        ((-u).exp() - j * j * j * j * j) / u
    };
    let rule = gauss_legendre_f64(24);
    let panels = cutoff.ceil() as usize;
    let width = cutoff / panels as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..panels {
        let (a, b) = (k as f64 * width, (k + 1) as f64 * width);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let s: f64 = rule.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half;
        // Kahan summation over the panels
        let y = s - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // −∫_U^∞ J₀⁵/u with J₀(u) ~ (2/πu)^{1/2} cos(u − π/4) and
    // cos⁵ = (10 cos x + 5 cos 3x + cos 5x)/16
    let u = cutoff;
    let amp = (2.0 / PI).powf(2.5) * u.powf(-3.5);
    let osc: f64 = [(1.0, 10.0), (3.0, 5.0), (5.0, 1.0)]
        .iter()
        .map(|(k, a)| a / 16.0 * (k * (u - FRAC_PI_4)).sin() / k)
        .sum();
    let tail = amp * osc;
    let v = LN_2 + sum + tail;
    let err = amp * 2.0 / u + 1e-13;
    let mid = Float::with_val(ctx.prec(), v);
    Ok(ApproxReal::new(mid, Radius::from_f64(err)))
}

/// 6 (√15/(2π))⁵ L(f, 4).
pub fn rv_conjecture_rhs(ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let l = modular_l(NewformId::F15, 4, ctx)?;
    let k = (&ApproxReal::exact(Float::with_val(p, 15u32).sqrt()) / &const_pi(ctx).mul_i64(2)).pow_i32(5);
    Ok((&k * &l).mul_i64(6))
}
