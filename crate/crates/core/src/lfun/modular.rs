use rug::ops::Pow;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::mpcore::{gamma_rational, incomplete_gamma_int, ApproxReal, PrecisionContext, Radius};
use crate::qseries::{newform_qexp, NewformId};
use crate::{Error, Result};

/// Coefficients a_1..a_M of one of the three newforms with level, weight and
/// functional-equation sign.
#[derive(Clone, Debug)]
pub struct NewformData {
    pub id: NewformId,
    pub level: u32,
    pub weight: u32,
    pub coeffs: Vec<Integer>,
    pub sign: Option<i32>,
}

fn coeff_cache() -> &'static RwLock<HashMap<NewformId, Vec<Integer>>> {
    static CACHE: OnceLock<RwLock<HashMap<NewformId, Vec<Integer>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn coefficients(id: NewformId, count: usize) -> Result<Vec<Integer>> {
    if let Some(c) = coeff_cache().read().expect("coefficient cache poisoned").get(&id) {
        if c.len() >= count {
            return Ok(c[..count].to_vec());
        }
    }
    let q = newform_qexp(id, count.max(64))?;
    let ints = q.integer_coeffs().ok_or_else(|| Error::Inconsistent(format!("{id} has non-integral coefficients")))?;
    if ints[0] != 1 {
        return Err(Error::Inconsistent(format!("{id} is not normalized")));
    }
    let mut w = coeff_cache().write().expect("coefficient cache poisoned");
    let entry = w.entry(id).or_default();
    if entry.len() < ints.len() {
        *entry = ints.clone();
    }
    Ok(ints[..count].to_vec())
}

impl NewformData {
    pub fn load(id: NewformId, count: usize) -> Result<Self> {
        Ok(Self { id, level: id.level(), weight: id.weight(), coeffs: coefficients(id, count)?, sign: None })
    }
}

/// Number of terms so that e^{−2πM/(A√N)} M^k drops below 10^{−digits−5}.
fn term_count(level: u32, weight: u32, split: f64, digits: u32) -> usize {
    let rate = 2.0 * std::f64::consts::PI / (split.max(1.0 / split) * (level as f64).sqrt());
    let target = (digits as f64 + 5.0) * std::f64::consts::LN_10;
    let mut m = 1.0f64;
    while rate * m - weight as f64 * m.ln() < target {
        m += 1.0;
    }
    m as usize + 1
}

/// L(s) from the two-sum expansion of Λ(s) = (√N/2π)^s Γ(s) L(s) = ε Λ(k−s)
/// split at t = A:
///
/// L(s) = Σ aₙ n^{-s} Γ(s, 2πnA/√N)/Γ(s)
///      + ε (√N/2π)^{k−2s} Σ aₙ n^{s−k} Γ(k−s, 2πn/(A√N))/Γ(s).
pub fn modular_l_split(id: NewformId, s: u32, sign: i32, split: &Rational, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if s == 0 {
        return Err(Error::Domain("modular_l needs s >= 1".into()));
    }
    let (n, k) = (id.level(), id.weight() as i64);
    let split_f = split.to_f64();
    let work = ctx.raised(10);
    let p = work.prec();
    let m = term_count(n, k as u32, split_f, ctx.decimal_digits());
    let a = coefficients(id, m)?;
    let pi = Float::with_val(p, Constant::Pi);
    let sn = Float::with_val(p, n).sqrt();
    let af = Float::with_val(p, split);
    let base1 = Float::with_val(p, &pi * 2u32) * &af / &sn;
    let base2 = Float::with_val(p, &pi * 2u32) / (Float::with_val(p, &af * &sn));
    let gamma_s = Float::with_val(p, Integer::from(Integer::factorial(s - 1)));
    let si = s as i64;
    let mut first = ApproxReal::exact(Float::with_val(p, 0));
    let mut second = ApproxReal::exact(Float::with_val(p, 0));
    for (i, an) in a.iter().enumerate() {
        if an.is_zero() {
            continue;
        }
        let nn = (i + 1) as i64;
        let nf = Float::with_val(p, nn);
        let g1 = incomplete_gamma_int(si, &Float::with_val(p, &base1 * nn), &work)?;
        let w1 = Float::with_val(p, nf.clone().pow(-(si as i32))) * Float::with_val(p, an);
        first = &first + &g1.mul_float(&w1);
        let g2 = incomplete_gamma_int(k - si, &Float::with_val(p, &base2 * nn), &work)?;
        let w2 = Float::with_val(p, nf.pow((si - k) as i32)) * Float::with_val(p, an);
        second = &second + &g2.mul_float(&w2);
    }
    let ratio = Float::with_val(p, &sn / Float::with_val(p, &pi * 2u32));
    let pre2 = Float::with_val(p, ratio.pow((k - 2 * si) as i32)) * sign;
    let total = &first + &second.mul_float(&pre2);
    let out = total.mul_float(&Float::with_val(p, gamma_s.recip_ref()));
    // truncation beyond M is below 10^{-digits-5} by the choice of M
    let trunc = Radius::from_f64(10f64.powi(-(ctx.decimal_digits() as i32) - 5));
    let mut mid = out.mid().clone();
    mid.set_prec(ctx.prec());
    Ok(ApproxReal::new(mid, out.rad().add(&trunc)))
}

const SPLIT_A: (i64, i64) = (1, 1);
const SPLIT_B: (i64, i64) = (6, 5);

/// The sign ε making the expansion independent of the split point, tested
/// at A = 1 and A = 6/5 with s = 1.
pub fn fricke_sign(id: NewformId, ctx: &PrecisionContext) -> Result<i32> {
    static SIGNS: OnceLock<RwLock<HashMap<NewformId, i32>>> = OnceLock::new();
    let cache = SIGNS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(e) = cache.read().expect("sign cache poisoned").get(&id) {
        return Ok(*e);
    }
    let digits = ctx.decimal_digits().min(30);
    let c = ctx.with_digits(digits)?;
    let tol = -(digits as i64) / 2;
    let mut consistent = Vec::new();
    for eps in [1, -1] {
        let a = modular_l_split(id, 1, eps, &Rational::from(SPLIT_A), &c)?;
        let b = modular_l_split(id, 1, eps, &Rational::from(SPLIT_B), &c)?;
        let diff = a.abs_diff(&b);
        let l = if diff.is_zero() { i64::MIN } else { Float::with_val(64, diff.log10_ref()).to_f64().ceil() as i64 };
        if l < tol {
            consistent.push(eps);
        }
    }
    match consistent.as_slice() {
        [e] => {
            cache.write().expect("sign cache poisoned").insert(id, *e);
            Ok(*e)
        }
        [] => Err(Error::Inconsistent(format!("no functional-equation sign fits {id}"))),
        _ => Err(Error::Inconsistent(format!("both signs fit {id}; the split test is degenerate"))),
    }
}

/// L(form, s) with the sign determined by [`fricke_sign`].
pub fn modular_l(id: NewformId, s: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let eps = fricke_sign(id, ctx)?;
    modular_l_split(id, s, eps, &Rational::from(SPLIT_A), ctx)
}

/// Gamma-product forms of L(f15, 2) and L(g12, 2).
pub fn rwz_closed(id: NewformId, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let pi = ApproxReal::rounded(Float::with_val(p, Constant::Pi));
    match id {
        NewformId::F15 => {
            let mut g = gamma_rational(1, 15, ctx)?;
            for k in [2, 4, 8] {
                g = &g * &gamma_rational(k, 15, ctx)?;
            }
            let den = pi.mul_float(&Float::with_val(p, 3u32).sqrt()).mul_i64(120);
            Ok(&g / &den)
        }
        NewformId::G12 => {
            let g = gamma_rational(1, 3, ctx)?.pow_i32(6);
            let two = Float::with_val(p, 2u32);
            let t = Float::with_val(p, two.pow(Float::with_val(p, 17u32) / 3u32));
            Ok(&g / &pi.pow_i32(2).mul_float(&t))
        }
        NewformId::E14 => Err(Error::Unknown { kind: "gamma-product L-value", name: id.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;

    #[test]
    fn signs() {
        let c = make_context(30).unwrap();
        for id in [NewformId::F15, NewformId::G12, NewformId::E14] {
            let e = fricke_sign(id, &c).unwrap();
            assert_eq!(e, 1, "{id}");
        }
    }

    #[test]
    fn closed_forms_and_split_independence() {
        let c = make_context(60).unwrap();
        for id in [NewformId::F15, NewformId::G12] {
            let l = modular_l(id, 2, &c).unwrap();
            let r = rwz_closed(id, &c).unwrap();
            assert!(l.digits_matched(&r) >= 58, "{id}: {}", l.digits_matched(&r));
            let other = modular_l_split(id, 2, 1, &Rational::from((2, 1)), &c).unwrap();
            assert!(l.digits_matched(&other) >= 58);
        }
        let f2 = modular_l(NewformId::F15, 2, &c).unwrap().to_f64();
        assert!((f2 - 0.880_459_825_358_229_9).abs() < 1e-14);
    }

    #[test]
    fn higher_values_split_independent() {
        let c = make_context(40).unwrap();
        for (id, s) in [(NewformId::F15, 3), (NewformId::F15, 4), (NewformId::G12, 3), (NewformId::E14, 2)] {
            let a = modular_l(id, s, &c).unwrap();
            let b = modular_l_split(id, s, 1, &Rational::from((7, 4)), &c).unwrap();
            assert!(a.digits_matched(&b) >= 38, "{id} s={s}");
        }
    }

    #[test]
    fn dirichlet_series_agrees_when_convergent() {
        // for weight 2 at s = 4 the Dirichlet series converges fast enough to
        // be summed directly with a crude tail bound
        let c = make_context(20).unwrap();
        let a = coefficients(NewformId::E14, 20000).unwrap();
        let mut s = 0f64;
        for (i, an) in a.iter().enumerate().rev() {
            s += an.to_f64() / ((i + 1) as f64).powi(4);
        }
        let l = modular_l(NewformId::E14, 4, &c).unwrap().to_f64();
        assert!((s - l).abs() < 1e-9, "{s} vs {l}");
    }
}
