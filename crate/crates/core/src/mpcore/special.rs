use std::sync::{OnceLock, RwLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::{ApproxReal, PrecisionContext};

/// Exact rational number; `rug::Rational` is always kept in lowest terms
/// with a positive denominator.
pub type ExactRational = Rational;

pub fn const_pi(ctx: &PrecisionContext) -> ApproxReal {
    ApproxReal::rounded(Float::with_val(ctx.prec(), Constant::Pi))
}

pub fn euler_gamma(ctx: &PrecisionContext) -> ApproxReal {
    ApproxReal::rounded(Float::with_val(ctx.prec(), Constant::Euler))
}

fn even_bernoulli_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// B_0, B_2, ..., B_{2m} from tangent numbers, all in integer arithmetic.
fn even_bernoulli_upto(m: usize) -> Vec<Rational> {
    let mut t: Vec<Integer> = vec![Integer::new(); m + 1];
    if m >= 1 {
        t[1] = Integer::from(1);
    }
    for k in 2..=m {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=m {
        for j in k..=m {
            let a = Integer::from(&t[j - 1] * (j - k) as u64);
            let b = Integer::from(&t[j] * (j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    let mut out = Vec::with_capacity(m + 1);
    out.push(Rational::from(1));
    for (k, tk) in t.iter().enumerate().skip(1) {
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = &four_k * Integer::from(&four_k - 1) ;
        let mut num = Integer::from(tk * (2 * k as u64));
        if k % 2 == 0 {
            num = -num;
        }
        out.push(Rational::from((num, den)));
    }
    out
}

/// The Bernoulli number B_k with B_1 = -1/2.
pub fn bernoulli(k: u32) -> ExactRational {
    match k {
        0 => return Rational::from(1),
        1 => return Rational::from((-1, 2)),
        _ if k % 2 == 1 => return Rational::new(),
        _ => {}
    }
    let idx = (k / 2) as usize;
    {
        let cache = even_bernoulli_cache().read().expect("bernoulli cache poisoned");
        if idx < cache.len() {
            return cache[idx].clone();
        }
    }
    let mut cache = even_bernoulli_cache().write().expect("bernoulli cache poisoned");
    if idx >= cache.len() {
        let target = idx.max(2 * cache.len()).max(64);
        *cache = even_bernoulli_upto(target);
    }
    cache[idx].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn binom(n: u32, k: u32) -> Integer {
        Integer::from(Integer::binomial_u(n, k))
    }

    #[test]
    fn tabulated_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(7), Rational::new());
    }

    #[test]
    fn binomial_recurrence() {
        for n in 2..=80u32 {
            let mut s = Rational::new();
            for k in 0..n {
                s += Rational::from(binom(n, k)) * bernoulli(k);
            }
            assert_eq!(s, Rational::new(), "n = {n}");
        }
    }

    #[test]
    fn large_index_matches_zeta_size() {
        // |B_2k| ~ 2 (2k)! / (2 pi)^(2k)
        let b = bernoulli(200);
        let f = Float::with_val(256, &b).abs();
        let fact = Float::with_val(256, Integer::from(Integer::factorial(200)));
        let pi2 = Float::with_val(256, Constant::Pi) * 2u32;
        let approx = Float::with_val(256, 2u32) * fact / pi2.pow(200u32);
        let rel = Float::with_val(256, &f / &approx) - 1u32;
        assert!(rel.abs() < 1e-50);
    }

    #[test]
    fn pi_value() {
        let c = super::super::make_context(50).unwrap();
        assert!(const_pi(&c).to_decimal(20).starts_with("3.141592653589793238"));
    }
}
