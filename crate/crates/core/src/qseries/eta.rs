use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use super::QExpansion;
use crate::mpcore::{ApproxComplex, PrecisionContext, Radius};
use crate::{Error, Result};

/// A point of the upper half-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Tau(Complex);

impl Tau {
    pub fn new(z: Complex) -> Result<Self> {
        if *z.imag() <= 0 || !z.imag().is_finite() || !z.real().is_finite() {
            return Err(Error::Domain(format!("tau must lie in the upper half-plane, got Im = {}", z.imag().to_f64())));
        }
        Ok(Tau(z))
    }

    pub fn from_parts(re: &Float, im: &Float, prec: u32) -> Result<Self> {
        Self::new(Complex::with_val(prec, (re, im)))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Result<Self> {
        Self::new(Complex::with_val(prec, (re, im)))
    }

    /// `(b + sqrt(-d)) / den` for `d > 0`.
    pub fn quadratic(b: i64, d: u64, den: i64, prec: u32) -> Result<Self> {
        let p = prec + 16;
        let re = Float::with_val(p, b) / den;
        let im = Float::with_val(p, d).sqrt() / den;
        Self::new(Complex::with_val(prec, (re, im)))
    }

    pub fn value(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0
    }

    pub fn with_prec(&self, prec: u32) -> Tau {
        Tau(Complex::with_val(prec, &self.0))
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self, prec: u32) -> Complex {
        let two_pi = Float::with_val(prec + 8, Constant::Pi) * 2u32;
        let z = Complex::with_val(prec + 8, &self.0 * Complex::with_val(prec + 8, (0, two_pi)));
        Complex::with_val(prec, z.exp_ref())
    }

    /// |q| as a double, useful for choosing truncation lengths.
    pub fn abs_q_f64(&self) -> f64 {
        (-2.0 * std::f64::consts::PI * self.im().to_f64()).exp()
    }

    pub fn shifted(&self, r: &Rational) -> Tau {
        let p = self.prec();
        Tau(Complex::with_val(p, &self.0 + Float::with_val(p, r)))
    }

    pub fn scaled(&self, r: &Rational) -> Tau {
        assert!(*r > 0, "scaling factor must be positive");
        let p = self.prec();
        Tau(Complex::with_val(p, &self.0 * Float::with_val(p, r)))
    }

    /// −1/τ.
    pub fn neg_inv(&self) -> Tau {
        let p = self.prec();
        Tau(Complex::with_val(p, -Complex::with_val(p, self.0.recip_ref())))
    }

    /// Fricke involution −1/(Nτ).
    pub fn fricke(&self, n: u32) -> Tau {
        let p = self.prec();
        let nt = Complex::with_val(p, &self.0 * n);
        Tau(Complex::with_val(p, -Complex::with_val(p, nt.recip_ref())))
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.20e} + {:.20e}i", self.re().to_f64(), self.im().to_f64())
    }
}

/// `e^{πiτ/12} Σ_k (-1)^k q^{k(3k-1)/2}` for τ with moderate imaginary part.
fn eta_series(tau: &Complex, prec: u32) -> Result<(Complex, Radius)> {
    let p = prec + 16;
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi_i = Complex::with_val(p, (0, Float::with_val(p, &pi * 2u32)));
    let q = Complex::with_val(p, Complex::with_val(p, &two_pi_i * tau).exp_ref());
    let aq = Float::with_val(64, q.abs_ref());
    if aq >= 0.999 {
        return Err(Error::NoConvergence { what: "eta series (|q| too close to 1)", limit: 0 });
    }
    let target = -(p as f64);
    let lq = aq.clone().log2().to_f64();
    let mut sum = Complex::with_val(p, 1);
    let mut k: i64 = 1;
    let mut tail;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        let t1 = Complex::with_val(p, q.clone().pow(e1 as u32));
        let t2 = Complex::with_val(p, q.clone().pow(e2 as u32));
        let s = Complex::with_val(p, &t1 + &t2);
        if k % 2 == 1 {
            sum -= s;
        } else {
            sum += s;
        }
        k += 1;
        let next = (k * (3 * k - 1) / 2) as f64;
        if next * lq < target - 4.0 {
            let first = Float::with_val(64, aq.clone().pow(next as u32));
            tail = Radius::geometric_tail(&(first * 2u32), &aq);
            break;
        }
        if k > 1_000_000 {
            return Err(Error::NoConvergence { what: "eta series", limit: k as usize });
        }
    }
    let pre = Complex::with_val(p, Complex::with_val(p, &two_pi_i * tau) / 24u32);
    let pre = Complex::with_val(p, pre.exp_ref());
    let apre = Float::with_val(64, pre.abs_ref());
    tail = tail.scale(&apre);
    Ok((Complex::with_val(prec, sum * pre), tail))
}

/// η(τ) with reduction into the standard fundamental domain first.
pub fn eta(tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let prec = ctx.prec();
    let p = prec + 32;
    let pi = Float::with_val(p, Constant::Pi);
    let mut z = Complex::with_val(p, tau.value());
    let mut mult = Complex::with_val(p, 1);
    let one = Float::with_val(p, 1);
    for _ in 0..10_000 {
        let n = Float::with_val(p, z.real().round_ref());
        if !n.is_zero() {
            z -= &n;
            // η(z + n) = e^{πin/12} η(z)
            let ang = Float::with_val(p, &pi * &n) / 12u32;
            mult *= Complex::with_val(p, (0, ang)).exp();
        }
        let norm = Float::with_val(p, z.norm_ref());
        if norm < Float::with_val(p, &one - Float::with_val(p, &one >> (p as i32 / 2))) {
            // η(z) = η(-1/z) / sqrt(-iz)
            let miz = Complex::with_val(p, &z * Complex::with_val(p, (0, -1)));
            mult /= miz.sqrt();
            z = -Complex::with_val(p, z.recip_ref());
        } else {
            let (v, tail) = eta_series(&z, p)?;
            let amult = Float::with_val(64, mult.abs_ref());
            let out = Complex::with_val(prec, &v * &mult);
            let rad = tail.scale(&amult).add(&Radius::ulp_complex(&out, prec).scale_f64(16.0));
            return Ok(ApproxComplex::new(out, rad));
        }
    }
    Err(Error::NoConvergence { what: "eta modular reduction", limit: 10_000 })
}

/// A finite product `Π η(mτ)^e` with distinct multipliers in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    pub fn new(mut factors: Vec<(u32, i32)>) -> Result<Self> {
        factors.sort_by_key(|f| f.0);
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Domain(format!("repeated eta multiplier {}", w[0].0)));
            }
        }
        if factors.iter().any(|&(m, e)| m == 0 || e == 0) {
            return Err(Error::Domain("eta multipliers must be positive and exponents nonzero".into()));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    pub fn inverse(&self) -> Self {
        Self { factors: self.factors.iter().map(|&(m, e)| (m, -e)).collect() }
    }

    /// Leading exponent Σ m e / 24.
    pub fn leading_exponent(&self) -> Rational {
        let s: i64 = self.factors.iter().map(|&(m, e)| m as i64 * e as i64).sum();
        Rational::from((s, 24))
    }

    /// Weight Σ e / 2.
    pub fn weight(&self) -> Rational {
        let s: i64 = self.factors.iter().map(|&(_, e)| e as i64).sum();
        Rational::from((s, 2))
    }
}

pub fn eta_quotient_eval(spec: &EtaQuotientSpec, tau: &Tau, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    let mut acc = ApproxComplex::exact(Complex::with_val(ctx.prec(), 1));
    for &(m, e) in spec.factors() {
        let t = tau.scaled(&Rational::from(m));
        let v = eta(&t, ctx)?;
        acc = &acc * &v.pow_i32(e);
    }
    Ok(acc)
}

/// Exact expansion of the eta quotient to `n` coefficients after the
/// leading power, via the recursion `k p_k = Σ_j b_j p_{k-j}` with
/// `b_j = -Σ_{m | j} e_m m σ(j/m)`.
pub fn eta_quotient_qexp(spec: &EtaQuotientSpec, n: usize) -> Result<QExpansion> {
    if n == 0 {
        return Err(Error::Domain("eta_quotient_qexp needs n >= 1".into()));
    }
    let mut sigma = vec![Integer::new(); n];
    for d in 1..n {
        let mut k = d;
        while k < n {
            sigma[k] += d as u64;
            k += d;
        }
    }
    let mut b = vec![Integer::new(); n];
    for &(m, e) in spec.factors() {
        let m = m as usize;
        let mut j = m;
        while j < n {
            let v = Integer::from(&sigma[j / m] * (m as i64 * e as i64));
            b[j] -= v;
            j += m;
        }
    }
    let mut p = vec![Integer::new(); n];
    p[0] = Integer::from(1);
    for k in 1..n {
        let mut s = Integer::new();
        for j in 1..=k {
            if b[j] != 0 && p[k - j] != 0 {
                s += Integer::from(&b[j] * &p[k - j]);
            }
        }
        let (quo, rem) = s.div_rem(Integer::from(k));
        debug_assert!(rem == 0);
        p[k] = quo;
    }
    Ok(QExpansion::from_integers(spec.leading_exponent(), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::{gamma_rational, make_context, ApproxReal};
    use rand::{Rng, SeedableRng};

    fn rand_tau(rng: &mut rand_chacha::ChaCha8Rng, prec: u32) -> Tau {
        Tau::from_f64(rng.gen_range(-0.6..0.6), rng.gen_range(0.15..1.6), prec).unwrap()
    }

    #[test]
    fn transformation_laws_random() {
        let c = make_context(80).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let t = rand_tau(&mut rng, c.prec());
            let a = eta(&t, &c).unwrap();
            let b = eta(&t.shifted(&Rational::from(1)), &c).unwrap();
            let pi = Float::with_val(c.prec(), Constant::Pi);
            let e = Complex::with_val(c.prec(), (0, pi / 12u32)).exp();
            assert!((&b / &a).digits_matched(&ApproxComplex::exact(e)) >= 80);
            assert!(b.abs().digits_matched(&a.abs()) >= 80);
            let inv = eta(&t.neg_inv(), &c).unwrap();
            let s = Complex::with_val(c.prec(), t.value() * Complex::with_val(c.prec(), (0, -1))).sqrt();
            let want = a.mul_complex(&s);
            assert!(inv.digits_matched(&want) >= 80);
        }
    }

    #[test]
    fn reduced_and_direct_series_agree() {
        let c = make_context(60).unwrap();
        let t = Tau::from_f64(0.21, 0.3, c.prec()).unwrap();
        let a = eta(&t, &c).unwrap();
        let (b, _) = eta_series(t.value(), c.prec()).unwrap();
        assert!(a.digits_matched(&ApproxComplex::exact(b)) >= 60);
    }

    #[test]
    fn abs_eta_at_half_sqrt3() {
        // |η((3+√-3)/2)| = 3^{1/8} Γ(1/3)^{3/2} / (2π)
        let c = make_context(100).unwrap();
        let t = Tau::quadratic(3, 3, 2, c.prec()).unwrap();
        let v = eta(&t, &c).unwrap().abs();
        let g = gamma_rational(1, 3, &c).unwrap();
        let p = c.prec();
        let three8 = Float::with_val(p, 3).pow(Float::with_val(p, 0.125));
        let want = g.mid().clone().pow(Float::with_val(p, 1.5)) * three8 / (Float::with_val(p, Constant::Pi) * 2u32);
        assert!(v.digits_matched(&ApproxReal::exact(want)) >= 100);
    }

    #[test]
    fn quotient_group_property_and_product() {
        let c = make_context(50).unwrap();
        let spec = EtaQuotientSpec::new(vec![(2, 4), (6, 4), (1, -2), (3, -2)]).unwrap();
        let t = Tau::from_f64(-0.1, 0.4, c.prec()).unwrap();
        let a = eta_quotient_eval(&spec, &t, &c).unwrap();
        let b = eta_quotient_eval(&spec.inverse(), &t, &c).unwrap();
        let one = ApproxComplex::exact(Complex::with_val(c.prec(), 1));
        assert!((&a * &b).digits_matched(&one) >= 50);
        let q = eta_quotient_qexp(&spec, 200).unwrap();
        let v = q.evaluate(t.value(), c.prec());
        assert!(a.digits_matched(&ApproxComplex::exact(v)) >= 30);
    }

    #[test]
    fn qexp_bookkeeping() {
        let spec = EtaQuotientSpec::new(vec![(1, 24), (2, -24)]).unwrap();
        let q = eta_quotient_qexp(&spec, 10).unwrap();
        assert_eq!(*q.lead(), Rational::from(-1));
        assert_eq!(*q.coeff(0), 1);
        assert_eq!(*q.coeff(1), -24);
        // Euler: Π(1 - q^n) = 1 - q - q^2 + q^5 + q^7 - ...
        let e = eta_quotient_qexp(&EtaQuotientSpec::new(vec![(1, 1)]).unwrap(), 13).unwrap();
        let want: Vec<i64> = vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
        assert_eq!(e.integer_coeffs().unwrap(), want.into_iter().map(Integer::from).collect::<Vec<_>>());
    }

    #[test]
    fn spec_validation() {
        assert!(EtaQuotientSpec::new(vec![(2, 1), (2, 3)]).is_err());
        assert!(EtaQuotientSpec::new(vec![(2, 0)]).is_err());
        assert!(Tau::from_f64(0.0, -1.0, 64).is_err());
    }
}
