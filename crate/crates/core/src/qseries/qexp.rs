use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

use crate::{Error, Result};

/// Truncated Fourier expansion `Σ_{k<order} c_k q^{lead + k} + O(q^{lead + order})`
/// with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    lead: Rational,
    coeffs: Vec<Rational>,
}

impl QExpansion {
    pub fn new(lead: Rational, coeffs: Vec<Rational>) -> Self {
        Self { lead, coeffs }
    }

    pub fn from_integers(lead: Rational, coeffs: Vec<Integer>) -> Self {
        Self { lead, coeffs: coeffs.into_iter().map(Rational::from).collect() }
    }

    /// The constant 1 known to `order` terms.
    pub fn one(order: usize) -> Self {
        let mut c = vec![Rational::new(); order];
        if order > 0 {
            c[0] = Rational::from(1);
        }
        Self { lead: Rational::new(), coeffs: c }
    }

    pub fn lead(&self) -> &Rational {
        &self.lead
    }

    /// Number of exactly known coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^(lead + k)`.
    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Coefficient of `q^e`; `None` beyond the truncation order.
    pub fn coeff_at(&self, e: &Rational) -> Option<Rational> {
        let d = Rational::from(e - &self.lead);
        if *d.denom() != 1 {
            return Some(Rational::new());
        }
        if d < 0 {
            return Some(Rational::new());
        }
        let k = d.numer().to_usize()?;
        self.coeffs.get(k).cloned()
    }

    /// Integer coefficients of `q^n` for `n = 0..order` assuming integral lead.
    pub fn integer_coeffs(&self) -> Option<Vec<Integer>> {
        self.coeffs.iter().map(|c| if *c.denom() == 1 { Some(c.numer().clone()) } else { None }).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order);
        Self { lead: self.lead.clone(), coeffs: c }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { lead: self.lead.clone(), coeffs: self.coeffs.iter().map(|c| Rational::from(c * k)).collect() }
    }

    /// `f(mτ)`: every exponent multiplied by `m`.
    pub fn dilate(&self, m: usize) -> Self {
        assert!(m >= 1);
        let n = self.coeffs.len() * m;
        let mut c = vec![Rational::new(); n.saturating_sub(m - 1)];
        for (k, v) in self.coeffs.iter().enumerate() {
            if k * m < c.len() {
                c[k * m] = v.clone();
            }
        }
        Self { lead: Rational::from(&self.lead * m as u32), coeffs: c }
    }

    /// `f(τ + 1/2)`: the coefficient of `q^e` picks up `e^{πi e}`; requires
    /// the lead to be an integer.
    pub fn half_shift(&self) -> Result<Self> {
        if *self.lead.denom() != 1 {
            return Err(Error::Domain("half_shift needs an integral leading exponent".into()));
        }
        let base_odd = self.lead.numer().is_odd();
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, v)| if (k % 2 == 1) ^ base_odd { Rational::from(-v) } else { v.clone() })
            .collect();
        Ok(Self { lead: self.lead.clone(), coeffs: c })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.coeffs.len();
        if n == 0 || self.coeffs[0] == 0 {
            return Err(Error::Domain("series inverse needs a nonzero leading coefficient".into()));
        }
        let inv0 = Rational::from(self.coeffs[0].recip_ref());
        let mut out = vec![Rational::new(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut s = Rational::new();
            for j in 1..=k {
                s += Rational::from(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -(s * &inv0);
        }
        Ok(Self { lead: Rational::from(-&self.lead), coeffs: out })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QExpansion { lead: Rational::new(), coeffs: Self::one(self.order()).coeffs };
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Evaluate at τ as `Σ c_k e^{2πi τ (lead + k)}`, truncated to the known terms.
    pub fn evaluate(&self, tau: &Complex, prec: u32) -> Complex {
        let p = prec + 16;
        let two_pi_i = Complex::with_val(p, (0, Float::with_val(p, Constant::Pi) * 2u32));
        let q = Complex::with_val(p, Complex::with_val(p, &two_pi_i * tau).exp_ref());
        let lead = Complex::with_val(p, &two_pi_i * tau) * Float::with_val(p, &self.lead);
        let pre = Complex::with_val(p, lead.exp_ref());
        let mut acc = Complex::with_val(p, 0);
        for c in self.coeffs.iter().rev() {
            acc *= &q;
            acc += Float::with_val(p, c);
        }
        Complex::with_val(prec, acc * pre)
    }

    fn aligned(a: &Self, b: &Self) -> (Rational, Vec<Rational>, Vec<Rational>, usize) {
        let d = Rational::from(&b.lead - &a.lead);
        assert!(*d.denom() == 1, "leading exponents must differ by an integer");
        let shift = d.numer().to_i64().expect("shift fits");
        let (lead, sa, sb) = if shift >= 0 { (a.lead.clone(), 0usize, shift as usize) } else { (b.lead.clone(), (-shift) as usize, 0) };
        let end = (a.coeffs.len() + sa).min(b.coeffs.len() + sb);
        let mut ca = vec![Rational::new(); end];
        let mut cb = vec![Rational::new(); end];
        for (k, v) in a.coeffs.iter().enumerate() {
            if k + sa < end {
                ca[k + sa] = v.clone();
            }
        }
        for (k, v) in b.coeffs.iter().enumerate() {
            if k + sb < end {
                cb[k + sb] = v.clone();
            }
        }
        (lead, ca, cb, end)
    }
}

impl Add for &QExpansion {
    type Output = QExpansion;
    fn add(self, rhs: &QExpansion) -> QExpansion {
        let (lead, a, b, _) = QExpansion::aligned(self, rhs);
        QExpansion { lead, coeffs: a.into_iter().zip(b).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;
    fn sub(self, rhs: &QExpansion) -> QExpansion {
        let (lead, a, b, _) = QExpansion::aligned(self, rhs);
        QExpansion { lead, coeffs: a.into_iter().zip(b).map(|(x, y)| x - y).collect() }
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;
    fn neg(self) -> QExpansion {
        QExpansion { lead: self.lead.clone(), coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut c = vec![Rational::new(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if *b != 0 {
                    c[i + j] += Rational::from(a * b);
                }
            }
        }
        QExpansion { lead: Rational::from(&self.lead + &rhs.lead), coeffs: c }
    }
}
