use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Float, Rational};

use crate::{Error, Result};

/// Polynomial in one variable with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// Product of the linear factors (x − r).
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::constant(Rational::from(1)), |acc, &r| &acc * &Self::from_i64(&[-r, 1]))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| Rational::from(c * k as u32)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(x.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        let mut acc = Complex::with_val(x.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::Singular("polynomial division by zero".into()))?;
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::new(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = Rational::from(&r[r.len() - 1] / &lead);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= Rational::from(&c * dc);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| *c == 0) {
                r.pop();
            }
        }
        Ok((Self::new(q), Self::new(r)))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::new();
        RationalPoly::new(
            (0..n)
                .map(|k| Rational::from(self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)))
                .collect(),
        )
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self + &(-rhs)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut c = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += Rational::from(a * b);
            }
        }
        RationalPoly::new(c)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = Rational::from(c.abs_ref());
            match (k, a == 1) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of polynomials in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: RationalPoly,
    den: RationalPoly,
}

impl RationalFunction {
    pub fn new(num: RationalPoly, den: RationalPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Singular("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = RationalPoly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let lc = d.leading().recip();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(Self { num: n, den: d })
    }

    pub fn zero() -> Self {
        Self { num: RationalPoly::zero(), den: RationalPoly::constant(Rational::from(1)) }
    }

    pub fn poly(p: RationalPoly) -> Self {
        Self::new(p, RationalPoly::constant(Rational::from(1))).expect("unit denominator")
    }

    pub fn num(&self) -> &RationalPoly {
        &self.num
    }

    pub fn den(&self) -> &RationalPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Singular("division by the zero rational function".into()));
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d == 0 {
            return Err(Error::Singular(format!("pole at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        self.num.eval_float(x) / self.den.eval_float(x)
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Linear differential operator Σ c_k(t) D^k, D = d/dt.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    coeffs: Vec<RationalFunction>,
}

impl DiffOperator {
    /// Coefficients c₀..c_r; trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("the zero operator has no order".into()));
        }
        Ok(Self { coeffs })
    }

    fn from_polys(polys: Vec<RationalPoly>) -> Self {
        Self::new(polys.into_iter().map(RationalFunction::poly).collect()).expect("nonzero leading coefficient")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn leading(&self) -> &RationalFunction {
        &self.coeffs[self.order()]
    }

    /// Divide through by the leading coefficient.
    pub fn monicize(&self) -> Self {
        let lead = self.leading().clone();
        Self { coeffs: self.coeffs.iter().map(|c| c.div(&lead).expect("nonzero leading coefficient")).collect() }
    }

    /// Σ c_k(t) f^{(k)}(t) from the derivative values f, f′, …, f^{(r)} at t.
    pub fn apply_values(&self, t: &Complex, derivs: &[Complex]) -> Result<Complex> {
        if derivs.len() != self.coeffs.len() {
            return Err(Error::Domain(format!("expected {} derivative values, got {}", self.coeffs.len(), derivs.len())));
        }
        let mut acc = Complex::with_val(t.prec(), 0);
        for (c, d) in self.coeffs.iter().zip(derivs) {
            acc += c.eval_complex(t) * d;
        }
        Ok(acc)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}] D")?,
                _ => write!(f, "[{c}] D^{k}")?,
            }
        }
        Ok(())
    }
}

/// t²(t−4)(t−16)D³ + 6t(t²−15t+32)D² + (7t²−68t+64)D + (t−4).
pub fn pf_l3() -> DiffOperator {
    let quad = RationalPoly::from_i64(&[32, -15, 1]);
    DiffOperator::from_polys(vec![
        RationalPoly::from_i64(&[-4, 1]),
        RationalPoly::from_i64(&[64, -68, 7]),
        &RationalPoly::from_i64(&[0, 6]) * &quad,
        RationalPoly::from_roots(&[0, 0, 4, 16]),
    ])
}

/// t(t−4)(t−16)D² + 2(t²−15t+32)D + (t−8)/4.
pub fn pf_l2() -> DiffOperator {
    DiffOperator::from_polys(vec![
        RationalPoly::from_i64(&[-8, 1]).scale(&Rational::from((1, 4))),
        RationalPoly::from_i64(&[64, -30, 2]),
        RationalPoly::from_roots(&[0, 4, 16]),
    ])
}

/// r(r−1)(9r−1)D² + (27r²−20r+1)D + (9r−3), in the variable r.
pub fn pf_l2a() -> DiffOperator {
    DiffOperator::from_polys(vec![
        RationalPoly::from_i64(&[-3, 9]),
        RationalPoly::from_i64(&[1, -20, 27]),
        &RationalPoly::from_roots(&[0, 1]) * &RationalPoly::from_i64(&[-1, 9]),
    ])
}

/// Symmetric square of an order-2 operator, returned monic: for
/// D² + pD + q it is D³ + 3pD² + (p′ + 2p² + 4q)D + (4pq + 2q′).
pub fn symmetric_square(op: &DiffOperator) -> Result<DiffOperator> {
    if op.order() != 2 {
        return Err(Error::Domain(format!("symmetric square needs an order-2 operator, got order {}", op.order())));
    }
    let m = op.monicize();
    let q = &m.coeffs[0];
    let p = &m.coeffs[1];
    let k = |n: i64| Rational::from(n);
    let c2 = p.scale(&k(3));
    let c1 = &(&p.derivative() + &(p * p).scale(&k(2))) + &q.scale(&k(4));
    let c0 = &(p * q).scale(&k(4)) + &q.derivative().scale(&k(2));
    DiffOperator::new(vec![c0, c1, c2, RationalFunction::poly(RationalPoly::constant(k(1)))])
}

pub fn monicize(op: &DiffOperator) -> DiffOperator {
    op.monicize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sym2_of_l2_is_l3() {
        assert_eq!(monicize(&pf_l3()), symmetric_square(&pf_l2()).unwrap());
        assert_ne!(monicize(&pf_l3()), symmetric_square(&pf_l2a()).unwrap());
    }

    #[test]
    fn trivial_cases() {
        let d2 = DiffOperator::from_polys(vec![RationalPoly::zero(), RationalPoly::zero(), RationalPoly::from_i64(&[1])]);
        let d3 = DiffOperator::from_polys(vec![
            RationalPoly::zero(),
            RationalPoly::zero(),
            RationalPoly::zero(),
            RationalPoly::from_i64(&[1]),
        ]);
        assert_eq!(symmetric_square(&d2).unwrap(), d3);
        assert_eq!(pf_l2().leading().eval(&Rational::from(1)).unwrap(), 45);
        assert!(symmetric_square(&pf_l3()).is_err());
        assert_eq!(pf_l3().order(), 3);
        assert_eq!(pf_l2a().order(), 2);
    }

    #[test]
    fn canonical_form() {
        let f = RationalFunction::new(RationalPoly::from_i64(&[-2, 2]), RationalPoly::from_i64(&[-3, 0, 3])).unwrap();
        assert_eq!(f.num(), &RationalPoly::from_i64(&[2]).scale(&Rational::from((1, 3))));
        assert_eq!(f.den(), &RationalPoly::from_i64(&[1, 1]));
        assert_eq!(f.to_string(), "(2/3) / (t + 1)");
    }

    fn poly() -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec(-6i64..6, 0..5).prop_map(|v| RationalPoly::from_i64(&v))
    }

    proptest! {
        #[test]
        fn division_identity(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn field_laws(a in poly(), b in poly(), c in poly()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let f = RationalFunction::new(a.clone(), b.clone()).unwrap();
            let g = RationalFunction::new(c.clone(), b.clone()).unwrap();
            let s = &f + &g;
            prop_assert_eq!(&s - &g, f.clone());
            // Leibniz rule
            let lhs = (&f * &g).derivative();
            let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
