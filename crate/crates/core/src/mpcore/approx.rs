use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Complex, Float};

const RAD_PREC: u32 = 64;

fn up<T>(v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(RAD_PREC);
    f.assign_round(v, Round::Up);
    f
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

fn cabs_up(z: &Complex) -> Float {
    let a = Float::with_val(z.prec().0.max(RAD_PREC), z.abs_ref());
    up(&a) * Float::with_val(RAD_PREC, 1.0 + 1e-15)
}

/// Nonnegative error radius kept at low precision and rounded upward.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Radius(Float);

impl Radius {
    pub fn zero() -> Self {
        Radius(Float::new(RAD_PREC))
    }

    pub fn infinite() -> Self {
        Radius(Float::with_val(RAD_PREC, rug::float::Special::Infinity))
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && !x.is_nan(), "radius must be nonnegative");
        Radius(up(x))
    }

    /// Radius equal to `|x|`.
    pub fn from_float(x: &Float) -> Self {
        Radius(abs_up(x))
    }

    pub fn from_complex_abs(z: &Complex) -> Self {
        Radius(cabs_up(z))
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        let mut f = Float::with_val(RAD_PREC, 1);
        f <<= e as i32;
        Radius(f)
    }

    /// One unit in the last place of a value of magnitude `|x|` at precision `prec`.
    pub fn ulp(x: &Float, prec: u32) -> Self {
        let mut f = abs_up(x);
        f >>= prec as i32 - 1;
        Radius(f)
    }

    pub fn ulp_complex(z: &Complex, prec: u32) -> Self {
        let mut f = cabs_up(z);
        f >>= prec as i32 - 1;
        Radius(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64_round(Round::Up)
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Decimal logarithm, `-inf` for a zero radius.
    pub fn log10(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(RAD_PREC, self.0.log10_ref()).to_f64()
    }

    pub fn add(&self, other: &Radius) -> Radius {
        Radius(up(&self.0 + &other.0))
    }

    pub fn mul(&self, other: &Radius) -> Radius {
        Radius(up(&self.0 * &other.0))
    }

    pub fn scale(&self, k: &Float) -> Radius {
        let k = abs_up(k);
        Radius(up(&self.0 * &k))
    }

    pub fn scale_f64(&self, k: f64) -> Radius {
        self.scale(&Float::with_val(RAD_PREC, k.abs()))
    }

    pub fn max(&self, other: &Radius) -> Radius {
        if self.0 >= other.0 {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `first / (1 - ratio)`, the bound for a geometric tail; infinite if `ratio >= 1`.
    pub fn geometric_tail(first: &Float, ratio: &Float) -> Radius {
        let r = up(&*ratio.as_abs());
        if r >= 1 {
            return Radius::infinite();
        }
        let mut denom = Float::new(RAD_PREC);
        denom.assign_round(1 - &r, Round::Down);
        Radius(up(&abs_up(first) / &denom))
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3e}", self.0)
    }
}

fn cap_digits(prec: u32) -> i64 {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as i64
}

/// Digits to which `value` agrees with `reference`: the largest `D` with
/// `|diff| <= 10^-D * max(1, |reference|)`, capped at the precision.
fn digits_from(diff: &Float, scale: &Float, prec: u32) -> i64 {
    let cap = cap_digits(prec);
    if diff.is_zero() {
        return cap;
    }
    if !diff.is_finite() {
        return i64::MIN / 4;
    }
    let one = Float::with_val(RAD_PREC, 1);
    let s = if *scale > one { up(scale) } else { one };
    let ratio = Float::with_val(RAD_PREC, diff / &s);
    let l = Float::with_val(RAD_PREC, ratio.log10_ref()).to_f64();
    ((-l).floor() as i64).min(cap)
}

/// Real midpoint with an error radius.
#[derive(Clone, Debug)]
pub struct ApproxReal {
    mid: Float,
    rad: Radius,
}

impl ApproxReal {
    pub fn new(mid: Float, rad: Radius) -> Self {
        Self { mid, rad }
    }

    /// A value known exactly (zero radius).
    pub fn exact(mid: Float) -> Self {
        Self { mid, rad: Radius::zero() }
    }

    /// A value correct up to rounding in its last place.
    pub fn rounded(mid: Float) -> Self {
        let rad = Radius::ulp(&mid, mid.prec());
        Self { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Radius {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn into_mid(self) -> Float {
        self.mid
    }

    pub fn widen(mut self, extra: &Radius) -> Self {
        self.rad = self.rad.add(extra);
        self
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn contains(&self, x: &Float) -> bool {
        let d = up(&*Float::with_val(self.prec().max(x.prec()), &self.mid - x).as_abs());
        d <= *self.rad.as_float()
    }

    pub fn abs_diff(&self, other: &ApproxReal) -> Float {
        let p = self.prec().max(other.prec());
        Float::with_val(p, &self.mid - &other.mid).abs()
    }

    /// Digits of agreement of the midpoints, relative to `max(1, |other|)`.
    pub fn digits_matched(&self, other: &ApproxReal) -> i64 {
        let diff = self.abs_diff(other);
        let p = self.prec().min(other.prec());
        digits_from(&diff, &Float::with_val(RAD_PREC, &*other.mid.as_abs()), p)
    }

    pub fn matches(&self, other: &ApproxReal, digits: i64) -> bool {
        self.digits_matched(other) >= digits
    }

    /// Digits to which this value vanishes, i.e. agreement with zero.
    pub fn digits_zero(&self) -> i64 {
        digits_from(&Float::with_val(self.prec(), &*self.mid.as_abs()), &Float::with_val(RAD_PREC, 1), self.prec())
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        fmt_float(&self.mid, digits)
    }

    pub fn to_complex(&self) -> ApproxComplex {
        ApproxComplex::new(Complex::with_val(self.prec(), (&self.mid, 0)), self.rad.clone())
    }

    pub fn abs(&self) -> ApproxReal {
        Self { mid: self.mid.clone().abs(), rad: self.rad.clone() }
    }

    pub fn mul_float(&self, k: &Float) -> ApproxReal {
        let mid = Float::with_val(self.prec(), &self.mid * k);
        let rad = self.rad.scale(k).add(&Radius::ulp(&mid, self.prec()));
        Self { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> ApproxReal {
        self.mul_float(&Float::with_val(self.prec(), k))
    }

    pub fn div_i64(&self, k: i64) -> ApproxReal {
        let inv = Float::with_val(self.prec(), 1) / Float::with_val(self.prec(), k);
        self.mul_float(&inv)
    }

    pub fn exp(&self) -> ApproxReal {
        let p = self.prec();
        let mid = Float::with_val(p, self.mid.exp_ref());
        let er = up(self.rad.as_float().exp_m1_ref());
        let rad = Radius(up(&er * &abs_up(&mid))).add(&Radius::ulp(&mid, p));
        Self { mid, rad }
    }

    pub fn ln(&self) -> ApproxReal {
        let p = self.prec();
        let mid = Float::with_val(p, self.mid.ln_ref());
        let a = abs_up(&self.mid);
        let r = self.rad.as_float();
        let rad = if a > *r {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&a - r, Round::Down);
            Radius(up(r / &d))
        } else {
            Radius::infinite()
        };
        Self { mid: mid.clone(), rad: rad.add(&Radius::ulp(&mid, p)) }
    }

    pub fn sqrt(&self) -> ApproxReal {
        let p = self.prec();
        let mid = Float::with_val(p, self.mid.sqrt_ref());
        let a = abs_up(&self.mid);
        let r = self.rad.as_float();
        let rad = if a > *r {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&a - r, Round::Down);
            let d = d.sqrt();
            Radius(up(r / &d))
        } else {
            Radius(up(r.sqrt_ref()))
        };
        Self { mid: mid.clone(), rad: rad.add(&Radius::ulp(&mid, p)) }
    }

    pub fn pow_i32(&self, e: i32) -> ApproxReal {
        let mut acc = ApproxReal::exact(Float::with_val(self.prec(), 1));
        let base = if e < 0 { &ApproxReal::exact(Float::with_val(self.prec(), 1)) / self } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl PartialEq for ApproxReal {
    fn eq(&self, other: &Self) -> bool {
        self.mid == other.mid && self.rad == other.rad
    }
}

impl PartialOrd for ApproxReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.mid.partial_cmp(&other.mid)
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = ((self.prec() as f64 * std::f64::consts::LOG10_2) as usize).min(40);
        write!(f, "{} +/- {}", fmt_float(&self.mid, d), self.rad)
    }
}

/// Scientific decimal string with `digits` significant digits.
pub(crate) fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    format!("{:.*e}", digits.max(1), x)
}

fn fmt_complex(z: &Complex, digits: usize) -> String {
    let re = fmt_float(z.real(), digits);
    let im = fmt_float(&Float::with_val(z.prec().1, &*z.imag().as_abs()), digits);
    let sign = if z.imag().is_sign_negative() { '-' } else { '+' };
    format!("{re} {sign} {im}i")
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a ApproxReal> for &'a ApproxReal {
            type Output = ApproxReal;
            fn $m(self, rhs: &'a ApproxReal) -> ApproxReal {
                #[allow(clippy::redundant_closure_call)]
                $body(self, rhs)
            }
        }
        impl $tr<ApproxReal> for ApproxReal {
            type Output = ApproxReal;
            fn $m(self, rhs: ApproxReal) -> ApproxReal {
                (&self).$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, |a: &ApproxReal, b: &ApproxReal| {
    let p = a.prec().max(b.prec());
    let mid = Float::with_val(p, &a.mid + &b.mid);
    let rad = a.rad.add(&b.rad).add(&Radius::ulp(&mid, p));
    ApproxReal { mid, rad }
});

real_binop!(Sub, sub, |a: &ApproxReal, b: &ApproxReal| {
    let p = a.prec().max(b.prec());
    let mid = Float::with_val(p, &a.mid - &b.mid);
    let rad = a.rad.add(&b.rad).add(&Radius::ulp(&mid, p));
    ApproxReal { mid, rad }
});

real_binop!(Mul, mul, |a: &ApproxReal, b: &ApproxReal| {
    let p = a.prec().max(b.prec());
    let mid = Float::with_val(p, &a.mid * &b.mid);
    let rad = a
        .rad
        .scale(&b.mid)
        .add(&b.rad.scale(&a.mid))
        .add(&a.rad.mul(&b.rad))
        .add(&Radius::ulp(&mid, p));
    ApproxReal { mid, rad }
});

real_binop!(Div, div, |a: &ApproxReal, b: &ApproxReal| {
    let p = a.prec().max(b.prec());
    let mid = Float::with_val(p, &a.mid / &b.mid);
    let bb = abs_up(&b.mid);
    let rb = b.rad.as_float();
    let rad = if bb > *rb {
        let mut low = Float::new(RAD_PREC);
        low.assign_round(&bb - rb, Round::Down);
        let num = up(&up(&abs_up(&a.mid) * rb) + &up(&bb * a.rad.as_float()));
        let den = {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&bb * &low, Round::Down);
            d
        };
        Radius(up(&num / &den))
    } else {
        Radius::infinite()
    };
    ApproxReal { rad: rad.add(&Radius::ulp(&mid, p)), mid }
});

impl Neg for ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal { mid: -self.mid, rad: self.rad }
    }
}

impl Neg for &ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        -(self.clone())
    }
}

/// Complex midpoint with an error radius bounding the modulus of the error.
#[derive(Clone, Debug)]
pub struct ApproxComplex {
    mid: Complex,
    rad: Radius,
}

impl ApproxComplex {
    pub fn new(mid: Complex, rad: Radius) -> Self {
        Self { mid, rad }
    }

    pub fn exact(mid: Complex) -> Self {
        Self { mid, rad: Radius::zero() }
    }

    pub fn rounded(mid: Complex) -> Self {
        let rad = Radius::ulp_complex(&mid, mid.prec().0);
        Self { mid, rad }
    }

    pub fn mid(&self) -> &Complex {
        &self.mid
    }

    pub fn rad(&self) -> &Radius {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec().0
    }

    pub fn into_mid(self) -> Complex {
        self.mid
    }

    pub fn widen(mut self, extra: &Radius) -> Self {
        self.rad = self.rad.add(extra);
        self
    }

    pub fn re(&self) -> ApproxReal {
        ApproxReal::new(self.mid.real().clone(), self.rad.clone())
    }

    pub fn im(&self) -> ApproxReal {
        ApproxReal::new(self.mid.imag().clone(), self.rad.clone())
    }

    pub fn abs(&self) -> ApproxReal {
        let p = self.prec();
        let mid = Float::with_val(p, self.mid.abs_ref());
        let rad = self.rad.add(&Radius::ulp(&mid, p));
        ApproxReal::new(mid, rad)
    }

    pub fn conj(&self) -> ApproxComplex {
        Self { mid: self.mid.clone().conj(), rad: self.rad.clone() }
    }

    /// True when the imaginary part is indistinguishable from zero.
    pub fn is_real_within_radius(&self) -> bool {
        let im = abs_up(self.mid.imag());
        let slack = Radius::ulp_complex(&self.mid, self.prec()).scale_f64(16.0);
        im <= *self.rad.add(&slack).as_float()
    }

    pub fn abs_diff(&self, other: &ApproxComplex) -> Float {
        let p = self.prec().max(other.prec());
        Float::with_val(p, Complex::with_val(p, &self.mid - &other.mid).abs_ref())
    }

    pub fn digits_matched(&self, other: &ApproxComplex) -> i64 {
        let diff = self.abs_diff(other);
        let p = self.prec().min(other.prec());
        digits_from(&diff, &Float::with_val(RAD_PREC, other.mid.abs_ref()), p)
    }

    pub fn matches(&self, other: &ApproxComplex, digits: i64) -> bool {
        self.digits_matched(other) >= digits
    }

    pub fn digits_zero(&self) -> i64 {
        let a = Float::with_val(self.prec(), self.mid.abs_ref());
        digits_from(&a, &Float::with_val(RAD_PREC, 1), self.prec())
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        fmt_complex(&self.mid, digits)
    }

    pub fn mul_float(&self, k: &Float) -> ApproxComplex {
        let mid = Complex::with_val(self.prec(), &self.mid * k);
        let rad = self.rad.scale(k).add(&Radius::ulp_complex(&mid, self.prec()));
        Self { mid, rad }
    }

    pub fn mul_complex(&self, k: &Complex) -> ApproxComplex {
        let mid = Complex::with_val(self.prec(), &self.mid * k);
        let kk = Float::with_val(RAD_PREC, k.abs_ref());
        let rad = self.rad.scale(&kk).add(&Radius::ulp_complex(&mid, self.prec()));
        Self { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> ApproxComplex {
        self.mul_float(&Float::with_val(self.prec(), k))
    }

    pub fn exp(&self) -> ApproxComplex {
        let p = self.prec();
        let mid = Complex::with_val(p, self.mid.exp_ref());
        let er = up(self.rad.as_float().exp_m1_ref());
        let rad = Radius(up(&er * &cabs_up(&mid))).add(&Radius::ulp_complex(&mid, p));
        Self { mid, rad }
    }

    pub fn ln(&self) -> ApproxComplex {
        let p = self.prec();
        let mid = Complex::with_val(p, self.mid.ln_ref());
        let a = cabs_up(&self.mid);
        let r = self.rad.as_float();
        let rad = if a > *r {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&a - r, Round::Down);
            Radius(up(r / &d))
        } else {
            Radius::infinite()
        };
        Self { rad: rad.add(&Radius::ulp_complex(&mid, p)), mid }
    }

    pub fn sqrt(&self) -> ApproxComplex {
        let p = self.prec();
        let mid = Complex::with_val(p, self.mid.sqrt_ref());
        let a = cabs_up(&self.mid);
        let r = self.rad.as_float();
        let rad = if a > *r {
            let mut d = Float::new(RAD_PREC);
            d.assign_round(&a - r, Round::Down);
            Radius(up(r / &d.sqrt()))
        } else {
            Radius(up(r.sqrt_ref()))
        };
        Self { rad: rad.add(&Radius::ulp_complex(&mid, p)), mid }
    }

    pub fn pow_i32(&self, e: i32) -> ApproxComplex {
        let one = ApproxComplex::exact(Complex::with_val(self.prec(), 1));
        let base = if e < 0 { &one / self } else { self.clone() };
        let mut acc = one;
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn recip(&self) -> ApproxComplex {
        &ApproxComplex::exact(Complex::with_val(self.prec(), 1)) / self
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = ((self.prec() as f64 * std::f64::consts::LOG10_2) as usize).min(40);
        write!(f, "({}) +/- {}", fmt_complex(&self.mid, d), self.rad)
    }
}

macro_rules! complex_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a ApproxComplex> for &'a ApproxComplex {
            type Output = ApproxComplex;
            fn $m(self, rhs: &'a ApproxComplex) -> ApproxComplex {
                #[allow(clippy::redundant_closure_call)]
                $body(self, rhs)
            }
        }
        impl $tr<ApproxComplex> for ApproxComplex {
            type Output = ApproxComplex;
            fn $m(self, rhs: ApproxComplex) -> ApproxComplex {
                (&self).$m(&rhs)
            }
        }
    };
}

complex_binop!(Add, add, |a: &ApproxComplex, b: &ApproxComplex| {
    let p = a.prec().max(b.prec());
    let mid = Complex::with_val(p, &a.mid + &b.mid);
    let rad = a.rad.add(&b.rad).add(&Radius::ulp_complex(&mid, p));
    ApproxComplex { mid, rad }
});

complex_binop!(Sub, sub, |a: &ApproxComplex, b: &ApproxComplex| {
    let p = a.prec().max(b.prec());
    let mid = Complex::with_val(p, &a.mid - &b.mid);
    let rad = a.rad.add(&b.rad).add(&Radius::ulp_complex(&mid, p));
    ApproxComplex { mid, rad }
});

complex_binop!(Mul, mul, |a: &ApproxComplex, b: &ApproxComplex| {
    let p = a.prec().max(b.prec());
    let mid = Complex::with_val(p, &a.mid * &b.mid);
    let aa = cabs_up(&a.mid);
    let bb = cabs_up(&b.mid);
    let rad = a
        .rad
        .scale(&bb)
        .add(&b.rad.scale(&aa))
        .add(&a.rad.mul(&b.rad))
        .add(&Radius::ulp_complex(&mid, p).scale_f64(2.0));
    ApproxComplex { mid, rad }
});

complex_binop!(Div, div, |a: &ApproxComplex, b: &ApproxComplex| {
    let p = a.prec().max(b.prec());
    let mid = Complex::with_val(p, &a.mid / &b.mid);
    let bb = cabs_up(&b.mid);
    let rb = b.rad.as_float();
    let rad = if bb > *rb {
        let mut low = Float::new(RAD_PREC);
        low.assign_round(&bb - rb, Round::Down);
        let num = up(&up(&cabs_up(&a.mid) * rb) + &up(&bb * a.rad.as_float()));
        let mut den = Float::new(RAD_PREC);
        den.assign_round(&bb * &low, Round::Down);
        Radius(up(&num / &den))
    } else {
        Radius::infinite()
    };
    ApproxComplex { rad: rad.add(&Radius::ulp_complex(&mid, p).scale_f64(4.0)), mid }
});

impl Neg for ApproxComplex {
    type Output = ApproxComplex;
    fn neg(self) -> ApproxComplex {
        ApproxComplex { mid: -self.mid, rad: self.rad }
    }
}

impl Neg for &ApproxComplex {
    type Output = ApproxComplex;
    fn neg(self) -> ApproxComplex {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(p: u32, x: f64) -> ApproxReal {
        ApproxReal::rounded(Float::with_val(p, x))
    }

    #[test]
    fn digit_counting_rule() {
        let a = ApproxReal::exact(Float::with_val(200, 1));
        let b = ApproxReal::exact(Float::with_val(200, 1) + Float::with_val(200, 1e-30));
        assert_eq!(b.digits_matched(&a), 30);
        let big = ApproxReal::exact(Float::with_val(200, 1000));
        let big2 = ApproxReal::exact(Float::with_val(200, 1000.000001));
        assert!((big2.digits_matched(&big) - 9).abs() <= 1);
        assert_eq!(a.digits_matched(&a), (200.0 * std::f64::consts::LOG10_2).floor() as i64);
    }

    #[test]
    fn radius_tail() {
        let r = Radius::geometric_tail(&Float::with_val(53, 0.5), &Float::with_val(53, 0.5));
        assert!(r.to_f64() >= 1.0 && r.to_f64() < 1.0 + 1e-12);
        assert!(!Radius::geometric_tail(&Float::with_val(53, 1), &Float::with_val(53, 1)).is_finite());
    }

    #[test]
    fn formatting() {
        let x = ApproxReal::exact(Float::with_val(100, 1.5));
        assert_eq!(x.to_decimal(4), "1.500e0");
        let z = ApproxComplex::exact(Complex::with_val(100, (1.0, -2.0)));
        assert_eq!(z.to_decimal(2), "1.0e0 - 2.0e0i");
    }

    fn hi(x: f64) -> Float {
        Float::with_val(400, x)
    }

    proptest! {
        #[test]
        fn containment_under_arithmetic(x in -50.0f64..50.0, y in 0.1f64..50.0, ex in -3.0f64..3.0) {
            let p = 80;
            // perturb the inputs inside their radii
            let a = real(p, x).widen(&Radius::from_f64(1e-15));
            let b = real(p, y).widen(&Radius::from_f64(1e-15));
            let xs = hi(x) + hi(0.7e-15);
            let ys = hi(y) - hi(0.4e-15);
            prop_assert!((&a + &b).contains(&Float::with_val(400, &xs + &ys)));
            prop_assert!((&a - &b).contains(&Float::with_val(400, &xs - &ys)));
            prop_assert!((&a * &b).contains(&Float::with_val(400, &xs * &ys)));
            prop_assert!((&a / &b).contains(&Float::with_val(400, &xs / &ys)));
            prop_assert!(b.ln().contains(&Float::with_val(400, ys.ln_ref())));
            let e = real(p, ex).widen(&Radius::from_f64(1e-15));
            let es = hi(ex) + hi(0.9e-15);
            prop_assert!(e.exp().contains(&Float::with_val(400, es.exp_ref())));
        }

        #[test]
        fn complex_containment(x in -5.0f64..5.0, y in -5.0f64..5.0, u in 0.5f64..5.0, v in -5.0f64..5.0) {
            let p = 80;
            let a = ApproxComplex::rounded(Complex::with_val(p, (x, y))).widen(&Radius::from_f64(1e-14));
            let b = ApproxComplex::rounded(Complex::with_val(p, (u, v))).widen(&Radius::from_f64(1e-14));
            let xs = Complex::with_val(400, (x, y)) + Complex::with_val(400, (5e-15, -5e-15));
            let ys = Complex::with_val(400, (u, v)) + Complex::with_val(400, (-3e-15, 6e-15));
            let chk = |r: ApproxComplex, exact: Complex| {
                let d = Float::with_val(400, (Complex::with_val(400, r.mid() - &exact)).abs_ref());
                d <= *r.rad().as_float()
            };
            prop_assert!(chk(&a * &b, Complex::with_val(400, &xs * &ys)));
            prop_assert!(chk(&a / &b, Complex::with_val(400, &xs / &ys)));
            prop_assert!(chk(&a + &b, Complex::with_val(400, &xs + &ys)));
            prop_assert!(chk(b.exp(), Complex::with_val(400, ys.exp_ref())));
            prop_assert!(chk(b.ln(), Complex::with_val(400, ys.ln_ref())));
        }
    }
}
