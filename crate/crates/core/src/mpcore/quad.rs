//! Double-exponential quadrature at arbitrary precision and in `f64`.

use rug::float::Constant;
use rug::{Complex, Float};

use super::{ApproxComplex, ApproxReal, Radius};
use crate::{Error, Result};

const MAX_LEVEL: u32 = 13;

trait Accum: Clone {
    fn zero(prec: u32) -> Self;
    fn add_scaled(&mut self, v: &Self, w: &Float);
    fn abs_f(&self) -> Float;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&mut self, h: &Float);
}

impl Accum for Float {
    fn zero(prec: u32) -> Self {
        Float::with_val(prec, 0)
    }
    fn add_scaled(&mut self, v: &Self, w: &Float) {
        *self += Float::with_val(self.prec(), v * w);
    }
    fn abs_f(&self) -> Float {
        self.clone().abs()
    }
    fn sub(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self - other)
    }
    fn scale(&mut self, h: &Float) {
        *self *= h;
    }
}

impl Accum for Complex {
    fn zero(prec: u32) -> Self {
        Complex::with_val(prec, 0)
    }
    fn add_scaled(&mut self, v: &Self, w: &Float) {
        *self += Complex::with_val(self.prec().0, v * w);
    }
    fn abs_f(&self) -> Float {
        Float::with_val(self.prec().0, self.abs_ref())
    }
    fn sub(&self, other: &Self) -> Self {
        Complex::with_val(self.prec().0, self - other)
    }
    fn scale(&mut self, h: &Float) {
        *self *= h;
    }
}

fn log2_of(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        Float::with_val(64, x.log2_ref()).to_f64()
    }
}

enum Kind {
    Finite { a: Float, b: Float },
    HalfInfinite { a: Float },
}

/// Node `(x, w)` for parameter `t`; `None` when the node rounds onto an endpoint.
fn node(kind: &Kind, t: &Float, p: u32, pi_half: &Float) -> Vec<(Float, Float)> {
    let sh = Float::with_val(p, t.sinh_ref());
    let ch = Float::with_val(p, t.cosh_ref());
    let u = Float::with_val(p, &sh * pi_half);
    match kind {
        Kind::Finite { a, b } => {
            let half = Float::with_val(p, b - a) / 2u32;
            // for u >= 0: 1 - tanh u = 2 / (1 + e^{2u}),  w = (π/2) cosh t / cosh² u
            let e2u = Float::with_val(p, Float::with_val(p, &u * 2u32).exp_ref());
            let one_minus = Float::with_val(p, 2u32) / Float::with_val(p, &e2u + 1u32);
            let cu = Float::with_val(p, u.cosh_ref());
            let w = Float::with_val(p, &ch * pi_half) / Float::with_val(p, cu.square_ref()) * &half;
            let off = Float::with_val(p, &one_minus * &half);
            let mut out = Vec::with_capacity(2);
            let xr = Float::with_val(p, b - &off);
            if xr != *b {
                out.push((xr, w.clone()));
            }
            if !t.is_zero() {
                let xl = Float::with_val(p, a + &off);
                if xl != *a {
                    out.push((xl, w));
                }
            }
            out
        }
        Kind::HalfInfinite { a } => {
            let eu = Float::with_val(p, u.exp_ref());
            let w = Float::with_val(p, &ch * pi_half) * &eu;
            let x = Float::with_val(p, a + &eu);
            if x == *a {
                vec![]
            } else {
                vec![(x, w)]
            }
        }
    }
}

fn de_quad<T: Accum, F>(f: F, kind: Kind, prec: u32, tol_log2: f64) -> Result<(T, Radius)>
where
    F: Fn(&Float) -> Result<T>,
{
    let p = prec + 20;
    let pi_half = Float::with_val(p, Constant::Pi) / 2u32;
    let pf = p as f64;
    let (t_lo, t_hi) = match &kind {
        Kind::Finite { .. } => {
            let t = (pf * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 0.3;
            (-t, t)
        }
        Kind::HalfInfinite { .. } => {
            let t = (2.0 * pf * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 0.3;
            (-t, 8.0)
        }
    };
    let mut sum = T::zero(p);
    let mut abs_sum = Float::with_val(64, 0);
    let mut prev: Option<T> = None;
    let mut diff_log2 = f64::INFINITY;
    let half_infinite = matches!(kind, Kind::HalfInfinite { .. });
    for level in 0..=MAX_LEVEL {
        let h = Float::with_val(p, 1) >> level;
        let step = if level == 0 { 1i64 } else { 2 };
        let start = if level == 0 { 0i64 } else { 1 };
        let kmax = (t_hi * (1u64 << level) as f64).ceil() as i64;
        let kmin = (t_lo * (1u64 << level) as f64).floor() as i64;
        let ks: Vec<i64> = if half_infinite {
            let first = if level == 0 { kmin } else if kmin % 2 == 0 { kmin + 1 } else { kmin };
            (0..).map(|j| first + step * j).take_while(|k| *k <= kmax).collect()
        } else {
            (0..).map(|j| start + step * j).take_while(|k| *k <= kmax).collect()
        };
        let mut small_run = 0;
        for k in ks {
            let t = Float::with_val(p, &h * k);
            for (x, w) in node(&kind, &t, p, &pi_half) {
                if w.is_zero() {
                    continue;
                }
                let v = f(&x)?;
                let contrib = Float::with_val(64, &v.abs_f() * &w);
                abs_sum += &contrib;
                sum.add_scaled(&v, &w);
                if half_infinite && k > 0 {
                    let c = log2_of(&contrib);
                    let s = log2_of(&abs_sum);
                    if c < s - pf - 10.0 {
                        small_run += 1;
                    } else {
                        small_run = 0;
                    }
                }
            }
            if half_infinite && small_run >= 3 {
                break;
            }
        }
        let mut cur = sum.clone();
        cur.scale(&h);
        if let Some(pv) = &prev {
            let d = cur.sub(pv).abs_f();
            diff_log2 = log2_of(&d);
            let scale = log2_of(&cur.abs_f()).max(0.0);
            if level >= 4 && (diff_log2 == f64::NEG_INFINITY || 2.0 * diff_log2 < tol_log2 + scale - 8.0) {
                let est = if diff_log2 == f64::NEG_INFINITY { f64::NEG_INFINITY } else { 2.0 * diff_log2 - scale + 4.0 };
                let rounding = log2_of(&abs_sum) + log2_of(&h) - prec as f64 + 6.0;
                let rad = Radius::pow2(est.max(rounding).ceil().max(-1e9) as i64);
                return Ok((cur, rad));
            }
        }
        prev = Some(cur);
    }
    let cur = prev.expect("at least one level");
    if diff_log2.is_finite() {
        Ok((cur, Radius::pow2(diff_log2.ceil() as i64 + 1)))
    } else {
        Err(Error::NoConvergence { what: "double-exponential quadrature", limit: MAX_LEVEL as usize })
    }
}

fn finish_real(v: Float, rad: Radius, prec: u32) -> ApproxReal {
    let mut mid = v;
    mid.set_prec(prec);
    let rad = rad.add(&Radius::ulp(&mid, prec));
    ApproxReal::new(mid, rad)
}

fn finish_complex(v: Complex, rad: Radius, prec: u32) -> ApproxComplex {
    let mut mid = v;
    mid.set_prec(prec);
    let rad = rad.add(&Radius::ulp_complex(&mid, prec));
    ApproxComplex::new(mid, rad)
}

/// ∫_a^b f by tanh-sinh; tolerates integrable endpoint singularities.
pub fn tanh_sinh_real<F>(f: F, a: &Float, b: &Float, prec: u32, tol_log2: f64) -> Result<ApproxReal>
where
    F: Fn(&Float) -> Result<Float>,
{
    let p = prec + 20;
    let kind = Kind::Finite { a: Float::with_val(p, a), b: Float::with_val(p, b) };
    let (v, r) = de_quad(f, kind, prec, tol_log2)?;
    Ok(finish_real(v, r, prec))
}

pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, prec: u32, tol_log2: f64) -> Result<ApproxComplex>
where
    F: Fn(&Float) -> Result<Complex>,
{
    let p = prec + 20;
    let kind = Kind::Finite { a: Float::with_val(p, a), b: Float::with_val(p, b) };
    let (v, r) = de_quad(f, kind, prec, tol_log2)?;
    Ok(finish_complex(v, r, prec))
}

/// ∫_a^∞ f for integrands decaying at least exponentially.
pub fn exp_sinh_real<F>(f: F, a: &Float, prec: u32, tol_log2: f64) -> Result<ApproxReal>
where
    F: Fn(&Float) -> Result<Float>,
{
    let kind = Kind::HalfInfinite { a: Float::with_val(prec + 20, a) };
    let (v, r) = de_quad(f, kind, prec, tol_log2)?;
    Ok(finish_real(v, r, prec))
}

pub fn exp_sinh<F>(f: F, a: &Float, prec: u32, tol_log2: f64) -> Result<ApproxComplex>
where
    F: Fn(&Float) -> Result<Complex>,
{
    let kind = Kind::HalfInfinite { a: Float::with_val(prec + 20, a) };
    let (v, r) = de_quad(f, kind, prec, tol_log2)?;
    Ok(finish_complex(v, r, prec))
}

/// Tanh-sinh in double precision; returns the estimate and an error guess.
pub fn tanh_sinh_f64<F>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let tmax = 3.2;
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    let mut err = f64::INFINITY;
    for level in 0..=10u32 {
        let h = 0.5f64.powi(level as i32);
        let n = (tmax / h).ceil() as i64;
        let mut k = if level == 0 { 0 } else { 1 };
        let step = if level == 0 { 1 } else { 2 };
        while k <= n {
            let t = k as f64 * h;
            let u = pi2 * t.sinh();
            let one_minus = 2.0 / (1.0 + (2.0 * u).exp());
            let w = pi2 * t.cosh() / u.cosh().powi(2) * half;
            let off = one_minus * half;
            if w > 0.0 && off > 0.0 {
                let xr = b - off;
                if xr < b {
                    sum += w * f(xr);
                }
                if k != 0 {
                    let xl = a + off;
                    if xl > a {
                        sum += w * f(xl);
                    }
                }
            }
            k += step;
        }
        let cur = sum * h;
        if level >= 3 {
            err = (cur - prev).abs();
            if err <= tol * cur.abs().max(1.0) {
                return (cur, err);
            }
        }
        prev = cur;
    }
    (prev, err)
}

/// Gauss–Legendre nodes and weights on [-1, 1] in double precision.
pub fn gauss_legendre_f64(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn finite_interval_polynomial_and_log() {
        let p = 300;
        let a = Float::with_val(p, 0);
        let b = Float::with_val(p, 1);
        let v = tanh_sinh_real(|x| Ok(Float::with_val(p, x.clone().pow(5))), &a, &b, p, -(p as f64)).unwrap();
        let want = ApproxReal::exact(Float::with_val(p, 1) / 6u32);
        assert!(v.digits_matched(&want) >= 85);
        // ∫_0^1 log x dx = -1 with an endpoint singularity
        let v = tanh_sinh_real(|x| Ok(Float::with_val(p, x.ln_ref())), &a, &b, p, -(p as f64)).unwrap();
        assert!(v.digits_matched(&ApproxReal::exact(Float::with_val(p, -1))) >= 85);
    }

    #[test]
    fn half_infinite_exponential() {
        let p = 200;
        let a = Float::with_val(p, 0);
        let v = exp_sinh_real(|x| Ok(Float::with_val(p, (-x.clone()).exp_ref()) * x), &a, p, -(p as f64)).unwrap();
        assert!(v.digits_matched(&ApproxReal::exact(Float::with_val(p, 1))) >= 55);
        let z = exp_sinh(|x| {
            let e = Complex::with_val(p, (Float::with_val(p, -x.clone()), Float::with_val(p, x)));
            Ok(e.exp())
        }, &a, p, -(p as f64)).unwrap();
        // ∫_0^∞ e^{(-1+i)x} dx = 1/(1-i) = (1+i)/2
        let want = ApproxComplex::exact(Complex::with_val(p, (0.5, 0.5)));
        assert!(z.digits_matched(&want) >= 55);
    }

    #[test]
    fn f64_variants() {
        let (v, _) = tanh_sinh_f64(|x| x.sqrt(), 0.0, 4.0, 1e-14);
        assert!((v - 16.0 / 3.0).abs() < 1e-12);
        let gl = gauss_legendre_f64(20);
        let s: f64 = gl.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
    }
}
