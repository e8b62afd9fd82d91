use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use super::operator::pf_l3;
use super::stencil_derivatives;
use crate::mpcore::quad::tanh_sinh_real;
use crate::mpcore::{elliptic_k_from_complement, ApproxComplex, ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// How a quadrature grid covers its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    /// (0,∞)^d through xᵢ = exp(sinh vᵢ), trapezoidal in v.
    SinhExp,
    /// Uniform trapezoid on the d-torus.
    Torus,
    /// Fixed tanh-sinh rule on each smooth piece of a reduced torus integral.
    TanhSinh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadratureGrid {
    dim: usize,
    nodes: usize,
    transform: Transform,
}

impl QuadratureGrid {
    pub fn new(dim: usize, nodes: usize, transform: Transform) -> Result<Self> {
        if !(2..=4).contains(&dim) {
            return Err(Error::Domain(format!("grid dimension must be 2, 3 or 4, got {dim}")));
        }
        if nodes < 8 {
            return Err(Error::Domain(format!("grid needs at least 8 nodes per axis, got {nodes}")));
        }
        Ok(Self { dim, nodes, transform })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    fn expect(&self, dim: usize, transform: Transform) -> Result<()> {
        if self.dim != dim || self.transform != transform {
            return Err(Error::Domain(format!(
                "expected a {dim}-dimensional {transform:?} grid, got {}-dimensional {:?}",
                self.dim, self.transform
            )));
        }
        Ok(())
    }
}

const SINH_RANGE: f64 = 4.2;

/// Abscissae e^{±u} and trapezoid weights du for u = sinh v, v on an odd grid.
fn sinh_exp_nodes(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = n | 1;
    let h = 2.0 * SINH_RANGE / (n - 1) as f64;
    let mut xp = Vec::with_capacity(n);
    let mut xm = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for k in 0..n {
        let v = -SINH_RANGE + k as f64 * h;
        let u = v.sinh();
        xp.push(u.exp());
        xm.push((-u).exp());
        w.push(h * v.cosh());
    }
    (xp, xm, w)
}

fn to_approx(v: f64, err: f64) -> ApproxReal {
    ApproxReal::new(Float::with_val(53, v), Radius::from_f64(err.abs() + v.abs() * 1e-14))
}

/// ∫_{(0,∞)^d} dx/x / ((1 + Σxᵢ)(1 + Σ1/xᵢ) − t) for d = 2, 3, on the
/// sinh-exp grid; the error estimate compares with the grid of twice the step.
fn positive_orthant(t: f64, grid: &QuadratureGrid) -> (f64, f64) {
    let (xp, xm, w) = sinh_exp_nodes(grid.nodes);
    let n = xp.len();
    let f = |a: f64, b: f64| 1.0 / ((1.0 + a) * (1.0 + b) - t);
    if grid.dim == 2 {
        let rows: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let (mut s, mut s2) = (0.0, 0.0);
                for j in 0..n {
                    let v = w[i] * w[j] * f(xp[i] + xp[j], xm[i] + xm[j]);
                    s += v;
                    if i % 2 == 0 && j % 2 == 0 {
                        s2 += v;
                    }
                }
                (s, s2)
            })
            .collect();
        let s: f64 = rows.iter().map(|r| r.0).sum();
        let s2: f64 = rows.iter().map(|r| r.1).sum::<f64>() * 4.0;
        return (s, (s - s2).abs());
    }
    // the integrand is symmetric in (x₁, x₂, x₃): sum over i ≤ j ≤ k
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (mut s, mut s2) = (0.0, 0.0);
            for j in i..n {
                for k in j..n {
                    let mult = if i == j && j == k {
                        1.0
                    } else if i == j || j == k {
                        3.0
                    } else {
                        6.0
                    };
                    let v = mult * w[i] * w[j] * w[k] * f(xp[i] + xp[j] + xp[k], xm[i] + xm[j] + xm[k]);
                    s += v;
                    if i % 2 == 0 && j % 2 == 0 && k % 2 == 0 {
                        s2 += v;
                    }
                }
            }
            (s, s2)
        })
        .collect();
    let s: f64 = rows.iter().map(|r| r.0).sum();
    let s2: f64 = rows.iter().map(|r| r.1).sum::<f64>() * 8.0;
    (s, (s - s2).abs())
}

/// The default grid for [`i_direct`].
pub fn i_direct_grid() -> QuadratureGrid {
    QuadratureGrid { dim: 3, nodes: 161, transform: Transform::SinhExp }
}

/// The default grid for [`j_sunset`].
pub fn j_sunset_grid() -> QuadratureGrid {
    QuadratureGrid { dim: 2, nodes: 321, transform: Transform::SinhExp }
}

/// I(t) by direct three-dimensional quadrature (double precision).
pub fn i_direct(t: f64, grid: &QuadratureGrid) -> Result<ApproxReal> {
    grid.expect(3, Transform::SinhExp)?;
    if t.is_nan() || t >= 16.0 {
        return Err(Error::Singular(format!("I(t) integrand has a pole in the domain for t = {t} >= 16")));
    }
    let (v, e) = positive_orthant(t, grid);
    Ok(to_approx(v, e))
}

/// The sunset integral J(t), the two-dimensional analogue of [`i_direct`].
pub fn j_sunset(t: f64, grid: &QuadratureGrid) -> Result<ApproxReal> {
    grid.expect(2, Transform::SinhExp)?;
    if t.is_nan() || t >= 9.0 {
        return Err(Error::Singular(format!("J(t) integrand has a pole in the domain for t = {t} >= 9")));
    }
    let (v, e) = positive_orthant(t, grid);
    Ok(to_approx(v, e))
}

/// Fixed tanh-sinh rule on [0, 1]: (distance from 0, distance from 1, weight).
struct TsRule(Vec<(f64, f64, f64)>);

impl TsRule {
    fn new(nodes: usize) -> Self {
        let tmax = 3.2;
        let n = nodes.max(8) | 1;
        let h = 2.0 * tmax / (n - 1) as f64;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let s = -tmax + k as f64 * h;
            let u = FRAC_PI_2 * s.sinh();
            let left = 1.0 / (1.0 + (-2.0 * u).exp());
            let right = 1.0 / (1.0 + (2.0 * u).exp());
            let w = h * FRAC_PI_2 * s.cosh() / (u.cosh() * u.cosh()) * 0.5;
            if w > 0.0 && left > 0.0 && right > 0.0 {
                out.push((left, right, w));
            }
        }
        Self(out)
    }

    /// ∫ f over [a, b] split at the sorted interior breakpoints.
    fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, cuts: &[f64]) -> f64 {
        let mut pts: Vec<f64> = std::iter::once(a).chain(cuts.iter().copied().filter(|c| *c > a && *c < b)).chain([b]).collect();
        pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        pts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let mut total = 0.0;
        for win in pts.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let len = hi - lo;
            let mut s = 0.0;
            for &(l, r, w) in &self.0 {
                let x = if l < 0.5 { lo + len * l } else { hi - len * r };
                s += w * f(x);
            }
            total += s * len;
        }
        total
    }
}

/// Families of Laurent polynomials with a Jensen-reducible Mahler measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MahlerFamily {
    /// (1+x₁+x₂+x₃)(1+1/x₁+1/x₂+1/x₃) − t
    P3,
    /// (1+x₁+x₂)(1+1/x₁+1/x₂) − t
    S2,
}

/// m over the last variable of (a + x)(ā + 1/x) − t with w = |a|², by Jensen's formula.
fn jensen_last(w: f64, t: f64) -> f64 {
    let b = w + 1.0 - t;
    let disc = b * b - 4.0 * w;
    if disc >= 0.0 {
        ((b.abs() + disc.sqrt()) / 2.0).ln()
    } else {
        0.5 * w.ln()
    }
}

/// The values w = (1 ± √t)² at which the roots of the last variable cross |x| = 1.
fn kink_values(t: f64) -> Vec<f64> {
    if t < 0.0 {
        return Vec::new();
    }
    let s = t.sqrt();
    vec![(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)]
}

/// φ ∈ (0, π) where r² + 1 + 2r cos φ equals one of `ws`.
fn angle_cuts(r: f64, ws: &[f64]) -> Vec<f64> {
    ws.iter()
        .filter_map(|w| {
            let c = (w - r * r - 1.0) / (2.0 * r);
            (c > -1.0 && c < 1.0).then(|| c.acos())
        })
        .collect()
}

/// θ ∈ (0, π) where r = 2cos(θ/2) makes an endpoint (r ± 1)² hit one of `ws`.
fn radius_cuts(ws: &[f64]) -> Vec<f64> {
    let mut out = vec![2.0 * (0.5f64).acos()];
    for w in ws {
        let s = w.sqrt();
        for r in [1.0 + s, 1.0 - s, s - 1.0, -1.0 - s] {
            if r > 0.0 && r < 2.0 {
                out.push(2.0 * (r / 2.0).acos());
            }
        }
    }
    out
}

/// Mahler measure of a member of `family` by Jensen reduction of the last
/// variable and tanh-sinh quadrature over the remaining angles.
pub fn mahler_direct(family: MahlerFamily, t: f64, grid: &QuadratureGrid) -> Result<ApproxReal> {
    let dim = match family {
        MahlerFamily::P3 => 3,
        MahlerFamily::S2 => 2,
    };
    grid.expect(dim, Transform::TanhSinh)?;
    let ws = kink_values(t);
    let fine = TsRule::new(grid.nodes);
    let coarse = TsRule::new(grid.nodes / 2);
    let run = |rule: &TsRule| -> f64 {
        match family {
            MahlerFamily::S2 => {
                let cuts: Vec<f64> = angle_cuts(1.0, &ws);
                rule.integrate(|th| jensen_last(2.0 + 2.0 * th.cos(), t), 0.0, PI, &cuts) / PI
            }
            MahlerFamily::P3 => {
                let outer = |th: f64| {
                    let r = 2.0 * (th / 2.0).cos();
                    if r <= 0.0 {
                        return jensen_last(1.0, t) * PI;
                    }
                    let cuts = angle_cuts(r, &ws);
                    rule.integrate(|ph| jensen_last(r * r + 1.0 + 2.0 * r * ph.cos(), t), 0.0, PI, &cuts)
                };
                rule.integrate(outer, 0.0, PI, &radius_cuts(&ws)) / (PI * PI)
            }
        }
    };
    let v = run(&fine);
    let e = (v - run(&coarse)).abs();
    if !v.is_finite() {
        return Err(Error::NoConvergence { what: "Mahler measure quadrature", limit: grid.nodes });
    }
    Ok(to_approx(v, e))
}

/// m(1 + x₁ + x₂ + x₃ + x₄) by direct quadrature: Jensen in x₄ gives
/// log⁺|1 + x₁ + x₂ + x₃|, integrated over three angles.
pub fn mahler_linear5_direct(grid: &QuadratureGrid) -> Result<ApproxReal> {
    grid.expect(4, Transform::TanhSinh)?;
    let rule = TsRule::new(grid.nodes);
    // (1/π)∫₀^π log⁺ √(ρ² + 1 + 2ρ cos φ) dφ; the kink sits at cos φ = −ρ/2
    let inner = |rho: f64| {
        let cuts = if rho < 2.0 { vec![(-rho / 2.0).acos()] } else { Vec::new() };
        rule.integrate(|ph| 0.5 * (rho * rho + 1.0 + 2.0 * rho * ph.cos()).max(1.0).ln(), 0.0, PI, &cuts) / PI
    };
    // ρ² = r² + 1 + 2r cos φ with r = |1 + x₁|
    let middle = |r: f64| {
        let cuts = angle_cuts(r, &[4.0, 0.0]);
        rule.integrate(|ph| inner((r * r + 1.0 + 2.0 * r * ph.cos()).max(0.0).sqrt()), 0.0, PI, &cuts) / PI
    };
    let outer_cuts = radius_cuts(&[4.0]);
    let mut pts: Vec<f64> = std::iter::once(0.0).chain(outer_cuts.into_iter().filter(|c| *c > 0.0 && *c < PI)).chain([PI]).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let total: f64 = pts
        .par_windows(2)
        .map(|w| rule.integrate(|th| middle(2.0 * (th / 2.0).cos()), w[0], w[1], &[]))
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    let v = total / PI;
    Ok(to_approx(v, 1e-6))
}

/// u(t) = (2πi)^{-3} ∮ dx/(x P_t(x)), the average of 1/((1+Σxᵢ)(1+Σ1/xᵢ) − t)
/// over the unit 3-torus; principal value for 0 < t < 16.
///
/// Outside [0, 16] the x₃-average is done in closed form and the remaining
/// 2-torus by the trapezoidal rule with `gridn` nodes per axis. Inside, the
/// double average reduces to complete elliptic integrals and the last angle
/// is integrated by tanh-sinh at min(digits, 50).
pub fn period_u_torus(t: &Float, gridn: usize, ctx: &PrecisionContext) -> Result<ApproxComplex> {
    for s in [0u32, 4, 16] {
        if *t == s {
            return Err(Error::Singular(format!("u(t) at the singular point t = {s}")));
        }
    }
    if *t < 0 || *t > 16 {
        let (v, r) = period_trapezoid(t, gridn, ctx)?;
        return Ok(ApproxReal::new(v, r).to_complex());
    }
    let c = ctx.with_digits(ctx.decimal_digits().min(50))?;
    period_pv(t, &c).map(|v| v.to_complex())
}

fn period_trapezoid(t: &Float, gridn: usize, ctx: &PrecisionContext) -> Result<(Float, Radius)> {
    if gridn < 8 {
        return Err(Error::Domain(format!("period grid needs at least 8 nodes, got {gridn}")));
    }
    let p = ctx.prec();
    let tt = Float::with_val(p, t);
    let sum = |n: usize| -> Float {
        let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
        let cs: Vec<(Float, Float)> = (0..n)
            .map(|k| {
                let a = Float::with_val(p, &two_pi * k as u32) / n as u32;
                (Float::with_val(p, a.cos_ref()), Float::with_val(p, a.sin_ref()))
            })
            .collect();
        let rows: Vec<Float> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut s = Float::with_val(p, 0);
                for j in 0..n {
                    let re = Float::with_val(p, &cs[i].0 + &cs[j].0) + 1u32;
                    let im = Float::with_val(p, &cs[i].1 + &cs[j].1);
                    let w = re.square() + im.square();
                    let b = Float::with_val(p, &w + 1u32) - &tt;
                    let disc = Float::with_val(p, b.square_ref()) - Float::with_val(p, &w * 4u32);
                    let v = disc.sqrt().recip();
                    if b < 0 {
                        s -= v;
                    } else {
                        s += v;
                    }
                }
                s
            })
            .collect();
        let mut total = Float::with_val(p, 0);
        for r in rows {
            total += r;
        }
        total / (n * n) as u32
    };
    let v = sum(gridn);
    let half = sum(gridn / 2);
    let e = Float::with_val(64, Float::with_val(p, &v - &half).abs());
    Ok((v, Radius::from_float(&e).add(&Radius::ulp(&Float::with_val(p, 1), p))))
}

/// 2K/√C-type contributions of the quartic (w−wlo)(whi−w)(w−wm)(w−wp) over
/// the admissible sub-intervals of [wlo, whi] outside (wm, wp).
fn pv_inner(r: &Float, t: &Float, p: u32) -> Float {
    let one = Float::with_val(p, 1);
    let wlo = Float::with_val(p, r - &one).square();
    let whi = Float::with_val(p, r + &one).square();
    let st = Float::with_val(p, t.sqrt_ref());
    let wm = Float::with_val(p, &one - &st).square();
    let wp = Float::with_val(p, &one + &st).square();
    let mut e = [wlo.clone(), whi.clone(), wm.clone(), wp.clone()];
    e.sort_by(|a, b| b.partial_cmp(a).expect("finite roots"));
    let a = Float::with_val(p, &e[0] - &e[1]) * Float::with_val(p, &e[2] - &e[3]);
    let b = Float::with_val(p, &e[1] - &e[2]) * Float::with_val(p, &e[0] - &e[3]);
    let c = Float::with_val(p, &a + &b);
    if c <= 0 {
        return Float::with_val(p, 0);
    }
    let sc = Float::with_val(p, c.sqrt_ref());
    let mut tot = Float::with_val(p, 0);
    for j in 0..3 {
        let (lo, hi) = (&e[j + 1], &e[j]);
        if lo == hi {
            continue;
        }
        let mid = Float::with_val(p, lo + hi) / 2u32;
        let inside = mid >= wlo && mid <= whi;
        let excluded = mid > wm && mid < wp;
        if !inside || excluded {
            continue;
        }
        let kc2 = if j == 1 { Float::with_val(p, &a / &c) } else { Float::with_val(p, &b / &c) };
        let k = elliptic_k_from_complement(&kc2) * 2u32 / &sc;
        if Float::with_val(p, &mid + 1u32) > *t {
            tot += k;
        } else {
            tot -= k;
        }
    }
    tot
}

fn period_pv(t: &Float, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let p = ctx.prec();
    let tt = Float::with_val(p, t);
    let pi = Float::with_val(p, Constant::Pi);
    // θ where r = 2cos(θ/2) lets (r ± 1)² meet (1 ± √t)²
    let s = Float::with_val(p, tt.sqrt_ref());
    let mut pts = vec![Float::with_val(p, 0), pi.clone()];
    for r in [Float::with_val(p, &s + 2u32), Float::with_val(p, 2u32 - Float::with_val(p, &s)), s.clone()] {
        if r > 0 && r < 2 {
            pts.push(Float::with_val(p, Float::with_val(p, r / 2u32).acos()) * 2u32);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    let f = |th: &Float| -> Result<Float> {
        let r = Float::with_val(p, Float::with_val(p, th / 2u32).cos()) * 2u32;
        Ok(pv_inner(&r, &tt, p))
    };
    let mut total = ApproxReal::exact(Float::with_val(p, 0));
    for w in pts.windows(2) {
        let piece = tanh_sinh_real(f, &w[0], &w[1], p, ctx.tol_log2())?;
        total = &total + &piece;
    }
    let pi2 = ApproxReal::rounded(Float::with_val(p, pi.square_ref()));
    Ok(&total / &pi2)
}

/// −Σ_k a_k t^{-k-1} with a_k the constant term of ((1+Σxᵢ)(1+Σ1/xᵢ))^k,
/// a_k = Σ (k!/(i!j!l!m!))² over i+j+l+m = k; converges for |t| > 16.
pub fn period_u_series(t: &Float, terms: usize) -> Float {
    let p = t.prec();
    let mut acc = Float::with_val(p, 0);
    let mut tk = Float::with_val(p, t.clone().recip());
    let fact = |n: u32| rug::Integer::from(rug::Integer::factorial(n));
    for k in 0..terms as u32 {
        let mut a = rug::Integer::new();
        for i in 0..=k {
            for j in 0..=k - i {
                for l in 0..=k - i - j {
                    let m = k - i - j - l;
                    let c = fact(k) / (fact(i) * fact(j) * fact(l) * fact(m));
                    a += c.square();
                }
            }
        }
        acc -= Float::with_val(p, &a) * &tk;
        tk /= t;
    }
    acc
}

/// L³u at t0 (expected 0) by the order-6 stencil with step 10^{-50/9},
/// evaluated at 50 digits.
pub fn period_l3_residual(t0: &Rational, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let c = ctx.with_digits(50)?;
    let p = c.prec();
    let h = Float::with_val(p, 10u32).pow(-(c.decimal_digits() as i32) / 9);
    let t0f = Float::with_val(p, t0);
    let mut samples = Vec::with_capacity(9);
    let mut rad = Radius::zero();
    for k in -4i32..=4 {
        let t = Float::with_val(p, &h * k) + &t0f;
        let v = period_u_torus(&t, 64, &c)?;
        rad = rad.max(v.rad());
        samples.push(v.into_mid());
    }
    let derivs = stencil_derivatives(&samples, &h)?;
    let l = pf_l3().apply_values(&Complex::with_val(p, &t0f), &derivs)?;
    let lead = Float::with_val(64, pf_l3().leading().eval_float(&t0f).abs()) + 1u32;
    let hh = Float::with_val(64, h.clone().pow(3u32));
    let noise = rad.scale(&(lead * 4u32 / hh));
    Ok(ApproxReal::new(Float::with_val(p, l.real()), noise))
}
