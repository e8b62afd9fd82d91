use rug::ops::Pow;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::{f3, Consts};
use crate::mpcore::{cot_plus_i, hurwitz_zeta_int, zeta_int, ApproxReal, PrecisionContext, Radius};
use crate::qseries::Bqf;
use crate::{Error, Result};

/// The weight ψ(n), depending on n mod 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PsiWeight;

impl PsiWeight {
    pub const TABLE: [i64; 6] = [-5760, -48, 720, 384, 720, -48];

    pub fn at(n: i64) -> i64 {
        Self::TABLE[n.rem_euclid(6) as usize]
    }
}

/// Σ ψ(n) n^{-s} = −48(1 − 16·2^{-s} − 9·3^{-s} + 144·6^{-s}) ζ(s).
pub fn psi_dirichlet_sum(s: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    if s < 2 {
        return Err(Error::Domain(format!("psi Dirichlet series needs s >= 2, got {s}")));
    }
    let r = |b: u32| Rational::from((1, rug::Integer::from(b).pow(s)));
    let factor = Rational::from(1) - r(2) * 16u32 - r(3) * 9u32 + r(6) * 144u32;
    let factor = factor * -48i32;
    let z = zeta_int(s, ctx)?;
    Ok(z.mul_float(&Float::with_val(ctx.prec(), &factor)))
}

/// The same sum through Hurwitz zeta values: 6^{-s} Σ_{r=1}^{6} ψ(r) ζ(s, r/6).
pub fn psi_dirichlet_sum_hurwitz(s: u32, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let mut acc = ApproxReal::exact(Float::with_val(ctx.prec(), 0));
    for r in 1..=6i64 {
        let h = hurwitz_zeta_int(s, &Rational::from((r, 6)), ctx)?;
        acc = &acc + &h.mul_i64(PsiWeight::at(r));
    }
    let six = Float::with_val(ctx.prec(), 6u32);
    Ok(acc.mul_float(&Float::with_val(ctx.prec(), six.pow(-(s as i32)))))
}

/// Σ_{m≥1, n∈ℤ} w(n mod 6) / (m² Q(m, n)).
///
/// The n-sum over a residue class is summed in closed form,
/// Σ_{n≡r (6)} 1/Q(m,n) = (2π/(6m√D)) (1 − Im κ((mρ − r)/6)),
/// with κ(z) = cot(πz) + i, ρ = (−b + i√D)/(2c), D = 4ac − b². The constant
/// part sums to ζ(3) and the κ part decays geometrically in m.
pub fn lattice_weighted_sum(form: &Bqf, weights: &[i64; 6], ctx: &PrecisionContext) -> Result<ApproxReal> {
    let prec = ctx.prec();
    let p = prec + 20;
    let d = -form.discriminant();
    let sd = Float::with_val(p, d).sqrt();
    let pi = Float::with_val(p, Constant::Pi);
    let rho = Complex::with_val(p, (Float::with_val(p, -form.b) / (2 * form.c), Float::with_val(p, &sd / (2 * form.c))));
    let uniform = weights.iter().all(|w| *w == weights[0]);
    let (classes, period): (Vec<(i64, i64)>, i64) =
        if uniform { (vec![(0, weights[0])], 1) } else { ((0..6).map(|r| (r, weights[r as usize])).collect(), 6) };
    let wsum: i64 = classes.iter().map(|(_, w)| w).sum();
    let wabs: i64 = classes.iter().map(|(_, w)| w.abs()).sum();

    // |κ(β)| ≤ 3 e^{−2π Im β} once that is ≤ 1/2; Im β = m√D/(2c·period)
    let decay = 2.0 * std::f64::consts::PI * (d as f64).sqrt() / (2.0 * form.c as f64 * period as f64);
    let target = (p as f64 + 8.0) * std::f64::consts::LN_2 + (wabs as f64).ln() + 2.0;
    let mut corr = Float::with_val(p, 0);
    let mut m: i64 = 1;
    loop {
        let mrho = Complex::with_val(p, &rho * m);
        let mut inner = Float::with_val(p, 0);
        for (r, w) in &classes {
            if *w == 0 {
                continue;
            }
            let beta = Complex::with_val(p, &mrho - Float::with_val(p, *r)) / period;
            let k = cot_plus_i(&Complex::with_val(p, &beta * &pi), p);
            inner += Float::with_val(p, k.imag() * *w);
        }
        let m3 = Float::with_val(p, m).square() * m;
        corr += inner / m3;
        m += 1;
        if decay * m as f64 > target && decay * m as f64 > 1.0 {
            break;
        }
        if m > 5_000_000 {
            return Err(Error::NoConvergence { what: "lattice m-sum", limit: m as usize });
        }
    }
    let first = Float::with_val(64, -decay * m as f64).exp() * (3 * wabs) as u32;
    let ratio = Float::with_val(64, -decay).exp();
    let tail = Radius::geometric_tail(&first, &ratio);

    let z3 = zeta_int(3, ctx)?;
    let pre = Float::with_val(p, &pi * 2u32) / Float::with_val(p, &sd * period);
    let total = &z3.mul_i64(wsum) - &ApproxReal::new(Float::with_val(prec, &corr), tail.add(&Radius::pow2(-(p as i64) + 6)));
    Ok(total.mul_float(&pre))
}

const ONES: [i64; 6] = [1; 6];

/// −(1/48)Σψ(n)/f(m,n) − Σ(1/f(m,n) − 16/f(m,2n) − 9/f(m,3n) + 144/f(m,6n))
/// for f(m,n) = m²Q(m,n); the right side sums the dilated forms Q(m,kn) over all n.
pub fn sieve_defect(form: &Bqf, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let (lhs, rhs) = sieve_sides(form, ctx)?;
    Ok(&lhs - &rhs)
}

pub fn sieve_sides(form: &Bqf, ctx: &PrecisionContext) -> Result<(ApproxReal, ApproxReal)> {
    let lhs = lattice_weighted_sum(form, &PsiWeight::TABLE, ctx)?.div_i64(-48);
    let mut rhs = ApproxReal::exact(Float::with_val(ctx.prec(), 0));
    for (k, c) in [(1i64, 1i64), (2, -16), (3, -9), (6, 144)] {
        let g = Bqf::new(form.a, form.b * k, form.c * k * k)?;
        rhs = &rhs + &lattice_weighted_sum(&g, &ONES, ctx)?.mul_i64(c);
    }
    Ok((lhs, rhs))
}

/// The four lattice sums Σ 1/(m²Q) and their F₃ forms (c π/√15)(2F₃(τ₀) + ζ(3)).
fn poisson_data(id: u32) -> Result<(Bqf, i64, (i64, u64, i64))> {
    Ok(match id {
        1 => (Bqf::new(24, 6, 1)?, 1, (0, 15, 1)),
        2 => (Bqf::new(6, 3, 1)?, 2, (1, 15, 2)),
        3 => (Bqf::new(8, 6, 3)?, 1, (0, 15, 3)),
        4 => (Bqf::new(2, 3, 3)?, 2, (3, 15, 6)),
        _ => return Err(Error::Unknown { kind: "Poisson identity", name: id.to_string() }),
    })
}

pub fn poisson_pair(id: u32, ctx: &PrecisionContext) -> Result<(ApproxReal, ApproxReal)> {
    let (form, c, (b, d, den)) = poisson_data(id)?;
    let lhs = lattice_weighted_sum(&form, &ONES, ctx)?;
    let k = Consts::new(ctx)?;
    let f = f3(&k.tau(b, d, den), ctx)?.re();
    let inner = &f.mul_i64(2) + &k.zeta3;
    let pre = k.pi.mul_float(&Float::with_val(k.prec, k.sqrt(15).recip_ref())).mul_i64(c);
    Ok((lhs, &inner * &pre))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeMode {
    /// Closed-form sums over one index and the ψ Dirichlet series.
    Direct,
    /// The reduction through the sieve identity and the four F₃ forms.
    Chain,
}

/// T = −(1/96) Σ_{m≥1,n∈ℤ} ψ(n)/(m²(24m² + 6mn + n²)).
pub fn lattice_t(mode: LatticeMode, ctx: &PrecisionContext) -> Result<ApproxReal> {
    match mode {
        LatticeMode::Direct => Ok(lattice_weighted_sum(&Bqf::new(24, 6, 1)?, &PsiWeight::TABLE, ctx)?.div_i64(-96)),
        LatticeMode::Chain => {
            let mut acc = ApproxReal::exact(Float::with_val(ctx.prec(), 0));
            for (id, c) in [(1u32, 1i64), (2, -4), (3, -3), (4, 12)] {
                let (_, rhs) = poisson_pair(id, ctx)?;
                acc = &acc + &rhs.mul_i64(c);
            }
            Ok(acc.div_i64(2))
        }
    }
}

/// S = Σ_{m,n≥1} (ψ(n)/n²)(1/(24m² − 6mn + n²) + 1/(24m² + 6mn + n²)).
pub fn lattice_s(mode: LatticeMode, ctx: &PrecisionContext) -> Result<ApproxReal> {
    match mode {
        LatticeMode::Chain => {
            let z4 = zeta_int(4, ctx)?;
            Ok(&lattice_t(LatticeMode::Chain, ctx)? + &z4.mul_i64(5))
        }
        LatticeMode::Direct => lattice_s_direct(ctx),
    }
}

/// Σ_{n≥1} (ψ(n)/n²) Σ_{m≠0} 1/(am² + bmn + n²), summing over m ∈ ℤ first:
/// Σ_m 1/(am² + bmn + n²) = (2π/(n√D))(1 − Im κ(nμ)) with μ = (−b + i√D)/(2a),
/// D = 4a − b², so the total is (2π/√D)(Σψ/n³ − Σψ(n) Im κ(nμ)/n³) − Σψ/n⁴.
pub fn psi_quadratic_sum(a: i64, b: i64, ctx: &PrecisionContext) -> Result<ApproxReal> {
    let disc = 4 * a - b * b;
    if a <= 0 || disc <= 0 {
        return Err(Error::Domain(format!("am² + bmn + n² with a = {a}, b = {b} is not positive definite")));
    }
    let prec = ctx.prec();
    let p = prec + 20;
    let pi = Float::with_val(p, Constant::Pi);
    let sd = Float::with_val(p, disc).sqrt();
    let mu = Complex::with_val(p, (Float::with_val(p, -b) / (2 * a), Float::with_val(p, &sd / (2 * a))));
    let decay = 2.0 * std::f64::consts::PI * (disc as f64).sqrt() / (2.0 * a as f64);
    let target = (p as f64 + 8.0) * std::f64::consts::LN_2 + 10.0;
    let mut corr = Float::with_val(p, 0);
    let mut n: i64 = 1;
    while decay * (n as f64) <= target {
        let z = Complex::with_val(p, &mu * n) * &pi;
        let k = cot_plus_i(&z, p);
        let n3 = Float::with_val(p, n).square() * n;
        corr += Float::with_val(p, k.imag() * PsiWeight::at(n)) / n3;
        n += 1;
    }
    let first = Float::with_val(64, -decay * n as f64).exp() * (3 * 5760) as u32;
    let tail = Radius::geometric_tail(&first, &Float::with_val(64, -decay).exp());
    let s3 = psi_dirichlet_sum(3, ctx)?;
    let s4 = psi_dirichlet_sum(4, ctx)?;
    let body = &s3 - &ApproxReal::new(Float::with_val(prec, &corr), tail.add(&Radius::pow2(-(p as i64) + 6)));
    let pre = Float::with_val(p, &pi * 2u32) / sd;
    Ok(&body.mul_float(&pre) - &s4)
}

/// S by [`psi_quadratic_sum`] for 24m² + 6mn + n².
fn lattice_s_direct(ctx: &PrecisionContext) -> Result<ApproxReal> {
    psi_quadratic_sum(24, 6, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;

    #[test]
    fn psi_sums() {
        let c = make_context(60).unwrap();
        let z3 = zeta_int(3, &c).unwrap();
        assert!(psi_dirichlet_sum(2, &c).unwrap().digits_zero() >= 58);
        assert!(psi_dirichlet_sum(3, &c).unwrap().digits_matched(&z3.mul_i64(32)) >= 58);
        for s in 2..=5 {
            let a = psi_dirichlet_sum(s, &c).unwrap();
            let b = psi_dirichlet_sum_hurwitz(s, &c).unwrap();
            assert!(a.digits_matched(&b) >= 55, "s = {s}");
        }
    }

    #[test]
    fn psi_sum_brute_force() {
        // 10⁶ terms; the tail is −672·Σ_{n>N} n^{-3} ≈ −672/(2N²) up to O(N^{-3})
        let n_max = 1_000_000i64;
        let mut s = 0f64;
        for n in (1..=n_max).rev() {
            s += PsiWeight::at(n) as f64 / (n as f64).powi(3);
        }
        s += -672.0 / (2.0 * (n_max as f64).powi(2));
        let c = make_context(20).unwrap();
        let want = psi_dirichlet_sum(3, &c).unwrap().to_f64();
        assert!((s - want).abs() < 1e-9 * want.abs(), "{s} vs {want}");
    }

    #[test]
    fn cot_partial_fraction_lemma() {
        // Σ_{m∈ℤ} 1/(m² − a²) = −π cot(πa)/a
        let c = make_context(20).unwrap();
        let p = c.prec();
        for (re, im) in [(0.3, 0.7), (-1.2, 0.25), (2.5, -0.4)] {
            let a = Complex::with_val(p, (re, im));
            let a2 = Complex::with_val(p, a.square_ref());
            let mut s = Complex::with_val(p, Complex::with_val(p, -&a2).recip_ref());
            let big = 200_000i64;
            for m in 1..=big {
                let d = Complex::with_val(p, Float::with_val(p, m * m) - &a2);
                s += Complex::with_val(p, d.recip_ref()) * 2u32;
            }
            s += Float::with_val(p, 2) / big as f64;
            let pa = Complex::with_val(p, &a * Float::with_val(p, Constant::Pi));
            let cot = Complex::with_val(p, pa.cos_ref()) / Complex::with_val(p, pa.sin_ref());
            let want = -(cot * Float::with_val(p, Constant::Pi)) / &a;
            let diff = Float::with_val(p, (s - want).abs_ref()).to_f64();
            assert!(diff < 1e-9, "a = {re}+{im}i: {diff}");
        }
    }

    #[test]
    fn weighted_sum_against_brute_force() {
        let c = make_context(20).unwrap();
        let form = Bqf::new(3, 1, 2).unwrap();
        let w = [2, -1, 5, 0, 1, 3];
        let fast = lattice_weighted_sum(&form, &w, &c).unwrap().to_f64();
        let mut s = 0f64;
        let nmax = 4000i64;
        for m in 1..=300i64 {
            let mut inner = 0f64;
            for n in -nmax..=nmax {
                inner += w[n.rem_euclid(6) as usize] as f64 / form.eval(m, n) as f64;
            }
            // tail in n: both ends ≈ (mean weight)·2/(c N)
            inner += (w.iter().sum::<i64>() as f64 / 6.0) * 2.0 / (form.c as f64 * nmax as f64);
            s += inner / (m * m) as f64;
        }
        assert!((s - fast).abs() < 2e-5 * fast.abs(), "{s} vs {fast}");
    }

    #[test]
    fn sieve_holds() {
        let c = make_context(40).unwrap();
        for (a, b, cc) in [(24, 6, 1), (3, 3, 1), (12, 6, 1), (12, 0, 1), (3, 0, 1)] {
            let d = sieve_defect(&Bqf::new(a, b, cc).unwrap(), &c).unwrap();
            assert!(d.digits_zero() >= 38, "form ({a},{b},{cc})");
        }
    }

    #[test]
    fn poisson_and_lattice_values() {
        let c = make_context(50).unwrap();
        for id in 1..=4 {
            let (l, r) = poisson_pair(id, &c).unwrap();
            assert!(l.digits_matched(&r) >= 48, "id {id}: {l} vs {r}");
        }
        let z4 = zeta_int(4, &c).unwrap();
        let t_chain = lattice_t(LatticeMode::Chain, &c).unwrap();
        let t_direct = lattice_t(LatticeMode::Direct, &c).unwrap();
        assert!(t_chain.digits_matched(&z4.mul_i64(6)) >= 48);
        assert!(t_direct.digits_matched(&z4.mul_i64(6)) >= 48);
        let s_direct = lattice_s(LatticeMode::Direct, &c).unwrap();
        assert!(s_direct.digits_matched(&z4.mul_i64(11)) >= 48);
        assert!((&s_direct - &t_direct).digits_matched(&z4.mul_i64(5)) >= 48);
    }
}
