//! The banana and sunset integrals: modular closed forms, direct quadrature,
//! Mahler measures of the associated Laurent polynomials, Picard–Fuchs
//! operators and the torus period.

mod banana;
mod mahler;
mod operator;
mod quadrature;

pub use banana::{
    apply_l3_numeric, apply_l3_with_step, bkv_coefficients_match, bkv_qpart, i_closed, i_cm, i_modular, i_sum_closed,
    psi_lambert, re_i64_defect, varpi2_tau4_closed, I_CM_VALUES,
};
pub use mahler::{
    mahler_closed, mahler_cm, mahler_linear5, mahler_linear5_with_cutoff, mahler_q, mahler_s_closed, rv_conjecture_rhs,
    MAHLER_CM_VALUES,
};
pub use operator::{monicize, pf_l2, pf_l2a, pf_l3, symmetric_square, DiffOperator, RationalFunction, RationalPoly};
pub use quadrature::{
    i_direct, i_direct_grid, j_sunset, j_sunset_grid, mahler_direct, mahler_linear5_direct, period_l3_residual,
    period_u_series, period_u_torus, MahlerFamily, QuadratureGrid, Transform,
};

use rug::{Complex, Float};

use crate::{Error, Result};

/// f, f′, f″, f‴ at the centre of nine equally spaced samples f(t₀ + kh),
/// k = −4..4, by order-6 central differences.
pub(crate) fn stencil_derivatives(samples: &[Complex], h: &Float) -> Result<Vec<Complex>> {
    if samples.len() != 9 {
        return Err(Error::Domain(format!("stencil needs 9 samples, got {}", samples.len())));
    }
    let p = samples[4].prec().0;
    let at = |k: i32| &samples[(k + 4) as usize];
    let odd = |k: i32| Complex::with_val(p, at(k) - at(-k));
    let even = |k: i32| Complex::with_val(p, at(k) + at(-k));
    let r = |n: i32, d: u32| Float::with_val(p, n) / d;

    let mut d1 = Complex::with_val(p, 0);
    for (k, c) in [(1, r(3, 4)), (2, r(-3, 20)), (3, r(1, 60))] {
        d1 += odd(k) * c;
    }
    let mut d2 = Complex::with_val(p, at(0) * r(-49, 18));
    for (k, c) in [(1, r(3, 2)), (2, r(-3, 20)), (3, r(1, 90))] {
        d2 += even(k) * c;
    }
    let mut d3 = Complex::with_val(p, 0);
    for (k, c) in [(1, r(-488, 240)), (2, r(338, 240)), (3, r(-72, 240)), (4, r(7, 240))] {
        d3 += odd(k) * c;
    }
    let h1 = Float::with_val(p, h);
    let h2 = Float::with_val(p, h1.square_ref());
    let h3 = Float::with_val(p, &h2 * &h1);
    Ok(vec![at(0).clone(), d1 / h1, d2 / h2, d3 / h3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencil_exact_on_low_degree() {
        // f(t) = t³ − 2t + 5 around t₀ = 0.5: f′ = 3t² − 2, f″ = 6t, f‴ = 6
        let p = 200;
        let h = Float::with_val(p, 0.01);
        let t0 = Float::with_val(p, 0.5);
        let s: Vec<Complex> = (-4..=4)
            .map(|k| {
                let t = Float::with_val(p, &h * k) + &t0;
                let v = Float::with_val(p, t.clone().square() * &t) - Float::with_val(p, &t * 2u32) + 5u32;
                Complex::with_val(p, v)
            })
            .collect();
        let d = stencil_derivatives(&s, &h).unwrap();
        let want = [4.125, -1.25, 3.0, 6.0];
        for (a, b) in d.iter().zip(want) {
            assert!(Float::with_val(p, a.real() - b).abs() < 1e-40);
        }
        assert!(stencil_derivatives(&s[..8], &h).is_err());
    }
}
