use rug::{Integer, Rational};

use super::kronecker_symbol;
use crate::qseries::{newform_qexp, NewformId, QExpansion};
use crate::{Error, Result};

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// a_p = p + 1 − #E(F_p) for E: y² = x³ + 1, by counting with a table of squares.
pub fn ec_ap(p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p == 2 || p == 3 {
        return Err(Error::Domain(format!("y^2 = x^3 + 1 has bad reduction at {p}")));
    }
    let mut roots = vec![0i64; p as usize];
    for y in 0..p {
        roots[((y * y) % p) as usize] += 1;
    }
    let affine: i64 = (0..p).map(|x| roots[((x * x % p * x + 1) % p) as usize]).sum();
    Ok(p as i64 + 1 - (affine + 1))
}

/// For each prime 5 ≤ p ≤ pmax: (a_p² − p) − (χ₋₃(p)p + b_p), b_p from g12.
pub fn sym2_local_defect(pmax: u64) -> Result<Vec<(u64, Integer)>> {
    if pmax < 5 {
        return Err(Error::Domain("sym2_local_defect needs pmax >= 5".into()));
    }
    let g = newform_qexp(NewformId::G12, pmax as usize)?;
    let mut out = Vec::new();
    for p in primes_up_to(pmax).into_iter().filter(|p| *p >= 5) {
        let ap = Integer::from(ec_ap(p)?);
        let bp = g.coeff_at(&Rational::from(p)).ok_or_else(|| Error::Inconsistent(format!("g12 coefficient {p} missing")))?;
        let left = Integer::from(ap.square_ref()) - p;
        let right = Integer::from(kronecker_symbol(-3, p as i64) as i64 * p as i64) + bp.numer();
        out.push((p, left - right));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrossenKind {
    /// ½ Σ m χ₋₃(m) q^{m²+3n²}
    Psi,
    /// ½ Σ (m² − 3n²) q^{m²+3n²}
    PsiSquared,
}

/// Theta series of the two Hecke characters of Q(√−3), coefficients of q⁰..q^{n-1}.
pub fn grossen_qexp(kind: GrossenKind, n: usize) -> QExpansion {
    let mut c = vec![Integer::new(); n];
    let bound = n as i64;
    let mut m = 0i64;
    while m * m < bound {
        let mut k = 0i64;
        while m * m + 3 * k * k < bound {
            let e = (m * m + 3 * k * k) as usize;
            for (sm, sk) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                if (m == 0 && sm == -1) || (k == 0 && sk == -1) {
                    continue;
                }
                let (mm, kk) = (sm * m, sk * k);
                let w = match kind {
                    GrossenKind::Psi => mm * kronecker_symbol(-3, mm) as i64,
                    GrossenKind::PsiSquared => mm * mm - 3 * kk * kk,
                };
                c[e] += w;
            }
            k += 1;
        }
        m += 1;
    }
    let c = c
        .into_iter()
        .map(|v| {
            debug_assert!(v.is_even());
            v / 2u32
        })
        .collect();
    QExpansion::from_integers(Rational::new(), c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(ec_ap(7).unwrap(), -4);
        assert_eq!(ec_ap(13).unwrap(), 2);
        assert_eq!(ec_ap(5).unwrap(), 0);
        assert!(ec_ap(3).is_err());
        assert!(ec_ap(9).is_err());
        // supersingular at every p ≡ 2 mod 3
        for p in primes_up_to(200).into_iter().filter(|p| *p > 3 && p % 3 == 2) {
            assert_eq!(ec_ap(p).unwrap(), 0);
        }
    }

    #[test]
    fn psi_matches_point_counts() {
        let psi = grossen_qexp(GrossenKind::Psi, 400);
        let ints = psi.integer_coeffs().unwrap();
        assert_eq!(ints[1], 1);
        assert_eq!(ints[7], -4);
        assert_eq!(ints[13], 2);
        for k in (0..19).filter(|k| ![1, 7, 13].contains(k)) {
            assert_eq!(ints[k], 0, "coefficient {k}");
        }
        for p in primes_up_to(399).into_iter().filter(|p| *p > 3) {
            assert_eq!(ints[p as usize], ec_ap(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn psi_squared_is_g12() {
        let big = grossen_qexp(GrossenKind::PsiSquared, 501);
        let g = newform_qexp(NewformId::G12, 500).unwrap();
        for k in 1..=500usize {
            assert_eq!(big.coeff(k), g.coeff(k - 1), "coefficient {k}");
        }
        assert_eq!(*big.coeff(0), 0);
    }

    #[test]
    fn sym2_defects_vanish() {
        let d = sym2_local_defect(1000).unwrap();
        assert_eq!(d.len(), 166);
        assert!(d.iter().all(|(_, v)| *v == 0));
    }
}
