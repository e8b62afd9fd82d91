use std::fmt;
use std::str::FromStr;

use rug::Rational;

use super::{eta_quotient_qexp, theta_bqf_qexp, Bqf, EtaQuotientSpec, QExpansion};
use crate::{Error, Result};

/// The three cusp forms whose L-values appear in the identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NewformId {
    /// Weight 3, level 15.
    F15,
    /// Weight 3, level 12: η(2τ)³η(6τ)³.
    G12,
    /// Weight 2, level 14: η(τ)η(2τ)η(7τ)η(14τ).
    E14,
}

impl NewformId {
    pub fn level(self) -> u32 {
        match self {
            NewformId::F15 => 15,
            NewformId::G12 => 12,
            NewformId::E14 => 14,
        }
    }

    pub fn weight(self) -> u32 {
        match self {
            NewformId::F15 | NewformId::G12 => 3,
            NewformId::E14 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NewformId::F15 => "f15",
            NewformId::G12 => "g12",
            NewformId::E14 => "e14",
        }
    }
}

impl fmt::Display for NewformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NewformId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f15" | "f" => Ok(NewformId::F15),
            "g12" | "g" => Ok(NewformId::G12),
            "e14" => Ok(NewformId::E14),
            _ => Err(Error::Unknown { kind: "newform", name: s.to_string() }),
        }
    }
}

fn spec(f: &[(u32, i32)]) -> EtaQuotientSpec {
    EtaQuotientSpec::new(f.to_vec()).expect("static eta spec is valid")
}

/// f15 as η(τ)η(3τ)η(5τ)η(15τ) Σ q^{m²+mn+4n²}.
pub fn f15_theta_construction(n: usize) -> Result<QExpansion> {
    let eta = eta_quotient_qexp(&spec(&[(1, 1), (3, 1), (5, 1), (15, 1)]), n)?;
    let theta = theta_bqf_qexp(&Bqf::new(1, 1, 4)?, n);
    Ok(&eta * &theta)
}

/// f15 as η(3τ)³η(5τ)³ + η(τ)³η(15τ)³.
pub fn f15_eta_construction(n: usize) -> Result<QExpansion> {
    let a = eta_quotient_qexp(&spec(&[(3, 3), (5, 3)]), n)?;
    let b = eta_quotient_qexp(&spec(&[(1, 3), (15, 3)]), n)?;
    Ok(&a + &b)
}

fn check_hecke_multiplicative(c: &QExpansion, up_to: usize) -> Result<()> {
    let a = |k: usize| c.coeff(k - 1).clone();
    for m in 2..=up_to {
        for k in 2..=up_to {
            if m * k > c.order() || gcd(m, k) != 1 {
                continue;
            }
            if a(m * k) != Rational::from(&a(m) * &a(k)) {
                return Err(Error::Inconsistent(format!("coefficients not multiplicative at ({m}, {k})")));
            }
        }
    }
    Ok(())
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// q-expansion with coefficients of q^1 .. q^n (leading exponent 1).
///
/// For f15 both constructions are computed and must agree; e14 must pass a
/// multiplicativity check on coprime indices up to 30.
pub fn newform_qexp(id: NewformId, n: usize) -> Result<QExpansion> {
    if n == 0 {
        return Err(Error::Domain("newform_qexp needs n >= 1".into()));
    }
    let out = match id {
        NewformId::F15 => {
            let a = f15_theta_construction(n)?;
            let b = f15_eta_construction(n)?;
            if a.truncate(n) != b.truncate(n) {
                return Err(Error::Inconsistent("the two level-15 constructions disagree".into()));
            }
            a.truncate(n)
        }
        NewformId::G12 => eta_quotient_qexp(&spec(&[(2, 3), (6, 3)]), n)?,
        NewformId::E14 => {
            let e = eta_quotient_qexp(&spec(&[(1, 1), (2, 1), (7, 1), (14, 1)]), n)?;
            check_hecke_multiplicative(&e, 30.min(n))?;
            e
        }
    };
    debug_assert_eq!(*out.lead(), 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    fn ints(q: &QExpansion, k: usize) -> Vec<i64> {
        q.integer_coeffs().unwrap().iter().take(k).map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn f15_constructions_agree_500() {
        let a = f15_theta_construction(500).unwrap();
        let b = f15_eta_construction(500).unwrap();
        assert_eq!(a.truncate(500), b.truncate(500));
        assert_eq!(ints(&a, 10), vec![1, 1, -3, -3, 5, -3, 0, -7, 9, 5]);
    }

    #[test]
    fn g12_and_e14_start() {
        let g = newform_qexp(NewformId::G12, 20).unwrap();
        assert_eq!(*g.lead(), 1);
        assert_eq!(ints(&g, 13), vec![1, 0, -3, 0, 0, 0, 2, 0, 9, 0, 0, 0, -22]);
        let e = newform_qexp(NewformId::E14, 200).unwrap();
        assert_eq!(ints(&e, 9), vec![1, -1, -2, 1, 0, 2, 1, -1, 1]);
    }

    #[test]
    fn e14_multiplicative_and_hasse_bound() {
        let e = newform_qexp(NewformId::E14, 1000).unwrap();
        for p in [3usize, 5, 11, 13, 17, 19, 23, 29, 31, 97, 101] {
            let ap = e.coeff(p - 1).numer().clone();
            let bound = Integer::from(4 * p);
            assert!(Integer::from(&ap * &ap) <= bound);
        }
        check_hecke_multiplicative(&e, 30).unwrap();
    }
}
