use rug::{Integer, Rational};

use super::QExpansion;
use crate::{Error, Result};

/// Positive definite binary quadratic form a m² + b m n + c n².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = Bqf { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(Error::Domain(format!("form [{a},{b},{c}] is not positive definite")));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, m: i64, n: i64) -> i64 {
        self.a * m * m + self.b * m * n + self.c * n * n
    }

    /// All lattice points with value `< bound`.
    pub fn points_below(&self, bound: i64) -> Vec<(i64, i64, i64)> {
        let d = -self.discriminant() as f64;
        let nmax = ((4 * self.a) as f64 * bound as f64 / d).sqrt().ceil() as i64 + 1;
        let mmax = ((4 * self.c) as f64 * bound as f64 / d).sqrt().ceil() as i64 + 1;
        let mut out = Vec::new();
        for m in -mmax..=mmax {
            for n in -nmax..=nmax {
                let v = self.eval(m, n);
                if v < bound {
                    out.push((m, n, v));
                }
            }
        }
        out
    }
}

/// Σ_{m,n} q^{Q(m,n)} to `n` coefficients.
pub fn theta_bqf_qexp(form: &Bqf, n: usize) -> QExpansion {
    let mut c = vec![Integer::new(); n];
    for (_, _, v) in form.points_below(n as i64) {
        c[v as usize] += 1;
    }
    QExpansion::from_integers(Rational::new(), c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_counts() {
        let f = Bqf::new(1, 1, 4).unwrap();
        let t = theta_bqf_qexp(&f, 10);
        assert_eq!(*t.coeff(0), 1);
        assert_eq!(*t.coeff(1), 2);
        // sum of two squares: r2(5) = 8
        let t = theta_bqf_qexp(&Bqf::new(1, 0, 1).unwrap(), 30);
        assert_eq!(*t.coeff(5), 8);
        assert_eq!(*t.coeff(25), 12);
        assert!(Bqf::new(1, 3, 1).is_err());
    }
}
