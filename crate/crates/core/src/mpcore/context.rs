use rug::{Complex, Float};

use crate::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// How series and sums decide where to stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationPolicy {
    /// Stop once an explicit tail bound is below the working tolerance.
    TailBound,
}

/// Requested output digits plus internal guard digits.
///
/// Every computation runs at `decimal_digits + guard_digits` digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
    policy: TruncationPolicy,
}

/// Context with the default guard of `max(10, digits / 10)`.
pub fn make_context(decimal_digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(decimal_digits)
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, (decimal_digits / 10).max(10))
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < 10 {
            return Err(Error::PrecisionTooLow(decimal_digits));
        }
        if guard_digits < 10 {
            return Err(Error::Domain(format!("guard digits {guard_digits} < 10")));
        }
        Ok(Self { decimal_digits, guard_digits, policy: TruncationPolicy::TailBound })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn working_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    /// Binary precision of all working floats.
    pub fn prec(&self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// log2 of the truncation tolerance `10^-(digits+guard)`.
    pub fn tol_log2(&self) -> f64 {
        -(self.working_digits() as f64) * LOG2_10
    }

    /// Natural log of the truncation tolerance.
    pub fn tol_ln(&self) -> f64 {
        -(self.working_digits() as f64) * std::f64::consts::LN_10
    }

    /// The tolerance `10^-(digits+guard)` as a float.
    pub fn tolerance(&self) -> Float {
        let mut t = Float::with_val(64, Float::u_pow_u(10, self.working_digits()));
        t.recip_mut();
        t
    }

    /// A context asking for `extra` more output digits, same guard rule.
    pub fn raised(&self, extra: u32) -> Self {
        Self::new(self.decimal_digits + extra).expect("raising precision keeps digits >= 10")
    }

    /// A context with a different number of output digits, same guard rule.
    pub fn with_digits(&self, digits: u32) -> Result<Self> {
        Self::new(digits)
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.prec(), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_guard() {
        let c = make_context(100).unwrap();
        assert_eq!((c.decimal_digits(), c.guard_digits()), (100, 10));
        let c = make_context(10).unwrap();
        assert_eq!((c.decimal_digits(), c.guard_digits()), (10, 10));
        let c = make_context(300).unwrap();
        assert_eq!(c.guard_digits(), 30);
    }

    #[test]
    fn rejects_low_digits() {
        assert_eq!(make_context(9), Err(Error::PrecisionTooLow(9)));
    }

    #[test]
    fn precision_covers_working_digits() {
        let c = make_context(100).unwrap();
        assert!(c.prec() as f64 >= 110.0 * LOG2_10);
        let t = c.tolerance();
        assert!((t.to_f64().log10() + 110.0).abs() < 1e-9 || t.to_f64() == 0.0);
    }
}
