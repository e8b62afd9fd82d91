use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};

use crate::eichler::f3;
use crate::feynman::{i_modular, mahler_q};
use crate::lfun::modular_l;
use crate::mpcore::PrecisionContext;
use crate::qseries::{eisenstein_eval, eta, hauptmodul_t, varpi, weber, NewformId, Period, Tau, WeberKind};
use crate::{Error, Result};

/// Functions available to ad-hoc evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalFunction {
    Eta,
    F0,
    F1,
    F2,
    F3,
    T,
    Varpi1,
    Varpi2,
    E4,
    IModular,
    Mahler,
    L,
}

const NAMES: [(&str, EvalFunction); 12] = [
    ("eta", EvalFunction::Eta),
    ("f0", EvalFunction::F0),
    ("f1", EvalFunction::F1),
    ("f2", EvalFunction::F2),
    ("f3", EvalFunction::F3),
    ("t", EvalFunction::T),
    ("varpi1", EvalFunction::Varpi1),
    ("varpi2", EvalFunction::Varpi2),
    ("e4", EvalFunction::E4),
    ("imod", EvalFunction::IModular),
    ("mahler", EvalFunction::Mahler),
    ("l", EvalFunction::L),
];

impl EvalFunction {
    pub fn names() -> impl Iterator<Item = &'static str> {
        NAMES.iter().map(|(n, _)| *n)
    }

    pub fn needs_tau(self) -> bool {
        self != EvalFunction::L
    }
}

impl FromStr for EvalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, f)| *f)
            .ok_or_else(|| Error::Unknown { kind: "function", name: s.to_string() })
    }
}

impl fmt::Display for EvalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES.iter().find(|(_, g)| g == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

/// Parses "re,im" into a point of the upper half-plane at full precision.
pub fn parse_tau(s: &str, prec: u32) -> Result<Tau> {
    let bad = || Error::Domain(format!("expected tau as <re>,<im>, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let num = |x: &str| Float::parse(x.trim()).map(|v| Float::with_val(prec, v)).map_err(|_| bad());
    Tau::new(Complex::with_val(prec, (num(re)?, num(im)?)))
}

/// Evaluates `func` and formats the value to the context's digits.
pub fn eval(func: EvalFunction, tau: Option<&Tau>, form: NewformId, s: u32, ctx: &PrecisionContext) -> Result<String> {
    let d = ctx.decimal_digits() as usize;
    if func == EvalFunction::L {
        return Ok(modular_l(form, s, ctx)?.to_decimal(d));
    }
    let tau = tau.ok_or_else(|| Error::Domain(format!("{func} needs --tau")))?;
    let z = match func {
        EvalFunction::Eta => eta(tau, ctx)?,
        EvalFunction::F0 => weber(WeberKind::F0, tau, ctx)?,
        EvalFunction::F1 => weber(WeberKind::F1, tau, ctx)?,
        EvalFunction::F2 => weber(WeberKind::F2, tau, ctx)?,
        EvalFunction::F3 => f3(tau, ctx)?,
        EvalFunction::T => hauptmodul_t(tau, ctx)?,
        EvalFunction::Varpi1 => varpi(Period::One, tau, ctx)?,
        EvalFunction::Varpi2 => varpi(Period::Two, tau, ctx)?,
        EvalFunction::E4 => eisenstein_eval(4, tau, ctx)?,
        EvalFunction::IModular => i_modular(tau, ctx)?,
        EvalFunction::Mahler => return Ok(mahler_q(tau, ctx)?.to_decimal(d)),
        EvalFunction::L => unreachable!(),
    };
    Ok(z.to_decimal(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::make_context;

    #[test]
    fn names_round_trip() {
        for n in EvalFunction::names() {
            assert_eq!(n.parse::<EvalFunction>().unwrap().to_string(), n);
        }
        assert!("zeta".parse::<EvalFunction>().is_err());
    }

    #[test]
    fn eta_at_i() {
        // η(i) = Γ(1/4)/(2π^{3/4})
        let c = make_context(20).unwrap();
        let t = parse_tau("0,1", c.prec()).unwrap();
        let v = eval(EvalFunction::Eta, Some(&t), NewformId::F15, 2, &c).unwrap();
        assert!(v.starts_with("7.682254223260566"), "{v}");
        assert!(parse_tau("0;1", 64).is_err());
        assert!(parse_tau("0,-1", 64).is_err());
        assert!(eval(EvalFunction::T, None, NewformId::F15, 2, &c).is_err());
    }
}
