//! Grosswald's function F_s, its modular transformation laws, cotangent
//! Dirichlet series, and the lattice sums reducing to values of F_3.

mod cotangent;
mod grosswald;
mod lattice;

pub use cotangent::{tan_odd_sum, xi_cotangent, xi_identity_corrected, xi_identity_printed, xi_tan_identity};
pub use grosswald::{
    f3, f3_chain_sqrtm15, f3_lemma, grosswald_f, grosswald_f_integral, halfshift_defect, inversion_defect,
    sigma_power, sigma_weight_qexp, LemmaIdentity,
};
pub use lattice::{
    lattice_s, lattice_t, lattice_weighted_sum, poisson_pair, psi_quadratic_sum, psi_dirichlet_sum, psi_dirichlet_sum_hurwitz, sieve_defect,
    LatticeMode, PsiWeight,
};

use rug::Float;

use crate::mpcore::{const_pi, zeta_int, ApproxComplex, ApproxReal, PrecisionContext};
use crate::qseries::Tau;
use crate::Result;

/// An identity evaluated on both sides.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: ApproxComplex,
    pub rhs: ApproxComplex,
}

impl Relation {
    pub fn new(name: &'static str, lhs: ApproxComplex, rhs: ApproxComplex) -> Self {
        Self { name, lhs, rhs }
    }

    pub fn residual(&self) -> ApproxComplex {
        &self.lhs - &self.rhs
    }

    pub fn digits(&self) -> i64 {
        self.lhs.digits_matched(&self.rhs)
    }
}

/// Constants shared by the closed forms: π, ζ(3) and a few square roots.
#[derive(Clone, Debug)]
pub(crate) struct Consts {
    pub prec: u32,
    pub pi: ApproxReal,
    pub zeta3: ApproxReal,
}

impl Consts {
    pub fn new(ctx: &PrecisionContext) -> Result<Self> {
        Ok(Self { prec: ctx.prec(), pi: const_pi(ctx), zeta3: zeta_int(3, ctx)? })
    }

    pub fn sqrt(&self, n: u32) -> Float {
        Float::with_val(self.prec, n).sqrt()
    }

    pub fn pi_pow(&self, k: i32) -> ApproxReal {
        self.pi.pow_i32(k)
    }


    /// `(b + sqrt(-d)) / den` as a point of the upper half-plane.
    pub fn tau(&self, b: i64, d: u64, den: i64) -> Tau {
        Tau::quadratic(b, d, den, self.prec).expect("quadratic point with d > 0")
    }
}

pub(crate) fn q_float(prec: u32, num: i64, den: i64) -> Float {
    Float::with_val(prec, num) / den
}
