//! Precision management, ball-style approximate numbers and the special
//! functions used by the rest of the crate.

mod approx;
mod bessel;
mod context;
mod elliptic;
mod gamma;
pub mod quad;
mod special;
mod trig;
mod zeta;

pub use approx::{ApproxComplex, ApproxReal, Radius};
pub use bessel::bessel_j0;
pub use context::{make_context, PrecisionContext, TruncationPolicy};
pub use elliptic::{agm, elliptic_k_from_complement};
pub use gamma::{expint_e1, gamma_rational, incomplete_gamma_int, ln_gamma_real};
pub use special::{bernoulli, const_pi, euler_gamma, ExactRational};
pub use trig::{complex_cot, cot_plus_i};
pub use zeta::{hurwitz_zeta_int, zeta_int, zeta_int_euler_maclaurin};
