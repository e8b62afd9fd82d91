//! Dirichlet and modular L-values, gamma-product closed forms, point counts on
//! y² = x³ + 1 and the symmetric-square local factor check.

mod dirichlet;
mod elliptic;
mod modular;

pub use dirichlet::{dirichlet_l, kronecker_symbol};
pub use elliptic::{ec_ap, grossen_qexp, primes_up_to, sym2_local_defect, GrossenKind};
pub use modular::{fricke_sign, modular_l, modular_l_split, rwz_closed, NewformData};
