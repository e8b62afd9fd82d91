//! Eta quotients, Weber functions, Eisenstein and theta series, the cusp
//! forms of levels 12, 14 and 15, and the level-6 hauptmodul with its periods.

mod eisenstein;
mod eta;
mod hauptmodul;
mod newforms;
mod qexp;
mod theta;
mod weber;

pub use eisenstein::{eisenstein_eval, eisenstein_qexp, lambert_sum};
pub use eta::{eta, eta_quotient_eval, eta_quotient_qexp, EtaQuotientSpec, Tau};
pub use hauptmodul::{cm_point, cm_points, hauptmodul_t, invert_t, varpi, CmPoint, Period};
pub use newforms::{f15_eta_construction, f15_theta_construction, newform_qexp, NewformId};
pub use qexp::QExpansion;
pub use theta::{theta_bqf_qexp, Bqf};
pub use weber::{weber, WeberKind};
