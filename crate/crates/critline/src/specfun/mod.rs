//! Complex special-function kernel.

mod completed;
mod gamma;
mod hyper;
mod zeta;

pub use completed::{big_xi, eta_completed, eta_parts, rho_real, rho_scaled, xi_c, EtaParts};
pub use gamma::{gamma_c, ln_gamma};
pub use hyper::{onef1, onef1_asym_residual};
pub use zeta::zeta_c;
