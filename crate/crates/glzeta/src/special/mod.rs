//! Special functions and numerical integration shared by every formula in
//! the crate: log-Gamma, Beta, the generalized Hurwitz-Lerch zeta Φ*_v, and
//! adaptive semi-infinite quadrature.
//!
//! All functions are pure; there is no shared mutable state.

mod gamma;
mod quad;
mod zeta;

pub use gamma::{beta, digamma, log_beta, log_gamma};
pub use quad::{integrate, integrate_semi_infinite, QuadratureConfig};
pub use zeta::{phi_star, phi_star_integral, ZetaArgs};
