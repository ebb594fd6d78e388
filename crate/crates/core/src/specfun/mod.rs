//! Special functions: Gamma, Riemann zeta and xi, Epstein zeta of binary
//! quadratic forms, rational functions.

mod epstein;
mod gamma;
mod rational;
mod zeta;

pub use epstein::{epstein_completed, epstein_zeta, ln_epstein_completed, ln_epstein_xi, QuadraticForm};
pub use gamma::{gamma, ln_gamma};
pub use rational::{ln_rational, rational_eval};
pub use zeta::{completed_xi, ln_completed_xi, riemann_zeta};
