//! Theory of the energy-based user-count detector and adder-channel
//! capacity limits.

mod auer;
mod bessel;
mod capacity;
mod chi2;
mod quadrature;
mod sa;

pub use auer::{auer_from_model, auer_theory, AuerModel, AuerTheory, MIN_ATOM_WEIGHT};
pub use bessel::ln_bessel_i;
pub use capacity::{
    capacity_curve, ergodic_capacity, shannon_limit, CapacityEstimate, CapacityGrid, CapacityPoint,
    CapacitySettings,
};
pub use chi2::{chi2_moments, noncentral_chi2_pdf};
pub use quadrature::{integrate_peaked, Integral};
pub use sa::{sa_distribution, SaAtom, SaDistribution};
