//! Quantities measured on the evolved state: photon statistics, entanglement
//! entropy, the Husimi Q-function and the atomic population inversion.

mod entropy;
mod pnd;
mod qfunc;

pub use entropy::{entropy, von_neumann};
pub use pnd::{
    eighth_factor, pnd, pnd_closed_eighth, pnd_closed_near_quarter, pnd_closed_quarter, quarter_residue, Pnd,
};
pub use qfunc::{q_grid, q_point, GridMetadata, PhaseGrid, PhaseWindow};

use crate::dynamics::{Model, ModelParams};
use crate::error::Result;
use crate::tau::Tau;

/// `W(tau) = sum_n |C_n|^2 cos(2 W_n tau)`, computed from the coefficients
/// directly rather than from the evolved state.
pub fn atomic_inversion_with(model: &Model, tau: impl Into<Tau>) -> f64 {
    let tau = tau.into();
    let integral = model.integral_frequencies();
    model
        .coefficients()
        .amplitudes()
        .iter()
        .zip(model.frequencies())
        .map(|(c, &w)| c.norm_sqr() * tau.cos_sin(2.0 * w, integral).0)
        .sum()
}

pub fn atomic_inversion(params: &ModelParams, tau: impl Into<Tau>) -> Result<f64> {
    Ok(atomic_inversion_with(&Model::new(*params)?, tau))
}
