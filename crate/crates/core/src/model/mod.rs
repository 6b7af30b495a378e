//! Curvature-aware p_z tight binding in block-tridiagonal form.

mod bands;
mod hamiltonian;

use thiserror::Error;

pub use bands::{bloch_bands, BandStructure};
pub use hamiltonian::{assemble, BiasRamp, BlockHamiltonian, LeadBlocks};

use crate::geometry::AtomSite;
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("hopping model: {name} {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("pair at {distance} nm lies beyond the {limit} nm hopping cutoff")]
    OutOfCutoff { distance: f64, limit: f64 },
    #[error("sites {i} (layer {layer_i}) and {j} (layer {layer_j}) interact across non-adjacent layers")]
    NonAdjacentLayers { i: usize, j: usize, layer_i: usize, layer_j: usize },
}

/// Two-centre p-p integrals with an exponential bond-length decay.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HoppingModel {
    /// V_ppπ at `a_cc` (eV).
    pub v_pp_pi: f64,
    /// V_ppσ at `a_cc` (eV).
    pub v_pp_sigma: f64,
    pub decay_beta: f64,
    /// Neighbour cutoff in units of `a_cc`.
    pub cutoff: f64,
}

impl Default for HoppingModel {
    fn default() -> Self {
        HoppingModel { v_pp_pi: -2.7, v_pp_sigma: 4.7, decay_beta: 3.0, cutoff: 1.1 }
    }
}

impl HoppingModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.v_pp_pi < 0.0 && self.v_pp_pi.is_finite()) {
            return Err(ModelError::InvalidParameter { name: "v_pp_pi", reason: "must be negative" });
        }
        if !(self.v_pp_sigma > 0.0 && self.v_pp_sigma.is_finite()) {
            return Err(ModelError::InvalidParameter { name: "v_pp_sigma", reason: "must be positive" });
        }
        if !(self.decay_beta >= 0.0 && self.decay_beta.is_finite()) {
            return Err(ModelError::InvalidParameter {
                name: "decay_beta",
                reason: "must be non-negative",
            });
        }
        if !(self.cutoff > 1.0 && self.cutoff < 1.3) {
            return Err(ModelError::InvalidParameter { name: "cutoff", reason: "must lie in (1, 1.3)" });
        }
        Ok(())
    }

    /// Hopping between two sites (eV).
    pub fn hopping(&self, a: &AtomSite, b: &AtomSite, a_cc: f64) -> Result<f64, ModelError> {
        self.hopping_raw(&a.position, &a.normal, &b.position, &b.normal, a_cc)
    }

    /// Slater-Koster p-p element between orbitals pointing along `n_i`, `n_j`:
    /// `[σ (n_i·d)(n_j·d) + π (n_i·n_j - (n_i·d)(n_j·d))] exp(-β (d/a_cc - 1))`.
    pub fn hopping_raw(
        &self,
        r_i: &[f64; 3],
        n_i: &[f64; 3],
        r_j: &[f64; 3],
        n_j: &[f64; 3],
        a_cc: f64,
    ) -> Result<f64, ModelError> {
        let delta = math::sub(r_j, r_i);
        let d = math::norm(&delta);
        let limit = self.cutoff * a_cc;
        if d > limit || d == 0.0 {
            return Err(ModelError::OutOfCutoff { distance: d, limit });
        }
        let unit = [delta[0] / d, delta[1] / d, delta[2] / d];
        let proj = math::dot(n_i, &unit) * math::dot(n_j, &unit);
        let parallel = math::dot(n_i, n_j);
        let angular = self.v_pp_sigma * proj + self.v_pp_pi * (parallel - proj);
        Ok(angular * math::exp(-self.decay_beta * (d / a_cc - 1.0)))
    }
}
