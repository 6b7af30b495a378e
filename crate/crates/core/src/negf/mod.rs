//! Open-boundary Green's functions: lead surface functions, transmission and
//! local density of states.

mod device;
mod ldos;
mod surface;

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

pub use device::{
    contacts, dense_greens, rgf_transmission, self_energies, transmission, transmission_spectrum,
    Contacts, DenseGreens,
};
pub use ldos::{ldos, rgf_diagonal, sampling_atoms, LdosTable, SamplingAtoms};
pub use surface::{surface_gf, surface_gf_pair, DecimationOptions, LeadSide, SurfaceGf};

use crate::geometry::Fingerprint;

/// Values this far below zero are rounding noise and get clipped; anything
/// more negative is reported as an error.
pub const NEGATIVE_CLIP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NegfError {
    #[error("surface Green's function did not converge at E={energy} eV after {iterations} iterations (residual {residual:e})")]
    DecimationNotConverged { energy: f64, iterations: usize, residual: f64 },
    #[error("singular Green's function at E={energy} eV with eta={eta} eV; try a larger eta")]
    Singular { energy: f64, eta: f64 },
    #[error("negative transmission {value:e} at E={energy} eV")]
    NegativeTransmission { energy: f64, value: f64 },
    #[error("negative LDOS {value:e} on site {site} at E={energy} eV")]
    NegativeLdos { energy: f64, site: usize, value: f64 },
    #[error("dimension mismatch: {what} has {found} orbitals, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("invalid energy grid: {0}")]
    InvalidGrid(&'static str),
}

/// Real energy grid plus the imaginary broadening used on it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub eta: f64,
}

impl EnergyGrid {
    pub fn new(e_min: f64, e_max: f64, n_points: usize, eta: f64) -> Result<Self, NegfError> {
        let grid = EnergyGrid { e_min, e_max, n_points, eta };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), NegfError> {
        if !(self.e_min < self.e_max) || !self.e_min.is_finite() || !self.e_max.is_finite() {
            return Err(NegfError::InvalidGrid("e_min must be below e_max"));
        }
        if self.n_points < 2 {
            return Err(NegfError::InvalidGrid("n_points must be at least 2"));
        }
        if !(self.eta > 0.0) {
            return Err(NegfError::InvalidGrid("eta must be positive"));
        }
        Ok(())
    }

    /// Evenly spaced energies, both ends included.
    pub fn points(&self) -> Vec<f64> {
        let step = (self.e_max - self.e_min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| if i + 1 == self.n_points { self.e_max } else { self.e_min + step * i as f64 })
            .collect()
    }
}

/// Options shared by every Green's function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensOptions {
    /// Imaginary broadening (eV) of the lead surface Green's functions.
    pub eta: f64,
    /// Broaden the device resolvent by the full `eta` (LDOS). When off, the
    /// device sees only `eta * DEVICE_ETA_FRACTION`, so it does not act as a
    /// current sink.
    pub broaden_device: bool,
    pub decimation: DecimationOptions,
}

impl GreensOptions {
    pub const TRANSMISSION_ETA: f64 = 1e-4;
    pub const LDOS_ETA: f64 = 5e-3;
    pub const DEVICE_ETA_FRACTION: f64 = 1e-3;

    pub fn with_eta(eta: f64) -> Self {
        GreensOptions { eta, broaden_device: false, decimation: DecimationOptions::default() }
    }

    pub fn for_ldos(eta: f64) -> Self {
        GreensOptions { broaden_device: true, ..Self::with_eta(eta) }
    }

    /// Complex energy at which the device resolvent is evaluated.
    pub fn device_energy(&self, energy: f64) -> Complex64 {
        let eta = if self.broaden_device { self.eta } else { self.eta * Self::DEVICE_ETA_FRACTION };
        Complex64::new(energy, eta)
    }
}

impl Default for GreensOptions {
    fn default() -> Self {
        Self::with_eta(Self::TRANSMISSION_ETA)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransmissionSpectrum {
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
    pub bias: f64,
    pub eta: f64,
    pub fingerprint: Fingerprint,
}

/// Clip rounding-level negatives to zero; reject genuinely negative values.
pub(crate) fn clip_nonnegative(value: f64) -> Option<f64> {
    if value >= 0.0 {
        Some(value)
    } else if value >= -NEGATIVE_CLIP {
        Some(0.0)
    } else {
        None
    }
}
