//! Zero-temperature Landauer current, I-V curves and geometry sweeps.

mod quadrature;
mod sweep;

use alloc::vec::Vec;

use thiserror::Error;

pub use quadrature::{integrate, QuadratureInfo, QuadratureOptions};
pub use sweep::{
    deviation, sensitivity_rank, sweep, SensitivityRanking, StepParams, SweepParameter,
    SweepReport, sweep_against, DEVIATION_FLOOR,
};

use crate::exec::Executor;
use crate::geometry::{DeviceGeometry, Fingerprint, GeometryError};
use crate::model::{assemble, BiasRamp, BlockHamiltonian, HoppingModel, ModelError};
use crate::negf::{rgf_transmission, GreensOptions, NegfError};
use crate::G0_SIEMENS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandauerError {
    #[error(transparent)]
    Negf(#[from] NegfError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("current integral over [{a}, {b}] eV did not converge: last estimates {previous:e} and {last:e}")]
    NonConvergent { a: f64, b: f64, last: f64, previous: f64 },
    #[error("invalid bias list: {0}")]
    InvalidBiases(&'static str),
    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
    #[error("reports are not comparable: {0}")]
    IncomparableReports(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurrentOptions {
    pub greens: GreensOptions,
    pub quadrature: QuadratureOptions,
    /// Use the zero-bias transmission for every bias window.
    pub linear_response: bool,
}

/// Current through `h` (A), evaluated at the bias stored in `h`.
///
/// The window runs from `μ_R = -V/2` to `μ_L = +V/2`. A negative bias is
/// mapped onto the mirrored device at positive bias, `I(-V) = -I_mirror(V)`.
pub fn current<E: Executor>(
    h: &BlockHamiltonian,
    opts: &CurrentOptions,
    exec: &E,
) -> Result<(f64, QuadratureInfo), LandauerError> {
    if h.bias < 0.0 {
        let (i, info) = current(&h.mirrored(), opts, exec)?;
        return Ok((-i, info));
    }
    window_current(h, h.bias, opts, exec)
}

/// `G0 ∫ T dE` over `[-v/2, v/2]` using the transmission of `h` as given.
fn window_current<E: Executor>(
    h: &BlockHamiltonian,
    v: f64,
    opts: &CurrentOptions,
    exec: &E,
) -> Result<(f64, QuadratureInfo), LandauerError> {
    if v == 0.0 {
        return Ok((0.0, QuadratureInfo::EMPTY));
    }
    let half = 0.5 * v;
    let greens = opts.greens;
    let (integral, info) =
        integrate(-half, half, |e| rgf_transmission(h, e, &greens), &opts.quadrature, exec)?;
    Ok((G0_SIEMENS * integral, info))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IVCurve {
    pub biases: Vec<f64>,
    /// Amperes per ribbon.
    pub currents: Vec<f64>,
    pub fingerprint: Fingerprint,
    pub quadrature: Vec<QuadratureInfo>,
    pub linear_response: bool,
    pub eta: f64,
}

pub(crate) fn check_biases(biases: &[f64]) -> Result<(), LandauerError> {
    if biases.is_empty() {
        return Err(LandauerError::InvalidBiases("empty"));
    }
    if biases.iter().any(|v| !v.is_finite()) {
        return Err(LandauerError::InvalidBiases("non-finite value"));
    }
    if biases.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LandauerError::InvalidBiases("must be strictly increasing"));
    }
    Ok(())
}

/// Current at every bias. Each bias gets its own potential ramp and lead
/// self-energies unless `opts.linear_response` is set.
pub fn iv_curve<E: Executor>(
    geom: &DeviceGeometry,
    model: &HoppingModel,
    biases: &[f64],
    opts: &CurrentOptions,
    exec: &E,
) -> Result<IVCurve, LandauerError> {
    check_biases(biases)?;
    let frozen = if opts.linear_response {
        Some(assemble(geom, model, &BiasRamp::zero(&geom.spec))?)
    } else {
        None
    };
    let mut currents = Vec::with_capacity(biases.len());
    let mut quadrature = Vec::with_capacity(biases.len());
    for &v in biases {
        let (i, info) = match &frozen {
            Some(h0) => {
                let (i, info) = window_current(h0, v.abs(), opts, exec)?;
                (if v < 0.0 { -i } else { i }, info)
            }
            None => {
                let h = assemble(geom, model, &BiasRamp::new(v, &geom.spec))?;
                current(&h, opts, exec)?
            }
        };
        currents.push(i);
        quadrature.push(info);
    }
    Ok(IVCurve {
        biases: biases.to_vec(),
        currents,
        fingerprint: geom.fingerprint(),
        quadrature,
        linear_response: opts.linear_response,
        eta: opts.greens.eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::geometry::{build_flat_ribbon, RibbonSpec};

    #[test]
    fn zero_bias_gives_zero_current() {
        let spec = RibbonSpec::new(5, 2);
        let g = build_flat_ribbon(&spec).unwrap();
        let iv = iv_curve(&g, &HoppingModel::default(), &[0.0], &CurrentOptions::default(), &Sequential)
            .unwrap();
        assert_eq!(iv.currents, alloc::vec![0.0]);
        assert_eq!(iv.quadrature[0].evaluations, 0);
    }

    #[test]
    fn metallic_ribbon_conducts_one_quantum() {
        // n_a = 5 carries a single mode around E = 0
        let spec = RibbonSpec::new(5, 2);
        let g = build_flat_ribbon(&spec).unwrap();
        let opts = CurrentOptions { linear_response: true, ..Default::default() };
        let iv = iv_curve(&g, &HoppingModel::default(), &[-0.1, 0.1], &opts, &Sequential).unwrap();
        let expect = G0_SIEMENS * 0.1;
        assert!((iv.currents[1] - expect).abs() < 1e-3 * expect, "{}", iv.currents[1]);
        assert_eq!(iv.currents[0], -iv.currents[1]);
    }

    #[test]
    fn bias_list_validation() {
        assert!(check_biases(&[]).is_err());
        assert!(check_biases(&[0.1, 0.1]).is_err());
        assert!(check_biases(&[0.2, 0.1]).is_err());
        assert!(check_biases(&[-0.1, 0.0, 0.3]).is_ok());
    }
}
