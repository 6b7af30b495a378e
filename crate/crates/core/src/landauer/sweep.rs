use alloc::vec::Vec;
use core::fmt;

use super::{check_biases, iv_curve, CurrentOptions, IVCurve, LandauerError};
use crate::exec::Executor;
use crate::geometry::{apply_step_deformation, build_flat_ribbon, resolve_profile, RibbonSpec};
use crate::model::HoppingModel;

/// Lower bound on the deviation denominator (A).
pub const DEVIATION_FLOOR: f64 = 1e-12;

/// Relative closeness under which two sensitivity scores count as tied.
const TIE_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SweepParameter {
    #[cfg_attr(feature = "serde", serde(rename = "H"))]
    StepHeight,
    #[cfg_attr(feature = "serde", serde(rename = "CR"))]
    CurvatureRadius,
    #[cfg_attr(feature = "serde", serde(rename = "theta"))]
    BendAngle,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 3] =
        [SweepParameter::StepHeight, SweepParameter::CurvatureRadius, SweepParameter::BendAngle];

    pub fn label(self) -> &'static str {
        match self {
            SweepParameter::StepHeight => "H",
            SweepParameter::CurvatureRadius => "CR",
            SweepParameter::BendAngle => "theta",
        }
    }

    /// Reference span used to put the three parameters on one scale
    /// (nm, nm, degrees).
    pub fn reference_span(self) -> f64 {
        match self {
            SweepParameter::StepHeight => 2.3 - 0.78,
            SweepParameter::CurvatureRadius => 3.1 - 0.40,
            SweepParameter::BendAngle => 90.0 - 30.0,
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Step height (nm), curvature radius (nm) and nominal bend angle (degrees).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepParams {
    pub step_height: f64,
    pub curvature_radius: f64,
    pub bend_angle_deg: f64,
}

impl StepParams {
    pub fn with(mut self, parameter: SweepParameter, value: f64) -> Self {
        match parameter {
            SweepParameter::StepHeight => self.step_height = value,
            SweepParameter::CurvatureRadius => self.curvature_radius = value,
            SweepParameter::BendAngle => self.bend_angle_deg = value,
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepReport {
    pub parameter: SweepParameter,
    pub fixed: StepParams,
    pub ribbon: RibbonSpec,
    pub values: Vec<f64>,
    pub curves: Vec<IVCurve>,
    pub flat: IVCurve,
    /// Deviation of each bent curve from `flat`, see [`deviation`].
    pub deviations: Vec<f64>,
    /// Bias divided by channel length (V/nm), one per bias point.
    pub field_v_per_nm: Vec<f64>,
}

impl SweepReport {
    pub fn deviation_range(&self) -> f64 {
        let max = self.deviations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.deviations.iter().copied().fold(f64::INFINITY, f64::min);
        if self.deviations.is_empty() { 0.0 } else { max - min }
    }

    fn value_span(&self) -> f64 {
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Range of deviations per unit of normalised parameter span; zero for a
    /// single-point sweep.
    pub fn sensitivity(&self) -> f64 {
        let span = self.value_span() / self.parameter.reference_span();
        if span > 0.0 { self.deviation_range() / span } else { 0.0 }
    }
}

/// `max_V |I_bent(V) - I_flat(V)| / max(|I_flat(V)|, DEVIATION_FLOOR)`.
pub fn deviation(bent: &IVCurve, flat: &IVCurve) -> f64 {
    bent.currents
        .iter()
        .zip(&flat.currents)
        .map(|(b, f)| (b - f).abs() / f.abs().max(DEVIATION_FLOOR))
        .fold(0.0, f64::max)
}

/// I-V curves over `values` of one parameter with the other two held at
/// `fixed`, compared against the flat ribbon of the same layout.
#[allow(clippy::too_many_arguments)]
pub fn sweep<E: Executor>(
    parameter: SweepParameter,
    values: &[f64],
    fixed: StepParams,
    ribbon: &RibbonSpec,
    model: &HoppingModel,
    biases: &[f64],
    opts: &CurrentOptions,
    exec: &E,
) -> Result<SweepReport, LandauerError> {
    check_biases(biases)?;
    let flat = iv_curve(&build_flat_ribbon(ribbon)?, model, biases, opts, exec)?;
    sweep_against(flat, parameter, values, fixed, ribbon, model, opts, exec)
}

/// As [`sweep`], reusing an already computed flat reference curve (whose
/// biases define the bias list).
#[allow(clippy::too_many_arguments)]
pub fn sweep_against<E: Executor>(
    flat: IVCurve,
    parameter: SweepParameter,
    values: &[f64],
    fixed: StepParams,
    ribbon: &RibbonSpec,
    model: &HoppingModel,
    opts: &CurrentOptions,
    exec: &E,
) -> Result<SweepReport, LandauerError> {
    if values.is_empty() {
        return Err(LandauerError::InvalidSweep("no parameter values"));
    }
    let expected = build_flat_ribbon(ribbon)?;
    if flat.fingerprint != expected.fingerprint() {
        return Err(LandauerError::InvalidSweep("flat reference belongs to another ribbon"));
    }
    if flat.linear_response != opts.linear_response {
        return Err(LandauerError::InvalidSweep("flat reference used another response mode"));
    }
    let biases = flat.biases.clone();
    let mut curves = Vec::with_capacity(values.len());
    for &value in values {
        let p = fixed.with(parameter, value);
        let profile = resolve_profile(
            p.step_height,
            p.curvature_radius,
            p.bend_angle_deg,
            ribbon.channel_length(),
            ribbon.a_cc,
        )?;
        let bent = apply_step_deformation(&expected, &profile)?;
        curves.push(iv_curve(&bent, model, &biases, opts, exec)?);
    }
    let deviations = curves.iter().map(|c| deviation(c, &flat)).collect();
    let length = ribbon.channel_length();
    Ok(SweepReport {
        parameter,
        fixed,
        ribbon: *ribbon,
        values: values.to_vec(),
        curves,
        flat,
        deviations,
        field_v_per_nm: biases.iter().map(|v| v / length).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SensitivityRanking {
    /// Most influential first.
    pub order: Vec<SweepParameter>,
    pub scores: Vec<(SweepParameter, f64)>,
    /// Set when any two neighbouring scores are equal, in which case the
    /// alphabetical label order decided.
    pub tie: bool,
}

/// Order the three parameters by normalised deviation range.
pub fn sensitivity_rank(reports: &[SweepReport]) -> Result<SensitivityRanking, LandauerError> {
    if reports.len() != 3 {
        return Err(LandauerError::IncomparableReports("need exactly one report per parameter"));
    }
    for p in SweepParameter::ALL {
        if !reports.iter().any(|r| r.parameter == p) {
            return Err(LandauerError::IncomparableReports("need exactly one report per parameter"));
        }
    }
    let first = &reports[0];
    for r in &reports[1..] {
        if r.ribbon != first.ribbon {
            return Err(LandauerError::IncomparableReports("different ribbon layouts"));
        }
        if r.flat.biases != first.flat.biases {
            return Err(LandauerError::IncomparableReports("different bias lists"));
        }
        if r.flat.linear_response != first.flat.linear_response {
            return Err(LandauerError::IncomparableReports("mixed linear-response settings"));
        }
    }
    let mut scores: Vec<(SweepParameter, f64)> =
        reports.iter().map(|r| (r.parameter, r.sensitivity())).collect();
    let close = |a: f64, b: f64| (a - b).abs() <= TIE_REL * a.abs().max(b.abs());
    scores.sort_by(|x, y| {
        if close(x.1, y.1) {
            x.0.label().cmp(y.0.label())
        } else {
            y.1.total_cmp(&x.1)
        }
    });
    let tie = scores.windows(2).any(|w| close(w[0].1, w[1].1));
    Ok(SensitivityRanking { order: scores.iter().map(|s| s.0).collect(), scores, tie })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Fingerprint;

    fn report(parameter: SweepParameter, values: &[f64], deviations: &[f64]) -> SweepReport {
        let curve = IVCurve {
            biases: alloc::vec![0.0],
            currents: alloc::vec![0.0],
            fingerprint: Fingerprint {
                n_a: 7,
                n_cells_channel: 4,
                step_height: 0.0,
                curvature_radius: 0.0,
                theta_eff_deg: 0.0,
            },
            quadrature: Vec::new(),
            linear_response: false,
            eta: 1e-4,
        };
        SweepReport {
            parameter,
            fixed: StepParams { step_height: 1.0, curvature_radius: 1.0, bend_angle_deg: 30.0 },
            ribbon: RibbonSpec::new(7, 4),
            values: values.to_vec(),
            curves: Vec::new(),
            flat: curve,
            deviations: deviations.to_vec(),
            field_v_per_nm: Vec::new(),
        }
    }

    #[test]
    fn ranking_uses_normalised_spans() {
        let reports = [
            report(SweepParameter::BendAngle, &[30.0, 90.0], &[0.1, 0.11]),
            report(SweepParameter::StepHeight, &[0.78, 2.3], &[0.3, 0.1]),
            report(SweepParameter::CurvatureRadius, &[0.4, 3.1], &[0.5, 0.1]),
        ];
        let r = sensitivity_rank(&reports).unwrap();
        assert_eq!(
            r.order,
            [SweepParameter::CurvatureRadius, SweepParameter::StepHeight, SweepParameter::BendAngle]
        );
        assert!(!r.tie);
        let mut permuted = reports.clone();
        permuted.rotate_left(1);
        assert_eq!(sensitivity_rank(&permuted).unwrap(), r);
    }

    #[test]
    fn single_points_tie() {
        let reports = [
            report(SweepParameter::BendAngle, &[30.0], &[0.1]),
            report(SweepParameter::StepHeight, &[1.0], &[0.3]),
            report(SweepParameter::CurvatureRadius, &[1.0], &[0.5]),
        ];
        let r = sensitivity_rank(&reports).unwrap();
        assert!(r.tie);
        assert_eq!(
            r.order,
            [SweepParameter::CurvatureRadius, SweepParameter::StepHeight, SweepParameter::BendAngle]
        );
    }

    #[test]
    fn mismatched_reports_rejected() {
        let mut reports = [
            report(SweepParameter::BendAngle, &[30.0], &[0.1]),
            report(SweepParameter::StepHeight, &[1.0], &[0.3]),
            report(SweepParameter::CurvatureRadius, &[1.0], &[0.5]),
        ];
        reports[2].ribbon = RibbonSpec::new(9, 4);
        assert!(sensitivity_rank(&reports).is_err());
        assert!(sensitivity_rank(&reports[..2]).is_err());
    }
}
