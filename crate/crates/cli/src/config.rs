//! Run configuration: a flat TOML document, unknown keys rejected.

use std::path::{Path, PathBuf};

use gnrstep_core::geometry::{
    apply_step_deformation, build_flat_ribbon, resolve_profile, ClampWarning, DeviceGeometry,
    RibbonSpec, DEFAULT_A_CC,
};
use gnrstep_core::landauer::{CurrentOptions, QuadratureOptions, StepParams, SweepParameter};
use gnrstep_core::model::HoppingModel;
use gnrstep_core::negf::{DecimationOptions, EnergyGrid, GreensOptions};
use serde::Deserialize;

use crate::RunError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_a: Option<usize>,
    pub n_cells_channel: Option<usize>,
    pub n_cells_lead: usize,
    /// nm
    pub a_cc: f64,

    /// nm; leave out for a flat ribbon.
    pub step_height: Option<f64>,
    pub curvature_radius: Option<f64>,
    pub bend_angle_deg: Option<f64>,

    pub v_pp_pi: f64,
    pub v_pp_sigma: f64,
    pub decay_beta: f64,
    /// In units of `a_cc`.
    pub hopping_cutoff: f64,

    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub eta: f64,

    pub ldos_e_min: f64,
    pub ldos_e_max: f64,
    pub ldos_n_points: usize,
    pub ldos_eta: f64,
    /// Atom indices to report; the tagged sampling atoms when absent.
    pub ldos_atoms: Option<Vec<usize>>,

    /// V, strictly increasing.
    pub biases: Vec<f64>,

    pub decimation_tol: f64,
    pub decimation_max_iter: usize,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub quad_initial_intervals: usize,
    pub quad_max_depth: usize,

    pub sweep_h_values: Option<Vec<f64>>,
    pub sweep_h_curvature_radius: Option<f64>,
    pub sweep_h_bend_angle_deg: Option<f64>,
    pub sweep_cr_values: Option<Vec<f64>>,
    pub sweep_cr_step_height: Option<f64>,
    pub sweep_cr_bend_angle_deg: Option<f64>,
    pub sweep_theta_values: Option<Vec<f64>>,
    pub sweep_theta_step_height: Option<f64>,
    pub sweep_theta_curvature_radius: Option<f64>,

    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let model = HoppingModel::default();
        let dec = DecimationOptions::default();
        let quad = QuadratureOptions::default();
        RunConfig {
            n_a: None,
            n_cells_channel: None,
            n_cells_lead: 1,
            a_cc: DEFAULT_A_CC,
            step_height: None,
            curvature_radius: None,
            bend_angle_deg: None,
            v_pp_pi: model.v_pp_pi,
            v_pp_sigma: model.v_pp_sigma,
            decay_beta: model.decay_beta,
            hopping_cutoff: model.cutoff,
            e_min: -3.0,
            e_max: 3.0,
            n_points: 601,
            eta: GreensOptions::TRANSMISSION_ETA,
            ldos_e_min: -1.0,
            ldos_e_max: 1.0,
            ldos_n_points: 201,
            ldos_eta: GreensOptions::LDOS_ETA,
            ldos_atoms: None,
            biases: vec![0.0],
            decimation_tol: dec.tol,
            decimation_max_iter: dec.max_iter,
            quad_rel_tol: quad.rel_tol,
            quad_abs_tol: quad.abs_tol,
            quad_initial_intervals: quad.initial_intervals,
            quad_max_depth: quad.max_depth,
            sweep_h_values: None,
            sweep_h_curvature_radius: None,
            sweep_h_bend_angle_deg: None,
            sweep_cr_values: None,
            sweep_cr_step_height: None,
            sweep_cr_bend_angle_deg: None,
            sweep_theta_values: None,
            sweep_theta_step_height: None,
            sweep_theta_curvature_radius: None,
            out_dir: None,
        }
    }
}

fn require<T: Copy>(value: Option<T>, key: &str) -> Result<T, RunError> {
    value.ok_or_else(|| RunError::Config(format!("missing required key `{key}`")))
}

fn invalid(key: &str, why: &str) -> RunError {
    RunError::Config(format!("invalid value for `{key}`: {why}"))
}

/// One sweep request: parameter, its values and the two held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub fixed: StepParams,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| RunError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            RunError::Config(msg) => RunError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn ribbon(&self) -> Result<RibbonSpec, RunError> {
        let spec = RibbonSpec {
            n_a: require(self.n_a, "n_a")?,
            n_cells_channel: require(self.n_cells_channel, "n_cells_channel")?,
            n_cells_lead: self.n_cells_lead,
            a_cc: self.a_cc,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The requested step, or `None` for a flat ribbon.
    pub fn step(&self) -> Result<Option<StepParams>, RunError> {
        match self.step_height {
            None => {
                for (key, v) in [("curvature_radius", self.curvature_radius), ("bend_angle_deg", self.bend_angle_deg)] {
                    if v.is_some() {
                        return Err(invalid(key, "given without `step_height`"));
                    }
                }
                Ok(None)
            }
            Some(step_height) => Ok(Some(StepParams {
                step_height,
                curvature_radius: require(self.curvature_radius, "curvature_radius")?,
                bend_angle_deg: require(self.bend_angle_deg, "bend_angle_deg")?,
            })),
        }
    }

    pub fn model(&self) -> Result<HoppingModel, RunError> {
        let model = HoppingModel {
            v_pp_pi: self.v_pp_pi,
            v_pp_sigma: self.v_pp_sigma,
            decay_beta: self.decay_beta,
            cutoff: self.hopping_cutoff,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn grid(&self) -> Result<EnergyGrid, RunError> {
        EnergyGrid::new(self.e_min, self.e_max, self.n_points, self.eta)
            .map_err(|e| invalid("e_min/e_max/n_points/eta", &e.to_string()))
    }

    pub fn ldos_grid(&self) -> Result<EnergyGrid, RunError> {
        EnergyGrid::new(self.ldos_e_min, self.ldos_e_max, self.ldos_n_points, self.ldos_eta)
            .map_err(|e| invalid("ldos_e_min/ldos_e_max/ldos_n_points/ldos_eta", &e.to_string()))
    }

    pub fn decimation(&self) -> Result<DecimationOptions, RunError> {
        if !(self.decimation_tol > 0.0) {
            return Err(invalid("decimation_tol", "must be positive"));
        }
        Ok(DecimationOptions { tol: self.decimation_tol, max_iter: self.decimation_max_iter })
    }

    pub fn current_options(&self, linear_response: bool) -> Result<CurrentOptions, RunError> {
        if !(self.eta > 0.0) {
            return Err(invalid("eta", "must be positive"));
        }
        if !(self.quad_rel_tol > 0.0) {
            return Err(invalid("quad_rel_tol", "must be positive"));
        }
        if !(self.quad_abs_tol >= 0.0) {
            return Err(invalid("quad_abs_tol", "must not be negative"));
        }
        if self.quad_initial_intervals == 0 {
            return Err(invalid("quad_initial_intervals", "must be at least 1"));
        }
        Ok(CurrentOptions {
            greens: GreensOptions { decimation: self.decimation()?, ..GreensOptions::with_eta(self.eta) },
            quadrature: QuadratureOptions {
                rel_tol: self.quad_rel_tol,
                abs_tol: self.quad_abs_tol,
                initial_intervals: self.quad_initial_intervals,
                max_depth: self.quad_max_depth,
            },
            linear_response,
        })
    }

    pub fn biases(&self) -> Result<Vec<f64>, RunError> {
        let b = &self.biases;
        if b.is_empty() {
            return Err(invalid("biases", "empty list"));
        }
        if b.iter().any(|v| !v.is_finite()) || b.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("biases", "must be finite and strictly increasing"));
        }
        Ok(b.clone())
    }

    pub fn sweeps(&self) -> Result<Vec<SweepRequest>, RunError> {
        let mut out = Vec::new();
        if let Some(values) = &self.sweep_h_values {
            out.push(SweepRequest {
                parameter: SweepParameter::StepHeight,
                values: values.clone(),
                fixed: StepParams {
                    step_height: 0.0,
                    curvature_radius: require(self.sweep_h_curvature_radius, "sweep_h_curvature_radius")?,
                    bend_angle_deg: require(self.sweep_h_bend_angle_deg, "sweep_h_bend_angle_deg")?,
                },
            });
        }
        if let Some(values) = &self.sweep_cr_values {
            out.push(SweepRequest {
                parameter: SweepParameter::CurvatureRadius,
                values: values.clone(),
                fixed: StepParams {
                    step_height: require(self.sweep_cr_step_height, "sweep_cr_step_height")?,
                    curvature_radius: 0.0,
                    bend_angle_deg: require(self.sweep_cr_bend_angle_deg, "sweep_cr_bend_angle_deg")?,
                },
            });
        }
        if let Some(values) = &self.sweep_theta_values {
            out.push(SweepRequest {
                parameter: SweepParameter::BendAngle,
                values: values.clone(),
                fixed: StepParams {
                    step_height: require(self.sweep_theta_step_height, "sweep_theta_step_height")?,
                    curvature_radius: require(
                        self.sweep_theta_curvature_radius,
                        "sweep_theta_curvature_radius",
                    )?,
                    bend_angle_deg: 0.0,
                },
            });
        }
        if out.is_empty() {
            return Err(RunError::Config(
                "no sweep requested; set sweep_h_values, sweep_cr_values or sweep_theta_values".into(),
            ));
        }
        for req in &out {
            if req.values.is_empty() {
                return Err(invalid(&format!("sweep_{}_values", req.parameter.label().to_lowercase()), "empty list"));
            }
        }
        Ok(out)
    }

    /// Flat ribbon, or the ribbon bent over the configured step together with
    /// the clamp warning if the angle had to be reduced.
    pub fn geometry(&self) -> Result<(DeviceGeometry, Option<ClampWarning>), RunError> {
        let spec = self.ribbon()?;
        let flat = build_flat_ribbon(&spec)?;
        match self.step()? {
            None => Ok((flat, None)),
            Some(p) => {
                let profile = resolve_profile(
                    p.step_height,
                    p.curvature_radius,
                    p.bend_angle_deg,
                    spec.channel_length(),
                    spec.a_cc,
                )?;
                let bent = apply_step_deformation(&flat, &profile)?;
                Ok((bent, profile.warning()))
            }
        }
    }
}
