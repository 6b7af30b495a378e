//! Armchair ribbon construction and the isometric step deformation.
//!
//! Axes: `x` runs across the ribbon width, `z` along transport, `y` is the
//! out-of-plane direction of the undeformed sheet. Positions are in nm.

mod deform;
mod profile;
mod ribbon;

use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

pub use deform::apply_step_deformation;
pub use profile::{resolve_profile, BendProfile, ClampWarning, ProfilePoint};
pub use ribbon::{build_flat_ribbon, classify_family, Family, RibbonSpec};

use crate::math;

/// Default carbon-carbon bond length (nm).
pub const DEFAULT_A_CC: f64 = 0.142;

/// Structural bonds are pairs closer than this many bond lengths.
pub const BOND_CUTOFF: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid ribbon spec: {field} {reason}")]
    InvalidSpec { field: &'static str, reason: &'static str },
    #[error("{name} must be positive (got {value})")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("bend angle must lie in (0, 90] degrees (got {value})")]
    AngleOutOfRange { value: f64 },
    #[error("curvature radius {radius} nm is below half a bond length ({a_cc} nm bonds)")]
    CurvatureTooTight { radius: f64, a_cc: f64 },
    #[error("step profile needs {required:.6} nm of sheet but the channel is {available:.6} nm long")]
    ProfileTooLong { required: f64, available: f64 },
    #[error("step deformation expects a flat geometry")]
    NotFlat,
    #[error("profile was resolved for a {profile_nm} nm channel with a_cc={profile_a_cc} nm, geometry has {channel_nm} nm with a_cc={a_cc} nm")]
    ProfileMismatch { profile_nm: f64, profile_a_cc: f64, channel_nm: f64, a_cc: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sublattice {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Region {
    LeftLead,
    Channel,
    RightLead,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AtomSite {
    pub position: [f64; 3],
    /// Local surface normal, unit length.
    pub normal: [f64; 3],
    pub sublattice: Sublattice,
    /// Principal layer (one translational cell) along transport.
    pub layer: usize,
    pub region: Region,
    /// Dimer line across the width, `0..n_a`.
    pub dimer_line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub length: f64,
}

/// Compact identification of a device, carried along with computed spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fingerprint {
    pub n_a: usize,
    pub n_cells_channel: usize,
    /// Zero for a flat ribbon.
    pub step_height: f64,
    pub curvature_radius: f64,
    pub theta_eff_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviceGeometry {
    pub spec: RibbonSpec,
    /// `None` for an undeformed ribbon.
    pub profile: Option<BendProfile>,
    /// Ordered by layer, then dimer line, then `z`.
    pub sites: Vec<AtomSite>,
    pub bonds: Vec<Bond>,
}

impl DeviceGeometry {
    pub(crate) fn new(spec: RibbonSpec, profile: Option<BendProfile>, sites: Vec<AtomSite>) -> Self {
        let mut geom = DeviceGeometry { spec, profile, sites, bonds: Vec::new() };
        let cutoff = BOND_CUTOFF * geom.spec.a_cc;
        geom.bonds = geom
            .neighbor_pairs(cutoff)
            .into_iter()
            .map(|(i, j, length)| Bond { i, j, length })
            .collect();
        geom
    }

    pub fn n_layers(&self) -> usize {
        self.spec.n_layers()
    }

    /// Site indices belonging to `layer`; layers are contiguous.
    pub fn layer_range(&self, layer: usize) -> Range<usize> {
        let per = self.spec.atoms_per_cell();
        layer * per..(layer + 1) * per
    }

    pub fn is_flat(&self) -> bool {
        self.profile.is_none()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let (step_height, curvature_radius, theta_eff_deg) = match &self.profile {
            Some(p) => (p.step_height, p.curvature_radius, p.theta_eff_deg()),
            None => (0.0, 0.0, 0.0),
        };
        Fingerprint {
            n_a: self.spec.n_a,
            n_cells_channel: self.spec.n_cells_channel,
            step_height,
            curvature_radius,
            theta_eff_deg,
        }
    }

    /// Every pair `(i, j, distance)` with `i < j` closer than `cutoff` nm.
    ///
    /// Pairs are searched up to two layers apart so that a pair spanning
    /// non-adjacent layers shows up instead of being silently dropped.
    pub fn neighbor_pairs(&self, cutoff: f64) -> Vec<(usize, usize, f64)> {
        let mut pairs = Vec::new();
        let n_layers = self.n_layers();
        for layer in 0..n_layers {
            let here = self.layer_range(layer);
            let last = (layer + 2).min(n_layers - 1);
            let reach_end = self.layer_range(last).end;
            for i in here.clone() {
                let ri = &self.sites[i].position;
                for j in i + 1..reach_end {
                    let d = math::distance(ri, &self.sites[j].position);
                    if d <= cutoff {
                        pairs.push((i, j, d));
                    }
                }
            }
        }
        pairs
    }

    /// Worst relative deviation of a bond length from `a_cc`.
    pub fn max_bond_strain(&self) -> f64 {
        let a = self.spec.a_cc;
        self.bonds.iter().map(|b| (b.length - a).abs() / a).fold(0.0, f64::max)
    }

    pub fn coordination(&self) -> Vec<usize> {
        let mut count = alloc::vec![0usize; self.sites.len()];
        for b in &self.bonds {
            count[b.i] += 1;
            count[b.j] += 1;
        }
        count
    }

    /// Channel length along the sheet (nm).
    pub fn channel_length(&self) -> f64 {
        self.spec.channel_length()
    }
}
