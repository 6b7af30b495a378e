use alloc::vec::Vec;
use core::fmt;

use super::{AtomSite, DeviceGeometry, GeometryError, Region, Sublattice, DEFAULT_A_CC};
use crate::math;

/// Size of an armchair ribbon device: width in dimer lines, lengths in cells.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RibbonSpec {
    pub n_a: usize,
    pub n_cells_channel: usize,
    /// Principal layers of ideal lead kept on each side of the channel.
    pub n_cells_lead: usize,
    /// Carbon-carbon bond length (nm).
    pub a_cc: f64,
}

impl RibbonSpec {
    pub fn new(n_a: usize, n_cells_channel: usize) -> Self {
        RibbonSpec { n_a, n_cells_channel, n_cells_lead: 1, a_cc: DEFAULT_A_CC }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.n_a < 2 {
            return Err(GeometryError::InvalidSpec { field: "n_a", reason: "must be at least 2" });
        }
        if self.n_cells_channel < 1 {
            return Err(GeometryError::InvalidSpec {
                field: "n_cells_channel",
                reason: "must be at least 1",
            });
        }
        if self.n_cells_lead < 1 {
            return Err(GeometryError::InvalidSpec {
                field: "n_cells_lead",
                reason: "must be at least 1",
            });
        }
        if !(self.a_cc > 0.0 && self.a_cc.is_finite()) {
            return Err(GeometryError::InvalidSpec { field: "a_cc", reason: "must be positive" });
        }
        Ok(())
    }

    /// Edge-to-edge width (nm): `(n_a - 1) * sqrt(3)/2 * a_cc`.
    pub fn width(&self) -> f64 {
        (self.n_a as f64 - 1.0) * row_spacing(self.a_cc)
    }

    /// Translational period along the ribbon axis (nm).
    pub fn cell_length(&self) -> f64 {
        3.0 * self.a_cc
    }

    pub fn atoms_per_cell(&self) -> usize {
        2 * self.n_a
    }

    pub fn channel_length(&self) -> f64 {
        self.n_cells_channel as f64 * self.cell_length()
    }

    pub fn n_layers(&self) -> usize {
        self.n_cells_channel + 2 * self.n_cells_lead
    }

    /// `z` where the channel begins.
    pub fn channel_start(&self) -> f64 {
        self.n_cells_lead as f64 * self.cell_length()
    }

    pub fn region_of_layer(&self, layer: usize) -> Region {
        if layer < self.n_cells_lead {
            Region::LeftLead
        } else if layer < self.n_cells_lead + self.n_cells_channel {
            Region::Channel
        } else {
            Region::RightLead
        }
    }
}

fn row_spacing(a_cc: f64) -> f64 {
    0.5 * math::sqrt(3.0) * a_cc
}

/// Band-gap family of an armchair ribbon, set by `n_a mod 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    ThreeP,
    ThreePPlusOne,
    ThreePPlusTwo,
}

impl Family {
    /// `3p + 1` ribbons have the widest gaps.
    pub fn is_max_gap(self) -> bool {
        self == Family::ThreePPlusOne
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::ThreeP => "3p",
            Family::ThreePPlusOne => "3p+1",
            Family::ThreePPlusTwo => "3p+2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_family(n_a: usize) -> Family {
    match n_a % 3 {
        0 => Family::ThreeP,
        1 => Family::ThreePPlusOne,
        _ => Family::ThreePPlusTwo,
    }
}

/// Planar armchair ribbon with the channel flanked by `n_cells_lead` lead
/// cells on each side.
///
/// Within a cell of length `3 a_cc`, even dimer lines carry atoms at
/// `z = 0, a_cc` and odd lines at `z = 1.5 a_cc, 2.5 a_cc`.
pub fn build_flat_ribbon(spec: &RibbonSpec) -> Result<DeviceGeometry, GeometryError> {
    spec.validate()?;
    let a = spec.a_cc;
    let dx = row_spacing(a);
    let mut sites = Vec::with_capacity(spec.n_layers() * spec.atoms_per_cell());
    for cell in 0..spec.n_layers() {
        let z0 = cell as f64 * spec.cell_length();
        let region = spec.region_of_layer(cell);
        for line in 0..spec.n_a {
            let offsets = if line % 2 == 0 { [0.0, 1.0] } else { [1.5, 2.5] };
            for (k, off) in offsets.iter().enumerate() {
                sites.push(AtomSite {
                    position: [line as f64 * dx, 0.0, z0 + off * a],
                    normal: [0.0, 1.0, 0.0],
                    sublattice: if k == 0 { Sublattice::A } else { Sublattice::B },
                    layer: cell,
                    region,
                    dimer_line: line,
                });
            }
        }
    }
    Ok(DeviceGeometry::new(*spec, None, sites))
}
