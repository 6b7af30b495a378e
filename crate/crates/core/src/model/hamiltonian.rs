use alloc::vec::Vec;

use num_complex::Complex64;

use super::{HoppingModel, ModelError};
use crate::geometry::{AtomSite, DeviceGeometry, RibbonSpec};
use crate::linalg::CMatrix;

/// Linear potential drop across the channel for a bias `v_b`.
///
/// The left lead sits at `+v_b/2` eV, the right lead at `-v_b/2` eV and the
/// channel layers interpolate linearly between the two, endpoints included.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BiasRamp {
    pub v_b: f64,
    pub mu_left: f64,
    pub mu_right: f64,
    /// Onsite shift of every layer (leads included), eV.
    pub layer_shifts: Vec<f64>,
}

impl BiasRamp {
    pub fn new(v_b: f64, spec: &RibbonSpec) -> Self {
        let half = 0.5 * v_b;
        let n_ch = spec.n_cells_channel;
        let layer_shifts = (0..spec.n_layers())
            .map(|layer| {
                if layer < spec.n_cells_lead {
                    half
                } else if layer >= spec.n_cells_lead + n_ch {
                    -half
                } else if n_ch == 1 {
                    0.0
                } else {
                    let i = (layer - spec.n_cells_lead) as f64;
                    half - v_b * i / (n_ch as f64 - 1.0)
                }
            })
            .collect();
        BiasRamp { v_b, mu_left: half, mu_right: -half, layer_shifts }
    }

    pub fn zero(spec: &RibbonSpec) -> Self {
        Self::new(0.0, spec)
    }

    pub fn lead_left_shift(&self) -> f64 {
        self.mu_left
    }

    pub fn lead_right_shift(&self) -> f64 {
        self.mu_right
    }
}

/// Principal-layer pair of a semi-infinite lead. `h01` couples a cell to
/// the next cell in the +z direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadBlocks {
    pub h00: CMatrix,
    pub h01: CMatrix,
}

impl LeadBlocks {
    pub fn orbitals(&self) -> usize {
        self.h00.rows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    /// Diagonal blocks, one per layer (eV).
    pub onsite: Vec<CMatrix>,
    /// `coupling[l]` links layer `l` (rows) to layer `l + 1` (columns).
    pub coupling: Vec<CMatrix>,
    pub lead_left: LeadBlocks,
    pub lead_right: LeadBlocks,
    pub bias: f64,
}

impl BlockHamiltonian {
    pub fn n_layers(&self) -> usize {
        self.onsite.len()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.onsite.iter().map(CMatrix::rows).collect()
    }

    /// First orbital index of every layer.
    pub fn layer_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.n_layers());
        let mut acc = 0;
        for block in &self.onsite {
            offsets.push(acc);
            acc += block.rows();
        }
        offsets
    }

    pub fn total_orbitals(&self) -> usize {
        self.onsite.iter().map(CMatrix::rows).sum()
    }

    /// Coupling from the device's first layer into the left lead, `H_{0,-1}`.
    pub fn left_contact(&self) -> CMatrix {
        self.lead_left.h01.adjoint()
    }

    /// Coupling from the device's last layer into the right lead, `H_{N-1,N}`.
    pub fn right_contact(&self) -> CMatrix {
        self.lead_right.h01.clone()
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.total_orbitals();
        let offsets = self.layer_offsets();
        let mut full = CMatrix::zeros(n, n);
        for (l, block) in self.onsite.iter().enumerate() {
            full.set_block(offsets[l], offsets[l], block);
        }
        for (l, block) in self.coupling.iter().enumerate() {
            full.set_block(offsets[l], offsets[l + 1], block);
            full.set_block(offsets[l + 1], offsets[l], &block.adjoint());
        }
        full
    }

    /// The same device seen with the transport axis reversed: layers in
    /// reverse order and the two leads exchanged. The mirror of a device at
    /// bias `-v` is a device at bias `+v`.
    pub fn mirrored(&self) -> BlockHamiltonian {
        let flip = |lead: &LeadBlocks| LeadBlocks { h00: lead.h00.clone(), h01: lead.h01.adjoint() };
        BlockHamiltonian {
            onsite: self.onsite.iter().rev().cloned().collect(),
            coupling: self.coupling.iter().rev().map(CMatrix::adjoint).collect(),
            lead_left: flip(&self.lead_right),
            lead_right: flip(&self.lead_left),
            bias: -self.bias,
        }
    }

    /// Largest Hermiticity defect over the onsite blocks and lead blocks.
    pub fn hermiticity_error(&self) -> f64 {
        self.onsite
            .iter()
            .chain([&self.lead_left.h00, &self.lead_right.h00])
            .map(CMatrix::hermiticity_error)
            .fold(0.0, f64::max)
    }
}

/// Assemble the block-tridiagonal Hamiltonian of `geom` at the given bias.
/// The p_z onsite energy is the zero of energy before bias shifts.
pub fn assemble(
    geom: &DeviceGeometry,
    model: &HoppingModel,
    bias: &BiasRamp,
) -> Result<BlockHamiltonian, ModelError> {
    model.validate()?;
    let spec = &geom.spec;
    let a_cc = spec.a_cc;
    let n_layers = geom.n_layers();
    assert_eq!(bias.layer_shifts.len(), n_layers, "bias ramp built for another layout");
    let per = spec.atoms_per_cell();

    let mut onsite: Vec<CMatrix> = (0..n_layers).map(|_| CMatrix::zeros(per, per)).collect();
    let mut coupling: Vec<CMatrix> =
        (0..n_layers.saturating_sub(1)).map(|_| CMatrix::zeros(per, per)).collect();

    for (i, j, _) in geom.neighbor_pairs(model.cutoff * a_cc) {
        let (si, sj) = (&geom.sites[i], &geom.sites[j]);
        let t = Complex64::new(model.hopping(si, sj, a_cc)?, 0.0);
        let (li, lj) = (si.layer, sj.layer);
        let (ri, rj) = (i - li * per, j - lj * per);
        match lj - li {
            0 => {
                onsite[li][(ri, rj)] = t;
                onsite[li][(rj, ri)] = t;
            }
            1 => coupling[li][(ri, rj)] = t,
            _ => return Err(ModelError::NonAdjacentLayers { i, j, layer_i: li, layer_j: lj }),
        }
    }
    for (block, shift) in onsite.iter_mut().zip(&bias.layer_shifts) {
        block.add_diagonal(Complex64::new(*shift, 0.0));
    }

    let left_cell = &geom.sites[geom.layer_range(0)];
    let right_cell = &geom.sites[geom.layer_range(n_layers - 1)];
    let lead_left = lead_blocks(left_cell, model, spec, bias.lead_left_shift())?;
    let lead_right = lead_blocks(right_cell, model, spec, bias.lead_right_shift())?;

    Ok(BlockHamiltonian { onsite, coupling, lead_left, lead_right, bias: bias.v_b })
}

/// Lead blocks from one outermost cell and a copy of it shifted by one
/// period along +z.
fn lead_blocks(
    cell: &[AtomSite],
    model: &HoppingModel,
    spec: &RibbonSpec,
    shift: f64,
) -> Result<LeadBlocks, ModelError> {
    let n = cell.len();
    let a_cc = spec.a_cc;
    let limit = model.cutoff * a_cc;
    let period = spec.cell_length();
    let mut h00 = CMatrix::zeros(n, n);
    let mut h01 = CMatrix::zeros(n, n);
    for (i, si) in cell.iter().enumerate() {
        for (j, sj) in cell.iter().enumerate() {
            if i != j && crate::math::distance(&si.position, &sj.position) <= limit {
                h00[(i, j)] = Complex64::new(model.hopping(si, sj, a_cc)?, 0.0);
            }
            let ghost = [sj.position[0], sj.position[1], sj.position[2] + period];
            if crate::math::distance(&si.position, &ghost) <= limit {
                let t = model.hopping_raw(&si.position, &si.normal, &ghost, &sj.normal, a_cc)?;
                h01[(i, j)] = Complex64::new(t, 0.0);
            }
        }
    }
    h00.add_diagonal(Complex64::new(shift, 0.0));
    Ok(LeadBlocks { h00, h01 })
}
