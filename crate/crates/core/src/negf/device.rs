use alloc::vec::Vec;

use num_complex::Complex64;

use super::surface::{surface_gf, surface_gf_pair, LeadSide, SurfaceGf};
use super::{
    clip_nonnegative, DecimationOptions, EnergyGrid, GreensOptions, NegfError,
    TransmissionSpectrum,
};
use crate::exec::Executor;
use crate::geometry::Fingerprint;
use crate::linalg::CMatrix;
use crate::model::{BlockHamiltonian, LeadBlocks};

/// Leads closer than this (eV, elementwise) share one decimation.
const SAME_LEAD_TOL: f64 = 1e-13;

/// Lead self-energies folded onto the outermost device layers, and their
/// broadening matrices `Γ = i(Σ - Σ†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contacts {
    pub sigma_left: CMatrix,
    pub sigma_right: CMatrix,
    pub gamma_left: CMatrix,
    pub gamma_right: CMatrix,
    /// Decimation steps spent (the larger of the two leads).
    pub iterations: usize,
}

/// `Σ = τ g τ†` for both contacts.
pub fn self_energies(
    g_left: &CMatrix,
    g_right: &CMatrix,
    tau_left: &CMatrix,
    tau_right: &CMatrix,
) -> (CMatrix, CMatrix) {
    let sigma_left = tau_left.matmul(g_left).matmul_adjoint(tau_left);
    let sigma_right = tau_right.matmul(g_right).matmul_adjoint(tau_right);
    (sigma_left, sigma_right)
}

fn broadening(sigma: &CMatrix) -> CMatrix {
    let mut gamma = sigma.clone();
    gamma.sub_assign(&sigma.adjoint());
    gamma.scale(Complex64::new(0.0, 1.0));
    gamma
}

fn same_lead(a: &LeadBlocks, b: &LeadBlocks) -> bool {
    a.orbitals() == b.orbitals()
        && a.h00.max_abs_diff(&b.h00) <= SAME_LEAD_TOL
        && a.h01.max_abs_diff(&b.h01) <= SAME_LEAD_TOL
}

fn check_layout(h: &BlockHamiltonian) -> Result<(), NegfError> {
    let first = h.onsite.first().map_or(0, CMatrix::rows);
    let last = h.onsite.last().map_or(0, CMatrix::rows);
    if first == 0 {
        return Err(NegfError::DimensionMismatch { what: "device", expected: 1, found: 0 });
    }
    if h.lead_left.orbitals() != first {
        return Err(NegfError::DimensionMismatch {
            what: "left lead",
            expected: first,
            found: h.lead_left.orbitals(),
        });
    }
    if h.lead_right.orbitals() != last {
        return Err(NegfError::DimensionMismatch {
            what: "right lead",
            expected: last,
            found: h.lead_right.orbitals(),
        });
    }
    Ok(())
}

pub fn contacts(
    h: &BlockHamiltonian,
    energy: f64,
    opts: &GreensOptions,
) -> Result<Contacts, NegfError> {
    check_layout(h)?;
    let (left, right): (SurfaceGf, SurfaceGf) = if same_lead(&h.lead_left, &h.lead_right) {
        surface_gf_pair(&h.lead_left, energy, opts.eta, &opts.decimation)?
    } else {
        (
            surface_gf(&h.lead_left, LeadSide::Left, energy, opts.eta, &opts.decimation)?,
            surface_gf(&h.lead_right, LeadSide::Right, energy, opts.eta, &opts.decimation)?,
        )
    };
    let (sigma_left, sigma_right) =
        self_energies(&left.g, &right.g, &h.left_contact(), &h.right_contact());
    Ok(Contacts {
        gamma_left: broadening(&sigma_left),
        gamma_right: broadening(&sigma_right),
        sigma_left,
        sigma_right,
        iterations: left.iterations.max(right.iterations),
    })
}

/// `z - H_ii` with the contact self-energies subtracted on the end layers.
fn layer_argument(
    h: &BlockHamiltonian,
    layer: usize,
    z: Complex64,
    c: &Contacts,
) -> CMatrix {
    let mut a = h.onsite[layer].resolvent_argument(z);
    if layer == 0 {
        a.sub_assign(&c.sigma_left);
    }
    if layer + 1 == h.n_layers() {
        a.sub_assign(&c.sigma_right);
    }
    a
}

fn caroli(c: &Contacts, g_0n: &CMatrix, energy: f64) -> Result<f64, NegfError> {
    let left = c.gamma_left.matmul(g_0n);
    let right = c.gamma_right.matmul_adjoint(g_0n);
    let value = left.trace_of_product(&right).re;
    clip_nonnegative(value).ok_or(NegfError::NegativeTransmission { energy, value })
}

/// Full retarded Green's function of the device region, by dense inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseGreens {
    pub energy: f64,
    pub g: CMatrix,
    pub contacts: Contacts,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl DenseGreens {
    fn corner(&self, from_last: bool) -> CMatrix {
        let n = self.sizes.len();
        let (r, c) = if from_last { (n - 1, 0) } else { (0, n - 1) };
        self.g.block(self.offsets[r], self.offsets[c], self.sizes[r], self.sizes[c])
    }

    /// Left-to-right transmission `Tr[Γ_L G_{0,N-1} Γ_R G_{0,N-1}†]`.
    pub fn transmission(&self) -> Result<f64, NegfError> {
        caroli(&self.contacts, &self.corner(false), self.energy)
    }

    /// Right-to-left transmission `Tr[Γ_R G_{N-1,0} Γ_L G_{N-1,0}†]`.
    pub fn transmission_reverse(&self) -> Result<f64, NegfError> {
        let swapped = Contacts {
            gamma_left: self.contacts.gamma_right.clone(),
            gamma_right: self.contacts.gamma_left.clone(),
            ..self.contacts.clone()
        };
        caroli(&swapped, &self.corner(true), self.energy)
    }

    /// `-Im G_ii / π` for every orbital, unclipped.
    pub fn ldos_raw(&self) -> Vec<f64> {
        (0..self.g.rows()).map(|i| -self.g[(i, i)].im / core::f64::consts::PI).collect()
    }
}

pub fn dense_greens(
    h: &BlockHamiltonian,
    energy: f64,
    opts: &GreensOptions,
) -> Result<DenseGreens, NegfError> {
    let c = contacts(h, energy, opts)?;
    let z = opts.device_energy(energy);
    let offsets = h.layer_offsets();
    let sizes = h.layer_sizes();
    let n_layers = h.n_layers();
    let mut a = h.to_dense().resolvent_argument(z);
    let first = c.sigma_left.clone();
    let last = c.sigma_right.clone();
    let mut corner = a.block(0, 0, sizes[0], sizes[0]);
    corner.sub_assign(&first);
    a.set_block(0, 0, &corner);
    let o = offsets[n_layers - 1];
    let s = sizes[n_layers - 1];
    let mut corner = a.block(o, o, s, s);
    corner.sub_assign(&last);
    a.set_block(o, o, &corner);
    let g = a.inverse().map_err(|_| NegfError::Singular { energy, eta: opts.eta })?;
    Ok(DenseGreens { energy, g, contacts: c, offsets, sizes })
}

/// Transmission by dense inversion of the whole device.
pub fn transmission(h: &BlockHamiltonian, energy: f64, opts: &GreensOptions) -> Result<f64, NegfError> {
    dense_greens(h, energy, opts)?.transmission()
}

/// Transmission by a forward recursive Green's function sweep; cost is
/// linear in the number of layers.
pub fn rgf_transmission(
    h: &BlockHamiltonian,
    energy: f64,
    opts: &GreensOptions,
) -> Result<f64, NegfError> {
    let c = contacts(h, energy, opts)?;
    let z = opts.device_energy(energy);
    let singular = |_| NegfError::Singular { energy, eta: opts.eta };

    let mut g = layer_argument(h, 0, z, &c).inverse().map_err(singular)?;
    let mut g_0i = g.clone();
    for i in 1..h.n_layers() {
        let hop = &h.coupling[i - 1];
        let mut a = layer_argument(h, i, z, &c);
        a.sub_assign(&hop.adjoint_matmul(&g.matmul(hop)));
        g = a.inverse().map_err(singular)?;
        g_0i = g_0i.matmul(hop).matmul(&g);
    }
    caroli(&c, &g_0i, energy)
}

/// RGF transmission on every point of `grid`.
pub fn transmission_spectrum<E: Executor>(
    h: &BlockHamiltonian,
    grid: &EnergyGrid,
    decimation: &DecimationOptions,
    fingerprint: Fingerprint,
    exec: &E,
) -> Result<TransmissionSpectrum, NegfError> {
    grid.validate()?;
    let opts = GreensOptions { decimation: *decimation, ..GreensOptions::with_eta(grid.eta) };
    let energies = grid.points();
    let values = exec
        .map(&energies, |e| rgf_transmission(h, e, &opts))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TransmissionSpectrum { energies, values, bias: h.bias, eta: grid.eta, fingerprint })
}
