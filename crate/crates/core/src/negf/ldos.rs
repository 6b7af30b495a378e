use alloc::vec::Vec;
use core::f64::consts::PI;

use super::device::contacts;
use super::{clip_nonnegative, DecimationOptions, EnergyGrid, GreensOptions, NegfError};
use crate::exec::Executor;
use crate::geometry::{DeviceGeometry, Region};
use crate::linalg::CMatrix;
use crate::model::BlockHamiltonian;

const TIE_TOL: f64 = 1e-9;

/// Local density of states, `values[k][e]` for site `sites[k]` at `energies[e]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LdosTable {
    pub energies: Vec<f64>,
    pub sites: Vec<usize>,
    pub values: Vec<Vec<f64>>,
    pub eta: f64,
}

impl LdosTable {
    pub fn for_site(&self, site: usize) -> Option<&[f64]> {
        self.sites.iter().position(|&s| s == site).map(|k| self.values[k].as_slice())
    }
}

/// Diagonal blocks `G_ii` for layers `from..N` by a forward-backward sweep.
pub fn rgf_diagonal(
    h: &BlockHamiltonian,
    energy: f64,
    opts: &GreensOptions,
    from: usize,
) -> Result<Vec<CMatrix>, NegfError> {
    let c = contacts(h, energy, opts)?;
    let z = opts.device_energy(energy);
    let singular = |_| NegfError::Singular { energy, eta: opts.eta };
    let n = h.n_layers();

    let mut left: Vec<CMatrix> = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = h.onsite[i].resolvent_argument(z);
        if i == 0 {
            a.sub_assign(&c.sigma_left);
        }
        if i + 1 == n {
            a.sub_assign(&c.sigma_right);
        }
        if i > 0 {
            let hop = &h.coupling[i - 1];
            a.sub_assign(&hop.adjoint_matmul(&left[i - 1].matmul(hop)));
        }
        left.push(a.inverse().map_err(singular)?);
    }

    let from = from.min(n - 1);
    let mut diag: Vec<CMatrix> = Vec::with_capacity(n - from);
    diag.push(left[n - 1].clone());
    for i in (from..n - 1).rev() {
        let hop = &h.coupling[i];
        let g = &left[i];
        let gh = g.matmul(hop);
        let hg = hop.adjoint_matmul(g);
        let mut full = g.clone();
        full.add_assign(&gh.matmul(diag.last().unwrap()).matmul(&hg));
        diag.push(full);
    }
    diag.reverse();
    Ok(diag)
}

/// LDOS `-Im G_ii / π` (states/eV) on `sites` (all sites when `None`) over
/// `grid`.
pub fn ldos<E: Executor>(
    h: &BlockHamiltonian,
    grid: &EnergyGrid,
    decimation: &DecimationOptions,
    sites: Option<&[usize]>,
    exec: &E,
) -> Result<LdosTable, NegfError> {
    grid.validate()?;
    let total = h.total_orbitals();
    let sites: Vec<usize> = match sites {
        Some(s) => s.to_vec(),
        None => (0..total).collect(),
    };
    if let Some(&bad) = sites.iter().find(|&&s| s >= total) {
        return Err(NegfError::DimensionMismatch { what: "site index", expected: total, found: bad });
    }
    let offsets = h.layer_offsets();
    let locate = |site: usize| {
        let layer = offsets.partition_point(|&o| o <= site) - 1;
        (layer, site - offsets[layer])
    };
    let from = sites.iter().map(|&s| locate(s).0).min().unwrap_or(0);
    let opts = GreensOptions { decimation: *decimation, ..GreensOptions::for_ldos(grid.eta) };
    let energies = grid.points();

    let rows = exec
        .map(&energies, |e| -> Result<Vec<f64>, NegfError> {
            let diag = rgf_diagonal(h, e, &opts, from)?;
            sites
                .iter()
                .map(|&site| {
                    let (layer, k) = locate(site);
                    let value = -diag[layer - from][(k, k)].im / PI;
                    clip_nonnegative(value).ok_or(NegfError::NegativeLdos { energy: e, site, value })
                })
                .collect()
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let values = (0..sites.len()).map(|k| rows.iter().map(|r| r[k]).collect()).collect();
    Ok(LdosTable { energies, sites, values, eta: grid.eta })
}

/// Representative atoms for local-density comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingAtoms {
    /// Channel atom closest to the left lead.
    pub far: usize,
    /// Channel atom whose surface normal is rotated the most; `None` when flat.
    pub arc: Option<usize>,
}

/// Pick the sampling atoms. Among candidates within `1e-9` of the optimum,
/// the one closest to the ribbon centre line wins, then the lowest index.
pub fn sampling_atoms(geom: &DeviceGeometry) -> SamplingAtoms {
    let centre = 0.5 * geom.spec.width();
    let channel: Vec<usize> = (0..geom.sites.len())
        .filter(|&i| geom.sites[i].region == Region::Channel)
        .collect();
    let pick = |score: &dyn Fn(usize) -> f64| -> usize {
        let best = channel.iter().map(|&i| score(i)).fold(f64::INFINITY, f64::min);
        let mut chosen = None::<(f64, usize)>;
        for &i in &channel {
            if score(i) > best + TIE_TOL {
                continue;
            }
            let off = (geom.sites[i].position[0] - centre).abs();
            if chosen.map_or(true, |(o, _)| off < o - TIE_TOL) {
                chosen = Some((off, i));
            }
        }
        chosen.map(|(_, i)| i).unwrap_or(0)
    };
    let far = pick(&|i| geom.sites[i].position[2]);
    let arc = match &geom.profile {
        Some(p) if !p.is_degenerate() => {
            Some(pick(&|i| {
                let n = geom.sites[i].normal;
                -libm::atan2(-n[2], n[1])
            }))
        }
        _ => None,
    };
    SamplingAtoms { far, arc }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::geometry::{apply_step_deformation, build_flat_ribbon, resolve_profile, RibbonSpec};
    use crate::model::{assemble, BiasRamp, HoppingModel};
    use crate::negf::dense_greens;

    #[test]
    fn rgf_ldos_matches_dense_diagonal() {
        let spec = RibbonSpec::new(5, 3);
        let g = build_flat_ribbon(&spec).unwrap();
        let h = assemble(&g, &HoppingModel::default(), &BiasRamp::new(0.1, &spec)).unwrap();
        let grid = EnergyGrid::new(-1.0, 1.5, 4, 5e-3).unwrap();
        let table = ldos(&h, &grid, &DecimationOptions::default(), None, &Sequential).unwrap();
        let opts = GreensOptions::for_ldos(5e-3);
        for (e_idx, &e) in table.energies.iter().enumerate() {
            let dense = dense_greens(&h, e, &opts).unwrap().ldos_raw();
            for (k, &site) in table.sites.iter().enumerate() {
                assert!((table.values[k][e_idx] - dense[site].max(0.0)).abs() < 1e-10);
            }
        }
        let part = ldos(&h, &grid, &DecimationOptions::default(), Some(&[31, 12]), &Sequential).unwrap();
        assert_eq!(part.for_site(31), table.for_site(31));
        assert_eq!(part.for_site(12), table.for_site(12));
    }

    #[test]
    fn sampling_atoms_on_step() {
        let spec = RibbonSpec::new(7, 16);
        let flat = build_flat_ribbon(&spec).unwrap();
        assert_eq!(sampling_atoms(&flat).arc, None);
        let p = resolve_profile(0.78, 0.40, 90.0, spec.channel_length(), spec.a_cc).unwrap();
        let bent = apply_step_deformation(&flat, &p).unwrap();
        let s = sampling_atoms(&bent);
        let far = &bent.sites[s.far];
        assert_eq!(far.region, Region::Channel);
        assert_eq!(far.layer, spec.n_cells_lead);
        // only even lines reach the lowest z; lines 2 and 4 tie on centring
        assert_eq!(far.dimer_line, 2);
        let arc = &bent.sites[s.arc.unwrap()];
        assert!((2..=4).contains(&arc.dimer_line));
        let rot = libm::atan2(-arc.normal[2], arc.normal[1]).to_degrees();
        assert!(rot > 0.9 * p.theta_eff_deg(), "rotation {rot}");
        assert_eq!(s.far, sampling_atoms(&flat).far);
    }
}
