//! Text artifacts: CSV tables, XYZ coordinates and JSON summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gnrstep_core::geometry::{BendProfile, DeviceGeometry, Region, Sublattice};
use gnrstep_core::landauer::{IVCurve, SensitivityRanking, StepParams, SweepParameter, SweepReport};
use gnrstep_core::negf::{LdosTable, SamplingAtoms, TransmissionSpectrum};
use serde::Serialize;

use crate::RunError;

/// Scientific notation with nine digits after the point, e.g. `1.234567890e-5`.
pub fn num(x: f64) -> String {
    format!("{x:.9e}")
}

/// `T_vb{millivolts}.csv`.
pub fn transmission_file_name(bias: f64) -> String {
    format!("T_vb{}.csv", (bias * 1000.0).round() as i64)
}

pub fn transmission_csv(spectrum: &TransmissionSpectrum) -> String {
    let mut out = String::from("energy_ev,transmission\n");
    for (e, t) in spectrum.energies.iter().zip(&spectrum.values) {
        let _ = writeln!(out, "{},{}", num(*e), num(*t));
    }
    out
}

/// Rows grouped by atom, energies ascending within each atom.
pub fn ldos_csv(table: &LdosTable) -> String {
    let mut out = String::from("atom_index,energy_ev,ldos_per_ev\n");
    for (site, values) in table.sites.iter().zip(&table.values) {
        for (e, v) in table.energies.iter().zip(values) {
            let _ = writeln!(out, "{site},{},{}", num(*e), num(*v));
        }
    }
    out
}

pub fn iv_csv(curve: &IVCurve) -> String {
    let mut out = String::from("bias_v,current_a\n");
    for (v, i) in curve.biases.iter().zip(&curve.currents) {
        let _ = writeln!(out, "{},{}", num(*v), num(*i));
    }
    out
}

/// XYZ text in Ångström with element `C`.
pub fn xyz(geom: &DeviceGeometry) -> String {
    let f = geom.fingerprint();
    let mut out = format!(
        "{}\nH={} CR={} theta_eff={:.6} n_a={}\n",
        geom.sites.len(),
        f.step_height,
        f.curvature_radius,
        f.theta_eff_deg,
        f.n_a
    );
    for s in &geom.sites {
        let p = s.position.map(|c| c * 10.0);
        let _ = writeln!(out, "C {:.8} {:.8} {:.8}", p[0], p[1], p[2]);
    }
    out
}

/// Parse XYZ text back into the comment line and positions in nm.
pub fn parse_xyz(text: &str) -> Result<(String, Vec<[f64; 3]>), RunError> {
    let bad = |why: &str| RunError::Config(format!("malformed XYZ: {why}"));
    let mut lines = text.lines();
    let count: usize = lines
        .next()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| bad("first line must hold the atom count"))?;
    let comment = lines.next().ok_or_else(|| bad("missing comment line"))?.to_string();
    let mut positions = Vec::with_capacity(count);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(bad("atom lines need an element and three coordinates"));
        }
        let mut p = [0.0; 3];
        for (k, field) in fields[1..].iter().enumerate() {
            p[k] = field.parse::<f64>().map_err(|_| bad("coordinate is not a number"))? / 10.0;
        }
        positions.push(p);
    }
    if positions.len() != count {
        return Err(bad("atom count does not match the number of atom lines"));
    }
    Ok((comment, positions))
}

#[derive(Serialize)]
struct SiteRecord {
    index: usize,
    position_nm: [f64; 3],
    normal: [f64; 3],
    sublattice: Sublattice,
    layer: usize,
    region: Region,
    dimer_line: usize,
}

#[derive(Serialize)]
struct GeometryRecord<'a> {
    n_a: usize,
    n_cells_channel: usize,
    n_cells_lead: usize,
    a_cc_nm: f64,
    width_nm: f64,
    channel_length_nm: f64,
    family: &'static str,
    max_gap_family: bool,
    profile: Option<&'a BendProfile>,
    theta_eff_deg: f64,
    max_bond_strain: f64,
    n_atoms: usize,
    n_bonds: usize,
    sites: Vec<SiteRecord>,
}

pub fn geometry_json(geom: &DeviceGeometry) -> String {
    let family = gnrstep_core::geometry::classify_family(geom.spec.n_a);
    let record = GeometryRecord {
        n_a: geom.spec.n_a,
        n_cells_channel: geom.spec.n_cells_channel,
        n_cells_lead: geom.spec.n_cells_lead,
        a_cc_nm: geom.spec.a_cc,
        width_nm: geom.spec.width(),
        channel_length_nm: geom.spec.channel_length(),
        family: family.label(),
        max_gap_family: family.is_max_gap(),
        profile: geom.profile.as_ref(),
        theta_eff_deg: geom.fingerprint().theta_eff_deg,
        max_bond_strain: geom.max_bond_strain(),
        n_atoms: geom.sites.len(),
        n_bonds: geom.bonds.len(),
        sites: geom
            .sites
            .iter()
            .enumerate()
            .map(|(index, s)| SiteRecord {
                index,
                position_nm: s.position,
                normal: s.normal,
                sublattice: s.sublattice,
                layer: s.layer,
                region: s.region,
                dimer_line: s.dimer_line,
            })
            .collect(),
    };
    to_json(&record)
}

#[derive(Serialize)]
struct SamplingRecord<'a> {
    far_atom: usize,
    arc_atom: Option<usize>,
    reported_atoms: &'a [usize],
    eta_ev: f64,
}

pub fn sampling_json(tags: &SamplingAtoms, table: &LdosTable) -> String {
    to_json(&SamplingRecord {
        far_atom: tags.far,
        arc_atom: tags.arc,
        reported_atoms: &table.sites,
        eta_ev: table.eta,
    })
}

#[derive(Serialize)]
struct SweepEntry<'a> {
    parameter: SweepParameter,
    fixed: StepParams,
    values: &'a [f64],
    theta_eff_deg: Vec<f64>,
    deviation: &'a [f64],
    currents_a: Vec<&'a [f64]>,
    sensitivity: f64,
}

#[derive(Serialize)]
struct SweepRecord<'a> {
    biases_v: &'a [f64],
    field_v_per_nm: &'a [f64],
    channel_length_nm: f64,
    linear_response: bool,
    flat_currents_a: &'a [f64],
    sweeps: Vec<SweepEntry<'a>>,
    ordering: Option<Vec<SweepParameter>>,
    tie: Option<bool>,
}

pub fn sweep_json(reports: &[SweepReport], ranking: Option<&SensitivityRanking>) -> String {
    let first = &reports[0];
    let record = SweepRecord {
        biases_v: &first.flat.biases,
        field_v_per_nm: &first.field_v_per_nm,
        channel_length_nm: first.ribbon.channel_length(),
        linear_response: first.flat.linear_response,
        flat_currents_a: &first.flat.currents,
        sweeps: reports
            .iter()
            .map(|r| SweepEntry {
                parameter: r.parameter,
                fixed: r.fixed,
                values: &r.values,
                theta_eff_deg: r.curves.iter().map(|c| c.fingerprint.theta_eff_deg).collect(),
                deviation: &r.deviations,
                currents_a: r.curves.iter().map(|c| c.currents.as_slice()).collect(),
                sensitivity: r.sensitivity(),
            })
            .collect(),
        ordering: ranking.map(|r| r.order.clone()),
        tie: ranking.map(|r| r.tie),
    };
    to_json(&record)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| RunError::Io { path: path.clone(), source })?;
    Ok(path)
}
