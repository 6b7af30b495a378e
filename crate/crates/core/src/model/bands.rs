use alloc::vec::Vec;

use num_complex::Complex64;

use super::LeadBlocks;
use crate::math;

/// Bloch spectrum of a lead on a grid of phases `k` (radians per cell).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandStructure {
    pub ks: Vec<f64>,
    /// Ascending eigenvalues per `k` (eV).
    pub energies: Vec<Vec<f64>>,
}

/// Eigenvalues of `H(k) = H00 + H01 e^{ik} + H01^† e^{-ik}` at each `k`.
pub fn bloch_bands(lead: &LeadBlocks, ks: &[f64]) -> BandStructure {
    let energies = ks
        .iter()
        .map(|&k| {
            let phase = Complex64::new(math::cos(k), math::sin(k));
            let mut hk = lead.h00.clone();
            let forward = {
                let mut m = lead.h01.clone();
                m.scale(phase);
                m
            };
            hk.add_assign(&forward);
            hk.add_assign(&forward.adjoint());
            hk.hermitian_eigenvalues()
        })
        .collect();
    BandStructure { ks: ks.to_vec(), energies }
}

impl BandStructure {
    /// Uniform grid of `n` phases over `[0, π]`. Lead Hamiltonians here are
    /// real, so `ε(k) = ε(-k)` and half the zone suffices.
    pub fn half_zone(lead: &LeadBlocks, n: usize) -> Self {
        assert!(n >= 2);
        let ks: Vec<f64> =
            (0..n).map(|i| core::f64::consts::PI * i as f64 / (n - 1) as f64).collect();
        bloch_bands(lead, &ks)
    }

    pub fn n_bands(&self) -> usize {
        self.energies.first().map_or(0, Vec::len)
    }

    /// Number of right-moving channels at `energy`: crossings of `energy` by
    /// the bands over a half-zone grid. Unreliable within a grid step of a
    /// band extremum.
    pub fn mode_count(&self, energy: f64) -> usize {
        let below = |row: &Vec<f64>| row.iter().take_while(|&&e| e < energy).count();
        self.energies
            .windows(2)
            .map(|w| below(&w[0]).abs_diff(below(&w[1])))
            .sum()
    }

    /// Band extrema: zone-boundary values plus interior local extrema.
    pub fn band_edges(&self) -> Vec<f64> {
        let mut edges = Vec::new();
        let nk = self.energies.len();
        for band in 0..self.n_bands() {
            let e = |i: usize| self.energies[i][band];
            edges.push(e(0));
            edges.push(e(nk - 1));
            for i in 1..nk - 1 {
                let (a, b, c) = (e(i - 1), e(i), e(i + 1));
                if (b >= a && b >= c) || (b <= a && b <= c) {
                    edges.push(b);
                }
            }
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        edges
    }

    pub fn distance_to_edge(&self, energy: f64) -> f64 {
        self.band_edges().iter().map(|e| (e - energy).abs()).fold(f64::INFINITY, f64::min)
    }

    /// Gap between the lowest band above half filling and the highest below,
    /// at grid point `i`.
    pub fn direct_gap(&self, i: usize) -> f64 {
        let half = self.n_bands() / 2;
        self.energies[i][half] - self.energies[i][half - 1]
    }

    /// Indirect gap at half filling.
    pub fn gap(&self) -> f64 {
        let half = self.n_bands() / 2;
        let cb = self.energies.iter().map(|e| e[half]).fold(f64::INFINITY, f64::min);
        let vb = self.energies.iter().map(|e| e[half - 1]).fold(f64::NEG_INFINITY, f64::max);
        cb - vb
    }
}
