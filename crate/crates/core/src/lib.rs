//! Tight-binding quantum transport through step-deformed armchair graphene
//! nanoribbons.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is
//! enabled; file formats, the command line front end and thread pools live in
//! the companion `gnrstep` crate.
//!
//! Pipeline: [`geometry`] builds a flat ribbon and bends its channel over a
//! step, [`model`] turns the atoms into a block-tridiagonal p_z Hamiltonian,
//! [`negf`] computes lead self-energies, transmission and local densities of
//! states, and [`landauer`] integrates currents and runs parameter sweeps.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod exec;
pub mod geometry;
pub mod landauer;
pub mod linalg;
mod math;
pub mod model;
pub mod negf;

pub use exec::{Executor, Sequential};
pub use geometry::{
    apply_step_deformation, build_flat_ribbon, classify_family, resolve_profile, AtomSite,
    BendProfile, DeviceGeometry, Fingerprint, Family, GeometryError, Region, RibbonSpec, Sublattice,
};
pub use landauer::{
    current, iv_curve, sensitivity_rank, sweep, CurrentOptions, IVCurve, LandauerError,
    QuadratureOptions, SensitivityRanking, StepParams, SweepParameter, SweepReport,
};
pub use model::{assemble, BandStructure, BiasRamp, BlockHamiltonian, HoppingModel, LeadBlocks, ModelError};
pub use negf::{
    ldos, rgf_transmission, surface_gf, transmission, EnergyGrid, GreensOptions, LdosTable,
    NegfError, TransmissionSpectrum,
};

/// Conductance quantum 2e²/h in siemens.
pub const G0_SIEMENS: f64 = 7.748091729e-5;
