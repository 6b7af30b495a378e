//! Surface Green's functions of semi-infinite leads by iterative decimation
//! (Lopez Sancho, Lopez Sancho and Rubio).

use num_complex::Complex64;

use super::NegfError;
use crate::linalg::CMatrix;
use crate::model::LeadBlocks;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecimationOptions {
    /// Stop once the renormalised couplings fall below this (eV).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DecimationOptions {
    fn default() -> Self {
        DecimationOptions { tol: 1e-12, max_iter: 100 }
    }
}

/// Which way the semi-infinite lead extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeadSide {
    /// Cells at `-1, -2, ...`; the exposed surface faces +z.
    Left,
    /// Cells at `N, N+1, ...`; the exposed surface faces -z.
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGf {
    pub g: CMatrix,
    pub iterations: usize,
    pub residual: f64,
}

/// Surface Green's function of `lead` extending towards `side`, evaluated at
/// `energy + i eta`.
pub fn surface_gf(
    lead: &LeadBlocks,
    side: LeadSide,
    energy: f64,
    eta: f64,
    opts: &DecimationOptions,
) -> Result<SurfaceGf, NegfError> {
    let (left, right) = surface_gf_pair(lead, energy, eta, opts)?;
    Ok(match side {
        LeadSide::Left => left,
        LeadSide::Right => right,
    })
}

/// Both surface functions from one decimation: `(left-extending, right-extending)`.
pub fn surface_gf_pair(
    lead: &LeadBlocks,
    energy: f64,
    eta: f64,
    opts: &DecimationOptions,
) -> Result<(SurfaceGf, SurfaceGf), NegfError> {
    let n = lead.orbitals();
    if lead.h01.rows() != n || lead.h01.cols() != n {
        return Err(NegfError::DimensionMismatch {
            what: "lead coupling",
            expected: n,
            found: lead.h01.rows(),
        });
    }
    let z = Complex64::new(energy, eta);
    let singular = |_| NegfError::Singular { energy, eta };

    let mut alpha = lead.h01.clone();
    let mut beta = lead.h01.adjoint();
    let mut eps = lead.h00.clone();
    let mut eps_right = lead.h00.clone();
    let mut eps_left = lead.h00.clone();

    let mut iterations = 0;
    let mut residual = alpha.max_abs().max(beta.max_abs());
    while residual >= opts.tol {
        if iterations == opts.max_iter {
            return Err(NegfError::DecimationNotConverged { energy, iterations, residual });
        }
        let g = eps.resolvent_argument(z).inverse().map_err(singular)?;
        let ag = alpha.matmul(&g);
        let bg = beta.matmul(&g);
        let agb = ag.matmul(&beta);
        let bga = bg.matmul(&alpha);
        eps_right.add_assign(&agb);
        eps_left.add_assign(&bga);
        eps.add_assign(&agb);
        eps.add_assign(&bga);
        alpha = ag.matmul(&alpha);
        beta = bg.matmul(&beta);
        iterations += 1;
        residual = alpha.max_abs().max(beta.max_abs());
    }
    let left = eps_left.resolvent_argument(z).inverse().map_err(singular)?;
    let right = eps_right.resolvent_argument(z).inverse().map_err(singular)?;
    Ok((
        SurfaceGf { g: left, iterations, residual },
        SurfaceGf { g: right, iterations, residual },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(t: f64) -> LeadBlocks {
        LeadBlocks {
            h00: CMatrix::zeros(1, 1),
            h01: CMatrix::from_fn(1, 1, |_, _| Complex64::new(t, 0.0)),
        }
    }

    #[test]
    fn decoupled_lead_is_bare_resolvent() {
        let lead = LeadBlocks {
            h00: CMatrix::from_fn(2, 2, |i, j| Complex64::new(if i == j { 0.3 } else { -1.0 }, 0.0)),
            h01: CMatrix::zeros(2, 2),
        };
        let s = surface_gf(&lead, LeadSide::Right, 0.1, 1e-3, &DecimationOptions::default()).unwrap();
        let expect = lead.h00.resolvent_argument(Complex64::new(0.1, 1e-3)).inverse().unwrap();
        assert_eq!(s.iterations, 0);
        assert!(s.g.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn chain_matches_analytic_surface_function() {
        // g = (z - sqrt(z^2 - 4t^2)) / (2 t^2), branch with Im g <= 0
        let t = -1.0;
        for &e in &[-1.5, -0.3, 1e-3, 0.7, 1.9, 2.5] {
            let z = Complex64::new(e, 1e-8);
            let root = (z * z - 4.0 * t * t).sqrt();
            let mut g = (z - root) / (2.0 * t * t);
            if g.im > 0.0 || g.norm() > 1.0 / t.abs() + 1e-6 {
                g = (z + root) / (2.0 * t * t);
            }
            let s = surface_gf(&chain(t), LeadSide::Right, e, 1e-8, &DecimationOptions::default())
                .unwrap();
            assert!((s.g[(0, 0)] - g).norm() < 1e-6, "E={e}: {} vs {g}", s.g[(0, 0)]);
        }
    }

    #[test]
    fn band_centre_of_bipartite_chain() {
        let s = surface_gf(&chain(-1.0), LeadSide::Left, 0.0, 1e-6, &DecimationOptions::default())
            .unwrap();
        assert!((s.g[(0, 0)] - Complex64::new(0.0, -1.0)).norm() < 1e-4);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = DecimationOptions { tol: 1e-12, max_iter: 3 };
        let err = surface_gf(&chain(-1.0), LeadSide::Left, 0.0, 1e-6, &opts).unwrap_err();
        assert!(matches!(err, NegfError::DecimationNotConverged { iterations: 3, .. }));
    }
}
