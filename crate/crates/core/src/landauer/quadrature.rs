//! Adaptive trapezoid rule with level-synchronous bisection, so that every
//! refinement level is one batch for the executor.

use alloc::vec::Vec;

use super::LandauerError;
use crate::exec::Executor;
use crate::negf::NegfError;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureOptions {
    /// Relative tolerance between successive estimates.
    pub rel_tol: f64,
    /// Absolute floor on the tolerance, in integrand units times eV.
    pub abs_tol: f64,
    pub initial_intervals: usize,
    /// Bisections allowed below the initial grid.
    pub max_depth: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: 1e-4, abs_tol: 1e-12, initial_intervals: 16, max_depth: 24 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureInfo {
    pub evaluations: usize,
    /// Deepest refinement level reached.
    pub depth: usize,
    /// Smallest interval width used (eV); zero for an empty window.
    pub min_step: f64,
}

impl QuadratureInfo {
    pub const EMPTY: QuadratureInfo = QuadratureInfo { evaluations: 0, depth: 0, min_step: 0.0 };
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
}

impl Interval {
    fn trapezoid(&self) -> f64 {
        0.5 * (self.b - self.a) * (self.fa + self.fb)
    }
}

/// Integrate `f` over `[a, b]` (`a < b`).
pub fn integrate<E, F>(
    a: f64,
    b: f64,
    f: F,
    opts: &QuadratureOptions,
    exec: &E,
) -> Result<(f64, QuadratureInfo), LandauerError>
where
    E: Executor,
    F: Fn(f64) -> Result<f64, NegfError> + Sync + Send,
{
    let eval = |xs: &[f64]| -> Result<Vec<f64>, LandauerError> {
        exec.map(xs, &f).into_iter().map(|r| r.map_err(LandauerError::from)).collect()
    };
    let n0 = opts.initial_intervals.max(1);
    let width = b - a;
    let step = width / n0 as f64;
    let nodes: Vec<f64> =
        (0..=n0).map(|i| if i == n0 { b } else { a + step * i as f64 }).collect();
    let values = eval(&nodes)?;
    let mut active: Vec<Interval> = (0..n0)
        .map(|i| Interval { a: nodes[i], b: nodes[i + 1], fa: values[i], fb: values[i + 1] })
        .collect();
    let mut info = QuadratureInfo { evaluations: nodes.len(), depth: 0, min_step: step };

    let mut accepted = 0.0;
    let mut previous = active.iter().map(Interval::trapezoid).sum::<f64>();
    loop {
        let mids: Vec<f64> = active.iter().map(|iv| 0.5 * (iv.a + iv.b)).collect();
        let fm = eval(&mids)?;
        info.evaluations += mids.len();
        info.depth += 1;

        let halves: Vec<(Interval, Interval)> = active
            .iter()
            .zip(mids.iter().zip(&fm))
            .map(|(iv, (&m, &v))| {
                (Interval { a: iv.a, b: m, fa: iv.fa, fb: v }, Interval { a: m, b: iv.b, fa: v, fb: iv.fb })
            })
            .collect();
        let estimate = accepted
            + halves.iter().map(|(l, r)| l.trapezoid() + r.trapezoid()).sum::<f64>();
        let budget = (opts.rel_tol * estimate.abs()).max(opts.abs_tol);

        let mut next = Vec::new();
        for (iv, (l, r)) in active.iter().zip(&halves) {
            let fine = l.trapezoid() + r.trapezoid();
            // the floor lets an interval straddling a discontinuity settle
            let allowed = budget * ((iv.b - iv.a) / width).max(1.0 / 32.0);
            if (fine - iv.trapezoid()).abs() <= allowed {
                accepted += fine;
            } else {
                next.push(*l);
                next.push(*r);
            }
        }
        if next.is_empty() {
            return Ok((estimate, info));
        }
        if info.depth >= opts.max_depth {
            return Err(LandauerError::NonConvergent { a, b, last: estimate, previous });
        }
        for iv in &next {
            info.min_step = info.min_step.min(iv.b - iv.a);
        }
        previous = estimate;
        active = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    #[test]
    fn polynomial_and_step() {
        let opts = QuadratureOptions { rel_tol: 1e-8, ..Default::default() };
        let (v, _) = integrate(0.0, 1.0, |x| Ok(x * x), &opts, &Sequential).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-7);
        let opts = QuadratureOptions { rel_tol: 1e-6, ..Default::default() };
        let (v, info) =
            integrate(-1.0, 1.0, |x| Ok(if x > 0.123 { 2.0 } else { 0.0 }), &opts, &Sequential)
                .unwrap();
        assert!((v - 2.0 * 0.877).abs() < 1e-5, "{v}");
        assert!(info.depth > 5);
    }

    #[test]
    fn zero_integrand_stops_after_one_level() {
        let (v, info) =
            integrate(0.0, 1.0, |_| Ok(0.0), &QuadratureOptions::default(), &Sequential).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(info.depth, 1);
    }

    #[test]
    fn depth_limit() {
        let opts = QuadratureOptions { rel_tol: 1e-14, abs_tol: 0.0, max_depth: 3, ..Default::default() };
        let err = integrate(0.0, 1.0, |x| Ok(libm::sqrt(x)), &opts, &Sequential).unwrap_err();
        assert!(matches!(err, LandauerError::NonConvergent { .. }));
    }
}
