use core::f64::consts::PI;
use core::fmt;

use super::GeometryError;
use crate::math;

/// Two-arc step: flat margin, arc up, straight incline, arc down, flat margin.
///
/// Arcs are circles of radius `curvature_radius`. Atoms are placed on them
/// at a fixed angle per unit of sheet length chosen so that a bond of length
/// `a_cc` along the arc keeps its length as a chord; the sheet consumed by
/// one arc (`arc_footprint`) is therefore marginally shorter than the
/// geometric arc length `curvature_radius * theta_eff`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BendProfile {
    /// H (nm).
    pub step_height: f64,
    /// CR (nm).
    pub curvature_radius: f64,
    /// Requested bend angle (degrees).
    pub bend_angle_deg: f64,
    /// Bend angle actually used (radians).
    pub theta_eff: f64,
    /// `curvature_radius * theta_eff` (nm).
    pub arc_length: f64,
    /// Sheet length mapped onto one arc (nm).
    pub arc_footprint: f64,
    pub incline_length: f64,
    /// Flat sheet left on each side of the step inside the channel (nm).
    pub flat_margin: f64,
    pub channel_length: f64,
    pub a_cc: f64,
    /// Set when `theta_eff` differs from the requested angle.
    pub clamped: bool,
}

/// Emitted when the requested angle cannot be realised for the given H and CR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampWarning {
    pub requested_deg: f64,
    pub theta_eff_deg: f64,
    pub step_height: f64,
    pub curvature_radius: f64,
}

impl fmt::Display for ClampWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "warning: bend angle {:.3} deg infeasible for H={} nm, CR={} nm (needs H >= 2*CR*(1-cos theta)); using theta_eff={:.6} deg",
            self.requested_deg, self.step_height, self.curvature_radius, self.theta_eff_deg
        )
    }
}

/// Point on the deformed sheet: `(z, y)` in the transport plane and the
/// local tangent angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub z: f64,
    pub y: f64,
    pub angle: f64,
}

pub fn resolve_profile(
    step_height: f64,
    curvature_radius: f64,
    bend_angle_deg: f64,
    channel_length: f64,
    a_cc: f64,
) -> Result<BendProfile, GeometryError> {
    if !(step_height >= 0.0 && step_height.is_finite()) {
        return Err(GeometryError::NonPositiveParameter { name: "step_height", value: step_height });
    }
    if !(curvature_radius > 0.0 && curvature_radius.is_finite()) {
        return Err(GeometryError::NonPositiveParameter {
            name: "curvature_radius",
            value: curvature_radius,
        });
    }
    if !(bend_angle_deg > 0.0 && bend_angle_deg <= 90.0) {
        return Err(GeometryError::AngleOutOfRange { value: bend_angle_deg });
    }
    if !(channel_length > 0.0) {
        return Err(GeometryError::NonPositiveParameter {
            name: "channel_length",
            value: channel_length,
        });
    }
    if !(a_cc > 0.0) {
        return Err(GeometryError::NonPositiveParameter { name: "a_cc", value: a_cc });
    }
    let half_chord = a_cc / (2.0 * curvature_radius);
    if half_chord >= 1.0 {
        return Err(GeometryError::CurvatureTooTight { radius: curvature_radius, a_cc });
    }

    let requested = bend_angle_deg.to_radians();
    let arcs_rise = 2.0 * curvature_radius * (1.0 - math::cos(requested));
    let (theta_eff, incline_length, clamped) = if step_height < arcs_rise {
        let theta = math::acos(1.0 - step_height / (2.0 * curvature_radius));
        (theta, 0.0, true)
    } else {
        let incline = (step_height - arcs_rise) / math::sin(requested);
        (requested, incline, false)
    };

    let rate = angular_rate(curvature_radius, a_cc);
    let arc_footprint = theta_eff / rate;
    let used = 2.0 * arc_footprint + incline_length;
    if used > channel_length {
        return Err(GeometryError::ProfileTooLong { required: used, available: channel_length });
    }
    Ok(BendProfile {
        step_height,
        curvature_radius,
        bend_angle_deg,
        theta_eff,
        arc_length: curvature_radius * theta_eff,
        arc_footprint,
        incline_length,
        flat_margin: 0.5 * (channel_length - used),
        channel_length,
        a_cc,
        clamped,
    })
}

/// Radians of arc per nm of sheet such that a chord spanning `a_cc` of
/// sheet has length `a_cc`.
fn angular_rate(radius: f64, a_cc: f64) -> f64 {
    2.0 * math::asin(a_cc / (2.0 * radius)) / a_cc
}

impl BendProfile {
    pub fn theta_eff_deg(&self) -> f64 {
        self.theta_eff * 180.0 / PI
    }

    pub fn is_degenerate(&self) -> bool {
        self.theta_eff == 0.0
    }

    /// Total rise realised by the arcs and the incline.
    pub fn realized_height(&self) -> f64 {
        2.0 * self.curvature_radius * (1.0 - math::cos(self.theta_eff))
            + self.incline_length * math::sin(self.theta_eff)
    }

    /// Sheet length occupied by the step (both arcs and the incline).
    pub fn sheet_length(&self) -> f64 {
        2.0 * self.arc_footprint + self.incline_length
    }

    pub fn warning(&self) -> Option<ClampWarning> {
        self.clamped.then(|| ClampWarning {
            requested_deg: self.bend_angle_deg,
            theta_eff_deg: self.theta_eff_deg(),
            step_height: self.step_height,
            curvature_radius: self.curvature_radius,
        })
    }

    /// Sheet coordinates where the segments meet: start of arc up, start of
    /// incline, start of arc down, start of upper flat.
    pub fn joints(&self) -> [f64; 4] {
        let s0 = self.flat_margin;
        let s1 = s0 + self.arc_footprint;
        let s2 = s1 + self.incline_length;
        [s0, s1, s2, s2 + self.arc_footprint]
    }

    /// Position of sheet coordinate `s` (measured from the channel start).
    /// Outside the step the map is rigid, so it extends to the leads.
    pub fn map(&self, s: f64) -> ProfilePoint {
        let [s0, s1, s2, s3] = self.joints();
        let r = self.curvature_radius;
        let theta = self.theta_eff;
        let rate = angular_rate(r, self.a_cc);
        if s <= s0 {
            return ProfilePoint { z: s, y: 0.0, angle: 0.0 };
        }
        if s <= s1 {
            let phi = rate * (s - s0);
            return ProfilePoint { z: s0 + r * math::sin(phi), y: r * (1.0 - math::cos(phi)), angle: phi };
        }
        let (sin_t, cos_t) = (math::sin(theta), math::cos(theta));
        let p1 = (s0 + r * sin_t, r * (1.0 - cos_t));
        if s <= s2 {
            let t = s - s1;
            return ProfilePoint { z: p1.0 + t * cos_t, y: p1.1 + t * sin_t, angle: theta };
        }
        let p2 = (p1.0 + self.incline_length * cos_t, p1.1 + self.incline_length * sin_t);
        let centre = (p2.0 + r * sin_t, p2.1 - r * cos_t);
        if s <= s3 {
            let phi = theta - rate * (s - s2);
            return ProfilePoint {
                z: centre.0 - r * math::sin(phi),
                y: centre.1 + r * math::cos(phi),
                angle: phi,
            };
        }
        ProfilePoint { z: centre.0 + (s - s3), y: centre.1 + r, angle: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 0.142;

    #[test]
    fn sweep_parameters_give_closed_form_incline() {
        let p = resolve_profile(1.3, 3.1, 30.0, 20.0, A).unwrap();
        let rad = 30f64.to_radians();
        let expect = (1.3 - 2.0 * 3.1 * (1.0 - rad.cos())) / rad.sin();
        assert!((p.incline_length - expect).abs() < 1e-12);
        assert!((p.incline_length - 0.938).abs() < 1e-3);
        assert!(!p.clamped);
        assert!(p.warning().is_none());
    }

    #[test]
    fn incline_matches_integrated_rise() {
        // vertical rise accumulated along the mapped curve equals H
        let p = resolve_profile(1.3, 3.1, 30.0, 20.0, A).unwrap();
        let n = 200_000;
        let (mut y_prev, mut rise) = (p.map(0.0).y, 0.0);
        for k in 1..=n {
            let s = 20.0 * k as f64 / n as f64;
            let y = p.map(s).y;
            rise += y - y_prev;
            y_prev = y;
        }
        assert!((rise - 1.3).abs() < 1e-9);
    }

    #[test]
    fn sharp_step_parameters_are_clamped() {
        let p = resolve_profile(0.78, 0.40, 90.0, 20.0, A).unwrap();
        assert!(p.clamped);
        assert!((p.theta_eff - (0.025f64).acos()).abs() < 1e-12);
        assert_eq!(p.incline_length, 0.0);
        let w = p.warning().unwrap();
        assert!(alloc::format!("{w}").contains("theta_eff"));
        assert!((p.realized_height() - 0.78).abs() < 1e-12);
    }

    #[test]
    fn zero_height_is_degenerate() {
        let p = resolve_profile(0.0, 1.0, 10.0, 5.0, A).unwrap();
        assert!(p.is_degenerate());
        assert_eq!(p.incline_length, 0.0);
        assert_eq!(p.arc_length, 0.0);
        assert_eq!(p.flat_margin, 2.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            resolve_profile(1.0, 0.0, 30.0, 10.0, A),
            Err(GeometryError::NonPositiveParameter { name: "curvature_radius", .. })
        ));
        assert!(matches!(resolve_profile(-1.0, 1.0, 30.0, 10.0, A), Err(GeometryError::NonPositiveParameter { .. })));
        assert!(matches!(resolve_profile(1.0, 1.0, 0.0, 10.0, A), Err(GeometryError::AngleOutOfRange { .. })));
        assert!(matches!(resolve_profile(1.0, 1.0, 95.0, 10.0, A), Err(GeometryError::AngleOutOfRange { .. })));
        assert!(matches!(resolve_profile(2.3, 3.1, 30.0, 4.0, A), Err(GeometryError::ProfileTooLong { .. })));
        assert!(matches!(resolve_profile(0.1, 0.05, 30.0, 4.0, A), Err(GeometryError::CurvatureTooTight { .. })));
    }

    #[test]
    fn map_is_continuous_and_unit_speed_off_arcs() {
        let p = resolve_profile(2.3, 1.6, 60.0, 12.0, A).unwrap();
        for j in p.joints() {
            let (a, b) = (p.map(j - 1e-9), p.map(j + 1e-9));
            assert!((a.z - b.z).abs() < 1e-8 && (a.y - b.y).abs() < 1e-8);
            assert!((a.angle - b.angle).abs() < 1e-6);
        }
        let end = p.map(12.0);
        assert!((end.y - 2.3).abs() < 1e-12);
    }
}
