use alloc::vec::Vec;

use super::{BendProfile, DeviceGeometry, GeometryError, Region};
use crate::math;

/// Bend the channel of a flat ribbon over the step described by `profile`.
///
/// The transport coordinate of each atom is read as sheet length and mapped
/// onto the profile curve in the `(z, y)` plane; `x` is untouched and normals
/// turn with the local tangent. Left-lead atoms keep their exact positions.
/// The right lead follows the upper flat rigidly, so it is the flat right lead
/// translated by one common vector.
pub fn apply_step_deformation(
    flat: &DeviceGeometry,
    profile: &BendProfile,
) -> Result<DeviceGeometry, GeometryError> {
    if !flat.is_flat() {
        return Err(GeometryError::NotFlat);
    }
    let spec = flat.spec;
    let channel = spec.channel_length();
    let scale = channel.max(1.0);
    if (profile.channel_length - channel).abs() > 1e-12 * scale
        || (profile.a_cc - spec.a_cc).abs() > 1e-15
    {
        return Err(GeometryError::ProfileMismatch {
            profile_nm: profile.channel_length,
            profile_a_cc: profile.a_cc,
            channel_nm: channel,
            a_cc: spec.a_cc,
        });
    }
    let start = spec.channel_start();
    let step_begins = profile.flat_margin;

    let sites: Vec<_> = flat
        .sites
        .iter()
        .map(|site| {
            let s = site.position[2] - start;
            if site.region == Region::LeftLead || s <= step_begins || profile.is_degenerate() {
                return site.clone();
            }
            let p = profile.map(s);
            let mut out = site.clone();
            out.position = [site.position[0], site.position[1] + p.y, start + p.z];
            out.normal = [0.0, math::cos(p.angle), -math::sin(p.angle)];
            out
        })
        .collect();
    Ok(DeviceGeometry::new(spec, Some(*profile), sites))
}
