//! Reference fields used throughout the documentation, tests and CLI.

use crate::field::{xyz, PolyField3};
use hopf3_algebra::{Mono, Scalar, Series, Trunc};

fn poly(terms: &[([u32; 3], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(
        &xyz(),
        terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))),
        Trunc::Exact,
    )
}

fn rotation_plus(px: &[([u32; 3], i64, i64)], py: &[([u32; 3], i64, i64)], pz: &[([u32; 3], i64, i64)]) -> PolyField3 {
    let mut x = vec![([0, 1, 0], -1, 1)];
    x.extend_from_slice(px);
    let mut y = vec![([1, 0, 0], 1, 1)];
    y.extend_from_slice(py);
    PolyField3::new([poly(&x), poly(&y), poly(pz)]).expect("fixture vanishes at the origin")
}

/// The cone field `(−y + xR)∂x + (x + yR)∂y + (z³ − z(x² + y²))∂z` with
/// `R = x² + y² − z²`: the two half-cones `z = ±√(x² + y²)` are foliated by
/// cycles.
pub fn cone() -> PolyField3 {
    let r = [([3, 0, 0], 1, 1), ([1, 2, 0], 1, 1), ([1, 0, 2], -1, 1)];
    let s = [([2, 1, 0], 1, 1), ([0, 3, 0], 1, 1), ([0, 1, 2], -1, 1)];
    rotation_plus(&r, &s, &[([0, 0, 3], 1, 1), ([2, 0, 1], -1, 1), ([0, 2, 1], -1, 1)])
}

/// The plane field `−y∂x + x∂y + z²∂z`: every circle in `{z = 0}` is a cycle.
pub fn plane() -> PolyField3 {
    rotation_plus(&[], &[], &[([0, 0, 2], 1, 1)])
}

/// The field `−y∂x + x∂y + (z² + x² + y²)∂z` without local cycles.
pub fn no_cycles() -> PolyField3 {
    rotation_plus(&[], &[], &[([0, 0, 2], 1, 1), ([2, 0, 0], 1, 1), ([0, 2, 0], 1, 1)])
}

/// The field `(x² + y²)(x∂x + y∂y) − y∂x + x∂y + z²∂z`: its reduced planar
/// singularity at the origin of the first blow-up is nilpotent and needs
/// further blow-ups.
pub fn nilpotent() -> PolyField3 {
    rotation_plus(&[([3, 0, 0], 1, 1), ([1, 2, 0], 1, 1)], &[([2, 1, 0], 1, 1), ([0, 3, 0], 1, 1)], &[([0, 0, 2], 1, 1)])
}

/// The non-symmetric field `(−y + x³)∂x + x∂y + z²∂z`.
pub fn cubic_focus() -> PolyField3 {
    rotation_plus(&[([3, 0, 0], 1, 1)], &[], &[([0, 0, 2], 1, 1)])
}

/// The field `−y∂x + x∂y + (x² + y² − z²)(x∂x + y∂y + z∂z) + z⁴∂z`: the divisor
/// of the first blow-up is dicritical with `A_ρ(z, 0) = 1 − z²`, `A_z(z, 0) = z⁴`.
pub fn dicritical() -> PolyField3 {
    let r = [([3, 0, 0], 1, 1), ([1, 2, 0], 1, 1), ([1, 0, 2], -1, 1)];
    let s = [([2, 1, 0], 1, 1), ([0, 3, 0], 1, 1), ([0, 1, 2], -1, 1)];
    rotation_plus(&r, &s, &[([2, 0, 1], 1, 1), ([0, 2, 1], 1, 1), ([0, 0, 3], -1, 1), ([0, 0, 4], 1, 1)])
}

/// The non-symmetric field `−y∂x + x∂y + (z² + xz²)∂z`: the plane `{z = 0}` still
/// consists of cycles, but only a truncated normal form is available.
pub fn perturbed_plane() -> PolyField3 {
    rotation_plus(&[], &[], &[([0, 0, 2], 1, 1), ([1, 0, 2], 1, 1)])
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 7] = ["cone", "plane", "no-cycles", "nilpotent", "cubic-focus", "dicritical", "perturbed-plane"];

/// All named fixtures.
pub fn by_name(name: &str) -> Option<PolyField3> {
    match name {
        "cone" => Some(cone()),
        "plane" => Some(plane()),
        "no-cycles" => Some(no_cycles()),
        "nilpotent" => Some(nilpotent()),
        "cubic-focus" => Some(cubic_focus()),
        "dicritical" => Some(dicritical()),
        "perturbed-plane" => Some(perturbed_plane()),
        _ => None,
    }
}
