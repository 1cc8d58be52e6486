//! Cheap culling tests that prove a ray misses the torus.
//!
//! [`standard_bv`] is the classic sphere of radius `R + r` plus the slab
//! `|y| <= r`. [`bv_dispatch`] adds per-plane tests after rotating the ray
//! into a plane `z = z_c`: the hole test when the slice has two ovals, and
//! a tighter slab when the slice is a single convex curve.
//!
//! Every comparison is made with a relative margin in the direction of
//! *not* rejecting. The margin is wider than the distance at which the
//! quartic solver still reports a near-tangent line as a grazing hit
//! (a few `1e-9 (R + r)`), so a culled ray is never one the exact test
//! would have hit.

use thiserror::Error;

use crate::geom::{canonicalize_ray, CanonicalTorus, GeomError, PlanarRay, Ray3, Torus};
use crate::intersect::{classify_plane, PlaneCase};

const MARGIN_REL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BVDecision {
    RejectOutside,
    RejectHole,
    RejectSlab,
    Maybe,
}

impl BVDecision {
    pub fn is_reject(self) -> bool {
        self != BVDecision::Maybe
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BoundingError {
    #[error("plane z = {z_c} is in {found:?}, expected {expected:?}")]
    WrongCase {
        z_c: f64,
        expected: PlaneCase,
        found: PlaneCase,
    },
}

/// Guard circles of the hole test in a plane `z = z_c`: `k` centred at
/// `(k_center_x, 0)` and its mirror `k'` at `(-k_center_x, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleGeometry {
    /// Half-width of the gap between the two slice ovals along the x axis.
    pub x_b: f64,
    pub k_center_x: f64,
    pub radius: f64,
}

fn margin(torus: &CanonicalTorus) -> f64 {
    MARGIN_REL * torus.outer_radius()
}

fn expect_case(z_c: f64, torus: &CanonicalTorus, expected: PlaneCase) -> Result<(), BoundingError> {
    let found = classify_plane(z_c, torus);
    if found != expected {
        return Err(BoundingError::WrongCase { z_c, expected, found });
    }
    Ok(())
}

/// Parameters where the line enters and leaves the origin-centred sphere of
/// the given radius, or `None` if it stays outside.
pub fn sphere_chord(ray: &Ray3, radius: f64) -> Option<(f64, f64)> {
    let t_mid = -ray.anchor.dot(ray.dir);
    let gap2 = ray.at(t_mid).norm_sq();
    let h2 = radius * radius - gap2;
    if h2 < 0.0 {
        return None;
    }
    let h = h2.sqrt();
    Some((t_mid - h, t_mid + h))
}

/// The `y` range the line covers inside the bounding sphere.
fn chord_y_range(ray: &Ray3, torus: &CanonicalTorus) -> Option<(f64, f64)> {
    let (t1, t2) = sphere_chord(ray, torus.outer_radius() + margin(torus))?;
    let (y1, y2) = (ray.at(t1).y, ray.at(t2).y);
    Some((y1.min(y2), y1.max(y2)))
}

fn outside_slab(y_range: (f64, f64), half_height: f64) -> bool {
    let (y_min, y_max) = y_range;
    (y_min > half_height && y_max > half_height) || (y_min < -half_height && y_max < -half_height)
}

/// Bounding sphere of radius `R + r` followed by the slab `|y| <= r`.
pub fn standard_bv(ray: &Ray3, torus: &CanonicalTorus) -> BVDecision {
    let Some(y_range) = chord_y_range(ray, torus) else {
        return BVDecision::RejectOutside;
    };
    if outside_slab(y_range, torus.minor + margin(torus)) {
        return BVDecision::RejectSlab;
    }
    BVDecision::Maybe
}

pub fn hole_geometry(z_c: f64, torus: &CanonicalTorus) -> Result<HoleGeometry, BoundingError> {
    expect_case(z_c, torus, PlaneCase::CaseA)?;
    let inner = torus.major - torus.minor;
    let x_b = (inner * inner - z_c * z_c).max(0.0).sqrt();
    Ok(HoleGeometry {
        x_b,
        k_center_x: x_b + torus.minor,
        radius: torus.minor,
    })
}

/// Rejects a planar line that crosses the x axis strictly between the two
/// slice ovals and clears both guard circles.
///
/// Each guard circle touches its oval at the oval's innermost point and
/// stays left of (respectively right of) the oval's inner boundary across
/// the whole band `|y| <= r`, so such a line passes between the ovals.
pub fn hole_bv(pr: &PlanarRay, torus: &CanonicalTorus) -> Result<BVDecision, BoundingError> {
    let hole = hole_geometry(pr.z_c, torus)?;
    if pr.dir_y == 0.0 {
        return Ok(BVDecision::Maybe);
    }
    let m = margin(torus);
    let x0 = pr.anchor_x - pr.dir_x * pr.anchor_y / pr.dir_y;
    if !(x0.abs() < hole.x_b - m) {
        return Ok(BVDecision::Maybe);
    }
    // distance from (cx, 0) to the line through (x0, 0) with unit direction
    // (dir_x, dir_y) is |(cx - x0) dir_y|
    let clears = |cx: f64| ((cx - x0) * pr.dir_y).abs() > hole.radius + m;
    if clears(hole.k_center_x) && clears(-hole.k_center_x) {
        Ok(BVDecision::RejectHole)
    } else {
        Ok(BVDecision::Maybe)
    }
}

/// Largest `|y|` on the slice of the torus by the plane `z = z_c`.
pub fn tightened_slab(z_c: f64, torus: &CanonicalTorus) -> Result<f64, BoundingError> {
    expect_case(z_c, torus, PlaneCase::CaseC)?;
    let off = z_c - torus.major;
    Ok((torus.minor * torus.minor - off * off).max(0.0).sqrt())
}

/// Full culling pipeline for a canonical-frame ray.
///
/// Starts from [`standard_bv`], so it rejects at least everything that
/// test rejects.
pub fn bv_dispatch_canonical(ray: &Ray3, torus: &CanonicalTorus) -> BVDecision {
    let standard = standard_bv(ray, torus);
    if standard.is_reject() {
        return standard;
    }
    let m = margin(torus);
    let planar = canonicalize_ray(ray).ray;
    let z_c = planar.z_c;
    match classify_plane(z_c, torus) {
        PlaneCase::CaseA => hole_bv(&planar, torus).unwrap_or(BVDecision::Maybe),
        PlaneCase::CaseB => BVDecision::Maybe,
        PlaneCase::CaseC => {
            let Ok(d) = tightened_slab(z_c, torus) else {
                return BVDecision::Maybe;
            };
            match chord_y_range(ray, torus) {
                Some(range) if outside_slab(range, d + m) => BVDecision::RejectSlab,
                _ => BVDecision::Maybe,
            }
        }
        PlaneCase::NoPlaneHit if z_c > torus.outer_radius() + m => BVDecision::RejectOutside,
        PlaneCase::NoPlaneHit => BVDecision::Maybe,
    }
}

/// Full culling pipeline for a world-space ray.
pub fn bv_dispatch(ray: &Ray3, torus: &Torus) -> Result<BVDecision, GeomError> {
    let canon = torus.ray_to_canonical(ray)?;
    Ok(bv_dispatch_canonical(&canon, &torus.shape))
}
