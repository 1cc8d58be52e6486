//! Line/ray-torus intersection through the quartic in the ray parameter.
//!
//! For a canonical torus and a line `x(t) = x_A + s t`, substituting into
//! `(|x|^2 + R^2 - r^2)^2 = 4 R^2 (x^2 + z^2)` gives, with
//! `alpha = s.s`, `beta = s.x_A`, `gamma = x_A.x_A` and
//! `delta = gamma + R^2 - r^2`:
//!
//! ```text
//! a = alpha^2
//! b = 4 alpha beta
//! c = 2 alpha delta + 4 beta^2 - 4 R^2 (s_x^2 + s_z^2)
//! d = 4 beta delta - 8 R^2 (x_A s_x + z_A s_z)
//! e = delta^2 - 4 R^2 (x_A^2 + z_A^2)
//! ```

use thiserror::Error;

use crate::geom::{normalize_scale, CanonicalTorus, GeomError, Ray3, Torus, Vec3};
use crate::polysolve::{solve_quartic, PolyError, QuarticCoeffs, Root, RootSet};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum IntersectError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Per-instance abbreviations of the coefficient formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusDerived {
    /// `R^2 - r^2`
    pub xi: f64,
    /// `x_A . x_A + R^2 - r^2`
    pub delta: f64,
}

impl TorusDerived {
    pub fn new(ray: &Ray3, torus: &CanonicalTorus) -> Self {
        let xi = torus.xi();
        TorusDerived {
            xi,
            delta: ray.anchor.norm_sq() + xi,
        }
    }
}

/// Which family of slice curves a plane `z = z_c` cuts from the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneCase {
    /// `z_c < R - r`: two separate convex ovals with a hole between them.
    CaseA,
    /// `R - r <= z_c < R`: one non-convex curve.
    CaseB,
    /// `R <= z_c < R + r`: one convex curve.
    CaseC,
    /// `z_c >= R + r`: the plane misses the torus.
    NoPlaneHit,
}

pub fn classify_plane(z_c: f64, torus: &CanonicalTorus) -> PlaneCase {
    let (big, small) = (torus.major, torus.minor);
    if z_c < big - small {
        PlaneCase::CaseA
    } else if z_c < big {
        PlaneCase::CaseB
    } else if z_c < big + small {
        PlaneCase::CaseC
    } else {
        PlaneCase::NoPlaneHit
    }
}

/// One intersection of a ray with the torus surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitRecord {
    pub t: f64,
    pub point: Vec3,
    /// Outward unit normal.
    pub normal: Vec3,
    /// 2 for a grazing (tangent) contact.
    pub multiplicity: u32,
}

/// Coefficients of the quartic in `t` whose roots are the parameters where
/// the line meets the canonical torus.
pub fn assemble_quartic(ray: &Ray3, torus: &CanonicalTorus) -> QuarticCoeffs {
    let s = ray.dir;
    let x = ray.anchor;
    let alpha = s.norm_sq();
    let beta = s.dot(x);
    let der = TorusDerived::new(ray, torus);
    let delta = der.delta;
    let four_r2 = 4.0 * torus.major * torus.major;
    QuarticCoeffs {
        a: alpha * alpha,
        b: 4.0 * alpha * beta,
        c: 2.0 * alpha * delta + 4.0 * beta * beta - four_r2 * (s.x * s.x + s.z * s.z),
        d: 4.0 * beta * delta - 2.0 * four_r2 * (x.x * s.x + x.z * s.z),
        e: delta * delta - four_r2 * (x.x * x.x + x.z * x.z),
    }
}

/// All parameters (of either sign) where a canonical-frame line meets the
/// canonical torus.
///
/// The anchor is first moved to the point of the line closest to the torus
/// centre and the scene is scaled to `R = 1`, which keeps the quartic's
/// coefficients of moderate size however far away the ray starts.
pub fn line_roots(ray: &Ray3, torus: &CanonicalTorus) -> Result<RootSet, PolyError> {
    let t0 = -ray.anchor.dot(ray.dir) / ray.dir.norm_sq();
    let centred = Ray3 {
        anchor: ray.at(t0),
        dir: ray.dir,
    };
    let (unit, scaled, t_scale) = normalize_scale(torus, &centred);
    let roots = solve_quartic(&assemble_quartic(&scaled, &unit))?;
    let dir_scale = t_scale / ray.dir.norm();
    Ok(RootSet::from_roots(
        roots
            .roots()
            .iter()
            .map(|r| Root {
                value: t0 + r.value * dir_scale,
                multiplicity: r.multiplicity,
            })
            .collect(),
    ))
}

/// Every intersection of the full line (negative parameters included).
pub fn intersect_line(ray: &Ray3, torus: &Torus) -> Result<RootSet, IntersectError> {
    let canon = torus.ray_to_canonical(ray)?;
    Ok(line_roots(&canon, &torus.shape)?)
}

/// Intersections at `t >= 0`, sorted by `t`.
pub fn intersect(ray: &Ray3, torus: &Torus) -> Result<Vec<HitRecord>, IntersectError> {
    let canon = torus.ray_to_canonical(ray)?;
    let roots = line_roots(&canon, &torus.shape)?;
    roots
        .roots()
        .iter()
        .filter(|r| r.value >= 0.0)
        .map(|r| {
            let local = torus.shape.normal(canon.at(r.value))?;
            Ok(HitRecord {
                t: r.value,
                point: ray.at(r.value),
                normal: torus.vector_to_world(local),
                multiplicity: r.multiplicity,
            })
        })
        .collect()
}
