//! The torus as the envelope of a sphere of radius `r` whose centre runs
//! around the spine circle of radius `R`.
//!
//! These routines give independent routes to the same intersections as the
//! quartic pipeline: per-angle line/sphere quadratics, their rotating-line
//! dual, planar slice circles, and a bracketing solver on the radial
//! profile. They serve as cross-checks and as the geometry behind the hole
//! bounding volume.

use thiserror::Error;

use crate::geom::{CanonicalTorus, PlanarRay, Ray3, Vec3};
use crate::polysolve::{solve_quadratic, RootSet};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum EnvelopeError {
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("ray direction must have zero z component")]
    NotPlanar,
    #[error("plane z = {z_c} does not meet the torus")]
    EmptyEnvelope { z_c: f64 },
}

/// Monic quadratic `t^2 + b t + c` in the ray parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiQuadratic {
    pub b: f64,
    pub c: f64,
}

impl PhiQuadratic {
    pub fn eval(&self, t: f64) -> f64 {
        (t + self.b) * t + self.c
    }

    pub fn derivative(&self, t: f64) -> f64 {
        2.0 * t + self.b
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.c
    }

    pub fn roots(&self) -> RootSet {
        solve_quadratic(1.0, self.b, self.c).unwrap_or_default()
    }
}

/// Angles of the spine positions whose spheres reach the plane `z = z_c`,
/// on the principal branch of the `x > 0` lobe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiRange {
    pub phi1: f64,
    pub phi2: f64,
    /// Angle of the largest slice circle.
    pub phi0: f64,
}

impl PhiRange {
    pub fn contains(&self, phi: f64) -> bool {
        phi >= self.phi1 && phi <= self.phi2
    }
}

/// Circle `(x - center_x)^2 + y^2 = rho^2` in a slice plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleE2 {
    pub center_x: f64,
    pub rho: f64,
}

pub fn sphere_center(phi: f64, torus: &CanonicalTorus) -> Vec3 {
    let (s, c) = phi.sin_cos();
    Vec3::new(torus.major * c, 0.0, torus.major * s)
}

fn xi(pr: &PlanarRay, phi: f64, torus: &CanonicalTorus) -> Vec3 {
    pr.anchor3() - sphere_center(phi, torus)
}

/// Line/sphere quadratic for the sphere at spine angle `phi`. Its real
/// roots are where the planar line pierces that sphere.
pub fn sphere_quadratic(pr: &PlanarRay, phi: f64, torus: &CanonicalTorus) -> PhiQuadratic {
    let x = xi(pr, phi, torus);
    PhiQuadratic {
        b: 2.0 * pr.dir3().dot(x),
        c: x.norm_sq() - torus.minor * torus.minor,
    }
}

/// Parameter of the point on the line closest to the sphere centre.
pub fn t_extreme(pr: &PlanarRay, phi: f64, torus: &CanonicalTorus) -> f64 {
    -pr.dir3().dot(xi(pr, phi, torus))
}

/// Squared distance from the sphere centre to the line, `xi^T (I - s s^T) xi`.
pub fn perpendicular_gap_sq(pr: &PlanarRay, phi: f64, torus: &CanonicalTorus) -> f64 {
    let x = xi(pr, phi, torus);
    let along = pr.dir3().dot(x);
    x.norm_sq() - along * along
}

/// Whether the line passes strictly inside the sphere at angle `phi`.
pub fn inside_gap_test(pr: &PlanarRay, phi: f64, torus: &CanonicalTorus) -> bool {
    perpendicular_gap_sq(pr, phi, torus) < torus.minor * torus.minor
}

/// The dual view: the line rotated by `phi` about the y axis against the
/// fixed sphere at `(R, 0, 0)`. Coincides with [`sphere_quadratic`] at
/// `-phi`.
pub fn rotating_line_quadratic(ray: &Ray3, phi: f64, torus: &CanonicalTorus) -> Result<PhiQuadratic, EnvelopeError> {
    if ray.dir.z != 0.0 {
        return Err(EnvelopeError::NotPlanar);
    }
    let (sn, cs) = phi.sin_cos();
    let (big, small) = (torus.major, torus.minor);
    let a = ray.anchor;
    let s = ray.dir;
    Ok(PhiQuadratic {
        b: 2.0 * (s.dot(a) - big * s.x * cs),
        c: a.norm_sq() - 2.0 * big * (a.x * cs - a.z * sn) + big * big - small * small,
    })
}

/// Slice of the sphere at angle `phi` by the plane `z = z_c`.
pub fn planar_circle(phi: f64, z_c: f64, torus: &CanonicalTorus) -> Option<CircleE2> {
    let (sn, cs) = phi.sin_cos();
    let off = torus.major * sn - z_c;
    let rho2 = torus.minor * torus.minor - off * off;
    if rho2 < 0.0 {
        return None;
    }
    Some(CircleE2 {
        center_x: torus.major * cs,
        rho: rho2.sqrt(),
    })
}

/// Planar line against a slice circle: `t^2 + b t + c` with the in-plane
/// offset from the circle centre.
pub fn circle_quadratic(pr: &PlanarRay, circle: &CircleE2) -> PhiQuadratic {
    let dx = pr.anchor_x - circle.center_x;
    let dy = pr.anchor_y;
    PhiQuadratic {
        b: 2.0 * (pr.dir_x * dx + pr.dir_y * dy),
        c: dx * dx + dy * dy - circle.rho * circle.rho,
    }
}

pub fn phi_range(z_c: f64, torus: &CanonicalTorus) -> Result<PhiRange, EnvelopeError> {
    let (big, small) = (torus.major, torus.minor);
    if z_c.abs() >= big + small {
        return Err(EnvelopeError::EmptyEnvelope { z_c });
    }
    let lo = ((z_c - small) / big).clamp(-1.0, 1.0);
    let hi = ((z_c + small) / big).clamp(-1.0, 1.0);
    Ok(PhiRange {
        phi1: lo.asin(),
        phi2: hi.asin(),
        phi0: (z_c / big).clamp(-1.0, 1.0).asin(),
    })
}

/// Spine angle whose sphere touches the planar point at `t`, with the
/// signed distance of that point from the sphere's slice circle. On the
/// torus surface the distance is zero.
pub fn envelope_witness(pr: &PlanarRay, t: f64, torus: &CanonicalTorus) -> Option<(f64, f64)> {
    let (x, y) = pr.at(t);
    let x = x.abs();
    let phi = pr.z_c.atan2(x);
    let circle = planar_circle(phi, pr.z_c, torus)?;
    Some((phi, (x - circle.center_x).hypot(y) - circle.rho))
}

/// Radial profile `(sqrt(x^2 + z_c^2) - R)^2 + y^2 - r^2` along the line;
/// negative inside the tube.
pub fn profile(pr: &PlanarRay, t: f64, torus: &CanonicalTorus) -> f64 {
    let (x, y) = pr.at(t);
    let rad = x.hypot(pr.z_c) - torus.major;
    rad * rad + y * y - torus.minor * torus.minor
}

const SAMPLES_PER_RADIUS: f64 = 64.0;
const MIN_SAMPLES: usize = 64;
const CHORD_MARGIN: f64 = 1.01;
const GOLDEN_ITERATIONS: usize = 100;

/// Roots of the radial profile along a planar line, located to within `tol`.
///
/// The chord through the bounding sphere is scanned at 64 samples per tube
/// radius. Sign changes are bisected. A positive local minimum of the
/// samples marks a possible dip below zero between them; it is refined by
/// golden-section search and, if it goes negative, contributes the two
/// roots on either side. Tangent contacts (minimum exactly zero) are not
/// reported.
pub fn iterative_intersect(pr: &PlanarRay, torus: &CanonicalTorus, tol: f64) -> Result<Vec<f64>, EnvelopeError> {
    if !(tol > 0.0) {
        return Err(EnvelopeError::BadTolerance);
    }
    let f = |t: f64| profile(pr, t, torus);

    let anchor = pr.anchor3();
    let dir = pr.dir3();
    let t_mid = -anchor.dot(dir);
    let gap2 = (anchor + dir * t_mid).norm_sq();
    let bound = torus.outer_radius() * CHORD_MARGIN;
    if gap2 >= bound * bound {
        return Ok(Vec::new());
    }
    let half = (bound * bound - gap2).sqrt();
    let (lo, hi) = (t_mid - half, t_mid + half);
    let n = ((hi - lo) / torus.minor * SAMPLES_PER_RADIUS).ceil() as usize;
    let n = n.max(MIN_SAMPLES);
    let step = (hi - lo) / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();

    let mut roots = Vec::new();
    for i in 0..n {
        let (f0, f1) = (fs[i], fs[i + 1]);
        if f0 == 0.0 {
            roots.push(ts[i]);
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(&f, ts[i], ts[i + 1], tol));
        }
    }
    if fs[n] == 0.0 {
        roots.push(ts[n]);
    }
    for i in 1..n {
        if fs[i] > 0.0 && fs[i] < fs[i - 1] && fs[i] <= fs[i + 1] {
            let (tm, fm) = golden_min(&f, ts[i - 1], ts[i + 1]);
            if fm < 0.0 {
                roots.push(bisect(&f, ts[i - 1], tm, tol));
                roots.push(bisect(&f, tm, ts[i + 1], tol));
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_negative = f(lo) < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc < 0.0 {
            return (c, fc);
        }
        if fd < 0.0 {
            return (d, fd);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
