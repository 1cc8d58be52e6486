//! Vectors, rays and the ring torus.
//!
//! The canonical torus is centred at the origin with the y axis as its axis
//! of revolution, so the tube's spine circle lies in the x-z plane:
//!
//! ```text
//! f(x, y, z) = (sqrt(x^2 + z^2) - R)^2 + y^2 - r^2
//! g(x, y, z) = (|x|^2 + R^2 - r^2)^2 - 4 R^2 (x^2 + z^2)
//! ```
//!
//! Both vanish on the same surface; `f` is negative inside the tube.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use crate::projective::Transform4;

/// Tolerance for unit length and orthogonality of frame vectors.
pub const FRAME_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum GeomError {
    #[error("torus radii must satisfy 0 < r < R (got R = {major}, r = {minor})")]
    InvalidRadii { major: f64, minor: f64 },
    #[error("frame vector is not unit length")]
    NonUnitAxis,
    #[error("torus axis and reference direction are not orthogonal")]
    NonOrthogonalFrame,
    #[error("direction vector is zero or not finite")]
    BadDirection,
    #[error("vector has non-finite components")]
    NonFinite,
    #[error("implicit gradient vanishes (point on the spine axis)")]
    DegenerateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction, or `None` for zero / non-finite input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, k: f64) -> Vec3 {
        Vec3::new(self.x / k, self.y / k, self.z / k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Parametric line `anchor + dir * t` with a unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray3 {
    pub anchor: Vec3,
    pub dir: Vec3,
}

impl Ray3 {
    /// Builds a ray, normalizing `dir`.
    pub fn new(anchor: Vec3, dir: Vec3) -> Result<Self, GeomError> {
        if !anchor.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let dir = dir.normalized().ok_or(GeomError::BadDirection)?;
        Ok(Ray3 { anchor, dir })
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.anchor + self.dir * t
    }
}

/// A line lying in the plane `z = z_c` with `z_c >= 0`, in the frame of the
/// canonical torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarRay {
    pub anchor_x: f64,
    pub anchor_y: f64,
    pub dir_x: f64,
    pub dir_y: f64,
    pub z_c: f64,
}

impl PlanarRay {
    /// Builds a planar ray, normalizing the in-plane direction.
    pub fn new(anchor_x: f64, anchor_y: f64, dir_x: f64, dir_y: f64, z_c: f64) -> Result<Self, GeomError> {
        let n = dir_x.hypot(dir_y);
        if !(n > 0.0 && n.is_finite()) {
            return Err(GeomError::BadDirection);
        }
        if !(anchor_x.is_finite() && anchor_y.is_finite() && z_c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(PlanarRay {
            anchor_x,
            anchor_y,
            dir_x: dir_x / n,
            dir_y: dir_y / n,
            z_c: z_c.abs(),
        })
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.anchor_x + self.dir_x * t, self.anchor_y + self.dir_y * t)
    }

    pub fn anchor3(&self) -> Vec3 {
        Vec3::new(self.anchor_x, self.anchor_y, self.z_c)
    }

    pub fn dir3(&self) -> Vec3 {
        Vec3::new(self.dir_x, self.dir_y, 0.0)
    }

    pub fn to_ray3(&self) -> Ray3 {
        Ray3 {
            anchor: self.anchor3(),
            dir: self.dir3(),
        }
    }
}

/// Ring torus in canonical position: centre at the origin, y axis of
/// revolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalTorus {
    pub major: f64,
    pub minor: f64,
}

impl CanonicalTorus {
    pub fn new(major: f64, minor: f64) -> Result<Self, GeomError> {
        if !(major.is_finite() && minor.is_finite() && minor > 0.0 && minor < major) {
            return Err(GeomError::InvalidRadii { major, minor });
        }
        Ok(CanonicalTorus { major, minor })
    }

    /// `R^2 - r^2`, always positive for a ring torus.
    pub fn xi(&self) -> f64 {
        self.major * self.major - self.minor * self.minor
    }

    /// Radius of the sphere that just encloses the torus.
    pub fn outer_radius(&self) -> f64 {
        self.major + self.minor
    }

    /// Implicit value: negative inside the tube, zero on the surface.
    pub fn implicit(&self, p: Vec3) -> f64 {
        let rho = p.x.hypot(p.z);
        let d = rho - self.major;
        d * d + p.y * p.y - self.minor * self.minor
    }

    /// Quartic (radical-free) form of the implicit equation.
    pub fn quartic_residual(&self, p: Vec3) -> f64 {
        let s = p.norm_sq() + self.xi();
        s * s - 4.0 * self.major * self.major * (p.x * p.x + p.z * p.z)
    }

    /// Point with azimuth `phi` around the axis and tube angle `theta`.
    pub fn point(&self, phi: f64, theta: f64) -> Vec3 {
        let (sp, cp) = phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let w = self.major + self.minor * ct;
        Vec3::new(w * cp, self.minor * st, w * sp)
    }

    /// Outward unit normal at a surface point.
    pub fn normal(&self, p: Vec3) -> Result<Vec3, GeomError> {
        let rho = p.x.hypot(p.z);
        if rho == 0.0 {
            return Err(GeomError::DegenerateGradient);
        }
        let k = 2.0 * (rho - self.major) / rho;
        let grad = Vec3::new(k * p.x, 2.0 * p.y, k * p.z);
        if grad.norm() < 1e-12 {
            return Err(GeomError::DegenerateGradient);
        }
        Ok(grad / grad.norm())
    }
}

/// Ring torus in general position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    pub shape: CanonicalTorus,
    pub center: Vec3,
    /// Axis of revolution (the canonical y axis).
    pub axis_n: Vec3,
    /// In-plane reference direction (the canonical x axis).
    pub axis_u: Vec3,
}

impl Torus {
    pub fn new(
        major: f64,
        minor: f64,
        center: Vec3,
        axis_n: Vec3,
        axis_u: Vec3,
    ) -> Result<Self, GeomError> {
        let shape = CanonicalTorus::new(major, minor)?;
        if !center.is_finite() {
            return Err(GeomError::NonFinite);
        }
        check_frame(axis_n, axis_u)?;
        Ok(Torus {
            shape,
            center,
            axis_n,
            axis_u,
        })
    }

    /// Torus with the given axis; the reference direction is any unit
    /// vector orthogonal to it.
    pub fn with_axis(major: f64, minor: f64, center: Vec3, axis: Vec3) -> Result<Self, GeomError> {
        let n = axis.normalized().ok_or(GeomError::BadDirection)?;
        let helper = if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Z };
        let u = (helper - n * n.dot(helper))
            .normalized()
            .ok_or(GeomError::BadDirection)?;
        Torus::new(major, minor, center, n, u)
    }

    pub fn canonical(major: f64, minor: f64) -> Result<Self, GeomError> {
        Torus::new(major, minor, Vec3::ZERO, Vec3::Y, Vec3::X)
    }

    pub fn major(&self) -> f64 {
        self.shape.major
    }

    pub fn minor(&self) -> f64 {
        self.shape.minor
    }

    /// Rigid map from world space into the canonical frame: the centre goes
    /// to the origin, `axis_u` to x and `axis_n` to y.
    pub fn canonical_transform(&self) -> Result<Transform4, GeomError> {
        check_frame(self.axis_n, self.axis_u)?;
        let w = self.axis_u.cross(self.axis_n);
        Ok(Transform4::from_rotation_rows(
            [self.axis_u, self.axis_n, w],
            -self.center,
        ))
    }

    /// World-space ray expressed in the canonical frame. Ray parameters are
    /// preserved because the map is rigid.
    pub fn ray_to_canonical(&self, ray: &Ray3) -> Result<Ray3, GeomError> {
        let q = self.canonical_transform()?;
        Ok(Ray3 {
            anchor: q.transform_point(ray.anchor),
            dir: q.transform_vector(ray.dir),
        })
    }

    /// Canonical-frame direction rotated back to world space.
    pub fn vector_to_world(&self, v: Vec3) -> Vec3 {
        let w = self.axis_u.cross(self.axis_n);
        self.axis_u * v.x + self.axis_n * v.y + w * v.z
    }

    pub fn point_to_world(&self, p: Vec3) -> Vec3 {
        self.vector_to_world(p) + self.center
    }

    /// Implicit value of a world-space point.
    pub fn implicit_world(&self, p: Vec3) -> f64 {
        let d = p - self.center;
        let w = self.axis_u.cross(self.axis_n);
        self.shape
            .implicit(Vec3::new(d.dot(self.axis_u), d.dot(self.axis_n), d.dot(w)))
    }
}

fn check_frame(n: Vec3, u: Vec3) -> Result<(), GeomError> {
    if !(n.is_finite() && u.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    if (n.norm() - 1.0).abs() > FRAME_TOL || (u.norm() - 1.0).abs() > FRAME_TOL {
        return Err(GeomError::NonUnitAxis);
    }
    if n.dot(u).abs() > FRAME_TOL {
        return Err(GeomError::NonOrthogonalFrame);
    }
    Ok(())
}

/// Rescales a canonical scene so that `R = 1`. Returns the unit torus, the
/// scaled ray and the factor that maps scaled ray parameters back.
pub fn normalize_scale(torus: &CanonicalTorus, ray: &Ray3) -> (CanonicalTorus, Ray3, f64) {
    let k = torus.major;
    let unit = CanonicalTorus {
        major: 1.0,
        minor: torus.minor / k,
    };
    let dir = ray.dir.normalized().unwrap_or(ray.dir);
    (
        unit,
        Ray3 {
            anchor: ray.anchor / k,
            dir,
        },
        k,
    )
}

/// Result of rotating a canonical-frame ray about the y axis into a plane
/// `z = z_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarForm {
    pub ray: PlanarRay,
    /// Angle of the y rotation `[[c, 0, -s], [0, 1, 0], [s, 0, c]]` applied.
    pub phi_rot: f64,
    /// Whether `z -> -z` was applied after the rotation.
    pub mirrored: bool,
}

/// Rotates a canonical-frame ray about the torus axis so that its direction
/// has no z component, then mirrors so that the plane offset is
/// non-negative. The torus is invariant under both maps, so the implicit
/// value along the ray, and hence every intersection parameter, is unchanged.
///
/// A direction parallel to the axis is already planar for every rotation;
/// the rotation is then chosen to zero the anchor's z component instead.
pub fn canonicalize_ray(ray: &Ray3) -> PlanarForm {
    let s = ray.dir;
    let a = ray.anchor;
    let h = s.x.hypot(s.z);
    let phi = if h > FRAME_TOL {
        (-s.z).atan2(s.x)
    } else if a.x != 0.0 || a.z != 0.0 {
        (-a.z).atan2(a.x)
    } else {
        0.0
    };
    let (sn, cs) = phi.sin_cos();
    let ax = cs * a.x - sn * a.z;
    let az = sn * a.x + cs * a.z;
    let dir_x = if h > FRAME_TOL { h } else { cs * s.x - sn * s.z };
    let mirrored = az < 0.0;
    PlanarForm {
        ray: PlanarRay {
            anchor_x: ax,
            anchor_y: a.y,
            dir_x,
            dir_y: s.y,
            z_c: az.abs(),
        },
        phi_rot: phi,
        mirrored,
    }
}
