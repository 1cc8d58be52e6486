//! Homogeneous-coordinate geometry in the projective plane and space.
//!
//! Points and hyperplanes are both stored as plain coordinate arrays. A line
//! through two points of the plane, and the meet of two lines, are both the
//! ordinary cross product; in space the same role is played by the extended
//! (4-vector) cross product of three vectors. Implicit objects (lines,
//! planes) transform with the cofactor matrix of the point transform, which
//! equals `det(T) (T^-1)^T` and therefore needs no division.

use thiserror::Error;

use crate::geom::Vec3;

/// Relative size below which a constructed cross product counts as zero.
const DEGENERATE_REL: f64 = 1e-12;

/// Tolerance used by [`projectively_equal`] after normalization.
pub const PROJECTIVE_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error("points are projectively equal; no unique line through them")]
    CoincidentPoints,
    #[error("lines are projectively equal; no unique intersection")]
    IdenticalLines,
    #[error("points are collinear; no unique plane through them")]
    CollinearPoints,
    #[error("planes are not in general position")]
    DegeneratePlanes,
    #[error("transform matrix is singular")]
    SingularTransform,
}

/// Homogeneous point `[x, y, w]` of the projective plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint2(pub [f64; 3]);

/// Line `ax + by + cw = 0` stored as `[a, b, c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLine2(pub [f64; 3]);

/// Homogeneous point `[x, y, z, w]` of projective space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint3(pub [f64; 4]);

/// Plane `ax + by + cz + dw = 0` stored as `[a, b, c, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPlane3(pub [f64; 4]);

impl HPoint2 {
    pub fn new(x: f64, y: f64, w: f64) -> Self {
        HPoint2([x, y, w])
    }

    pub fn from_euclidean(x: f64, y: f64) -> Self {
        HPoint2([x, y, 1.0])
    }

    /// Euclidean coordinates, or `None` for a point at infinity.
    pub fn to_euclidean(&self) -> Option<(f64, f64)> {
        let [x, y, w] = self.0;
        if w == 0.0 {
            None
        } else {
            Some((x / w, y / w))
        }
    }

    pub fn is_at_infinity(&self) -> bool {
        let scale = norm(&self.0);
        self.0[2].abs() <= DEGENERATE_REL * scale
    }
}

impl HLine2 {
    /// Value of the implicit equation at `p` (zero when incident).
    pub fn eval(&self, p: &HPoint2) -> f64 {
        dot(&self.0, &p.0)
    }
}

impl HPoint3 {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        HPoint3([x, y, z, w])
    }

    pub fn from_euclidean(v: Vec3) -> Self {
        HPoint3([v.x, v.y, v.z, 1.0])
    }

    pub fn to_euclidean(&self) -> Option<Vec3> {
        let [x, y, z, w] = self.0;
        if w == 0.0 {
            None
        } else {
            Some(Vec3::new(x / w, y / w, z / w))
        }
    }

    pub fn is_at_infinity(&self) -> bool {
        let scale = norm(&self.0);
        self.0[3].abs() <= DEGENERATE_REL * scale
    }
}

impl HPlane3 {
    pub fn eval(&self, p: &HPoint3) -> f64 {
        dot(&self.0, &p.0)
    }
}

pub(crate) fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

/// Ordinary cross product of two 3-vectors.
pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Extended cross product of three 4-vectors: the cofactor expansion of the
/// 4x4 determinant whose first row holds the basis vectors.
pub fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut minor = [[0.0; 3]; 3];
        for (row, src) in [a, b, c].into_iter().enumerate() {
            let mut k = 0;
            for (j, &v) in src.iter().enumerate() {
                if j != col {
                    minor[row][k] = v;
                    k += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * det3(&minor);
    }
    out
}

fn is_degenerate<const N: usize>(v: &[f64; N], scale: f64) -> bool {
    norm(v) <= DEGENERATE_REL * scale
}

/// Line through two points.
pub fn line_from_points(p1: &HPoint2, p2: &HPoint2) -> Result<HLine2, ProjectiveError> {
    let l = cross3(&p1.0, &p2.0);
    if is_degenerate(&l, norm(&p1.0) * norm(&p2.0)) {
        return Err(ProjectiveError::CoincidentPoints);
    }
    Ok(HLine2(l))
}

/// Intersection of two lines. Parallel lines meet at a point with `w = 0`.
pub fn lines_intersect(l1: &HLine2, l2: &HLine2) -> Result<HPoint2, ProjectiveError> {
    let x = cross3(&l1.0, &l2.0);
    if is_degenerate(&x, norm(&l1.0) * norm(&l2.0)) {
        return Err(ProjectiveError::IdenticalLines);
    }
    Ok(HPoint2(x))
}

/// Plane through three points.
pub fn plane_from_points(
    p1: &HPoint3,
    p2: &HPoint3,
    p3: &HPoint3,
) -> Result<HPlane3, ProjectiveError> {
    let rho = cross4(&p1.0, &p2.0, &p3.0);
    if is_degenerate(&rho, norm(&p1.0) * norm(&p2.0) * norm(&p3.0)) {
        return Err(ProjectiveError::CollinearPoints);
    }
    Ok(HPlane3(rho))
}

/// Common point of three planes; `w = 0` when they share only a direction.
pub fn planes_intersect(
    r1: &HPlane3,
    r2: &HPlane3,
    r3: &HPlane3,
) -> Result<HPoint3, ProjectiveError> {
    let x = cross4(&r1.0, &r2.0, &r3.0);
    if is_degenerate(&x, norm(&r1.0) * norm(&r2.0) * norm(&r3.0)) {
        return Err(ProjectiveError::DegeneratePlanes);
    }
    Ok(HPoint3(x))
}

/// Divide by the largest-magnitude component, so that projectively equal
/// vectors become numerically equal.
pub fn normalize_projective<const N: usize>(v: &[f64; N]) -> [f64; N] {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot == 0.0 {
        return *v;
    }
    let mut out = *v;
    for x in out.iter_mut() {
        *x /= pivot;
    }
    out
}

pub fn projectively_equal<const N: usize>(a: &[f64; N], b: &[f64; N]) -> bool {
    let na = normalize_projective(a);
    let nb = normalize_projective(b);
    na.iter()
        .zip(&nb)
        .all(|(x, y)| (x - y).abs() <= PROJECTIVE_EQ_TOL)
}

/// Projective transform of the plane, applied as `x' = M x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform3 {
    pub m: [[f64; 3]; 3],
}

impl Transform3 {
    pub fn identity() -> Self {
        Transform3 {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Transform3 {
            m: [[1.0, 0.0, dx], [0.0, 1.0, dy], [0.0, 0.0, 1.0]],
        }
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Transform3 {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn apply(&self, p: &HPoint2) -> HPoint2 {
        HPoint2(std::array::from_fn(|i| dot(&self.m[i], &p.0)))
    }

    pub fn det(&self) -> f64 {
        det3(&self.m)
    }

    /// Cofactor matrix, i.e. `det(M) (M^-1)^T`.
    pub fn cofactor(&self) -> [[f64; 3]; 3] {
        let m = &self.m;
        let mut c = [[0.0; 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let (r0, r1) = others3(i);
                let (c0, c1) = others3(j);
                let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
                *out = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        c
    }

    fn is_singular(&self) -> bool {
        let scale: f64 = self.m.iter().map(norm).product();
        self.det().abs() <= DEGENERATE_REL * scale
    }
}

fn others3(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Projective transform of space, applied to column vectors as `x' = M x`.
/// Rows are stored top to bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform4 {
    pub m: [[f64; 4]; 4],
}

impl Transform4 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Transform4 { m }
    }

    pub fn translation(v: Vec3) -> Self {
        let mut t = Self::identity();
        t.m[0][3] = v.x;
        t.m[1][3] = v.y;
        t.m[2][3] = v.z;
        t
    }

    /// Rotation about the y axis with the sign convention
    /// `[[c, 0, -s], [0, 1, 0], [s, 0, c]]`.
    pub fn rotation_y(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Transform4 {
            m: [
                [c, 0.0, -s, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [s, 0.0, c, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
        }
    }

    /// Rigid transform `x' = rot (x + shift)` from rotation rows.
    pub fn from_rotation_rows(rows: [Vec3; 3], shift: Vec3) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, r) in rows.iter().enumerate() {
            m[i] = [r.x, r.y, r.z, r.dot(shift)];
        }
        m[3][3] = 1.0;
        Transform4 { m }
    }

    pub fn then(&self, next: &Transform4) -> Transform4 {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                *out = (0..4).map(|k| next.m[i][k] * self.m[k][j]).sum();
            }
        }
        Transform4 { m }
    }

    pub fn apply(&self, p: &HPoint3) -> HPoint3 {
        HPoint3(std::array::from_fn(|i| dot(&self.m[i], &p.0)))
    }

    /// Maps a Euclidean point (w = 1) and dehomogenizes.
    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        let h = self.apply(&HPoint3::from_euclidean(p)).0;
        Vec3::new(h[0] / h[3], h[1] / h[3], h[2] / h[3])
    }

    /// Maps a direction (w = 0); translation has no effect.
    pub fn transform_vector(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    /// Upper-left 3x3 block.
    pub fn linear_block(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.m[i][j]))
    }

    fn minor(&self, i: usize, j: usize) -> f64 {
        let mut sub = [[0.0; 3]; 3];
        let mut r = 0;
        for (ri, row) in self.m.iter().enumerate() {
            if ri == i {
                continue;
            }
            let mut c = 0;
            for (ci, &v) in row.iter().enumerate() {
                if ci == j {
                    continue;
                }
                sub[r][c] = v;
                c += 1;
            }
            r += 1;
        }
        det3(&sub)
    }

    /// Cofactor matrix, i.e. `det(M) (M^-1)^T`.
    pub fn cofactor(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let minor = self.minor(i, j);
                if (i + j) % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            })
        })
    }

    pub fn det(&self) -> f64 {
        let c = self.cofactor();
        (0..4).map(|j| self.m[0][j] * c[0][j]).sum()
    }

    fn is_singular(&self) -> bool {
        let scale: f64 = self.m.iter().map(norm).product();
        self.det().abs() <= DEGENERATE_REL * scale
    }

    pub fn inverse(&self) -> Result<Transform4, ProjectiveError> {
        if self.is_singular() {
            return Err(ProjectiveError::SingularTransform);
        }
        let det = self.det();
        let c = self.cofactor();
        // inverse = adj / det = cofactor^T / det
        Ok(Transform4 {
            m: std::array::from_fn(|i| std::array::from_fn(|j| c[j][i] / det)),
        })
    }
}

/// Objects given by implicit linear equations (lines, planes), which map
/// under a point transform `T` by `(T^-1)^T` up to a nonzero scale.
pub trait Implicit: Sized {
    type Transform;

    fn transformed(&self, t: &Self::Transform) -> Result<Self, ProjectiveError>;
}

impl Implicit for HLine2 {
    type Transform = Transform3;

    fn transformed(&self, t: &Transform3) -> Result<Self, ProjectiveError> {
        if t.is_singular() {
            return Err(ProjectiveError::SingularTransform);
        }
        let q = t.cofactor();
        Ok(HLine2(std::array::from_fn(|i| dot(&q[i], &self.0))))
    }
}

impl Implicit for HPlane3 {
    type Transform = Transform4;

    fn transformed(&self, t: &Transform4) -> Result<Self, ProjectiveError> {
        if t.is_singular() {
            return Err(ProjectiveError::SingularTransform);
        }
        let q = t.cofactor();
        Ok(HPlane3(std::array::from_fn(|i| dot(&q[i], &self.0))))
    }
}

/// Transform an implicit object so that it stays incident with the images
/// of its points.
pub fn transform_implicit<O: Implicit>(obj: &O, t: &O::Transform) -> Result<O, ProjectiveError> {
    obj.transformed(t)
}
