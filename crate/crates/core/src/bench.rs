//! Culling-efficiency sweep over the ratio `nu = R / r`.
//!
//! For each `nu` the torus is `R = nu`, `r = 1` in canonical position and
//! two ray bundles are fired at it:
//!
//! * `hole`: anchors uniform on a disc of radius `0.9 (R - r)` in the plane
//!   `y = -2r`, directions uniform in the cone of half-angle 20 degrees
//!   about `+y`.
//! * `uniform`: isotropic lines through the bounding sphere. The direction
//!   is uniform on the sphere and the line's offset from the centre is
//!   uniform on the disc of radius `R + r` perpendicular to it.
//!
//! Each ray is classified by the standard and the dispatching bounding
//! volumes and, independently, by the exact solver; a rejection of a line
//! that actually meets the torus is a false reject.
//!
//! Ray `i` of case `c` draws from its own ChaCha8 stream position, so the
//! result depends only on the seed, not on evaluation order.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounding::{bv_dispatch_canonical, standard_bv};
use crate::geom::{CanonicalTorus, GeomError, Ray3, Vec3};
use crate::intersect::line_roots;
use crate::polysolve::PolyError;

pub const CSV_HEADER: &str = "nu,bundle,std_reject_rate,hole_reject_rate,false_reject_count";

/// Every ray consumes exactly four `f64` draws (two 32-bit words each).
const WORDS_PER_RAY: u128 = 8;
const CONE_HALF_ANGLE_DEG: f64 = 20.0;
const HOLE_DISC_FRACTION: f64 = 0.9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BenchError {
    #[error("nu must be finite and greater than 1, got {0}")]
    BadNu(f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bundle {
    Hole,
    Uniform,
}

impl Bundle {
    pub const ALL: [Bundle; 2] = [Bundle::Hole, Bundle::Uniform];
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bundle::Hole => "hole",
            Bundle::Uniform => "uniform",
        })
    }
}

/// A line that meets the torus but was culled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalseReject {
    pub nu: f64,
    pub bundle: Bundle,
    pub index: u64,
    pub ray: Ray3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub nu: f64,
    pub bundle: Bundle,
    pub rays: u64,
    pub std_rejects: u64,
    pub hole_rejects: u64,
    pub false_rejects: Vec<FalseReject>,
}

impl SweepRow {
    pub fn std_reject_rate(&self) -> f64 {
        self.std_rejects as f64 / self.rays.max(1) as f64
    }

    pub fn hole_reject_rate(&self) -> f64 {
        self.hole_rejects as f64 / self.rays.max(1) as f64
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{}",
            self.nu,
            self.bundle,
            self.std_reject_rate(),
            self.hole_reject_rate(),
            self.false_rejects.len()
        )
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// Generator for ray `index` of stream `stream`.
pub fn ray_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(index as u128 * WORDS_PER_RAY);
    rng
}

fn orthonormal_pair(n: Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let u = n.cross(helper).normalized().expect("helper is not parallel");
    (u, n.cross(u))
}

fn draw4(rng: &mut ChaCha8Rng) -> [f64; 4] {
    [rng.gen(), rng.gen(), rng.gen(), rng.gen()]
}

pub fn hole_bundle_ray(rng: &mut ChaCha8Rng, torus: &CanonicalTorus) -> Ray3 {
    let [u1, u2, u3, u4] = draw4(rng);
    let disc = HOLE_DISC_FRACTION * (torus.major - torus.minor);
    let rho = disc * u1.sqrt();
    let ang = std::f64::consts::TAU * u2;
    let anchor = Vec3::new(rho * ang.cos(), -2.0 * torus.minor, rho * ang.sin());
    let cos_max = CONE_HALF_ANGLE_DEG.to_radians().cos();
    let cos_t = 1.0 - u3 * (1.0 - cos_max);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let az = std::f64::consts::TAU * u4;
    let dir = Vec3::new(sin_t * az.cos(), cos_t, sin_t * az.sin());
    Ray3 { anchor, dir }
}

pub fn uniform_bundle_ray(rng: &mut ChaCha8Rng, torus: &CanonicalTorus) -> Ray3 {
    let [u1, u2, u3, u4] = draw4(rng);
    let z = 2.0 * u1 - 1.0;
    let s = (1.0 - z * z).max(0.0).sqrt();
    let az = std::f64::consts::TAU * u2;
    let dir = Vec3::new(s * az.cos(), s * az.sin(), z);
    let (e1, e2) = orthonormal_pair(dir);
    let bound = torus.outer_radius();
    let rho = bound * u3.sqrt();
    let ang = std::f64::consts::TAU * u4;
    let offset = e1 * (rho * ang.cos()) + e2 * (rho * ang.sin());
    Ray3 {
        anchor: offset - dir * (2.0 * bound),
        dir,
    }
}

pub fn bundle_ray(bundle: Bundle, rng: &mut ChaCha8Rng, torus: &CanonicalTorus) -> Ray3 {
    match bundle {
        Bundle::Hole => hole_bundle_ray(rng, torus),
        Bundle::Uniform => uniform_bundle_ray(rng, torus),
    }
}

fn stream_id(case: usize, bundle: Bundle) -> u64 {
    2 * case as u64 + bundle as u64
}

pub fn run_case(nu: f64, case: usize, bundle: Bundle, rays: u64, seed: u64) -> Result<SweepRow, BenchError> {
    if !(nu.is_finite() && nu > 1.0) {
        return Err(BenchError::BadNu(nu));
    }
    let torus = CanonicalTorus::new(nu, 1.0)?;
    let mut row = SweepRow {
        nu,
        bundle,
        rays,
        std_rejects: 0,
        hole_rejects: 0,
        false_rejects: Vec::new(),
    };
    let stream = stream_id(case, bundle);
    for index in 0..rays {
        let ray = bundle_ray(bundle, &mut ray_rng(seed, stream, index), &torus);
        let std_reject = standard_bv(&ray, &torus).is_reject();
        let hole_reject = bv_dispatch_canonical(&ray, &torus).is_reject();
        row.std_rejects += std_reject as u64;
        row.hole_rejects += hole_reject as u64;
        if (std_reject || hole_reject) && !line_roots(&ray, &torus)?.is_empty() {
            row.false_rejects.push(FalseReject { nu, bundle, index, ray });
        }
    }
    Ok(row)
}

/// One row per `(nu, bundle)`, hole bundle first.
pub fn benchmark_sweep(nu_list: &[f64], rays_per_case: u64, seed: u64) -> Result<Vec<SweepRow>, BenchError> {
    if let Some(&bad) = nu_list.iter().find(|&&nu| !(nu.is_finite() && nu > 1.0)) {
        return Err(BenchError::BadNu(bad));
    }
    let mut rows = Vec::with_capacity(nu_list.len() * 2);
    for (case, &nu) in nu_list.iter().enumerate() {
        for bundle in Bundle::ALL {
            rows.push(run_case(nu, case, bundle, rays_per_case, seed)?);
        }
    }
    Ok(rows)
}
