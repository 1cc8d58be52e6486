//! Orthographic ray casting of a single torus to a PPM image.

use std::io::{self, Write};
use std::ops::AddAssign;

use thiserror::Error;

use crate::bounding::{bv_dispatch_canonical, standard_bv, BVDecision};
use crate::envelope::iterative_intersect;
use crate::geom::{canonicalize_ray, GeomError, Ray3, Vec3};
use crate::intersect::line_roots;
use crate::polysolve::PolyError;
use crate::scene::{BvMode, Camera, SceneConfig, SolverKind};

/// Light travels along this direction (normalized at use).
pub const LIGHT_DIR: Vec3 = Vec3::new(-1.0, -1.0, -1.0);
const AMBIENT: f64 = 0.1;
const TINT: [f64; 3] = [1.0, 0.85, 0.7];
const ITERATIVE_TOL: f64 = 1e-10;

pub const STATS_CSV_HEADER: &str = "rays_total,bv_reject_outside,bv_reject_slab,bv_reject_hole,exact_tests,hits";

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum RenderError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// RGB8 image stored row by row from the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn new(width: u32, height: u32) -> Self {
        Image {
            width,
            height,
            pixels: vec![[0; 3]; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[(y * self.width + x) as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        self.pixels[(y * self.width + x) as usize] = rgb;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[[u8; 3]]> {
        self.pixels.chunks(self.width as usize)
    }

    pub fn count_non_black(&self) -> usize {
        self.pixels.iter().filter(|p| **p != [0, 0, 0]).count()
    }

    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(self.pixels.as_flattened())?;
        out.flush()
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.pixels.len() * 3 + 20);
        self.write_ppm(&mut buf).expect("writing to memory cannot fail");
        buf
    }
}

/// Per-render ray accounting. Every ray is either rejected by exactly one
/// culling outcome or handed to the exact solver.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatsRecord {
    pub rays_total: u64,
    pub bv_reject_outside: u64,
    pub bv_reject_slab: u64,
    pub bv_reject_hole: u64,
    pub exact_tests: u64,
    pub hits: u64,
}

impl StatsRecord {
    pub fn is_conserved(&self) -> bool {
        self.rays_total == self.bv_reject_outside + self.bv_reject_slab + self.bv_reject_hole + self.exact_tests
            && self.hits <= self.exact_tests
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{STATS_CSV_HEADER}\n{},{},{},{},{},{}\n",
            self.rays_total, self.bv_reject_outside, self.bv_reject_slab, self.bv_reject_hole, self.exact_tests, self.hits
        )
    }

    fn record(&mut self, decision: BVDecision) {
        self.rays_total += 1;
        match decision {
            BVDecision::RejectOutside => self.bv_reject_outside += 1,
            BVDecision::RejectSlab => self.bv_reject_slab += 1,
            BVDecision::RejectHole => self.bv_reject_hole += 1,
            BVDecision::Maybe => self.exact_tests += 1,
        }
    }
}

impl AddAssign for StatsRecord {
    fn add_assign(&mut self, o: StatsRecord) {
        self.rays_total += o.rays_total;
        self.bv_reject_outside += o.bv_reject_outside;
        self.bv_reject_slab += o.bv_reject_slab;
        self.bv_reject_hole += o.bv_reject_hole;
        self.exact_tests += o.exact_tests;
        self.hits += o.hits;
    }
}

/// Right and up vectors spanning the image plane.
fn camera_basis(cam: &Camera) -> (Vec3, Vec3) {
    let f = cam.dir;
    let hint = if f.y.abs() > 0.99 { Vec3::Z } else { Vec3::Y };
    let right = f.cross(hint).normalized().unwrap_or(Vec3::X);
    (right, right.cross(f))
}

/// World-space ray through the centre of pixel `(px, py)`.
pub fn pixel_ray(cfg: &SceneConfig, px: u32, py: u32) -> Ray3 {
    let cam = &cfg.camera;
    let (right, up) = camera_basis(cam);
    let (w, h) = (cfg.width as f64, cfg.height as f64);
    let u = ((px as f64 + 0.5) / w * 2.0 - 1.0) * cam.half_width;
    let v = (1.0 - (py as f64 + 0.5) / h * 2.0) * cam.half_width * h / w;
    Ray3 {
        anchor: cam.origin + right * u + up * v,
        dir: cam.dir,
    }
}

/// Nearest non-negative hit parameter of a canonical-frame ray.
fn first_hit(canon: &Ray3, cfg: &SceneConfig) -> Result<Option<f64>, RenderError> {
    let shape = &cfg.torus.shape;
    let t = match cfg.solver {
        SolverKind::Quartic => line_roots(canon, shape)?
            .values()
            .into_iter()
            .find(|&t| t >= 0.0),
        SolverKind::Iterative => {
            let planar = canonicalize_ray(canon).ray;
            iterative_intersect(&planar, shape, ITERATIVE_TOL)
                .expect("tolerance is positive")
                .into_iter()
                .find(|&t| t >= 0.0)
        }
    };
    Ok(t)
}

fn shade(normal: Vec3, view: Vec3) -> [u8; 3] {
    let n = if normal.dot(view) > 0.0 { -normal } else { normal };
    let light = LIGHT_DIR.normalized().expect("light direction is nonzero");
    let lambert = (-n.dot(light)).max(0.0);
    let i = AMBIENT + (1.0 - AMBIENT) * lambert;
    TINT.map(|c| (255.0 * i * c).round() as u8)
}

/// Culls, solves and shades one world-space ray.
pub fn trace_ray(ray: &Ray3, cfg: &SceneConfig, stats: &mut StatsRecord) -> Result<[u8; 3], RenderError> {
    let torus = &cfg.torus;
    let canon = torus.ray_to_canonical(ray)?;
    let decision = match cfg.bv {
        BvMode::None => BVDecision::Maybe,
        BvMode::Standard => standard_bv(&canon, &torus.shape),
        BvMode::Hole => bv_dispatch_canonical(&canon, &torus.shape),
    };
    stats.record(decision);
    if decision.is_reject() {
        return Ok([0; 3]);
    }
    let Some(t) = first_hit(&canon, cfg)? else {
        return Ok([0; 3]);
    };
    stats.hits += 1;
    let normal = torus.vector_to_world(torus.shape.normal(canon.at(t))?);
    Ok(shade(normal, ray.dir))
}

pub fn trace_image(cfg: &SceneConfig) -> Result<(Image, StatsRecord), RenderError> {
    let mut image = Image::new(cfg.width, cfg.height);
    let mut stats = StatsRecord::default();
    for py in 0..cfg.height {
        for px in 0..cfg.width {
            let rgb = trace_ray(&pixel_ray(cfg, px, py), cfg, &mut stats)?;
            image.set(px, py, rgb);
        }
    }
    Ok((image, stats))
}
