//! Scene files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! R = 2
//! r = 1
//! center = 0, 0, 0
//! axis = 0, 1, 0
//! cam_origin = 0, 10, 0
//! cam_dir = 0, -1, 0
//! half_width = 4
//! width = 256
//! height = 256
//! solver = quartic    # or iterative
//! bv = hole           # none | standard | hole
//! ```
//!
//! Every key is optional; missing keys take the values above.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{GeomError, Torus, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: `{value}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("image size must be at least 1x1")]
    EmptyImage,
    #[error("orthographic half width must be positive and finite")]
    BadHalfWidth,
    #[error("camera direction must be nonzero")]
    BadCamera,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Quartic,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvMode {
    None,
    Standard,
    Hole,
}

impl FromStr for SolverKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "quartic" => Ok(SolverKind::Quartic),
            "iterative" => Ok(SolverKind::Iterative),
            _ => Err(()),
        }
    }
}

impl FromStr for BvMode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "none" => Ok(BvMode::None),
            "standard" => Ok(BvMode::Standard),
            "hole" => Ok(BvMode::Hole),
            _ => Err(()),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Quartic => "quartic",
            SolverKind::Iterative => "iterative",
        })
    }
}

impl fmt::Display for BvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BvMode::None => "none",
            BvMode::Standard => "standard",
            BvMode::Hole => "hole",
        })
    }
}

/// Orthographic camera: parallel rays along `dir` from a square-pixel
/// window of half width `half_width` centred on `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub origin: Vec3,
    pub dir: Vec3,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneConfig {
    pub torus: Torus,
    pub camera: Camera,
    pub width: u32,
    pub height: u32,
    pub solver: SolverKind,
    pub bv: BvMode,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            torus: Torus::canonical(2.0, 1.0).expect("default torus is valid"),
            camera: Camera {
                origin: Vec3::new(0.0, 10.0, 0.0),
                dir: Vec3::new(0.0, -1.0, 0.0),
                half_width: 4.0,
            },
            width: 256,
            height: 256,
            solver: SolverKind::Quartic,
            bv: BvMode::Hole,
        }
    }
}

impl SceneConfig {
    /// Scene-file text that parses back to this configuration.
    pub fn to_scene_text(&self) -> String {
        let v = |v: Vec3| format!("{:e}, {:e}, {:e}", v.x, v.y, v.z);
        format!(
            "R = {:e}\nr = {:e}\ncenter = {}\naxis = {}\ncam_origin = {}\ncam_dir = {}\n\
             half_width = {:e}\nwidth = {}\nheight = {}\nsolver = {}\nbv = {}\n",
            self.torus.major(),
            self.torus.minor(),
            v(self.torus.center),
            v(self.torus.axis_n),
            v(self.camera.origin),
            v(self.camera.dir),
            self.camera.half_width,
            self.width,
            self.height,
            self.solver,
            self.bv,
        )
    }
}

fn parse_vec(s: &str) -> Option<Vec3> {
    let parts: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()
        .ok()?;
    match parts[..] {
        [x, y, z] if x.is_finite() && y.is_finite() && z.is_finite() => Some(Vec3::new(x, y, z)),
        _ => None,
    }
}

fn parse_scalar(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn parse_scene(text: &str) -> Result<SceneConfig, SceneError> {
    let defaults = SceneConfig::default();
    let mut major = defaults.torus.major();
    let mut minor = defaults.torus.minor();
    let mut center = defaults.torus.center;
    let mut axis = defaults.torus.axis_n;
    let mut camera = defaults.camera;
    let mut width = defaults.width;
    let mut height = defaults.height;
    let mut solver = defaults.solver;
    let mut bv = defaults.bv;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(SceneError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || SceneError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "R" => major = parse_scalar(value).ok_or_else(bad)?,
            "r" => minor = parse_scalar(value).ok_or_else(bad)?,
            "center" => center = parse_vec(value).ok_or_else(bad)?,
            "axis" => axis = parse_vec(value).ok_or_else(bad)?,
            "cam_origin" => camera.origin = parse_vec(value).ok_or_else(bad)?,
            "cam_dir" => camera.dir = parse_vec(value).ok_or_else(bad)?,
            "half_width" => camera.half_width = parse_scalar(value).ok_or_else(bad)?,
            "width" => width = value.parse().map_err(|_| bad())?,
            "height" => height = value.parse().map_err(|_| bad())?,
            "solver" => solver = value.parse().map_err(|_| bad())?,
            "bv" => bv = value.parse().map_err(|_| bad())?,
            _ => {
                return Err(SceneError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }

    if width == 0 || height == 0 {
        return Err(SceneError::EmptyImage);
    }
    if !(camera.half_width > 0.0) {
        return Err(SceneError::BadHalfWidth);
    }
    camera.dir = camera.dir.normalized().ok_or(SceneError::BadCamera)?;
    let torus = Torus::with_axis(major, minor, center, axis)?;
    Ok(SceneConfig {
        torus,
        camera,
        width,
        height,
        solver,
        bv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = parse_scene("R = 2\nr = 1\nwidth = 64\nheight = 64").unwrap();
        assert_eq!((cfg.torus.major(), cfg.torus.minor()), (2.0, 1.0));
        assert_eq!((cfg.width, cfg.height), (64, 64));
        assert_eq!(cfg.solver, SolverKind::Quartic);
        assert_eq!(cfg.bv, BvMode::Hole);
        assert_eq!(cfg.torus.axis_n, Vec3::Y);
    }

    #[test]
    fn minor_not_below_major_is_rejected() {
        assert!(matches!(
            parse_scene("r = 3\nR = 2"),
            Err(SceneError::Geometry(GeomError::InvalidRadii { .. }))
        ));
        assert!(parse_scene("r = 2\nR = 2").is_err());
    }

    #[test]
    fn modes() {
        let cfg = parse_scene("bv = hole\nsolver = iterative").unwrap();
        assert_eq!(cfg.bv, BvMode::Hole);
        assert_eq!(cfg.solver, SolverKind::Iterative);
        let cfg = parse_scene("bv = none").unwrap();
        assert_eq!(cfg.bv, BvMode::None);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_scene("# a scene\n\n  R = 3   # major\nr=0.5\ncenter = 1 2 3\n").unwrap();
        assert_eq!(cfg.torus.major(), 3.0);
        assert_eq!(cfg.torus.center, Vec3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn axis_is_normalized() {
        let cfg = parse_scene("axis = 0, 0, 5").unwrap();
        assert_eq!(cfg.torus.axis_n, Vec3::Z);
        assert!(matches!(parse_scene("axis = 0, 0, 0"), Err(SceneError::Geometry(_))));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scene("colour = red"), Err(SceneError::UnknownKey { line: 1, .. })));
        assert!(matches!(parse_scene("R = two"), Err(SceneError::BadValue { .. })));
        assert!(matches!(parse_scene("R = nan"), Err(SceneError::BadValue { .. })));
        assert!(matches!(parse_scene("center = 1, 2"), Err(SceneError::BadValue { .. })));
        assert!(matches!(parse_scene("just words"), Err(SceneError::Syntax { line: 1 })));
        assert!(matches!(parse_scene("solver = magic"), Err(SceneError::BadValue { .. })));
        assert_eq!(parse_scene("width = 0"), Err(SceneError::EmptyImage));
        assert!(matches!(parse_scene("height = -4"), Err(SceneError::BadValue { .. })));
        assert_eq!(parse_scene("half_width = 0"), Err(SceneError::BadHalfWidth));
        assert_eq!(parse_scene("cam_dir = 0 0 0"), Err(SceneError::BadCamera));
    }

    #[test]
    fn scene_text_round_trips() {
        let cfg = parse_scene(
            "R = 3.25\nr = 0.7\ncenter = 0.1, -2, 5\naxis = 1, 1, 0\ncam_dir = 0.3, -1, 0.2\nsolver = iterative\nbv = standard\nwidth = 17\nheight = 9",
        )
        .unwrap();
        let again = parse_scene(&cfg.to_scene_text()).unwrap();
        assert_eq!(again.torus.major(), cfg.torus.major());
        assert_eq!(again.torus.center, cfg.torus.center);
        assert!((again.torus.axis_n - cfg.torus.axis_n).norm() < 1e-15);
        assert!((again.camera.dir - cfg.camera.dir).norm() < 1e-15);
        assert_eq!((again.width, again.height, again.solver, again.bv), (17, 9, cfg.solver, cfg.bv));
    }
}
