//! Ray-torus intersection.
//!
//! * [`geom`]: vectors, rays and the ring torus, with the reduction of an
//!   arbitrary ray to a line in a plane `z = z_c` of the canonical torus.
//! * [`projective`]: homogeneous points, lines and planes.
//! * [`polysolve`]: quadratic, cubic and quartic real-root solvers.
//! * [`intersect`]: the quartic intersection pipeline.
//! * [`envelope`]: the torus as an envelope of spheres; independent solvers
//!   used to cross-check the quartic.
//! * [`bounding`]: the sphere-and-slab bounding volume and the refined test
//!   that also rejects lines through the hole.
//! * [`scene`], [`render`], [`bench`]: scene files, an orthographic PPM
//!   renderer and the culling benchmark behind the `torus` binary.

pub mod bench;
pub mod bounding;
pub mod envelope;
pub mod geom;
pub mod intersect;
pub mod polysolve;
pub mod projective;
pub mod render;
pub mod scene;

pub use geom::{CanonicalTorus, PlanarRay, Ray3, Torus, Vec3};
pub use polysolve::{QuarticCoeffs, RootSet};
