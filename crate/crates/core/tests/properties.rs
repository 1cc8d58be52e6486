use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use torus_isect::bench::{benchmark_sweep, sweep_csv};
use torus_isect::bounding::{bv_dispatch, bv_dispatch_canonical, hole_geometry, standard_bv, BVDecision};
use torus_isect::envelope::{
    envelope_witness, iterative_intersect, phi_range, planar_circle, profile, sphere_quadratic, t_extreme,
};
use torus_isect::geom::{canonicalize_ray, CanonicalTorus, PlanarRay, Ray3, Torus, Vec3};
use torus_isect::intersect::{assemble_quartic, classify_plane, intersect, intersect_line, line_roots, PlaneCase};
use torus_isect::polysolve::{isolate_and_bisect, solve_quartic, QuarticCoeffs};
use torus_isect::render::trace_image;
use torus_isect::scene::{parse_scene, BvMode, SolverKind};

fn shape() -> impl Strategy<Value = CanonicalTorus> {
    (0.5f64..5.0, 0.05f64..0.95).prop_map(|(big, k)| CanonicalTorus::new(big, big * k).unwrap())
}

fn unit() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, 0.0f64..TAU).prop_map(|(z, az)| {
        let s = (1.0 - z * z).sqrt();
        Vec3::new(s * az.cos(), s * az.sin(), z)
    })
}

fn point(extent: f64) -> impl Strategy<Value = Vec3> {
    (-extent..extent, -extent..extent, -extent..extent).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// Line through a random point of the torus's bounding box.
fn aimed_ray(torus: CanonicalTorus) -> impl Strategy<Value = Ray3> {
    let outer = torus.outer_radius();
    (point(outer), unit()).prop_map(move |(target, dir)| Ray3 {
        anchor: target - dir * (3.0 * outer),
        dir,
    })
}

fn shape_and_ray() -> impl Strategy<Value = (CanonicalTorus, Ray3)> {
    shape().prop_flat_map(|t| (Just(t), aimed_ray(t)))
}

fn general_torus() -> impl Strategy<Value = Torus> {
    (shape(), point(5.0), unit(), unit())
        .prop_filter("axis and helper not parallel", |(_, _, n, h)| n.cross(*h).norm() > 0.1)
        .prop_map(|(s, c, n, h)| {
            let u = (h - n * n.dot(h)).normalized().unwrap();
            Torus::new(s.major, s.minor, c, n, u).unwrap()
        })
}

fn planar_in_case(torus: CanonicalTorus, case: usize) -> impl Strategy<Value = PlanarRay> {
    let (big, small) = (torus.major, torus.minor);
    let outer = big + small;
    let (lo, hi) = match case {
        0 => (0.0, big - small),
        1 => (big - small, big),
        _ => (big, outer),
    };
    (lo..hi, -outer..outer, -small..small, 0.0f64..TAU).prop_map(move |(z_c, tx, ty, th)| {
        let (dx, dy) = (th.cos(), th.sin());
        PlanarRay::new(tx - 2.0 * outer * dx, ty - 2.0 * outer * dy, dx, dy, z_c).unwrap()
    })
}

fn shape_and_planar() -> impl Strategy<Value = (CanonicalTorus, PlanarRay)> {
    (shape(), 0usize..3).prop_flat_map(|(t, case)| (Just(t), planar_in_case(t, case)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    // geometry --------------------------------------------------------------

    #[test]
    fn canonical_transform_round_trips(torus in general_torus(), p in point(10.0)) {
        let q = torus.canonical_transform().unwrap();
        let back = torus.point_to_world(q.transform_point(p));
        prop_assert!((back - p).norm() <= 1e-12 * (1.0 + p.norm() + torus.center.norm()));
    }

    #[test]
    fn canonicalization_preserves_the_implicit_value((torus, ray) in shape_and_ray(), t in -10.0f64..10.0) {
        let form = canonicalize_ray(&ray);
        prop_assert!(form.ray.z_c >= 0.0);
        let before = torus.implicit(ray.at(t));
        let (x, y) = form.ray.at(t);
        let after = torus.implicit(Vec3::new(x, y, form.ray.z_c));
        let scale = (ray.at(t).norm_sq() + torus.outer_radius().powi(2)).max(1.0);
        prop_assert!((before - after).abs() <= 1e-12 * scale);
    }

    #[test]
    fn parametric_points_lie_on_the_surface(torus in shape(), phi in -PI..PI, theta in -PI..PI) {
        let p = torus.point(phi, theta);
        prop_assert!(torus.implicit(p).abs() <= 1e-12 * torus.outer_radius().powi(2));
        let n = torus.normal(p).unwrap();
        prop_assert!((n.norm() - 1.0).abs() <= 1e-12);
    }

    // polynomial solving ----------------------------------------------------

    #[test]
    fn quartic_recovers_separated_roots(mut roots in prop::array::uniform4(-5.0f64..5.0)) {
        roots.sort_by(f64::total_cmp);
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] >= 1e-2));
        let got = solve_quartic(&QuarticCoeffs::from_roots(roots)).unwrap().expanded();
        prop_assert_eq!(got.len(), 4);
        for (g, w) in got.iter().zip(roots) {
            prop_assert!((g - w).abs() <= 1e-8);
        }
    }

    #[test]
    fn quartic_roots_meet_residual_bound(c in prop::array::uniform4(-50.0f64..50.0)) {
        let q = QuarticCoeffs::new(1.0, c[0], c[1], c[2], c[3]);
        for t in solve_quartic(&q).unwrap().values() {
            prop_assert!(q.eval(t).abs() <= q.residual_bound(t), "{:?}: t={} p={}", q, t, q.eval(t));
        }
    }

    // intersection ----------------------------------------------------------

    #[test]
    fn assembled_quartic_is_the_residual((torus, ray) in shape_and_ray(), t in -20.0f64..20.0) {
        let q = assemble_quartic(&ray, &torus);
        let p = ray.at(t);
        let lifted = p.norm_sq() + torus.major.powi(2) + torus.minor.powi(2);
        let scale = q.eval_scale(t).max(lifted * lifted).max(1.0);
        prop_assert!((q.eval(t) - torus.quartic_residual(p)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn transversal_crossings_pair_up((torus, ray) in shape_and_ray()) {
        let roots = line_roots(&ray, &torus).unwrap();
        prop_assert!(roots.total_multiplicity() <= 4);
        let odd = roots.roots().iter().filter(|r| r.multiplicity % 2 == 1).count();
        prop_assert_eq!(odd % 2, 0);
    }

    #[test]
    fn hits_lie_on_the_surface(torus in general_torus(), anchor in point(12.0), dir in unit()) {
        let ray = Ray3::new(anchor, dir).unwrap();
        let bound = 1e-6 * torus.shape.outer_radius().powi(2);
        let hits = intersect(&ray, &torus).unwrap();
        for w in hits.windows(2) {
            prop_assert!(w[0].t < w[1].t);
        }
        for h in &hits {
            prop_assert!(h.t >= 0.0);
            prop_assert!(torus.implicit_world(h.point).abs() <= bound);
            prop_assert!((h.normal.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn rigid_motion_preserves_parameters((shape, local) in shape_and_ray(), placed in general_torus()) {
        let torus = Torus { shape, ..placed };
        let world = Ray3::new(torus.point_to_world(local.anchor), torus.vector_to_world(local.dir)).unwrap();
        let a = line_roots(&local, &shape).unwrap().expanded();
        let b = intersect_line(&world, &torus).unwrap().expanded();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{} vs {}", x, y);
        }
    }

    #[test]
    fn closed_form_agrees_with_bisection((torus, ray) in shape_and_ray()) {
        let q = assemble_quartic(&ray, &torus);
        let closed = solve_quartic(&q).unwrap().expanded();
        let reach = 8.0 * torus.outer_radius();
        let bisected = isolate_and_bisect(&q, -reach, reach, 1e-12).unwrap().expanded();
        prop_assume!(closed.windows(2).all(|w| w[1] - w[0] > 1e-5));
        prop_assert_eq!(closed.len(), bisected.len());
        for (x, y) in closed.iter().zip(&bisected) {
            prop_assert!((x - y).abs() <= 1e-7);
        }
    }

    #[test]
    fn plane_case_thresholds(torus in shape(), z_c in 0.0f64..10.0) {
        let (big, small) = (torus.major, torus.minor);
        let want = if z_c < big - small {
            PlaneCase::CaseA
        } else if z_c < big {
            PlaneCase::CaseB
        } else if z_c < big + small {
            PlaneCase::CaseC
        } else {
            PlaneCase::NoPlaneHit
        };
        prop_assert_eq!(classify_plane(z_c, &torus), want);
    }

    // envelope --------------------------------------------------------------

    #[test]
    fn sphere_roots_lie_on_the_sphere((torus, pr) in shape_and_planar(), phi in -PI..PI) {
        let q = sphere_quadratic(&pr, phi, &torus);
        let centre = Vec3::new(torus.major * phi.cos(), 0.0, torus.major * phi.sin());
        for t in q.roots().values() {
            let d = (pr.to_ray3().at(t) - centre).norm();
            prop_assert!((d - torus.minor).abs() <= 1e-9 * (1.0 + t.abs()));
        }
        prop_assert!(q.derivative(t_extreme(&pr, phi, &torus)).abs() <= 1e-9);
    }

    #[test]
    fn iterative_matches_quartic((torus, pr) in shape_and_planar()) {
        let a = line_roots(&pr.to_ray3(), &torus).unwrap().expanded();
        let b = iterative_intersect(&pr, &torus, 1e-12).unwrap();
        prop_assume!(a.windows(2).all(|w| w[1] - w[0] > 1e-5));
        prop_assert_eq!(a.len(), b.len(), "{:?} vs {:?}", a, b);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn iterative_roots_have_envelope_witnesses((torus, pr) in shape_and_planar()) {
        let tol = 1e-10;
        let range = phi_range(pr.z_c, &torus).unwrap();
        for t in iterative_intersect(&pr, &torus, tol).unwrap() {
            prop_assert!(profile(&pr, t, &torus).abs() <= 4.0 * tol * torus.outer_radius());
            let (phi, dist) = envelope_witness(&pr, t, &torus).unwrap();
            prop_assert!(range.contains(phi));
            prop_assert!(planar_circle(phi, pr.z_c, &torus).is_some());
            prop_assert!(dist.abs() <= 4.0 * tol);
        }
    }

    #[test]
    fn phi_range_is_ordered(torus in shape(), k in 0.0f64..1.0) {
        let z_c = k * torus.outer_radius() * 0.999;
        let r = phi_range(z_c, &torus).unwrap();
        prop_assert!(r.phi1 <= r.phi0 && r.phi0 <= r.phi2);
        // the extreme angles carry degenerate or valid slice circles
        prop_assert!(planar_circle(r.phi0, z_c, &torus).is_some());
    }

    // bounding --------------------------------------------------------------

    #[test]
    fn culls_are_sound_and_dispatch_dominates(torus in general_torus(), target in point(1.0), dir in unit()) {
        let outer = torus.shape.outer_radius();
        let local = Ray3 { anchor: target * outer - dir * (3.0 * outer), dir };
        let ray = Ray3::new(torus.point_to_world(local.anchor), torus.vector_to_world(local.dir)).unwrap();
        let canon = torus.ray_to_canonical(&ray).unwrap();
        let s = standard_bv(&canon, &torus.shape);
        let d = bv_dispatch(&ray, &torus).unwrap();
        prop_assert!(!s.is_reject() || d.is_reject());
        if d.is_reject() {
            prop_assert!(intersect_line(&ray, &torus).unwrap().is_empty());
        }
    }

    #[test]
    fn axis_parallel_hole_rays_are_culled(torus in shape(), fx in -1.0f64..1.0, fz in -1.0f64..1.0) {
        // vertical line at (x, z); it lies in the plane through the axis
        let x = fx * (torus.major - torus.minor);
        let z = fz * (torus.major - torus.minor);
        prop_assume!(x.hypot(z) < 0.999 * (torus.major - torus.minor));
        let ray = Ray3 { anchor: Vec3::new(x, -10.0, z), dir: Vec3::Y };
        prop_assert_eq!(standard_bv(&ray, &torus), BVDecision::Maybe);
        prop_assert_eq!(bv_dispatch_canonical(&ray, &torus), BVDecision::RejectHole);
    }

    #[test]
    fn hole_geometry_shapes(torus in shape(), k in 0.0f64..1.0) {
        let z_c = k * (torus.major - torus.minor);
        let h = hole_geometry(z_c, &torus).unwrap();
        prop_assert!(h.x_b >= 0.0);
        prop_assert!((h.k_center_x - h.x_b - torus.minor).abs() <= 1e-15 * h.k_center_x.max(1.0));
        // the inner oval point (x_B, 0, z_c) is on the torus
        let p = Vec3::new(h.x_b, 0.0, z_c);
        prop_assert!(torus.implicit(p).abs() <= 1e-9 * torus.outer_radius().powi(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn renders_conserve_and_match_across_culling(
        big in 1.5f64..4.0,
        k in 0.2f64..0.8,
        axis in unit(),
        cam in unit(),
    ) {
        let scene = |bv: &str| {
            format!(
                "R = {big}\nr = {}\naxis = {}, {}, {}\ncam_origin = {}, {}, {}\ncam_dir = {}, {}, {}\n\
                 half_width = {}\nwidth = 24\nheight = 16\nbv = {bv}\n",
                big * k, axis.x, axis.y, axis.z,
                cam.x * 20.0, cam.y * 20.0, cam.z * 20.0,
                -cam.x, -cam.y, -cam.z,
                big * 1.5,
            )
        };
        let reference = trace_image(&parse_scene(&scene("none")).unwrap()).unwrap();
        prop_assert!(reference.1.is_conserved());
        for bv in ["standard", "hole"] {
            let cfg = parse_scene(&scene(bv)).unwrap();
            prop_assert_eq!(cfg.bv, if bv == "hole" { BvMode::Hole } else { BvMode::Standard });
            let (img, stats) = trace_image(&cfg).unwrap();
            prop_assert!(stats.is_conserved());
            prop_assert_eq!(stats.hits, reference.1.hits);
            prop_assert_eq!(&img, &reference.0);
        }
        let mut iterative = parse_scene(&scene("hole")).unwrap();
        iterative.solver = SolverKind::Iterative;
        let (img, _) = trace_image(&iterative).unwrap();
        prop_assert_eq!(img.count_non_black(), reference.0.count_non_black());
    }

    #[test]
    fn sweep_is_sound_and_deterministic(seed in any::<u64>(), nu in 1.1f64..10.0) {
        let a = benchmark_sweep(&[nu], 2000, seed).unwrap();
        prop_assert!(a.iter().all(|r| r.false_rejects.is_empty()));
        prop_assert_eq!(sweep_csv(&a), sweep_csv(&benchmark_sweep(&[nu], 2000, seed).unwrap()));
    }
}
