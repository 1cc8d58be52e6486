use super::{solve_cubic, PolyError, QuarticCoeffs, Root, RootSet};

const MAX_BISECTIONS: usize = 200;

/// Real roots of `q` inside `[lo, hi]`, located to within `tol`.
///
/// The interval is cut at the real critical points of `q` (roots of the
/// derivative cubic), so `q` is monotone on every piece and each piece
/// holds at most one root, found by bisection. A critical point where `q`
/// vanishes to rounding accuracy is reported as a double root.
pub fn isolate_and_bisect(q: &QuarticCoeffs, lo: f64, hi: f64, tol: f64) -> Result<RootSet, PolyError> {
    if !(tol > 0.0) {
        return Err(PolyError::BadTolerance);
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(PolyError::BadInterval);
    }
    if !q.is_finite() {
        return Err(PolyError::NonFinite);
    }
    if q.a == 0.0 {
        return Err(PolyError::DegreeMismatch);
    }

    let k = 1.0 / (4.0 * q.a);
    let critical = solve_cubic(3.0 * q.b * k, 2.0 * q.c * k, q.d * k);

    // (position, is_critical)
    let mut breaks: Vec<(f64, bool)> = vec![(lo, false)];
    breaks.extend(
        critical
            .values()
            .into_iter()
            .filter(|&c| c > lo && c < hi)
            .map(|c| (c, true)),
    );
    breaks.push((hi, false));

    let vanishes = |t: f64, v: f64| v.abs() <= 4.0 * f64::EPSILON * q.eval_scale(t);
    let values: Vec<f64> = breaks.iter().map(|&(t, _)| q.eval(t)).collect();

    let mut roots = Vec::new();
    for (&(t, is_critical), &v) in breaks.iter().zip(&values) {
        if vanishes(t, v) {
            roots.push(Root {
                value: t,
                multiplicity: if is_critical { 2 } else { 1 },
            });
        }
    }
    for i in 0..breaks.len() - 1 {
        let (t0, v0) = (breaks[i].0, values[i]);
        let (t1, v1) = (breaks[i + 1].0, values[i + 1]);
        if vanishes(t0, v0) || vanishes(t1, v1) {
            continue;
        }
        if (v0 < 0.0) != (v1 < 0.0) {
            roots.push(Root {
                value: bisect(q, t0, t1, v0, tol),
                multiplicity: 1,
            });
        }
    }
    Ok(RootSet::from_roots(roots))
}

fn bisect(q: &QuarticCoeffs, mut lo: f64, mut hi: f64, v_lo: f64, tol: f64) -> f64 {
    let lo_negative = v_lo < 0.0;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = q.eval(mid);
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysolve::solve_quartic;

    #[test]
    fn biquadratic_positive_half() {
        let q = QuarticCoeffs::new(1.0, 0.0, -10.0, 0.0, 9.0);
        let r = isolate_and_bisect(&q, 0.0, 10.0, 1e-10).unwrap();
        let v = r.values();
        assert_eq!(v.len(), 2);
        assert!((v[0] - 1.0).abs() <= 1e-10);
        assert!((v[1] - 3.0).abs() <= 1e-10);
    }

    #[test]
    fn four_roots_match_closed_form() {
        let q = QuarticCoeffs::new(1.0, -16.0, 86.0, -176.0, 105.0);
        let tol = 1e-10;
        let r = isolate_and_bisect(&q, -10.0, 10.0, tol).unwrap();
        let closed = solve_quartic(&q).unwrap();
        assert_eq!(r.len(), 4);
        for (a, b) in r.values().iter().zip(closed.values()) {
            assert!((a - b).abs() <= 10.0 * tol);
        }
        for (a, b) in r.values().iter().zip([1.0, 3.0, 5.0, 7.0]) {
            assert!((a - b).abs() <= tol);
        }
    }

    #[test]
    fn no_real_roots() {
        let q = QuarticCoeffs::new(1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(isolate_and_bisect(&q, -10.0, 10.0, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn double_roots_at_critical_points() {
        let q = QuarticCoeffs::new(1.0, -40.0, 592.0, -3840.0, 9216.0);
        let r = isolate_and_bisect(&q, 0.0, 20.0, 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.roots()[0].multiplicity, 2);
        assert!((r.values()[0] - 8.0).abs() < 1e-9);
        assert!((r.values()[1] - 12.0).abs() < 1e-9);
    }

    #[test]
    fn argument_errors() {
        let q = QuarticCoeffs::new(1.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(isolate_and_bisect(&q, 0.0, 1.0, 0.0), Err(PolyError::BadTolerance));
        assert_eq!(isolate_and_bisect(&q, 0.0, 1.0, -1.0), Err(PolyError::BadTolerance));
        assert_eq!(isolate_and_bisect(&q, 1.0, 0.0, 1e-6), Err(PolyError::BadInterval));
    }
}
