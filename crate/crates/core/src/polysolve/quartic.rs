use super::{monic_quadratic_lenient, polish, solve_cubic, PolyError, QuarticCoeffs, RootSet};

/// Relative slack under which a negative quadratic-factor discriminant is
/// treated as a (grazing) double root.
const DISC_SLACK: f64 = 1e-10;

const POLISH_ITERATIONS: usize = 5;

/// `x^4 + p x^2 + q x + r` obtained from a monic quartic by `t = x - shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepressedQuartic {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// One quarter of the monic cubic coefficient.
    pub shift: f64,
}

impl DepressedQuartic {
    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        (x2 + self.p) * x2 + self.q * x + self.r
    }
}

/// Removes the cubic term of a monic quartic.
pub fn depress(q: &QuarticCoeffs) -> Result<DepressedQuartic, PolyError> {
    if !q.is_finite() {
        return Err(PolyError::NonFinite);
    }
    if q.a != 1.0 {
        return Err(PolyError::NotMonic(q.a));
    }
    let (b, c, d, e) = (q.b, q.c, q.d, q.e);
    let b2 = b * b;
    Ok(DepressedQuartic {
        p: c - 3.0 * b2 / 8.0,
        q: d - b * c / 2.0 + b2 * b / 8.0,
        r: e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0,
        shift: b / 4.0,
    })
}

/// Monic coefficients `(alpha, beta, gamma)` of the resolvent cubic
/// `y^3 - (p/2) y^2 - r y + (4 p r - q^2) / 8`.
pub fn resolvent_cubic(dq: &DepressedQuartic) -> (f64, f64, f64) {
    (
        -0.5 * dq.p,
        -dq.r,
        (4.0 * dq.p * dq.r - dq.q * dq.q) / 8.0,
    )
}

/// The two monic quadratic factors `x^2 + b x + c` of a depressed quartic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerrariFactors {
    /// Resolvent root used for the split.
    pub y: f64,
    pub first: (f64, f64),
    pub second: (f64, f64),
}

impl FerrariFactors {
    /// Coefficients `[1, c3, c2, c1, c0]` of the product of the factors.
    pub fn product(&self) -> [f64; 5] {
        let (b1, c1) = self.first;
        let (b2, c2) = self.second;
        [1.0, b1 + b2, c1 + c2 + b1 * b2, b1 * c2 + b2 * c1, c1 * c2]
    }
}

/// Splits a depressed quartic into two real quadratics.
///
/// With `y` a real resolvent root, `(x^2 + y)^2 = (2y - p) x^2 - q x +
/// y^2 - r` and the right side is a perfect square `(m x - n)^2` with
/// `m = sqrt(2y - p)` and `n` carrying the sign of `q`. The largest
/// resolvent root is used: it maximizes `2y - p`, so `m` is as far from a
/// cancelling square root as possible.
pub fn ferrari_factors(dq: &DepressedQuartic) -> FerrariFactors {
    let (alpha, beta, gamma) = resolvent_cubic(dq);
    let roots = solve_cubic(alpha, beta, gamma);
    let y = roots
        .values()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    let m2 = (2.0 * y - dq.p).max(0.0);
    let m = m2.sqrt();
    // Two routes to n: q / (2m) and sign(q) sqrt(y^2 - r). Keep whichever
    // reproduces the depressed coefficients better.
    let n_sqrt = (y * y - dq.r).max(0.0).sqrt().copysign(dq.q);
    let mismatch = |n: f64| (2.0 * m * n - dq.q).abs() + (y * y - n * n - dq.r).abs();
    let n = if m > 0.0 {
        let n_div = dq.q / (2.0 * m);
        if mismatch(n_div) <= mismatch(n_sqrt) {
            n_div
        } else {
            n_sqrt
        }
    } else {
        n_sqrt
    };

    FerrariFactors {
        y,
        first: (m, y - n),
        second: (-m, y + n),
    }
}

/// Real roots of a quartic with multiplicity.
///
/// Every root is Newton-polished on the original coefficients. A root pair
/// that only exists because a rounding-level negative discriminant was
/// clamped to zero is kept as a double root when it passes the residual
/// bound of [`QuarticCoeffs::residual_bound`], and dropped otherwise.
pub fn solve_quartic(q: &QuarticCoeffs) -> Result<RootSet, PolyError> {
    let monic = q.monic()?;
    let dq = depress(&monic)?;
    let factors = ferrari_factors(&dq);

    let f = |t: f64| monic.eval(t);
    let df = |t: f64| monic.eval_derivative(t);

    let mut values = Vec::with_capacity(4);
    for (b, c) in [factors.first, factors.second] {
        let (xs, clamped) = monic_quadratic_lenient(b, c, DISC_SLACK);
        let ts: Vec<f64> = xs
            .into_iter()
            .map(|x| polish(x - dq.shift, POLISH_ITERATIONS, f, df))
            .collect();
        if clamped && ts.iter().any(|&t| monic.eval(t).abs() > monic.residual_bound(t)) {
            continue;
        }
        values.extend(ts);
    }
    Ok(RootSet::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysolve::Root;

    fn assert_roots(q: QuarticCoeffs, want: &[(f64, u32)], tol: f64) {
        let got = solve_quartic(&q).unwrap();
        assert_eq!(got.len(), want.len(), "{q:?} -> {got:?}");
        for (r, &(v, m)) in got.roots().iter().zip(want) {
            assert!((r.value - v).abs() <= tol, "{q:?}: {} vs {v}", r.value);
            assert_eq!(r.multiplicity, m);
        }
    }

    #[test]
    fn depress_identity_case() {
        let dq = depress(&QuarticCoeffs::new(1.0, 0.0, 2.0, -3.0, 4.0)).unwrap();
        assert_eq!(
            dq,
            DepressedQuartic {
                p: 2.0,
                q: -3.0,
                r: 4.0,
                shift: 0.0
            }
        );
    }

    #[test]
    fn depress_odd_roots() {
        // (t-1)(t-3)(t-5)(t-7), x = t - 4 has roots -3, -1, 1, 3:
        // (x^2 - 1)(x^2 - 9) = x^4 - 10 x^2 + 9
        let dq = depress(&QuarticCoeffs::new(1.0, -16.0, 86.0, -176.0, 105.0)).unwrap();
        assert_eq!((dq.p, dq.q, dq.r), (-10.0, 0.0, 9.0));
        assert_eq!(dq.shift, -4.0);
    }

    #[test]
    fn depress_perfect_power() {
        let dq = depress(&QuarticCoeffs::new(1.0, 4.0, 6.0, 4.0, 1.0)).unwrap();
        assert_eq!((dq.p, dq.q, dq.r, dq.shift), (0.0, 0.0, 0.0, 1.0));
        let roots = solve_quartic(&QuarticCoeffs::new(1.0, 4.0, 6.0, 4.0, 1.0)).unwrap();
        assert_eq!(
            roots.roots(),
            &[Root {
                value: -1.0,
                multiplicity: 4
            }]
        );
    }

    #[test]
    fn depress_rejects_non_monic() {
        assert_eq!(
            depress(&QuarticCoeffs::new(2.0, 0.0, 0.0, 0.0, 1.0)),
            Err(PolyError::NotMonic(2.0))
        );
    }

    #[test]
    fn depress_expands_back() {
        // substitute x = t + shift into x^4 + p x^2 + q x + r and compare
        let q = QuarticCoeffs::new(1.0, 2.5, -3.0, 0.75, 11.0);
        let dq = depress(&q).unwrap();
        for t in [-3.0, -1.0, 0.0, 0.5, 2.0, 7.0] {
            let lhs = q.eval(t);
            let rhs = dq.eval(t + dq.shift);
            assert!((lhs - rhs).abs() <= 1e-12 * q.eval_scale(t), "{t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn biquadratic() {
        assert_roots(
            QuarticCoeffs::new(1.0, 0.0, -10.0, 0.0, 9.0),
            &[(-3.0, 1), (-1.0, 1), (1.0, 1), (3.0, 1)],
            1e-13,
        );
    }

    #[test]
    fn four_odd_roots() {
        assert_roots(
            QuarticCoeffs::new(1.0, -16.0, 86.0, -176.0, 105.0),
            &[(1.0, 1), (3.0, 1), (5.0, 1), (7.0, 1)],
            1e-12,
        );
    }

    #[test]
    fn two_double_roots() {
        assert_roots(
            QuarticCoeffs::new(1.0, -40.0, 592.0, -3840.0, 9216.0),
            &[(8.0, 2), (12.0, 2)],
            1e-7,
        );
    }

    #[test]
    fn non_monic_input_is_normalized() {
        assert_roots(
            QuarticCoeffs::new(-2.0, 0.0, 20.0, 0.0, -18.0),
            &[(-3.0, 1), (-1.0, 1), (1.0, 1), (3.0, 1)],
            1e-13,
        );
    }

    #[test]
    fn no_real_roots() {
        assert!(solve_quartic(&QuarticCoeffs::new(1.0, 0.0, 0.0, 0.0, 1.0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn errors() {
        assert_eq!(
            solve_quartic(&QuarticCoeffs::new(0.0, 1.0, 0.0, 0.0, 1.0)),
            Err(PolyError::DegreeMismatch)
        );
        assert_eq!(
            solve_quartic(&QuarticCoeffs::new(1.0, f64::NAN, 0.0, 0.0, 1.0)),
            Err(PolyError::NonFinite)
        );
    }

    #[test]
    fn factors_multiply_back() {
        let dq = depress(&QuarticCoeffs::new(1.0, -16.0, 86.0, -176.0, 105.0)).unwrap();
        let prod = ferrari_factors(&dq).product();
        let want = [1.0, 0.0, dq.p, dq.q, dq.r];
        for (g, w) in prod.iter().zip(want) {
            assert!((g - w).abs() <= 1e-10 * w.abs().max(1.0));
        }
    }
}
