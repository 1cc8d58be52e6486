use std::f64::consts::TAU;

use super::{polish, Root, RootSet};

/// Real roots of the monic cubic `x^3 + alpha x^2 + beta x + gamma`.
///
/// Closed form (Cardano for one real root, the trigonometric form for
/// three), followed by Newton polishing on the undepressed cubic.
pub fn solve_cubic(alpha: f64, beta: f64, gamma: f64) -> RootSet {
    let shift = alpha / 3.0;
    let p = beta - alpha * shift;
    let q = (2.0 * alpha * alpha / 27.0 - beta / 3.0) * alpha + gamma;

    if p == 0.0 && q == 0.0 {
        return RootSet::from_roots(vec![Root {
            value: -shift,
            multiplicity: 3,
        }]);
    }

    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    let depressed: Vec<f64> = if disc > 0.0 {
        let a = -(half_q.abs() + disc.sqrt()).cbrt().copysign(q);
        let y = if a == 0.0 { 0.0 } else { a - third_p / a };
        vec![y]
    } else {
        // three real roots; p < 0 here
        let m = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - TAU * k as f64 / 3.0).cos())
            .collect()
    };

    let f = |x: f64| ((x + alpha) * x + beta) * x + gamma;
    let df = |x: f64| (3.0 * x + 2.0 * alpha) * x + beta;
    let roots = depressed
        .into_iter()
        .map(|y| polish(y - shift, 4, f, df))
        .collect();
    RootSet::from_values(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_distinct_roots() {
        let r = solve_cubic(-6.0, 11.0, -6.0);
        let v = r.values();
        assert_eq!(v.len(), 3);
        for (got, want) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn one_real_root() {
        let r = solve_cubic(0.0, 0.0, -1.0);
        assert_eq!(r.len(), 1);
        assert!((r.values()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triple_root_at_zero() {
        let r = solve_cubic(0.0, 0.0, 0.0);
        assert_eq!(
            r.roots(),
            &[Root {
                value: 0.0,
                multiplicity: 3
            }]
        );
    }

    #[test]
    fn double_root_merges() {
        // (x - 1)^2 (x + 2) = x^3 - 3x + 2
        let r = solve_cubic(0.0, -3.0, 2.0);
        assert_eq!(r.len(), 2);
        assert!((r.values()[0] + 2.0).abs() < 1e-12);
        assert!((r.values()[1] - 1.0).abs() < 1e-7);
        assert_eq!(r.roots()[1].multiplicity, 2);
    }

    #[test]
    fn always_at_least_one_root() {
        for &(a, b, c) in &[(1e3, -2.0, 5.0), (-0.5, 1e-6, 1e6), (3.0, 3.0, 1.0), (0.0, 1.0, 0.0)] {
            let r = solve_cubic(a, b, c);
            assert!(!r.is_empty());
            for x in r.values() {
                let fx = ((x + a) * x + b) * x + c;
                let scale = x.abs().powi(3) + a.abs() * x * x + b.abs() * x.abs() + c.abs();
                assert!(fx.abs() <= 1e-12 * scale.max(1.0), "{a} {b} {c}: x={x} f={fx}");
            }
        }
    }
}
