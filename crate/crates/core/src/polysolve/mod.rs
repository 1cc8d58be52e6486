//! Real roots of quadratic, cubic and quartic polynomials.
//!
//! The quartic path is Ferrari's: depress, solve the resolvent cubic,
//! factor into two quadratics, then polish every root with Newton steps on
//! the original polynomial. [`isolate_and_bisect`] is an independent
//! bracketing solver used to cross-check it.

mod cubic;
mod isolate;
mod quartic;

pub use cubic::solve_cubic;
pub use isolate::isolate_and_bisect;
pub use quartic::{depress, ferrari_factors, resolvent_cubic, solve_quartic, DepressedQuartic, FerrariFactors};

use thiserror::Error;

/// Roots closer than this (relative to `max(1, |t|)`) are one root with
/// summed multiplicity.
pub const MERGE_REL: f64 = 1e-7;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PolyError {
    #[error("leading coefficient is zero")]
    DegreeMismatch,
    #[error("coefficients must be finite")]
    NonFinite,
    #[error("polynomial must be monic (leading coefficient 1), got {0}")]
    NotMonic(f64),
    #[error("root set has total multiplicity {have}, polynomial has degree {need}")]
    IncompleteRootSet { have: usize, need: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("interval must satisfy lo < hi")]
    BadInterval,
}

/// `a t^4 + b t^3 + c t^2 + d t + e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl QuarticCoeffs {
    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        QuarticCoeffs { a, b, c, d, e }
    }

    /// Monic quartic with the given four roots.
    pub fn from_roots(r: [f64; 4]) -> Self {
        let mut c = [1.0, 0.0, 0.0, 0.0, 0.0];
        for (n, &x) in r.iter().enumerate() {
            for k in (1..=n + 1).rev() {
                c[k] -= c[k - 1] * x;
            }
        }
        QuarticCoeffs::new(c[0], c[1], c[2], c[3], c[4])
    }

    /// Coefficients from the leading term down.
    pub fn to_array(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn eval(&self, t: f64) -> f64 {
        (((self.a * t + self.b) * t + self.c) * t + self.d) * t + self.e
    }

    pub fn eval_derivative(&self, t: f64) -> f64 {
        ((4.0 * self.a * t + 3.0 * self.b) * t + 2.0 * self.c) * t + self.d
    }

    /// Sum of absolute term magnitudes at `t`; bounds the rounding error of
    /// [`eval`](Self::eval).
    pub fn eval_scale(&self, t: f64) -> f64 {
        let at = t.abs();
        (((self.a.abs() * at + self.b.abs()) * at + self.c.abs()) * at + self.d.abs()) * at
            + self.e.abs()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn monic(&self) -> Result<QuarticCoeffs, PolyError> {
        if !self.is_finite() {
            return Err(PolyError::NonFinite);
        }
        if self.a == 0.0 {
            return Err(PolyError::DegreeMismatch);
        }
        let k = 1.0 / self.a;
        Ok(QuarticCoeffs::new(
            1.0,
            self.b * k,
            self.c * k,
            self.d * k,
            self.e * k,
        ))
    }

    /// The residual bound `1e-9 max(1, |t|)^4 max|coeff|` a returned root
    /// must meet.
    pub fn residual_bound(&self, t: f64) -> f64 {
        1e-9 * t.abs().max(1.0).powi(4) * self.max_abs_coeff()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u32,
}

/// Real roots in strictly increasing order, each with a multiplicity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet::default()
    }

    /// Sorts the values and merges near-coincident ones (see [`MERGE_REL`]).
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let mut roots: Vec<Root> = Vec::with_capacity(values.len());
        let mut members: Vec<f64> = Vec::new();
        for v in values {
            match roots.last_mut() {
                Some(last) if (v - last.value).abs() <= MERGE_REL * last.value.abs().max(1.0) => {
                    members.push(v);
                    last.multiplicity += 1;
                    last.value = members.iter().sum::<f64>() / members.len() as f64;
                }
                _ => {
                    members.clear();
                    members.push(v);
                    roots.push(Root {
                        value: v,
                        multiplicity: 1,
                    });
                }
            }
        }
        RootSet { roots }
    }

    /// Builds a set from already separated roots. Input is sorted; entries
    /// that collide under the merge rule are combined.
    pub fn from_roots(mut roots: Vec<Root>) -> Self {
        roots.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut out: Vec<Root> = Vec::with_capacity(roots.len());
        for r in roots {
            match out.last_mut() {
                Some(last) if (r.value - last.value).abs() <= MERGE_REL * last.value.abs().max(1.0) => {
                    last.multiplicity += r.multiplicity;
                }
                _ => out.push(r),
            }
        }
        RootSet { roots: out }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Distinct root values.
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    /// Root values repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity as usize))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }
}

/// Real roots of `a t^2 + b t + c`.
///
/// The larger-magnitude root comes from the formula with no cancellation,
/// the other from the product of roots `c / a`.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Result<RootSet, PolyError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(PolyError::NonFinite);
    }
    if a == 0.0 {
        return Err(PolyError::DegreeMismatch);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(RootSet::empty());
    }
    if disc == 0.0 {
        return Ok(RootSet::from_roots(vec![Root {
            value: -b / (2.0 * a),
            multiplicity: 2,
        }]));
    }
    let (x1, x2) = stable_pair(a, b, c, disc.sqrt());
    Ok(RootSet::from_values(vec![x1, x2]))
}

fn stable_pair(a: f64, b: f64, c: f64, sqrt_disc: f64) -> (f64, f64) {
    let q = -0.5 * (b + sqrt_disc.copysign(b));
    if q == 0.0 {
        // b = 0 and disc = 0
        return (0.0, 0.0);
    }
    (q / a, c / q)
}

/// Roots of the monic `x^2 + b x + c`, treating a discriminant that is
/// negative only by rounding-level `slack` as zero. The flag reports whether
/// that clamp fired.
pub(crate) fn monic_quadratic_lenient(b: f64, c: f64, slack: f64) -> (Vec<f64>, bool) {
    let disc = b * b - 4.0 * c;
    let scale = b * b + 4.0 * c.abs();
    if disc < 0.0 {
        if disc >= -slack * scale {
            let x = -0.5 * b;
            return (vec![x, x], true);
        }
        return (Vec::new(), false);
    }
    if disc == 0.0 {
        let x = -0.5 * b;
        return (vec![x, x], false);
    }
    let (x1, x2) = stable_pair(1.0, b, c, disc.sqrt());
    (vec![x1, x2], false)
}

/// Largest deviation over the Vieta identities between a complete root set
/// and the coefficients (leading term first), each deviation divided by
/// `max(1, |expected|)`.
pub fn vieta_residual(roots: &RootSet, coeffs: &[f64]) -> Result<f64, PolyError> {
    let Some((&lead, _)) = coeffs.split_first() else {
        return Err(PolyError::DegreeMismatch);
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(PolyError::NonFinite);
    }
    if lead == 0.0 {
        return Err(PolyError::DegreeMismatch);
    }
    let degree = coeffs.len() - 1;
    let xs = roots.expanded();
    if xs.len() != degree {
        return Err(PolyError::IncompleteRootSet {
            have: xs.len(),
            need: degree,
        });
    }
    // elementary symmetric polynomials e_0..e_n
    let mut e = vec![0.0; degree + 1];
    e[0] = 1.0;
    for (n, &x) in xs.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    let mut worst = 0.0_f64;
    for k in 1..=degree {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let expected = sign * coeffs[k] / lead;
        worst = worst.max((e[k] - expected).abs() / expected.abs().max(1.0));
    }
    Ok(worst)
}

/// Newton refinement that only accepts steps reducing `|p|`.
pub(crate) fn polish<F, D>(mut x: f64, iterations: usize, f: F, df: D) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut fx = f(x);
    for _ in 0..iterations {
        if fx == 0.0 {
            break;
        }
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        let fn_ = f(next);
        if !(fn_.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}
