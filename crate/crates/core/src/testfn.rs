//! The admissible test-function family.
//!
//! Every member has the form `H(x) = h(x) · cos(t·x)` where `h` is the
//! four-fold self-convolution of the indicator of `[-a, a]` and `a = R/4`.
//! Thus `h` is a cubic B-spline supported on `[-R, R]` with knots at
//! `{-4a, -2a, 0, 2a, 4a}`, and
//!
//! ```text
//! h(0)   = 16 a³ / 3
//! h''(0) = -4 a
//! ĥ(s)   = 16 sin⁴(a s) / s⁴            (= 16 a⁴ at s = 0)
//! Ĥ(s)   = (ĥ(s - t) + ĥ(s + t)) / 2
//! ```
//!
//! with the Fourier convention `Ĥ(s) = ∫ H(x) e^{isx} dx`. Since `ĥ ≥ 0`,
//! every `Ĥ` is nonnegative, which is what makes the multiplicity bound
//! one-sided.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier recorded in certificates for this family.
pub const FAMILY_ID: &str = "bspline4-cos";

/// Below this value of `|a·u|` the transform switches to its Taylor series.
pub const DEFAULT_TAYLOR_THRESHOLD: f64 = 1e-4;

/// Anything the trace-formula evaluator can use as a test function.
pub trait Kernel {
    /// `R` such that `H(x) = 0` for `|x| ≥ R`.
    fn support_radius(&self) -> f64;
    /// `H(x)`.
    fn value(&self, x: f64) -> f64;
    /// `Ĥ(s) = ∫ H(x) e^{isx} dx`.
    fn fourier(&self, s: f64) -> f64;
    /// `(H(0), H''(0))`.
    fn at_zero(&self) -> (f64, f64);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    support_radius: f64,
    center: f64,
    base_halfwidth: f64,
    #[serde(skip, default = "default_threshold")]
    taylor_threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_TAYLOR_THRESHOLD
}

impl TestFunction {
    /// Builds `H_{R,t}`; `R` must be positive and `t` nonnegative.
    pub fn new(support_radius: f64, center: f64) -> Result<Self> {
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        if !(center >= 0.0) || !center.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "center must be nonnegative, got {center}"
            )));
        }
        Ok(Self {
            support_radius,
            center,
            base_halfwidth: support_radius / 4.0,
            taylor_threshold: DEFAULT_TAYLOR_THRESHOLD,
        })
    }

    /// Overrides the Taylor switchover point of the transform. Only useful
    /// for sensitivity checks of the oracle suite.
    pub fn with_taylor_threshold(mut self, threshold: f64) -> Self {
        self.taylor_threshold = threshold;
        self
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn base_halfwidth(&self) -> f64 {
        self.base_halfwidth
    }

    /// The B-spline `h(x)` without the cosine modulation.
    pub fn base_value(&self, x: f64) -> f64 {
        let a = self.base_halfwidth;
        let u = x.abs() / (2.0 * a);
        let scale = 8.0 * a * a * a;
        if u >= 2.0 {
            0.0
        } else if u <= 1.0 {
            scale * (2.0 / 3.0 - u * u + 0.5 * u * u * u)
        } else {
            let w = 2.0 - u;
            scale * w * w * w / 6.0
        }
    }

    /// `ĥ(u) = 16 sin⁴(a u) / u⁴`.
    pub fn base_fourier(&self, u: f64) -> f64 {
        let a = self.base_halfwidth;
        let z = a * u;
        let a4 = 16.0 * a.powi(4);
        if z.abs() < self.taylor_threshold {
            let y = z * z;
            a4 * (1.0 - y * (2.0 / 3.0 - y * (1.0 / 5.0 - y * 34.0 / 945.0)))
        } else {
            let sinc = z.sin() / z;
            let s2 = sinc * sinc;
            a4 * s2 * s2
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x.abs() >= self.support_radius {
            return 0.0;
        }
        self.base_value(x) * (self.center * x).cos()
    }

    pub fn fourier(&self, s: f64) -> f64 {
        0.5 * (self.base_fourier(s - self.center) + self.base_fourier(s + self.center))
    }

    /// `(H(0), H''(0)) = (h(0), h''(0) - t² h(0))`.
    pub fn at_zero(&self) -> (f64, f64) {
        let a = self.base_halfwidth;
        let h0 = 16.0 * a * a * a / 3.0;
        let h2 = -4.0 * a;
        (h0, h2 - self.center * self.center * h0)
    }
}

impl Kernel for TestFunction {
    fn support_radius(&self) -> f64 {
        self.support_radius
    }

    fn value(&self, x: f64) -> f64 {
        TestFunction::value(self, x)
    }

    fn fourier(&self, s: f64) -> f64 {
        TestFunction::fourier(self, s)
    }

    fn at_zero(&self) -> (f64, f64) {
        TestFunction::at_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    // ∫ H(x) e^{isx} dx = 2 ∫_0^R h(x) cos(tx) cos(sx) dx, split at the knots.
    fn fourier_by_quadrature(tf: &TestFunction, s: f64) -> f64 {
        let a = tf.base_halfwidth();
        let knots = [0.0, a, 2.0 * a, 3.0 * a, 4.0 * a];
        let f = |x: f64| tf.value(x) * (s * x).cos();
        2.0 * quad::integrate_pieces(f, &knots, 1e-13, 1e-13).unwrap().value
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TestFunction::new(0.0, 1.0).is_err());
        assert!(TestFunction::new(-1.0, 1.0).is_err());
        assert!(TestFunction::new(4.0, -0.1).is_err());
        assert!(TestFunction::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn unit_halfwidth_values() {
        let tf = TestFunction::new(4.0, 0.0).unwrap();
        assert_eq!(tf.base_halfwidth(), 1.0);
        assert!((tf.value(0.0) - 16.0 / 3.0).abs() < 1e-15);
        assert!((tf.fourier(0.0) - 16.0).abs() < 1e-15);
        assert!(tf.fourier(PI).abs() < 1e-30);
        assert_eq!(tf.at_zero(), (16.0 / 3.0, -4.0));
    }

    #[test]
    fn base_value_at_zero_by_direct_integration() {
        // h(0) = ∫ (f*f)(y)² dy with f*f the triangle (2a - |y|)_+ .
        let a = 1.7;
        let tf = TestFunction::new(4.0 * a, 0.0).unwrap();
        let tri = |y: f64| (2.0 * a - y.abs()).max(0.0);
        let direct = quad::integrate_pieces(|y| tri(y) * tri(y), &[-2.0 * a, 0.0, 2.0 * a], 1e-14, 0.0)
            .unwrap()
            .value;
        assert!((tf.base_value(0.0) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn curvature_with_modulation() {
        let tf = TestFunction::new(4.0, 2.0).unwrap();
        let (h0, h2) = tf.at_zero();
        assert_eq!(h0, 16.0 / 3.0);
        assert!((h2 - (-4.0 - 4.0 * 16.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn curvature_matches_finite_differences() {
        for &(r, t) in &[(4.0, 0.0), (4.0, 2.0), (8.0, 1.41), (1.3, 7.0)] {
            let tf = TestFunction::new(r, t).unwrap();
            // h has a |x|³ term at the origin, so the central difference is
            // only first order; one Richardson step removes it.
            let d2 = |step: f64| (tf.value(step) - 2.0 * tf.value(0.0) + tf.value(-step)) / (step * step);
            let step = 1e-4;
            let fd = 2.0 * d2(step / 2.0) - d2(step);
            let (_, h2) = tf.at_zero();
            assert!((fd - h2).abs() <= 1e-6 * h2.abs(), "R={r} t={t}: fd {fd} vs {h2}");
            assert!(h2 < 0.0);
        }
    }

    #[test]
    fn support_and_evenness() {
        let tf = TestFunction::new(3.0, 1.7).unwrap();
        for &x in &[3.0, -3.0, 3.5, 100.0] {
            assert_eq!(tf.value(x), 0.0);
        }
        for i in 0..200 {
            let x = -3.2 + 0.032 * i as f64;
            assert_eq!(tf.value(x), tf.value(-x));
        }
    }

    #[test]
    fn spline_is_continuous_at_knots() {
        let tf = TestFunction::new(4.0, 0.0).unwrap();
        for &k in &[2.0f64, 4.0] {
            let eps = 1e-9;
            assert!((tf.base_value(k - eps) - tf.base_value(k + eps)).abs() < 1e-7);
        }
    }

    #[test]
    fn taylor_branch_matches_direct_formula() {
        // At |a u| = 0.01 the direct sinc is still accurate to ~1e-16, so the
        // truncated series must agree to its own truncation order (z⁸ ~ 1e-16).
        let tf = TestFunction::new(4.0, 0.0).unwrap();
        let series = tf.with_taylor_threshold(0.02);
        for &u in &[0.01, -0.01, 0.005, 1e-5] {
            let d = tf.base_fourier(u);
            let s = series.base_fourier(u);
            assert!((d - s).abs() <= 1e-15 * d, "u={u}: {d} vs {s}");
        }
    }

    #[test]
    fn transform_peaks_at_center() {
        let tf = TestFunction::new(8.0, 1.4).unwrap();
        let a = tf.base_halfwidth();
        assert!(tf.fourier(1.4) >= 8.0 * a.powi(4));
    }

    #[test]
    fn plancherel_type_identity() {
        // h(0) = (1/2π) ∫ ĥ(s) ds. Truncation at |s| ≤ 10⁴/a leaves a tail
        // of order 16/(3·10¹²·a^{-3}) relative to h(0), below 1e-6.
        let tf = TestFunction::new(2.0, 0.0).unwrap();
        let a = tf.base_halfwidth();
        let limit = 1e4 / a;
        let n = 4000;
        let step = limit / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let lo = i as f64 * step;
            total += quad::integrate(|s| tf.base_fourier(s), lo, lo + step, 1e-14, 1e-12)
                .unwrap()
                .value;
        }
        let recovered = 2.0 * total / (2.0 * PI);
        let h0 = tf.base_value(0.0);
        assert!((recovered - h0).abs() <= 1e-6 * h0, "{recovered} vs {h0}");
    }

    #[test]
    fn nonnegative_on_dense_grid() {
        let tf = TestFunction::new(8.0, 3.3).unwrap();
        let n = 100_000;
        let min = (0..=n)
            .map(|i| tf.fourier(-100.0 + 200.0 * i as f64 / n as f64))
            .fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-15);
    }

    proptest! {
        #[test]
        fn fourier_matches_quadrature(r in 0.5f64..10.0, t in 0.0f64..10.0, s in -20.0f64..20.0) {
            let tf = TestFunction::new(r, t).unwrap();
            let closed = tf.fourier(s);
            let numeric = fourier_by_quadrature(&tf, s);
            prop_assert!((closed - numeric).abs() <= 1e-8 * (1.0 + closed.abs()),
                "R={} t={} s={}: {} vs {}", r, t, s, closed, numeric);
        }

        #[test]
        fn fourier_is_even_and_nonnegative(r in 0.1f64..20.0, t in 0.0f64..20.0, s in -50.0f64..50.0) {
            let tf = TestFunction::new(r, t).unwrap();
            prop_assert!(tf.fourier(s) >= 0.0);
            prop_assert_eq!(tf.fourier(s), tf.fourier(-s));
        }
    }
}
