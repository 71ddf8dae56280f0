//! Orthoscheme volumes.
//!
//! The reference value integrates the Klein-model volume density
//! `(1 - |x|²)⁻²` over the straight simplex spanned by the vertices. The
//! classical closed form in terms of the Lobachevsky function serves as a
//! cross-check.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use super::CoxeterTetrahedron;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// `ζ(2k)` for `k ≥ 1`.
fn zeta_even(k: u32) -> f64 {
    let pi2 = PI * PI;
    match k {
        1 => pi2 / 6.0,
        2 => pi2 * pi2 / 90.0,
        3 => pi2 * pi2 * pi2 / 945.0,
        4 => pi2 * pi2 * pi2 * pi2 / 9450.0,
        _ => {
            let s = -(2.0 * k as f64);
            (1..=64).rev().map(|n| (n as f64).powf(s)).sum()
        }
    }
}

/// Clausen function `Cl₂(x)` for `|x| ≤ π`.
fn clausen_reduced(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let r = x / (2.0 * PI);
    let r2 = r * r;
    let mut term_pow = x;
    let mut sum = x - x * x.abs().ln();
    for k in 1..=60u32 {
        term_pow *= r2;
        let kf = k as f64;
        let term = zeta_even(k) / (kf * (2.0 * kf + 1.0)) * term_pow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Lobachevsky function `Л(θ) = -∫₀^θ log|2 sin u| du`.
///
/// Odd and `π`-periodic. Evaluated as `Cl₂(2θ)/2` after reduction to
/// `(-π/2, π/2]`, using the power series of `Cl₂` about the origin.
pub fn lobachevsky(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(PI);
    if t > FRAC_PI_2 {
        t -= PI;
    }
    0.5 * clausen_reduced(2.0 * t)
}

/// Volume of the orthoscheme from the closed formula in terms of `Л`.
pub fn orthoscheme_volume_lobachevsky(tet: &CoxeterTetrahedron) -> Result<f64> {
    let s = tet.symbol();
    let (a, b, c) = (PI / s.p as f64, PI / s.q as f64, PI / s.r as f64);
    let disc = b.cos().powi(2) - (a.sin() * c.sin()).powi(2);
    if disc <= 0.0 {
        return Err(Error::Numerical(format!("{s} is not a compact orthoscheme")));
    }
    let delta = (disc.sqrt() / (a.cos() * c.cos())).atan();
    let l = lobachevsky;
    Ok(0.25
        * (l(a + delta) - l(a - delta) + l(c + delta) - l(c - delta) - l(FRAC_PI_2 - b + delta)
            + l(FRAC_PI_2 - b - delta)
            + 2.0 * l(FRAC_PI_2 - delta)))
}

/// Volume of the orthoscheme by numerical integration in the Klein model,
/// to an absolute error well below `1e-5`.
pub fn orthoscheme_volume(tet: &CoxeterTetrahedron) -> Result<f64> {
    let v = tet.klein_vertices()?;
    let edge = |i: usize| [v[i][0] - v[0][0], v[i][1] - v[0][1], v[i][2] - v[0][2]];
    let (e1, e2, e3) = (edge(1), edge(2), edge(3));
    let jac = (e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) - e1[1] * (e2[0] * e3[2] - e2[2] * e3[0])
        + e1[2] * (e2[0] * e3[1] - e2[1] * e3[0]))
        .abs();
    let density = |u: f64, w: f64, z: f64| {
        let mut r2 = 0.0;
        for k in 0..3 {
            let x = v[0][k] + u * e1[k] + w * e2[k] + z * e3[k];
            r2 += x * x;
        }
        let d = 1.0 - r2;
        1.0 / (d * d)
    };

    let failed = Cell::new(None::<Error>);
    let record = |e: Error| {
        let prev = failed.take();
        failed.set(prev.or(Some(e)));
        0.0
    };
    let tol = 1e-11;
    let inner = |u: f64, w: f64| {
        let top = 1.0 - u - w;
        if top <= 0.0 {
            return 0.0;
        }
        integrate(|z| density(u, w, z), 0.0, top, tol, tol).map_or_else(record, |r| r.value)
    };
    let middle = |u: f64| {
        let top = 1.0 - u;
        if top <= 0.0 {
            return 0.0;
        }
        integrate(|w| inner(u, w), 0.0, top, tol, tol).map_or_else(record, |r| r.value)
    };
    let outer = integrate(middle, 0.0, 1.0, 1e-10, 1e-10);
    if let Some(err) = failed.take() {
        return Err(Error::Numerical(format!("volume integration did not converge: {err}")));
    }
    let outer = outer.map_err(|e| Error::Numerical(format!("volume integration: {e}")))?;
    if outer.error > 1e-6 {
        return Err(Error::Numerical(format!(
            "volume integration error estimate {} too large",
            outer.error
        )));
    }
    Ok(jac * outer.value)
}
