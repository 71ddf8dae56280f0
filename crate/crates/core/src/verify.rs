//! Built-in oracle suite.
//!
//! Each check compares two independent computations of the same quantity.
//! The inputs that are hardcoded constants elsewhere (character tables, the
//! Taylor switch of `ĥ`) are taken from [`OracleConfig`] so that the suite
//! can be pointed at deliberately broken values.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quad::integrate_pieces;
use crate::reps::{a5_in_s5, restriction_multiplicity, FiniteGroupCharacterTable};
use crate::spectrum::{ClassKind, ConjugacyClassEntry, SpectrumDataset};
use crate::testfn::{TestFunction, DEFAULT_TAYLOR_THRESHOLD};
use crate::tetra::{
    lobachevsky, orthoscheme_volume, orthoscheme_volume_lobachevsky, CoxeterTetrahedron,
};
use crate::trace::{denom, geometric_side};

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub s5: FiniteGroupCharacterTable,
    pub a5: FiniteGroupCharacterTable,
    pub taylor_threshold: f64,
    /// The Klein-model volume integration takes about a second.
    pub include_volume: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            s5: FiniteGroupCharacterTable::s5(),
            a5: FiniteGroupCharacterTable::a5(),
            taylor_threshold: DEFAULT_TAYLOR_THRESHOLD,
            include_volume: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, outcome: std::result::Result<String, String>) -> CheckResult {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Largest deviation of `f(x)` from `g(x)` over `xs`, scaled by `1 + |g|`.
fn max_rel_dev(
    xs: impl IntoIterator<Item = f64>,
    f: impl Fn(f64) -> std::result::Result<f64, String>,
    g: impl Fn(f64) -> std::result::Result<f64, String>,
) -> std::result::Result<(f64, f64), String> {
    let mut worst = (0.0, f64::NAN);
    for x in xs {
        let (a, b) = (f(x)?, g(x)?);
        let dev = (a - b).abs() / (1.0 + b.abs());
        if !(dev <= worst.0) {
            worst = (dev, x);
        }
    }
    Ok(worst)
}

fn fourier_check(threshold: f64) -> std::result::Result<String, String> {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    for &(r, t) in &[(4.0, 0.0), (8.0, 1.3), (8.0, 3.7), (2.5, 6.0)] {
        let tf = TestFunction::new(r, t)
            .map_err(|e| e.to_string())?
            .with_taylor_threshold(threshold);
        let a = tf.base_halfwidth();
        // Include points where a·(s ∓ t) is small but not negligible.
        let mut ss: Vec<f64> = (0..=24).map(|i| i as f64 * 0.5).collect();
        for d in [1e-6, 1e-3, 0.05, 0.3, 0.6] {
            ss.push(t + d / a);
            ss.push((t - d / a).abs());
        }
        let knots = [0.0, 2.0 * a, 4.0 * a];
        let (dev, at) = max_rel_dev(
            ss,
            |s| Ok(tf.fourier(s)),
            |s| {
                let q = integrate_pieces(|x| tf.value(x) * (s * x).cos(), &knots, 1e-14, 1e-13)
                    .map_err(|e| e.to_string())?;
                Ok(2.0 * q.value)
            },
        )?;
        if dev > TOL {
            return Err(format!("R={r}, t={t}: deviation {dev:.3e} at s={at}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("max scaled deviation {worst:.2e} ≤ {TOL:e}"))
}

fn edge_check() -> std::result::Result<String, String> {
    let mut worst = 0.0f64;
    for sym in [(5, 3, 5), (3, 5, 3)] {
        let t = CoxeterTetrahedron::from_symbol(sym.0, sym.1, sym.2).map_err(|e| e.to_string())?;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let k = (0..4).find(|&k| k != i && k != j).expect("four vertices");
                let trig = t.edge_length_from_links(i, j, k).map_err(|e| e.to_string())?;
                worst = worst.max((trig - t.edge_length(i, j)).abs());
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("Gram and trigonometric edge lengths differ by {worst:.3e}"))
    }
}

fn character_check(cfg: &OracleConfig) -> std::result::Result<String, String> {
    cfg.s5.validate().map_err(|e| e.to_string())?;
    cfg.a5.validate().map_err(|e| e.to_string())?;
    let fusion = a5_in_s5();
    for i in 0..cfg.s5.irreps.len() {
        let dim: u32 = (0..cfg.a5.irreps.len())
            .map(|j| {
                restriction_multiplicity(&cfg.s5, &cfg.a5, &fusion, i, j)
                    .map(|m| m * cfg.a5.irreps[j].dimension)
            })
            .sum::<crate::Result<u32>>()
            .map_err(|e| e.to_string())?;
        if dim != cfg.s5.irreps[i].dimension {
            return Err(format!("restriction of {} loses dimension", cfg.s5.irreps[i].name));
        }
    }
    Ok("S5 and A5 orthogonality, restrictions integral".into())
}

fn denominator_check() -> std::result::Result<String, String> {
    let mut worst = 0.0f64;
    for i in 0..40 {
        let l = 0.05 + 0.2 * i as f64;
        let th = -PI + 0.157 * i as f64;
        let d = denom(l, th).map_err(|e| e.to_string())?;
        // |1 - e^{ℓ+iθ}| · |1 - e^{-ℓ-iθ}|
        let m1 = ((1.0 - l.exp() * th.cos()).powi(2) + (l.exp() * th.sin()).powi(2)).sqrt();
        let m2 = ((1.0 - (-l).exp() * th.cos()).powi(2) + ((-l).exp() * th.sin()).powi(2)).sqrt();
        worst = worst.max((d - m1 * m2).abs() / d);
    }
    if worst < 1e-12 {
        Ok(format!("max relative deviation {worst:.2e}"))
    } else {
        Err(format!("denominator identity off by {worst:.3e}"))
    }
}

fn synthetic_check() -> std::result::Result<String, String> {
    // One good geodesic of length 2 with holonomy 0 and an order-2 elliptic
    // class; R = 4, t = 0, so a = 1, H(0) = 16/3, H''(0) = -4, H(2) = 4/3.
    let ds = SpectrumDataset::new(
        "synthetic",
        1.0,
        0,
        4.0,
        vec![
            ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 2.0, 0.0, 2.0),
            ConjugacyClassEntry::elliptic(PI, 1.0, 0.5),
        ],
    )
    .map_err(|e| e.to_string())?;
    let tf = TestFunction::new(4.0, 0.0).map_err(|e| e.to_string())?;
    let got = geometric_side(&ds, &tf).map_err(|e| e.to_string())?.total;
    let c = 2f64.cosh();
    let expect = (16.0 / 3.0 + 4.0) / (2.0 * PI) + 2.0 / (2.0 * (c - 1.0)) * (4.0 / 3.0)
        - 0.5 / 4.0 * (16.0 / 3.0);
    let dev = (got - expect).abs();
    if dev < 1e-13 {
        Ok(format!("geometric side {got} matches hand value"))
    } else {
        Err(format!("geometric side {got}, hand value {expect}"))
    }
}

fn lobachevsky_check() -> std::result::Result<String, String> {
    let (dev, at) = max_rel_dev(
        (1..20).map(|i| i as f64 * 0.15),
        |x| Ok(lobachevsky(x)),
        |x| {
            let mut breaks = vec![0.0];
            if x > PI {
                breaks.push(PI);
            }
            breaks.push(x);
            integrate_pieces(|u| -(2.0 * u.sin()).abs().ln(), &breaks, 1e-13, 1e-13)
                .map(|q| q.value)
                .map_err(|e| e.to_string())
        },
    )?;
    if dev < 1e-10 {
        Ok(format!("max deviation {dev:.2e}"))
    } else {
        Err(format!("Л deviates by {dev:.3e} at θ = {at}"))
    }
}

fn volume_check() -> std::result::Result<String, String> {
    let mut out = Vec::new();
    for sym in [(5, 3, 5), (3, 5, 3)] {
        let t = CoxeterTetrahedron::from_symbol(sym.0, sym.1, sym.2).map_err(|e| e.to_string())?;
        let v = orthoscheme_volume(&t).map_err(|e| e.to_string())?;
        let c = orthoscheme_volume_lobachevsky(&t).map_err(|e| e.to_string())?;
        if (v - c).abs() > 1e-5 {
            return Err(format!("{}: integration {v}, closed form {c}", t.symbol()));
        }
        out.push(format!("{} {v:.9}", t.symbol()));
    }
    Ok(out.join(", "))
}

/// Runs every oracle check.
pub fn run_oracles(cfg: &OracleConfig) -> VerifyReport {
    let mut checks = vec![
        check("fourier-vs-quadrature", fourier_check(cfg.taylor_threshold)),
        check("edge-lengths-gram-vs-trig", edge_check()),
        check("character-orthogonality", character_check(cfg)),
        check("denominator-identity", denominator_check()),
        check("synthetic-hand-values", synthetic_check()),
        check("lobachevsky-vs-quadrature", lobachevsky_check()),
    ];
    if cfg.include_volume {
        checks.push(check("volume-integration-vs-closed-form", volume_check()));
    }
    VerifyReport { checks }
}
