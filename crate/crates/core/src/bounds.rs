//! Multiplicity bounds and the certificates drawn from them.
//!
//! Rearranging the trace formula for the test function `H = H_{R,t}` gives
//!
//! ```text
//! Σ_j Ĥ(t_j) = 2·(geometric side) − (b₁ − 1)·Ĥ(0).
//! ```
//!
//! Every summand on the left is nonnegative, so the multiplicity of `t²` as
//! a coexact eigenvalue is at most
//!
//! ```text
//! J_{R,t} = [2·(geometric side) − (b₁ − 1)·Ĥ(0)] / Ĥ(t),
//! ```
//!
//! provided the class list is complete up to `R`. A negative `J` therefore
//! proves that the input data is inconsistent.
//!
//! When every eigenvalue is known to have multiplicity at least `m` (the
//! *granularity*), `J < m` at `t` excludes `t²` from the spectrum.
//! Exclusions are read off a sampled curve and are labelled as such.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::spectrum::SpectrumDataset;
use crate::testfn::{TestFunction, FAMILY_ID};
use crate::trace::geometric_side;

/// Label stamped on every certificate derived from a sampled curve.
pub const SAMPLING_NOTE: &str = "grid-sampled, not interval-verified";

/// Spectral gap above which the analytic L-space criterion applies.
pub const LSPACE_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JBound {
    /// `2·(geometric side) − (b₁ − 1)·Ĥ(0)`, an upper bound for `Σ_j Ĥ(t_j)`.
    pub numerator: f64,
    /// `Ĥ(t)`.
    pub denominator: f64,
    pub value: f64,
}

/// Evaluates `J_{R,t}` together with its numerator and denominator.
pub fn j_bound_parts(ds: &SpectrumDataset, support_radius: f64, t: f64) -> Result<JBound> {
    if support_radius > ds.cutoff() {
        return Err(Error::SupportExceedsCutoff {
            support: support_radius,
            cutoff: ds.cutoff(),
        });
    }
    let tf = TestFunction::new(support_radius, t)?;
    let geometric = geometric_side(ds, &tf)?;
    let betti_term = (ds.betti1() as f64 - 1.0) * tf.fourier(0.0);
    let numerator = 2.0 * geometric.total - betti_term;
    let denominator = tf.fourier(t);
    // ĥ(0) > 0 makes Ĥ(t) ≥ ĥ(0)/2 > 0 for this family.
    assert!(denominator > 0.0, "Ĥ(t) must be positive, got {denominator}");
    Ok(JBound {
        numerator,
        denominator,
        value: numerator / denominator,
    })
}

/// `J_{R,t}` for the dataset.
pub fn j_bound(ds: &SpectrumDataset, support_radius: f64, t: f64) -> Result<f64> {
    Ok(j_bound_parts(ds, support_radius, t)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub j: f64,
}

/// Sampled `t ↦ J_{R,t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub dataset_name: String,
    pub dataset_fingerprint: String,
    #[serde(rename = "R")]
    pub support_radius: f64,
    pub step: f64,
    /// Minimum admissible eigenvalue multiplicity assumed when reading the
    /// curve; 1 unless set by the caller.
    pub granularity: u32,
    pub grid: Vec<Sample>,
}

/// Grid points `t_min + i·step` up to `t_max`, with `t_max` appended when it
/// is not itself a grid point.
pub fn grid_points(t_min: f64, t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_min >= 0.0) || !(t_max >= t_min) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ t_min ≤ t_max, got [{t_min}, {t_max}]"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let n = ((t_max - t_min) / step + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=n).map(|i| t_min + i as f64 * step).collect();
    let last = *points.last().expect("nonempty");
    if t_max - last > 1e-12 * t_max.max(1.0) {
        points.push(t_max);
    }
    Ok(points)
}

/// Samples `J_{R,t}` on the closed grid `[t_min, t_max]`.
///
/// Samples are computed in parallel on the current rayon pool; each is a
/// pure function of its inputs, so the result does not depend on the number
/// of threads.
pub fn scan(
    ds: &SpectrumDataset,
    support_radius: f64,
    t_min: f64,
    t_max: f64,
    step: f64,
) -> Result<BoundCurve> {
    let points = grid_points(t_min, t_max, step)?;
    let grid = points
        .par_iter()
        .map(|&t| j_bound(ds, support_radius, t).map(|j| Sample { t, j }))
        .collect::<Result<Vec<_>>>()?;
    if let Some(s) = grid.iter().find(|s| !s.j.is_finite()) {
        return Err(Error::Numerical(format!("J is not finite at t = {}", s.t)));
    }
    Ok(BoundCurve {
        dataset_name: ds.name().to_string(),
        dataset_fingerprint: ds.fingerprint(),
        support_radius,
        step,
        granularity: 1,
        grid,
    })
}

impl BoundCurve {
    pub fn with_granularity(mut self, granularity: u32) -> Self {
        self.granularity = granularity;
        self
    }

    /// Samples with negative `J`, which indicate inconsistent input data.
    pub fn negative_samples(&self) -> impl Iterator<Item = &Sample> {
        self.grid.iter().filter(|s| s.j < 0.0)
    }

    /// `t,j` table at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,j\n");
        for s in &self.grid {
            let _ = writeln!(out, "{},{}", format_sig(s.t, 12), format_sig(s.j, 12));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json_str(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// A gnuplot script drawing the curve from the CSV next to it.
    pub fn plot_script(&self, csv_file: &str) -> String {
        let (lo, hi) = match (self.grid.first(), self.grid.last()) {
            (Some(a), Some(b)) => (a.t, b.t),
            _ => (0.0, 1.0),
        };
        format!(
            "set datafile separator ','\n\
             set key off\n\
             set xlabel 't'\n\
             set ylabel 'J_{{{r},t}}'\n\
             set title 'J_{{{r},t}}({name})'\n\
             set xrange [{lo}:{hi}]\n\
             set grid\n\
             plot '{csv_file}' using 1:2 every ::1 with lines lw 2\n",
            r = format_sig(self.support_radius, 12),
            name = self.dataset_name,
            lo = format_sig(lo, 12),
            hi = format_sig(hi, 12),
        )
    }
}

/// Parses the `t,j` CSV written by [`BoundCurve::to_csv`].
pub fn parse_curve_csv(text: &str) -> Result<Vec<Sample>> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("t,j") => {}
        other => return Err(Error::Parse(format!("expected header `t,j`, found {other:?}"))),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let (t, j) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("row {}: expected two columns", i + 1)))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: bad number `{v}`", i + 1)))
            };
            Ok(Sample {
                t: parse(t)?,
                j: parse(j)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    EigenvalueExclusion,
    LambdaOneLowerBound,
    LSpaceVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statement {
    pub dataset_name: String,
    pub dataset_fingerprint: String,
    #[serde(rename = "R")]
    pub support_radius: f64,
    pub test_function_family: String,
    /// Granularity `m`: the curve is compared against `J < m`.
    pub threshold: u32,
    pub grid_start: f64,
    pub grid_step: f64,
    pub t_limit: f64,
    /// Largest examined `t` such that `J < m` at every sample in
    /// `[grid_start, t_star]`.
    pub t_star: f64,
    /// First sample above `t_star` with `J ≥ m`, if one was examined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<f64>,
    /// Width of the bracketing interval after bisection, when refined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refined_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_lower_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lspace_criterion_satisfied: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub sampling: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub statement: Statement,
}

impl Certificate {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.statement.notes.push(note.into());
        self
    }
}

/// Finds the longest initial stretch of the curve, up to `t_limit`, on
/// which `J < m`.
///
/// Refuses when any examined sample has `J < 0` (inconsistent data) or when
/// the very first sample already has `J ≥ m`.
pub fn certify_exclusion(curve: &BoundCurve, m: u32, t_limit: f64) -> Result<Certificate> {
    if m == 0 {
        return Err(Error::InvalidArgument("granularity must be at least 1".into()));
    }
    let (first, last) = match (curve.grid.first(), curve.grid.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => return Err(Error::InvalidArgument("curve has no samples".into())),
    };
    if t_limit < first || t_limit > last {
        return Err(Error::InvalidArgument(format!(
            "t_limit {t_limit} outside the sampled range [{first}, {last}]"
        )));
    }
    let examined: Vec<&Sample> = curve.grid.iter().take_while(|s| s.t <= t_limit).collect();
    if let Some(s) = examined.iter().find(|s| s.j < 0.0) {
        return Err(Error::Refused(format!(
            "J = {} < 0 at t = {}: the class data or volume is inconsistent",
            s.j, s.t
        )));
    }
    let threshold = m as f64;
    let prefix = examined.iter().take_while(|s| s.j < threshold).count();
    if prefix == 0 {
        return Err(Error::Refused(format!(
            "J = {} ≥ {m} already at the first sample t = {first}",
            examined[0].j
        )));
    }
    let t_star = examined[prefix - 1].t;
    let first_failure = examined.get(prefix).map(|s| s.t);
    Ok(Certificate {
        kind: CertificateKind::EigenvalueExclusion,
        statement: Statement {
            dataset_name: curve.dataset_name.clone(),
            dataset_fingerprint: curve.dataset_fingerprint.clone(),
            support_radius: curve.support_radius,
            test_function_family: FAMILY_ID.to_string(),
            threshold: m,
            grid_start: first,
            grid_step: curve.step,
            t_limit,
            t_star,
            first_failure,
            refined_step: None,
            lambda_lower_bound: None,
            lspace_criterion_satisfied: None,
            margin: None,
            sampling: SAMPLING_NOTE.to_string(),
            notes: vec![format!(
                "no eigenvalue t² with t in [{}, {}] has multiplicity ≥ {m} at the sampled points",
                format_sig(first, 12),
                format_sig(t_star, 12)
            )],
        },
    })
}

/// Tightens an exclusion certificate by bisecting between `t_star` and the
/// first failing sample until the bracket is at most `tolerance` wide.
///
/// Assumes a single crossing of `J = m` inside the bracket; the result is
/// still sample-based.
pub fn refine_exclusion(
    ds: &SpectrumDataset,
    cert: &Certificate,
    tolerance: f64,
) -> Result<Certificate> {
    if cert.kind != CertificateKind::EigenvalueExclusion {
        return Err(Error::InvalidArgument("only exclusion certificates can be refined".into()));
    }
    if ds.fingerprint() != cert.statement.dataset_fingerprint {
        return Err(Error::InvalidArgument("dataset does not match the certificate".into()));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let Some(mut hi) = cert.statement.first_failure else {
        return Ok(cert.clone());
    };
    let r = cert.statement.support_radius;
    let m = cert.statement.threshold as f64;
    let mut lo = cert.statement.t_star;
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let j = j_bound(ds, r, mid)?;
        if j < 0.0 {
            return Err(Error::Refused(format!("J = {j} < 0 at t = {mid}")));
        }
        if j < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut out = cert.clone();
    out.statement.t_star = lo;
    out.statement.first_failure = Some(hi);
    out.statement.refined_step = Some(hi - lo);
    out.statement
        .notes
        .push(format!("refined by bisection to a bracket of width {:e}", hi - lo));
    Ok(out)
}

/// Turns an exclusion starting at `t = 0` into a lower bound `λ₁* > t_star²`.
pub fn lambda_one_bound(cert: &Certificate) -> Result<Certificate> {
    if cert.kind != CertificateKind::EigenvalueExclusion {
        return Err(Error::InvalidArgument(format!(
            "expected an exclusion certificate, got {:?}",
            cert.kind
        )));
    }
    if cert.statement.grid_start != 0.0 {
        return Err(Error::Refused(format!(
            "exclusion starts at t = {}, so small eigenvalues were not examined",
            cert.statement.grid_start
        )));
    }
    let mut out = cert.clone();
    out.kind = CertificateKind::LambdaOneLowerBound;
    let bound = cert.statement.t_star * cert.statement.t_star;
    out.statement.lambda_lower_bound = Some(bound);
    out.statement.notes.push(format!(
        "given that every coexact eigenvalue has multiplicity ≥ {}, λ₁* > {}",
        cert.statement.threshold,
        format_sig(bound, 12)
    ));
    Ok(out)
}

/// Checks the analytic L-space criterion `λ₁* > 2`.
pub fn lspace_verdict(cert: &Certificate) -> Result<Certificate> {
    if cert.kind != CertificateKind::LambdaOneLowerBound {
        return Err(Error::InvalidArgument(format!(
            "expected a λ₁* lower-bound certificate, got {:?}",
            cert.kind
        )));
    }
    let bound = cert
        .statement
        .lambda_lower_bound
        .ok_or_else(|| Error::InvalidArgument("certificate carries no λ₁* bound".into()))?;
    let satisfied = bound > LSPACE_THRESHOLD;
    let mut out = cert.clone();
    out.kind = CertificateKind::LSpaceVerdict;
    out.statement.lspace_criterion_satisfied = Some(satisfied);
    out.statement.margin = Some(bound - LSPACE_THRESHOLD);
    out.statement.notes.push(if satisfied {
        "L-space criterion satisfied (λ₁* > 2)".to_string()
    } else {
        "L-space criterion not satisfied by this bound".to_string()
    });
    Ok(out)
}
