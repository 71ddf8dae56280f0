//! Conjugacy-class data for the geometric side of the trace formula.
//!
//! A [`SpectrumDataset`] carries the orbifold metadata (volume, first Betti
//! number, completeness cutoff) and one [`ConjugacyClassEntry`] per distinct
//! summand. Datasets are validated and normalized on construction and are
//! immutable afterwards.
//!
//! Since only `cos(hol)` enters the formula, a class and its inverse always
//! contribute equally. A record with `inverse_paired = true` stands for two
//! classes `{[γ], [γ⁻¹]}` and is counted twice.

mod snappy;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use snappy::{parse_snappy_text, SnappyImport};

/// Tolerance used when deciding whether two records describe the same class.
pub const MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    #[serde(rename = "elliptic")]
    Elliptic,
    #[serde(rename = "good")]
    GoodHyperbolic,
    #[serde(rename = "bad")]
    BadHyperbolic,
}

impl ClassKind {
    pub const ALL: [ClassKind; 3] = [
        ClassKind::Elliptic,
        ClassKind::GoodHyperbolic,
        ClassKind::BadHyperbolic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Elliptic => "elliptic",
            ClassKind::GoodHyperbolic => "good",
            ClassKind::BadHyperbolic => "bad",
        }
    }
}

/// One summand of the geometric side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyClassEntry {
    pub kind: ClassKind,
    /// Translation length; zero exactly for elliptic classes.
    pub length: f64,
    /// Rotation part of the complex length, in `(-π, π]` once normalized.
    pub holonomy: f64,
    /// Covolume of the centralizer. For good hyperbolics this is the
    /// primitive length.
    pub weight: f64,
    /// 1/2 for order-2 elliptics, 1 otherwise.
    pub torsion: f64,
    pub multiplicity: u32,
    pub inverse_paired: bool,
}

impl ConjugacyClassEntry {
    pub fn elliptic(holonomy: f64, weight: f64, torsion: f64) -> Self {
        Self {
            kind: ClassKind::Elliptic,
            length: 0.0,
            holonomy,
            weight,
            torsion,
            multiplicity: 1,
            inverse_paired: false,
        }
    }

    pub fn hyperbolic(kind: ClassKind, length: f64, holonomy: f64, weight: f64) -> Self {
        Self {
            kind,
            length,
            holonomy,
            weight,
            torsion: 1.0,
            multiplicity: 1,
            inverse_paired: false,
        }
    }

    pub fn with_multiplicity(mut self, multiplicity: u32) -> Self {
        self.multiplicity = multiplicity;
        self
    }

    pub fn paired(mut self, inverse_paired: bool) -> Self {
        self.inverse_paired = inverse_paired;
        self
    }

    /// Number of conjugacy classes this record stands for.
    pub fn class_count(&self) -> u64 {
        self.multiplicity as u64 * if self.inverse_paired { 2 } else { 1 }
    }

    /// Checks the per-entry invariants. Holonomy is expected to be wrapped.
    pub fn validate(&self, cutoff: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(msg));
        if !self.length.is_finite() || self.length < 0.0 {
            return bad(format!("length {} must be finite and nonnegative", self.length));
        }
        if !self.holonomy.is_finite() || self.holonomy <= -PI || self.holonomy > PI {
            return bad(format!("holonomy {} outside (-π, π]", self.holonomy));
        }
        match self.kind {
            ClassKind::Elliptic => {
                if self.length != 0.0 {
                    return bad(format!("elliptic entry has nonzero length {}", self.length));
                }
                if self.holonomy.abs() < MERGE_TOLERANCE {
                    return bad("elliptic entry has zero holonomy".into());
                }
            }
            _ => {
                if self.length <= 0.0 {
                    return bad(format!("{} entry has zero length", self.kind.as_str()));
                }
            }
        }
        if self.length > cutoff {
            return bad(format!("length {} exceeds cutoff {cutoff}", self.length));
        }
        if !(self.weight > 0.0) || !self.weight.is_finite() {
            return bad(format!("weight {} must be positive", self.weight));
        }
        if self.torsion == 0.5 {
            if self.kind != ClassKind::Elliptic || (self.holonomy - PI).abs() > MERGE_TOLERANCE {
                return bad("torsion 1/2 is reserved for order-2 elliptic entries".into());
            }
        } else if self.torsion != 1.0 {
            return bad(format!("torsion {} must be 0.5 or 1", self.torsion));
        }
        if self.multiplicity == 0 {
            return bad("multiplicity must be at least 1".into());
        }
        Ok(())
    }

    fn same_class(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.torsion == other.torsion
            && self.inverse_paired == other.inverse_paired
            && (self.length - other.length).abs() <= MERGE_TOLERANCE
            && (self.holonomy - other.holonomy).abs() <= MERGE_TOLERANCE
            && (self.weight - other.weight).abs() <= MERGE_TOLERANCE * self.weight.max(1.0)
    }
}

/// A primitive closed geodesic as listed by length-spectrum software.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveGeodesicRecord {
    pub length: f64,
    pub holonomy: f64,
    pub multiplicity: u32,
    pub self_inverse: bool,
}

/// Wraps an angle into `(-π, π]`.
///
/// Angles already in range are returned unchanged. Reduced values that land
/// within `1e-12` of `-π` are snapped to `π`.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut r = theta.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    if r <= -PI + 1e-12 {
        PI
    } else {
        r
    }
}

/// Expands primitive geodesics into their powers `γ₀ᵏ` with `k·ℓ₀ ≤ cutoff`.
pub fn expand_primitives(
    records: &[PrimitiveGeodesicRecord],
    cutoff: f64,
) -> Result<Vec<ConjugacyClassEntry>> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    let mut out = Vec::new();
    for rec in records {
        if !(rec.length > 0.0) || !rec.length.is_finite() {
            return Err(Error::Validation(format!(
                "primitive geodesic length {} must be positive",
                rec.length
            )));
        }
        if rec.multiplicity == 0 {
            return Err(Error::Validation("primitive geodesic multiplicity must be at least 1".into()));
        }
        let mut k = 1u32;
        loop {
            let length = k as f64 * rec.length;
            if length > cutoff {
                break;
            }
            out.push(ConjugacyClassEntry {
                kind: ClassKind::GoodHyperbolic,
                length,
                holonomy: wrap_angle(k as f64 * rec.holonomy),
                weight: rec.length,
                torsion: 1.0,
                multiplicity: rec.multiplicity,
                inverse_paired: !rec.self_inverse,
            });
            k += 1;
        }
    }
    Ok(out)
}

fn entry_order(a: &ConjugacyClassEntry, b: &ConjugacyClassEntry) -> Ordering {
    a.length
        .total_cmp(&b.length)
        .then(a.holonomy.total_cmp(&b.holonomy))
        .then(a.kind.cmp(&b.kind))
        .then(a.weight.total_cmp(&b.weight))
        .then(a.torsion.total_cmp(&b.torsion))
        .then(a.inverse_paired.cmp(&b.inverse_paired))
}

/// Wraps holonomies, validates, sorts by `(length, holonomy)` and merges
/// duplicates into their multiplicity.
pub fn normalize_classes(
    classes: Vec<ConjugacyClassEntry>,
    cutoff: f64,
) -> Result<Vec<ConjugacyClassEntry>> {
    let mut classes: Vec<_> = classes
        .into_iter()
        .map(|mut e| {
            e.holonomy = wrap_angle(e.holonomy);
            e
        })
        .collect();
    for (i, e) in classes.iter().enumerate() {
        e.validate(cutoff)
            .map_err(|err| Error::Validation(format!("class #{i}: {err}")))?;
    }
    classes.sort_by(entry_order);

    let mut merged: Vec<ConjugacyClassEntry> = Vec::with_capacity(classes.len());
    for e in classes {
        let target = merged
            .iter_mut()
            .rev()
            .take_while(|m| m.length >= e.length - MERGE_TOLERANCE)
            .find(|m| m.same_class(&e));
        match target {
            Some(m) => {
                m.multiplicity = m.multiplicity.checked_add(e.multiplicity).ok_or_else(|| {
                    Error::Validation("merged multiplicity overflows u32".into())
                })?
            }
            None => merged.push(e),
        }
    }
    Ok(merged)
}

/// Orbifold metadata plus a class list complete up to `cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDataset {
    name: String,
    volume: f64,
    betti1: u32,
    cutoff: f64,
    classes: Vec<ConjugacyClassEntry>,
    /// Free-form notes such as the import policy; not used numerically.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct RawDataset {
    name: Option<String>,
    volume: f64,
    betti1: u32,
    cutoff: f64,
    #[serde(default)]
    classes: Vec<ConjugacyClassEntry>,
    #[serde(default)]
    provenance: BTreeMap<String, String>,
}

/// Supported on-disk formats for [`load_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    NativeJson,
    SnappyText,
}

impl SpectrumDataset {
    pub fn new(
        name: impl Into<String>,
        volume: f64,
        betti1: u32,
        cutoff: f64,
        classes: Vec<ConjugacyClassEntry>,
    ) -> Result<Self> {
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::Validation(format!("volume {volume} must be positive")));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::Validation(format!("cutoff {cutoff} must be positive")));
        }
        Ok(Self {
            name: name.into(),
            volume,
            betti1,
            cutoff,
            classes: normalize_classes(classes, cutoff)?,
            provenance: BTreeMap::new(),
        })
    }

    pub fn with_provenance(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.provenance.insert(key.into(), value.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn betti1(&self) -> u32 {
        self.betti1
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn classes(&self) -> &[ConjugacyClassEntry] {
        &self.classes
    }

    pub fn provenance(&self) -> &BTreeMap<String, String> {
        &self.provenance
    }

    /// Total number of conjugacy classes of the given kind.
    pub fn class_count(&self, kind: ClassKind) -> u64 {
        self.classes
            .iter()
            .filter(|e| e.kind == kind)
            .map(ConjugacyClassEntry::class_count)
            .sum()
    }

    /// Copy restricted to classes of length at most `cutoff`.
    pub fn truncated(&self, cutoff: f64) -> Result<Self> {
        if cutoff > self.cutoff {
            return Err(Error::InvalidArgument(format!(
                "cannot extend cutoff {} to {cutoff}",
                self.cutoff
            )));
        }
        let mut out = Self::new(
            self.name.clone(),
            self.volume,
            self.betti1,
            cutoff,
            self.classes.iter().filter(|e| e.length <= cutoff).copied().collect(),
        )?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("top-level JSON value must be an object".into()))?;
        for key in ["volume", "betti1", "cutoff"] {
            if obj.get(key).map_or(true, serde_json::Value::is_null) {
                return Err(Error::MissingMetadata(key));
            }
        }
        let raw: RawDataset = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        let mut ds = Self::new(
            raw.name.unwrap_or_default(),
            raw.volume,
            raw.betti1,
            raw.cutoff,
            raw.classes,
        )?;
        ds.provenance = raw.provenance;
        Ok(ds)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    /// SHA-256 of the compact canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("dataset serializes");
        sha256_hex(&bytes)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a dataset in either supported format. For `snappy-text`,
/// `import` supplies metadata not present in the file header and the
/// self-inverse policy.
pub fn load_dataset(
    path: impl AsRef<Path>,
    format: InputFormat,
    import: &SnappyImport,
) -> Result<SpectrumDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        InputFormat::NativeJson => SpectrumDataset::from_json_str(&text),
        InputFormat::SnappyText => parse_snappy_text(&text, import),
    }
}

/// Combines a dataset of good geodesics with, typically, the generated
/// elliptic and bad-hyperbolic portion of the same orbifold.
pub fn merge_datasets(a: &SpectrumDataset, b: &SpectrumDataset) -> Result<SpectrumDataset> {
    if (a.volume - b.volume).abs() > 1e-9 {
        return Err(Error::MetadataMismatch(format!(
            "volumes differ: {} vs {}",
            a.volume, b.volume
        )));
    }
    if a.betti1 != b.betti1 {
        return Err(Error::MetadataMismatch(format!(
            "first Betti numbers differ: {} vs {}",
            a.betti1, b.betti1
        )));
    }
    let cutoff = a.cutoff.min(b.cutoff);
    let name = if a.name == b.name || b.name.is_empty() {
        a.name.clone()
    } else if a.name.is_empty() {
        b.name.clone()
    } else {
        format!("{}+{}", a.name, b.name)
    };
    let classes = a
        .classes
        .iter()
        .chain(&b.classes)
        .filter(|e| e.length <= cutoff)
        .copied()
        .collect();
    let mut out = SpectrumDataset::new(name, a.volume, a.betti1, cutoff, classes)?;
    out.provenance = a.provenance.clone();
    for (k, v) in &b.provenance {
        out.provenance.entry(k.clone()).or_insert_with(|| v.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn order2(weight: f64) -> ConjugacyClassEntry {
        ConjugacyClassEntry::elliptic(PI, weight, 0.5)
    }

    #[test]
    fn json_with_single_elliptic() {
        let text = r#"{"name":"x","volume":0.18,"betti1":0,"cutoff":8,
            "classes":[{"kind":"elliptic","length":0,"holonomy":3.141592653589793,
            "weight":3.7918,"torsion":0.5,"multiplicity":1,"inverse_paired":false}]}"#;
        let ds = SpectrumDataset::from_json_str(text).unwrap();
        assert_eq!(ds.classes().len(), 1);
        assert_eq!(ds.classes()[0].weight, 3.7918);
    }

    #[test]
    fn empty_class_list_is_valid() {
        let ds = SpectrumDataset::from_json_str(r#"{"name":"e","volume":1,"betti1":0,"cutoff":8,"classes":[]}"#)
            .unwrap();
        assert!(ds.classes().is_empty());
    }

    #[test]
    fn missing_metadata() {
        let err = SpectrumDataset::from_json_str(r#"{"name":"e","betti1":0,"cutoff":8}"#).unwrap_err();
        assert!(matches!(err, Error::MissingMetadata("volume")));
        let err = SpectrumDataset::from_json_str(r#"{"volume":1,"betti1":0}"#).unwrap_err();
        assert!(matches!(err, Error::MissingMetadata("cutoff")));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(SpectrumDataset::from_json_str("{"), Err(Error::Parse(_))));
        assert!(matches!(
            SpectrumDataset::from_json_str(r#"{"volume":1,"betti1":-1,"cutoff":2}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn validation_failures() {
        let long = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 9.0, 0.1, 9.0);
        assert!(matches!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![long]), Err(Error::Validation(_))));

        let mut half = ConjugacyClassEntry::hyperbolic(ClassKind::BadHyperbolic, 2.0, PI, 1.0);
        half.torsion = 0.5;
        assert!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![half]).is_err());

        let mut elliptic_len = order2(1.0);
        elliptic_len.length = 0.5;
        assert!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![elliptic_len]).is_err());

        let trivial = ConjugacyClassEntry::elliptic(0.0, 1.0, 1.0);
        assert!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![trivial]).is_err());

        let zero_mult = order2(1.0).with_multiplicity(0);
        assert!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![zero_mult]).is_err());

        let neg_weight = order2(-1.0);
        assert!(SpectrumDataset::new("x", 1.0, 0, 8.0, vec![neg_weight]).is_err());

        assert!(SpectrumDataset::new("x", 0.0, 0, 8.0, vec![]).is_err());
        assert!(SpectrumDataset::new("x", 1.0, 0, -1.0, vec![]).is_err());
    }

    #[test]
    fn expand_single_power() {
        let rec = PrimitiveGeodesicRecord { length: 5.0, holonomy: 0.3, multiplicity: 1, self_inverse: false };
        let out = expand_primitives(&[rec], 8.0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].length, 5.0);
        assert_eq!(out[0].holonomy, 0.3);
        assert_eq!(out[0].weight, 5.0);
        assert!(out[0].inverse_paired);
    }

    #[test]
    fn expand_half_turn_powers() {
        let rec = PrimitiveGeodesicRecord { length: 2.0, holonomy: PI, multiplicity: 1, self_inverse: true };
        let out = expand_primitives(&[rec], 8.0).unwrap();
        let lengths: Vec<f64> = out.iter().map(|e| e.length).collect();
        assert_eq!(lengths, vec![2.0, 4.0, 6.0, 8.0]);
        let expected = [PI, 0.0, PI, 0.0];
        for (e, want) in out.iter().zip(expected) {
            assert!((e.holonomy - want).abs() < 1e-12, "{} vs {want}", e.holonomy);
            assert!(!e.inverse_paired);
        }
    }

    #[test]
    fn expand_beyond_cutoff_is_empty() {
        let rec = PrimitiveGeodesicRecord { length: 9.0, holonomy: 0.0, multiplicity: 1, self_inverse: false };
        assert!(expand_primitives(&[rec], 8.0).unwrap().is_empty());
        assert!(expand_primitives(&[rec], 0.0).is_err());
    }

    #[test]
    fn duplicates_merge_into_multiplicity() {
        let e = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 1.5, 0.4, 1.5);
        let ds = SpectrumDataset::new("x", 1.0, 0, 8.0, vec![e, e.with_multiplicity(2)]).unwrap();
        assert_eq!(ds.classes().len(), 1);
        assert_eq!(ds.classes()[0].multiplicity, 3);
    }

    #[test]
    fn merge_rules() {
        let e = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 1.5, 0.4, 1.5);
        let long = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 7.0, 0.4, 3.5);
        let a = SpectrumDataset::new("a", 2.0, 0, 8.0, vec![e, long]).unwrap();
        let empty = SpectrumDataset::new("b", 2.0, 0, 6.0, vec![]).unwrap();
        let single = SpectrumDataset::new("c", 2.0, 0, 8.0, vec![e]).unwrap();

        let m = merge_datasets(&a, &empty).unwrap();
        assert_eq!(m.cutoff(), 6.0);
        assert_eq!(m.classes().len(), 1);

        let doubled = merge_datasets(&single, &single).unwrap();
        assert_eq!(doubled.classes().len(), 1);
        assert_eq!(doubled.classes()[0].multiplicity, 2);

        let other_vol = SpectrumDataset::new("d", 2.1, 0, 8.0, vec![]).unwrap();
        assert!(matches!(merge_datasets(&a, &other_vol), Err(Error::MetadataMismatch(_))));
        let other_b1 = SpectrumDataset::new("d", 2.0, 1, 8.0, vec![]).unwrap();
        assert!(matches!(merge_datasets(&a, &other_b1), Err(Error::MetadataMismatch(_))));
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!(wrap_angle(TAU).abs() < 1e-15);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }

    fn arb_entry() -> impl Strategy<Value = ConjugacyClassEntry> {
        (0u8..3, 0.01f64..8.0, -10.0f64..10.0, 0.1f64..5.0, 1u32..4, any::<bool>()).prop_map(
            |(k, len, hol, w, m, p)| match k {
                0 => ConjugacyClassEntry::elliptic(if hol.abs() < 0.1 { 1.0 } else { hol }, w, 1.0)
                    .with_multiplicity(m),
                1 => ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, len, hol, w)
                    .with_multiplicity(m)
                    .paired(p),
                _ => ConjugacyClassEntry::hyperbolic(ClassKind::BadHyperbolic, len, hol, w)
                    .with_multiplicity(m)
                    .paired(p),
            },
        )
    }

    proptest! {
        #[test]
        fn wrap_range_and_periodicity(theta in -1e3f64..1e3) {
            let w = wrap_angle(theta);
            prop_assert!(w > -PI && w <= PI);
            let shifted = wrap_angle(theta + TAU);
            let d = (w - shifted).rem_euclid(TAU);
            prop_assert!(d.min(TAU - d) < 1e-11);
        }

        #[test]
        fn expansion_counts(len in 0.05f64..9.0, hol in -PI..PI, cutoff in 0.1f64..12.0) {
            let rec = PrimitiveGeodesicRecord { length: len, holonomy: hol, multiplicity: 1, self_inverse: false };
            let out = expand_primitives(&[rec], cutoff).unwrap();
            prop_assert_eq!(out.len() as f64, (cutoff / len).floor());
            for (i, e) in out.iter().enumerate() {
                prop_assert_eq!(e.length, (i + 1) as f64 * len);
            }
        }

        #[test]
        fn normalization_is_idempotent(entries in prop::collection::vec(arb_entry(), 0..30)) {
            let once = normalize_classes(entries, 8.0).unwrap();
            let twice = normalize_classes(once.clone(), 8.0).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn json_round_trip(entries in prop::collection::vec(arb_entry(), 0..20), vol in 0.01f64..50.0, b1 in 0u32..4) {
            let ds = SpectrumDataset::new("rt", vol, b1, 8.0, entries).unwrap()
                .with_provenance("policy", "test");
            let back = SpectrumDataset::from_json_str(&ds.to_json_string()).unwrap();
            prop_assert_eq!(&ds, &back);
            prop_assert_eq!(ds.fingerprint(), back.fingerprint());
        }
    }
}
