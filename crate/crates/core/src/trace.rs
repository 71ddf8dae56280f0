//! Geometric side of the trace formula for coexact 1-forms.
//!
//! For a closed hyperbolic 3-orbifold `O = H³/Γ` and an admissible even
//! test function `H`, the geometric side is
//!
//! ```text
//! vol(O)/(2π) · (H(0) - H''(0))
//!   + Σ_{[γ] ≠ 1} t(γ) · vol(Γ_γ\G_γ) · cos(hol γ) / (|1 - e^{ℂℓ(γ)}| |1 - e^{-ℂℓ(γ)}|) · H(ℓ(γ))
//! ```
//!
//! The spectral side, and the Betti-number term, are handled in
//! [`crate::bounds`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{ClassKind, ConjugacyClassEntry, SpectrumDataset};
use crate::sum::NeumaierSum;
use crate::testfn::Kernel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricSideBreakdown {
    pub identity_term: f64,
    pub class_terms_total: f64,
    pub per_kind_totals: BTreeMap<ClassKind, f64>,
    pub total: f64,
}

/// `vol/(2π) · (H(0) − H″(0))`.
pub fn identity_term<K: Kernel + ?Sized>(volume: f64, kernel: &K) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidArgument(format!("volume must be positive, got {volume}")));
    }
    let (h0, h2) = kernel.at_zero();
    Ok(volume / (2.0 * PI) * (h0 - h2))
}

/// `|1 − e^{ℓ+iθ}| · |1 − e^{−ℓ−iθ}| = 2 (cosh ℓ − cos θ)`.
pub fn denom(length: f64, holonomy: f64) -> Result<f64> {
    if length == 0.0 && holonomy.cos() == 1.0 {
        return Err(Error::InvalidArgument(
            "the identity element has no class term".into(),
        ));
    }
    Ok(2.0 * (length.cosh() - holonomy.cos()))
}

/// Contribution of one record, including its multiplicity and pairing.
pub fn class_term<K: Kernel + ?Sized>(entry: &ConjugacyClassEntry, kernel: &K) -> Result<f64> {
    let h = kernel.value(entry.length);
    if h == 0.0 {
        return Ok(0.0);
    }
    let count = entry.class_count() as f64;
    let d = denom(entry.length, entry.holonomy)?;
    Ok(count * entry.torsion * entry.weight * entry.holonomy.cos() / d * h)
}

// Length first, then |θ|, then everything else; the sign of θ comes last so
// that flipping all holonomies never reorders terms with distinct values.
fn summation_order(a: &ConjugacyClassEntry, b: &ConjugacyClassEntry) -> std::cmp::Ordering {
    a.length
        .total_cmp(&b.length)
        .then(a.holonomy.abs().total_cmp(&b.holonomy.abs()))
        .then(a.kind.cmp(&b.kind))
        .then(a.weight.total_cmp(&b.weight))
        .then(a.torsion.total_cmp(&b.torsion))
        .then(a.multiplicity.cmp(&b.multiplicity))
        .then(a.inverse_paired.cmp(&b.inverse_paired))
        .then(a.holonomy.total_cmp(&b.holonomy))
}

/// Evaluates the geometric side for an explicit class list. The caller is
/// responsible for the list being complete up to `cutoff`.
pub fn evaluate_classes<K: Kernel + ?Sized>(
    volume: f64,
    cutoff: f64,
    classes: &[ConjugacyClassEntry],
    kernel: &K,
) -> Result<GeometricSideBreakdown> {
    let support = kernel.support_radius();
    if support > cutoff {
        return Err(Error::SupportExceedsCutoff { support, cutoff });
    }
    let identity = identity_term(volume, kernel)?;

    let mut order: Vec<&ConjugacyClassEntry> = classes.iter().collect();
    order.sort_by(|a, b| summation_order(a, b));

    let mut sums: BTreeMap<ClassKind, NeumaierSum> =
        ClassKind::ALL.iter().map(|&k| (k, NeumaierSum::new())).collect();
    for entry in order {
        let term = class_term(entry, kernel)?;
        sums.get_mut(&entry.kind).expect("all kinds present").add(term);
    }
    let per_kind_totals: BTreeMap<ClassKind, f64> =
        sums.into_iter().map(|(k, s)| (k, s.value())).collect();
    let class_terms_total = ClassKind::ALL
        .iter()
        .fold(0.0, |acc, k| acc + per_kind_totals[k]);
    Ok(GeometricSideBreakdown {
        identity_term: identity,
        class_terms_total,
        per_kind_totals,
        total: identity + class_terms_total,
    })
}

/// Right-hand side of the trace formula for a dataset.
///
/// Fails with [`Error::SupportExceedsCutoff`] when `H` reaches beyond the
/// lengths the dataset is complete for.
pub fn geometric_side<K: Kernel + ?Sized>(
    ds: &SpectrumDataset,
    kernel: &K,
) -> Result<GeometricSideBreakdown> {
    evaluate_classes(ds.volume(), ds.cutoff(), ds.classes(), kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::TestFunction;
    use proptest::prelude::*;

    struct Unit;

    impl Kernel for Unit {
        fn support_radius(&self) -> f64 {
            1.0
        }
        fn value(&self, x: f64) -> f64 {
            if x.abs() < 1.0 { 1.0 } else { 0.0 }
        }
        fn fourier(&self, _s: f64) -> f64 {
            1.0
        }
        fn at_zero(&self) -> (f64, f64) {
            (1.0, 0.0)
        }
    }

    fn order2() -> ConjugacyClassEntry {
        ConjugacyClassEntry::elliptic(PI, 3.7918, 0.5)
    }

    #[test]
    fn identity_term_values() {
        assert!((identity_term(2.0 * PI, &Unit).unwrap() - 1.0).abs() < 1e-15);
        let tf = TestFunction::new(4.0, 0.0).unwrap();
        let v = identity_term(2.0 * PI, &tf).unwrap();
        assert!((v - (16.0 / 3.0 + 4.0)).abs() < 1e-13);
        let v2 = identity_term(4.0 * PI, &tf).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-13);
        assert!(identity_term(0.0, &tf).is_err());
    }

    #[test]
    fn denominator_values() {
        assert_eq!(denom(0.0, PI).unwrap(), 4.0);
        // |1 - e| · |1 - e^{-1}| evaluated directly.
        let e = 1f64.exp();
        let direct = (1.0 - e).abs() * (1.0 - 1.0 / e).abs();
        let d = denom(1.0, 0.0).unwrap();
        assert!((d - direct).abs() < 1e-15);
        assert!((d - 1.086_161_269_630_487_6).abs() < 1e-12);
        assert_eq!(denom(0.7, 0.3).unwrap(), denom(0.7, -0.3).unwrap());
        assert!(denom(0.0, 0.0).is_err());
    }

    #[test]
    fn order_two_elliptic_term() {
        let tf = TestFunction::new(8.0, 1.0).unwrap();
        let term = class_term(&order2(), &tf).unwrap();
        let h0 = tf.value(0.0);
        assert!((term - (-0.473_975 * h0)).abs() < 1e-12 * h0);
    }

    #[test]
    fn zero_terms() {
        let tf = TestFunction::new(4.0, 0.5).unwrap();
        let far = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 4.0, 0.2, 4.0);
        assert_eq!(class_term(&far, &tf).unwrap(), 0.0);
        let quarter = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 1.0, PI / 2.0, 7.0)
            .with_multiplicity(5);
        assert!(class_term(&quarter, &tf).unwrap().abs() < 1e-14);
    }

    #[test]
    fn empty_dataset_is_identity_only() {
        let ds = SpectrumDataset::new("e", 2.0 * PI, 0, 4.0, vec![]).unwrap();
        let tf = TestFunction::new(4.0, 0.0).unwrap();
        let g = geometric_side(&ds, &tf).unwrap();
        assert!((g.total - (16.0 / 3.0 + 4.0)).abs() < 1e-13);
        assert_eq!(g.class_terms_total, 0.0);
    }

    #[test]
    fn single_entry_consistency() {
        let e = ConjugacyClassEntry::hyperbolic(ClassKind::BadHyperbolic, 1.2, 0.6, 0.4).paired(true);
        let ds = SpectrumDataset::new("one", 1.3, 0, 8.0, vec![e]).unwrap();
        let tf = TestFunction::new(8.0, 2.0).unwrap();
        let g = geometric_side(&ds, &tf).unwrap();
        let expect = identity_term(1.3, &tf).unwrap() + class_term(&e, &tf).unwrap();
        assert_eq!(g.total, expect);
        assert_eq!(g.per_kind_totals[&ClassKind::BadHyperbolic], g.class_terms_total);
    }

    #[test]
    fn split_multiplicity_matches() {
        let e = ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 2.2, 1.1, 2.2);
        let tf = TestFunction::new(8.0, 0.7).unwrap();
        let split = evaluate_classes(3.0, 8.0, &[e, e], &tf).unwrap();
        let joined = evaluate_classes(3.0, 8.0, &[e.with_multiplicity(2)], &tf).unwrap();
        assert!((split.total - joined.total).abs() <= 1e-15 * joined.total.abs().max(1.0));
    }

    #[test]
    fn support_beyond_cutoff_fails() {
        let ds = SpectrumDataset::new("e", 1.0, 0, 6.0, vec![]).unwrap();
        let tf = TestFunction::new(6.5, 0.0).unwrap();
        assert!(matches!(geometric_side(&ds, &tf), Err(Error::SupportExceedsCutoff { .. })));
    }

    #[test]
    fn truncation_changes_only_dropped_terms() {
        let classes: Vec<_> = (1..=30)
            .map(|i| {
                let len = 0.25 * i as f64;
                ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, len, 0.37 * i as f64, len)
            })
            .collect();
        let ds = SpectrumDataset::new("t", 4.0, 0, 7.5, classes).unwrap();
        let short = ds.truncated(5.0).unwrap();
        let tf = TestFunction::new(5.0, 1.3).unwrap();
        let full = geometric_side(&ds, &tf).unwrap();
        let cut = geometric_side(&short, &tf).unwrap();
        // Every dropped class has length ≥ 5 = R, so H vanishes there.
        assert!((full.total - cut.total).abs() < 1e-13 * full.total.abs());
    }

    fn arb_entry() -> impl Strategy<Value = ConjugacyClassEntry> {
        (0u8..3, 0.05f64..7.9, -3.1f64..3.1, 0.1f64..4.0, 1u32..6, any::<bool>()).prop_map(
            |(k, len, hol, w, m, p)| match k {
                0 => ConjugacyClassEntry::elliptic(if hol.abs() < 0.05 { 1.0 } else { hol }, w, 1.0)
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
        fn denominator_matches_complex_modulus(len in 0.0f64..12.0, hol in -PI..PI) {
            prop_assume!(len > 1e-3 || hol.abs() > 1e-3);
            let z_re = len;
            let (s, c) = hol.sin_cos();
            // |1 - e^{z}| and |1 - e^{-z}| for z = ℓ + iθ
            let a = ((1.0 - z_re.exp() * c).powi(2) + (z_re.exp() * s).powi(2)).sqrt();
            let b = ((1.0 - (-z_re).exp() * c).powi(2) + ((-z_re).exp() * s).powi(2)).sqrt();
            let d = denom(len, hol).unwrap();
            prop_assert!((d - a * b).abs() <= 1e-12 * d);
        }

        #[test]
        fn holonomy_sign_flip_is_exact(entries in prop::collection::vec(arb_entry(), 0..40), t in 0.0f64..6.0) {
            let tf = TestFunction::new(8.0, t).unwrap();
            let flipped: Vec<_> = entries.iter().map(|e| {
                let mut f = *e;
                f.holonomy = -e.holonomy;
                f
            }).collect();
            let a = evaluate_classes(2.0, 8.0, &entries, &tf).unwrap();
            let b = evaluate_classes(2.0, 8.0, &flipped, &tf).unwrap();
            prop_assert_eq!(a.total, b.total);
        }

        #[test]
        fn splitting_multiplicity_is_linear(entries in prop::collection::vec(arb_entry(), 1..40), pick in 0usize..40, t in 0.0f64..6.0) {
            let tf = TestFunction::new(8.0, t).unwrap();
            let i = pick % entries.len();
            let mut split = entries.clone();
            let mut e = split[i];
            e.multiplicity += 1;
            split[i] = e;
            let mut joined = entries.clone();
            joined[i] = e;
            split[i].multiplicity -= 1;
            split.push(ConjugacyClassEntry { multiplicity: 1, ..e });
            let a = evaluate_classes(2.0, 8.0, &split, &tf).unwrap();
            let b = evaluate_classes(2.0, 8.0, &joined, &tf).unwrap();
            let scale = b.total.abs().max(b.identity_term.abs());
            prop_assert!((a.total - b.total).abs() <= 1e-13 * scale);
        }

        #[test]
        fn breakdown_invariants(entries in prop::collection::vec(arb_entry(), 0..40), t in 0.0f64..6.0) {
            let tf = TestFunction::new(8.0, t).unwrap();
            let g = evaluate_classes(2.0, 8.0, &entries, &tf).unwrap();
            prop_assert_eq!(g.total, g.identity_term + g.class_terms_total);
            let kinds = g.per_kind_totals[&ClassKind::Elliptic]
                + g.per_kind_totals[&ClassKind::GoodHyperbolic]
                + g.per_kind_totals[&ClassKind::BadHyperbolic];
            prop_assert_eq!(g.class_terms_total, kinds);
        }
    }
}
