//! Trace-formula bounds for the coexact 1-form spectrum of closed hyperbolic
//! 3-orbifolds.
//!
//! The pipeline reads a list of conjugacy classes (a [`SpectrumDataset`]),
//! evaluates the geometric side of the trace formula for a family of
//! compactly supported test functions, and turns the resulting multiplicity
//! bound `J_{R,t}` into eigenvalue exclusions, a lower bound on the first
//! eigenvalue `λ₁*` and an L-space verdict.
//!
//! ```
//! use coexact::{j_bound, ClassKind, ConjugacyClassEntry, SpectrumDataset};
//!
//! let ds = SpectrumDataset::new(
//!     "toy",
//!     3.0,
//!     0,
//!     8.0,
//!     vec![ConjugacyClassEntry::hyperbolic(ClassKind::GoodHyperbolic, 2.5, 0.4, 2.5)],
//! )?;
//! let j = j_bound(&ds, 8.0, 1.0)?;
//! assert!(j.is_finite());
//! # Ok::<(), coexact::Error>(())
//! ```
//!
//! Elliptic and bad-hyperbolic classes of orbifolds built from Coxeter
//! orthoschemes are generated by [`tetra`], and the multiplicity granularity
//! coming from an `S₅` symmetry by [`reps`].

pub mod bounds;
pub mod error;
pub mod numfmt;
pub mod quad;
pub mod reps;
pub mod spectrum;
pub mod sum;
pub mod testfn;
pub mod tetra;
pub mod trace;
pub mod verify;

pub use bounds::{
    certify_exclusion, j_bound, j_bound_parts, lambda_one_bound, lspace_verdict, refine_exclusion,
    scan, BoundCurve, Certificate, CertificateKind, JBound, Sample, Statement,
};
pub use error::{Error, Result};
pub use reps::{granularity_for, FiniteGroupCharacterTable, Granularity, GranularityMode};
pub use spectrum::{
    load_dataset, merge_datasets, ClassKind, ConjugacyClassEntry, InputFormat, SnappyImport,
    SpectrumDataset,
};
pub use testfn::{Kernel, TestFunction};
pub use tetra::{CoxeterSymbol, CoxeterTetrahedron};
pub use trace::{geometric_side, GeometricSideBreakdown};
