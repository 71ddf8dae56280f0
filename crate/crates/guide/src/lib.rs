//! Doc-test harness for the book. Each module includes one chapter, so
//! `cargo test -p coexact-guide` runs every snippet in `book/src`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/test-function.md")]
pub mod test_function {}

#[doc = include_str!("../../../book/src/spectral-data.md")]
pub mod spectral_data {}

#[doc = include_str!("../../../book/src/trace-formula.md")]
pub mod trace_formula {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/tetrahedra.md")]
pub mod tetrahedra {}

#[doc = include_str!("../../../book/src/representations.md")]
pub mod representations {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
