//! The narrative guide, mirrored from the `book/` directory.
//!
//! Each chapter of the mdbook guide is included here as a documentation-only
//! module, so `cargo test --doc` compiles and runs every code snippet the
//! book shows. If a snippet in the book drifts from the library, the doc
//! tests break.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/linear_algebra.md")]
pub mod linear_algebra {}

#[doc = include_str!("../../../book/src/lattices.md")]
pub mod lattices {}

#[doc = include_str!("../../../book/src/representation.md")]
pub mod representation {}

#[doc = include_str!("../../../book/src/universality.md")]
pub mod universality {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/certificates.md")]
pub mod certificates {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
