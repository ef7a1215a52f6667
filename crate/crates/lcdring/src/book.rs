//! Runs every code block of the book as a doc-test, so the guide in
//! `book/` can never drift from the library.  Compiled only under
//! `cfg(doctest)`; one module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/linear-codes.md")]
pub mod linear_codes {}

#[doc = include_str!("../../../book/src/lcd.md")]
pub mod lcd {}

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/constacyclic.md")]
pub mod constacyclic {}

#[doc = include_str!("../../../book/src/distance.md")]
pub mod distance {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
