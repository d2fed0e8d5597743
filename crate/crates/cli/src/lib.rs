//! Library half of the `copu` command-line tool: analysis reports, CSV and
//! SVG emission, boundary curves, and the named verification suites. The
//! binary in `main.rs` is a thin argument-parsing shell over these.

pub mod boundary;
pub mod csvio;
pub mod report;
pub mod svg;
pub mod verify;
