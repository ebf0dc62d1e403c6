//! Manifest parsing, object construction and the randomized check suites
//! behind the `nilprod` binary.

pub mod build;
pub mod manifest;
pub mod run;
pub mod suites;
pub mod table1;

pub use manifest::{parse_manifest, Manifest, ManifestError};
pub use run::{check_suites, run, ResultDocument};
