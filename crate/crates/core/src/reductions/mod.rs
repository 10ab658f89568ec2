//! Compilers between finite tests and oracle functionals with use below the
//! identity, in both directions.

pub mod compress;
pub mod extract;
pub mod normalize;
pub mod tree;

pub use compress::{build_compressing_oracle, decode, CompressError, CompressedOracle, Segment};
pub use extract::{extract_bounded_test, extract_ml_test, scan_cut_points, ExtractError};
pub use normalize::{normalize_test, NormalForm, NormalizeError, NormalizedTest};
pub use tree::{build_tree, compile_reduction, TreeArtifact, TreeError};
