//! Exact, finite-stage constructions relating oracle-use compressibility to
//! randomness tests, martingales and prefix-free complexity.
//!
//! Everything here is a finite object: bit strings, dyadic rationals, string
//! sets, explicit functional tables and machine tables with a halting
//! horizon. All arithmetic is exact.

pub mod bits;
pub mod diagonal;
pub mod dyadic;
pub mod functional;
pub mod gen;
pub mod granular;
pub mod kc;
pub mod machine;
pub mod martingale;
pub mod omega;
pub mod reductions;
pub mod sets;
pub mod test_family;

pub use bits::{bs, BitString};
pub use dyadic::Dyadic;
pub use functional::{apply_functional, validate_functional, Functional, Mode, Pair, UseFunction};
pub use kc::{kc_assign, KcError, KcRequest, KcState};
pub use machine::{gen_machine, k_at_stage, omega_at_stage, settling_time, Approximation, MachineEntry, MachineTable};
pub use martingale::{validate_martingale, Martingale, MartingaleKind};
pub use sets::{measure, validate_prefix_free, StringSet};
pub use test_family::{Test, TestKind};
