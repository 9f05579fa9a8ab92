//! Independent checks of decompositions by exact enumeration on rational
//! sample grids.

pub mod brute;
pub mod checks;
pub mod choice;
pub mod grid;
pub mod report;

pub use brute::{brute_force_decompose, verify_against_brute, BruteForce, Sample};
pub use checks::{verify_all, verify_injectivity, verify_small_containment, verify_termination_trace, verify_union};
pub use choice::verify_choice;
pub use grid::{Range, SampleGrid};
pub use report::{Check, Status, VerificationReport, Witness};
