//! Exact and modular r-Fubini numbers, eventual periods of their residue
//! sequences, and mechanical checks of the finite claims behind those periods.
//!
//! The r-Fubini number `F(n, r)` counts weak orderings of `n + r` labeled
//! elements in which the first `r` elements land in pairwise distinct ranks.
//! Reduced modulo `s` the sequence `F(0, r), F(1, r), ...` is eventually
//! periodic; [`periodicity::predict_period`] gives the preperiod and period
//! from the factorization of `s`, and [`periodicity::verify_prediction`]
//! checks that prediction against streamed residues.
//!
//! Modules:
//! - [`combinatorics`]: big-integer factorials, binomials, Stirling,
//!   r-Stirling, Fubini and r-Fubini numbers.
//! - [`modular`]: factorization, totient, and division-free residues of
//!   r-Fubini numbers, including an incremental [`modular::ResidueStream`].
//! - [`periodicity`]: period prediction, detection and verification.
//! - [`certificates`]: finite enumeration and divisibility checks.
//! - [`oracles`]: slow brute-force enumerators used as ground truth.
//! - [`cli`]: the `rfubini` command-line front end.

pub mod certificates;
pub mod cli;
pub mod combinatorics;
mod error;
pub mod modular;
pub mod oracles;
pub mod periodicity;

pub use error::{Error, Result};
