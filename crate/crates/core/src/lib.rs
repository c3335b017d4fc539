//! State-vector simulation of pure-state closeness estimation.
//!
//! The crate simulates, with exact oracle-query accounting, the
//! `O(1/eps)` estimators for the trace distance and square-root fidelity
//! between pure states given by their state-preparation unitaries, the
//! square-root amplitude estimation routine they are built on, and the
//! SWAP-test baselines that need `O(1/eps^2)` queries (or `O(1/eps^4)`
//! samples).
//!
//! Layout:
//!
//! - [`qlin`]: dense complex linear algebra (states, unitaries, measurement).
//! - [`oracles`]: query-counted oracles and the composite operators built
//!   from them (`U`, `W`, `W'`, the Grover iterate, distribution oracles).
//! - [`phase_est`]: textbook phase estimation with explicit register sizing.
//! - [`amp_est`]: square-root amplitude estimation and amplitude estimation.
//! - [`closeness`]: the closeness estimators and the SWAP-test baselines.
//! - [`experiments`]: seeded sweeps, scaling fits and distinguishing runs.
//! - [`cli`]: the command-line front end used by the `qcloseness` binary.
//!
//! Runnable walkthroughs of each capability live in the crate's
//! `examples/` directory.

pub mod amp_est;
pub mod cli;
pub mod closeness;
pub mod error;
pub mod experiments;
pub mod oracles;
pub mod phase_est;
pub mod qlin;

pub use error::{Error, Result};
