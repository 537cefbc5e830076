//! Time-dependent generalized oscillators H = (X/2)p^2 + (Y/2)(pq+qp) + (Z/2)q^2:
//! integrate the complex classical mode function, build invariant/Heisenberg
//! operator expansions and number-state correlators, extract Bogoliubov and
//! squeeze parameters of the evolution, and cross-check everything against a
//! truncated Fock-space propagator.
//!
//! Module map:
//! - [`profiles`] — coefficient families X(t), Y(t), Z(t) and derived frequencies
//! - [`mode_solver`] — RK4 mode-function integration with Wronskian monitoring
//! - [`operator_algebra`] — picture expansions, correlators, commutators
//! - [`bogoliubov`] — (alpha, beta) coefficients and (theta, r, phi) squeeze parameters
//! - [`fock_oracle`] — dense truncated-number-basis ground truth
//! - [`scenario`] — JSON-configured runs, verification reports, parameter sweeps
//!
//! Runnable walkthroughs live in `examples/` (`cargo run --release --example NAME`):
//! - `constant_oscillator` — the closed-form limit: pure-phase alpha, beta = 0
//! - `parametric_resonance` — modulated stiffness, resonant vs off-resonant growth
//! - `quench_oracle_check` — smooth quench correlators against the Fock oracle
//! - `squeeze_decomposition` — (theta, r, phi) along a trajectory and round-trips
//! - `picture_equality` — invariant vs Heisenberg correlators and commutators
//! - `tabulated_pulse` — sampled pulse profile and the late-time freeze of |beta|
//!
//! The `tdosc` binary exposes the same pipeline as `run` / `verify` / `sweep`
//! subcommands over a JSON scenario config.

pub mod bogoliubov;
pub mod error;
pub mod fock_oracle;
pub mod mode_solver;
pub mod operator_algebra;
pub mod profiles;
pub mod scenario;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
