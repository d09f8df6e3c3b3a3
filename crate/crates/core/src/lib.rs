//! Simulation of the resonant four-photon Jaynes-Cummings model in the
//! large-photon-number regime.
//!
//! The crate is organized bottom-up:
//!
//! - [`fock`]: truncated Fock-space states, coherent and Kerr constructors,
//!   overlaps and fidelities.
//! - [`dynamics`]: generalized Rabi frequencies, the closed-form joint state
//!   `Psi(tau)` and the reduced density operators of atom and field.
//! - [`observables`]: photon-number distributions (simulated and closed forms),
//!   entanglement entropy, Husimi Q-function, atomic inversion.
//! - [`catlab`]: the Kerr and Kerr-cat states at special interaction times,
//!   entropy-dip scans and Q-function component counting.
//! - [`cli`]: the `jcm` command-line driver.

pub mod catlab;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod io;
pub mod observables;
pub mod tau;

pub use error::{Error, Result};
pub use tau::Tau;

pub use num_complex::Complex64 as C64;
