//! Qudit statevector simulation built around the duality between basis
//! states `|q⟩` and basis functionals `|k⟩` of `Z_d^n`.
//!
//! - [`system`]: digit labels, modular arithmetic, index convention.
//! - [`state`]: dense amplitude vectors tagged q-rep or k-rep.
//! - [`duality`]: the per-qudit Fourier transform and planewaves.
//! - [`gates`]: translations, controlled adds, circuits, functional creation.
//! - [`analysis`]: observables, entropies, translation identity, partitions.
//! - [`verify`]: the invariant sweep behind `qudit verify`.
//! - [`cli`]: command implementations for the `qudit` binary.
//!
//! `d` need not be prime anywhere in the crate.

pub mod analysis;
pub mod cli;
pub mod duality;
pub mod error;
pub mod gates;
pub mod json;
pub mod kernel;
pub mod state;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use state::{Representation, StateVector};
pub use system::{DigitLabel, QuditSystem};
