//! Monte-Carlo Pauli-frame simulation of entanglement distribution over a
//! butterfly repeater network.
//!
//! Four protocols are compared: cluster-state network coding (MQNC),
//! Bell-pair network coding (QNC), sequential entanglement swapping (ES)
//! and parallel entanglement swapping (ESP). Circuits are built as
//! time-stepped IR ([`circuit`]), checked exactly against a stabilizer
//! tableau ([`tableau`]), and sampled under a five-source Pauli noise model
//! ([`noise`], [`engine`]). Residual errors are folded modulo the output
//! stabilizers and summarized as joint fidelities and error-class
//! histograms ([`analysis`]). [`cli`] holds the experiment presets and
//! output writers used by the `mqnc` binary.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod engine;
pub mod error;
pub mod noise;
pub mod pauli;
pub mod tableau;

pub use error::{Error, Result};
