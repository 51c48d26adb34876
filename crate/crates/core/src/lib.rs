//! Generalized superdense coding over GBS resources with measurement-free
//! error correction, simulated on a dense state-vector backend.
//!
//! Module map:
//!
//! * [`state`], [`gate`], [`density`], [`histogram`]: the simulator.
//! * [`circuit`]: party-aware circuit IR with transfers and channel errors.
//! * [`protocol`]: preparation, encoding and decoding for EPR, GBS(N) and
//!   GHZ-EPR(N) resources.
//! * [`aec`]: the discrimination and correction stages and the pipeline
//!   assembler.
//! * [`noise`]: device profiles and Pauli-trajectory sampling.
//! * [`tomography`]: Pauli tomography of the data register.
//! * [`scenario`]: scenario files, the runner and error-grid sweeps.

pub mod aec;
pub mod circuit;
pub mod density;
pub mod error;
pub mod gate;
pub mod histogram;
pub mod noise;
pub mod protocol;
pub mod scenario;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
