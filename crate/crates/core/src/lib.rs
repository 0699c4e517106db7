//! Analysis toolkit for polar codes under successive cancellation (SC) and
//! successive cancellation list (SCL) decoding.
//!
//! The crate is organised bottom-up:
//!
//! - [`polar`]: code configuration and the polar transform `x = uG`.
//! - [`channel`]: BPSK over AWGN with seeded, stream-split noise.
//! - [`decoders`]: SC, SCL, CRC-aided SCL and brute-force ML decoders.
//! - [`reliability`]: Gaussian-approximation evolution of synthetic channels.
//! - [`wdist`]: minimum weight distribution by exhaustive enumeration.
//! - [`bounds`]: Q function, union bound, SC upper bounds and the SCL lower bound.
//! - [`construct`]: GA, row-weight and bit-swapping information set construction.
//! - [`sim`]: Monte Carlo BLER harness with path-loss / path-selection classification.
//!
//! All SNR values are `Es/N0` in dB with `Es = 1`. All public indices into a
//! length-`N` block are 1-based.

pub mod bounds;
pub mod channel;
pub mod construct;
pub mod decoders;
mod error;
pub mod polar;
pub mod reliability;
pub mod sim;
pub mod wdist;

pub use error::{Error, Result};
pub use polar::{BitBlock, CodeConfig};

/// Version string embedded in every exported file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version tag of every JSON/CSV file format produced by this crate.
pub const FORMAT_VERSION: u32 = 1;
