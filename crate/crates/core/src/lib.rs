//! Uniquely-decodable multi-amplitude sequence (UDAS) laboratory.
//!
//! The crate covers the whole grant-free multiple-access chain built on UDAS
//! pilots:
//!
//! - [`udas`]: element sets, cyclic / quasi-cyclic / block-cyclic set
//!   construction, brute-force unique-decodability checks and sum-pattern
//!   catalogs.
//! - [`coding`]: QC-LDPC outer code, column-major interleaver and the
//!   per-row single-parity-check extension.
//! - [`phy`]: position/sign multi-dimensional modulation and the noisy
//!   adder channel.
//! - [`receiver`]: statistic-of-feature active user detection, hard
//!   multiuser detection, LLR initialisation, joint LDPC+SPC message passing
//!   and an exhaustive MAP oracle for tiny instances.
//! - [`analysis`]: noncentral chi-square AUER model and adder-MAC Shannon
//!   limits.

pub mod analysis;
pub mod coding;
mod combin;
mod error;
pub mod phy;
pub mod receiver;
pub mod udas;

pub use combin::{binomial, combination_rank, combination_rows};
pub use error::{Error, Result};

/// Gaussian-integer amplitude used for exact construction and validation.
pub type Amp = num_complex::Complex<i64>;

/// Complex baseband sample.
pub type Cplx = num_complex::Complex64;
