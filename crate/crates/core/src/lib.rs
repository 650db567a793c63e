//! Capacity kernels for MIMO flat-fading and OFDM spatial-multiplexing channels.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! * [`linalg`]: a small dense complex matrix kernel (Gram products, Hermitian
//!   eigenvalues, Cholesky log-determinants, PSD square roots).
//! * [`rng`] and [`channel`]: reproducible per-trial random streams, i.i.d.
//!   Rayleigh matrices, receive-correlated tap-delay channels and their
//!   per-tone frequency response.
//! * [`capacity`]: closed-form mutual information and capacity evaluations,
//!   including water-filling with transmitter CSI and the large-array
//!   asymptotics.
//! * [`estimate`] and [`sweep`]: Monte Carlo estimators and SNR sweeps whose
//!   output does not depend on how trials are scheduled.
//!
//! Channel matrices are always `rx × tx` (receive rows, transmit columns).
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(rust_2018_idioms, unused_must_use)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod capacity;
pub mod channel;
pub mod error;
pub mod estimate;
pub mod linalg;
pub mod rng;
pub mod snr;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;
