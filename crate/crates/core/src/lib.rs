//! Latency model for periodic VRU awareness messages on a two-lane freeway
//! served by a single eNB, comparing a distant-cloud processing path against
//! a MEC host collocated with the eNB.
//!
//! The crate is `no_std` (with `alloc`): every operation is a pure function of
//! its inputs and an explicit RNG stream. IO, configuration files and parallel
//! fan-out live in the `cv2x-mec-sim` companion crate.
//!
//! Units are SI throughout: meters, seconds, bits, hertz, cycles/second.

#![no_std]

extern crate alloc;

pub mod channel;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod latency;
pub mod radio;
pub mod rng;
pub mod scenario;
pub mod traffic;

mod math;

pub use error::{Error, Result};
