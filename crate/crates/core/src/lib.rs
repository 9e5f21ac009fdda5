//! Radar-assisted multi-armed-bandit beam alignment for mmWave integrated
//! sensing and communication.
//!
//! The crate synthesizes radar returns of mobile users, multipath and static
//! clutter, prunes the beam codebook with matched filtering and MUSIC Doppler
//! estimation, runs UCB-family beam-selection bandits over communication
//! slots, and accounts for BER, throughput, regret and exploration time.

pub mod array;
pub mod bandit;
pub mod error;
pub mod harness;
pub mod link;
pub mod rng;
pub mod rsp;
pub mod scene;
pub mod timing;
pub mod waveform;

pub use error::{Error, Result};
