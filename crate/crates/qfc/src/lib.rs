//! Discrete-time quantum channels with per-step environment measurements:
//! decide whether classical feedback can perfectly restore quantum
//! information, synthesize the restoring feedback, compare closed-form
//! correction strategies by channel fidelity, and numerically optimize
//! general feedback policies.

pub mod channel;
pub mod error;
pub mod matlin;
pub mod optimizer;
pub mod perfect;
pub mod rng;
pub mod schemes;
pub mod trajectory;

pub use error::{Error, Result};
