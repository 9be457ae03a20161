//! Secure lossy source coding with side information at the legitimate
//! decoder and at an eavesdropper: information measures, the
//! rate-distortion-equivocation region certified by auxiliary schemes,
//! side-information orderings, the binary erasure/symmetric example, and a
//! finite-blocklength simulator.
//!
//! Core types are generic over the scalar (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, with `*32` variants for `f32`.

pub mod binary;
pub mod error;
pub mod info;
pub mod ordering;
pub mod region;
mod scalar;
pub mod simulator;

pub use error::{Error, Result};
pub use scalar::Real;

pub type JointPmf = info::JointPmf<f64>;
pub type JointPmf32 = info::JointPmf<f32>;
pub type ConditionalPmf = info::ConditionalPmf<f64>;
pub type ConditionalPmf32 = info::ConditionalPmf<f32>;
pub type SecureSource = region::SecureSource<f64>;
pub type SecureSource32 = region::SecureSource<f32>;
pub type AuxScheme = region::AuxScheme<f64>;
pub type AuxScheme32 = region::AuxScheme<f32>;
pub type RdeTuple = region::RdeTuple<f64>;
pub type RdeTuple32 = region::RdeTuple<f32>;
