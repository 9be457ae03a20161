//! Finite alphabets, joint and conditional pmfs, and information measures
//! in bits.

mod alphabet;
mod binary_fns;
mod channel;
mod pmf;
pub mod text;

pub use alphabet::Alphabet;
pub use binary_fns::{binary_entropy, binary_star, inverse_binary_entropy};
pub(crate) use binary_fns::{h2, star};
pub use channel::ConditionalPmf;
pub use pmf::{joint_from, Axis, JointPmf};
