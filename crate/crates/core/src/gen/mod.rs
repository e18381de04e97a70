//! Seeded instance generators and the interval-scheduling reduction.
//!
//! Every generator is a pure function of its parameters: each entity draws
//! from its own ChaCha8 stream, so growing an instance never changes the
//! draws of the entities it already had.

pub mod ag;
pub mod isma;
pub mod rw;

pub use ag::{generate_ag, AgParams};
pub use isma::{isma_feasible, parse_isma, reduce_isma_to_moap, IsmaInstance};
pub use rw::{generate_rw, RwParams};
