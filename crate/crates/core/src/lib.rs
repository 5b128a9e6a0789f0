//! Simulation and validation of Pauli-twirled noisy circuits through the
//! binary Fourier expansion of their output distributions.

pub mod bits;
pub mod circuit;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod fast;
pub mod fourier;
pub mod oracle;
pub mod pauli;
pub mod rng;
pub mod schema;
pub mod stabilizer;

pub use bits::Bits;
pub use error::{Error, Result};
