pub mod cli;
pub mod error;
pub mod numeric;
pub mod purity;
pub mod scatter;
pub mod smatrix;
pub mod transforms;
pub mod wavepacket;

pub use error::{Error, Result};
