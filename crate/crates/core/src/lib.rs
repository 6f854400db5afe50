pub mod demos;
pub mod error;
pub mod hilbert;
pub mod holo;
pub mod laxmilgram;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod sector;
pub mod semigroup;
pub mod wire;

pub use error::{Error, Result};
