//! I/O surface for the unipotent split/special toolkit: JSON input
//! formats, certificate serialization, and the classification pipeline.

pub mod certificate;
pub mod input;
pub mod pipeline;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
