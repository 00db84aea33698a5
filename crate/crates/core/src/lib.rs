//! Copy tree embeddings of weighted graphs and the online and demand-robust
//! group Steiner algorithms that run on top of them.

pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod online;
pub mod oracle;
pub mod robust;

pub use error::{Error, Result};
