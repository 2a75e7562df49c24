//! Variable-length codes over the nucleotide alphabet with bounded
//! homopolymer runs, together with the transcoders, rate metrics, sources and
//! an image pipeline built on them.

pub mod builders;
pub mod codebook;
pub mod error;
pub mod jpeg;
pub mod metrics;
pub mod nucleotide;
pub mod sources;
pub mod table;
pub mod transcode;
pub mod tree;

pub use builders::{BuilderConfig, Code};
pub use codebook::{BuilderKind, Codebook, Codeword};
pub use error::{Error, Result};
pub use nucleotide::{Nucleotide, NucleotideStream};
pub use table::{FrequencyTable, Symbol};
pub use tree::CodeTree;
