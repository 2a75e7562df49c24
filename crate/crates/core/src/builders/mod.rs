//! Code tree constructions.

mod huffman;
mod sfc;

pub use huffman::{huffman_build, huffman_constrained_build};
pub use sfc::{partition, sfc_build};

use crate::codebook::{codebook_from_tree, BuilderKind, Codebook};
use crate::error::{Error, Result};
use crate::table::FrequencyTable;
use crate::tree::CodeTree;

/// Ordering rule applied before any split or merge. Only one rule exists:
/// decreasing count, then ascending symbol id.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    AscendingId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuilderConfig {
    /// Longest homopolymer run tolerated inside a codeword.
    pub max_hl: usize,
    pub tie_break: TieBreak,
}

impl BuilderConfig {
    pub fn new(max_hl: usize) -> Self {
        BuilderConfig {
            max_hl,
            tie_break: TieBreak::AscendingId,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_hl < 2 {
            return Err(Error::config(format!("max_hl must be at least 2, got {}", self.max_hl)));
        }
        Ok(())
    }
}

impl Default for BuilderConfig {
    fn default() -> Self {
        BuilderConfig::new(3)
    }
}

/// A tree and the codebook read off it.
#[derive(Debug, Clone)]
pub struct Code {
    pub tree: CodeTree,
    pub book: Codebook,
}

impl Code {
    /// Builds the code of the given kind. `max_hl` only matters for the
    /// constrained builders.
    pub fn build(kind: BuilderKind, table: &FrequencyTable, max_hl: usize) -> Result<Code> {
        let cfg = BuilderConfig::new(max_hl);
        let (tree, hl) = match kind {
            BuilderKind::Sfc => (sfc_build(table, &cfg)?, Some(max_hl)),
            BuilderKind::Huffman4Constrained => (huffman_constrained_build(table, &cfg)?, Some(max_hl)),
            BuilderKind::Huffman2 => (huffman_build(table, 2)?, None),
            BuilderKind::Huffman3 | BuilderKind::Goldman => (huffman_build(table, 3)?, None),
            BuilderKind::Huffman4 => (huffman_build(table, 4)?, None),
        };
        let book = codebook_from_tree(&tree, kind, hl)?;
        Ok(Code { tree, book })
    }

    pub fn from_book(book: Codebook) -> Result<Code> {
        let tree = book.to_tree()?;
        Ok(Code { tree, book })
    }
}
