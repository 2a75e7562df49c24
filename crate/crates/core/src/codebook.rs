//! Symbol to base-sequence maps derived from code trees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::Symbol;
use crate::tree::CodeTree;

/// A codeword over the base alphabet `{0, 1, 2, 3}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(Vec<u8>);

impl Codeword {
    pub fn new(bases: Vec<u8>) -> Result<Self> {
        if let Some(b) = bases.iter().find(|&&b| b > 3) {
            return Err(Error::input(format!("base {b} outside 0..=3")));
        }
        Ok(Codeword(bases))
    }

    pub fn bases(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|c| match c {
                b'0'..=b'3' => Ok(c - b'0'),
                _ => Err(Error::input(format!("codeword `{s}` has a character outside 0123"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Codeword)
    }
}

/// Which construction produced a codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuilderKind {
    Sfc,
    Huffman2,
    Huffman3,
    Huffman4,
    #[serde(rename = "huffman4c")]
    Huffman4Constrained,
    Goldman,
}

impl BuilderKind {
    /// Code alphabet size.
    pub fn radix(self) -> u32 {
        match self {
            BuilderKind::Huffman2 => 2,
            BuilderKind::Huffman3 | BuilderKind::Goldman => 3,
            _ => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuilderKind::Sfc => "sfc",
            BuilderKind::Huffman2 => "huffman2",
            BuilderKind::Huffman3 => "huffman3",
            BuilderKind::Huffman4 => "huffman4",
            BuilderKind::Huffman4Constrained => "huffman4c",
            BuilderKind::Goldman => "goldman",
        }
    }
}

impl fmt::Display for BuilderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuilderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sfc" => BuilderKind::Sfc,
            "huffman2" => BuilderKind::Huffman2,
            "huffman3" => BuilderKind::Huffman3,
            "huffman4" => BuilderKind::Huffman4,
            "huffman4c" | "huffman4-constrained" => BuilderKind::Huffman4Constrained,
            "goldman" => BuilderKind::Goldman,
            other => return Err(Error::config(format!("unknown coder `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    builder: BuilderKind,
    max_hl: Option<usize>,
    words: Vec<Option<Codeword>>,
}

/// Outcome of [`validate_prefix_free`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefixCheck {
    pub prefix_free: bool,
    pub kraft_sum: f64,
}

impl Codebook {
    pub fn new(builder: BuilderKind, max_hl: Option<usize>, words: Vec<Option<Codeword>>) -> Self {
        Codebook {
            builder,
            max_hl,
            words,
        }
    }

    pub fn builder(&self) -> BuilderKind {
        self.builder
    }

    pub fn max_hl(&self) -> Option<usize> {
        self.max_hl
    }

    pub fn radix(&self) -> u32 {
        self.builder.radix()
    }

    /// Alphabet size the book is indexed over.
    pub fn alphabet_size(&self) -> usize {
        self.words.len()
    }

    pub fn get(&self, symbol: Symbol) -> Option<&Codeword> {
        self.words.get(symbol.0).and_then(Option::as_ref)
    }

    pub fn codeword(&self, symbol: Symbol) -> Result<&Codeword> {
        self.get(symbol).ok_or(Error::Coverage(symbol.0))
    }

    /// Coded symbols in id order.
    pub fn entries(&self) -> impl Iterator<Item = (Symbol, &Codeword)> {
        self.words
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| (Symbol(i), w)))
    }

    pub fn len(&self) -> usize {
        self.entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Concatenated base sequence of a message.
    pub fn encode(&self, message: &[Symbol]) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for &s in message {
            out.extend_from_slice(self.codeword(s)?.bases());
        }
        Ok(out)
    }

    /// Inverse of [`Codebook::encode`] by walking the matching tree.
    pub fn decode(&self, bases: &[u8], tree: &CodeTree) -> Result<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut node = tree;
        for (offset, &b) in bases.iter().enumerate() {
            node = node
                .child(b)
                .ok_or_else(|| Error::desync(offset, format!("no edge labeled {b}")))?;
            if let CodeTree::Leaf(s) = node {
                out.push(*s);
                node = tree;
            }
        }
        if !std::ptr::eq(node, tree) {
            return Err(Error::desync(bases.len(), "stream ends inside a codeword"));
        }
        Ok(out)
    }

    /// Tree whose leaf paths are this book's codewords.
    pub fn to_tree(&self) -> Result<CodeTree> {
        CodeTree::from_codewords(self.entries().map(|(s, w)| (s, w.bases())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&CodebookJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: CodebookJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// Builds the symbol to codeword map from root-to-leaf edge labels.
///
/// A tree that is a bare leaf gets the codeword `0`, so that a one-symbol
/// alphabet still produces decodable streams.
pub fn codebook_from_tree(
    tree: &CodeTree,
    builder: BuilderKind,
    max_hl: Option<usize>,
) -> Result<Codebook> {
    tree.validate()?;
    let leaves = match tree {
        CodeTree::Leaf(s) => vec![(*s, vec![0u8])],
        CodeTree::Node(_) => tree.leaves(),
    };
    let size = leaves.iter().map(|(s, _)| s.0 + 1).max().unwrap_or(0);
    let mut words = vec![None; size];
    for (s, path) in leaves {
        if path.iter().any(|&b| b as u32 >= builder.radix()) {
            return Err(Error::structural(format!(
                "codeword of symbol {s} uses a base outside radix {}",
                builder.radix()
            )));
        }
        words[s.0] = Some(Codeword(path));
    }
    Ok(Codebook::new(builder, max_hl, words))
}

/// Checks that no codeword prefixes another and reports the Kraft sum.
pub fn validate_prefix_free(book: &Codebook) -> PrefixCheck {
    let mut words: Vec<&[u8]> = book.entries().map(|(_, w)| w.bases()).collect();
    words.sort_unstable();
    // in lexicographic order a prefix is immediately followed by an extension
    let prefix_free = words.windows(2).all(|w| !w[1].starts_with(w[0]))
        && words.iter().all(|w| !w.is_empty());
    let r = book.radix() as f64;
    let kraft_sum = words.iter().map(|w| r.powi(-(w.len() as i32))).sum();
    PrefixCheck {
        prefix_free,
        kraft_sum,
    }
}

#[derive(Serialize, Deserialize)]
struct CodebookJson {
    builder: BuilderKind,
    max_hl: Option<usize>,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    symbol: usize,
    codeword: String,
}

impl From<&Codebook> for CodebookJson {
    fn from(b: &Codebook) -> Self {
        CodebookJson {
            builder: b.builder,
            max_hl: b.max_hl,
            entries: b
                .entries()
                .map(|(s, w)| EntryJson {
                    symbol: s.0,
                    codeword: w.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<CodebookJson> for Codebook {
    type Error = Error;

    fn try_from(raw: CodebookJson) -> Result<Self> {
        let size = raw.entries.iter().map(|e| e.symbol + 1).max().unwrap_or(0);
        let mut words = vec![None; size];
        for e in raw.entries {
            if words[e.symbol].is_some() {
                return Err(Error::structural(format!("symbol {} listed twice", e.symbol)));
            }
            words[e.symbol] = Some(e.codeword.parse()?);
        }
        Ok(Codebook::new(raw.builder, raw.max_hl, words))
    }
}
