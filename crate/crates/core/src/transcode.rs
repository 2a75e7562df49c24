//! Base sequences to nucleotides and back.
//!
//! Unconstrained positions use the fixed quaternary table
//! `0→A, 1→T, 2→C, 3→G`. Constrained positions, and every position of a
//! Goldman stream, use the rotating ternary table: the three nucleotides
//! other than the previous one, in the order `A, T, C, G`.
//!
//! The previous nucleotide starts as [`INITIAL_PREV`] and carries over the
//! whole stream. The position counter of the constrained coder restarts at
//! 1 with every codeword.

use crate::builders::Code;
use crate::codebook::{BuilderKind, Codeword};
use crate::error::{Error, Result};
use crate::nucleotide::{Nucleotide, NucleotideStream};
use crate::table::{FrequencyTable, Symbol};
use crate::tree::CodeTree;

use Nucleotide::{A, C, G, T};

/// State assumed before the first emitted nucleotide.
pub const INITIAL_PREV: Nucleotide = A;

const QUATERNARY: [Nucleotide; 4] = [A, T, C, G];

pub fn quaternary_base(base: u8) -> Nucleotide {
    QUATERNARY[base as usize]
}

pub fn quaternary_inverse(n: Nucleotide) -> u8 {
    match n {
        A => 0,
        T => 1,
        C => 2,
        G => 3,
    }
}

/// Rotating table lookup; `None` for bases above 2.
pub fn rotating_base(prev: Nucleotide, base: u8) -> Option<Nucleotide> {
    QUATERNARY
        .iter()
        .copied()
        .filter(|&n| n != prev)
        .nth(base as usize)
        .filter(|_| base < 3)
}

/// Inverse rotating lookup; `None` when `n` repeats `prev`.
pub fn rotating_inverse(prev: Nucleotide, n: Nucleotide) -> Option<u8> {
    if n == prev {
        return None;
    }
    let q = quaternary_inverse(n);
    Some(if quaternary_inverse(prev) < q { q - 1 } else { q })
}

/// Sequential transcoder state shared by both coders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranscoderState {
    pub prev: Nucleotide,
    /// Position inside the current codeword, starting at 1.
    pub position: usize,
}

impl Default for TranscoderState {
    fn default() -> Self {
        TranscoderState {
            prev: INITIAL_PREV,
            position: 1,
        }
    }
}

/// How codeword positions map to tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Every position rotates (Goldman).
    Rotating,
    /// Positions divisible by `max_hl` rotate, the others are quaternary.
    Constrained(usize),
    /// Every position is quaternary.
    Quaternary,
}

impl Schedule {
    fn rotates(self, position: usize) -> bool {
        match self {
            Schedule::Rotating => true,
            Schedule::Constrained(m) => position % m == 0,
            Schedule::Quaternary => false,
        }
    }

    /// Schedule matching a builder's codewords.
    pub fn for_builder(kind: BuilderKind, max_hl: Option<usize>) -> Result<Schedule> {
        match kind {
            BuilderKind::Sfc | BuilderKind::Huffman4Constrained => {
                let m = max_hl.ok_or_else(|| Error::config(format!("{kind} codebook without max_hl")))?;
                if m < 2 {
                    return Err(Error::config(format!("max_hl must be at least 2, got {m}")));
                }
                Ok(Schedule::Constrained(m))
            }
            BuilderKind::Goldman | BuilderKind::Huffman3 => Ok(Schedule::Rotating),
            BuilderKind::Huffman4 => Ok(Schedule::Quaternary),
            BuilderKind::Huffman2 => Err(Error::config("binary codes have no nucleotide mapping")),
        }
    }
}

/// Stateful encoder over a sequence of codewords.
#[derive(Debug, Clone)]
pub struct Transcoder {
    schedule: Schedule,
    state: TranscoderState,
    out: NucleotideStream,
}

impl Transcoder {
    pub fn new(schedule: Schedule) -> Self {
        Transcoder {
            schedule,
            state: TranscoderState::default(),
            out: NucleotideStream::new(),
        }
    }

    pub fn state(&self) -> TranscoderState {
        self.state
    }

    /// Appends one codeword and returns the number of nucleotides emitted.
    pub fn push(&mut self, word: &Codeword) -> Result<usize> {
        self.state.position = 1;
        for &b in word.bases() {
            let n = if self.schedule.rotates(self.state.position) {
                rotating_base(self.state.prev, b).ok_or_else(|| Error::Corrupt {
                    offset: self.out.len(),
                    reason: format!("base {b} at constrained position {}", self.state.position),
                })?
            } else {
                quaternary_base(b)
            };
            self.out.push(n);
            self.state.prev = n;
            self.state.position += 1;
        }
        Ok(word.len())
    }

    pub fn output(&self) -> &NucleotideStream {
        &self.out
    }

    pub fn finish(self) -> NucleotideStream {
        self.out
    }
}

/// Decodes a whole stream by walking `tree` once per symbol.
pub fn detranscode(stream: &NucleotideStream, tree: &CodeTree, schedule: Schedule) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut prev = INITIAL_PREV;
    let mut node = tree;
    let mut position = 1;
    for (offset, &n) in stream.as_slice().iter().enumerate() {
        let label = if schedule.rotates(position) {
            rotating_inverse(prev, n)
                .ok_or_else(|| Error::desync(offset, format!("{n} repeats the previous nucleotide at a rotating position")))?
        } else {
            quaternary_inverse(n)
        };
        node = node
            .child(label)
            .ok_or_else(|| Error::desync(offset, format!("no edge labeled {label} at codeword position {position}")))?;
        prev = n;
        position += 1;
        if let CodeTree::Leaf(s) = node {
            out.push(*s);
            node = tree;
            position = 1;
        }
    }
    if position != 1 {
        return Err(Error::desync(stream.len(), "stream ends inside a codeword"));
    }
    Ok(out)
}

/// Transcodes codewords of a constrained tree built with the same `max_hl`.
pub fn sfc_transcode<'a, I>(codewords: I, max_hl: usize) -> Result<NucleotideStream>
where
    I: IntoIterator<Item = &'a Codeword>,
{
    let mut t = Transcoder::new(Schedule::for_builder(BuilderKind::Sfc, Some(max_hl))?);
    for w in codewords {
        t.push(w)?;
    }
    Ok(t.finish())
}

pub fn sfc_detranscode(stream: &NucleotideStream, tree: &CodeTree, max_hl: usize) -> Result<Vec<Symbol>> {
    detranscode(stream, tree, Schedule::for_builder(BuilderKind::Sfc, Some(max_hl))?)
}

/// Transcodes ternary codewords with the rotating table at every position.
pub fn goldman_transcode<'a, I>(codewords: I) -> Result<NucleotideStream>
where
    I: IntoIterator<Item = &'a Codeword>,
{
    let mut t = Transcoder::new(Schedule::Rotating);
    for w in codewords {
        t.push(w)?;
    }
    Ok(t.finish())
}

/// Ternary Huffman code for `table` composed with the rotating transcoder.
pub fn goldman_encode(message: &[Symbol], table: &FrequencyTable) -> Result<NucleotideStream> {
    let code = Code::build(BuilderKind::Goldman, table, 3)?;
    let words = message
        .iter()
        .map(|&s| code.book.get(s).ok_or_else(|| Error::input(format!("symbol {s} not in the frequency table"))))
        .collect::<Result<Vec<_>>>()?;
    goldman_transcode(words)
}

pub fn goldman_decode(stream: &NucleotideStream, tree: &CodeTree) -> Result<Vec<Symbol>> {
    detranscode(stream, tree, Schedule::Rotating)
}

/// Encodes a message with any nucleotide-producing code.
pub fn encode_message(code: &Code, message: &[Symbol]) -> Result<NucleotideStream> {
    let schedule = Schedule::for_builder(code.book.builder(), code.book.max_hl())?;
    let mut t = Transcoder::new(schedule);
    for &s in message {
        t.push(code.book.codeword(s)?)?;
    }
    Ok(t.finish())
}

pub fn decode_message(code: &Code, stream: &NucleotideStream) -> Result<Vec<Symbol>> {
    let schedule = Schedule::for_builder(code.book.builder(), code.book.max_hl())?;
    detranscode(stream, &code.tree, schedule)
}
