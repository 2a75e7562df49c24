//! Fixed-length coder over the twelve nucleotide pairs with distinct bases.
//!
//! A category-`c` value index is written as base-12 digits, most significant
//! first, using the fewest pairs `p` with `12^p >= 2^c`. Header bytes go in
//! groups of three (seven pairs), with a trailing group of one or two bytes
//! taking three or five pairs.

use crate::error::{Error, Result};
use crate::nucleotide::{Nucleotide, NucleotideStream};

use Nucleotide::{A, C, G, T};

pub const PAIRS: [[Nucleotide; 2]; 12] = [
    [A, C],
    [A, G],
    [A, T],
    [C, A],
    [C, G],
    [C, T],
    [G, A],
    [G, C],
    [G, T],
    [T, A],
    [T, C],
    [T, G],
];

fn pair_digit(a: Nucleotide, b: Nucleotide) -> Option<u8> {
    PAIRS.iter().position(|p| *p == [a, b]).map(|d| d as u8)
}

/// Fewest pairs whose base-12 range covers `bits` bits.
pub fn pairs_for_bits(bits: u32) -> usize {
    let mut p = 0;
    let mut span: u64 = 1;
    while span < 1u64 << bits {
        span *= 12;
        p += 1;
    }
    p
}

pub fn write_digits(out: &mut NucleotideStream, value: u64, pairs: usize) {
    let mut digits = vec![0u8; pairs];
    let mut v = value;
    for d in digits.iter_mut().rev() {
        *d = (v % 12) as u8;
        v /= 12;
    }
    debug_assert_eq!(v, 0, "value does not fit {pairs} pairs");
    for d in digits {
        let [a, b] = PAIRS[d as usize];
        out.push(a);
        out.push(b);
    }
}

/// Cursor over a pair-coded stream.
pub struct PairReader<'a> {
    bases: &'a [Nucleotide],
    pos: usize,
}

impl<'a> PairReader<'a> {
    pub fn new(stream: &'a NucleotideStream) -> Self {
        PairReader {
            bases: stream.as_slice(),
            pos: 0,
        }
    }

    pub fn offset(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bases.len() - self.pos
    }

    pub fn read_digits(&mut self, pairs: usize) -> Result<u64> {
        let mut v: u64 = 0;
        for _ in 0..pairs {
            if self.remaining() < 2 {
                return Err(Error::desync(self.bases.len(), "pair stream ends inside a value"));
            }
            let (a, b) = (self.bases[self.pos], self.bases[self.pos + 1]);
            let d = pair_digit(a, b)
                .ok_or_else(|| Error::desync(self.pos, format!("{a}{b} is not a dictionary pair")))?;
            v = v * 12 + d as u64;
            self.pos += 2;
        }
        Ok(v)
    }
}

pub fn encode_value(out: &mut NucleotideStream, index: u32, category: u8) {
    write_digits(out, index as u64, pairs_for_bits(category as u32));
}

pub fn decode_value(r: &mut PairReader<'_>, category: u8) -> Result<u32> {
    let at = r.offset();
    let v = r.read_digits(pairs_for_bits(category as u32))?;
    if v >= 1 << category {
        return Err(Error::Corrupt {
            offset: at,
            reason: format!("index {v} out of range for category {category}"),
        });
    }
    Ok(v as u32)
}

pub fn encode_bytes(bytes: &[u8]) -> NucleotideStream {
    let mut out = NucleotideStream::new();
    for chunk in bytes.chunks(3) {
        let v = chunk.iter().fold(0u64, |acc, &b| acc << 8 | b as u64);
        write_digits(&mut out, v, pairs_for_bits(8 * chunk.len() as u32));
    }
    out
}

pub fn decode_bytes(stream: &NucleotideStream) -> Result<Vec<u8>> {
    let full = pairs_for_bits(24);
    let pairs = stream.len() / 2;
    let tail = pairs % full;
    let tail_bytes = match tail {
        0 => 0,
        t if t == pairs_for_bits(8) => 1,
        t if t == pairs_for_bits(16) => 2,
        _ => return Err(Error::desync(stream.len(), format!("{pairs} pairs do not frame whole bytes"))),
    };
    if stream.len() % 2 != 0 {
        return Err(Error::desync(stream.len() - 1, "odd number of nucleotides in pair stream"));
    }
    let mut r = PairReader::new(stream);
    let mut out = Vec::with_capacity(pairs / full * 3 + tail_bytes);
    let mut read_group = |n: usize, r: &mut PairReader<'_>| -> Result<()> {
        let at = r.offset();
        let v = r.read_digits(pairs_for_bits(8 * n as u32))?;
        if v >= 1 << (8 * n) {
            return Err(Error::Corrupt {
                offset: at,
                reason: format!("group value {v} exceeds {n} bytes"),
            });
        }
        for i in (0..n).rev() {
            out.push((v >> (8 * i)) as u8);
        }
        Ok(())
    };
    for _ in 0..pairs / full {
        read_group(3, &mut r)?;
    }
    if tail_bytes > 0 {
        read_group(tail_bytes, &mut r)?;
    }
    Ok(out)
}
