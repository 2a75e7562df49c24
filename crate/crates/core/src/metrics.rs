//! Entropy, expected length, rate and distortion measurements.

use serde::{Deserialize, Serialize};

use crate::builders::Code;
use crate::codebook::{BuilderKind, Codebook};
use crate::error::{Error, Result};
use crate::jpeg::GrayImage;
use crate::nucleotide::{max_homopolymer_run, max_run, NucleotideStream};
use crate::table::{FrequencyTable, Symbol};
use crate::transcode::encode_message;

/// Shannon entropy of `table` in base-`base` units per symbol.
pub fn entropy(table: &FrequencyTable, base: u32) -> Result<f64> {
    if base < 2 {
        return Err(Error::config(format!("entropy base must be at least 2, got {base}")));
    }
    let total = table.total();
    if total == 0 {
        return Err(Error::input("entropy of an empty table"));
    }
    let total = total as f64;
    let nats: f64 = table
        .counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum();
    Ok(nats / (base as f64).ln())
}

/// Probability-weighted codeword length, in code symbols per source symbol.
pub fn expected_length(book: &Codebook, table: &FrequencyTable) -> Result<f64> {
    let total = table.total();
    if total == 0 {
        return Err(Error::input("expected length over an empty table"));
    }
    let mut weighted: u128 = 0;
    for (i, &c) in table.counts().iter().enumerate() {
        if c > 0 {
            weighted += c as u128 * book.codeword(Symbol(i))?.len() as u128;
        }
    }
    Ok(weighted as f64 / total as f64)
}

/// Source size in bits over stream length in nucleotides.
pub fn compression_ratio_bits_per_nt(source_bits: u64, nucleotides: usize) -> Result<f64> {
    if nucleotides == 0 {
        return Err(Error::input("compression ratio over an empty nucleotide stream"));
    }
    Ok(source_bits as f64 / nucleotides as f64)
}

pub fn compression_ratio_of(source_bits: u64, stream: &NucleotideStream) -> Result<f64> {
    compression_ratio_bits_per_nt(source_bits, stream.len())
}

/// Peak signal-to-noise ratio for 8-bit samples; `f64::INFINITY` when the
/// images are identical.
pub fn psnr(original: &GrayImage, reconstructed: &GrayImage) -> Result<f64> {
    if original.dimensions() != reconstructed.dimensions() {
        return Err(Error::input(format!(
            "psnr of {:?} against {:?}",
            original.dimensions(),
            reconstructed.dimensions()
        )));
    }
    if original.pixels().is_empty() {
        return Err(Error::input("psnr of empty images"));
    }
    let sse: u64 = original
        .pixels()
        .iter()
        .zip(reconstructed.pixels())
        .map(|(&a, &b)| {
            let d = a as i64 - b as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / original.pixels().len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Rate figures of one coder on one source realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoderRate {
    pub coder: BuilderKind,
    /// From the table the code was built on.
    pub expected_length: f64,
    /// Emitted code symbols divided by the realization's sample count.
    pub sample_length: f64,
    /// Longest run in the transcoded realization, for nucleotide coders.
    pub max_homopolymer: Option<usize>,
    /// Longest run inside any single transcoded codeword.
    pub max_codeword_run: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub source: String,
    pub realization: usize,
    pub sample_count: usize,
    pub entropy_2: f64,
    pub entropy_3: f64,
    pub entropy_4: f64,
    pub coders: Vec<CoderRate>,
}

impl RateReport {
    pub fn coder(&self, kind: BuilderKind) -> Option<&CoderRate> {
        self.coders.iter().find(|c| c.coder == kind)
    }

    pub fn entropy(&self, base: u32) -> Option<f64> {
        match base {
            2 => Some(self.entropy_2),
            3 => Some(self.entropy_3),
            4 => Some(self.entropy_4),
            _ => None,
        }
    }
}

/// Builds every coder in `coders` on `table` and measures it on `sample`.
/// Entropies and expected lengths come from `table`; the sample supplies the
/// emitted length and the homopolymer figures.
pub fn rate_report(
    source: &str,
    realization: usize,
    table: &FrequencyTable,
    sample: &[Symbol],
    coders: &[BuilderKind],
    max_hl: usize,
) -> Result<RateReport> {
    if sample.is_empty() {
        return Err(Error::input("rate report over an empty sample"));
    }
    let mut rates = Vec::with_capacity(coders.len());
    for &kind in coders {
        let code = Code::build(kind, table, max_hl)?;
        let expected = expected_length(&code.book, table)?;
        let rate = if kind == BuilderKind::Huffman2 {
            let bits = code.book.encode(sample)?;
            CoderRate {
                coder: kind,
                expected_length: expected,
                sample_length: bits.len() as f64 / sample.len() as f64,
                max_homopolymer: None,
                max_codeword_run: None,
            }
        } else {
            let stream = encode_message(&code, sample)?;
            let mut at = 0;
            let mut inner = 0;
            for &s in sample {
                let n = code.book.codeword(s)?.len();
                inner = inner.max(max_run(&stream.as_slice()[at..at + n]));
                at += n;
            }
            CoderRate {
                coder: kind,
                expected_length: expected,
                sample_length: stream.len() as f64 / sample.len() as f64,
                max_homopolymer: Some(max_homopolymer_run(&stream)),
                max_codeword_run: Some(inner),
            }
        };
        rates.push(rate);
    }
    Ok(RateReport {
        source: source.to_string(),
        realization,
        sample_count: sample.len(),
        entropy_2: entropy(table, 2)?,
        entropy_3: entropy(table, 3)?,
        entropy_4: entropy(table, 4)?,
        coders: rates,
    })
}
