//! Byte files coded as one nucleotide record with the codebook in its header.

use dnavlc::builders::Code;
use dnavlc::nucleotide::FastaRecord;
use dnavlc::transcode::{decode_message, encode_message, INITIAL_PREV};
use dnavlc::{BuilderKind, Codebook, Error, FrequencyTable, NucleotideStream, Result, Symbol};
use serde_json::{json, Value};

pub const RECORD_NAME: &str = "payload";
const FORMAT_VERSION: u64 = 1;

/// Codes every byte of `data` with a `kind` code built on the byte histogram.
pub fn encode_bytes(data: &[u8], kind: BuilderKind, max_hl: usize) -> Result<FastaRecord> {
    if kind == BuilderKind::Huffman2 {
        return Err(Error::Config("huffman2 has no nucleotide mapping".into()));
    }
    let symbols: Vec<Symbol> = data.iter().map(|&b| Symbol(b as usize)).collect();
    let (codebook, seq) = if symbols.is_empty() {
        (Value::Null, NucleotideStream::new())
    } else {
        let table = FrequencyTable::from_symbols(&symbols, 256)?;
        let code = Code::build(kind, &table, max_hl)?;
        let seq = encode_message(&code, &symbols)?;
        (serde_json::from_str(&code.book.to_json()?)?, seq)
    };
    Ok(FastaRecord {
        name: RECORD_NAME.to_string(),
        meta: json!({
            "version": FORMAT_VERSION,
            "symbols": symbols.len(),
            "initial_prev": INITIAL_PREV.to_char().to_string(),
            "codebook": codebook,
        }),
        seq,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub bytes: Vec<u8>,
    pub warnings: Vec<String>,
}

fn corrupt(reason: impl Into<String>) -> Error {
    Error::Corrupt {
        offset: 0,
        reason: reason.into(),
    }
}

/// Inverse of [`encode_bytes`]. A `max_hl` that disagrees with the header is
/// ignored with a warning.
pub fn decode_record(rec: &FastaRecord, max_hl: Option<usize>) -> Result<Decoded> {
    if rec.name != RECORD_NAME {
        return Err(Error::Input(format!("expected a `{RECORD_NAME}` record, found `{}`", rec.name)));
    }
    let meta = &rec.meta;
    if meta.get("version").and_then(Value::as_u64) != Some(FORMAT_VERSION) {
        return Err(corrupt("missing or unsupported header version"));
    }
    if meta.get("initial_prev").and_then(Value::as_str) != Some(&INITIAL_PREV.to_char().to_string()) {
        return Err(corrupt("unsupported initial nucleotide"));
    }
    let count = meta
        .get("symbols")
        .and_then(Value::as_u64)
        .ok_or_else(|| corrupt("header lacks a symbol count"))? as usize;
    let mut warnings = Vec::new();
    let book = match meta.get("codebook") {
        Some(Value::Null) | None => None,
        Some(v) => Some(Codebook::from_json(&v.to_string()).map_err(|e| corrupt(format!("codebook: {e}")))?),
    };
    let Some(book) = book else {
        if count != 0 || !rec.seq.is_empty() {
            return Err(corrupt("payload without a codebook"));
        }
        return Ok(Decoded {
            bytes: Vec::new(),
            warnings,
        });
    };
    if let (Some(flag), Some(header)) = (max_hl, book.max_hl()) {
        if flag != header {
            warnings.push(format!("--max-hl {flag} ignored; header specifies {header}"));
        }
    }
    let code = Code::from_book(book).map_err(|e| corrupt(format!("codebook: {e}")))?;
    let symbols = decode_message(&code, &rec.seq)?;
    if symbols.len() != count {
        return Err(Error::Desync {
            offset: rec.seq.len(),
            reason: format!("decoded {} symbols, header announces {count}", symbols.len()),
        });
    }
    let bytes = symbols
        .iter()
        .map(|s| u8::try_from(s.0).map_err(|_| corrupt(format!("symbol {} is not a byte", s.0))))
        .collect::<Result<Vec<u8>>>()?;
    Ok(Decoded { bytes, warnings })
}
