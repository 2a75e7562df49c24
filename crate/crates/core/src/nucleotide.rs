//! Nucleotide streams and their FASTA-like file format.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleotide {
    A,
    C,
    G,
    T,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'A' => Some(Nucleotide::A),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            'T' => Some(Nucleotide::T),
            _ => None,
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NucleotideStream(Vec<Nucleotide>);

impl NucleotideStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Nucleotide] {
        &self.0
    }

    pub fn push(&mut self, n: Nucleotide) {
        self.0.push(n);
    }

    pub fn last(&self) -> Option<Nucleotide> {
        self.0.last().copied()
    }

    pub fn extend_from(&mut self, other: &NucleotideStream) {
        self.0.extend_from_slice(&other.0);
    }
}

impl From<Vec<Nucleotide>> for NucleotideStream {
    fn from(v: Vec<Nucleotide>) -> Self {
        NucleotideStream(v)
    }
}

impl FromIterator<Nucleotide> for NucleotideStream {
    fn from_iter<I: IntoIterator<Item = Nucleotide>>(iter: I) -> Self {
        NucleotideStream(iter.into_iter().collect())
    }
}

impl fmt::Display for NucleotideStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.0 {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for NucleotideStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                Nucleotide::from_char(c)
                    .ok_or_else(|| Error::input(format!("character `{c}` at offset {i} is not a nucleotide")))
            })
            .collect()
    }
}

/// Longest run of one repeated nucleotide; 0 for an empty slice.
pub fn max_run(bases: &[Nucleotide]) -> usize {
    bases
        .chunk_by(|a, b| a == b)
        .map(<[Nucleotide]>::len)
        .max()
        .unwrap_or(0)
}

pub fn max_homopolymer_run(stream: &NucleotideStream) -> usize {
    max_run(stream.as_slice())
}

pub const FASTA_LINE_WIDTH: usize = 80;

/// One `>name meta=json` record.
#[derive(Debug, Clone, PartialEq)]
pub struct FastaRecord {
    pub name: String,
    pub meta: serde_json::Value,
    pub seq: NucleotideStream,
}

pub fn write_fasta<W: Write>(mut w: W, records: &[FastaRecord]) -> Result<()> {
    for r in records {
        if r.name.is_empty() || r.name.contains(char::is_whitespace) {
            return Err(Error::input(format!("record name `{}` must be a single word", r.name)));
        }
        writeln!(w, ">{} meta={}", r.name, serde_json::to_string(&r.meta)?)?;
        let text = r.seq.to_string();
        for chunk in text.as_bytes().chunks(FASTA_LINE_WIDTH) {
            w.write_all(chunk)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn read_fasta<R: BufRead>(r: R) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        let lineno = i + 1;
        if let Some(header) = line.strip_prefix('>') {
            let (name, rest) = header.split_once(' ').unwrap_or((header, ""));
            let meta = match rest.trim().strip_prefix("meta=") {
                Some(json) => serde_json::from_str(json)
                    .map_err(|e| Error::input(format!("line {lineno}: bad meta json: {e}")))?,
                None if rest.trim().is_empty() => serde_json::Value::Null,
                None => return Err(Error::input(format!("line {lineno}: expected `meta=` after record name"))),
            };
            records.push(FastaRecord {
                name: name.to_string(),
                meta,
                seq: NucleotideStream::new(),
            });
        } else if line.is_empty() {
            continue;
        } else {
            let rec = records
                .last_mut()
                .ok_or_else(|| Error::input(format!("line {lineno}: sequence before first header")))?;
            if line.len() > FASTA_LINE_WIDTH {
                return Err(Error::input(format!("line {lineno}: longer than {FASTA_LINE_WIDTH} characters")));
            }
            for (col, c) in line.chars().enumerate() {
                let n = Nucleotide::from_char(c).ok_or_else(|| {
                    Error::input(format!("line {lineno} column {}: `{c}` is not a nucleotide", col + 1))
                })?;
                rec.seq.push(n);
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> NucleotideStream {
        x.parse().unwrap()
    }

    #[test]
    fn runs() {
        assert_eq!(max_homopolymer_run(&s("AAAAA")), 5);
        assert_eq!(max_homopolymer_run(&s("ACGT")), 1);
        assert_eq!(max_homopolymer_run(&s("")), 0);
        assert_eq!(max_homopolymer_run(&s("ACCCGGT")), 3);
    }

    #[test]
    fn rejects_non_acgt() {
        assert!("ACGU".parse::<NucleotideStream>().is_err());
        assert!("acgt".parse::<NucleotideStream>().is_err());
    }

    #[test]
    fn fasta_roundtrip_wraps_lines() {
        let long: String = "ACGT".repeat(50);
        let recs = vec![
            FastaRecord {
                name: "payload".into(),
                meta: serde_json::json!({"symbols": 3}),
                seq: s(&long),
            },
            FastaRecord {
                name: "empty".into(),
                meta: serde_json::json!({}),
                seq: NucleotideStream::new(),
            },
        ];
        let mut buf = Vec::new();
        write_fasta(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().all(|l| l.len() <= 80 || l.starts_with('>')));
        assert!(text.starts_with(">payload meta={\"symbols\":3}\n"));
        assert_eq!(read_fasta(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn fasta_errors_are_positioned() {
        let err = read_fasta(">x meta={}\nACGX\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2 column 4"), "{err}");
        assert!(read_fasta("ACGT\n".as_bytes()).is_err());
    }
}
