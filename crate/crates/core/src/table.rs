//! Symbols and frequency tables.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index into an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub usize);

impl Symbol {
    pub fn id(self) -> usize {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Occurrence counts over an alphabet `0..len()`.
///
/// Symbols are identified by position; an optional label table carries
/// human-readable names for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl FrequencyTable {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        FrequencyTable {
            counts,
            labels: None,
        }
    }

    /// Counts occurrences of each id in `symbols`, over an alphabet of `alphabet_size`.
    pub fn from_symbols(symbols: &[Symbol], alphabet_size: usize) -> Result<Self> {
        let mut counts = vec![0u64; alphabet_size];
        for s in symbols {
            let slot = counts.get_mut(s.0).ok_or_else(|| {
                Error::input(format!("symbol {} outside alphabet of size {alphabet_size}", s.0))
            })?;
            *slot += 1;
        }
        Ok(Self::from_counts(counts))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.counts.len() {
            return Err(Error::input(format!(
                "{} labels for an alphabet of {} symbols",
                labels.len(),
                self.counts.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, symbol: Symbol) -> u64 {
        self.counts.get(symbol.0).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn probability(&self, symbol: Symbol) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.count(symbol) as f64 / total as f64
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    pub fn label(&self, symbol: Symbol) -> String {
        match &self.labels {
            Some(labels) => labels[symbol.0].clone(),
            None => symbol.0.to_string(),
        }
    }

    /// Number of symbols with a positive count.
    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Positive-count symbols sorted by decreasing count, ties by ascending id.
    pub fn sorted_support(&self) -> Vec<(Symbol, u64)> {
        let mut v: Vec<(Symbol, u64)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Symbol(i), c))
            .collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    /// Element-wise sum; the result spans the larger alphabet.
    pub fn merged(&self, other: &FrequencyTable) -> FrequencyTable {
        let n = self.len().max(other.len());
        let counts = (0..n)
            .map(|i| self.counts.get(i).unwrap_or(&0) + other.counts.get(i).unwrap_or(&0))
            .collect();
        FrequencyTable {
            counts,
            labels: if self.len() >= other.len() {
                self.labels.clone()
            } else {
                other.labels.clone()
            },
        }
    }

    /// Reads a `symbol,count` CSV.
    ///
    /// When every symbol field is an integer it is taken as the symbol id and
    /// missing ids get a zero count. Otherwise the fields are labels and ids
    /// follow row order.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Csv {
            row: 1,
            reason: e.to_string(),
        })?;
        if headers.len() < 2 || &headers[0] != "symbol" || &headers[1] != "count" {
            return Err(Error::Csv {
                row: 1,
                reason: format!("expected header `symbol,count`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut rows: Vec<(String, u64)> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| Error::Csv {
                row,
                reason: e.to_string(),
            })?;
            if rec.len() < 2 {
                return Err(Error::Csv {
                    row,
                    reason: "expected two fields".into(),
                });
            }
            let count: u64 = rec[1].parse().map_err(|_| Error::Csv {
                row,
                reason: format!("count `{}` is not a nonnegative integer", &rec[1]),
            })?;
            rows.push((rec[0].to_string(), count));
        }
        if rows.is_empty() {
            return Err(Error::Csv {
                row: 2,
                reason: "table has no rows".into(),
            });
        }

        let ids: Option<Vec<usize>> = rows.iter().map(|(s, _)| s.parse().ok()).collect();
        match ids {
            Some(ids) => {
                let size = ids.iter().max().copied().unwrap_or(0) + 1;
                let mut counts = vec![0u64; size];
                let mut seen = vec![false; size];
                for (row, (&id, (_, c))) in ids.iter().zip(&rows).enumerate() {
                    if seen[id] {
                        return Err(Error::Csv {
                            row: row + 2,
                            reason: format!("duplicate symbol {id}"),
                        });
                    }
                    seen[id] = true;
                    counts[id] = *c;
                }
                Ok(Self::from_counts(counts))
            }
            None => {
                let mut labels = Vec::with_capacity(rows.len());
                let mut counts = Vec::with_capacity(rows.len());
                for (row, (label, c)) in rows.into_iter().enumerate() {
                    if labels.contains(&label) {
                        return Err(Error::Csv {
                            row: row + 2,
                            reason: format!("duplicate symbol `{label}`"),
                        });
                    }
                    labels.push(label);
                    counts.push(c);
                }
                Ok(FrequencyTable {
                    counts,
                    labels: Some(labels),
                })
            }
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["symbol", "count"]).map_err(io)?;
        for (i, c) in self.counts.iter().enumerate() {
            w.write_record([self.label(Symbol(i)), c.to_string()]).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}
