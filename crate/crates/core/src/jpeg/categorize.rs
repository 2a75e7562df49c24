//! DC difference categories and AC run/category symbols.

use std::fmt;

use crate::error::{Error, Result};
use crate::jpeg::transform::BlockSpectrum;
use crate::table::Symbol;

pub const MAX_CATEGORY: u8 = 11;

/// Alphabet size of DC category symbols.
pub const DC_ALPHABET: usize = MAX_CATEGORY as usize + 1;

/// Alphabet size of run/category symbols, addressed as `run << 4 | category`.
pub const AC_ALPHABET: usize = 256;

/// Number of magnitude bits of `v`.
pub fn category(v: i32) -> Result<u8> {
    let c = 32 - v.unsigned_abs().leading_zeros();
    if c > MAX_CATEGORY as u32 {
        return Err(Error::Overflow(v));
    }
    Ok(c as u8)
}

/// Position of `v` inside its category: nonnegative values map to
/// themselves, negative ones to `v + 2^c - 1`.
pub fn value_index(v: i32, category: u8) -> u32 {
    if v >= 0 {
        v as u32
    } else {
        (v + (1 << category) - 1) as u32
    }
}

pub fn value_from_index(index: u32, category: u8) -> i32 {
    if category == 0 {
        return 0;
    }
    if index < 1 << (category - 1) {
        index as i32 - ((1 << category) - 1)
    } else {
        index as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunCategory {
    pub run: u8,
    pub category: u8,
}

impl RunCategory {
    pub const EOB: RunCategory = RunCategory { run: 0, category: 0 };
    pub const ZRL: RunCategory = RunCategory { run: 15, category: 0 };

    pub fn symbol(self) -> Symbol {
        Symbol(((self.run as usize) << 4) | self.category as usize)
    }

    pub fn from_symbol(s: Symbol) -> Result<Self> {
        let rc = RunCategory {
            run: (s.0 >> 4) as u8,
            category: (s.0 & 0xf) as u8,
        };
        let valid = s.0 < AC_ALPHABET
            && rc.category <= MAX_CATEGORY
            && (rc.category > 0 || rc == Self::EOB || rc == Self::ZRL);
        if !valid {
            return Err(Error::input(format!("symbol {} is not a run/category", s.0)));
        }
        Ok(rc)
    }
}

impl fmt::Display for RunCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::EOB => f.write_str("EOB"),
            Self::ZRL => f.write_str("ZRL"),
            RunCategory { run, category } => write!(f, "{run}/{category}"),
        }
    }
}

/// Fixed-length payload of one nonzero coefficient or DC difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodedValue {
    pub category: u8,
    pub index: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Categorized {
    /// One DC difference category per block.
    pub dc: Vec<u8>,
    pub ac: Vec<RunCategory>,
    /// Per block: the DC value (when its category is nonzero) followed by
    /// the nonzero AC values.
    pub values: Vec<CodedValue>,
}

pub fn categorize(blocks: &[BlockSpectrum]) -> Result<Categorized> {
    let mut out = Categorized::default();
    let mut prev_dc = 0;
    for b in blocks {
        let diff = b.dc - prev_dc;
        prev_dc = b.dc;
        let c = category(diff)?;
        out.dc.push(c);
        if c > 0 {
            out.values.push(CodedValue {
                category: c,
                index: value_index(diff, c),
            });
        }

        let mut run = 0u8;
        for &v in &b.ac {
            if v == 0 {
                run += 1;
                continue;
            }
            while run > 15 {
                out.ac.push(RunCategory::ZRL);
                run -= 16;
            }
            let c = category(v)?;
            out.ac.push(RunCategory { run, category: c });
            out.values.push(CodedValue {
                category: c,
                index: value_index(v, c),
            });
            run = 0;
        }
        if run > 0 {
            out.ac.push(RunCategory::EOB);
        }
    }
    Ok(out)
}

/// Rebuilds `blocks` spectra; every input stream must be consumed exactly.
pub fn uncategorize(c: &Categorized, blocks: usize) -> Result<Vec<BlockSpectrum>> {
    if c.dc.len() != blocks {
        return Err(Error::desync(c.dc.len().min(blocks), format!("{} DC categories for {blocks} blocks", c.dc.len())));
    }
    let mut values = c.values.iter().enumerate();
    let mut next_value = |category: u8| -> Result<i32> {
        let (i, v) = values
            .next()
            .ok_or_else(|| Error::desync(c.values.len(), "value stream exhausted"))?;
        if v.category != category {
            return Err(Error::desync(i, format!("value of category {} where {category} was expected", v.category)));
        }
        Ok(value_from_index(v.index, category))
    };
    let mut ac = c.ac.iter().enumerate();
    let mut out = Vec::with_capacity(blocks);
    let mut prev_dc = 0;
    for &dc_cat in &c.dc {
        let mut b = BlockSpectrum::default();
        let diff = if dc_cat == 0 { 0 } else { next_value(dc_cat)? };
        b.dc = prev_dc + diff;
        prev_dc = b.dc;

        let mut k = 0;
        while k < 63 {
            let (i, &rc) = ac
                .next()
                .ok_or_else(|| Error::desync(c.ac.len(), "run/category stream exhausted"))?;
            if rc == RunCategory::EOB {
                break;
            }
            let run = if rc == RunCategory::ZRL { 16 } else { rc.run as usize };
            if k + run + usize::from(rc != RunCategory::ZRL) > 63 {
                return Err(Error::desync(i, format!("{rc} overruns the block")));
            }
            k += run;
            if rc != RunCategory::ZRL {
                b.ac[k] = next_value(rc.category)?;
                k += 1;
            }
        }
        out.push(b);
    }
    if let Some((i, _)) = ac.next() {
        return Err(Error::desync(i, "trailing run/category symbols"));
    }
    if let Some((i, _)) = values.next() {
        return Err(Error::desync(i, "trailing values"));
    }
    Ok(out)
}
