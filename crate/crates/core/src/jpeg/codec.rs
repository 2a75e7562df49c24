//! Two-pass image codec producing four nucleotide streams.
//!
//! Pass one gathers per-image frequency tables of DC categories and AC
//! run/category symbols. Pass two codes those symbols with the selected
//! variable-length coder and every value index with the fixed-length pair
//! coder. The header stream carries the configuration, image size and both
//! tables, pair-coded, so the decoder rebuilds identical codes.

use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::builders::Code;
use crate::codebook::BuilderKind;
use crate::error::{Error, Result};
use crate::jpeg::categorize::{categorize, uncategorize, Categorized, CodedValue, RunCategory, AC_ALPHABET, DC_ALPHABET};
use crate::jpeg::pairs::{self, PairReader};
use crate::jpeg::transform::{block_grid, forward_transform, inverse_transform, validate_quality, BlockSpectrum};
use crate::jpeg::GrayImage;
use crate::metrics::compression_ratio_bits_per_nt;
use crate::nucleotide::{max_homopolymer_run, read_fasta, write_fasta, FastaRecord, NucleotideStream};
use crate::table::{FrequencyTable, Symbol};
use crate::transcode::{decode_message, encode_message, quaternary_inverse, INITIAL_PREV};

const FORMAT_VERSION: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VlcKind {
    Sfc,
    Goldman,
}

impl VlcKind {
    pub fn builder(self) -> BuilderKind {
        match self {
            VlcKind::Sfc => BuilderKind::Sfc,
            VlcKind::Goldman => BuilderKind::Goldman,
        }
    }

    fn tag(self) -> u8 {
        match self {
            VlcKind::Sfc => 0,
            VlcKind::Goldman => 1,
        }
    }

    fn from_tag(t: u8) -> Option<Self> {
        match t {
            0 => Some(VlcKind::Sfc),
            1 => Some(VlcKind::Goldman),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VlcKind::Sfc => "sfc",
            VlcKind::Goldman => "goldman",
        }
    }
}

impl FromStr for VlcKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sfc" => Ok(VlcKind::Sfc),
            "goldman" => Ok(VlcKind::Goldman),
            _ => Err(Error::config(format!("unknown vlc `{s}`, expected sfc or goldman"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecConfig {
    pub quality: u8,
    pub vlc: VlcKind,
    pub max_hl: usize,
}

impl CodecConfig {
    pub fn new(quality: u8, vlc: VlcKind, max_hl: usize) -> Self {
        CodecConfig { quality, vlc, max_hl }
    }

    pub fn validate(&self) -> Result<()> {
        validate_quality(self.quality)?;
        if self.max_hl < 2 {
            return Err(Error::config(format!("max_hl must be at least 2, got {}", self.max_hl)));
        }
        if self.max_hl > u8::MAX as usize {
            return Err(Error::config(format!("max_hl {} does not fit the header", self.max_hl)));
        }
        Ok(())
    }
}

/// Decoded header contents.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageHeader {
    pub config: CodecConfig,
    pub width: usize,
    pub height: usize,
    pub dc_table: FrequencyTable,
    pub ac_table: FrequencyTable,
}

impl ImageHeader {
    pub fn blocks(&self) -> usize {
        let (bw, bh) = block_grid(self.width, self.height);
        bw * bh
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut b = vec![
            FORMAT_VERSION,
            self.config.vlc.tag(),
            self.config.quality,
            self.config.max_hl as u8,
            quaternary_inverse(INITIAL_PREV),
        ];
        put_varint(&mut b, self.width as u64);
        put_varint(&mut b, self.height as u64);
        for table in [&self.dc_table, &self.ac_table] {
            let entries: Vec<(usize, u64)> = table
                .counts()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i, c))
                .collect();
            put_varint(&mut b, entries.len() as u64);
            for (i, c) in entries {
                put_varint(&mut b, i as u64);
                put_varint(&mut b, c);
            }
        }
        b
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader { bytes, pos: 0 };
        let version = r.byte()?;
        if version != FORMAT_VERSION {
            return Err(r.corrupt(format!("unsupported header version {version}")));
        }
        let vlc = VlcKind::from_tag(r.byte()?).ok_or_else(|| r.corrupt("unknown vlc tag"))?;
        let quality = r.byte()?;
        let max_hl = r.byte()? as usize;
        let prev = r.byte()?;
        if prev != quaternary_inverse(INITIAL_PREV) {
            return Err(r.corrupt(format!("unsupported initial nucleotide code {prev}")));
        }
        let config = CodecConfig { quality, vlc, max_hl };
        config.validate().map_err(|e| r.corrupt(e.to_string()))?;
        let width = r.varint()? as usize;
        let height = r.varint()? as usize;
        let mut tables = Vec::with_capacity(2);
        for size in [DC_ALPHABET, AC_ALPHABET] {
            let n = r.varint()? as usize;
            let mut counts = vec![0u64; size];
            for _ in 0..n {
                let i = r.varint()? as usize;
                let c = r.varint()?;
                if i >= size || counts[i] != 0 || c == 0 {
                    return Err(r.corrupt(format!("bad table entry {i}:{c}")));
                }
                counts[i] = c;
            }
            tables.push(FrequencyTable::from_counts(counts));
        }
        if r.pos != bytes.len() {
            return Err(r.corrupt("trailing header bytes"));
        }
        let ac_table = tables.pop().unwrap();
        let dc_table = tables.pop().unwrap();
        Ok(ImageHeader {
            config,
            width,
            height,
            dc_table,
            ac_table,
        })
    }
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl ByteReader<'_> {
    fn corrupt(&self, reason: impl Into<String>) -> Error {
        Error::Corrupt {
            offset: self.pos,
            reason: format!("header byte {}: {}", self.pos, reason.into()),
        }
    }

    fn byte(&mut self) -> Result<u8> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| self.corrupt("truncated header"))?;
        self.pos += 1;
        Ok(b)
    }

    fn varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            v |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(self.corrupt("varint too long"))
    }
}

/// The four coded streams of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedImage {
    pub header: NucleotideStream,
    pub dc: NucleotideStream,
    pub ac: NucleotideStream,
    pub values: NucleotideStream,
}

pub const STREAM_NAMES: [&str; 4] = ["header", "dc", "ac", "values"];

impl EncodedImage {
    pub fn streams(&self) -> [&NucleotideStream; 4] {
        [&self.header, &self.dc, &self.ac, &self.values]
    }

    /// All nucleotides, header included.
    pub fn total_nt(&self) -> usize {
        self.streams().iter().map(|s| s.len()).sum()
    }

    pub fn header(&self) -> Result<ImageHeader> {
        ImageHeader::from_bytes(&pairs::decode_bytes(&self.header)?)
    }

    pub fn to_records(&self) -> Vec<FastaRecord> {
        STREAM_NAMES
            .iter()
            .zip(self.streams())
            .map(|(name, s)| FastaRecord {
                name: name.to_string(),
                meta: json!({ "nt": s.len() }),
                seq: s.clone(),
            })
            .collect()
    }

    pub fn from_records(records: Vec<FastaRecord>) -> Result<Self> {
        let names: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
        if names != STREAM_NAMES {
            return Err(Error::input(format!("expected records {STREAM_NAMES:?}, found {names:?}")));
        }
        let mut it = records.into_iter().map(|r| r.seq);
        Ok(EncodedImage {
            header: it.next().unwrap(),
            dc: it.next().unwrap(),
            ac: it.next().unwrap(),
            values: it.next().unwrap(),
        })
    }

    pub fn write_fasta<W: Write>(&self, w: W) -> Result<()> {
        write_fasta(w, &self.to_records())
    }

    pub fn read_fasta<R: BufRead>(r: R) -> Result<Self> {
        Self::from_records(read_fasta(r)?)
    }

    /// Sidecar summary of the encoding.
    pub fn manifest(&self, source_bits: u64) -> Result<Manifest> {
        let h = self.header()?;
        Ok(Manifest {
            width: h.width,
            height: h.height,
            quality: h.config.quality,
            vlc: h.config.vlc,
            max_hl: h.config.max_hl,
            initial_prev: INITIAL_PREV.to_char().to_string(),
            nt_header: self.header.len(),
            nt_dc: self.dc.len(),
            nt_ac: self.ac.len(),
            nt_values: self.values.len(),
            nt_total: self.total_nt(),
            bits_per_nt: compression_ratio_bits_per_nt(source_bits, self.total_nt())?,
            max_run_dc: max_homopolymer_run(&self.dc),
            max_run_ac: max_homopolymer_run(&self.ac),
            max_run_values: max_homopolymer_run(&self.values),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub width: usize,
    pub height: usize,
    pub quality: u8,
    pub vlc: VlcKind,
    pub max_hl: usize,
    pub initial_prev: String,
    pub nt_header: usize,
    pub nt_dc: usize,
    pub nt_ac: usize,
    pub nt_values: usize,
    pub nt_total: usize,
    pub bits_per_nt: f64,
    pub max_run_dc: usize,
    pub max_run_ac: usize,
    pub max_run_values: usize,
}

/// Frequency tables of DC categories and AC run/category symbols.
pub fn symbol_tables(c: &Categorized) -> Result<(FrequencyTable, FrequencyTable)> {
    let dc: Vec<Symbol> = c.dc.iter().map(|&d| Symbol(d as usize)).collect();
    let ac: Vec<Symbol> = c.ac.iter().map(|rc| rc.symbol()).collect();
    Ok((
        FrequencyTable::from_symbols(&dc, DC_ALPHABET)?,
        FrequencyTable::from_symbols(&ac, AC_ALPHABET)?,
    ))
}

fn encode_values(values: &[CodedValue]) -> NucleotideStream {
    let mut out = NucleotideStream::new();
    for v in values {
        pairs::encode_value(&mut out, v.index, v.category);
    }
    out
}

pub fn encode_blocks(blocks: &[BlockSpectrum], width: usize, height: usize, cfg: &CodecConfig) -> Result<EncodedImage> {
    cfg.validate()?;
    let cat = categorize(blocks)?;
    let (dc_table, ac_table) = symbol_tables(&cat)?;
    let header = ImageHeader {
        config: *cfg,
        width,
        height,
        dc_table,
        ac_table,
    };
    let kind = cfg.vlc.builder();
    let dc_code = Code::build(kind, &header.dc_table, cfg.max_hl)?;
    let ac_code = Code::build(kind, &header.ac_table, cfg.max_hl)?;
    let dc_syms: Vec<Symbol> = cat.dc.iter().map(|&d| Symbol(d as usize)).collect();
    let ac_syms: Vec<Symbol> = cat.ac.iter().map(|rc| rc.symbol()).collect();
    Ok(EncodedImage {
        header: pairs::encode_bytes(&header.to_bytes()),
        dc: encode_message(&dc_code, &dc_syms)?,
        ac: encode_message(&ac_code, &ac_syms)?,
        values: encode_values(&cat.values),
    })
}

pub fn encode_image(image: &GrayImage, cfg: &CodecConfig) -> Result<EncodedImage> {
    cfg.validate()?;
    let blocks = forward_transform(image, cfg.quality)?;
    encode_blocks(&blocks, image.width(), image.height(), cfg)
}

/// Recovers the header and the quantized spectra without reconstructing pixels.
pub fn decode_coefficients(enc: &EncodedImage) -> Result<(ImageHeader, Vec<BlockSpectrum>)> {
    let header = enc.header()?;
    if header.width == 0 || header.height == 0 {
        return Err(Error::input(format!("header describes a {}x{} image", header.width, header.height)));
    }
    let blocks = header.blocks();
    let kind = header.config.vlc.builder();

    let dc_syms = {
        let code = Code::build(kind, &header.dc_table, header.config.max_hl)
            .map_err(|e| Error::Corrupt { offset: 0, reason: format!("dc table: {e}") })?;
        decode_message(&code, &enc.dc)?
    };
    let ac_syms = {
        let code = Code::build(kind, &header.ac_table, header.config.max_hl)
            .map_err(|e| Error::Corrupt { offset: 0, reason: format!("ac table: {e}") })?;
        decode_message(&code, &enc.ac)?
    };

    let dc: Vec<u8> = dc_syms.iter().map(|s| s.0 as u8).collect();
    let ac = ac_syms
        .iter()
        .map(|&s| RunCategory::from_symbol(s))
        .collect::<Result<Vec<_>>>()?;

    // value categories follow from the symbol streams
    let mut cats = Vec::new();
    let mut acs = ac.iter();
    for &d in &dc {
        if d > 0 {
            cats.push(d);
        }
        let mut k = 0;
        while k < 63 {
            let Some(&rc) = acs.next() else { break };
            if rc == RunCategory::EOB {
                break;
            }
            if rc == RunCategory::ZRL {
                k += 16;
            } else {
                k += rc.run as usize + 1;
                cats.push(rc.category);
            }
        }
    }
    let mut r = PairReader::new(&enc.values);
    let mut values = Vec::with_capacity(cats.len());
    for c in cats {
        values.push(CodedValue {
            category: c,
            index: pairs::decode_value(&mut r, c)?,
        });
    }
    if r.remaining() != 0 {
        return Err(Error::desync(r.offset(), "trailing nucleotides in value stream"));
    }
    let spectra = uncategorize(&Categorized { dc, ac, values }, blocks)?;
    Ok((header, spectra))
}

pub fn decode_image(enc: &EncodedImage) -> Result<GrayImage> {
    let (h, blocks) = decode_coefficients(enc)?;
    inverse_transform(&blocks, h.width, h.height, h.config.quality)
}

/// Pooled run/category counts of `images` at `quality`, labeled and restricted
/// to symbols that occur.
pub fn ac_statistics(images: &[GrayImage], quality: u8) -> Result<FrequencyTable> {
    let mut counts = vec![0u64; AC_ALPHABET];
    for img in images {
        let cat = categorize(&forward_transform(img, quality)?)?;
        for rc in &cat.ac {
            counts[rc.symbol().0] += 1;
        }
    }
    let mut labels = Vec::new();
    let mut kept = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            labels.push(RunCategory::from_symbol(Symbol(i))?.to_string());
            kept.push(c);
        }
    }
    FrequencyTable::from_counts(kept).with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(w: usize, h: usize) -> GrayImage {
        let px = (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                (127.0 + 80.0 * (x / 7.0).sin() * (y / 11.0).cos() + (x + y) * 0.3).clamp(0.0, 255.0) as u8
            })
            .collect();
        GrayImage::new(w, h, px).unwrap()
    }

    #[test]
    fn header_roundtrip() {
        let img = gradient(37, 20);
        let cfg = CodecConfig::new(40, VlcKind::Sfc, 3);
        let enc = encode_image(&img, &cfg).unwrap();
        let h = enc.header().unwrap();
        assert_eq!(h.config, cfg);
        assert_eq!((h.width, h.height), (37, 20));
        assert_eq!(h.blocks(), 5 * 3);
    }

    #[test]
    fn coefficients_survive_both_vlcs() {
        let img = gradient(40, 24);
        let blocks = forward_transform(&img, 60).unwrap();
        for vlc in [VlcKind::Sfc, VlcKind::Goldman] {
            let enc = encode_image(&img, &CodecConfig::new(60, vlc, 3)).unwrap();
            let (_, dec) = decode_coefficients(&enc).unwrap();
            assert_eq!(dec, blocks);
        }
    }

    #[test]
    fn vlc_choice_only_touches_symbol_streams() {
        let img = gradient(64, 64);
        let s = encode_image(&img, &CodecConfig::new(50, VlcKind::Sfc, 3)).unwrap();
        let g = encode_image(&img, &CodecConfig::new(50, VlcKind::Goldman, 3)).unwrap();
        assert_eq!(s.values, g.values);
        assert_eq!(s.header.len(), g.header.len());
        assert_ne!(s.ac, g.ac);
        assert_eq!(decode_image(&s).unwrap(), decode_image(&g).unwrap());
    }

    #[test]
    fn fasta_container_roundtrip() {
        let img = gradient(16, 16);
        let enc = encode_image(&img, &CodecConfig::new(75, VlcKind::Goldman, 3)).unwrap();
        let mut buf = Vec::new();
        enc.write_fasta(&mut buf).unwrap();
        assert_eq!(EncodedImage::read_fasta(buf.as_slice()).unwrap(), enc);
    }

    #[test]
    fn rejects_zero_sized_header() {
        let header = ImageHeader {
            config: CodecConfig::new(50, VlcKind::Sfc, 3),
            width: 0,
            height: 0,
            dc_table: FrequencyTable::from_counts(vec![0; DC_ALPHABET]),
            ac_table: FrequencyTable::from_counts(vec![0; AC_ALPHABET]),
        };
        let enc = EncodedImage {
            header: pairs::encode_bytes(&header.to_bytes()),
            dc: NucleotideStream::new(),
            ac: NucleotideStream::new(),
            values: NucleotideStream::new(),
        };
        assert!(matches!(decode_image(&enc), Err(Error::Input(_))));
    }

    #[test]
    fn truncated_value_stream_is_desync() {
        let img = gradient(32, 32);
        let mut enc = encode_image(&img, &CodecConfig::new(50, VlcKind::Sfc, 3)).unwrap();
        let cut: NucleotideStream = enc.values.as_slice()[..enc.values.len() - 2].to_vec().into();
        enc.values = cut;
        assert!(decode_image(&enc).unwrap_err().is_corruption());
    }

    #[test]
    fn bad_config() {
        let img = gradient(8, 8);
        assert!(matches!(encode_image(&img, &CodecConfig::new(0, VlcKind::Sfc, 3)), Err(Error::Config(_))));
        assert!(matches!(encode_image(&img, &CodecConfig::new(50, VlcKind::Sfc, 1)), Err(Error::Config(_))));
    }
}
