//! Image codec commands: encode, decode, quality sweeps and AC statistics.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use dnavlc::jpeg::{ac_statistics, decode_image, encode_image, CodecConfig, EncodedImage, GrayImage, Manifest, VlcKind};
use dnavlc::metrics::psnr;
use dnavlc::{Error, Result};
use serde::Serialize;

use crate::bench::SCHEMA;

/// Sidecar manifest path: the output path with `.json` appended.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn source_bits(img: &GrayImage) -> u64 {
    (img.width() * img.height()) as u64 * 8
}

pub fn img_encode(input: &Path, output: &Path, cfg: &CodecConfig) -> Result<Manifest> {
    let img = GrayImage::open(input)?;
    let enc = encode_image(&img, cfg)?;
    let mut w = BufWriter::new(File::create(output)?);
    enc.write_fasta(&mut w)?;
    w.flush()?;
    let manifest = enc.manifest(source_bits(&img))?;
    let mut m = BufWriter::new(File::create(manifest_path(output))?);
    serde_json::to_writer_pretty(&mut m, &manifest)?;
    writeln!(m)?;
    m.flush()?;
    Ok(manifest)
}

pub fn img_decode(input: &Path, output: &Path) -> Result<GrayImage> {
    let enc = EncodedImage::read_fasta(BufReader::new(File::open(input)?))?;
    let img = decode_image(&enc)?;
    img.save_pgm(output)?;
    Ok(img)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub quality: u8,
    pub vlc: VlcKind,
    pub max_hl: usize,
    pub psnr: f64,
    pub bits_per_nt: f64,
    pub nt_total: usize,
    pub nt_header: usize,
    pub nt_dc: usize,
    pub nt_ac: usize,
    pub nt_values: usize,
    pub max_run_dc: usize,
    pub max_run_ac: usize,
}

/// One row per image, quality and coder. Reconstructions are shared between
/// coders, so PSNR depends only on image and quality.
pub fn sweep_image(name: &str, img: &GrayImage, qualities: &[u8], vlcs: &[VlcKind], max_hl: usize) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &q in qualities {
        let mut reconstruction: Option<GrayImage> = None;
        for &vlc in vlcs {
            let enc = encode_image(img, &CodecConfig::new(q, vlc, max_hl))?;
            let rec = decode_image(&enc)?;
            if let Some(prev) = &reconstruction {
                if *prev != rec {
                    return Err(Error::Structural(format!("{name} q={q}: reconstruction depends on the coder")));
                }
            }
            let m = enc.manifest(source_bits(img))?;
            rows.push(SweepRow {
                image: name.to_string(),
                width: img.width(),
                height: img.height(),
                quality: q,
                vlc,
                max_hl,
                psnr: psnr(img, &rec)?,
                bits_per_nt: m.bits_per_nt,
                nt_total: m.nt_total,
                nt_header: m.nt_header,
                nt_dc: m.nt_dc,
                nt_ac: m.nt_ac,
                nt_values: m.nt_values,
                max_run_dc: m.max_run_dc,
                max_run_ac: m.max_run_ac,
            });
            reconstruction = Some(rec);
        }
    }
    Ok(rows)
}

pub fn img_sweep(inputs: &[PathBuf], qualities: &[u8], vlcs: &[VlcKind], max_hl: usize) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for p in inputs {
        let img = GrayImage::open(p)?;
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        rows.extend(sweep_image(&name, &img, qualities, vlcs, max_hl)?);
    }
    Ok(rows)
}

pub fn write_sweep<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "# {SCHEMA}")?;
    let mut c = csv::Writer::from_writer(w);
    for r in rows {
        c.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    c.flush()?;
    Ok(())
}

/// Pooled run/category table over `inputs`, written as a labeled CSV.
pub fn ac_table<W: Write>(inputs: &[PathBuf], quality: u8, mut w: W) -> Result<()> {
    let images = inputs.iter().map(|p| GrayImage::open(p)).collect::<Result<Vec<_>>>()?;
    let table = ac_statistics(&images, quality)?;
    let mut names: Vec<String> = inputs
        .iter()
        .map(|p| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    names.sort();
    writeln!(w, "# {SCHEMA}")?;
    writeln!(w, "# run/category counts at quality {quality} over {}", names.join(" "))?;
    table.write_csv(w)
}

pub fn parse_vlcs(s: &str) -> Result<Vec<VlcKind>> {
    s.split(',').map(|v| v.trim().parse()).collect()
}

pub fn parse_qualities(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<u8>()
                .map_err(|_| Error::Config(format!("quality `{v}` is not an integer in 1..=100")))
        })
        .collect()
}
