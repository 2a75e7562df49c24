use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dnavlc::jpeg::{CodecConfig, VlcKind};
use dnavlc::nucleotide::{read_fasta, write_fasta};
use dnavlc::{BuilderKind, Error, Result};
use dnavlc_cli::bench::{self, BenchOptions};
use dnavlc_cli::{exit_code, files, images, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "dnavlc", version, about = "Variable-length nucleotide coders with bounded homopolymers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure entropies and expected lengths on a synthetic source.
    Bench(BenchArgs),
    /// Summarize a realizations.csv written by `bench`.
    Report {
        input: PathBuf,
        #[arg(long, default_value = "text", value_parser = ["text", "csv", "json"])]
        format: String,
    },
    /// Code the bytes of a file into a nucleotide record.
    Encode {
        #[arg(long, default_value = "sfc")]
        coder: BuilderKind,
        #[arg(long, default_value_t = 3)]
        max_hl: usize,
        input: PathBuf,
        output: PathBuf,
    },
    /// Invert `encode`.
    Decode {
        /// Only checked against the header, which takes precedence.
        #[arg(long)]
        max_hl: Option<usize>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Compress a grayscale image into four nucleotide records.
    ImgEncode {
        #[arg(long, default_value_t = 50)]
        quality: u8,
        #[arg(long, default_value = "sfc")]
        vlc: VlcKind,
        #[arg(long, default_value_t = 3)]
        max_hl: usize,
        input: PathBuf,
        output: PathBuf,
    },
    /// Reconstruct a PGM image from `img-encode` output.
    ImgDecode { input: PathBuf, output: PathBuf },
    /// PSNR against bits per nucleotide over a quality grid.
    ImgSweep {
        #[arg(long, default_value = "10,20,30,40,50,60,70,80,90")]
        qualities: String,
        #[arg(long, default_value = "sfc,goldman")]
        vlcs: String,
        #[arg(long, default_value_t = 3)]
        max_hl: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Pooled AC run/category frequency table of a set of images.
    AcTable {
        #[arg(long, default_value_t = 50)]
        quality: u8,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// TOML file with the same keys as the flags (underscored); flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    alphabet_size: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Quantizer half-width in units of sigma.
    #[arg(long)]
    range: Option<f64>,
    #[arg(long)]
    max_hl: Option<usize>,
    /// Comma-separated subset of sfc, goldman, huffman2, huffman3, huffman4, huffman4c.
    #[arg(long, value_delimiter = ',')]
    coders: Option<Vec<String>>,
    /// Sample from a `symbol,count` CSV instead of the Gaussian source.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

impl BenchArgs {
    fn options(self) -> Result<BenchOptions> {
        let base = match &self.config {
            Some(p) => BenchOptions::load(p)?,
            None => BenchOptions::default(),
        };
        Ok(BenchOptions {
            seed: self.seed,
            realizations: self.realizations,
            samples: self.samples,
            alphabet_size: self.alphabet_size,
            sigma: self.sigma,
            range: self.range,
            max_hl: self.max_hl,
            coders: self.coders,
            table: self.table,
            out_dir: self.out_dir,
            jobs: self.jobs,
        }
        .over(base))
    }
}

fn output<'a>(path: &Option<PathBuf>, stdout: &'a mut std::io::StdoutLock<'static>) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn run(cmd: Command) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match cmd {
        Command::Bench(args) => {
            let opts = args.options()?;
            let spec = opts.to_spec()?;
            let report = bench::run_bench(&spec)?;
            let dir = opts.out_dir.unwrap_or_else(|| PathBuf::from("bench-out"));
            bench::write_report(&report, &dir)?;
            write!(stdout, "{}", bench::render_summary(&report.summary))?;
            for r in &report.runs {
                writeln!(
                    stdout,
                    "{:<8} max run {} (within codewords {})",
                    r.coder, r.max_homopolymer, r.max_codeword_run
                )?;
            }
        }
        Command::Report { input, format } => {
            let reports = bench::read_realizations(BufReader::new(File::open(&input)?))?;
            let coders: Vec<BuilderKind> = reports
                .first()
                .map(|r| r.coders.iter().map(|c| c.coder).collect())
                .unwrap_or_default();
            let summary = bench::summarize(&reports, &coders)?;
            match format.as_str() {
                "json" => {
                    serde_json::to_writer_pretty(&mut stdout, &summary)?;
                    writeln!(stdout)?;
                }
                "csv" => bench::write_summary_to(&summary, &mut stdout)?,
                _ => write!(stdout, "{}", bench::render_summary(&summary))?,
            }
        }
        Command::Encode {
            coder,
            max_hl,
            input,
            output,
        } => {
            let mut data = Vec::new();
            File::open(&input)?.read_to_end(&mut data)?;
            let rec = files::encode_bytes(&data, coder, max_hl)?;
            let mut w = BufWriter::new(File::create(&output)?);
            write_fasta(&mut w, &[rec])?;
            w.flush()?;
        }
        Command::Decode { max_hl, input, output } => {
            let records = read_fasta(BufReader::new(File::open(&input)?))?;
            let [rec] = records.as_slice() else {
                return Err(Error::Input(format!("expected one record, found {}", records.len())));
            };
            let d = files::decode_record(rec, max_hl)?;
            for w in &d.warnings {
                eprintln!("warning: {w}");
            }
            std::fs::write(&output, &d.bytes)?;
        }
        Command::ImgEncode {
            quality,
            vlc,
            max_hl,
            input,
            output,
        } => {
            let m = images::img_encode(&input, &output, &CodecConfig::new(quality, vlc, max_hl))?;
            writeln!(stdout, "{} nt, {:.4} bits/nt", m.nt_total, m.bits_per_nt)?;
        }
        Command::ImgDecode { input, output } => {
            images::img_decode(&input, &output)?;
        }
        Command::ImgSweep {
            qualities,
            vlcs,
            max_hl,
            out,
            inputs,
        } => {
            let rows = images::img_sweep(
                &inputs,
                &images::parse_qualities(&qualities)?,
                &images::parse_vlcs(&vlcs)?,
                max_hl,
            )?;
            images::write_sweep(output(&out, &mut stdout)?, &rows)?;
        }
        Command::AcTable { quality, out, inputs } => {
            images::ac_table(&inputs, quality, output(&out, &mut stdout)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
