//! Rate benchmark over synthetic sources: one row per coder per realization,
//! aggregated into mean and standard deviation per column.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use dnavlc::metrics::{rate_report, CoderRate, RateReport};
use dnavlc::sources::{empirical_table, gaussian_realization, sample_table, GaussianSourceConfig};
use dnavlc::{BuilderKind, Error, FrequencyTable, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// First comment line of every CSV report.
pub const SCHEMA: &str = "dnavlc-report v1";

pub const DEFAULT_CODERS: [BuilderKind; 4] = [
    BuilderKind::Huffman4,
    BuilderKind::Sfc,
    BuilderKind::Huffman4Constrained,
    BuilderKind::Goldman,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SourceSpec {
    Gaussian(GaussianSourceConfig),
    Table {
        path: PathBuf,
        realizations: usize,
        samples_per_realization: usize,
        seed: u64,
    },
}

impl SourceSpec {
    pub fn realizations(&self) -> usize {
        match self {
            SourceSpec::Gaussian(g) => g.realizations,
            SourceSpec::Table { realizations, .. } => *realizations,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SourceSpec::Gaussian(g) => format!("gaussian-{}", g.alphabet_size),
            SourceSpec::Table { path, .. } => format!("table:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub source: SourceSpec,
    pub coders: Vec<BuilderKind>,
    pub max_hl: usize,
    /// Worker threads; not part of the results.
    #[serde(skip)]
    pub jobs: usize,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.coders.is_empty() {
            return Err(Error::Config("at least one coder must be selected".into()));
        }
        if self.max_hl < 2 {
            return Err(Error::Config(format!("max_hl must be at least 2, got {}", self.max_hl)));
        }
        if self.source.realizations() == 0 {
            return Err(Error::Config("realizations must be positive".into()));
        }
        match &self.source {
            SourceSpec::Gaussian(g) => g.validate(),
            SourceSpec::Table {
                path,
                samples_per_realization,
                ..
            } => {
                if *samples_per_realization == 0 {
                    return Err(Error::Config("samples per realization must be positive".into()));
                }
                if !path.is_file() {
                    return Err(Error::Input(format!("frequency table {} does not exist", path.display())));
                }
                Ok(())
            }
        }
    }
}

/// Bench settings as read from a TOML file or the command line; unset fields
/// fall back to the next layer and finally to the defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchOptions {
    pub seed: Option<u64>,
    pub realizations: Option<usize>,
    pub samples: Option<usize>,
    pub alphabet_size: Option<usize>,
    pub sigma: Option<f64>,
    pub range: Option<f64>,
    pub max_hl: Option<usize>,
    pub coders: Option<Vec<String>>,
    pub table: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl BenchOptions {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("bench config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut s = String::new();
        File::open(path)?.read_to_string(&mut s)?;
        Self::from_toml(&s)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: BenchOptions) -> BenchOptions {
        BenchOptions {
            seed: self.seed.or(base.seed),
            realizations: self.realizations.or(base.realizations),
            samples: self.samples.or(base.samples),
            alphabet_size: self.alphabet_size.or(base.alphabet_size),
            sigma: self.sigma.or(base.sigma),
            range: self.range.or(base.range),
            max_hl: self.max_hl.or(base.max_hl),
            coders: self.coders.or(base.coders),
            table: self.table.or(base.table),
            out_dir: self.out_dir.or(base.out_dir),
            jobs: self.jobs.or(base.jobs),
        }
    }

    pub fn to_spec(&self) -> Result<BenchSpec> {
        let g = GaussianSourceConfig::default();
        let realizations = self.realizations.unwrap_or(g.realizations);
        let samples = self.samples.unwrap_or(g.samples_per_realization);
        let seed = self.seed.unwrap_or(g.seed);
        let source = match &self.table {
            Some(path) => {
                if self.alphabet_size.is_some() || self.sigma.is_some() || self.range.is_some() {
                    return Err(Error::Config(
                        "alphabet-size, sigma and range only apply to the gaussian source".into(),
                    ));
                }
                SourceSpec::Table {
                    path: path.clone(),
                    realizations,
                    samples_per_realization: samples,
                    seed,
                }
            }
            None => SourceSpec::Gaussian(GaussianSourceConfig {
                realizations,
                samples_per_realization: samples,
                alphabet_size: self.alphabet_size.unwrap_or(g.alphabet_size),
                seed,
                sigma: self.sigma.unwrap_or(g.sigma),
                range: self.range.unwrap_or(g.range),
            }),
        };
        let coders = match &self.coders {
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<BuilderKind>>>()?,
            None => DEFAULT_CODERS.to_vec(),
        };
        let spec = BenchSpec {
            source,
            coders,
            max_hl: self.max_hl.unwrap_or(3),
            jobs: self.jobs.unwrap_or(1),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryColumn {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunBound {
    pub coder: BuilderKind,
    pub max_homopolymer: usize,
    pub max_codeword_run: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: String,
    pub spec: BenchSpec,
    pub summary: Vec<SummaryColumn>,
    pub runs: Vec<RunBound>,
    pub realizations: Vec<RateReport>,
}

impl BenchReport {
    pub fn column(&self, name: &str) -> Option<&SummaryColumn> {
        self.summary.iter().find(|c| c.name == name)
    }
}

pub fn column_name(kind: BuilderKind) -> &'static str {
    match kind {
        BuilderKind::Huffman4 => "L(CH4)",
        BuilderKind::Sfc => "L(CSFC)",
        BuilderKind::Huffman4Constrained => "L(CH4C)",
        BuilderKind::Huffman3 => "L(CH3)",
        BuilderKind::Goldman => "L(CG)",
        BuilderKind::Huffman2 => "L(CH2)",
    }
}

enum Column {
    Entropy(u32),
    Coder(BuilderKind),
}

fn columns(coders: &[BuilderKind]) -> Vec<Column> {
    use BuilderKind::*;
    let mut out = vec![Column::Entropy(4)];
    let groups: [(&[BuilderKind], Option<u32>); 3] = [
        (&[Huffman4, Sfc, Huffman4Constrained], Some(3)),
        (&[Huffman3, Goldman], None),
        (&[Huffman2], None),
    ];
    for (kinds, trailing) in groups {
        for &k in kinds {
            if coders.contains(&k) {
                out.push(Column::Coder(k));
            }
        }
        if let Some(b) = trailing {
            out.push(Column::Entropy(b));
        }
    }
    if coders.contains(&Huffman2) {
        out.insert(out.len() - 1, Column::Entropy(2));
    }
    out
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Mean and sample standard deviation per column, in the order
/// H4, L(CH4), L(CSFC), L(CH4C), H3, L(CH3), L(CG), H2, L(CH2), restricted to
/// the selected coders.
pub fn summarize(reports: &[RateReport], coders: &[BuilderKind]) -> Result<Vec<SummaryColumn>> {
    if reports.is_empty() {
        return Err(Error::Input("no realizations to summarize".into()));
    }
    let mut out = Vec::new();
    for col in columns(coders) {
        let (name, values) = match col {
            Column::Entropy(b) => (
                format!("H{b}"),
                reports.iter().map(|r| r.entropy(b).unwrap()).collect::<Vec<_>>(),
            ),
            Column::Coder(k) => (
                column_name(k).to_string(),
                reports
                    .iter()
                    .map(|r| {
                        r.coder(k)
                            .map(|c| c.expected_length)
                            .ok_or_else(|| Error::Input(format!("realization {} lacks coder {k}", r.realization)))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let (mean, std) = mean_std(&values);
        out.push(SummaryColumn { name, mean, std });
    }
    Ok(out)
}

fn run_bounds(reports: &[RateReport], coders: &[BuilderKind]) -> Vec<RunBound> {
    coders
        .iter()
        .filter_map(|&k| {
            let rates: Vec<&CoderRate> = reports.iter().filter_map(|r| r.coder(k)).collect();
            let hp = rates.iter().map(|c| c.max_homopolymer).collect::<Option<Vec<_>>>()?;
            let cw = rates.iter().map(|c| c.max_codeword_run).collect::<Option<Vec<_>>>()?;
            Some(RunBound {
                coder: k,
                max_homopolymer: hp.into_iter().max().unwrap_or(0),
                max_codeword_run: cw.into_iter().max().unwrap_or(0),
            })
        })
        .collect()
}

fn realization(spec: &BenchSpec, table: Option<&FrequencyTable>, index: usize) -> Result<RateReport> {
    let symbols = match (&spec.source, table) {
        (SourceSpec::Gaussian(g), _) => gaussian_realization(g, index)?,
        (
            SourceSpec::Table {
                samples_per_realization,
                seed,
                ..
            },
            Some(t),
        ) => sample_table(t, *samples_per_realization, *seed, index)?,
        (SourceSpec::Table { .. }, None) => unreachable!("table loaded before sampling"),
    };
    let t = empirical_table(&symbols)?;
    rate_report(&spec.source.name(), index, &t, &symbols.symbols, &spec.coders, spec.max_hl)
}

pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    spec.validate()?;
    let table = match &spec.source {
        SourceSpec::Table { path, .. } => Some(FrequencyTable::read_csv(File::open(path)?)?),
        SourceSpec::Gaussian(_) => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let reports: Vec<RateReport> = pool.install(|| {
        (0..spec.source.realizations())
            .into_par_iter()
            .map(|i| realization(spec, table.as_ref(), i))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(BenchReport {
        schema: SCHEMA.to_string(),
        spec: spec.clone(),
        summary: summarize(&reports, &spec.coders)?,
        runs: run_bounds(&reports, &spec.coders),
        realizations: reports,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "# {SCHEMA}")?;
    Ok(csv::Writer::from_writer(f))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const REALIZATION_HEADER: [&str; 10] = [
    "realization",
    "sample_count",
    "coder",
    "expected_length",
    "sample_length",
    "max_homopolymer",
    "max_codeword_run",
    "h2",
    "h3",
    "h4",
];

pub fn write_realizations(reports: &[RateReport], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(REALIZATION_HEADER).map_err(csv_err)?;
    for r in reports {
        for c in &r.coders {
            w.write_record([
                r.realization.to_string(),
                r.sample_count.to_string(),
                c.coder.name().to_string(),
                c.expected_length.to_string(),
                c.sample_length.to_string(),
                opt(c.max_homopolymer),
                opt(c.max_codeword_run),
                r.entropy_2.to_string(),
                r.entropy_3.to_string(),
                r.entropy_4.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(summary: &[SummaryColumn], path: &Path) -> Result<()> {
    write_summary_to(summary, BufWriter::new(File::create(path)?))
}

pub fn write_summary_to<W: Write>(summary: &[SummaryColumn], mut out: W) -> Result<()> {
    writeln!(out, "# {SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["statistic".to_string()];
    header.extend(summary.iter().map(|c| c.name.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for (stat, pick) in [("mean", 0), ("std", 1)] {
        let mut row = vec![stat.to_string()];
        row.extend(summary.iter().map(|c| if pick == 0 { c.mean } else { c.std }.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `realizations.csv`, `summary.csv` and `report.json` into `dir`.
pub fn write_report(report: &BenchReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_realizations(&report.realizations, &dir.join("realizations.csv"))?;
    write_summary(&report.summary, &dir.join("summary.csv"))?;
    let mut f = BufWriter::new(File::create(dir.join("report.json"))?);
    serde_json::to_writer_pretty(&mut f, report)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

/// Parses a `realizations.csv` back into per-realization reports.
pub fn read_realizations<R: Read>(reader: R) -> Result<Vec<RateReport>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Csv { row: 1, reason: e.to_string() })?;
    if header.iter().ne(REALIZATION_HEADER) {
        return Err(Error::Csv {
            row: 1,
            reason: format!("expected header `{}`", REALIZATION_HEADER.join(",")),
        });
    }
    let mut out: Vec<RateReport> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Csv { row, reason: e.to_string() })?;
        let bad = |field: &str| Error::Csv {
            row,
            reason: format!("malformed {field}"),
        };
        let int = |k: usize| rec[k].parse::<usize>().map_err(|_| bad(REALIZATION_HEADER[k]));
        let real = |k: usize| rec[k].parse::<f64>().map_err(|_| bad(REALIZATION_HEADER[k]));
        let maybe = |k: usize| if rec[k].is_empty() { Ok(None) } else { int(k).map(Some) };
        let realization = int(0)?;
        let rate = CoderRate {
            coder: rec[2].parse().map_err(|_| bad("coder"))?,
            expected_length: real(3)?,
            sample_length: real(4)?,
            max_homopolymer: maybe(5)?,
            max_codeword_run: maybe(6)?,
        };
        match out.last_mut() {
            Some(r) if r.realization == realization => r.coders.push(rate),
            _ => out.push(RateReport {
                source: String::new(),
                realization,
                sample_count: int(1)?,
                entropy_2: real(7)?,
                entropy_3: real(8)?,
                entropy_4: real(9)?,
                coders: vec![rate],
            }),
        }
    }
    Ok(out)
}

/// Plain-text rendering of a summary, one column per line.
pub fn render_summary(summary: &[SummaryColumn]) -> String {
    let mut s = String::new();
    for c in summary {
        s.push_str(&format!("{:<8} {:>8.4} +/- {:.4}\n", c.name, c.mean, c.std));
    }
    s
}
