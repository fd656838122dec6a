use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use nilrad::blockstruct::{normalize_seq, BlockSeq, SeqJson, Shape};
use nilrad::exactla::{Field, Scalar};
use nilrad::nilradical::{generate_nilradical, rank_table_of};
use nilrad::reps::{enumerate_shapes, ClassMode};
use nilrad::theory;
use nilrad_cli::sweep::{self, CharpConfig, CharpPattern, SweepConfig};

#[derive(Parser)]
#[command(name = "nilrad", version, about = "Nilradicals of solvable matrix Lie algebras and their uniserial representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the nilradical for one sequence and report its lower central series.
    Degree {
        /// Block sizes, comma separated.
        #[arg(long, value_name = "D1,D2,...")]
        d: Option<String>,
        /// Use the canonical sequence (the default without --seq).
        #[arg(long, conflicts_with = "seq")]
        canonical: bool,
        /// Sequence JSON file.
        #[arg(long, value_name = "FILE")]
        seq: Option<PathBuf>,
        /// Ground field: Q or Fp:<p>.
        #[arg(long)]
        field: Option<String>,
        /// Include a basis of the nilradical.
        #[arg(long)]
        basis: bool,
        /// Include the block rank table (canonical sequences only).
        #[arg(long)]
        ranks: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check the predicted degrees, ranks and free shapes over a sweep of shapes.
    Verify {
        /// Sweep config JSON; every field has a default.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Samples per shape and constraint for the general sequences.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Conjugate a sequence to its normal form.
    Normalize {
        #[arg(long, value_name = "FILE")]
        seq: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// List the shapes of uniserial representations of a given dimension.
    Classify {
        /// Number of generators of the free nilpotent algebra.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        /// Restrict to relatively faithful uniserials of the ell-step quotient.
        #[arg(long)]
        ell: Option<usize>,
        /// Eigenvalue shift; must be nonzero.
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Canonical degrees over prime fields.
    Charp {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long, default_value_t = 12)]
        dim_cap: usize,
        #[arg(long, value_enum, default_value_t = CharpPattern::Grid)]
        pattern: CharpPattern,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    emit(out, &body)
}

fn read_seq(path: &Path, field: Option<Field>) -> Result<BlockSeq> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut j: SeqJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(f) = field {
        j.field = f.to_string();
    }
    Ok(BlockSeq::from_json(&j)?)
}

fn degree(d: Option<String>, seq: Option<PathBuf>, field: Option<String>, basis: bool, ranks: bool, out: Option<PathBuf>) -> Result<()> {
    let field = field.as_deref().map(Field::parse).transpose()?;
    let seq = match (&seq, &d) {
        (Some(path), None) => read_seq(path, field)?,
        (None, Some(d)) => BlockSeq::canonical(&Shape::parse(d)?, field.unwrap_or(Field::Rational)),
        (Some(_), Some(_)) => bail!("--d and --seq are mutually exclusive"),
        (None, None) => bail!("one of --d or --seq is required"),
    };
    let report = generate_nilradical(&seq)?;
    let mut value = serde_json::to_value(report.to_json(basis))?;
    let obj = value.as_object_mut().expect("report is an object");
    if seq.field() == Field::Rational {
        let pred = theory::predict_degree(&seq)?;
        obj.insert("predicted_degree".into(), json!(pred.predicted_degree));
        obj.insert("case".into(), serde_json::to_value(pred.case_tag)?);
    }
    if ranks {
        obj.insert("ranks".into(), serde_json::to_value(rank_table_of(&report)?.to_json())?);
    }
    emit_json(out.as_deref(), &value)
}

fn verify(config: Option<PathBuf>, seed: Option<u64>, samples: Option<u64>, threads: Option<usize>, out: Option<PathBuf>) -> Result<bool> {
    let mut cfg: SweepConfig = match &config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SweepConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(s) = samples {
        cfg.samples_per_shape = s;
    }
    if let Some(t) = threads {
        cfg.threads = t;
    }
    if out.is_some() {
        cfg.out = out;
    }
    let m = sweep::verify(&cfg)?;
    emit_json(cfg.out.as_deref(), &m)?;
    for mm in &m.mismatches {
        eprintln!("mismatch {:?} {:?}: {}", mm.shape, mm.check, mm.detail);
    }
    Ok(m.mismatches.is_empty())
}

fn normalize(seq: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let seq = read_seq(&seq, None)?;
    let norm = normalize_seq(&seq)?;
    let value = json!({
        "gauge": norm.gauge.to_json(),
        "normal": norm.normal.to_json(),
        "levels": norm.levels,
        "levels_unique": norm.levels_unique,
        "gauge_fixed": norm.gauge_fixed,
        "phi_invariant": norm.normal.is_phi_invariant(),
    });
    emit_json(out.as_deref(), &value)
}

fn classify(n: usize, dim: usize, ell: Option<usize>, lambda: &str, format: Format, out: Option<PathBuf>) -> Result<()> {
    let lambda = Scalar::parse(lambda)?;
    if lambda.is_zero() {
        bail!("lambda must be nonzero");
    }
    let mode = ell.map_or(ClassMode::FreeAlg, ClassMode::EllStep);
    let records = enumerate_shapes(n, dim, mode)?;
    match format {
        Format::Json => emit_json(out.as_deref(), &records),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "shape", "ell", "extreme", "family", "mode"])?;
            for r in &records {
                w.write_record([
                    r.k.to_string(),
                    r.shape.key(),
                    r.ell.to_string(),
                    r.extreme.to_string(),
                    serde_json::to_value(r.family)?.as_str().unwrap_or_default().to_string(),
                    r.mode.to_string(),
                ])?;
            }
            emit(out.as_deref(), &w.into_inner()?)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Degree { d, canonical: _, seq, field, basis, ranks, out } => degree(d, seq, field, basis, ranks, out)?,
        Command::Verify { config, seed, samples, threads, out } => return verify(config, seed, samples, threads, out),
        Command::Normalize { seq, out } => normalize(seq, out)?,
        Command::Classify { n, dim, ell, lambda, format, out } => classify(n, dim, ell, &lambda, format, out)?,
        Command::Charp { primes, k_min, k_max, d_max, dim_cap, pattern, threads, out } => {
            let cfg = CharpConfig { primes, k_range: [k_min, k_max], d_max, dim_cap, pattern, threads };
            let m = sweep::charp(&cfg)?;
            emit_json(out.as_deref(), &m)?;
            let flagged = m.results.iter().filter(|r| r.flagged).count();
            if flagged > 0 {
                eprintln!("{flagged} shape(s) below the characteristic-0 degree bound");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
