//! Command-line front end.
//!
//! Every command prints exactly one JSON envelope to stdout and nothing
//! else; diagnostics go to stderr. Exit codes: 0 when every certified claim
//! held, 1 when a claim was violated, 2 when the computation could not run
//! at all (bad input, shape mismatch, refused certificate).
//!
//! Floats are printed with 17 significant digits, enough to round-trip f64
//! exactly, so downstream tooling can reproduce comparisons bit for bit.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::angles::canonical_angles;
use crate::decomp::StiefelFrame;
use crate::eig::certify_eigenspace;
use crate::error::{Error, Result};
use crate::harness::gen::{gen_hermitian, gen_stiefel, gen_with_singular_values};
use crate::harness::{parse_dims, parse_targets, run_fuzz, FuzzConfig};
use crate::matrix::{read_matrix_file, write_matrix_file, DenseMatrix};
use crate::polar::certify_polar;
use crate::tol::Tolerances;

#[derive(Parser)]
#[command(
    name = "tracegap",
    version,
    about = "A posteriori trace-gap certificates for dominant eigenspaces and \
             orthonormal polar factors",
    propagate_version = true
)]
struct Cli {
    /// Override a tolerance, e.g. --tol slack_tol=1e-8; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true, action = ArgAction::Append)]
    tol: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical angles between the column spans of two frames.
    Angles {
        /// Matrix file holding an orthonormal frame.
        x: PathBuf,
        /// Matrix file holding a second frame of the same shape.
        y: PathBuf,
    },
    /// Certify a frame against the dominant eigenspace of a Hermitian matrix.
    EigCert {
        /// Matrix file holding the Hermitian matrix.
        h: PathBuf,
        /// Matrix file holding the orthonormal frame to certify.
        p: PathBuf,
    },
    /// Certify a frame against the orthonormal polar factor of a tall matrix.
    PolarCert {
        /// Matrix file holding the tall matrix.
        b: PathBuf,
        /// Matrix file holding the orthonormal frame to certify.
        p: PathBuf,
    },
    /// Run a randomized verification campaign over the certified bounds.
    Fuzz {
        /// Campaign file in key = value form; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of trials.
        #[arg(long)]
        trials: Option<u64>,
        /// Campaign seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Dimension cycle, e.g. 20x5,10x3.
        #[arg(long)]
        dims: Option<String>,
        /// Spectrum style: uniform, clustered, geometric, prescribed-gap(G).
        #[arg(long)]
        spectrum: Option<String>,
        /// Angle style: tiny, moderate, near-orthogonal, antipodal.
        #[arg(long)]
        angles: Option<String>,
        /// Check families: eig, polar, corollary, lemma, von-neumann, all.
        #[arg(long)]
        which: Option<String>,
    },
    /// Generate seeded test matrices.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Hermitian matrix with a prescribed spectrum.
    Hermitian {
        /// Matrix order.
        #[arg(long)]
        n: usize,
        /// Comma-separated eigenvalues, one per dimension.
        #[arg(long)]
        spectrum: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output matrix file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Orthonormal frame drawn from the rotation-invariant distribution.
    Stiefel {
        /// Ambient dimension (rows).
        #[arg(long)]
        n: usize,
        /// Frame width (columns).
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output matrix file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tall matrix with prescribed singular values.
    Svals {
        /// Rows.
        #[arg(long)]
        n: usize,
        /// Columns.
        #[arg(long)]
        k: usize,
        /// Comma-separated singular values, one per column.
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output matrix file.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Input file reference with a content digest, so an envelope pins down
/// exactly what was certified.
#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    version: &'static str,
    command: String,
    inputs: Vec<InputDigest>,
    tolerances: BTreeMap<String, f64>,
    result: T,
    verified: bool,
}

/// Compact JSON, except every f64 is printed as `d.dddddddddddddddde±dd`:
/// 17 significant digits round-trip any finite double exactly.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn render_envelope<T: Serialize>(envelope: &Envelope<T>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    envelope
        .serialize(&mut ser)
        .map_err(|e| Error::Format(format!("cannot serialize result: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn digest_input(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

fn read_frame(path: &Path, tol: &Tolerances) -> Result<StiefelFrame> {
    StiefelFrame::new(read_matrix_file(path)?, tol)
}

fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        values.push(
            part.parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid {what} entry {part:?}")))?,
        );
    }
    if values.is_empty() {
        return Err(Error::Config(format!("{what} list is empty")));
    }
    Ok(values)
}

#[derive(Serialize)]
struct GenOutput {
    path: String,
    rows: usize,
    cols: usize,
    sha256: String,
}

fn write_generated(path: &Path, m: &DenseMatrix) -> Result<GenOutput> {
    write_matrix_file(path, m)?;
    let bytes = std::fs::read(path)?;
    Ok(GenOutput {
        path: path.display().to_string(),
        rows: m.rows(),
        cols: m.cols(),
        sha256: sha256_hex(&bytes),
    })
}

fn execute(cli: Cli) -> Result<i32> {
    let mut tol = Tolerances::default();
    for spec in &cli.tol {
        tol.apply_override(spec)?;
    }
    let tolerances = tol.to_map();

    let (payload, verified): (Vec<u8>, bool) = match cli.command {
        Command::Angles { x, y } => {
            let inputs = vec![digest_input(&x)?, digest_input(&y)?];
            let fx = read_frame(&x, &tol)?;
            let fy = read_frame(&y, &tol)?;
            let set = canonical_angles(&fx, &fy)?;
            let envelope = Envelope {
                version: "1",
                command: "angles".into(),
                inputs,
                tolerances,
                result: set,
                verified: true,
            };
            (render_envelope(&envelope)?, true)
        }
        Command::EigCert { h, p } => {
            let inputs = vec![digest_input(&h)?, digest_input(&p)?];
            let hm = read_matrix_file(&h)?;
            let pf = read_frame(&p, &tol)?;
            let cert = certify_eigenspace(&hm, &pf, &tol)?;
            let verified = cert.chain_verified;
            let envelope = Envelope {
                version: "1",
                command: "eig-cert".into(),
                inputs,
                tolerances,
                result: cert,
                verified,
            };
            (render_envelope(&envelope)?, verified)
        }
        Command::PolarCert { b, p } => {
            let inputs = vec![digest_input(&b)?, digest_input(&p)?];
            let bm = read_matrix_file(&b)?;
            let pf = read_frame(&p, &tol)?;
            let cert = certify_polar(&bm, &pf, &tol)?;
            let verified = cert.chain_verified;
            let envelope = Envelope {
                version: "1",
                command: "polar-cert".into(),
                inputs,
                tolerances,
                result: cert,
                verified,
            };
            (render_envelope(&envelope)?, verified)
        }
        Command::Fuzz {
            config,
            trials,
            seed,
            dims,
            spectrum,
            angles,
            which,
        } => {
            let mut inputs = Vec::new();
            let mut cfg = match &config {
                Some(path) => {
                    inputs.push(digest_input(path)?);
                    FuzzConfig::from_kv(&std::fs::read_to_string(path)?)?
                }
                None => FuzzConfig::default(),
            };
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(d) = &dims {
                cfg.dims = parse_dims(d)?;
            }
            if let Some(s) = &spectrum {
                cfg.spectrum = s.parse()?;
            }
            if let Some(a) = &angles {
                cfg.angles = a.parse()?;
            }
            if let Some(w) = &which {
                cfg.targets = parse_targets(w)?;
            }
            let report = run_fuzz(&cfg, &tol)?;
            // Timing goes to stderr: the envelope stays a pure function of
            // the configuration.
            eprintln!(
                "fuzz: {} trials, {} checks in {:.2}s",
                report.trials, report.checks_evaluated, report.elapsed_seconds
            );
            let verified = report.violations.is_empty();
            let envelope = Envelope {
                version: "1",
                command: "fuzz".into(),
                inputs,
                tolerances,
                result: report,
                verified,
            };
            (render_envelope(&envelope)?, verified)
        }
        Command::Gen { what } => {
            let (command, output) = match what {
                GenCommand::Hermitian {
                    n,
                    spectrum,
                    seed,
                    out,
                } => {
                    let values = parse_f64_list(&spectrum, "spectrum")?;
                    let m = gen_hermitian(n, &values, seed, &tol)?;
                    ("gen hermitian", write_generated(&out, &m)?)
                }
                GenCommand::Stiefel { n, k, seed, out } => {
                    let frame = gen_stiefel(n, k, seed, &tol)?;
                    ("gen stiefel", write_generated(&out, frame.matrix())?)
                }
                GenCommand::Svals {
                    n,
                    k,
                    sigma,
                    seed,
                    out,
                } => {
                    let values = parse_f64_list(&sigma, "sigma")?;
                    let m = gen_with_singular_values(n, k, &values, seed, &tol)?;
                    ("gen svals", write_generated(&out, &m)?)
                }
            };
            let envelope = Envelope {
                version: "1",
                command: command.into(),
                inputs: Vec::new(),
                tolerances,
                result: output,
                verified: true,
            };
            (render_envelope(&envelope)?, true)
        }
    };

    std::io::stdout().write_all(&payload)?;
    Ok(if verified { 0 } else { 1 })
}

/// Parses the process arguments, runs the command, and returns the exit
/// code. Usage errors exit through clap with code 2.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
