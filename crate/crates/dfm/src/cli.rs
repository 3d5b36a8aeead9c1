//! Command-line front end and the on-disk result cache.
//!
//! Subcommands: `classes` (isomorphism classes with orbit sizes and
//! solution counters), `moment` (symbolic quasi-polynomials or exact
//! values), `verify` (closed forms against the exhaustive oracle), and
//! `cache` (build/inspect/clear the per-order result cache).
//!
//! Exit codes: 0 success, 1 verification mismatch (or other runtime
//! failure), 2 usage error, 3 cache corruption. All numbers in machine
//! output are exact `num/den` strings; nothing is ever emitted as a float.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::IsoClass;
use crate::error::{Error, Result};
use crate::moments;
use crate::partitions::{Partition, TripleIndex};
use crate::qpoly::QuasiPolynomial;
use crate::rat::format_rat;
use crate::seqstat::{exhaustive_central_moment, Statistic};

const CACHE_VERSION: &str = "dfm-cache-v1";

#[derive(Parser)]
#[command(
    name = "dfm",
    about = "Exact moments of the autocorrelation demerit factor of random binary sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Moment order (number of equations).
    #[arg(long)]
    p: usize,
    /// Cache directory for classification results.
    #[arg(long, default_value = ".dfm-cache")]
    cache_dir: PathBuf,
    /// Permit the long-running order (p = 5; hours of compute).
    #[arg(long)]
    allow_long_running: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the isomorphism classes of contributory partitions.
    Classes {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "text", value_parser = ["json", "csv", "text"])]
        format: String,
    },
    /// Print a central moment, symbolically or at a given length.
    Moment {
        #[command(flatten)]
        common: CommonArgs,
        /// Moment of the sum of squared autocorrelations.
        #[arg(long, conflicts_with = "adf")]
        ssac: bool,
        /// Moment of the demerit factor.
        #[arg(long)]
        adf: bool,
        /// Emit the closed-form quasi-polynomial.
        #[arg(long, conflicts_with = "value")]
        symbolic: bool,
        /// Evaluate at a specific length (requires --ell).
        #[arg(long)]
        value: bool,
        /// Sequence length for value mode.
        #[arg(long)]
        ell: Option<u64>,
        /// Report the standardized moment (value mode only).
        #[arg(long)]
        standardized: bool,
        /// Decimal digits for standardized output.
        #[arg(long, default_value_t = 30)]
        precision: usize,
        #[arg(long, default_value = "text", value_parser = ["json", "csv", "text"])]
        format: String,
    },
    /// Check the closed forms against the exhaustive oracle.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest length to check (2^ell sequences are enumerated).
        #[arg(long, default_value_t = 12)]
        max_ell: u32,
    },
    /// Manage the classification cache.
    Cache {
        #[command(flatten)]
        common: CommonArgs,
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Compute and store the classification for this order.
    Build,
    /// Report whether a valid cache file exists.
    Status,
    /// Remove the cache file for this order.
    Clear,
}

#[derive(Serialize, Deserialize)]
struct CacheClass {
    representative: Vec<Vec<TripleIndex>>,
    orbit_size: u64,
    sols: QuasiPolynomial,
}

#[derive(Serialize, Deserialize)]
struct CachePayload {
    version: String,
    p: usize,
    classes: Vec<CacheClass>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    content_hash: String,
    #[serde(flatten)]
    payload: CachePayload,
}

fn payload_hash(payload: &CachePayload) -> Result<String> {
    let bytes = serde_json::to_vec(payload)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

fn cache_path(dir: &Path, p: usize) -> PathBuf {
    dir.join(format!("classes-p{p}.json"))
}

/// Writes the classes for order `p` to the cache (temp file + rename).
pub fn cache_store(dir: &Path, p: usize, classes: &[IsoClass]) -> Result<PathBuf> {
    let payload = CachePayload {
        version: CACHE_VERSION.to_string(),
        p,
        classes: classes
            .iter()
            .map(|c| CacheClass {
                representative: c.representative.classes().to_vec(),
                orbit_size: c.orbit_size,
                sols: c.sols.clone().expect("cache stores computed sols"),
            })
            .collect(),
    };
    let file = CacheFile {
        content_hash: payload_hash(&payload)?,
        payload,
    };
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, p);
    let tmp = dir.join(format!(".classes-p{p}.json.tmp.{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec_pretty(&file)?)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads and integrity-checks the cache for order `p`; `Ok(None)` when the
/// file does not exist.
pub fn cache_load(dir: &Path, p: usize) -> Result<Option<Vec<IsoClass>>> {
    let path = cache_path(dir, p);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = serde_json::from_slice(&bytes)
        .map_err(|e| Error::CacheCorrupt(format!("{}: {e}", path.display())))?;
    if file.payload.version != CACHE_VERSION {
        return Err(Error::CacheCorrupt(format!(
            "{}: version {:?}",
            path.display(),
            file.payload.version
        )));
    }
    if file.payload.p != p {
        return Err(Error::CacheCorrupt(format!(
            "{}: stores p = {}",
            path.display(),
            file.payload.p
        )));
    }
    let expected = payload_hash(&file.payload)?;
    if expected != file.content_hash {
        return Err(Error::CacheCorrupt(format!(
            "{}: content hash mismatch",
            path.display()
        )));
    }
    let classes = file
        .payload
        .classes
        .into_iter()
        .map(|c| IsoClass {
            representative: Partition::new(p, c.representative),
            orbit_size: c.orbit_size,
            sols: Some(c.sols),
        })
        .collect();
    Ok(Some(classes))
}

fn check_order(common: &CommonArgs) -> Result<()> {
    if common.p < 1 || common.p > 5 {
        return Err(Error::Usage(format!(
            "p must lie in 1..=5, got {}",
            common.p
        )));
    }
    if common.p == 5 && !common.allow_long_running {
        return Err(Error::Usage(
            "p = 5 takes hours; pass --allow-long-running to proceed".into(),
        ));
    }
    Ok(())
}

/// Classes for the order, from cache when present, computing and caching
/// otherwise.
fn classes_for(common: &CommonArgs) -> Result<Arc<Vec<IsoClass>>> {
    check_order(common)?;
    if let Some(classes) = cache_load(&common.cache_dir, common.p)? {
        return Ok(Arc::new(classes));
    }
    let classes = moments::catalog(common.p)?;
    cache_store(&common.cache_dir, common.p, &classes)?;
    Ok(classes)
}

fn ssac_moment_for(common: &CommonArgs) -> Result<QuasiPolynomial> {
    let classes = classes_for(common)?;
    let mut total = QuasiPolynomial::zero();
    for class in classes.iter() {
        let sols = class.sols.as_ref().expect("cache and catalog fill sols");
        total = total.add(&sols.scale(&crate::rat::rat_int(class.orbit_size as i64)));
    }
    Ok(total)
}

fn class_json(class: &IsoClass) -> serde_json::Value {
    serde_json::json!({
        "representative": class.representative.classes(),
        "orbit_size": class.orbit_size,
        "sols": class.sols,
    })
}

fn run_classes(common: &CommonArgs, format: &str) -> Result<()> {
    let classes = classes_for(common)?;
    match format {
        "json" => {
            let records: Vec<_> = classes.iter().map(class_json).collect();
            println!("{}", serde_json::to_string_pretty(&records)?);
        }
        "csv" => {
            println!("index,orbit_size,class_count,sols_period,sols_degree");
            for (i, c) in classes.iter().enumerate() {
                let sols = c.sols.as_ref().expect("sols filled");
                println!(
                    "{i},{},{},{},{}",
                    c.orbit_size,
                    c.representative.class_count(),
                    sols.period(),
                    sols.degree()
                );
            }
        }
        _ => {
            println!("{} isomorphism classes for p = {}", classes.len(), common.p);
            for (i, c) in classes.iter().enumerate() {
                println!("class {i}: orbit size {}", c.orbit_size);
                for class in c.representative.classes() {
                    let triples: Vec<String> = class
                        .iter()
                        .map(|t| format!("({},{},{})", t.e, t.s, t.v))
                        .collect();
                    println!("  {{{}}}", triples.join(", "));
                }
                println!("  sols: {}", c.sols.as_ref().expect("sols filled"));
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_moment(
    common: &CommonArgs,
    ssac: bool,
    adf: bool,
    symbolic: bool,
    value: bool,
    ell: Option<u64>,
    standardized: bool,
    precision: usize,
    format: &str,
) -> Result<()> {
    if ssac == adf {
        return Err(Error::Usage("choose exactly one of --ssac / --adf".into()));
    }
    if symbolic == value {
        return Err(Error::Usage(
            "choose exactly one of --symbolic / --value".into(),
        ));
    }
    let statistic = if ssac { "ssac" } else { "adf" };
    let qp = ssac_moment_for(common)?;
    let divisor_exponent = 2 * common.p as u32;

    if symbolic {
        if standardized {
            return Err(Error::Usage(
                "standardized moments are value-only (radicals stay numeric)".into(),
            ));
        }
        match format {
            "json" => {
                let mut record = serde_json::json!({
                    "p": common.p,
                    "statistic": statistic,
                    "quasi_polynomial": qp,
                });
                if adf {
                    record["divisor_exponent"] = serde_json::json!(divisor_exponent);
                }
                println!("{}", serde_json::to_string_pretty(&record)?);
            }
            "csv" => {
                println!("statistic,p,period,residue,coefficients_low_to_high");
                for r in 0..qp.period() {
                    let coeffs: Vec<String> =
                        qp.constituent(r).coeffs().iter().map(format_rat).collect();
                    println!(
                        "{statistic},{},{},{r},{}",
                        common.p,
                        qp.period(),
                        coeffs.join("|")
                    );
                }
            }
            _ => {
                println!("{qp}");
                if adf {
                    println!("divided by ell^{divisor_exponent}");
                }
            }
        }
        return Ok(());
    }

    let ell = ell.ok_or_else(|| Error::Usage("--value requires --ell".into()))?;
    if ell == 0 {
        return Err(Error::Usage("--ell must be at least 1".into()));
    }
    let rendered = if standardized {
        moments::standardized_moment(common.p, ell, precision)?
    } else if ssac {
        format_rat(&qp.eval_u64(ell))
    } else {
        format_rat(&moments::adf_central_moment(common.p, ell)?)
    };
    match format {
        "json" => {
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "p": common.p,
                    "statistic": statistic,
                    "ell": ell,
                    "standardized": standardized,
                    "value": rendered,
                }))?
            );
        }
        "csv" => {
            println!("statistic,p,ell,value");
            println!("{statistic},{},{ell},{rendered}", common.p);
        }
        _ => println!("{rendered}"),
    }
    Ok(())
}

/// Compares the closed form with the exhaustive oracle; `Err(Usage)` exits
/// 2, a reported mismatch exits 1.
fn run_verify(common: &CommonArgs, max_ell: u32) -> Result<bool> {
    if max_ell > crate::seqstat::MAX_EXHAUSTIVE_ELL {
        return Err(Error::Usage(format!(
            "--max-ell {max_ell} exceeds the exhaustive guard {}",
            crate::seqstat::MAX_EXHAUSTIVE_ELL
        )));
    }
    let qp = ssac_moment_for(common)?;
    let mut all_ok = true;
    for ell in 1..=max_ell {
        let expected = exhaustive_central_moment(common.p as u32, ell, Statistic::Ssac)?;
        let got = qp.eval_u64(ell as u64);
        if expected == got {
            println!("p={} ell={ell}: ok ({})", common.p, format_rat(&got));
        } else {
            println!(
                "p={} ell={ell}: MISMATCH expected {} got {}",
                common.p,
                format_rat(&expected),
                format_rat(&got)
            );
            all_ok = false;
            break;
        }
    }
    Ok(all_ok)
}

fn run_cache(common: &CommonArgs, action: &CacheAction) -> Result<()> {
    match action {
        CacheAction::Build => {
            check_order(common)?;
            let classes = moments::catalog(common.p)?;
            let path = cache_store(&common.cache_dir, common.p, &classes)?;
            println!("stored {} classes at {}", classes.len(), path.display());
        }
        CacheAction::Status => match cache_load(&common.cache_dir, common.p)? {
            Some(classes) => println!(
                "valid cache for p = {}: {} classes",
                common.p,
                classes.len()
            ),
            None => println!("no cache file for p = {}", common.p),
        },
        CacheAction::Clear => {
            let path = cache_path(&common.cache_dir, common.p);
            match fs::remove_file(&path) {
                Ok(()) => println!("removed {}", path.display()),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                    println!("no cache file for p = {}", common.p)
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let outcome = match &cli.command {
        Command::Classes { common, format } => run_classes(common, format),
        Command::Moment {
            common,
            ssac,
            adf,
            symbolic,
            value,
            ell,
            standardized,
            precision,
            format,
        } => run_moment(
            common,
            *ssac,
            *adf,
            *symbolic,
            *value,
            *ell,
            *standardized,
            *precision,
            format,
        ),
        Command::Verify { common, max_ell } => match run_verify(common, *max_ell) {
            Ok(true) => Ok(()),
            Ok(false) => return 1,
            Err(e) => Err(e),
        },
        Command::Cache { common, action } => run_cache(common, action),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => 2,
                Error::CacheCorrupt(_) => 3,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let classes = moments::catalog(2).unwrap();
        let path = cache_store(dir.path(), 2, &classes).unwrap();

        let loaded = cache_load(dir.path(), 2).unwrap().unwrap();
        assert_eq!(loaded.len(), classes.len());
        for (a, b) in loaded.iter().zip(classes.iter()) {
            assert_eq!(a.representative, b.representative);
            assert_eq!(a.orbit_size, b.orbit_size);
            assert_eq!(a.sols, b.sols);
        }

        // Flip one byte inside the payload: the hash must catch it.
        let mut bytes = fs::read(&path).unwrap();
        let idx = bytes.windows(10).position(|w| w == b"orbit_size").unwrap();
        bytes[idx + 13] = b'9';
        fs::write(&path, &bytes).unwrap();
        match cache_load(dir.path(), 2) {
            Err(Error::CacheCorrupt(_)) => {}
            other => panic!("expected corruption error, got {other:?}"),
        }
    }

    #[test]
    fn missing_cache_is_not_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(cache_load(dir.path(), 3).unwrap().is_none());
    }
}
