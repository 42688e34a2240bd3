//! `heckesum`: batch experiments over Hecke eigenvalue sums.
//!
//! Payloads go to `--out` (or stdout); when `--out` is a file, run metadata
//! such as timings lands next to it in `<out>.meta.json` so the payload itself
//! stays byte-identical across reruns.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heckesum::acceptance::{run_with, AcceptanceConfig};
use heckesum::analysis::{
    checkpoints, delta_constant, fit_loglog, prime_sum_at, weighted_prime_sum_at, FitMode, SumKind, SumSeries,
    DEFAULT_CHECKPOINT_START,
};
use heckesum::eigenvalues::cache::{cache_file_name, load_or_build, save_table};
use heckesum::eigenvalues::{build_table, EigenProvider, FormSpec};
use heckesum::factorsieve::{eval_multiplicative_at, ValueSieve};
use heckesum::galois::{
    chebotarev_stats, dihedral_char_average, dihedral_char_average_exact, noncuspidal_lower_bound, DihedralSpec,
};
use heckesum::polyarith::{rho_table, Poly};
use heckesum::report::{
    json_report, write_bounds_csv, write_class_csv, write_eval_csv, write_factor_dump, write_json, write_rho_csv,
    write_series_csv, SPEC_VERSION,
};
use heckesum::sieves::{
    classical_product_bound, counterexample_demo, lower_bound_condition, nair_bound, PrimeWeight,
    DEFAULT_LOWER_FLOOR,
};
use heckesum::Error;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CAPACITY: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "heckesum", version, about = "Sums of Hecke eigenvalues along polynomial values")]
struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    /// Directory for cached eigenvalue tables.
    #[arg(long, global = true, env = "HECKESUM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Checkpoints {
    /// Largest X.
    #[arg(long)]
    xmax: u64,

    /// Ratio between consecutive checkpoints.
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,

    /// First checkpoint.
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_START)]
    start: u64,
}

impl Checkpoints {
    fn marks(&self) -> Result<Vec<u64>> {
        if self.xmax < 2 {
            bail!(Error::Domain(format!("--xmax {} must be at least 2", self.xmax)));
        }
        Ok(checkpoints(self.xmax, self.start, self.ratio)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an eigenvalue table and store it in the cache directory (or --out).
    EigenGen {
        #[arg(long)]
        form: FormSpec,
        #[arg(long)]
        nmax: usize,
    },
    /// Root counts of P modulo primes: `p,rho`.
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[arg(long)]
        pmax: u64,
    },
    /// Checkpointed sum of |lambda(|P(n)|)|: `x,sum,sum_over_x`.
    CorrSum {
        #[arg(long)]
        form: FormSpec,
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[command(flatten)]
        marks: Checkpoints,
        /// Also write the factorization of every value to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Checkpointed prime sum S, T2 or T4: `x,value`.
    PrimeSum {
        #[arg(long)]
        form: FormSpec,
        #[arg(long, default_value = "S")]
        kind: SumKind,
        #[command(flatten)]
        marks: Checkpoints,
    },
    /// Prime sum weighted by the root counts of P: `x,value`.
    WeightedSum {
        #[arg(long)]
        form: FormSpec,
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[command(flatten)]
        marks: Checkpoints,
    },
    /// Sieve bounds at each checkpoint (`x,kind,exponent_sum,bound`), or the
    /// lower-bound condition as JSON.
    SieveBound {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        /// Values of f at primes: const:C, mod:M:R or char:D.
        #[arg(long)]
        f: PrimeWeight,
        #[command(flatten)]
        marks: Checkpoints,
        #[arg(long, value_enum, default_value_t = SieveMode::Bounds)]
        mode: SieveMode,
        #[arg(long, default_value_t = DEFAULT_LOWER_FLOOR)]
        floor: f64,
    },
    /// Log-log fit of a series CSV (first column x, second the value).
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long, value_enum, default_value_t = FitTarget::PrimeSum)]
        mode: FitTarget,
        #[arg(long)]
        label: Option<String>,
    },
    /// The delta constant on [-1, 2] and [-1, 3].
    Delta,
    /// L1 and L2 averages of the 2-dimensional characters of D_2n.
    Dihedral {
        #[arg(long)]
        n: u64,
        /// Representation index; all of them when omitted.
        #[arg(long)]
        a: Option<u64>,
    },
    /// Frobenius cycle-type frequencies: `pattern,frequency,count`.
    Chebotarev {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[arg(long)]
        xmax: u64,
        /// JSON object of expected densities keyed by pattern; switches the
        /// output to a JSON comparison.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Ideal counts of Q(sqrt d) summed over values passing a squarefree screen.
    NoncuspidalLb {
        #[arg(long, allow_hyphen_values = true)]
        poly: Poly,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        xmax: u64,
        #[arg(long)]
        bound: u64,
    },
    /// The f = 1_{p = 3 mod 4} sum along n^2 + 1 against its product bound.
    Counterexample {
        #[arg(long)]
        xmax: u64,
    },
    /// Run the acceptance suite and print a summary table.
    Repro {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SieveMode {
    Bounds,
    Condition,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FitTarget {
    PrimeSum,
    FullSum,
}

/// What a subcommand produced, for the exit status.
enum Outcome {
    Done,
    AcceptanceFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", &e.to_string());
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            report_error("usage", "--workers must be at least 1");
            return ExitCode::from(EXIT_VALIDATION);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            report_error("usage", &e.to_string());
            return ExitCode::from(EXIT_VALIDATION);
        }
    }
    let started = SystemTime::now();
    let clock = Instant::now();
    match run(&cli) {
        Ok(outcome) => {
            if let Some(out) = &cli.out {
                if let Err(e) = write_meta(out, &cli, started, clock.elapsed().as_secs_f64()) {
                    report_error("io", &format!("{e:#}"));
                    return ExitCode::from(EXIT_VALIDATION);
                }
            }
            match outcome {
                Outcome::Done => ExitCode::SUCCESS,
                Outcome::AcceptanceFailed => ExitCode::from(EXIT_ACCEPTANCE),
            }
        }
        Err(e) => {
            let (kind, code) = match e.downcast_ref::<Error>() {
                Some(err @ Error::CapacityExceeded { .. }) => (err.kind(), EXIT_CAPACITY),
                Some(err) => (err.kind(), EXIT_VALIDATION),
                None => ("io", EXIT_VALIDATION),
            };
            report_error(kind, &format!("{e:#}"));
            ExitCode::from(code)
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let v = json!({ "spec_version": SPEC_VERSION, "error": kind, "message": message });
    eprintln!("{v}");
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_meta(out: &Path, cli: &Cli, started: SystemTime, elapsed: f64) -> Result<()> {
    let started = started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "spec_version": SPEC_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "workers": cli.workers.unwrap_or_else(rayon::current_num_threads),
        "started_unix": started,
        "elapsed_secs": elapsed,
    });
    let path = meta_path(out);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_json(BufWriter::new(file), &meta)?;
    Ok(())
}

/// The payload sink: `--out` or stdout.
fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(out: &Option<PathBuf>, report: &str, payload: &impl serde::Serialize) -> Result<()> {
    let mut w = sink(out)?;
    write_json(&mut w, &json_report(report, payload)?)?;
    w.flush()?;
    Ok(())
}

fn emit_csv(out: &Option<PathBuf>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let mut w = sink(out)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// A provider able to evaluate at every prime up to `reach`, which is only
/// computed for tabulated forms.
fn provider(spec: FormSpec, reach: impl FnOnce() -> Result<u64>, cache_dir: Option<&Path>) -> Result<EigenProvider> {
    match spec {
        FormSpec::Level1Holomorphic { .. } => {
            let reach = reach()?;
            let n = usize::try_from(reach).map_err(|_| Error::CapacityExceeded {
                what: format!("eigenvalue table up to {reach}"),
                max_feasible: usize::MAX as u64,
            })?;
            Ok(EigenProvider::tabulated(load_or_build(spec, n, cache_dir)?.into()))
        }
        _ => Ok(EigenProvider::closed_form(spec)?),
    }
}

/// Largest value `|P(n)|` can take for `n <= x`, as a table size.
fn value_reach(poly: &Poly, x: u64) -> Result<u64> {
    u64::try_from(&poly.value_bound(x)).map_err(|_| {
        Error::CapacityExceeded {
            what: format!("values of {poly} up to X = {x}"),
            max_feasible: 0,
        }
        .into()
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let out = &cli.out;
    let cache = cli.cache_dir.as_deref();
    match &cli.command {
        Command::EigenGen { form, nmax } => {
            let table = build_table(*form, *nmax)?;
            let path = match (out, cache) {
                (Some(p), _) => p.clone(),
                (None, Some(dir)) => {
                    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    dir.join(cache_file_name(form, *nmax))
                }
                (None, None) => bail!(Error::Domain("eigen-gen needs --out or a cache directory".into())),
            };
            save_table(&table, &path)?;
            let summary = json!({
                "spec_version": SPEC_VERSION,
                "report": "eigen-gen",
                "form": form.to_string(),
                "n_max": nmax,
                "path": path.display().to_string(),
            });
            // the table itself is the artifact; the summary goes to stdout
            write_json(io::stdout().lock(), &summary)?;
            Ok(Outcome::Done)
        }
        Command::Rho { poly, pmax } => {
            let table = rho_table(poly, *pmax)?;
            emit_csv(out, |w| write_rho_csv(w, &table))?;
            Ok(Outcome::Done)
        }
        Command::CorrSum {
            form,
            poly,
            marks,
            dump,
        } => {
            let marks = marks.marks()?;
            let x = *marks.last().expect("checkpoints are never empty");
            let prov = provider(*form, || value_reach(poly, x), cache)?;
            let sum = eval_multiplicative_at(poly, &marks, &prov)?;
            if sum.reconstruction_failures > 0 {
                bail!(Error::Domain(format!(
                    "{} values failed to reconstruct from their factorizations",
                    sum.reconstruction_failures
                )));
            }
            if let Some(path) = dump {
                let sieve = ValueSieve::new(poly, x)?;
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                write_factor_dump(&mut w, sieve.iter())?;
                w.flush()?;
            }
            emit_csv(out, |w| write_eval_csv(w, &sum))?;
            Ok(Outcome::Done)
        }
        Command::PrimeSum { form, kind, marks } => {
            let marks = marks.marks()?;
            let prov = provider(*form, || Ok(*marks.last().expect("nonempty")), cache)?;
            let s = prime_sum_at(&prov, *kind, &marks)?;
            emit_csv(out, |w| write_series_csv(w, &s))?;
            Ok(Outcome::Done)
        }
        Command::WeightedSum { form, poly, marks } => {
            let marks = marks.marks()?;
            let x = *marks.last().expect("nonempty");
            let prov = provider(*form, || Ok(x), cache)?;
            let rho = rho_table(poly, x)?;
            let s = weighted_prime_sum_at(&prov, &rho, &marks)?;
            emit_csv(out, |w| write_series_csv(w, &s))?;
            Ok(Outcome::Done)
        }
        Command::SieveBound {
            poly,
            f,
            marks,
            mode,
            floor,
        } => {
            let marks = marks.marks()?;
            let x = *marks.last().expect("nonempty");
            match mode {
                SieveMode::Bounds => {
                    let rho = rho_table(poly, x)?;
                    let mut rows = Vec::new();
                    for &m in &marks {
                        rows.push(nair_bound(|p| f.at(p), &rho, m)?);
                        rows.push(classical_product_bound(|p| f.at(p), m)?);
                    }
                    emit_csv(out, |w| write_bounds_csv(w, &rows))?;
                }
                SieveMode::Condition => {
                    let c = lower_bound_condition(|p| f.at(p), x, *floor)?;
                    emit_json(out, "lower-bound-condition", &c)?;
                }
            }
            Ok(Outcome::Done)
        }
        Command::Fit {
            input,
            lo,
            hi,
            mode,
            label,
        } => {
            let series = read_series(input, label.clone())?;
            let mode = match mode {
                FitTarget::PrimeSum => FitMode::PrimeSum,
                FitTarget::FullSum => FitMode::FullSum,
            };
            let fit = fit_loglog(&series, (*lo, *hi), mode)?;
            emit_json(out, "fit", &fit)?;
            Ok(Outcome::Done)
        }
        Command::Delta => {
            let results = vec![delta_constant(-1.0, 2.0)?, delta_constant(-1.0, 3.0)?];
            emit_json(out, "delta", &json!({ "results": results }))?;
            Ok(Outcome::Done)
        }
        Command::Dihedral { n, a } => {
            let specs = match a {
                Some(a) => vec![DihedralSpec::new(*n, *a)?],
                None => DihedralSpec::all(*n)?,
            };
            let mut rows = Vec::new();
            for spec in specs {
                let exact = |power| -> Result<Value> {
                    Ok(match dihedral_char_average_exact(spec, power)? {
                        Some(q) => json!(q.to_string()),
                        None => Value::Null,
                    })
                };
                rows.push(json!({
                    "n": spec.n,
                    "a": spec.a,
                    "l1_average": dihedral_char_average(spec, 1)?,
                    "l1_exact": exact(1)?,
                    "l2_average": dihedral_char_average(spec, 2)?,
                    "l2_exact": exact(2)?,
                }));
            }
            emit_json(out, "dihedral", &json!({ "representations": rows }))?;
            Ok(Outcome::Done)
        }
        Command::Chebotarev { poly, xmax, expected } => {
            let freq = chebotarev_stats(poly, *xmax)?;
            match expected {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let exp = serde_json::from_str(&text)
                        .map_err(|e| Error::Domain(format!("expected densities in {}: {e}", path.display())))?;
                    let rows = freq.compare(&exp);
                    let worst = rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
                    emit_json(
                        out,
                        "chebotarev-comparison",
                        &json!({
                            "poly": poly.to_string(),
                            "x": xmax,
                            "sample_size": freq.sample_size,
                            "max_abs_deviation": worst,
                            "patterns": rows,
                        }),
                    )?;
                }
                None => emit_csv(out, |w| write_class_csv(w, &freq))?,
            }
            Ok(Outcome::Done)
        }
        Command::NoncuspidalLb { poly, d, xmax, bound } => {
            let r = noncuspidal_lower_bound(poly, *d, *xmax, *bound)?;
            emit_json(out, "noncuspidal-lower-bound", &r)?;
            Ok(Outcome::Done)
        }
        Command::Counterexample { xmax } => {
            let r = counterexample_demo(*xmax)?;
            emit_json(out, "counterexample", &r)?;
            Ok(Outcome::Done)
        }
        Command::Repro { only } => {
            let config = AcceptanceConfig {
                only: only.clone(),
                cache_dir: cli.cache_dir.clone(),
            };
            let mut stdout = io::stdout().lock();
            let outcomes = run_with(config, |o| {
                let _ = writeln!(stdout, "{o}");
                let _ = stdout.flush();
            });
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            writeln!(stdout, "{passed} of {} criteria passed", outcomes.len())?;
            drop(stdout);
            if let Some(path) = out {
                let rows: Vec<Value> = outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "id": o.id,
                            "name": o.name,
                            "passed": o.passed(),
                            "check_passed": o.check_passed,
                            "budget_secs": o.budget_secs,
                            "detail": o.detail,
                        })
                    })
                    .collect();
                // timings vary run to run, so they stay in the metadata file
                emit_json(&Some(path.clone()), "repro", &json!({ "criteria": rows }))?;
            }
            Ok(if passed == outcomes.len() {
                Outcome::Done
            } else {
                Outcome::AcceptanceFailed
            })
        }
    }
}

/// Reads `x,value` pairs from the first two columns of a CSV with a header.
fn read_series(path: &Path, label: Option<String>) -> Result<SumSeries> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut checkpoints = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let parse_err = || Error::Domain(format!("{}:{}: expected `x,value,...`", path.display(), i + 1));
        let x: u64 = cols.next().and_then(|c| c.trim().parse().ok()).ok_or_else(parse_err)?;
        let v: f64 = cols.next().and_then(|c| c.trim().parse().ok()).ok_or_else(parse_err)?;
        checkpoints.push((x, v));
    }
    if checkpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
        bail!(Error::Domain(format!("{}: x must be strictly increasing", path.display())));
    }
    Ok(SumSeries {
        label: label.unwrap_or_else(|| path.display().to_string()),
        checkpoints,
    })
}
