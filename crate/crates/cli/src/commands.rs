use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use exchangeable::oracle::run_suite;
use exchangeable::scalar::parse_rational;
use exchangeable::{
    count_law_of_mixture, estimate_definetti, generate, moments, recover_measure, sample_counts, synthesize_fdd,
    tuple_stats, verify_representation, CountDistribution, FamilySpec, MixingMeasure, Mode, MomentVector, Rational,
    Scalar, TupleMethod,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::manifest::RunManifest;
use crate::table::Table;
use crate::{Cli, Command, FamilyArgs, FamilyKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] exchangeable::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Lib(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Json { .. } => "Parse",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a subcommand produced, before the manifest is attached.
struct Report {
    json: Value,
    table: Table,
    passed: bool,
}

impl Report {
    fn new(json: Value, table: Table) -> Self {
        Self { json, table, passed: true }
    }
}

/// Runs the parsed command line; `Ok(false)` means a check ran and failed.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<bool> {
    if cli.exact {
        execute::<Rational>(cli, argv)
    } else {
        execute::<f64>(cli, argv)
    }
}

fn execute<S: Scalar>(cli: &Cli, argv: Vec<String>) -> Result<bool> {
    let mode = match &cli.command {
        Command::Oracle { .. } => Mode::Rational,
        _ => S::MODE,
    };
    let mut manifest = RunManifest::new(argv, mode.as_str());
    let report = match &cli.command {
        Command::Gen { family, n } => {
            let spec = family_spec::<S>(family, &mut manifest)?;
            law_report(&generate(&spec, *n)?)
        }
        Command::Sample { family, n, trials, seed } => {
            let spec = family_spec::<S>(family, &mut manifest)?;
            manifest.seed(*seed);
            let mut report = law_report(&sample_counts(&spec, *n, *trials, *seed)?);
            report.json["metadata"] = json!({"seed": seed, "trials": trials});
            report.table.note(format!("seed {seed}, {trials} trials"));
            report
        }
        Command::Moments { law, k, sn } => {
            let d = CountDistribution::<S>::from_json(&read_json(law, &mut manifest)?)?;
            let m = if *sn { moments::sn_moment_vector(&d, *k)? } else { moments::moment_vector(&d, *k)? };
            moments_report(&m)
        }
        Command::Tuples { n, k, oracle } => {
            let method = if *oracle { TupleMethod::Enumerate } else { TupleMethod::ClosedForm };
            let stats = tuple_stats(*n, *k, method)?;
            let mut table = Table::new(["rho", "tuples"]);
            for (r, c) in stats.counts_by_rho.iter().enumerate() {
                table.row([(r + 1).to_string(), c.to_string()]);
            }
            table.note(format!("total {}", stats.total()));
            Report::new(stats.to_json(), table)
        }
        Command::Definetti { family, n } => {
            let spec = family_spec::<S>(family, &mut manifest)?;
            measure_report(&estimate_definetti(&spec, *n)?)
        }
        Command::Recover { moments, grid, tol } => {
            let m = MomentVector::<S>::from_json(&read_json(moments, &mut manifest)?)?;
            manifest.tolerance("residual", json!(tol));
            let r = recover_measure(&m, *grid, *tol)?;
            let mut report = measure_report(&r.measure);
            report.table.note(format!(
                "residual {:e} after {} iterations ({})",
                r.residual,
                r.iterations,
                r.solver.as_str()
            ));
            Report::new(r.to_json(), report.table)
        }
        Command::Synth { measure, x, k } => {
            let mu = MixingMeasure::<S>::from_json(&read_json(measure, &mut manifest)?)?;
            match (x, k) {
                (Some(x), _) => {
                    let bits = parse_bits(x)?;
                    let p = synthesize_fdd(&mu, &bits)?;
                    let mut table = Table::new(["x", "probability"]);
                    table.row([x.clone(), p.to_string()]);
                    Report::new(json!({"x": bits, "probability": p.to_json()}), table)
                }
                (None, Some(k)) => law_report(&count_law_of_mixture(&mu, *k)?),
                (None, None) => return Err(CliError::Usage("synth needs --x or --k".into())),
            }
        }
        Command::Verify { law, measure, kmax, tol } => {
            let d = CountDistribution::<S>::from_json(&read_json(law, &mut manifest)?)?;
            let mu = MixingMeasure::<S>::from_json(&read_json(measure, &mut manifest)?)?;
            let tol = match tol {
                Some(t) => scalar::<S>("tol", t)?,
                None if S::is_exact() => S::zero(),
                None => S::derived_tol(),
            };
            manifest.tolerance("verify", tol.to_json());
            let report = verify_representation(&d, &mu, *kmax, &tol)?;
            let mut table = Table::new(["k", "moment gap", "count gap", "at m", "event gap"]);
            for k in 0..report.k_max {
                table.row([
                    (k + 1).to_string(),
                    report.per_k_moment_gap[k].to_string(),
                    report.per_count_gap[k].to_string(),
                    report.per_count_argmax[k].to_string(),
                    report.per_event_gap[k].to_string(),
                ]);
            }
            table.note(format!(
                "{} at tolerance {}",
                if report.passed { "passed" } else { "FAILED" },
                report.tolerance
            ));
            Report { json: report.to_json(), table, passed: report.passed }
        }
        Command::Oracle { n, k } => {
            let checks = run_suite(*n, *k)?;
            let passed = checks.iter().all(|c| c.passed);
            let mut table = Table::new(["check", "subject", "result", "detail"]);
            for c in &checks {
                table.row([c.check.as_str(), &c.subject, if c.passed { "pass" } else { "FAIL" }, &c.detail]);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            table.note(format!("{} checks, {failed} failed", checks.len()));
            let json = json!({"n": n, "k": k, "checks": checks, "passed": passed});
            Report { json, table, passed }
        }
    };
    emit(cli, report, &manifest)
}

fn emit(cli: &Cli, report: Report, manifest: &RunManifest) -> Result<bool> {
    let mut json = report.json;
    let sidecar = match &mut json {
        Value::Object(map) => {
            map.insert("manifest".into(), manifest.to_json());
            None
        }
        _ => Some(manifest.to_json()),
    };
    match &cli.output {
        Some(path) => {
            write_json(path, &json)?;
            if let Some(m) = sidecar {
                write_json(&sidecar_path(path), &m)?;
            }
            if cli.pretty {
                print_stdout(&report.table.render())?;
            }
        }
        None if cli.pretty => print_stdout(&report.table.render())?,
        None => print_stdout(&(to_string(&json) + "\n"))?,
    }
    Ok(report.passed)
}

/// Writes to standard output; a closed pipe on the reading end is not an error.
fn print_stdout(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(CliError::Io { path: PathBuf::from("<stdout>"), source: e })
        }
        _ => Ok(()),
    }
}

/// `moments.json` gets its manifest in `moments.json.manifest.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn to_string(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    fs::write(path, to_string(value) + "\n").map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_json(path: &Path, manifest: &mut RunManifest) -> Result<Value> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    manifest.input(path, &bytes);
    serde_json::from_slice(&bytes).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

fn scalar<S: Scalar>(name: &str, text: &str) -> Result<S> {
    let r = parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))?;
    Ok(S::from_rational(&r))
}

fn required<'a>(value: &'a Option<String>, name: &str, family: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| CliError::Usage(format!("family {family} needs --{name}")))
}

fn family_spec<S: Scalar>(args: &FamilyArgs, manifest: &mut RunManifest) -> Result<FamilySpec<S>> {
    Ok(match args.family {
        FamilyKind::Iid => FamilySpec::iid(scalar("p", required(&args.p, "p", "iid")?)?)?,
        FamilyKind::Polya => FamilySpec::polya(
            scalar("a", required(&args.a, "a", "polya")?)?,
            scalar("b", required(&args.b, "b", "polya")?)?,
        )?,
        FamilyKind::Explicit => {
            let path = args.law.as_ref().ok_or_else(|| CliError::Usage("family explicit needs --law".into()))?;
            FamilySpec::Explicit(CountDistribution::from_json(&read_json(path, manifest)?)?)
        }
        FamilyKind::Mixture => {
            let path = args.measure.as_ref().ok_or_else(|| CliError::Usage("family mixture needs --measure".into()))?;
            FamilySpec::Mixture(MixingMeasure::from_json(&read_json(path, manifest)?)?)
        }
    })
}

/// Accepts `1,0,1` or `101`.
fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(CliError::Usage(format!("--x: '{other}' is not a bit"))),
        })
        .collect()
}

fn law_report<S: Scalar>(d: &CountDistribution<S>) -> Report {
    let mut table = Table::new(["m", "P(count = m)"]);
    for (m, w) in d.weights().iter().enumerate() {
        table.row([m.to_string(), w.to_string()]);
    }
    Report::new(d.to_json(), table)
}

fn measure_report<S: Scalar>(mu: &MixingMeasure<S>) -> Report {
    let mut table = Table::new(["p", "w"]);
    for a in mu.atoms() {
        table.row([a.p.to_string(), a.w.to_string()]);
    }
    Report::new(mu.to_json(), table)
}

fn moments_report<S: Scalar>(m: &MomentVector<S>) -> Report {
    let mut table = Table::new(["k", "m_k"]);
    for (k, v) in m.values().iter().enumerate() {
        table.row([(k + 1).to_string(), v.to_string()]);
    }
    Report::new(m.to_json(), table)
}
