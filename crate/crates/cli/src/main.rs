//! `hamming-intersect`: exact Hamming-ball intersection counts and their
//! exponential rates from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid or infeasible
//! arguments. Reals are printed with 12 significant digits; exact counts as
//! decimal strings.

mod format;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hamming_intersect::exact::{
    brute_force_intersection, canonical_centers, three_ball_intersection, CenterTriple, Word, ORACLE_MAX_LEN,
};
use hamming_intersect::experiments::{convergence_study, critical_window_study, sweep_beta};
use hamming_intersect::rates::{f3, g2, RegimeParams, SolverConfig};
use hamming_intersect::suite::{self, SuiteConfig};

use format::{json_real, real, OutputFormat};

/// `println!` that reports write failures instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*).map_err(anyhow::Error::from)?
    };
}

#[derive(Debug, Parser)]
#[command(name = "hamming-intersect", version, about = "Exact counts and exponents of Hamming-ball intersections")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact size of the intersection of three radius-r balls.
    Exact {
        #[arg(long)]
        n: Option<usize>,
        /// Minimum pairwise center distance (canonical centers).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: usize,
        /// Three binary words, one per line, replacing the canonical centers.
        #[arg(long)]
        centers_file: Option<PathBuf>,
        /// Cross-check against brute-force enumeration (n <= 22).
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate the three-ball exponent f3 or the two-ball exponent g2.
    Rate {
        #[arg(value_enum)]
        which: Which,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Dense-grid subdivisions per side for f3.
        #[arg(long, default_value_t = SolverConfig::default().mesh)]
        mesh: usize,
    },
    /// f3 and g2 over equally spaced beta for a fixed alpha.
    Sweep {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Finite-n rates (1/n) ln I against f3.
    Converge {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Exact counts in the critical window k = 2t, r = t + C, n = scale * t.
    Critical {
        #[arg(long = "C")]
        excess: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        scale: usize,
    },
    /// Run the invariant suite; exits 0 iff every check passes.
    Verify {
        /// Oracle checks up to n = 10 and reduced rate grids.
        #[arg(long)]
        fast: bool,
        /// Seed for randomized configuration sampling.
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    F3,
    G2,
}

enum Failure {
    /// Exit 2.
    Invalid(anyhow::Error),
    /// Exit 1.
    Check(String),
}

impl From<hamming_intersect::Error> for Failure {
    fn from(e: hamming_intersect::Error) -> Self {
        Failure::Invalid(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

type Outcome = Result<(), Failure>;

/// Header plus rows of already formatted cells.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write(&self, format: OutputFormat, out: &mut impl Write) -> anyhow::Result<()> {
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            OutputFormat::Plain => {
                writeln!(out, "{}", self.header.join(" "))?;
                for row in &self.rows {
                    writeln!(out, "{}", row.join(" "))?;
                }
            }
            OutputFormat::Json => bail!("tables are emitted as JSON by their command"),
        }
        Ok(())
    }
}

fn print_json(value: &Value) -> anyhow::Result<()> {
    out!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn read_centers(path: &PathBuf) -> anyhow::Result<CenterTriple> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let words: Vec<Word> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(|l| l.parse::<Word>()).collect::<Result<_, _>>()?;
    let [x1, x2, x3]: [Word; 3] = words
        .try_into()
        .map_err(|w: Vec<Word>| anyhow!("centers file must hold exactly 3 words, found {}", w.len()))?;
    Ok(CenterTriple::new(x1, x2, x3)?)
}

fn cmd_exact(
    format: OutputFormat,
    n: Option<usize>,
    k: Option<usize>,
    r: usize,
    centers_file: Option<PathBuf>,
    oracle: bool,
) -> Outcome {
    let triple = match (&centers_file, n, k) {
        (Some(path), _, _) => {
            let t = read_centers(path)?;
            if let Some(n) = n.filter(|&n| n != t.n()) {
                return Err(anyhow!("--n {n} disagrees with centers of length {}", t.n()).into());
            }
            t
        }
        (None, Some(n), Some(k)) => canonical_centers(n, k)?,
        (None, _, _) => return Err(anyhow!("--n and --k are required without --centers-file").into()),
    };
    let n = triple.n();
    if r > n {
        return Err(anyhow!("radius r={r} exceeds n={n}").into());
    }
    let count = three_ball_intersection(&triple, r);
    let check = if oracle {
        if n > ORACLE_MAX_LEN {
            return Err(anyhow!("--oracle needs n <= {ORACLE_MAX_LEN}, got {n}").into());
        }
        let words: Vec<Word> = triple.centers().into_iter().cloned().collect();
        Some(brute_force_intersection(&words, r)?)
    } else {
        None
    };
    let verdict = check.as_ref().map(|b| if *b == count { "MATCH" } else { "MISMATCH" });
    let k = triple.min_distance();
    match format {
        OutputFormat::Plain => {
            out!("{count}");
            if let (Some(b), Some(v)) = (&check, verdict) {
                out!("oracle {b}");
                out!("{v}");
            }
        }
        OutputFormat::Json => {
            let mut obj = json!({ "n": n, "k": k, "r": r, "count": count.to_string() });
            if let (Some(b), Some(v)) = (&check, verdict) {
                obj["oracle"] = json!(b.to_string());
                obj["verdict"] = json!(v);
            }
            print_json(&obj)?;
        }
        OutputFormat::Csv => {
            let mut header = vec!["n", "k", "r", "count"];
            let mut row = vec![n.to_string(), k.to_string(), r.to_string(), count.to_string()];
            if let (Some(b), Some(v)) = (&check, verdict) {
                header.extend(["oracle", "verdict"]);
                row.extend([b.to_string(), v.to_string()]);
            }
            Table { header, rows: vec![row] }.write(format, &mut io::stdout())?;
        }
    }
    match verdict {
        Some("MISMATCH") => Err(Failure::Check("exact count disagrees with brute force".into())),
        _ => Ok(()),
    }
}

fn cmd_rate(format: OutputFormat, which: Which, alpha: f64, beta: f64, mesh: usize) -> Outcome {
    let params = RegimeParams::new(alpha, beta);
    match which {
        Which::G2 => {
            let value = g2(&params)?;
            match format {
                OutputFormat::Plain => out!("g2 {}", real(value)),
                OutputFormat::Json => print_json(&json!({
                    "which": "g2", "alpha": json_real(alpha), "beta": json_real(beta), "value": json_real(value)
                }))?,
                OutputFormat::Csv => Table {
                    header: vec!["which", "alpha", "beta", "value"],
                    rows: vec![vec!["g2".into(), real(alpha), real(beta), real(value)]],
                }
                .write(format, &mut io::stdout())?,
            }
        }
        Which::F3 => {
            let config = SolverConfig { mesh, ..SolverConfig::default() };
            let res = f3(&params, &config)?;
            let a = res.argmax;
            let active: Vec<&str> = res.active_constraints.iter().map(|c| c.tag()).collect();
            let fields = [
                ("theta", a.theta),
                ("delta", a.delta),
                ("rho_star", a.rho_star),
                ("p1", a.p1),
                ("p23", a.p23),
                ("p4", a.p4),
            ];
            match format {
                OutputFormat::Plain => {
                    out!("f3 {}", real(res.value));
                    for (name, v) in fields {
                        out!("{name} {}", real(v));
                    }
                    out!("active {}", active.join(","));
                }
                OutputFormat::Json => {
                    let mut argmax = serde_json::Map::new();
                    for (name, v) in fields {
                        argmax.insert(name.into(), json_real(v));
                    }
                    print_json(&json!({
                        "which": "f3",
                        "alpha": json_real(alpha),
                        "beta": json_real(beta),
                        "value": json_real(res.value),
                        "argmax": argmax,
                        "active_constraints": active,
                    }))?;
                }
                OutputFormat::Csv => {
                    let mut header = vec!["which", "alpha", "beta", "value"];
                    let mut row = vec!["f3".to_string(), real(alpha), real(beta), real(res.value)];
                    for (name, v) in fields {
                        header.push(name);
                        row.push(real(v));
                    }
                    header.push("active");
                    row.push(active.join(";"));
                    Table { header, rows: vec![row] }.write(format, &mut io::stdout())?;
                }
            }
        }
    }
    Ok(())
}

fn print_notes(notes: &[String]) {
    for note in notes {
        eprintln!("note: {note}");
    }
}

fn cmd_sweep(format: OutputFormat, alpha: f64, beta_min: f64, beta_max: f64, steps: usize) -> Outcome {
    let sweep = sweep_beta(alpha, beta_min, beta_max, steps, &SolverConfig::default())?;
    if format == OutputFormat::Json {
        let rows: Vec<Value> = sweep
            .rows
            .iter()
            .map(|r| json!({ "beta": json_real(r.beta), "f3": json_real(r.f3), "g2": json_real(r.g2), "gap": json_real(r.gap) }))
            .collect();
        print_json(&json!({ "alpha": json_real(alpha), "rows": rows, "notes": sweep.notes }))?;
    } else {
        print_notes(&sweep.notes);
        let rows = sweep.rows.iter().map(|r| vec![real(r.beta), real(r.f3), real(r.g2), real(r.gap)]).collect();
        Table { header: vec!["beta", "f3", "g2", "gap"], rows }.write(format, &mut io::stdout())?;
    }
    Ok(())
}

fn cmd_converge(format: OutputFormat, alpha: f64, beta: f64, n: &[usize]) -> Outcome {
    let study = convergence_study(alpha, beta, n, &SolverConfig::default())?;
    if format == OutputFormat::Json {
        let rows: Vec<Value> = study
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n, "k": r.k, "r": r.r,
                    "finite_rate": json_real(r.finite_rate),
                    "limit_rate": json_real(r.limit_rate),
                    "deviation": json_real(r.deviation),
                })
            })
            .collect();
        print_json(&json!({ "alpha": json_real(alpha), "beta": json_real(beta), "rows": rows, "notes": study.notes }))?;
    } else {
        print_notes(&study.notes);
        let rows = study
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.k.to_string(),
                    r.r.to_string(),
                    real(r.finite_rate),
                    real(r.limit_rate),
                    real(r.deviation),
                ]
            })
            .collect();
        Table { header: vec!["n", "k", "r", "finite_rate", "limit_rate", "deviation"], rows }
            .write(format, &mut io::stdout())?;
    }
    Ok(())
}

fn cmd_critical(format: OutputFormat, excess: usize, t: &[usize], scale: usize) -> Outcome {
    let study = critical_window_study(excess, t, scale)?;
    match format {
        OutputFormat::Json => {
            let rows: Vec<Value> = study
                .rows
                .iter()
                .map(|r| json!({ "t": r.t, "n": r.n, "count": r.count.to_string(), "log_count": json_real(r.log_count) }))
                .collect();
            print_json(&json!({ "C": excess, "scale": scale, "rows": rows, "slope": json_real(study.slope) }))?;
        }
        _ => {
            let rows = study
                .rows
                .iter()
                .map(|r| vec![r.t.to_string(), r.n.to_string(), r.count.to_string(), real(r.log_count)])
                .collect();
            Table { header: vec!["t", "n", "count", "log_count"], rows }.write(format, &mut io::stdout())?;
            if format == OutputFormat::Plain {
                out!("slope {}", real(study.slope));
            } else {
                eprintln!("slope {}", real(study.slope));
            }
        }
    }
    Ok(())
}

fn cmd_verify(format: OutputFormat, fast: bool, seed: u64) -> Outcome {
    let config = SuiteConfig { fast, seed };
    let mut outcomes = Vec::new();
    let mut stdout = io::stdout();
    if format == OutputFormat::Csv {
        let mut w = csv::Writer::from_writer(io::stdout());
        w.write_record(["check", "passed", "detail"]).map_err(anyhow::Error::from)?;
        for o in suite::run(&config) {
            w.write_record([o.name, if o.passed { "true" } else { "false" }, o.detail.as_str()])
                .map_err(anyhow::Error::from)?;
            outcomes.push(o);
        }
        w.flush().map_err(anyhow::Error::from)?;
    } else {
        for o in suite::run(&config) {
            if format == OutputFormat::Plain {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                writeln!(stdout, "{tag} {}: {}", o.name, o.detail).map_err(anyhow::Error::from)?;
                stdout.flush().map_err(anyhow::Error::from)?;
            }
            outcomes.push(o);
        }
        if format == OutputFormat::Json {
            print_json(&json!({ "fast": fast, "seed": seed, "checks": outcomes }))?;
        }
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Exact { n, k, r, centers_file, oracle } => cmd_exact(format, n, k, r, centers_file, oracle),
        Command::Rate { which, alpha, beta, mesh } => cmd_rate(format, which, alpha, beta, mesh),
        Command::Sweep { alpha, beta_min, beta_max, steps } => cmd_sweep(format, alpha, beta_min, beta_max, steps),
        Command::Converge { alpha, beta, n } => cmd_converge(format, alpha, beta, &n),
        Command::Critical { excess, t, scale } => cmd_critical(format, excess, &t, scale),
        Command::Verify { fast, seed } => cmd_verify(format, fast, seed),
    }
}

/// A closed downstream pipe (e.g. `| head`) is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        let io_err = cause.downcast_ref::<io::Error>().or_else(|| match cause.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(inner) => Some(inner),
            _ => None,
        });
        io_err.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
