//! `fracpos` command-line front end.
//!
//! Exit codes: 0 success, 1 domain error, 2 malformed input, missing file
//! or bad usage.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fracpos::admissibility::DEFAULT_TOL;
use fracpos::json::{operator_to_json, vector_to_json, MatrixJson};
use fracpos::thresholds::{linear_grid, ProfileSample};
use fracpos::{
    AdmissibilityReport, BipartiteDims, Error, FractionalLevel, LambdaConfig, ThresholdProfile,
};

#[derive(Parser, Debug)]
#[command(name = "fracpos", version, about = "Fractional k-positivity toolkit")]
struct Cli {
    /// Output format. Defaults to csv for tables and json for certificates.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized computations.
    #[arg(long, global = true, default_value_t = fracpos::cones::DEFAULT_SEED)]
    seed: u64,
    /// Tolerance for admissibility tests.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// t*_α and f_d(α) at one level.
    Threshold {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: f64,
    },
    /// Tabulates (α, t*_α, f_d(α)) over a grid.
    Profile {
        #[arg(long)]
        d: usize,
        /// `start:stop:count`
        #[arg(long)]
        grid: GridArg,
        /// Re-validate the emitted table (reciprocity, monotonicity).
        #[arg(long)]
        check: bool,
    },
    /// Fractional Schmidt number of the isotropic state with fidelity F.
    Fsn {
        #[arg(long)]
        d: usize,
        #[arg(long = "F")]
        fidelity: f64,
    },
    /// Largest α at which the depolarizing map Φ_t is α-positive.
    Tau {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: f64,
    },
    /// α-admissibility of a bipartite vector read from JSON.
    TestVector {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        shape: Shape,
    },
    /// α-admissibility of a matrix read from JSON.
    TestMatrix {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        shape: Shape,
    },
    /// Isotropic witness W_α = I − P_ω / f_d(α).
    Witness {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: f64,
    },
    /// Numerical upper bound on λ_α(W) for W read from JSON.
    Lambda {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = fracpos::cones::DEFAULT_STARTS)]
        starts: usize,
        #[arg(long, default_value_t = fracpos::cones::DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long, default_value_t = fracpos::cones::DEFAULT_TOL_DECREASE)]
        tol_decrease: f64,
    },
    /// Checks that every Kraus operator in a JSON list is α-admissible.
    KrausVerify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Vectors separating V_k ⊊ V_α ⊊ V_{k+1}.
    DemoStrict {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        theta: f64,
        #[command(flatten)]
        shape: Shape,
    },
    /// Certificate that a CP post-composition Ad_A ∘ Φ_t leaves the α-positive maps.
    DemoCpFailure {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
    },
}

/// `--d` for square spaces, `--n/--m` for rectangular ones.
#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    #[arg(long, conflicts_with_all = ["n", "m"])]
    d: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    m: Option<usize>,
}

impl Shape {
    fn get(&self) -> Option<(usize, usize)> {
        match (self.d, self.n, self.m) {
            (Some(d), _, _) => Some((d, d)),
            (None, Some(n), Some(m)) => Some((n, m)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct GridArg {
    start: f64,
    stop: f64,
    count: usize,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let count = count.trim().parse::<usize>().map_err(|e| format!("{count:?}: {e}"))?;
        if count == 0 {
            return Err("count must be positive".into());
        }
        Ok(Self { start: num(start)?, stop: num(stop)?, count })
    }
}

/// Failure with its exit code.
#[derive(Debug)]
enum Fail {
    Domain(String),
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Fail::Input(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Fail>;

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Outcome<MatrixJson> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

/// Fills in or checks the bipartite split of a JSON matrix.
fn with_shape(mut j: MatrixJson, shape: &Shape) -> Outcome<MatrixJson> {
    if let Some((n, m)) = shape.get() {
        match (j.n, j.m) {
            (None, None) => {
                j.n = Some(n);
                j.m = Some(m);
            }
            (fn_, fm) if fn_ == Some(n) && fm == Some(m) => {}
            (fn_, fm) => {
                return Err(Fail::Input(format!("file declares n = {fn_:?}, m = {fm:?}; flags say {n}x{m}")));
            }
        }
    }
    Ok(j)
}

fn to_text(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn json_of<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn report_csv(reports: &[AdmissibilityReport]) -> String {
    let mut out = String::from("index,admissible,rank_ok,ratio_ok,observed_ratio,norm,spectrum\n");
    for (i, r) in reports.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            r.admissible,
            r.rank_ok,
            r.ratio_ok,
            r.observed_ratio,
            r.norm,
            spectrum_field(r.spectrum.values())
        )
        .unwrap();
    }
    out
}

fn spectrum_field(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_profile_csv(d: usize, text: &str) -> Outcome<ThresholdProfile> {
    let mut lines = text.lines();
    if lines.next() != Some("alpha,t_star,f_d") {
        return Err(Fail::Domain("profile table lost its header".into()));
    }
    let samples = lines
        .map(|line| {
            let cols: Vec<f64> = line.split(',').map(str::parse).collect::<Result<_, _>>().map_err(|e| {
                Fail::Domain(format!("unreadable profile row {line:?}: {e}"))
            })?;
            match cols[..] {
                [alpha, t_star, f_d] => Ok(ProfileSample { alpha, t_star, f_d }),
                _ => Err(Fail::Domain(format!("profile row {line:?} has {} columns", cols.len()))),
            }
        })
        .collect::<Outcome<Vec<_>>>()?;
    Ok(ThresholdProfile { d, samples })
}

fn run(cli: &Cli) -> Outcome<String> {
    let format = |default: Format| cli.format.unwrap_or(default);
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Fail::Domain(format!("tolerance must be finite and nonnegative, got {tol}")));
    }
    let out = match &cli.command {
        Command::Threshold { d, alpha } => {
            let level = FractionalLevel::new(*alpha, *d)?;
            let (t, f) = (fracpos::t_star(&level), fracpos::f_d(*d, &level));
            match format(Format::Csv) {
                Format::Csv => format!("t_star={t},f_d={f}\n"),
                Format::Json => to_text(&json!({"d": d, "alpha": alpha, "t_star": t, "f_d": f})),
            }
        }
        Command::Profile { d, grid, check } => {
            let alphas = linear_grid(grid.start, grid.stop, grid.count);
            let profile = fracpos::profile_sweep(*d, &alphas)?;
            let csv = profile.to_csv();
            if *check {
                parse_profile_csv(*d, &csv)?.validate()?;
            }
            match format(Format::Csv) {
                Format::Csv => csv,
                Format::Json => to_text(&json_of(&profile)),
            }
        }
        Command::Fsn { d, fidelity } => {
            let alpha = fracpos::fsn_isotropic(*fidelity, *d)?;
            match format(Format::Csv) {
                Format::Csv => format!("{alpha}\n"),
                Format::Json => to_text(&json!({"d": d, "fidelity": fidelity, "alpha": alpha})),
            }
        }
        Command::Tau { d, t } => {
            let alpha = fracpos::tau_depolarizing(*t, *d)?;
            match format(Format::Csv) {
                Format::Csv => format!("{alpha}\n"),
                Format::Json => to_text(&json!({"d": d, "t": t, "alpha": alpha})),
            }
        }
        Command::TestVector { input, alpha, shape } => {
            let j = with_shape(read_json(input)?, shape)?;
            let psi: fracpos::BipartiteVector = serde_json::from_value(json_of(&j)).map_err(|e| Fail::Input(e.to_string()))?;
            let level = FractionalLevel::new(*alpha, psi.dims().d())?;
            let report = fracpos::is_admissible_vector(&psi, &level, tol)?;
            match format(Format::Json) {
                Format::Csv => report_csv(std::slice::from_ref(&report)),
                Format::Json => to_text(&json_of(&report)),
            }
        }
        Command::TestMatrix { input, alpha, shape } => {
            let j = read_json(input)?;
            if let Some((n, m)) = shape.get() {
                if (j.rows, j.cols) != (m, n) && (j.rows, j.cols) != (n, m) {
                    return Err(Fail::Input(format!("file holds a {}x{} matrix; flags say {n}x{m}", j.rows, j.cols)));
                }
            }
            let a = j.to_matrix()?;
            let level = FractionalLevel::new(*alpha, a.nrows().min(a.ncols()))?;
            let report = fracpos::is_admissible_matrix(&a, &level, tol)?;
            match format(Format::Json) {
                Format::Csv => report_csv(std::slice::from_ref(&report)),
                Format::Json => to_text(&json_of(&report)),
            }
        }
        Command::Witness { d, alpha } => {
            let level = FractionalLevel::new(*alpha, *d)?;
            let c = fracpos::cones::witness_coefficients(*d, &level)?;
            match format(Format::Json) {
                Format::Csv => format!("a,b\n{},{}\n", c.a, c.b),
                Format::Json => {
                    let w = fracpos::witness_operator(*d, &level)?;
                    to_text(&json!({
                        "d": d,
                        "alpha": alpha,
                        "f_d": fracpos::f_d(*d, &level),
                        "a": c.a,
                        "b": c.b,
                        "operator": json_of(&operator_to_json(&w)),
                    }))
                }
            }
        }
        Command::Lambda { input, alpha, starts, max_iters, tol_decrease } => {
            let w = fracpos::json::parse_operator(&read(input)?)?;
            let level = FractionalLevel::new(*alpha, w.dims().d())?;
            let cfg = LambdaConfig { starts: *starts, max_iters: *max_iters, seed: cli.seed, tol: *tol_decrease };
            let est = fracpos::lambda_numeric(&w, &level, &cfg)?;
            let spectrum = fracpos::linalg::schmidt_spectrum(&est.argmin)?;
            match format(Format::Csv) {
                Format::Csv => format!(
                    "value,feasibility_residual,starts_used,best_start,spectrum\n{},{},{},{},{}\n",
                    est.value,
                    est.feasibility_residual,
                    est.starts_used,
                    est.best_start,
                    spectrum_field(spectrum.values())
                ),
                Format::Json => to_text(&json!({
                    "alpha": alpha,
                    "value": est.value,
                    "feasibility_residual": est.feasibility_residual,
                    "starts_used": est.starts_used,
                    "best_start": est.best_start,
                    "seed": cli.seed,
                    "spectrum": spectrum.values(),
                    "argmin": json_of(&vector_to_json(&est.argmin)),
                })),
            }
        }
        Command::KrausVerify { input, alpha } => {
            let ks = fracpos::json::parse_kraus(&read(input)?)?;
            let dims = ks.dims();
            let level = FractionalLevel::new(*alpha, dims.n().min(dims.m()))?;
            let cert = fracpos::verify_fractional_kraus(&ks, &level, tol)?;
            match format(Format::Json) {
                Format::Csv => report_csv(&cert.reports),
                Format::Json => to_text(&json_of(&cert)),
            }
        }
        Command::DemoStrict { k, theta, shape } => {
            let (n, m) = shape.get().unwrap_or((k + 1, k + 1));
            let dims = BipartiteDims::new(n, m)?;
            let report = fracpos::demo_strict_inclusion(*k, *theta, dims)?;
            match format(Format::Json) {
                Format::Csv => report_csv(&[
                    report.psi_at_alpha.clone(),
                    report.psi_at_k.clone(),
                    report.psi_prime_at_k_plus_1.clone(),
                    report.psi_prime_at_alpha.clone(),
                ]),
                Format::Json => to_text(&json_of(&report)),
            }
        }
        Command::DemoCpFailure { d, alpha, t } => {
            let level = FractionalLevel::new(*alpha, *d)?;
            let cert = fracpos::demo_cp_failure(*d, &level, *t)?;
            match format(Format::Json) {
                Format::Csv => format!(
                    "d,alpha,t,quadratic_value,predicted_value\n{},{},{},{},{}\n",
                    cert.d, alpha, cert.t, cert.quadratic_value, cert.predicted_value
                ),
                Format::Json => to_text(&json_of(&cert)),
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = run(&cli).and_then(|mut text| {
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(fail) => {
            let (code, msg) = match fail {
                Fail::Domain(msg) => (1, msg),
                Fail::Input(msg) => (2, msg),
            };
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(code)
        }
    }
}
