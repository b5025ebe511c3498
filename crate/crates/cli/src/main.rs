// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use magnitude_core::gen::{GenSpec, Generated};
use magnitude_core::lab::campaign::{run_suite, CampaignConfig, Suite};
use magnitude_core::lab::probes::{
    bm_campaign, bm_one_set_campaign, equality_gap_search, probe_monotonicity, BmCampaign, GapGenerator,
    DEFAULT_PROBE_TOL,
};
use magnitude_core::lab::report::{exit_code, CheckReport};
use magnitude_core::magnitude::DEFAULT_WEIGHTING_TOL;
use magnitude_core::magnitude::{classify, default_grid, linear_grid, log_grid, magnitude_function, weighting};
use magnitude_core::metric::{csv_io, interpolate, rescale, to_metric_space, PointCloud};
use magnitude_core::symmat::DEFAULT_PD_TOL;
use magnitude_core::{Error, FiniteMetricSpace, Result};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// Magnitude of finite metric spaces and randomized checks of the matrix
/// inequalities behind its bounds.
#[derive(Parser)]
#[command(name = "magnitude", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Magnitude of a space at one scale.
    Compute {
        /// Distance-matrix CSV, or PointCloud JSON when the name ends in `.json`.
        #[arg(long)]
        input: PathBuf,
        /// Scale factor applied to every distance.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Print weighting and classification as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Magnitude function `t ↦ Mag(tX)` on a grid, as `t,magnitude` CSV.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2f64.powi(-10))]
        t_min: f64,
        #[arg(long, default_value_t = 2f64.powi(10))]
        t_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Log-spaced grid (the default).
        #[arg(long, conflicts_with = "linear")]
        log: bool,
        /// Equally spaced grid.
        #[arg(long)]
        linear: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interpolated metric `−ln[(1−t)e^{−d0} + t e^{−d1}]` for `d0 ≤ d1`.
    Interpolate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a theorem campaign; exits 1 if any check is violated.
    Verify {
        /// One of the suite names, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a conjecture probe; candidates are reported, never fatal.
    Probe {
        #[arg(long, value_enum)]
        kind: ProbeKind,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROBE_TOL)]
        tol: f64,
        /// Ambient dimension of the random point sets.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Largest space size for the equality-gap search.
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Minimum inter-point distance for the equality-gap search.
        #[arg(long, default_value_t = 0.5)]
        min_separation: f64,
        /// Space probed by `monotonicity`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate test data from a GenSpec JSON file.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Second output file for comparable pairs.
        #[arg(long)]
        out_b: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeKind {
    Bm,
    BmOneSet,
    EqualityGap,
    Monotonicity,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_space(path: &Path) -> Result<FiniteMetricSpace> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let file = File::open(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let context = |e: Error| Error::Input(format!("{}: {e}", path.display()));
    if is_json {
        let text = io::read_to_string(file)?;
        to_metric_space(&PointCloud::from_json(&text).map_err(context)?).map_err(context)
    } else {
        csv_io::read_space(file).map_err(context)
    }
}

/// Writes to `out`, or to stdout when absent.
fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    emit(out, |w| Ok(w.write_all(text.as_bytes())?))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Compute { input, t, json } => {
            let x = rescale(&read_space(&input)?, t)?;
            let result = weighting(&x, DEFAULT_WEIGHTING_TOL)?;
            if json {
                let class = classify(&x, &default_grid(), DEFAULT_PD_TOL)?;
                let doc = json!({ "t": t, "result": result, "classification": class });
                emit_text(None, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            } else {
                println!("{:?}", result.magnitude);
            }
            Ok(0)
        }
        Command::Sweep { input, t_min, t_max, points, log: _, linear, out } => {
            if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) || points == 0 {
                return Err(Error::Input("grid needs 0 < t-min < t-max and points ≥ 1".into()));
            }
            let x = read_space(&input)?;
            let grid = if linear { linear_grid(t_min, t_max, points) } else { log_grid(t_min, t_max, points) };
            emit_text(out.as_deref(), &magnitude_function(&x, &grid).to_csv())?;
            Ok(0)
        }
        Command::Interpolate { a, b, t, out } => {
            let xt = interpolate(&read_space(&a)?, &read_space(&b)?, t)?;
            emit(out.as_deref(), |w| csv_io::write_space(w, &xt))?;
            Ok(0)
        }
        Command::Verify { suite, instances, seed, tol, out } => {
            if tol.is_some_and(|t| !(t > 0.0)) {
                return Err(Error::Input("tolerance must be positive".into()));
            }
            let suites = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>()?] };
            let config = CampaignConfig { seed, instances, tolerance: tol };
            let reports: Vec<CheckReport> = suites.iter().map(|&s| run_suite(s, &config)).collect();
            for r in &reports {
                eprintln!(
                    "{}: {} comparisons, worst margin {:e}, {} violations",
                    r.check_name,
                    r.instances,
                    r.worst_margin,
                    r.violations.len()
                );
            }
            let text = if reports.len() == 1 { reports[0].to_json() } else { serde_json::to_string_pretty(&reports)? };
            emit_text(out.as_deref(), &format!("{text}\n"))?;
            Ok(if exit_code(&reports) == 0 { 0 } else { EXIT_VIOLATION })
        }
        Command::Probe { kind, instances, seed, tol, dim, n_max, min_separation, input, out } => {
            if !(tol > 0.0) || dim == 0 {
                return Err(Error::Input("probe needs tol > 0 and dim ≥ 1".into()));
            }
            let campaign = BmCampaign { tol, ..BmCampaign::new(dim, instances, seed) };
            let report = match kind {
                ProbeKind::Bm => bm_campaign(&campaign),
                ProbeKind::BmOneSet => bm_one_set_campaign(&campaign),
                ProbeKind::EqualityGap => {
                    let generator = GapGenerator { n_max, dim, min_separation, ..GapGenerator::default() };
                    equality_gap_search(&generator, instances, seed, tol)?
                }
                ProbeKind::Monotonicity => {
                    let path = input.ok_or_else(|| Error::Input("monotonicity needs --input".into()))?;
                    probe_monotonicity(&read_space(&path)?, &default_grid(), tol)
                }
            };
            eprintln!("{}: min ratio {:e}, {:?}", report.probe_name, report.min_ratio, report.verdict);
            emit_text(out.as_deref(), &format!("{}\n", report.to_json()))?;
            Ok(0)
        }
        Command::Gen { spec, out, out_b } => {
            let text = fs::read_to_string(&spec).map_err(|e| Error::Input(format!("{}: {e}", spec.display())))?;
            let generated =
                GenSpec::from_json(&text).map_err(|e| Error::Input(format!("{}: {e}", spec.display())))?.generate()?;
            match generated {
                Generated::Space(x) => emit(out.as_deref(), |w| csv_io::write_space(w, &x))?,
                Generated::Matrix(m) => emit(out.as_deref(), |w| csv_io::write_matrix(w, None, &m.to_rows()))?,
                Generated::Cloud(c) => emit_text(out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&c)?))?,
                Generated::Pair(d0, d1) => match (out, out_b) {
                    (Some(a), Some(b)) => {
                        emit(Some(&a), |w| csv_io::write_space(w, &d0))?;
                        emit(Some(&b), |w| csv_io::write_space(w, &d1))?;
                    }
                    (None, None) => {
                        let doc = json!({ "d0": d0.to_rows(), "d1": d1.to_rows() });
                        emit_text(None, &format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
                    }
                    _ => return Err(Error::Input("a comparable pair needs both --out and --out-b".into())),
                },
            }
            Ok(0)
        }
    }
}
