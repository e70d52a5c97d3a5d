use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tiltperc::bounds::bounds_report;
use tiltperc::checks::{run_check, CheckOptions, CheckSummary, Level, CHECK_NAMES};
use tiltperc::lambda::{surface_field, Window};
use tiltperc::mc::{estimate_pc, PcOptions};
use tiltperc::rho::{gamma_estimate, gamma_richardson};
use tiltperc::stats::ReplicaPlan;
use tiltperc::sweep::{emit_report, run_sweep, write_report, ReportFormat, SweepConfig};
use tiltperc::{Alpha, FloorKind, FloorSpec, TiltSpec};

const PROXY_LABEL: &str = "proxy: P(F_R(0) - floor(0) <= h*) crosses target";

#[derive(Parser)]
#[command(
    name = "tiltperc",
    version,
    about = "Lipschitz surfaces above tilted planes in site percolation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every closed-form and numerical bound for one (alpha, d, k).
    Bounds {
        #[command(flatten)]
        tilt: TiltArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dump the finite-window surface F_R for one seeded configuration.
    Surface {
        #[command(flatten)]
        tilt: TiltArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Floor::Plane)]
        floor: Floor,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo estimate of the surface threshold with a replica CI.
    EstimatePc {
        #[command(flatten)]
        tilt: TiltArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        reps: ReplicaArgs,
        /// Proxy height; defaults to half the height cap.
        #[arg(long)]
        h_star: Option<i64>,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
        #[arg(long, default_value_t = 1.0 / 1024.0)]
        resolution: f64,
        #[arg(long, value_enum, default_value_t = Floor::Plane)]
        floor: Floor,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Oriented max-closed-path constant gamma(q) at fixed depth.
    RhoGamma {
        /// One or more closed-site densities.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Path length.
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        reps: ReplicaArgs,
        /// Also report the estimate at 2n and the linear extrapolation.
        #[arg(long)]
        richardson: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a parameter sweep described by a JSON config.
    Sweep {
        /// Config file; the built-in demo grid when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the built-in acceptance checks.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = CheckLevel::Quick)]
        level: CheckLevel,
        /// Comma-separated check ids (1-10); all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Print the summary as JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Shift every floor by one on odd columns; every sensitive check must fail.
        #[arg(long, hide = true)]
        floor_fault: bool,
    },
}

#[derive(Args)]
struct TiltArgs {
    /// Tilt as a rational p/q in [0, 1).
    #[arg(long, default_value = "0")]
    alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Number of tilted coordinates; defaults to dim.
    #[arg(long)]
    k: Option<usize>,
}

impl TiltArgs {
    fn k(&self) -> usize {
        self.k.unwrap_or(self.dim)
    }

    fn tilt(&self) -> tiltperc::Result<TiltSpec> {
        TiltSpec::canonical(self.alpha, self.dim, self.k())
    }
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = 20)]
    radius: i64,
    /// Height cap; defaults to twice the radius.
    #[arg(long)]
    height_cap: Option<i64>,
}

impl WindowArgs {
    fn height_cap(&self) -> i64 {
        self.height_cap.unwrap_or(2 * self.radius)
    }

    fn window(&self) -> tiltperc::Result<Window> {
        Window::new(self.radius, self.height_cap())
    }
}

#[derive(Args)]
struct ReplicaArgs {
    #[arg(long, default_value_t = 500)]
    replicas: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Floor {
    Plane,
    Pyramid,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckLevel {
    Quick,
    Full,
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<tiltperc::Error> for Failure {
    fn from(e: tiltperc::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn floor_spec(kind: Floor, tilt: TiltSpec) -> FloorSpec {
    FloorSpec {
        kind: match kind {
            Floor::Plane => FloorKind::Plane,
            Floor::Pyramid => FloorKind::Pyramid,
        },
        tilt,
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes `rows` as CSV (with header) or as a JSON document `{meta, rows}`.
fn emit<T: Serialize>(out: &OutArgs, meta: serde_json::Value, rows: &[T]) -> Result<(), Failure> {
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            for r in rows {
                c.serialize(r)?;
            }
            c.flush()?;
        }
        Format::Json => {
            let doc = serde_json::json!({ "meta": meta, "rows": rows });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundRow<'a> {
    name: &'a str,
    kind: String,
    validity: String,
    value: f64,
    params: &'a str,
}

#[derive(Serialize)]
struct SurfaceRow {
    x: String,
    floor: i64,
    height: i64,
    capped: bool,
}

#[derive(Serialize)]
struct PcRow {
    alpha: String,
    d: usize,
    k: usize,
    radius: i64,
    height_cap: i64,
    h_star: i64,
    target: f64,
    q_hat: f64,
    q_hat_lo: f64,
    q_hat_hi: f64,
    replicas: usize,
    censored: usize,
    seed: u64,
}

#[derive(Serialize)]
struct GammaRow {
    q: f64,
    d: usize,
    n: usize,
    replicas: usize,
    gamma_hat: f64,
    stderr: f64,
    gamma_hat_2n: Option<f64>,
    extrapolated: Option<f64>,
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Bounds { tilt, out } => {
            let rep = bounds_report(tilt.alpha, tilt.dim, tilt.k())?;
            if !rep.sandwich_holds() {
                return Err(Failure::Check(format!(
                    "exact lower bound {} exceeds exact upper bound {}",
                    rep.max_exact_lower(),
                    rep.min_exact_upper()
                )));
            }
            let rows: Vec<BoundRow> = rep
                .entries
                .iter()
                .map(|e| BoundRow {
                    name: &e.name,
                    kind: format!("{:?}", e.kind).to_lowercase(),
                    validity: e.validity.to_string(),
                    value: e.value,
                    params: &e.params,
                })
                .collect();
            let meta = serde_json::json!({
                "alpha": rep.alpha.to_string(), "d": rep.d, "k": rep.k,
                "max_exact_lower": rep.max_exact_lower(), "min_exact_upper": rep.min_exact_upper(),
            });
            emit(&out, meta, &rows)
        }
        Command::Surface {
            tilt,
            window,
            q,
            seed,
            floor,
            out,
        } => {
            if !(0.0..=1.0).contains(&q) {
                return Err(Failure::Usage(format!("--q {q} outside [0, 1]")));
            }
            let spec = floor_spec(floor, tilt.tilt()?);
            let field = tiltperc::ConfigField::new(q, seed);
            let sf = surface_field(&field, &spec, &window.window()?)?;
            let rows: Vec<SurfaceRow> = (0..sf.len())
                .map(|i| SurfaceRow {
                    x: sf.bar(i).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                    floor: sf.floors[i],
                    height: sf.heights[i],
                    capped: sf.capped[i],
                })
                .collect();
            let meta = serde_json::json!({
                "alpha": tilt.alpha.to_string(), "d": tilt.dim, "k": tilt.k(), "q": q, "seed": seed,
                "radius": window.radius, "height_cap": window.height_cap(), "diverged": sf.diverged,
            });
            emit(&out, meta, &rows)
        }
        Command::EstimatePc {
            tilt,
            window,
            reps,
            h_star,
            target,
            resolution,
            floor,
            out,
        } => {
            let spec = floor_spec(floor, tilt.tilt()?);
            let opts = PcOptions {
                h_star,
                target,
                resolution,
                ..PcOptions::default()
            };
            let plan = ReplicaPlan::new(reps.replicas, reps.seed);
            let est = estimate_pc(&spec, &window.window()?, &plan, &opts)?;
            let row = PcRow {
                alpha: tilt.alpha.to_string(),
                d: tilt.dim,
                k: tilt.k(),
                radius: window.radius,
                height_cap: window.height_cap(),
                h_star: est.h_star,
                target: est.target,
                q_hat: est.ci.point,
                q_hat_lo: est.ci.lo,
                q_hat_hi: est.ci.hi,
                replicas: est.ci.replicas,
                censored: est.ci.censored_count,
                seed: reps.seed,
            };
            emit(&out, serde_json::json!({ "estimator": PROXY_LABEL }), &[row])
        }
        Command::RhoGamma {
            q,
            dim,
            n,
            reps,
            richardson,
            out,
        } => {
            let mut rows = Vec::new();
            for &qi in &q {
                if !(0.0..=1.0).contains(&qi) {
                    return Err(Failure::Usage(format!("--q {qi} outside [0, 1]")));
                }
                rows.push(if richardson {
                    let r = gamma_richardson(qi, dim, n, reps.replicas, reps.seed)?;
                    GammaRow {
                        q: qi,
                        d: dim,
                        n,
                        replicas: reps.replicas,
                        gamma_hat: r.at_n.gamma_hat,
                        stderr: r.at_n.stderr,
                        gamma_hat_2n: Some(r.at_2n.gamma_hat),
                        extrapolated: Some(r.extrapolated),
                    }
                } else {
                    let g = gamma_estimate(qi, dim, n, reps.replicas, reps.seed)?;
                    GammaRow {
                        q: qi,
                        d: dim,
                        n,
                        replicas: reps.replicas,
                        gamma_hat: g.gamma_hat,
                        stderr: g.stderr,
                        gamma_hat_2n: None,
                        extrapolated: None,
                    }
                });
            }
            emit(
                &out,
                serde_json::json!({ "note": "fixed-n estimate; finite n biases it low" }),
                &rows,
            )
        }
        Command::Sweep {
            config,
            replicas,
            seed,
            out,
            format,
        } => {
            let mut cfg = match &config {
                Some(p) => SweepConfig::from_path(p)?,
                None => SweepConfig::demo(),
            };
            if let Some(r) = replicas {
                cfg.replicas = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output = Some(o.to_string_lossy().into_owned());
            }
            if let Some(f) = format {
                cfg.format = f.into();
            }
            cfg.validate()?;
            let rows = run_sweep(&cfg)?;
            match &cfg.output {
                Some(p) => emit_report(&rows, &cfg.q_grid, cfg.format, p.as_ref())?,
                None => write_report(&rows, &cfg.q_grid, cfg.format, io::stdout().lock())
                    .map_err(|e| Failure::Usage(e.to_string()))?,
            }
            if let Some(bad) = rows.iter().find(|r| !r.sandwich_ok) {
                return Err(Failure::Check(format!(
                    "bounds sandwich violated at alpha={}/{} d={} k={}",
                    bad.alpha_num, bad.alpha_den, bad.d, bad.k
                )));
            }
            Ok(())
        }
        Command::Selfcheck {
            level,
            only,
            json,
            seed,
            floor_fault,
        } => {
            let level = match level {
                CheckLevel::Quick => Level::Quick,
                CheckLevel::Full => Level::Full,
            };
            let mut opts = CheckOptions::new(level);
            opts.floor_fault = floor_fault;
            if let Some(s) = seed {
                opts.seed = s;
            }
            let ids: Vec<usize> = if only.is_empty() {
                (1..=CHECK_NAMES.len()).collect()
            } else {
                only
            };
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CHECK_NAMES.len()) {
                return Err(Failure::Usage(format!("no check with id {bad}")));
            }
            let mut outcomes = Vec::new();
            for id in ids {
                let o = run_check(id, &opts);
                if !json {
                    let tag = if o.passed { "PASS" } else { "FAIL" };
                    println!("{:>2} {tag} {:<32} {:>7} ms  {}", o.id, o.name, o.runtime_ms, o.detail);
                }
                outcomes.push(o);
            }
            let summary = CheckSummary { level, outcomes };
            if json {
                println!("{}", summary.to_json());
            }
            if summary.passed() {
                Ok(())
            } else {
                let n = summary.outcomes.iter().filter(|o| !o.passed).count();
                Err(Failure::Check(format!("{n} check(s) failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
