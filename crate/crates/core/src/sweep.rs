//! Parameter sweeps and report files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bounds::{bounds_report, c_alpha, BoundsReport};
use crate::error::{Error, Result};
use crate::lambda::Window;
use crate::lattice::{FloorKind, FloorSpec, TiltSpec};
use crate::mc::{estimate_pc, estimate_tail, PcOptions};
use crate::rational::Alpha;
use crate::stats::ReplicaPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::config("format", format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSize {
    pub radius: i64,
    pub height_cap: i64,
}

fn default_target() -> f64 {
    0.5
}

fn default_resolution() -> f64 {
    1.0 / 1024.0
}

fn default_true() -> bool {
    true
}

fn default_floor() -> FloorKind {
    FloorKind::Plane
}

fn default_format() -> ReportFormat {
    ReportFormat::Csv
}

/// A sweep over `alphas x dims x ks x windows`. An empty `ks` means `k = d`;
/// `k` values above a particular `d` are skipped for that `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alphas: Vec<Alpha>,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub ks: Vec<usize>,
    /// Probabilities at which the proxy tail `psi(q)` is reported.
    #[serde(default)]
    pub q_grid: Vec<f64>,
    pub windows: Vec<WindowSize>,
    #[serde(default = "default_floor")]
    pub floor: FloorKind,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub estimate_pc: bool,
    #[serde(default)]
    pub h_star: Option<i64>,
    #[serde(default = "default_target")]
    pub target: f64,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default = "default_format")]
    pub format: ReportFormat,
    /// Fill `runtime_ms`; off by default so reruns are byte-identical.
    #[serde(default)]
    pub record_timing: bool,
}

impl SweepConfig {
    /// Small two-dimension demo used by the examples and golden tests.
    pub fn demo() -> Self {
        SweepConfig {
            alphas: vec![Alpha::ZERO, Alpha::new(1, 2).expect("1/2")],
            dims: vec![1, 2],
            ks: vec![],
            q_grid: vec![0.2, 0.4],
            windows: vec![WindowSize {
                radius: 12,
                height_cap: 24,
            }],
            floor: FloorKind::Plane,
            replicas: 64,
            seed: 20240601,
            estimate_pc: true,
            h_star: None,
            target: 0.5,
            resolution: 1.0 / 256.0,
            output: None,
            format: ReportFormat::Csv,
            record_timing: false,
        }
    }

    /// Parses and validates a JSON config; errors name the offending field.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(s).map_err(|e| Error::config("<json>", e.to_string()))?;
        if let Some(alphas) = raw.get("alphas").and_then(Value::as_array) {
            for (i, a) in alphas.iter().enumerate() {
                let text = a
                    .as_str()
                    .ok_or_else(|| Error::config(format!("alphas[{i}]"), "expected a string like \"1/2\""))?;
                Alpha::from_str(text).map_err(|e| Error::config(format!("alphas[{i}]"), e.to_string()))?;
            }
        }
        let cfg: SweepConfig = serde_json::from_value(raw).map_err(|e| Error::config("<json>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &d) in self.dims.iter().enumerate() {
            if d == 0 {
                return Err(Error::config(format!("dims[{i}]"), "d must be >= 1"));
            }
        }
        let dmax = self.dims.iter().copied().max().unwrap_or(0);
        for (i, &k) in self.ks.iter().enumerate() {
            if k > dmax {
                return Err(Error::config(
                    format!("ks[{i}]"),
                    format!("k = {k} exceeds every d in the grid"),
                ));
            }
        }
        for (i, &q) in self.q_grid.iter().enumerate() {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::config(format!("q_grid[{i}]"), format!("{q} outside [0, 1]")));
            }
        }
        for (i, w) in self.windows.iter().enumerate() {
            Window::new(w.radius, w.height_cap).map_err(|e| Error::config(format!("windows[{i}]"), e.to_string()))?;
        }
        if self.replicas == 0 {
            return Err(Error::config("replicas", "must be >= 1"));
        }
        if !(self.target > 0.0 && self.target < 1.0) {
            return Err(Error::config("target", format!("{} outside (0, 1)", self.target)));
        }
        if !(self.resolution > 0.0 && self.resolution < 1.0) {
            return Err(Error::config(
                "resolution",
                format!("{} outside (0, 1)", self.resolution),
            ));
        }
        if let Some(h) = self.h_star {
            if h < 1 {
                return Err(Error::config("h_star", "must be >= 1"));
            }
        }
        Ok(())
    }

    fn grid(&self) -> Vec<(Alpha, usize, usize, WindowSize)> {
        let mut out = Vec::new();
        for &a in &self.alphas {
            for &d in &self.dims {
                let ks: Vec<usize> = if self.ks.is_empty() {
                    vec![d]
                } else {
                    self.ks.iter().copied().filter(|&k| k <= d).collect()
                };
                for k in ks {
                    for &w in &self.windows {
                        out.push((a, d, k, w));
                    }
                }
            }
        }
        out
    }
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub alpha_num: i64,
    pub alpha_den: i64,
    pub d: usize,
    pub k: usize,
    /// `psi(q)` at each `q_grid` entry.
    pub psi: Vec<f64>,
    pub lb_general: f64,
    pub lb_simplex_opt: f64,
    pub lb_alpha: Option<f64>,
    pub ub_factorial: f64,
    pub ub_expected_t: f64,
    pub c_alpha_theta: f64,
    pub q_hat: Option<f64>,
    pub q_hat_lo: Option<f64>,
    pub q_hat_hi: Option<f64>,
    pub radius: i64,
    pub height_cap: i64,
    pub replicas: usize,
    pub seed: u64,
    pub censored: usize,
    pub runtime_ms: Option<u64>,
    /// Exact lower bounds do not exceed exact upper bounds.
    pub sandwich_ok: bool,
}

fn sandwich(report: &BoundsReport) -> bool {
    report.sandwich_holds()
}

fn q_label(q: f64) -> String {
    format!("psi_q{q}")
}

/// Column names in emission order.
pub fn report_columns(q_grid: &[f64]) -> Vec<String> {
    let mut cols: Vec<String> = ["alpha_num", "alpha_den", "d", "k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(q_grid.iter().map(|&q| q_label(q)));
    cols.extend(
        [
            "lb_general",
            "lb_simplex_opt",
            "lb_alpha",
            "ub_factorial",
            "ub_expected_T",
            "C_alpha_theta",
            "q_hat",
            "q_hat_lo",
            "q_hat_hi",
            "R",
            "H",
            "replicas",
            "seed",
            "censored",
            "runtime_ms",
            "sandwich_ok",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    cols
}

fn opt_f(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ReportRow {
    fn cells(&self) -> Vec<String> {
        let mut c = vec![
            self.alpha_num.to_string(),
            self.alpha_den.to_string(),
            self.d.to_string(),
            self.k.to_string(),
        ];
        c.extend(self.psi.iter().map(f64::to_string));
        c.extend([
            self.lb_general.to_string(),
            self.lb_simplex_opt.to_string(),
            opt_f(self.lb_alpha),
            self.ub_factorial.to_string(),
            self.ub_expected_t.to_string(),
            self.c_alpha_theta.to_string(),
            opt_f(self.q_hat),
            opt_f(self.q_hat_lo),
            opt_f(self.q_hat_hi),
            self.radius.to_string(),
            self.height_cap.to_string(),
            self.replicas.to_string(),
            self.seed.to_string(),
            self.censored.to_string(),
            self.runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
            self.sandwich_ok.to_string(),
        ]);
        c
    }

    fn json(&self, cols: &[String]) -> Value {
        let num = |x: f64| {
            serde_json::Number::from_f64(x)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        };
        let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
        let mut vals: Vec<Value> = vec![
            self.alpha_num.into(),
            self.alpha_den.into(),
            self.d.into(),
            self.k.into(),
        ];
        vals.extend(self.psi.iter().map(|&p| num(p)));
        vals.extend([
            num(self.lb_general),
            num(self.lb_simplex_opt),
            opt(self.lb_alpha),
            num(self.ub_factorial),
            num(self.ub_expected_t),
            num(self.c_alpha_theta),
            opt(self.q_hat),
            opt(self.q_hat_lo),
            opt(self.q_hat_hi),
            self.radius.into(),
            self.height_cap.into(),
            self.replicas.into(),
            self.seed.into(),
            self.censored.into(),
            self.runtime_ms.map(Value::from).unwrap_or(Value::Null),
            self.sandwich_ok.into(),
        ]);
        Value::Object(cols.iter().cloned().zip(vals).collect::<Map<String, Value>>())
    }
}

/// Runs every grid point in canonical order, handing each row to `on_row`
/// as soon as it is complete.
pub fn run_sweep_with<F: FnMut(&ReportRow)>(config: &SweepConfig, mut on_row: F) -> Result<Vec<ReportRow>> {
    config.validate()?;
    let plan = ReplicaPlan::new(config.replicas, config.seed);
    let mut rows = Vec::new();
    for (alpha, d, k, ws) in config.grid() {
        let start = Instant::now();
        let report = bounds_report(alpha, d, k)?;
        let tilt = TiltSpec::canonical(alpha, d, k)?;
        let floor = match config.floor {
            FloorKind::Plane => FloorSpec::plane(tilt),
            FloorKind::Pyramid => FloorSpec::pyramid(tilt),
        };
        let window = Window::new(ws.radius, ws.height_cap)?;
        let h_star = config.h_star.unwrap_or(ws.height_cap / 2).max(1);
        let mut censored = 0;
        let mut psi = Vec::with_capacity(config.q_grid.len());
        for &q in &config.q_grid {
            let t = estimate_tail(q, &floor, h_star, &window, &plan)?;
            censored += t.censored_count;
            psi.push(t.point);
        }
        let (mut q_hat, mut q_lo, mut q_hi) = (None, None, None);
        if config.estimate_pc {
            let opts = PcOptions {
                h_star: Some(h_star),
                target: config.target,
                resolution: config.resolution,
                ..PcOptions::default()
            };
            let est = estimate_pc(&floor, &window, &plan, &opts)?;
            censored += est.ci.censored_count;
            q_hat = Some(est.ci.point);
            q_lo = Some(est.ci.lo);
            q_hi = Some(est.ci.hi);
        }
        let row = ReportRow {
            alpha_num: alpha.num(),
            alpha_den: alpha.den(),
            d,
            k,
            psi,
            lb_general: report.value("lb_general").expect("always present"),
            lb_simplex_opt: report.value("lb_simplex_opt").expect("always present"),
            lb_alpha: report.value("lb_alpha"),
            ub_factorial: report.value("ub_factorial").expect("always present"),
            ub_expected_t: report.value("ub_expected_T").expect("always present"),
            c_alpha_theta: c_alpha(alpha.to_f64())?,
            q_hat,
            q_hat_lo: q_lo,
            q_hat_hi: q_hi,
            radius: ws.radius,
            height_cap: ws.height_cap,
            replicas: config.replicas,
            seed: config.seed,
            censored,
            runtime_ms: config.record_timing.then(|| start.elapsed().as_millis() as u64),
            sandwich_ok: sandwich(&report),
        };
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ReportRow>> {
    run_sweep_with(config, |_| {})
}

/// Writes rows to `out` in the given format.
pub fn write_report<W: Write>(
    rows: &[ReportRow],
    q_grid: &[f64],
    format: ReportFormat,
    out: W,
) -> std::result::Result<(), Box<dyn std::error::Error>> {
    let cols = report_columns(q_grid);
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&cols)?;
            for r in rows {
                w.write_record(r.cells())?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "columns": cols,
                "rows": rows.iter().map(|r| r.json(&cols)).collect::<Vec<_>>(),
            });
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Writes the report to `path`.
pub fn emit_report(rows: &[ReportRow], q_grid: &[f64], format: ReportFormat, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    write_report(rows, q_grid, format, BufWriter::new(file)).map_err(|e| match e.downcast::<csv::Error>() {
        Ok(c) => Error::Csv {
            path: path.to_path_buf(),
            source: *c,
        },
        Err(e) => match e.downcast::<serde_json::Error>() {
            Ok(j) => Error::Json(*j),
            Err(e) => match e.downcast::<std::io::Error>() {
                Ok(i) => io(*i),
                Err(e) => io(std::io::Error::other(e.to_string())),
            },
        },
    })
}

fn parse_err(path: &Path, what: impl Into<String>) -> Error {
    Error::config(path.display().to_string(), what)
}

fn row_from_cells(cells: &[String], n_q: usize, path: &Path) -> Result<ReportRow> {
    if cells.len() != 20 + n_q {
        return Err(parse_err(
            path,
            format!("expected {} columns, found {}", 20 + n_q, cells.len()),
        ));
    }
    let mut it = cells.iter();
    let mut next = || it.next().expect("length checked").as_str();
    fn p<T: FromStr>(s: &str, path: &Path) -> Result<T> {
        s.parse().map_err(|_| parse_err(path, format!("cannot parse `{s}`")))
    }
    fn o(s: &str, path: &Path) -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            p(s, path).map(Some)
        }
    }
    let alpha_num = p(next(), path)?;
    let alpha_den = p(next(), path)?;
    let d = p(next(), path)?;
    let k = p(next(), path)?;
    let mut psi = Vec::with_capacity(n_q);
    for _ in 0..n_q {
        psi.push(p(next(), path)?);
    }
    Ok(ReportRow {
        alpha_num,
        alpha_den,
        d,
        k,
        psi,
        lb_general: p(next(), path)?,
        lb_simplex_opt: p(next(), path)?,
        lb_alpha: o(next(), path)?,
        ub_factorial: p(next(), path)?,
        ub_expected_t: p(next(), path)?,
        c_alpha_theta: p(next(), path)?,
        q_hat: o(next(), path)?,
        q_hat_lo: o(next(), path)?,
        q_hat_hi: o(next(), path)?,
        radius: p(next(), path)?,
        height_cap: p(next(), path)?,
        replicas: p(next(), path)?,
        seed: p(next(), path)?,
        censored: p(next(), path)?,
        runtime_ms: {
            let s = next();
            if s.is_empty() {
                None
            } else {
                Some(p(s, path)?)
            }
        },
        sandwich_ok: p(next(), path)?,
    })
}

/// A parsed report: the `q` grid recovered from the header and the rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub q_grid: Vec<f64>,
    pub rows: Vec<ReportRow>,
}

fn q_grid_from_columns(cols: &[String], path: &Path) -> Result<Vec<f64>> {
    if cols.len() < 20 {
        return Err(parse_err(path, "header too short"));
    }
    let expected = report_columns(&[]);
    if cols[..4] != expected[..4] || cols[cols.len() - 16..] != expected[4..] {
        return Err(parse_err(path, "unexpected header"));
    }
    cols[4..cols.len() - 16]
        .iter()
        .map(|c| {
            c.strip_prefix("psi_q")
                .and_then(|q| q.parse().ok())
                .ok_or_else(|| parse_err(path, format!("bad column `{c}`")))
        })
        .collect()
}

/// Reads a report written by [`emit_report`].
pub fn read_report(path: &Path, format: ReportFormat) -> Result<Report> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    match format {
        ReportFormat::Csv => {
            let csv_err = |source| Error::Csv {
                path: path.to_path_buf(),
                source,
            };
            let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
            let cols: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
            let q_grid = q_grid_from_columns(&cols, path)?;
            let mut rows = Vec::new();
            for rec in r.records() {
                let rec = rec.map_err(csv_err)?;
                let cells: Vec<String> = rec.iter().map(String::from).collect();
                rows.push(row_from_cells(&cells, q_grid.len(), path)?);
            }
            Ok(Report { q_grid, rows })
        }
        ReportFormat::Json => {
            let text = std::fs::read_to_string(path).map_err(io)?;
            let doc: Value = serde_json::from_str(&text)?;
            let cols: Vec<String> = serde_json::from_value(doc.get("columns").cloned().unwrap_or(Value::Null))?;
            let q_grid = q_grid_from_columns(&cols, path)?;
            let mut rows = Vec::new();
            for obj in doc
                .get("rows")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err(path, "missing rows"))?
            {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| match obj.get(c) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::Number(n)) => n.to_string(),
                        Some(Value::Bool(b)) => b.to_string(),
                        Some(v) => v.to_string(),
                    })
                    .collect();
                rows.push(row_from_cells(&cells, q_grid.len(), path)?);
            }
            Ok(Report { q_grid, rows })
        }
    }
}
