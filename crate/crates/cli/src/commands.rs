//! The subcommands as plain functions returning their output text.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use moreau::fmt::{round_trip, significant};
use moreau::gauge::Point;
use moreau::oracle::{prox_oracle_1d, OracleSettings};
use moreau::sample::centre_range;
use moreau::{Error, FunctionSpec, Gauge2D, MoreauEnvelope, PiecewiseCubic, ProxConfig, ProxResult, SmoothedGauge};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::args::{Format, GridSpec, Span};
use crate::svg::{Chart, Series};

/// Largest accepted `|prox - oracle|` in `compare`.
pub const PROX_THRESHOLD: f64 = 1e-7;
/// Largest accepted `|e - oracle| / (1 + |oracle|)` in `compare`.
pub const ENVELOPE_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(Error),
    /// Carries the full comparison report.
    #[error("{0}")]
    Comparison(String),
    #[error("{0}")]
    Degenerate(Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Parse(_) | Self::Io(_) => 1,
            Self::Invalid(_) => 2,
            Self::Comparison(_) => 3,
            Self::Degenerate(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Self::Parse(msg),
            Error::BadParam(msg) => Self::Usage(msg),
            Error::DegenerateRay(_) => Self::Degenerate(e),
            e => Self::Invalid(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn load(path: &Path) -> CliResult<PiecewiseCubic> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let spec = FunctionSpec::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

fn config(r: f64) -> CliResult<ProxConfig> {
    Ok(ProxConfig::new(r)?)
}

/// Write `text` to `output`, or hand it back for standard output.
pub fn emit(text: String, output: Option<&Path>) -> CliResult<String> {
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

pub fn cmd_validate(path: &Path) -> CliResult<String> {
    let f = load(path)?;
    let m = f.num_pieces();
    Ok(format!("valid ({m} {})\n", if m == 1 { "piece" } else { "pieces" }))
}

pub fn cmd_eval(path: &Path, r: f64, x: f64) -> CliResult<String> {
    let f = load(path)?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("x must be finite, got {x}")));
    }
    let env = MoreauEnvelope::new(f, config(r)?);
    Ok(format!("{}\n", env.prox(x)))
}

pub fn cmd_partition(path: &Path, r: f64) -> CliResult<String> {
    let f = load(path)?;
    let env = MoreauEnvelope::new(f, config(r)?);
    Ok(env.partition().render(env.function()))
}

/// Worst disagreement between a closed form and the oracle at one `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub r: f64,
    pub samples: usize,
    pub range: (f64, f64),
    pub max_prox_error: f64,
    /// Relative to `1 + |oracle envelope|`.
    pub max_envelope_error: f64,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.max_prox_error <= PROX_THRESHOLD && self.max_envelope_error <= ENVELOPE_THRESHOLD
    }
}

/// Compare `closed` against the bisection oracle at `samples` prox-centres
/// drawn uniformly from [`centre_range`] with a generator seeded by `seed`.
pub fn compare_with<F>(f: &PiecewiseCubic, cfg: ProxConfig, samples: usize, seed: u64, closed: F) -> CliResult<Comparison>
where
    F: Fn(&MoreauEnvelope, f64) -> ProxResult,
{
    let env = MoreauEnvelope::new(f.clone(), cfg);
    let range = centre_range(env.partition());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let settings = OracleSettings::exhaustive();
    let mut cmp = Comparison {
        r: cfg.r(),
        samples,
        range,
        max_prox_error: 0.0,
        max_envelope_error: 0.0,
    };
    for _ in 0..samples {
        let x = rng.gen_range(range.0..=range.1);
        let res = closed(&env, x);
        let (p, e) = prox_oracle_1d(f, cfg, x, &settings)?;
        cmp.max_prox_error = cmp.max_prox_error.max((res.prox - p).abs());
        cmp.max_envelope_error = cmp.max_envelope_error.max((res.envelope - e).abs() / (1.0 + e.abs()));
    }
    Ok(cmp)
}

pub fn cmd_compare(path: &Path, r_values: &[f64], samples: usize, seed: u64) -> CliResult<String> {
    let f = load(path)?;
    let mut rows = Vec::new();
    for &r in r_values {
        rows.push(compare_with(&f, config(r)?, samples, seed, |env, x| env.prox(x))?);
    }
    compare_report(&rows)
}

/// Render comparison rows; any failing row turns the report into an error.
pub fn compare_report(rows: &[Comparison]) -> CliResult<String> {
    let mut out = String::new();
    for c in rows {
        let _ = writeln!(
            out,
            "r={} samples={} range=[{},{}] max_prox_error={:.3e} max_envelope_error={:.3e} {}",
            c.r,
            c.samples,
            significant(c.range.0, 12),
            significant(c.range.1, 12),
            c.max_prox_error,
            c.max_envelope_error,
            if c.passed() { "ok" } else { "FAIL" }
        );
    }
    if rows.iter().all(Comparison::passed) {
        Ok(out)
    } else {
        Err(CliError::Comparison(out))
    }
}

fn check_r_values(r_values: &[f64]) -> CliResult<Vec<ProxConfig>> {
    if r_values.is_empty() {
        return Err(CliError::Usage("need at least one r".into()));
    }
    r_values.iter().map(|&r| config(r)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest {
    pub input: PathBuf,
    pub r_values: Vec<f64>,
    pub range: Span,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// `samples` evenly spaced points from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n)
        .map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * (k as f64 / (n - 1) as f64) })
        .collect()
}

pub fn cmd_plot(req: &PlotRequest) -> CliResult<String> {
    let f = load(&req.input)?;
    let doc = plot_document(&f, &req.r_values, req.range, req.samples, req.format)?;
    emit(doc, req.output.as_deref())
}

/// Columns `x, f, e_rf(r=..)...` as CSV or an SVG chart.
pub fn plot_document(f: &PiecewiseCubic, r_values: &[f64], range: Span, samples: usize, format: Format) -> CliResult<String> {
    if samples < 2 {
        return Err(CliError::Usage(format!("need at least 2 samples, got {samples}")));
    }
    let envs: Vec<MoreauEnvelope> = check_r_values(r_values)?
        .into_iter()
        .map(|cfg| MoreauEnvelope::new(f.clone(), cfg))
        .collect();
    let xs = linspace(range.lo, range.hi, samples);
    let fx: Vec<f64> = xs.iter().map(|&x| f.extended_value(x)).collect();
    let ex: Vec<Vec<f64>> = envs.iter().map(|env| xs.iter().map(|&x| env.value(x)).collect()).collect();
    match format {
        Format::Csv => {
            let mut out = String::from("x,f");
            for r in r_values {
                let _ = write!(out, ",e_rf(r={r})");
            }
            out.push('\n');
            for (k, &x) in xs.iter().enumerate() {
                let _ = write!(out, "{},{}", round_trip(x), round_trip(fx[k]));
                for col in &ex {
                    let _ = write!(out, ",{}", round_trip(col[k]));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Svg => {
            let mut series = vec![Series {
                label: "f".into(),
                points: xs.iter().copied().zip(fx.iter().copied()).collect(),
                closed: false,
            }];
            for (r, col) in r_values.iter().zip(&ex) {
                series.push(Series {
                    label: format!("e_rf, r={r}"),
                    points: xs.iter().copied().zip(col.iter().copied()).collect(),
                    closed: false,
                });
            }
            let chart = Chart {
                title: "f and its Moreau envelopes".into(),
                series,
                equal_aspect: false,
            };
            Ok(chart.render())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeMode {
    Grid(GridSpec),
    Circle(usize),
}

/// `(|w1 x|^p + |w2 y|^p)^(1/p)`, a gauge for `p >= 1` and `w >= 0`.
pub fn weighted_lp(p: f64, w: [f64; 2]) -> CliResult<Gauge2D> {
    if !(p >= 1.0) || w.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(CliError::Usage(format!("need p >= 1 and weights >= 0, got p={p}, weights={w:?}")));
    }
    let name = format!("l{p} weighted by {w:?}");
    Ok(Gauge2D::custom(&name, move |x: f64, y: f64| {
        let (u, v) = ((w[0] * x).abs(), (w[1] * y).abs());
        // scale out the larger term so large p does not overflow
        let m = u.max(v);
        if m == 0.0 {
            0.0
        } else {
            m * ((u / m).powf(p) + (v / m).powf(p)).powf(1.0 / p)
        }
    })?)
}

pub fn gauge_document(gauge: &Gauge2D, r_values: &[f64], mode: GaugeMode, format: Format) -> CliResult<String> {
    check_r_values(r_values)?;
    let smoothed: Vec<SmoothedGauge> = r_values
        .iter()
        .map(|&r| SmoothedGauge::new(gauge.clone(), r))
        .collect::<Result<_, _>>()?;
    match mode {
        GaugeMode::Grid(grid) => {
            if format == Format::Svg {
                return Err(CliError::Usage("grid mode writes CSV only; use --samples for an SVG unit circle".into()));
            }
            let [sg] = smoothed.as_slice() else {
                return Err(CliError::Usage("grid mode takes a single r".into()));
            };
            gauge_grid(sg, grid)
        }
        GaugeMode::Circle(samples) => {
            let circles: Vec<Vec<Point>> = smoothed
                .iter()
                .map(|sg| sg.unit_circle(samples))
                .collect::<Result<_, _>>()?;
            let thetas: Vec<f64> = (0..samples)
                .map(|k| 2.0 * std::f64::consts::PI * k as f64 / samples as f64)
                .collect();
            match format {
                Format::Csv => Ok(circle_csv(r_values, &thetas, &circles)),
                Format::Svg => {
                    let series = r_values
                        .iter()
                        .zip(circles)
                        .map(|(r, points)| Series {
                            label: format!("h_r = 1, r={r}"),
                            points,
                            closed: true,
                        })
                        .collect();
                    let chart = Chart {
                        title: "unit circles of the smoothed gauge".into(),
                        series,
                        equal_aspect: true,
                    };
                    Ok(chart.render())
                }
            }
        }
    }
}

fn gauge_grid(sg: &SmoothedGauge, grid: GridSpec) -> CliResult<String> {
    let axis = linspace(grid.span.lo, grid.span.hi, grid.n);
    let mut out = String::from("x,y,f,h_r,prox_x,prox_y,region\n");
    for &x in &axis {
        for &y in &axis {
            let e = sg.evaluate((x, y))?;
            let region = e.region.map_or_else(|| "-".to_string(), |l| l.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{region}",
                round_trip(x),
                round_trip(y),
                round_trip(sg.base().eval(x, y)),
                round_trip(e.h),
                round_trip(e.prox.0),
                round_trip(e.prox.1)
            );
        }
    }
    Ok(out)
}

fn circle_csv(r_values: &[f64], thetas: &[f64], circles: &[Vec<Point>]) -> String {
    let mut out = String::from("theta");
    if let [_] = r_values {
        out.push_str(",x,y");
    } else {
        for r in r_values {
            let _ = write!(out, ",x(r={r}),y(r={r})");
        }
    }
    out.push('\n');
    for (k, theta) in thetas.iter().enumerate() {
        out.push_str(&round_trip(*theta));
        for c in circles {
            let _ = write!(out, ",{},{}", round_trip(c[k].0), round_trip(c[k].1));
        }
        out.push('\n');
    }
    out
}
