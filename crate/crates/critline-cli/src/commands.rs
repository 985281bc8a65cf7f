//! Subcommand execution. Every command renders its whole output in memory
//! so a failed run never leaves a partial file behind.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use critline::checks::{self, CheckTable};
use critline::region::{region_grid_par, write_grid_csv};
use critline::shifts::{critical_imaginary_ratio, f_z_critical, ShiftConfig};
use critline::zeroscan::{grid_nodes, scan_fz};
use critline::EvalSettings;
use serde_json::{json, Value};

use crate::config::parse_config;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Shift configuration (TOML, or JSON for *.json); defaults to c=(1), λ=(0), z=0
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file; standard output when absent
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for scans and region grids
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,

    /// Seed for randomized sweeps
    #[arg(long, global = true, default_value_t = checks::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct TRange {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
    pub t_max: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate F_z(1/2+it) on a t-grid
    Eval {
        #[command(flatten)]
        range: TRange,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
    },
    /// Locate sign changes of F_z on the critical line and refine them
    Scan {
        #[command(flatten)]
        range: TRange,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        /// Bisection width
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Jacobi, generalized theta and ψ(x, z) transformation residuals
    ThetaCheck {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Integral representation against both theta sides
    IntegralCheck,
    /// Classify a grid of z against the region D
    Region {
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        x_max: f64,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        y_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        y_max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Also compare both membership tests at this many random points of [−4, 4]²
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Numeric moments against their closed forms
    Moments {
        #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1])]
        m: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.2], allow_negative_numbers = true)]
        alpha: Vec<f64>,
        /// Add the extrapolated α → π/4 limit check for each m ≤ 1 (slow)
        #[arg(long)]
        limit: bool,
    },
    /// Small-δ theta decay and ψ₁ limit sequences
    Limits,
    /// Completed-zeta symmetry residuals at random points
    SpecfunCheck {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Scan { .. } => "scan",
            Command::ThetaCheck { .. } => "theta-check",
            Command::IntegralCheck => "integral-check",
            Command::Region { .. } => "region",
            Command::Moments { .. } => "moments",
            Command::Limits => "limits",
            Command::SpecfunCheck { .. } => "specfun-check",
        }
    }
}

/// Rendered output plus the failing checks, if any.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failures: Vec<Value>,
    pub total: usize,
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> critline::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("json values always serialize");
    text.push('\n');
    text.into_bytes()
}

fn envelope(command: &str, settings: &EvalSettings) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("schema_version".into(), json!(1));
    map.insert("command".into(), json!(command));
    map.insert("settings".into(), json!(settings));
    map
}

fn table_outcome(
    command: &str,
    table: CheckTable,
    common: &Common,
    settings: &EvalSettings,
) -> Result<Outcome, CliError> {
    let failures: Vec<Value> = table.failures().map(|r| json!(r)).collect();
    let total = table.rows.len();
    let bytes = match common.format {
        Format::Csv => csv_bytes(|b| table.write_csv(b))?,
        Format::Json => {
            let mut map = envelope(command, settings);
            map.insert("seed".into(), json!(common.seed));
            map.insert("title".into(), json!(table.title));
            map.insert("all_pass".into(), json!(table.all_pass()));
            map.insert("rows".into(), json!(table.rows));
            json_bytes(&Value::Object(map))
        }
    };
    Ok(Outcome { bytes, failures, total })
}

fn load_config(common: &Common) -> Result<ShiftConfig, CliError> {
    match &common.config {
        Some(path) => parse_config(path),
        None => Ok(ShiftConfig::hardy()),
    }
}

fn check_range(range: &TRange, step: f64) -> Result<(), CliError> {
    if !(range.t_min < range.t_max) || !(step > 0.0) {
        return Err(CliError::Usage(format!(
            "need t-min < t-max and step > 0 (got {}, {}, {step})",
            range.t_min, range.t_max
        )));
    }
    Ok(())
}

pub fn run(command: &Command, common: &Common) -> Result<Outcome, CliError> {
    let settings = EvalSettings::default();
    let workers = usize::from(common.workers);
    let name = command.name();
    match command {
        Command::Eval { range, step } => {
            check_range(range, *step)?;
            let cfg = load_config(common)?;
            let mut rows = Vec::new();
            for t in grid_nodes(range.t_min, range.t_max, *step) {
                let at = |source: critline::Error| critline::Error::Evaluation { t, source: Box::new(source) };
                let value = f_z_critical(t, &cfg, &settings).map_err(at)?;
                let ratio = critical_imaginary_ratio(t, &cfg, &settings).map_err(at)?;
                rows.push((t, value, ratio));
            }
            let bytes = match common.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let io = |e: csv::Error| CliError::Write { path: "<buffer>".into(), source: e.into() };
                    w.write_record(["t", "f_z", "imaginary_ratio"]).map_err(io)?;
                    for (t, v, r) in &rows {
                        w.write_record([t.to_string(), format!("{v:e}"), format!("{r:e}")]).map_err(io)?;
                    }
                    w.into_inner().map_err(|e| CliError::Write { path: "<buffer>".into(), source: e.into_error() })?
                }
                Format::Json => {
                    let mut map = envelope(name, &settings);
                    map.insert("config_digest".into(), json!(cfg.digest()));
                    map.insert("config".into(), json!(cfg.spec()));
                    let rows: Vec<Value> =
                        rows.iter().map(|(t, v, r)| json!({"t": t, "f_z": v, "imaginary_ratio": r})).collect();
                    map.insert("rows".into(), Value::Array(rows));
                    json_bytes(&Value::Object(map))
                }
            };
            Ok(Outcome { bytes, failures: Vec::new(), total: 0 })
        }
        Command::Scan { range, step, tol } => {
            check_range(range, *step)?;
            let cfg = load_config(common)?;
            let report = scan_fz(&cfg, range.t_min, range.t_max, *step, *tol, workers, &settings)?;
            let bytes = match common.format {
                Format::Csv => csv_bytes(|b| report.write_csv(b))?,
                Format::Json => {
                    let mut text = report.to_json()?;
                    text.push('\n');
                    text.into_bytes()
                }
            };
            Ok(Outcome { bytes, failures: Vec::new(), total: 0 })
        }
        Command::ThetaCheck { samples } => {
            let mut table = checks::jacobi(50, &settings)?;
            table.extend(checks::general_theta(*samples, common.seed, &settings)?);
            table.extend(checks::theta_transform(&settings)?);
            table.title = "theta transformations".into();
            table_outcome(name, table, common, &settings)
        }
        Command::IntegralCheck => table_outcome(name, checks::integral_identity(&settings)?, common, &settings),
        Command::Region { x_min, x_max, y_min, y_max, step, samples } => {
            let nodes = region_grid_par(*x_min, *x_max, *y_min, *y_max, *step, workers)?;
            let agreement =
                (*samples > 0).then(|| checks::region_agreement(*samples, common.seed, checks::AGREEMENT_BAND));
            let failures: Vec<Value> =
                agreement.iter().flat_map(|t| t.failures().map(|r| json!(r)).collect::<Vec<_>>()).collect();
            let total = agreement.as_ref().map_or(0, |t| t.rows.len());
            let bytes = match common.format {
                Format::Csv => csv_bytes(|b| write_grid_csv(&nodes, b))?,
                Format::Json => {
                    let mut map = envelope(name, &settings);
                    map.insert(
                        "bounds".into(),
                        json!({"x_min": x_min, "x_max": x_max, "y_min": y_min, "y_max": y_max}),
                    );
                    map.insert("step".into(), json!(step));
                    if let Some(t) = &agreement {
                        map.insert("agreement".into(), json!(t.rows));
                    }
                    let rows: Vec<Value> = nodes
                        .iter()
                        .map(|n| {
                            json!({
                                "x": n.z.re,
                                "y": n.z.im,
                                "inside": n.verdict.inside,
                                "label": n.verdict.component_label.as_str(),
                                "margin": n.verdict.margin,
                            })
                        })
                        .collect();
                    map.insert("nodes".into(), Value::Array(rows));
                    json_bytes(&Value::Object(map))
                }
            };
            Ok(Outcome { bytes, failures, total })
        }
        Command::Moments { m, alpha, limit } => {
            let cfg = load_config(common)?;
            let mut table = checks::moments(&cfg, m, alpha, &settings)?;
            if *limit {
                for &order in m.iter().filter(|&&o| o <= 1) {
                    table.extend(checks::moment_limit(&cfg, order, &settings)?);
                }
            }
            let mut out = table_outcome(name, table, common, &settings)?;
            if common.format == Format::Json {
                // Record which configuration the table belongs to.
                let mut v: Value = serde_json::from_slice(&out.bytes).expect("own output is valid json");
                v["config_digest"] = json!(cfg.digest());
                v["config"] = json!(cfg.spec());
                out.bytes = json_bytes(&v);
            }
            Ok(out)
        }
        Command::Limits => {
            let mut table = checks::small_delta(&settings)?;
            table.extend(checks::psi1_limits(&settings)?);
            table.title = "limit sequences".into();
            table_outcome(name, table, common, &settings)
        }
        Command::SpecfunCheck { samples } => {
            table_outcome(name, checks::functional_equation(*samples, common.seed, &settings)?, common, &settings)
        }
    }
}
