//! JSON run configuration, single builds and parameter scans, and CSV/JSON
//! emission of the resulting tables.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzProfile, Model};
use crate::einstein_vlasov::{build_ev_static_with, ev_bounds_report};
use crate::error::{Error, Result};
use crate::nordstrom_vlasov::{build_nv_static_with, nv_report, NvShooting};
use crate::numerics::{BuildOptions, Tolerances, DEFAULT_R_EPS};
use crate::report::VirialReport;
use crate::vlasov_poisson::{build_vp_polytrope_with, vp_report};

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 11] = [
    "param",
    "Zc",
    "H",
    "M",
    "binding",
    "R1",
    "R2",
    "E0",
    "virial_residual",
    "buchdahl_sup",
    "checks_passed",
];

/// Checks whose relative margin falls below this are re-run with tolerances tightened tenfold.
pub const NEAR_ZERO_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    /// standard output when absent
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Quantity varied by a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParameter {
    /// central depth (vp), central field (nv) or shifted central potential (ev)
    Central,
    C,
    K,
    E0,
    L,
    F0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub parameter: ScanParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl ScanSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::Config(format!(
                "scan count must be at least 2, got {}",
                self.count
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("scan bounds must be finite".into()));
        }
        let n = self.count - 1;
        if self.log {
            if !(self.start * self.stop > 0.0) {
                return Err(Error::Config(
                    "log scan needs nonzero bounds of equal sign".into(),
                ));
            }
            let sign = self.start.signum();
            let (a, b) = (self.start.abs().ln(), self.stop.abs().ln());
            Ok((0..=n)
                .map(|i| sign * (a + (b - a) * i as f64 / n as f64).exp())
                .collect())
        } else {
            Ok((0..=n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / n as f64)
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub ansatz: AnsatzProfile,
    /// central depth (vp), `φ(0)` (nv; omit to shoot `φ(0)` at the given cutoff) or `z_c` (ev)
    #[serde(default)]
    pub central: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grid_nodes: Option<usize>,
    #[serde(default)]
    pub r_eps: Option<f64>,
    #[serde(default)]
    pub scan: Option<ScanSpec>,
    #[serde(default)]
    pub boosts: Vec<[f64; 3]>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn model(&self) -> Result<Model> {
        self.model
            .ok_or_else(|| Error::Config("no model given".into()))
    }

    pub fn build_options(&self) -> BuildOptions {
        let d = BuildOptions::default();
        BuildOptions {
            tol: self.tolerances,
            r_eps: self.r_eps.unwrap_or(DEFAULT_R_EPS),
            grid_nodes: self.grid_nodes.unwrap_or(d.grid_nodes),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let model = self.model()?;
        self.tolerances
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.grid_nodes.is_some_and(|n| n < 8) {
            return Err(Error::Config("grid_nodes must be at least 8".into()));
        }
        if self.r_eps.is_some_and(|r| !(r > 0.0)) {
            return Err(Error::Config("r_eps must be positive".into()));
        }
        if self.central.is_none()
            && model != Model::Nv
            && self.scan.as_ref().map(|s| s.parameter) != Some(ScanParameter::Central)
        {
            return Err(Error::Config(format!(
                "model {} needs a central value",
                model.tag()
            )));
        }
        if let Some(scan) = &self.scan {
            scan.values()?;
        }
        Ok(())
    }
}

/// One row of a scan table; options are empty cells (CSV) or null (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param: f64,
    #[serde(rename = "Zc")]
    pub zc: Option<f64>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub binding: Option<f64>,
    #[serde(rename = "R1")]
    pub r1: Option<f64>,
    #[serde(rename = "R2")]
    pub r2: Option<f64>,
    #[serde(rename = "E0")]
    pub e0: Option<f64>,
    /// signed, relative to the model's natural scale
    pub virial_residual: Option<f64>,
    pub buchdahl_sup: Option<f64>,
    pub checks_passed: bool,
    /// signed margin of every inequality, by name
    #[serde(default)]
    pub margins: std::collections::BTreeMap<String, f64>,
    /// error code of a failed build
    #[serde(default)]
    pub failure: Option<String>,
}

impl ScanRow {
    pub fn failed(param: f64, err: &Error) -> Self {
        Self {
            param,
            zc: None,
            h: None,
            m: None,
            binding: None,
            r1: None,
            r2: None,
            e0: None,
            virial_residual: None,
            buchdahl_sup: None,
            checks_passed: false,
            margins: Default::default(),
            failure: Some(err.code().to_string()),
        }
    }

    /// Vacuum: every numeric cell is zero.
    pub fn vacuum(param: f64, model: Model) -> Self {
        let z = Some(0.0);
        let (zc, r1, buchdahl_sup) = if model == Model::Ev {
            (z, z, z)
        } else {
            (None, None, None)
        };
        Self {
            param,
            zc,
            h: z,
            m: z,
            binding: z,
            r1,
            r2: z,
            e0: z,
            virial_residual: z,
            buchdahl_sup,
            checks_passed: true,
            margins: Default::default(),
            failure: None,
        }
    }

    pub fn from_report(param: f64, rep: &VirialReport) -> Self {
        if rep.is_trivial() && rep.get("M") == Some(0.0) {
            return Self::vacuum(param, rep.model);
        }
        let q = |k: &str| rep.get(k);
        let (h, m) = (q("H").unwrap_or(0.0), q("M").unwrap_or(0.0));
        let binding = match (q("binding"), rep.model) {
            (Some(b), _) => b,
            _ if m == 0.0 => 0.0,
            (None, Model::Vp) => -h / m,
            (None, _) => 1.0 - h / m,
        };
        let virial = rep.residuals.first().map(|r| {
            if r.scale == 0.0 {
                r.value
            } else {
                r.value / r.scale
            }
        });
        let (zc, r1, r2, buch) = match rep.model {
            Model::Ev => (q("Zc"), q("R1"), q("R2"), q("buchdahl_sup")),
            Model::Vp | Model::Nv => (None, None, q("R"), None),
        };
        Self {
            param,
            zc,
            h: Some(h),
            m: Some(m),
            binding: Some(binding),
            r1,
            r2,
            e0: q("E0"),
            virial_residual: virial,
            buchdahl_sup: buch,
            checks_passed: rep.checks_passed(),
            margins: rep
                .checks
                .iter()
                .map(|c| (c.name.clone(), c.margin))
                .collect(),
            failure: None,
        }
    }
}

/// Builds one state and its report; a near-zero margin triggers one retry at
/// tolerances tightened tenfold.
pub fn evaluate(
    model: Model,
    ansatz: &AnsatzProfile,
    central: Option<f64>,
    opts: &BuildOptions,
    boosts: &[[f64; 3]],
) -> Result<VirialReport> {
    let first = evaluate_once(model, ansatz, central, opts, boosts)?;
    let near_zero = first
        .min_relative_margin()
        .is_some_and(|m| m.abs() < NEAR_ZERO_MARGIN);
    if !near_zero {
        return Ok(first);
    }
    let tight = BuildOptions {
        tol: opts.tol.tightened(10.0),
        ..*opts
    };
    let mut second = evaluate_once(model, ansatz, central, &tight, boosts)?;
    second.flag(
        "retried",
        "tolerances tightened x10 after a near-zero margin",
    );
    Ok(second)
}

fn evaluate_once(
    model: Model,
    ansatz: &AnsatzProfile,
    central: Option<f64>,
    opts: &BuildOptions,
    boosts: &[[f64; 3]],
) -> Result<VirialReport> {
    let need = |what: &str| {
        central
            .ok_or_else(|| Error::Config(format!("{what} is required for model {}", model.tag())))
    };
    match model {
        Model::Vp => vp_report(
            &build_vp_polytrope_with(ansatz, need("central depth")?, opts)?,
            boosts,
        ),
        Model::Nv => {
            let mode = central.map_or(NvShooting::Cutoff, NvShooting::CentralField);
            nv_report(&build_nv_static_with(ansatz, mode, opts)?, boosts)
        }
        Model::Ev => ev_bounds_report(&build_ev_static_with(ansatz, need("z_central")?, opts)?),
    }
}

fn with_parameter(
    a: &AnsatzProfile,
    central: Option<f64>,
    p: ScanParameter,
    v: f64,
) -> (AnsatzProfile, Option<f64>) {
    let mut a = *a;
    let mut central = central;
    match p {
        ScanParameter::Central => central = Some(v),
        ScanParameter::C => a.c = v,
        ScanParameter::K => a.k = v,
        ScanParameter::E0 => a.e0 = v,
        ScanParameter::L => a.l = v,
        ScanParameter::F0 => a.f0 = v,
    }
    (a, central)
}

/// Scan table and the row of largest binding energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// index into `rows`
    pub binding_argmax: Option<usize>,
}

impl ScanTable {
    pub fn new(mut rows: Vec<ScanRow>) -> Self {
        rows.sort_by(|a, b| a.param.total_cmp(&b.param));
        let binding_argmax = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.failure.is_none())
            .filter_map(|(i, r)| r.binding.map(|b| (i, b)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(i, _)| i);
        Self {
            rows,
            binding_argmax,
        }
    }

    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.failure.is_some())
    }

    pub fn any_violation(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.failure.is_none() && !r.checks_passed)
    }
}

/// One independent build per parameter value, in parallel; rows sorted by parameter.
pub fn scan_sequence(
    model: Model,
    a: &AnsatzProfile,
    central: Option<f64>,
    scan: &ScanSpec,
    opts: &BuildOptions,
    boosts: &[[f64; 3]],
) -> Result<ScanTable> {
    let values = scan.values()?;
    let rows: Vec<ScanRow> = values
        .par_iter()
        .map(|&v| {
            let (a, c) = with_parameter(a, central, scan.parameter, v);
            match evaluate(model, &a, c, opts, boosts) {
                Ok(rep) => ScanRow::from_report(v, &rep),
                Err(e) => ScanRow::failed(v, &e),
            }
        })
        .collect();
    Ok(ScanTable::new(rows))
}

/// Result of [`run_from_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    Single {
        row: ScanRow,
        report: Box<VirialReport>,
    },
    Scan(ScanTable),
}

impl RunOutcome {
    pub fn rows(&self) -> Vec<ScanRow> {
        match self {
            RunOutcome::Single { row, .. } => vec![row.clone()],
            RunOutcome::Scan(t) => t.rows.clone(),
        }
    }

    /// Exit-code contract: 0 all checks passed, 1 an inequality is violated,
    /// 2 every build failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunOutcome::Single { report, .. } => i32::from(!report.checks_passed()),
            RunOutcome::Scan(t) if t.all_failed() => 2,
            RunOutcome::Scan(t) => i32::from(t.any_violation()),
        }
    }
}

pub fn run_from_config(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let model = cfg.model()?;
    let opts = cfg.build_options();
    match &cfg.scan {
        Some(scan) => Ok(RunOutcome::Scan(scan_sequence(
            model,
            &cfg.ansatz,
            cfg.central,
            scan,
            &opts,
            &cfg.boosts,
        )?)),
        None => {
            let report = evaluate(model, &cfg.ansatz, cfg.central, &opts, &cfg.boosts)?;
            let param = cfg
                .central
                .unwrap_or_else(|| report.get("phi0").unwrap_or(0.0));
            Ok(RunOutcome::Single {
                row: ScanRow::from_report(param, &report),
                report: Box::new(report),
            })
        }
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.16e}"))
}

/// CSV with the fixed header, 17 significant digits and `\n` line endings.
pub fn write_csv<W: Write>(rows: &[ScanRow], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        out.write_record([
            format!("{:.16e}", r.param),
            cell(r.zc),
            cell(r.h),
            cell(r.m),
            cell(r.binding),
            cell(r.r1),
            cell(r.r2),
            cell(r.e0),
            cell(r.virial_residual),
            cell(r.buchdahl_sup),
            r.checks_passed.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Writes the outcome in the requested format to `path` (standard output when `None`).
pub fn emit(outcome: &RunOutcome, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match format {
        OutputFormat::Csv => write_csv(&outcome.rows(), sink),
        OutputFormat::Json => write_json(outcome, sink),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_string(rows: &[ScanRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(
            csv_string(&[]),
            "param,Zc,H,M,binding,R1,R2,E0,virial_residual,buchdahl_sup,checks_passed\n"
        );
    }

    #[test]
    fn linear_and_log_spacing() {
        let s = ScanSpec {
            parameter: ScanParameter::Central,
            start: -0.1,
            stop: -0.5,
            count: 5,
            log: false,
        };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!((v[0], v[4]), (-0.1, -0.5));
        let s = ScanSpec {
            log: true,
            start: 1e-3,
            stop: 1e-1,
            count: 3,
            ..s
        };
        let v = s.values().unwrap();
        assert!((v[1] - 1e-2).abs() < 1e-15);
        assert!(ScanSpec {
            count: 1,
            ..s.clone()
        }
        .values()
        .is_err());
        assert!(ScanSpec { start: -1.0, ..s }.values().is_err());
    }

    #[test]
    fn failed_rows_keep_their_code() {
        let row = ScanRow::failed(
            0.5,
            &Error::Horizon {
                r: 1.0,
                margin: 1e-3,
            },
        );
        assert_eq!(row.failure.as_deref(), Some("horizon"));
        let text = csv_string(&[row]);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "5.0000000000000000e-1,,,,,,,,,,false"
        );
    }

    #[test]
    fn config_rejects_unknown_fields() {
        let bad = r#"{"model":"ev","ansatz":{"c":1,"k":1,"e0":0.9},"central":-0.1,"bogus":1}"#;
        assert!(matches!(RunConfig::from_json(bad), Err(Error::Config(_))));
    }
}
