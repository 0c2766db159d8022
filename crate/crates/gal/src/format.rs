//! File formats: instance and sweep specs (JSON in), run records (JSON or CSV
//! out). Complex numbers are `{re, im}` objects in JSON and paired `_re`/`_im`
//! columns in CSV.

use std::io::Write;
use std::num::NonZeroU32;
use std::path::Path;

use gal_core::distributions::{CircularBranch, DistributionKind, DistributionSpec};
use gal_core::model::{SearchInstance, Tolerances};
use gal_core::sim::{DiffusionMethod, SimConfig};
use gal_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Bumped whenever a CSV column or JSON field changes meaning or position.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WireComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for WireComplex {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<WireComplex> for Complex64 {
    fn from(c: WireComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    Uniform,
    NoisyUniform,
    RandomComplex,
    WorstCase,
    Circular,
    Explicit,
}

/// Initial distribution: a family name plus the parameters that family uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitFile {
    pub kind: InitKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<WireComplex>>,
}

impl InitFile {
    pub fn new(kind: InitKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            noise_sigma: None,
            branch: None,
            amplitudes: None,
        }
    }

    pub fn to_spec(&self, n: usize) -> Result<DistributionSpec> {
        let kind = match self.kind {
            InitKind::Uniform => DistributionKind::Uniform,
            InitKind::NoisyUniform => {
                let noise_sigma = required("init.noise_sigma", self.noise_sigma)?;
                if !noise_sigma.is_finite() || noise_sigma < 0.0 {
                    return Err(LabError::validation(
                        "init.noise_sigma",
                        "must be finite and >= 0",
                    ));
                }
                DistributionKind::NoisyUniform { noise_sigma }
            }
            InitKind::RandomComplex => DistributionKind::RandomComplex,
            InitKind::WorstCase => DistributionKind::WorstCase,
            InitKind::Circular => DistributionKind::Circular {
                branch: match required("init.branch", self.branch)? {
                    Branch::Plus => CircularBranch::Plus,
                    Branch::Minus => CircularBranch::Minus,
                },
            },
            InitKind::Explicit => {
                let amps = required("init.amplitudes", self.amplitudes.as_ref())?;
                if amps.len() != n {
                    return Err(LabError::validation(
                        "init.amplitudes",
                        format!("expected {n} amplitudes, got {}", amps.len()),
                    ));
                }
                DistributionKind::Explicit {
                    amplitudes: amps.iter().copied().map(Complex64::from).collect(),
                }
            }
        };
        Ok(DistributionSpec::new(kind, self.seed))
    }
}

fn required<T>(field: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| LabError::validation(field, "required by this init kind"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Direct,
    Wht,
}

impl From<Method> for DiffusionMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Direct => DiffusionMethod::DirectReflection,
            Method::Wht => DiffusionMethod::WalshHadamard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_audit_cadence")]
    pub norm_check_every: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_tolerance: Option<f64>,
}

fn default_audit_cadence() -> u32 {
    64
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circular: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dead: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<f64>,
    /// Engine agreement threshold for `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<f64>,
}

/// Builds the instance from an explicit marked list, or from `r` meaning the
/// last `r` indices.
fn instance_of(n: usize, marked: &Option<Vec<usize>>, r: Option<usize>) -> Result<SearchInstance> {
    let inst = match (marked, r) {
        (Some(marked), r) => {
            if let Some(r) = r.filter(|&r| r != marked.len()) {
                return Err(LabError::validation(
                    "r",
                    format!("r={r} but {} marked indices listed", marked.len()),
                ));
            }
            SearchInstance::new(n, marked).map_err(|e| LabError::validation("marked", e))?
        }
        (None, Some(r)) => {
            SearchInstance::with_last_marked(n, r).map_err(|e| LabError::validation("r", e))?
        }
        (None, None) => {
            return Err(LabError::validation(
                "marked",
                "either `marked` or `r` is required",
            ))
        }
    };
    Ok(inst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub init: InitFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesFile>,
}

/// An instance file resolved into core types.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub instance: SearchInstance,
    pub init: DistributionSpec,
    pub sim: SimConfig,
    pub tolerances: Tolerances,
    pub compare_tolerance: f64,
}

/// Default engine agreement threshold for `compare`.
pub const COMPARE_TOLERANCE: f64 = 1e-10;

impl InstanceFile {
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error(e, path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?, path)
    }

    pub fn resolve(&self) -> Result<Experiment> {
        let instance = instance_of(self.n, &self.marked, self.r)?;
        let init = self.init.to_spec(instance.n())?;
        let mut sim = SimConfig::default();
        if let Some(file) = &self.sim {
            sim.diffusion_method = file.method.into();
            sim.norm_check_every = NonZeroU32::new(file.norm_check_every)
                .ok_or_else(|| LabError::validation("sim.norm_check_every", "must be positive"))?;
            if let Some(tol) = file.drift_tolerance {
                sim.drift_tolerance = positive("sim.drift_tolerance", tol)?;
            }
        }
        sim.validate(instance.n())
            .map_err(|e| LabError::validation("sim.method", e))?;
        let mut tolerances = Tolerances::default();
        let mut compare_tolerance = COMPARE_TOLERANCE;
        if let Some(t) = &self.tolerances {
            let fields = [
                ("tolerances.norm", t.norm, &mut tolerances.norm),
                ("tolerances.identity", t.identity, &mut tolerances.identity),
                ("tolerances.circular", t.circular, &mut tolerances.circular),
                ("tolerances.dead", t.dead, &mut tolerances.dead),
                ("tolerances.linear", t.linear, &mut tolerances.linear),
                ("tolerances.compare", t.compare, &mut compare_tolerance),
            ];
            for (name, value, slot) in fields {
                if let Some(v) = value {
                    *slot = positive(name, v)?;
                }
            }
        }
        if self.sim.as_ref().and_then(|s| s.drift_tolerance).is_none() {
            sim.drift_tolerance = tolerances.norm;
        }
        Ok(Experiment {
            instance,
            init,
            sim,
            tolerances,
            compare_tolerance,
        })
    }
}

/// Noise-robustness sweep description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub noise_levels: Vec<f64>,
    pub seeds_per_level: u64,
    #[serde(default)]
    pub base_seed: u64,
}

impl SweepFile {
    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read(path)?).map_err(|e| parse_error(e, path))
    }

    pub fn instance(&self) -> Result<SearchInstance> {
        instance_of(self.n, &self.marked, self.r)
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(LabError::validation(
            field,
            format!("must be a positive number, got {v}"),
        ))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_error(e: serde_json::Error, path: &Path) -> LabError {
    LabError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// One trajectory row. Columns an engine did not produce are left empty.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Row {
    pub t: u64,
    pub p_analytic: Option<f64>,
    pub p_sim: Option<f64>,
    pub k_bar_analytic: Option<WireComplex>,
    pub l_bar_analytic: Option<WireComplex>,
    pub k_bar_sim: Option<WireComplex>,
    pub l_bar_sim: Option<WireComplex>,
    pub norm_drift: Option<f64>,
}

pub const TRAJECTORY_HEADER: [&str; 12] = [
    "t",
    "p_analytic",
    "p_sim",
    "k_bar_analytic_re",
    "k_bar_analytic_im",
    "l_bar_analytic_re",
    "l_bar_analytic_im",
    "k_bar_sim_re",
    "k_bar_sim_im",
    "l_bar_sim_re",
    "l_bar_sim_im",
    "norm_drift",
];

/// Formats a float like C's `%.15e`: fixed mantissa width, signed two-digit
/// exponent, `.` as decimal separator.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.15e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

impl Row {
    fn csv_fields(&self) -> [String; 12] {
        let split = |c: Option<WireComplex>| (opt(c.map(|c| c.re)), opt(c.map(|c| c.im)));
        let (ka_re, ka_im) = split(self.k_bar_analytic);
        let (la_re, la_im) = split(self.l_bar_analytic);
        let (ks_re, ks_im) = split(self.k_bar_sim);
        let (ls_re, ls_im) = split(self.l_bar_sim);
        [
            self.t.to_string(),
            opt(self.p_analytic),
            opt(self.p_sim),
            ka_re,
            ka_im,
            la_re,
            la_im,
            ks_re,
            ks_im,
            ls_re,
            ls_im,
            opt(self.norm_drift),
        ]
    }
}

/// Writes header and rows, one `\n`-terminated line each.
pub fn write_trajectory_csv<W: Write>(mut out: W, rows: &[Row]) -> std::io::Result<()> {
    writeln!(out, "{}", TRAJECTORY_HEADER.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.csv_fields().join(","))?;
    }
    Ok(())
}
