//! Scenario files: a name, a kind, kind-specific parameters and output paths.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use dsk_core::complex::serde_pair;
use dsk_core::construction::ConstructionInput;
use dsk_core::disc::Horodisc;
use dsk_core::inner::{AtomicMeasure, DiscFunction};
use dsk_core::riesz::{build_curve, ContourCurve, CurveSpec, GridSpec, MatrixOperator, SplitOptions};
use dsk_core::shift::WeightFamily;
use dsk_core::Complex64;

use crate::RunError;

/// Largest grid side accepted by `grid`.
pub const MAX_GRID_SIDE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    InnerEval,
    ThetaCertificate,
    LemmagConstruct,
    ShiftAnalyze,
    Tshift,
    RieszSplit,
    LevelSetScan,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Evidence table for the shift kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<PathBuf>,
}

impl Outputs {
    fn is_empty(&self) -> bool {
        self.report.is_none() && self.csv.is_none() && self.grid.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Modulus,
    ResolventNorm,
    LambdaIndicator,
}

/// A rectangle `re × im` sampled with `n_re × n_im` points, ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridExport {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
    pub quantity: Quantity,
}

fn axis(range: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![range[0]];
    }
    (0..n)
        .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64)
        .collect()
}

impl GridExport {
    /// Points in row-major order by real part, then imaginary part.
    pub fn points(&self) -> Vec<Complex64> {
        let ims = axis(self.im, self.n_im);
        axis(self.re, self.n_re)
            .into_iter()
            .flat_map(|re| ims.iter().map(move |&im| Complex64::new(re, im)))
            .collect()
    }

    fn validate(&self) -> Result<(), String> {
        for n in [self.n_re, self.n_im] {
            if n == 0 || n > MAX_GRID_SIDE {
                return Err(format!("grid sides must lie in 1..={MAX_GRID_SIDE}, got {n}"));
            }
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        Ok(())
    }
}

fn default_samples() -> usize {
    10_000
}

fn default_k() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerEvalParams {
    pub function: DiscFunction,
    #[serde(with = "serde_pair::vec")]
    pub points: Vec<Complex64>,
    /// Allow points on the unit circle.
    #[serde(default)]
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaCertificateParams {
    pub measure: AtomicMeasure,
    pub horodiscs: Vec<Horodisc>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Audited as-is, even outside the region.
    #[serde(default, with = "serde_pair::vec")]
    pub injected: Vec<Complex64>,
}

fn default_separation() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructParams {
    pub construction: ConstructionInput,
    /// Defaults to every contact point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Separation constant used in the `|B| ≥ c/3` certificate.
    #[serde(default = "default_separation")]
    pub c: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_k_max() -> u64 {
    10
}

fn default_one() -> f64 {
    1.0
}

fn default_radii() -> Vec<f64> {
    vec![0.9, 0.99, 0.999, 0.9999]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftParams {
    pub weight: WeightFamily,
    #[serde(default = "default_k_max")]
    pub k_max: u64,
    #[serde(default = "default_one")]
    pub c: f64,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
}

fn default_budget() -> usize {
    36
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TshiftParams {
    pub weight: WeightFamily,
    pub function: DiscFunction,
    pub c: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

/// A curve given by its construction parameters or piece by piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveInput {
    Built(CurveSpec),
    Explicit(ContourCurve),
}

impl CurveInput {
    pub fn curve(&self) -> Result<ContourCurve, dsk_core::riesz::RieszError> {
        match self {
            CurveInput::Built(spec) => build_curve(spec),
            CurveInput::Explicit(c) => Ok(c.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszSplitParams {
    pub matrix: MatrixOperator,
    pub gamma: CurveInput,
    pub gamma_prime: CurveInput,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default)]
    pub options: SplitOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSetParams {
    pub matrix: MatrixOperator,
    pub c: f64,
    /// Polynomial bound; defaults to the one computed from the matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default = "default_k")]
    pub k: u32,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    InnerEval(InnerEvalParams),
    ThetaCertificate(ThetaCertificateParams),
    LemmagConstruct(ConstructParams),
    ShiftAnalyze(ShiftParams),
    Tshift(TshiftParams),
    RieszSplit(RieszSplitParams),
    LevelSetScan(LevelSetParams),
}

impl Task {
    pub fn kind(&self) -> Kind {
        match self {
            Task::InnerEval(_) => Kind::InnerEval,
            Task::ThetaCertificate(_) => Kind::ThetaCertificate,
            Task::LemmagConstruct(_) => Kind::LemmagConstruct,
            Task::ShiftAnalyze(_) => Kind::ShiftAnalyze,
            Task::Tshift(_) => Kind::Tshift,
            Task::RieszSplit(_) => Kind::RieszSplit,
            Task::LevelSetScan(_) => Kind::LevelSetScan,
        }
    }

    fn params(&self) -> Value {
        let v = match self {
            Task::InnerEval(p) => serde_json::to_value(p),
            Task::ThetaCertificate(p) => serde_json::to_value(p),
            Task::LemmagConstruct(p) => serde_json::to_value(p),
            Task::ShiftAnalyze(p) => serde_json::to_value(p),
            Task::Tshift(p) => serde_json::to_value(p),
            Task::RieszSplit(p) => serde_json::to_value(p),
            Task::LevelSetScan(p) => serde_json::to_value(p),
        };
        v.expect("parameters serialize")
    }

    fn parse(kind: Kind, params: Value) -> Result<Self, RunError> {
        Ok(match kind {
            Kind::InnerEval => Task::InnerEval(params_from(params)?),
            Kind::ThetaCertificate => Task::ThetaCertificate(params_from(params)?),
            Kind::LemmagConstruct => Task::LemmagConstruct(params_from(params)?),
            Kind::ShiftAnalyze => Task::ShiftAnalyze(params_from(params)?),
            Kind::Tshift => Task::Tshift(params_from(params)?),
            Kind::RieszSplit => Task::RieszSplit(params_from(params)?),
            Kind::LevelSetScan => Task::LevelSetScan(params_from(params)?),
        })
    }
}

fn params_from<T: DeserializeOwned>(v: Value) -> Result<T, RunError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { "params".to_string() } else { format!("params.{path}") };
        RunError::Schema(format!("{at}: {}", e.inner()))
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    kind: Kind,
    params: Value,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<GridExport>,
    #[serde(default, skip_serializing_if = "Outputs::is_empty")]
    outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    /// Overrides the kind's main tolerance when set.
    pub tol: Option<f64>,
    pub grid: Option<GridExport>,
    pub outputs: Outputs,
    pub task: Task,
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawScenario {
            name: self.name.clone(),
            kind: self.task.kind(),
            params: self.task.params(),
            seed: self.seed,
            tol: self.tol,
            grid: self.grid,
            outputs: self.outputs.clone(),
        }
        .serialize(s)
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "?" || path == "." {
                RunError::Schema(inner.to_string())
            } else {
                RunError::Schema(format!("{path}: {inner}"))
            }
        })?;
        Self::from_raw(raw)
    }

    pub fn from_value(v: Value) -> Result<Self, RunError> {
        let raw: RawScenario = params_from(v).map_err(|e| match e {
            RunError::Schema(m) => RunError::Schema(m.replacen("params", "scenario", 1)),
            other => other,
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<Self, RunError> {
        if raw.name.is_empty() || raw.name.contains(['/', '\\']) {
            return Err(RunError::Schema(format!("name must be a nonempty file stem, got {:?}", raw.name)));
        }
        if let Some(tol) = raw.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(RunError::Schema(format!("tol must be positive, got {tol}")));
            }
        }
        if let Some(g) = &raw.grid {
            g.validate().map_err(|m| RunError::Schema(format!("grid: {m}")))?;
        }
        Ok(Scenario {
            task: Task::parse(raw.kind, raw.params)?,
            name: raw.name,
            seed: raw.seed,
            tol: raw.tol,
            grid: raw.grid,
            outputs: raw.outputs,
        })
    }
}
