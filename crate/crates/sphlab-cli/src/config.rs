//! Experiment configs: TOML with exactly one operation table.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sphlab::families::RowId;
use sphlab::funcspace::{Exponent, Q};
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Integer or string in the config, parsed with `FromStr`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Str(String),
}

fn parse_scalar<'de, D: Deserializer<'de>, T: FromStr>(d: D) -> Result<T, D::Error>
where
    T::Err: fmt::Display,
{
    let s = match Scalar::deserialize(d)? {
        Scalar::Int(i) => i.to_string(),
        Scalar::Str(s) => s,
    };
    s.parse().map_err(|e: T::Err| D::Error::custom(format!("{s:?}: {e}")))
}

/// An exponent written as `"3/2"`, `"inf"` or an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exp(pub Exponent);

impl<'de> Deserialize<'de> for Exp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        parse_scalar(d).map(Exp)
    }
}

impl Serialize for Exp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// A rational written as `"9/10"` or an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat(pub Q);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        parse_scalar(d).map(Rat)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row(pub RowId);

impl<'de> Deserialize<'de> for Row {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        parse_scalar(d).map(Row)
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0.index() as u64)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Output directory; not part of the hash.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average: Option<AverageParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Verify,
    Sweep,
    Region,
    Table,
    Average,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operation::Verify => "verify",
            Operation::Sweep => "sweep",
            Operation::Region => "region",
            Operation::Table => "table",
            Operation::Average => "average",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub suites: Vec<String>,
}

fn d2() -> usize {
    2
}
fn row_ladder() -> (i32, i32) {
    (6, 11)
}
fn tol() -> f64 {
    0.1
}
fn r2() -> f64 {
    0.98
}
fn quarter() -> f64 {
    0.25
}
fn dyadic_n() -> Vec<u32> {
    vec![4, 8, 16, 32, 64]
}
fn k_range() -> (u32, u32) {
    (4, 9)
}
fn kakeya_ladder() -> (i32, i32) {
    (4, 8)
}
fn right_angle() -> f64 {
    FRAC_PI_2
}
fn samples() -> usize {
    400
}
fn columns() -> usize {
    4000
}
fn weak_tol() -> f64 {
    0.15
}
fn weak_r2() -> f64 {
    0.9
}

/// Written as `[sweep.<kind>]`. `delta = [lo, hi]` means `δ = 2^-lo .. 2^-hi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SweepParams {
    /// One row of the necessary-condition table: α, β, γ fits and the exact check.
    Row {
        row: Row,
        #[serde(default = "d2")]
        d: usize,
        r: Exp,
        p: Exp,
        q: Exp,
        #[serde(default = "row_ladder")]
        delta: (i32, i32),
        #[serde(default = "tol")]
        tolerance: f64,
        #[serde(default = "r2")]
        r2_min: f64,
    },
    /// γ fits for all four rows at each `r`.
    Rows {
        #[serde(default = "d2")]
        d: usize,
        r: Vec<Exp>,
        #[serde(default = "row_ladder")]
        delta: (i32, i32),
        #[serde(default = "tol")]
        tolerance: f64,
        #[serde(default = "r2")]
        r2_min: f64,
    },
    /// `||f||_{p0,s}` of the dyadic ball sum against `N`, predicted `1/s`.
    DyadicLorentz {
        #[serde(default = "d2")]
        d: usize,
        r: Exp,
        s: Vec<Exp>,
        #[serde(default = "quarter")]
        a: f64,
        #[serde(default = "dyadic_n")]
        n: Vec<u32>,
        #[serde(default = "tol")]
        tolerance: f64,
        #[serde(default = "r2")]
        r2_min: f64,
    },
    /// `𝔄^r` of the dyadic ball sum on the annulus against `N`, predicted 1.
    DyadicAr {
        #[serde(default = "d2")]
        d: usize,
        r: Vec<Exp>,
        #[serde(default = "quarter")]
        a: f64,
        #[serde(default = "dyadic_n")]
        n: Vec<u32>,
        #[serde(default = "tol")]
        tolerance: f64,
        #[serde(default = "r2")]
        r2_min: f64,
    },
    /// Lower bound of the product-type transform on `B_k` against `2^k`.
    Product {
        alpha: [Rat; 2],
        beta: [Rat; 2],
        p1: Exp,
        p2: Exp,
        #[serde(default = "k_range")]
        k: (u32, u32),
        #[serde(default = "tol")]
        tolerance: f64,
        #[serde(default = "r2")]
        r2_min: f64,
    },
    /// Weak-type ratio over the rectangle family.
    WeakType {
        p1: Exp,
        p2: Exp,
        p: Exp,
        #[serde(default = "right_angle")]
        theta: f64,
        #[serde(default = "kakeya_ladder")]
        delta: (i32, i32),
        #[serde(default = "samples")]
        samples: usize,
        #[serde(default = "columns")]
        columns: usize,
        #[serde(default = "weak_tol")]
        tolerance: f64,
        #[serde(default = "weak_r2")]
        r2_min: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionParams {
    pub thm: String,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Exp>,
    /// Exponents `(p, q)` or `(p1, p2, p)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<Exp>>,
    /// Reciprocal coordinates, as an alternative to `exponents`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Rat>>,
    /// Vertex name, or `"all"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableParams {
    pub d: Vec<u32>,
    pub r: Vec<Exp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AverageOperator {
    /// `A_t f(x)`.
    Spherical,
    /// `max_t A_t f(x)` over the local grid.
    Maximal,
    /// `𝔄^r f(x)`.
    Ar,
    /// Bilinear average over `S^{2d-1}` by slicing.
    Bilinear,
    /// `𝒜^θ_t(f, g)(x)`, planar.
    Rotated,
    /// `𝒜^θ_{|x|}(f, g)(x)`, planar.
    Linearized,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    Gaussian {
        center: Vec<f64>,
        a: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    Ball {
        d: usize,
        radius: f64,
    },
    Annulus {
        d: usize,
        inner: f64,
        outer: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn unit_radius() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageParams {
    pub operator: AverageOperator,
    pub f: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FieldSpec>,
    pub points: Vec<Vec<f64>>,
    #[serde(default = "unit_radius")]
    pub t: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Exp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

const RANDOMIZED_SUITES: [&str; 2] = ["slicing", "domination"];

impl ExperimentConfig {
    pub fn empty() -> Self {
        ExperimentConfig { name: None, seed: None, resolution: None, out: None, verify: None, sweep: None, region: None, table: None, average: None }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError(format!("schema error at `{path}`: {}", inner.message().trim()))
        })?;
        cfg.operation()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = ExperimentConfig::parse(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        cfg.check_seed()?;
        Ok(cfg)
    }

    /// The single operation table present.
    pub fn operation(&self) -> Result<Operation, ConfigError> {
        let present: Vec<Operation> = [
            (self.verify.is_some(), Operation::Verify),
            (self.sweep.is_some(), Operation::Sweep),
            (self.region.is_some(), Operation::Region),
            (self.table.is_some(), Operation::Table),
            (self.average.is_some(), Operation::Average),
        ]
        .into_iter()
        .filter(|(p, _)| *p)
        .map(|(_, o)| o)
        .collect();
        match present.as_slice() {
            [op] => Ok(*op),
            [] => Err(ConfigError("schema error at `.`: config needs one of [verify], [sweep], [region], [table], [average]".into())),
            _ => Err(ConfigError("schema error at `.`: config has more than one operation table".into())),
        }
    }

    /// Randomized operations must state their seed in the file.
    fn check_seed(&self) -> Result<(), ConfigError> {
        let randomized = match (&self.verify, &self.sweep) {
            (Some(v), _) => v.suites.iter().any(|s| s == "all" || RANDOMIZED_SUITES.contains(&s.as_str())),
            (_, Some(SweepParams::WeakType { .. })) => true,
            _ => false,
        };
        if randomized && self.seed.is_none() {
            return Err(ConfigError("schema error at `seed`: randomized runs need an explicit seed".into()));
        }
        Ok(())
    }

    /// Canonical JSON of everything that determines the output.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
