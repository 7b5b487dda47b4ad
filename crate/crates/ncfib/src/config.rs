//! JSON description of a calculus, as read by `ncfib check`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ncfib_core::algebra::{AlgebraError, FiniteDimAlgebra, FiniteGroup};
use ncfib_core::dga::{Calculus, DgaError, GroupCalculusSpec, InnerCalculusSpec, RewriteRule, Word};
use ncfib_core::linalg::{zero_vec, Matrix, Vector};
use ncfib_core::{Scalar, ScalarError};
use serde::{Deserialize, Serialize};

use crate::report::{CheckItem, CheckReport, SCHEMA_VERSION};

/// Problems with the configuration itself, as opposed to the mathematics it describes.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad scalar: {0}")]
    Scalar(#[from] ScalarError),
    #[error("unknown {what} '{name}'")]
    Unknown { what: &'static str, name: String },
    #[error("{0}")]
    Shape(String),
}

/// Outcome of building and checking a calculus.
#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid calculus: {0}")]
    Build(#[from] DgaError),
    #[error("invalid group: {0}")]
    Group(#[from] AlgebraError),
}

/// A scalar written either as a JSON integer or as a string such as `"-1/2*sqrt(3)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    pub fn parse(&self) -> Result<Scalar, ConfigError> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarText::Text(s) => Ok(s.parse()?),
        }
    }
}

fn parse_vec(v: &[ScalarText]) -> Result<Vector, ConfigError> {
    v.iter().map(ScalarText::parse).collect()
}

fn default_max_degree() -> usize {
    3
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    pub calculus: CalculusConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CalculusConfig {
    Group(GroupConfig),
    Inner(InnerConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Permutation {
    pub name: String,
    /// 0-based images of `0..n`.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoEntry {
    pub element: String,
    /// Rows of `rho(element)`, acting on row vectors from the right.
    pub matrix: Vec<Vec<ScalarText>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleEntry {
    pub element: String,
    /// Name of the 1-form generator this value defines.
    pub form: String,
    pub value: Vec<ScalarText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub generators: Vec<Permutation>,
    pub representation: Vec<RhoEntry>,
    pub cocycle: Vec<CocycleEntry>,
    #[serde(default = "yes")]
    pub require_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerGenerator {
    pub name: String,
    /// Coefficient of this generator in `theta`, keyed by matrix unit label (`E12`).
    pub theta: BTreeMap<String, ScalarText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: ScalarText,
    pub word: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub lhs: Vec<String>,
    /// An empty list rewrites `lhs` to zero.
    #[serde(default)]
    pub rhs: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerConfig {
    pub matrix_size: usize,
    pub generators: Vec<InnerGenerator>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn kind(&self) -> &'static str {
        match self.calculus {
            CalculusConfig::Group(_) => "group",
            CalculusConfig::Inner(_) => "inner",
        }
    }

    pub fn build(&self) -> Result<Calculus, CheckError> {
        match &self.calculus {
            CalculusConfig::Group(g) => Ok(g.spec()?.build(self.max_degree)?),
            CalculusConfig::Inner(i) => Ok(i.spec()?.build(self.max_degree)?),
        }
    }
}

impl GroupConfig {
    pub fn spec(&self) -> Result<GroupCalculusSpec, CheckError> {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        let perms: Vec<Vec<usize>> = self.generators.iter().map(|g| g.permutation.clone()).collect();
        let group = FiniteGroup::from_permutations(&names, &perms)?;
        let element = |name: &str| {
            group.index_of(name).ok_or_else(|| ConfigError::Unknown { what: "group element", name: name.to_string() })
        };
        let mut rho = Vec::new();
        for r in &self.representation {
            let rows = r.matrix.iter().map(|row| parse_vec(row)).collect::<Result<Vec<_>, _>>()?;
            let m = Matrix::from_rows(rows).map_err(|e| ConfigError::Shape(format!("rho({}): {e}", r.element)))?;
            rho.push((element(&r.element)?, m));
        }
        let mut omega = Vec::new();
        let mut forms = Vec::new();
        for c in &self.cocycle {
            omega.push((element(&c.element)?, parse_vec(&c.value)?));
            forms.push(c.form.clone());
        }
        Ok(GroupCalculusSpec {
            group,
            rho,
            omega,
            generator_names: forms,
            require_connected: self.require_connected,
        })
    }
}

impl InnerConfig {
    pub fn spec(&self) -> Result<InnerCalculusSpec, ConfigError> {
        if self.matrix_size == 0 {
            return Err(ConfigError::Shape("matrix_size must be positive".into()));
        }
        let algebra = Arc::new(FiniteDimAlgebra::matrix_algebra(self.matrix_size));
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut theta = Vec::new();
        for g in &self.generators {
            let mut v = zero_vec(algebra.dim());
            for (label, c) in &g.theta {
                let i = algebra
                    .index_of(label)
                    .ok_or_else(|| ConfigError::Unknown { what: "matrix unit", name: label.clone() })?;
                v[i] = c.parse()?;
            }
            theta.push(v);
        }
        let word = |w: &[String]| -> Result<Word, ConfigError> {
            w.iter()
                .map(|s| {
                    names
                        .iter()
                        .position(|n| n == s)
                        .ok_or_else(|| ConfigError::Unknown { what: "generator", name: s.clone() })
                })
                .collect()
        };
        let mut relations = Vec::new();
        for r in &self.relations {
            let rhs = r
                .rhs
                .iter()
                .map(|t| Ok((t.coeff.parse()?, word(&t.word)?)))
                .collect::<Result<Vec<_>, ConfigError>>()?;
            relations.push(RewriteRule::new(word(&r.lhs)?, rhs));
        }
        Ok(InnerCalculusSpec { algebra, generator_names: names, theta, relations, generator_star: None })
    }
}

fn item(name: &str, r: Result<(), String>) -> CheckItem {
    CheckItem { name: name.to_string(), holds: r.is_ok(), detail: r.err() }
}

/// Runs the structural checks on a built calculus.
pub fn check_calculus(kind: &str, calc: &Calculus) -> CheckReport {
    let max = calc.max_degree();
    let mut checks = vec![item("confluence", calc.rewrite().check_confluence(max).map_err(|e| e.to_string()))];
    let mut d2 = Ok(());
    for n in 0..max.saturating_sub(1) {
        let dd = calc.d_matrix(n + 1).try_mul(&calc.d_matrix(n));
        if !matches!(dd, Ok(ref m) if m.is_zero()) {
            d2 = Err(format!("d^2 != 0 on Omega^{n}"));
            break;
        }
    }
    checks.push(item("d_squared_zero", d2));
    checks.push(item("graded_leibniz", calc.check_leibniz(max).map_err(|e| e.to_string())));
    let kernel = calc.kernel_of_d0_dim();
    CheckReport {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        max_degree: max,
        generators: calc.generator_names().to_vec(),
        dims: calc.dims(),
        kernel_d0_dim: kernel,
        connected: kernel == 1,
        checks,
    }
}

pub fn run_check(cfg: &Config) -> Result<CheckReport, CheckError> {
    let calc = cfg.build()?;
    Ok(check_calculus(cfg.kind(), &calc))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = include_str!("../configs/s3.json");
    const M3: &str = include_str!("../configs/m3.json");

    #[test]
    fn s3_config_matches_builtin() {
        let cfg = Config::from_json(S3).unwrap();
        let calc = cfg.build().unwrap();
        let builtin = ncfib_core::examples::s3_calculus(&Scalar::one(), cfg.max_degree).unwrap();
        assert_eq!(calc.dims(), builtin.dims());
        assert_eq!(calc.d_matrix(0), builtin.d_matrix(0));
        let r = check_calculus(cfg.kind(), &calc);
        assert!(r.passed() && r.connected);
    }

    #[test]
    fn m3_config_matches_builtin() {
        let cfg = Config::from_json(M3).unwrap();
        let calc = cfg.build().unwrap();
        let builtin = ncfib_core::examples::m3_calculus(cfg.max_degree).unwrap();
        assert_eq!(calc.dims(), builtin.dims());
        assert_eq!(calc.d_matrix(1), builtin.d_matrix(1));
        let r = check_calculus(cfg.kind(), &calc);
        assert!(r.passed());
        assert_eq!(r.kernel_d0_dim, 2);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(Config::from_json("{\"calculus\": {\"kind\": \"lie\"}}"), Err(ConfigError::Json(_))));
        let bad = S3.replace("\"u\", \"form\"", "\"w\", \"form\"");
        let cfg = Config::from_json(&bad).unwrap();
        assert!(matches!(cfg.build(), Err(CheckError::Config(ConfigError::Unknown { .. }))));
    }

    #[test]
    fn half_b_is_a_validation_error() {
        let half = S3.replace("\"-sqrt(3)\", \"1\"", "\"-1/2*sqrt(3)\", \"1/2\"");
        assert_ne!(half, S3);
        let cfg = Config::from_json(&half).unwrap();
        assert!(matches!(cfg.build(), Err(CheckError::Build(_))));
    }
}
