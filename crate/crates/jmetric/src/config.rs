//! User-defined manifolds from JSON files.
//!
//! ```json
//! {
//!   "name": "polar-kahler",
//!   "kind": { "alpha": -1, "epsilon": 1 },
//!   "dim": 2,
//!   "domain": { "lo": [0.5, -3.0], "hi": [3.0, 3.0] },
//!   "metric": [["1", "0"], ["0", "x1^2"]],
//!   "structure": [["0", "-x1"], ["1/x1", "0"]]
//! }
//! ```
//!
//! `metric[i][j]` is `g_ij` and `structure[i][j]` is `J^i_j`; either may
//! also be given flat in row-major order.

use std::path::Path;
use std::sync::Arc;

use jmetric_core::dual::Dual;
use jmetric_core::{AEStructureKind, ChartedManifold, Domain};
use serde::Deserialize;
use thiserror::Error;

use crate::expr::{parse, Expr, ParseError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    /// Carries serde_json's line and column.
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{field}: {source}")]
    Expression { field: String, source: ParseError },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Core(#[from] jmetric_core::Error),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Components {
    Nested(Vec<Vec<String>>),
    Flat(Vec<String>),
}

#[derive(Debug, Deserialize)]
struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    kind: AEStructureKind,
    dim: usize,
    domain: BoxDomain,
    metric: Components,
    structure: Components,
}

fn flatten(field: &str, c: Components, dim: usize) -> Result<Vec<String>, ConfigError> {
    let flat = match c {
        Components::Flat(v) => v,
        Components::Nested(rows) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(ConfigError::Shape(format!("{field} must be {dim}x{dim}")));
            }
            rows.into_iter().flatten().collect()
        }
    };
    if flat.len() != dim * dim {
        return Err(ConfigError::Shape(format!(
            "{field} has {} entries, expected {}",
            flat.len(),
            dim * dim
        )));
    }
    Ok(flat)
}

fn compile(field: &str, srcs: &[String], dim: usize) -> Result<Vec<Expr>, ConfigError> {
    srcs.iter()
        .enumerate()
        .map(|(k, s)| {
            parse(s, dim).map_err(|source| ConfigError::Expression {
                field: format!("{field}[{}][{}]", k / dim, k % dim),
                source,
            })
        })
        .collect()
}

/// Builds a manifold from the text of a config file; `origin` names the
/// source in error messages.
pub fn manifold_from_str(text: &str, origin: &str) -> Result<ChartedManifold, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|source| ConfigError::Json {
        path: origin.to_string(),
        source,
    })?;
    let dim = raw.dim;
    if raw.domain.lo.len() != dim || raw.domain.hi.len() != dim {
        return Err(ConfigError::Shape(format!("domain bounds must have {dim} entries")));
    }
    let metric = compile("metric", &flatten("metric", raw.metric, dim)?, dim)?;
    let structure = compile("structure", &flatten("structure", raw.structure, dim)?, dim)?;
    let (metric, structure) = (Arc::new(metric), Arc::new(structure));
    let eval = |exprs: Arc<Vec<Expr>>| move |x: &[Dual]| exprs.iter().map(|e| e.eval(x)).collect::<Vec<_>>();
    let name = raw.name.unwrap_or_else(|| origin.to_string());
    let domain = Domain::Box {
        lo: raw.domain.lo,
        hi: raw.domain.hi,
    };
    Ok(ChartedManifold::from_fns(name, raw.kind, domain, eval(metric), eval(structure))?)
}

pub fn load_manifold(path: &Path) -> Result<ChartedManifold, ConfigError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: shown.clone(),
        source,
    })?;
    manifold_from_str(&text, &shown)
}
