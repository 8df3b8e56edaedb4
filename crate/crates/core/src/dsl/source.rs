use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{is_reserved, parse_expr};
use crate::analytic::{AnalyticFn, Disk};
use crate::error::{Error, Result};

/// A named function in DSL form with its domain and parameter values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnSource {
    pub name: String,
    pub expr: String,
    pub domain: Disk,
    pub params: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisk {
    center: [f64; 2],
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    name: String,
    expr: String,
    #[serde(default)]
    domain: Option<RawDisk>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl FnSource {
    pub fn new(name: &str, expr: &str) -> FnSource {
        FnSource {
            name: name.to_string(),
            expr: expr.to_string(),
            domain: Disk::unit(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_domain(mut self, domain: Disk) -> FnSource {
        self.domain = domain;
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> FnSource {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Parses the expression with the stored parameters.
    pub fn build(&self) -> Result<AnalyticFn> {
        let expr = parse_expr(&self.expr, &self.params).map_err(|e| Error::Source {
            name: self.name.clone(),
            source: Box::new(e),
        })?;
        Ok(AnalyticFn::new(expr, self.domain))
    }

    /// Parses the expression with some parameters overridden.
    pub fn instantiate(&self, overrides: &[(&str, f64)]) -> Result<AnalyticFn> {
        let mut s = self.clone();
        for (k, v) in overrides {
            s.params.insert((*k).to_string(), *v);
        }
        s.build()
    }
}

/// Parses and validates the JSON text of a function file.
pub fn parse_fn_sources(json: &str) -> Result<Vec<FnSource>> {
    let raw: Vec<RawSource> =
        serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        if !seen.insert(r.name.clone()) {
            return Err(Error::Schema(format!("duplicate function name `{}`", r.name)));
        }
        let domain = match r.domain {
            None => Disk::unit(),
            Some(d) => {
                if !(d.radius.is_finite() && d.radius > 0.0) {
                    return Err(Error::Schema(format!(
                        "`{}`: domain radius must be positive, got {}",
                        r.name, d.radius
                    )));
                }
                Disk::new(Complex64::new(d.center[0], d.center[1]), d.radius)
                    .map_err(|e| Error::Schema(format!("`{}`: {e}", r.name)))?
            }
        };
        for (k, v) in &r.params {
            if is_reserved(k) || !v.is_finite() {
                return Err(Error::Schema(format!(
                    "`{}`: invalid parameter `{k}` = {v}",
                    r.name
                )));
            }
        }
        let src = FnSource {
            name: r.name,
            expr: r.expr,
            domain,
            params: r.params,
        };
        src.build()?;
        out.push(src);
    }
    Ok(out)
}

/// Reads a JSON function file: an array of `{name, expr, domain?, params?}`.
pub fn load_fn_file(path: impl AsRef<Path>) -> Result<Vec<FnSource>> {
    let text = std::fs::read_to_string(path)?;
    parse_fn_sources(&text)
}
