//! Run configuration shared by the CLI and the scenarios.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::analytic::GridSpec;
use crate::error::{Error, Result};
use crate::roots::Lemma7Options;
use crate::zalcman::{Schedule, SequenceOptions, WeightFn};
use crate::zerofree::FormOptions;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabConfig {
    /// Circle samples per unit of radius (at least 256 per circle).
    pub circle_density: f64,
    pub polar_radial: usize,
    pub polar_angular: usize,
    pub refine: bool,
    pub b_used: f64,
    /// Threshold of the `(ln t)²` weight.
    pub t0: f64,
    /// `ε_k = eps0/√k`.
    pub eps0: f64,
    pub search_fraction: f64,
    pub form_radius: f64,
    pub delta_radial: usize,
    pub delta_angular: usize,
    pub root_tol: f64,
    pub hypothesis_fraction: f64,
    pub axis_tol: f64,
}

impl Default for LabConfig {
    fn default() -> LabConfig {
        LabConfig {
            circle_density: 1.0,
            polar_radial: 24,
            polar_angular: 48,
            refine: true,
            b_used: 4.5,
            t0: 4.0,
            eps0: 3.0,
            search_fraction: 0.5,
            form_radius: 2000.0,
            delta_radial: 32,
            delta_angular: 64,
            root_tol: 1e-10,
            hypothesis_fraction: 0.999,
            axis_tol: 1e-8,
        }
    }
}

impl LabConfig {
    pub fn from_json(text: &str) -> Result<LabConfig> {
        let cfg: LabConfig = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<LabConfig> {
        LabConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("circle_density", self.circle_density),
            ("b_used", self.b_used),
            ("eps0", self.eps0),
            ("form_radius", self.form_radius),
            ("root_tol", self.root_tol),
            ("axis_tol", self.axis_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Schema(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.t0 > 1.0) {
            return Err(Error::Schema(format!("t0 = {} must exceed 1", self.t0)));
        }
        if !(0.0..1.0).contains(&self.search_fraction) {
            return Err(Error::Schema("search_fraction must lie in [0, 1)".into()));
        }
        if !(self.hypothesis_fraction > 0.0 && self.hypothesis_fraction <= 1.0) {
            return Err(Error::Schema("hypothesis_fraction must lie in (0, 1]".into()));
        }
        self.polar_grid().validate()?;
        self.delta_grid().validate()?;
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn polar_grid(&self) -> GridSpec {
        let g = GridSpec::polar(self.polar_radial, self.polar_angular);
        if self.refine {
            g
        } else {
            g.without_refinement()
        }
    }

    pub fn circle_grid(&self, r: f64) -> GridSpec {
        let g = GridSpec::circle_default(r, self.circle_density);
        if self.refine {
            g
        } else {
            g.without_refinement()
        }
    }

    pub fn delta_grid(&self) -> GridSpec {
        GridSpec::polar(self.delta_radial, self.delta_angular)
    }

    pub fn weight(&self) -> WeightFn {
        WeightFn::log_squared(self.t0)
    }

    pub fn sequence_options(&self) -> SequenceOptions {
        SequenceOptions {
            schedule: Schedule::InverseSqrt { eps0: self.eps0 },
            weight: self.weight(),
            grid: self.polar_grid(),
            search_fraction: self.search_fraction,
        }
    }

    pub fn form_options(&self) -> FormOptions {
        FormOptions {
            b_used: self.b_used,
            ..FormOptions::default()
        }
    }

    pub fn lemma7_options(&self) -> Lemma7Options {
        Lemma7Options {
            axis_tol: self.axis_tol,
            hypothesis_fraction: self.hypothesis_fraction,
            locate_tol: self.root_tol,
        }
    }
}
