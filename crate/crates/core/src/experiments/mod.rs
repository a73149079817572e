//! Reproducible experiment runner: maps experiment identifiers to
//! predefined computations and emits machine-readable results.
//!
//! The registry is code, not configuration: each experiment pins its symbol
//! constructions so runs cannot drift. Outputs are a unified CSV
//! (`experiment,series,n,value,stabilized,proxy`), an experiment-specific
//! JSON report, and a manifest recording resolved parameters, truncation
//! caps and a content hash of the inputs. Identical configs produce
//! byte-identical outputs regardless of thread count.

mod output;
mod registry;

pub use output::RunReport;
pub use registry::{registry, ExperimentDef};

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};

/// Truncation caps shared by all experiments.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Caps {
    /// Largest one-variable matrix truncation.
    pub n_max: usize,
    /// Largest total degree for the direct 2-D oracle.
    pub d_max: usize,
    /// Largest number of blocks in the triangular model.
    pub k_max: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            n_max: 4096,
            d_max: 40,
            k_max: 128,
        }
    }
}

/// Output formats to write.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            csv: true,
            json: true,
        }
    }
}

/// A fully-specified experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub id: String,
    /// Key-value overrides; unknown keys are rejected.
    pub params: BTreeMap<String, String>,
    pub caps: Caps,
    pub out_dir: PathBuf,
    pub formats: Formats,
}

impl ExperimentConfig {
    pub fn new(id: &str, out_dir: PathBuf) -> Self {
        ExperimentConfig {
            id: id.to_string(),
            params: BTreeMap::new(),
            caps: Caps::default(),
            out_dir,
            formats: Formats::default(),
        }
    }

    pub fn with_param(mut self, key: &str, value: &str) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// Resolved parameters: declared keys with defaults, overridden by the
/// config, with unknown keys rejected.
pub(crate) struct Params {
    resolved: BTreeMap<String, String>,
}

impl Params {
    pub(crate) fn resolve(
        experiment: &str,
        declared: &[(&str, &str)],
        overrides: &BTreeMap<String, String>,
    ) -> Result<Params> {
        let mut resolved: BTreeMap<String, String> = declared
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        for (key, value) in overrides {
            if !resolved.contains_key(key) {
                return Err(Error::UnknownParameter {
                    experiment: experiment.to_string(),
                    key: key.clone(),
                });
            }
            resolved.insert(key.clone(), value.clone());
        }
        Ok(Params { resolved })
    }

    pub(crate) fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    fn raw(&self, key: &str) -> &str {
        self.resolved.get(key).map(|s| s.as_str()).unwrap_or("")
    }

    pub(crate) fn f64(&self, key: &str) -> Result<f64> {
        self.raw(key).parse().map_err(|_| Error::BadParameter {
            key: key.to_string(),
            message: format!("expected a float, got `{}`", self.raw(key)),
        })
    }

    pub(crate) fn usize(&self, key: &str) -> Result<usize> {
        self.raw(key).parse().map_err(|_| Error::BadParameter {
            key: key.to_string(),
            message: format!("expected an integer, got `{}`", self.raw(key)),
        })
    }

    pub(crate) fn bool(&self, key: &str) -> Result<bool> {
        self.raw(key).parse().map_err(|_| Error::BadParameter {
            key: key.to_string(),
            message: format!("expected true/false, got `{}`", self.raw(key)),
        })
    }

    pub(crate) fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.raw(key)
            .split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| Error::BadParameter {
                    key: key.to_string(),
                    message: format!("expected comma-separated floats, got `{}`", self.raw(key)),
                })
            })
            .collect()
    }
}

/// Run one experiment and write its artifacts.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let def = registry()
        .into_iter()
        .find(|d| d.id == config.id)
        .ok_or_else(|| Error::UnknownExperiment(config.id.clone()))?;
    let params = Params::resolve(def.id, def.params, &config.params)?;
    let mut out = output::Output::new(def.id, config.out_dir.clone());
    let report_body = (def.run)(&params, &config.caps, &mut out)?;
    out.write(config, params.resolved(), report_body)
}
