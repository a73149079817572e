//! Artifact emission: unified CSV rows, JSON report, manifest.

use std::collections::BTreeMap;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::hardy1d::SingularSpectrum;

use super::ExperimentConfig;

/// One row of the unified CSV schema
/// `experiment,series,n,value,stabilized,proxy`.
pub(crate) struct Row {
    pub series: &'static str,
    pub n: usize,
    pub value: f64,
    pub stabilized: bool,
    pub proxy: bool,
}

/// Collects rows and auxiliary spectra during a run.
pub(crate) struct Output {
    experiment: &'static str,
    out_dir: PathBuf,
    rows: Vec<Row>,
    /// Named spectra written as sidecar CSVs in the library schema.
    spectra: Vec<(String, SingularSpectrum)>,
    /// Extra files emitted directly by the experiment body.
    extras: Vec<PathBuf>,
}

/// Where the artifacts landed.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
    pub manifest_path: PathBuf,
    pub extra_files: Vec<PathBuf>,
}

impl Output {
    pub(crate) fn new(experiment: &'static str, out_dir: PathBuf) -> Self {
        Output {
            experiment,
            out_dir,
            rows: Vec::new(),
            spectra: Vec::new(),
            extras: Vec::new(),
        }
    }

    /// Reserve a path for an extra artifact inside the output directory;
    /// the file is recorded in the manifest.
    pub(crate) fn extra_path(&mut self, name: &str) -> crate::error::Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(format!("{}.{}", self.experiment, name));
        self.extras.push(path.clone());
        Ok(path)
    }

    pub(crate) fn row(&mut self, series: &'static str, n: usize, value: f64) {
        self.rows.push(Row {
            series,
            n,
            value,
            stabilized: true,
            proxy: false,
        });
    }

    pub(crate) fn row_full(
        &mut self,
        series: &'static str,
        n: usize,
        value: f64,
        stabilized: bool,
        proxy: bool,
    ) {
        self.rows.push(Row {
            series,
            n,
            value,
            stabilized,
            proxy,
        });
    }

    /// Record a spectrum both as unified rows and as a sidecar CSV.
    pub(crate) fn spectrum(&mut self, name: &str, series: &'static str, spec: &SingularSpectrum) {
        for (i, &v) in spec.values.iter().enumerate() {
            self.row_full(series, i + 1, v, spec.stabilized(i), false);
        }
        self.spectra.push((name.to_string(), spec.clone()));
    }

    pub(crate) fn write(
        self,
        config: &ExperimentConfig,
        resolved_params: &BTreeMap<String, String>,
        report_body: serde_json::Value,
    ) -> Result<RunReport> {
        std::fs::create_dir_all(&config.out_dir)?;
        let mut extra_files = self.extras.clone();

        let csv_path = if config.formats.csv {
            let mut csv = String::from("experiment,series,n,value,stabilized,proxy\n");
            for row in &self.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    self.experiment, row.series, row.n, row.value, row.stabilized, row.proxy
                ));
            }
            let path = config.out_dir.join(format!("{}.csv", self.experiment));
            std::fs::write(&path, csv)?;
            Some(path)
        } else {
            None
        };

        for (name, spec) in &self.spectra {
            let path = config
                .out_dir
                .join(format!("{}.{}.spectrum.csv", self.experiment, name));
            std::fs::write(&path, spec.to_csv())?;
            extra_files.push(path);
        }

        let json_path = if config.formats.json {
            let path = config.out_dir.join(format!("{}.json", self.experiment));
            std::fs::write(&path, serde_json::to_string_pretty(&report_body)?)?;
            Some(path)
        } else {
            None
        };

        // Content hash of the resolved inputs (experiment, parameters, caps).
        let mut hasher = Sha256::new();
        hasher.update(self.experiment.as_bytes());
        for (k, v) in resolved_params {
            hasher.update(b"\0");
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
        }
        hasher.update(format!(
            "\0caps:{},{},{}",
            config.caps.n_max, config.caps.d_max, config.caps.k_max
        ));
        let content_hash = format!("{:x}", hasher.finalize());

        let mut outputs = Vec::new();
        for path in csv_path
            .iter()
            .chain(json_path.iter())
            .chain(extra_files.iter())
        {
            let bytes = std::fs::read(path)?;
            outputs.push(serde_json::json!({
                "file": path.file_name().unwrap().to_string_lossy(),
                "sha256": format!("{:x}", Sha256::digest(&bytes)),
            }));
        }

        let manifest = serde_json::json!({
            "experiment": self.experiment,
            "params": resolved_params,
            "caps": config.caps,
            "content_hash": content_hash,
            "outputs": outputs,
            "schema": "experiment,series,n,value,stabilized,proxy",
        });
        let manifest_path = config
            .out_dir
            .join(format!("{}.manifest.json", self.experiment));
        std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;

        Ok(RunReport {
            csv_path,
            json_path,
            manifest_path,
            extra_files,
        })
    }
}
