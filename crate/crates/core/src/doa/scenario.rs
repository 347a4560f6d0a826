//! JSON scenario files and CSV exports for single DOA runs.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{estimate_with_spectrum, DoaEstimates, MusicConfig, SourceScenario, Spectrum};
use crate::coupling::{build_coupling_matrix, CouplingModel};
use crate::error::Result;
use crate::geometry::io::NamedArray;
use crate::geometry::{ArrayFamily, SensorArray};

/// An array given inline, as a named position list, or by family and size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArraySpec {
    Positions(Vec<i64>),
    Named(NamedArray),
    Family { family: ArrayFamily, n: usize },
}

impl ArraySpec {
    pub fn resolve(&self) -> Result<SensorArray> {
        match self {
            ArraySpec::Positions(p) => SensorArray::normalized(p),
            ArraySpec::Named(named) => named.to_array(),
            ArraySpec::Family { family, n } => family.generate(*n),
        }
    }
}

fn default_grid() -> usize {
    MusicConfig::DEFAULT_GRID
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub array: ArraySpec,
    pub doas: Vec<f64>,
    pub snr_db: f64,
    pub snapshots: usize,
    #[serde(default)]
    pub coupling: Option<CouplingModel>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default = "default_true")]
    pub toeplitz: bool,
    #[serde(default)]
    pub refine: bool,
}

impl ScenarioFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn scenario(&self) -> Result<SourceScenario> {
        SourceScenario::with_snr(self.doas.clone(), self.snr_db)
    }

    pub fn music_config(&self) -> MusicConfig {
        MusicConfig {
            grid_points: self.grid_points,
            source_count: self.doas.len(),
            use_toeplitz_augmentation: self.toeplitz,
            parabolic_refinement: self.refine,
        }
    }

    pub fn run(&self) -> Result<(Spectrum, DoaEstimates)> {
        let arr = self.array.resolve()?;
        let scenario = self.scenario()?;
        let coupling = self.coupling.map(|m| build_coupling_matrix(&arr, &m));
        estimate_with_spectrum(
            &arr,
            &scenario,
            self.snapshots,
            coupling.as_ref(),
            &self.music_config(),
            self.seed,
        )
    }
}

pub fn write_spectrum_csv<W: Write>(spec: &Spectrum, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "value"])?;
    for (t, v) in spec.grid.iter().zip(&spec.values) {
        w.write_record([format!("{t:.8}"), format!("{v:.10e}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Rank-paired `k,theta_true,theta_est`; missing estimates are left blank.
pub fn write_estimates_csv<W: Write>(truths: &[f64], est: &DoaEstimates, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "theta_true", "theta_est"])?;
    for (k, t) in truths.iter().enumerate() {
        let e = est
            .estimates
            .get(k)
            .map(|e| format!("{e:.8}"))
            .unwrap_or_default();
        w.write_record([(k + 1).to_string(), format!("{t:.8}"), e])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_array_forms() {
        let inline =
            r#"{"array": [0, 1, 4, 6], "doas": [-0.2, 0.2], "snr_db": 10, "snapshots": 100}"#;
        let f = ScenarioFile::from_json(inline).unwrap();
        assert_eq!(f.array.resolve().unwrap().positions(), &[0, 1, 4, 6]);
        assert_eq!(f.grid_points, 10_001);
        assert!(f.toeplitz && f.coupling.is_none());

        let named = r#"{"array": {"name": "g", "positions": [0, 1, 3]}, "doas": [0.1],
            "snr_db": 0, "snapshots": 10, "coupling": null, "seed": 4, "grid_points": 101}"#;
        let f = ScenarioFile::from_json(named).unwrap();
        assert_eq!(f.array.resolve().unwrap().aperture(), 3);

        let fam = r#"{"array": {"family": "four-r-1", "n": 23}, "doas": [0.1], "snr_db": 0,
            "snapshots": 10, "coupling": {"c1_mag": 0.3, "c1_phase": 1.0471975511965976,
            "band": 100, "step": 0.39269908169872414}}"#;
        let f = ScenarioFile::from_json(fam).unwrap();
        assert_eq!(f.array.resolve().unwrap().aperture(), 174);
        assert_eq!(f.coupling.unwrap().band, 100);
    }

    #[test]
    fn rejects_unknown_fields() {
        let s = r#"{"array": [0, 1], "doas": [0.1], "snr_db": 0, "snapshots": 1, "bogus": 1}"#;
        assert!(ScenarioFile::from_json(s).is_err());
    }

    #[test]
    fn run_and_export() {
        let s = r#"{"array": [0, 1, 4, 6], "doas": [-0.2, 0.2], "snr_db": 20, "snapshots": 500,
            "seed": 1, "grid_points": 1000}"#;
        let f = ScenarioFile::from_json(s).unwrap();
        let (spec, est) = f.run().unwrap();
        assert_eq!(spec.values.len(), 1000);
        assert!(est.complete);

        let mut buf = Vec::new();
        write_spectrum_csv(&spec, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta,value\n-0.50000000,"));
        assert_eq!(text.lines().count(), 1001);

        let mut buf = Vec::new();
        let partial = DoaEstimates {
            estimates: vec![-0.2],
            complete: false,
        };
        write_estimates_csv(&f.doas, &partial, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,theta_true,theta_est\n1,-0.20000000,-0.20000000\n2,0.20000000,\n"
        );
    }
}
