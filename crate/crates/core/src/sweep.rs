//! Monte-Carlo RMSE sweeps over SNR, snapshots, coupling strength or
//! source count.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{build_coupling_matrix, CouplingModel};
use crate::doa::{estimate_doas, DoaEstimates, MusicConfig, SourceScenario};
use crate::error::{Error, Result};
use crate::geometry::ArrayFamily;

/// `theta_k = -0.45 + 0.9 (k - 1) / (K - 1)`.
pub fn default_doas(k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::KTooSmall { k, min: 2 });
    }
    Ok((0..k)
        .map(|i| -0.45 + 0.9 * i as f64 / (k - 1) as f64)
        .collect())
}

/// Unit-power sources on the default grid at 0 dB SNR.
pub fn default_scenario(k: usize) -> Result<SourceScenario> {
    SourceScenario::with_snr(default_doas(k)?, 0.0)
}

/// Root-mean-square error over trials, pairing sorted estimates with sorted
/// truths by rank.
pub fn rmse(estimates: &[Vec<f64>], truths: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::NoSuccessfulTrials);
    }
    let mut sorted_truths = truths.to_vec();
    sorted_truths.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for est in estimates {
        if est.len() != truths.len() {
            return Err(Error::DimensionMismatch {
                expected: truths.len(),
                got: est.len(),
            });
        }
        total += squared_error(est, &sorted_truths);
    }
    Ok((total / (estimates.len() * truths.len()) as f64).sqrt())
}

fn squared_error(est: &[f64], sorted_truths: &[f64]) -> f64 {
    let mut e = est.to_vec();
    e.sort_by(f64::total_cmp);
    e.iter()
        .zip(sorted_truths)
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    SnrDb,
    Snapshots,
    C1Magnitude,
    SourceCount,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::Snapshots => "snapshots",
            SweepAxis::C1Magnitude => "c1_magnitude",
            SweepAxis::SourceCount => "source_count",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "snr_db" | "snr" => Ok(SweepAxis::SnrDb),
            "snapshots" => Ok(SweepAxis::Snapshots),
            "c1_magnitude" | "c1" => Ok(SweepAxis::C1Magnitude),
            "source_count" | "k" => Ok(SweepAxis::SourceCount),
            other => Err(Error::InvalidSweep(format!("unknown axis '{other}'"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyAtN {
    pub family: ArrayFamily,
    pub n: usize,
}

fn default_trials() -> usize {
    100
}
fn default_k() -> usize {
    35
}
fn default_snapshots() -> usize {
    1000
}
fn default_coupling() -> Option<CouplingModel> {
    Some(CouplingModel::default())
}
fn default_grid() -> usize {
    MusicConfig::DEFAULT_GRID
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub families: Vec<FamilyAtN>,
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_k")]
    pub source_count: usize,
    #[serde(default)]
    pub snr_db: f64,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default = "default_coupling")]
    pub coupling: Option<CouplingModel>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default = "default_true")]
    pub toeplitz: bool,
}

impl SweepSpec {
    /// Base scenario: 35 sources, 0 dB, 1000 snapshots, default coupling.
    pub fn new(families: Vec<FamilyAtN>, axis: SweepAxis, axis_values: Vec<f64>) -> Self {
        Self {
            families,
            axis,
            axis_values,
            trials: default_trials(),
            source_count: default_k(),
            snr_db: 0.0,
            snapshots: default_snapshots(),
            coupling: default_coupling(),
            base_seed: 0,
            grid_points: default_grid(),
            toeplitz: true,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if self.families.is_empty() {
            return bad("no families given".into());
        }
        if self.axis_values.is_empty() {
            return bad("axis values are empty".into());
        }
        if self.axis_values.windows(2).any(|w| w[1] <= w[0]) {
            return bad("axis values must be strictly increasing".into());
        }
        if self.trials == 0 {
            return bad("trial count must be at least 1".into());
        }
        let integral = matches!(self.axis, SweepAxis::Snapshots | SweepAxis::SourceCount);
        for &v in &self.axis_values {
            if !v.is_finite() || (integral && (v < 1.0 || v.fract() != 0.0)) {
                return bad(format!("invalid {} value {v}", self.axis));
            }
            if self.axis == SweepAxis::C1Magnitude && !(0.0..1.0).contains(&v) {
                return bad(format!("|c1| = {v} outside [0, 1)"));
            }
        }
        Ok(())
    }

    /// Scenario, snapshot count and coupling model at one axis value.
    fn point(&self, value: f64) -> Result<(SourceScenario, usize, Option<CouplingModel>)> {
        let mut k = self.source_count;
        let mut snr = self.snr_db;
        let mut t = self.snapshots;
        let mut coupling = self.coupling;
        match self.axis {
            SweepAxis::SnrDb => snr = value,
            SweepAxis::Snapshots => t = value as usize,
            SweepAxis::SourceCount => k = value as usize,
            SweepAxis::C1Magnitude => {
                coupling = Some(coupling.unwrap_or_default().with_c1_magnitude(value));
            }
        }
        Ok((
            SourceScenario::with_snr(default_doas(k)?, snr)?,
            t,
            coupling,
        ))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable per-trial seed, independent of scheduling.
pub fn trial_seed(base_seed: u64, family: usize, axis: usize, trial: usize) -> u64 {
    [family as u64, axis as u64, trial as u64]
        .iter()
        .fold(splitmix64(base_seed), |h, &x| splitmix64(h ^ x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseRow {
    pub family: ArrayFamily,
    pub n: usize,
    pub axis: SweepAxis,
    pub axis_value: f64,
    /// `None` when every trial failed.
    pub rmse: Option<f64>,
    pub failure_rate: f64,
    pub trials_used: usize,
    /// Median of the per-trial RMSEs over complete trials.
    pub median_trial_rmse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseReport {
    pub trials: usize,
    pub rows: Vec<RmseRow>,
}

impl RmseReport {
    pub fn row(&self, family: ArrayFamily, axis_value: f64) -> Option<&RmseRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.axis_value == axis_value)
    }

    pub fn series(&self, family: ArrayFamily) -> Vec<&RmseRow> {
        self.rows.iter().filter(|r| r.family == family).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "family",
            "axis",
            "axis_value",
            "rmse",
            "failure_rate",
            "trials_used",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.family.id().to_string(),
                r.axis.name().to_string(),
                r.axis_value.to_string(),
                r.rmse.map(|v| format!("{v:.10e}")).unwrap_or_default(),
                format!("{:.6}", r.failure_rate),
                r.trials_used.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

/// Runs every `(family, axis value, trial)` cell in parallel and aggregates
/// in a fixed order, so the report does not depend on the thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<RmseReport> {
    spec.validate()?;
    let arrays = spec
        .families
        .iter()
        .map(|f| f.family.generate(f.n))
        .collect::<Result<Vec<_>>>()?;
    let points = spec
        .axis_values
        .iter()
        .map(|&v| spec.point(v))
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(usize, usize, usize)> = (0..arrays.len())
        .flat_map(|f| (0..points.len()).flat_map(move |a| (0..spec.trials).map(move |t| (f, a, t))))
        .collect();

    let outcomes: Vec<Result<Option<DoaEstimates>>> = cells
        .par_iter()
        .map(|&(f, a, t)| {
            let arr = &arrays[f];
            let (scenario, snapshots, model) = &points[a];
            let coupling = model.map(|m| build_coupling_matrix(arr, &m));
            let cfg = MusicConfig {
                grid_points: spec.grid_points,
                source_count: scenario.source_count(),
                use_toeplitz_augmentation: spec.toeplitz,
                parabolic_refinement: false,
            };
            let seed = trial_seed(spec.base_seed, f, a, t);
            match estimate_doas(arr, scenario, *snapshots, coupling.as_ref(), &cfg, seed) {
                Ok(est) => Ok(Some(est)),
                Err(Error::RankDeficient) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(arrays.len() * points.len());
    let mut it = outcomes.into_iter();
    for fam in &spec.families {
        for (a, (scenario, _, _)) in points.iter().enumerate() {
            let mut used = Vec::new();
            for _ in 0..spec.trials {
                if let Some(est) = it.next().expect("one outcome per cell")? {
                    if est.complete {
                        used.push(est.estimates);
                    }
                }
            }
            let truths = scenario.doas();
            let mut per_trial: Vec<f64> = used
                .iter()
                .map(|e| (squared_error(e, truths) / truths.len() as f64).sqrt())
                .collect();
            rows.push(RmseRow {
                family: fam.family,
                n: fam.n,
                axis: spec.axis,
                axis_value: spec.axis_values[a],
                rmse: rmse(&used, truths).ok(),
                failure_rate: 1.0 - used.len() as f64 / spec.trials as f64,
                trials_used: used.len(),
                median_trial_rmse: median(&mut per_trial),
            });
        }
    }
    Ok(RmseReport {
        trials: spec.trials,
        rows,
    })
}

/// Spearman rank correlation, averaging ranks over ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let cov: f64 = rx
        .iter()
        .zip(&ry)
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum();
    let vx: f64 = rx.iter().map(|a| (a - mean).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - mean).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProposedKind;
    use proptest::prelude::*;

    #[test]
    fn rmse_examples() {
        let truths = [0.1];
        assert_eq!(rmse(&[vec![0.1], vec![0.1]], &truths).unwrap(), 0.0);
        assert!((rmse(&[vec![0.11]], &truths).unwrap() - 0.01).abs() < 1e-12);
        let v = rmse(&[vec![0.11], vec![0.13]], &truths).unwrap();
        assert!((v - 0.022_360_679_774_997_9).abs() < 1e-12);
        assert!(matches!(rmse(&[], &truths), Err(Error::NoSuccessfulTrials)));
    }

    #[test]
    fn rank_pairing() {
        let v = rmse(&[vec![0.3, -0.1]], &[-0.1, 0.3]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn default_doa_grid() {
        assert_eq!(default_doas(2).unwrap(), vec![-0.45, 0.45]);
        let d = default_doas(40).unwrap();
        assert!((d[1] - (-0.45 + 0.9 / 39.0)).abs() < 1e-15);
        let d = default_doas(35).unwrap();
        assert_eq!(d.len(), 35);
        assert!((d[34] - d[33] - 0.9 / 34.0).abs() < 1e-12);
        assert!(matches!(
            default_doas(1),
            Err(Error::KTooSmall { k: 1, min: 2 })
        ));
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for f in 0..6 {
            for a in 0..7 {
                for t in 0..100 {
                    assert!(seen.insert(trial_seed(1, f, a, t)));
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        let fam = vec![FamilyAtN {
            family: ArrayFamily::Proposed(ProposedKind::FourRType1),
            n: 18,
        }];
        let mut s = SweepSpec::new(fam, SweepAxis::SnrDb, vec![]);
        assert!(s.validate().is_err());
        s.axis_values = vec![0.0, 0.0];
        assert!(s.validate().is_err());
        s.axis_values = vec![0.0, 5.0];
        assert!(s.validate().is_ok());
        s.trials = 0;
        assert!(s.validate().is_err());
        s.trials = 1;
        s.axis = SweepAxis::Snapshots;
        s.axis_values = vec![10.5];
        assert!(s.validate().is_err());
        s.axis = SweepAxis::C1Magnitude;
        s.axis_values = vec![1.0];
        assert!(s.validate().is_err());
    }

    #[test]
    fn small_sweep_is_deterministic_across_thread_counts() {
        let fam = vec![FamilyAtN {
            family: ArrayFamily::Proposed(ProposedKind::FourRType1),
            n: 18,
        }];
        let mut spec = SweepSpec::new(fam, SweepAxis::SnrDb, vec![0.0, 10.0]);
        spec.trials = 4;
        spec.source_count = 6;
        spec.snapshots = 200;
        spec.grid_points = 2001;
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_sweep(&spec).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a, b);
        let mut csv_a = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        let mut csv_b = Vec::new();
        b.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        assert_eq!(a.rows.len(), 2);
        assert!(a.rows.iter().all(|r| r.rmse.is_none_or(|v| v >= 0.0)));
    }

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[1.0, 5.0, 9.0]) - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rmse_non_negative_and_zero_iff_exact(
            errs in prop::collection::vec(prop::collection::vec(-0.01f64..0.01, 3), 1..10)
        ) {
            let truths = [-0.3, 0.0, 0.3];
            let est: Vec<Vec<f64>> = errs.iter()
                .map(|e| truths.iter().zip(e).map(|(t, d)| t + d).collect())
                .collect();
            let v = rmse(&est, &truths).unwrap();
            prop_assert!(v >= 0.0);
            let all_zero = est.iter().all(|e| e.as_slice() == truths.as_slice());
            prop_assert_eq!(v == 0.0, all_zero);
        }
    }
}
