//! Narrowband far-field signal model and covariance estimation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingMatrix;
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

const HERMITIAN_TOL: f64 = 1e-10;

/// Uncorrelated far-field sources in normalized DOA units (`sin(theta) / 2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioRepr", into = "ScenarioRepr")]
pub struct SourceScenario {
    doas: Vec<f64>,
    powers: Vec<f64>,
    noise_power: f64,
}

#[derive(Serialize, Deserialize)]
struct ScenarioRepr {
    doas: Vec<f64>,
    powers: Vec<f64>,
    noise_power: f64,
}

impl TryFrom<ScenarioRepr> for SourceScenario {
    type Error = Error;
    fn try_from(r: ScenarioRepr) -> Result<Self> {
        Self::new(r.doas, r.powers, r.noise_power)
    }
}

impl From<SourceScenario> for ScenarioRepr {
    fn from(s: SourceScenario) -> Self {
        Self {
            doas: s.doas,
            powers: s.powers,
            noise_power: s.noise_power,
        }
    }
}

impl SourceScenario {
    pub fn new(doas: Vec<f64>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if doas.is_empty() {
            return bad("at least one source is required".into());
        }
        if doas.len() != powers.len() {
            return bad(format!("{} DOAs but {} powers", doas.len(), powers.len()));
        }
        if let Some(d) = doas.iter().find(|d| !(-0.5..=0.5).contains(*d)) {
            return bad(format!("DOA {d} outside [-0.5, 0.5]"));
        }
        if doas.windows(2).any(|w| w[1] <= w[0]) {
            return bad("DOAs must be strictly increasing".into());
        }
        if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return bad(format!("source power {p} must be positive"));
        }
        if !(noise_power.is_finite() && noise_power >= 0.0) {
            return bad(format!("noise power {noise_power} must be non-negative"));
        }
        Ok(Self {
            doas,
            powers,
            noise_power,
        })
    }

    /// Unit-power sources with noise power `10^(-snr/10)`.
    pub fn with_snr(doas: Vec<f64>, snr_db: f64) -> Result<Self> {
        let powers = vec![1.0; doas.len()];
        Self::new(doas, powers, noise_power_for_snr(snr_db))
    }

    pub fn doas(&self) -> &[f64] {
        &self.doas
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn source_count(&self) -> usize {
        self.doas.len()
    }
}

pub fn noise_power_for_snr(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

pub fn steering_vector(arr: &SensorArray, theta: f64) -> DVector<Complex64> {
    DVector::from_iterator(
        arr.len(),
        arr.positions()
            .iter()
            .map(|&p| Complex64::from_polar(1.0, 2.0 * PI * p as f64 * theta)),
    )
}

/// `N x K` steering matrix, optionally premultiplied by the coupling matrix.
fn manifold(
    arr: &SensorArray,
    doas: &[f64],
    coupling: Option<&CouplingMatrix>,
) -> Result<DMatrix<Complex64>> {
    let n = arr.len();
    let mut a = DMatrix::zeros(n, doas.len());
    for (k, &theta) in doas.iter().enumerate() {
        a.set_column(k, &steering_vector(arr, theta));
    }
    match coupling {
        None => Ok(a),
        Some(c) if c.dim() == n => Ok(&c.entries * a),
        Some(c) => Err(Error::DimensionMismatch {
            expected: n,
            got: c.dim(),
        }),
    }
}

/// Hermitian covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<Complex64>,
}

impl CovarianceMatrix {
    /// Validates squareness and Hermitian symmetry, then symmetrizes exactly.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let scale = entries
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let asym = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            / scale;
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::hermitian_part(entries))
    }

    fn hermitian_part(entries: DMatrix<Complex64>) -> Self {
        let h = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        Self { entries: h }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// Smallest eigenvalue is at least `-tol * trace`.
    pub fn is_psd(&self, tol: f64) -> bool {
        match self.entries.clone().try_symmetric_eigen(1e-14, 10_000) {
            Some(e) => e.eigenvalues.min() >= -tol * self.trace().abs(),
            None => false,
        }
    }
}

/// Exact covariance `sum_k p_k a_k a_k^H + noise I`, with `a_k` replaced by
/// `C a_k` when coupling is present.
pub fn true_covariance(
    arr: &SensorArray,
    scenario: &SourceScenario,
    coupling: Option<&CouplingMatrix>,
) -> Result<CovarianceMatrix> {
    let a = manifold(arr, scenario.doas(), coupling)?;
    let p = DMatrix::from_diagonal(&DVector::from_iterator(
        scenario.source_count(),
        scenario.powers().iter().map(|&p| Complex64::new(p, 0.0)),
    ));
    let n = arr.len();
    let r = &a * p * a.adjoint()
        + DMatrix::<Complex64>::identity(n, n) * Complex64::new(scenario.noise_power(), 0.0);
    Ok(CovarianceMatrix::hermitian_part(r))
}

/// Received data, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    pub data: DMatrix<Complex64>,
}

impl SnapshotSet {
    pub fn snapshot_count(&self) -> usize {
        self.data.ncols()
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng, std: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * std, im * std)
}

/// Draws `x(t) = C A s(t) + n(t)` with circular complex Gaussian sources and
/// noise. Source samples are drawn before noise samples.
pub fn simulate_snapshots(
    arr: &SensorArray,
    scenario: &SourceScenario,
    snapshots: usize,
    coupling: Option<&CouplingMatrix>,
    seed: u64,
) -> Result<SnapshotSet> {
    if snapshots == 0 {
        return Err(Error::InvalidScenario(
            "snapshot count must be at least 1".into(),
        ));
    }
    let a = manifold(arr, scenario.doas(), coupling)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = scenario.source_count();
    let source_std: Vec<f64> = scenario.powers().iter().map(|p| (p / 2.0).sqrt()).collect();
    let s = DMatrix::from_fn(k, snapshots, |i, _| {
        complex_gaussian(&mut rng, source_std[i])
    });
    let mut data = a * s;
    let noise_std = (scenario.noise_power() / 2.0).sqrt();
    if noise_std > 0.0 {
        for z in data.iter_mut() {
            *z += complex_gaussian(&mut rng, noise_std);
        }
    }
    Ok(SnapshotSet { data })
}

/// `(1/T) sum_t x(t) x(t)^H`.
pub fn sample_covariance(snaps: &SnapshotSet) -> CovarianceMatrix {
    let t = snaps.snapshot_count() as f64;
    let r = &snaps.data * snaps.data.adjoint() / Complex64::new(t, 0.0);
    CovarianceMatrix::hermitian_part(r)
}
