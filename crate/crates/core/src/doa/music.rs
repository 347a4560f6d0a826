//! Co-array MUSIC: lag-domain autocorrelation, virtual ULA covariance,
//! pseudo-spectrum and peak selection.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::signal::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

/// Redundancy-averaged covariance per co-array lag in `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrVector {
    aperture: usize,
    /// Indexed by `lag + aperture`; `None` marks a hole.
    values: Vec<Option<Complex64>>,
}

impl AutocorrVector {
    pub fn aperture(&self) -> usize {
        self.aperture
    }

    pub fn value(&self, lag: i64) -> Option<Complex64> {
        let idx = lag + self.aperture as i64;
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied().flatten()
    }

    pub fn require(&self, lag: i64) -> Result<Complex64> {
        self.value(lag).ok_or(Error::MissingLag(lag))
    }

    /// Lags with no contributing sensor pair.
    pub fn missing_lags(&self) -> Vec<i64> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| i as i64 - self.aperture as i64)
            .collect()
    }
}

/// `z(d)` = mean of `R[i][j]` over ordered pairs with `p_i - p_j = d`.
///
/// Positive lags average `R[i][j]` and `conj(R[j][i])`; negative lags are
/// their conjugates, so `z(-d) = conj(z(d))` holds exactly.
pub fn coarray_autocorrelation(r: &CovarianceMatrix, arr: &SensorArray) -> Result<AutocorrVector> {
    let n = arr.len();
    if r.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.dim(),
        });
    }
    let p = arr.positions();
    let l = arr.aperture();
    let m = r.entries();
    let mut sums = vec![Complex64::new(0.0, 0.0); l + 1];
    let mut counts = vec![0usize; l + 1];
    for i in 0..n {
        for j in 0..=i {
            let d = p[i] - p[j];
            sums[d] += m[(i, j)] + m[(j, i)].conj();
            counts[d] += 2;
        }
    }
    let positive: Vec<Option<Complex64>> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    let mut values = Vec::with_capacity(2 * l + 1);
    values.extend(positive[1..].iter().rev().map(|v| v.map(|z| z.conj())));
    values.push(positive[0].map(|z| Complex64::new(z.re, 0.0)));
    values.extend(positive[1..].iter().copied());
    Ok(AutocorrVector {
        aperture: l,
        values,
    })
}

/// Hermitian Toeplitz matrix with `entry(p, q) = z(p - q)`, `0 <= p, q <= L_u`.
pub fn toeplitz_augment(z: &AutocorrVector, halfwidth: usize) -> Result<CovarianceMatrix> {
    let lags: Vec<Complex64> = (0..=halfwidth as i64)
        .map(|d| z.require(d))
        .collect::<Result<_>>()?;
    let m = halfwidth + 1;
    let entries = DMatrix::from_fn(m, m, |p, q| {
        if p >= q {
            lags[p - q]
        } else {
            lags[q - p].conj()
        }
    });
    CovarianceMatrix::new(entries)
}

/// Average of the outer products of the `L_u + 1` shifted subvectors of `z`,
/// which equals `T^2 / (L_u + 1)` for the Toeplitz matrix `T`.
pub fn spatially_smoothed(z: &AutocorrVector, halfwidth: usize) -> Result<CovarianceMatrix> {
    let t = toeplitz_augment(z, halfwidth)?.into_entries();
    let m = (halfwidth + 1) as f64;
    CovarianceMatrix::new(&t * t.adjoint() / Complex64::new(m, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusicConfig {
    pub grid_points: usize,
    pub source_count: usize,
    pub use_toeplitz_augmentation: bool,
    /// Three-point parabolic interpolation around each selected peak.
    pub parabolic_refinement: bool,
}

impl MusicConfig {
    pub const DEFAULT_GRID: usize = 10_001;

    pub fn new(source_count: usize) -> Self {
        Self {
            grid_points: Self::DEFAULT_GRID,
            source_count,
            use_toeplitz_augmentation: true,
            parabolic_refinement: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.source_count == 0 {
            return Err(Error::KTooSmall { k: 0, min: 1 });
        }
        if self.grid_points < 4 * self.source_count {
            return Err(Error::InvalidScenario(format!(
                "grid of {} points is too coarse for {} sources",
                self.grid_points, self.source_count
            )));
        }
        Ok(())
    }

    /// `theta_i = -1/2 + i / G`.
    pub fn grid(&self) -> Vec<f64> {
        let g = self.grid_points as f64;
        (0..self.grid_points).map(|i| -0.5 + i as f64 / g).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// Noise-subspace projector from the `M - K` smallest eigenpairs.
pub fn noise_projector(r: &CovarianceMatrix, k: usize) -> Result<DMatrix<Complex64>> {
    let m = r.dim();
    if k >= m {
        return Err(Error::KTooLarge { k, dim: m });
    }
    let eig = r
        .entries()
        .clone()
        .try_symmetric_eigen(1e-13, 100_000)
        .ok_or(Error::RankDeficient)?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::RankDeficient);
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let noise_cols: Vec<DVector<Complex64>> = order[..m - k]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let en = DMatrix::from_columns(&noise_cols);
    Ok(&en * en.adjoint())
}

/// `c_d = sum_p proj[p][p + d]` for `d` in `[-(M-1), M-1]`, indexed by `d + M - 1`,
/// so that `a^H proj a = sum_d c_d e^{j 2 pi theta d}`.
fn diagonal_sums(proj: &DMatrix<Complex64>) -> Vec<Complex64> {
    let m = proj.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * m - 1];
    for p in 0..m {
        for q in 0..m {
            c[q + m - 1 - p] += proj[(p, q)];
        }
    }
    c
}

/// Evaluates `1 / (a^H proj a)` on the uniform grid with one inverse FFT.
///
/// On `theta_i = -1/2 + i/G` the quadratic form is
/// `sum_d c_d (-1)^d e^{j 2 pi i d / G}`; folding lags modulo `G` keeps it
/// exact even when `2M - 1 > G`.
fn spectrum_on_grid(proj: &DMatrix<Complex64>, g: usize) -> Vec<f64> {
    let m = proj.nrows();
    let c = diagonal_sums(proj);
    let mut bins = vec![Complex64::new(0.0, 0.0); g];
    for (idx, &cd) in c.iter().enumerate() {
        let d = idx as i64 - (m as i64 - 1);
        let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        bins[d.rem_euclid(g as i64) as usize] += cd * sign;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(g).process(&mut bins);
    let floor = m as f64 * 1e-20;
    bins.iter().map(|q| 1.0 / q.re.max(floor)).collect()
}

/// Direct evaluation of `1 / (a^H proj a)` at one DOA.
pub fn music_value_direct(proj: &DMatrix<Complex64>, theta: f64) -> f64 {
    let m = proj.nrows();
    let a = DVector::from_fn(m, |p, _| {
        Complex64::from_polar(1.0, 2.0 * PI * p as f64 * theta)
    });
    let q = (a.adjoint() * proj * &a)[(0, 0)].re;
    1.0 / q.max(m as f64 * 1e-20)
}

/// MUSIC pseudo-spectrum of a virtual-ULA covariance over sensors `0..M`.
pub fn music_spectrum(r: &CovarianceMatrix, cfg: &MusicConfig) -> Result<Spectrum> {
    cfg.validate()?;
    let proj = noise_projector(r, cfg.source_count)?;
    Ok(Spectrum {
        grid: cfg.grid(),
        values: spectrum_on_grid(&proj, cfg.grid_points),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoaEstimates {
    pub estimates: Vec<f64>,
    pub complete: bool,
}

/// Local-maximum indices: strictly above the left neighbour and, after any
/// plateau, strictly above the right neighbour. A plateau reports its
/// leftmost index; the two endpoints never qualify.
fn local_maxima(v: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    let n = v.len();
    let mut i = 1;
    while i + 1 < n {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                peaks.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn parabolic_offset(y0: f64, y1: f64, y2: f64) -> f64 {
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < f64::MIN_POSITIVE || !denom.is_finite() {
        0.0
    } else {
        (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5)
    }
}

fn select_peaks(spec: &Spectrum, k: usize, refine: bool) -> DoaEstimates {
    let mut peaks = local_maxima(&spec.values);
    peaks.sort_by(|&a, &b| spec.values[b].total_cmp(&spec.values[a]).then(a.cmp(&b)));
    let complete = peaks.len() >= k;
    peaks.truncate(k);
    let step = if spec.grid.len() > 1 {
        spec.grid[1] - spec.grid[0]
    } else {
        0.0
    };
    let mut estimates: Vec<f64> = peaks
        .iter()
        .map(|&i| {
            let theta = spec.grid[i];
            if refine {
                let v = &spec.values;
                theta + step * parabolic_offset(v[i - 1], v[i], v[i + 1])
            } else {
                theta
            }
        })
        .collect();
    estimates.sort_by(f64::total_cmp);
    DoaEstimates {
        estimates,
        complete,
    }
}

/// Top-`k` local maxima by height, returned in ascending DOA order.
pub fn pick_peaks(spec: &Spectrum, k: usize) -> DoaEstimates {
    select_peaks(spec, k, false)
}

pub fn pick_peaks_refined(spec: &Spectrum, k: usize) -> DoaEstimates {
    select_peaks(spec, k, true)
}
