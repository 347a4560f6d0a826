//! Direction-of-arrival estimation with co-array MUSIC.

mod music;
pub mod scenario;
mod signal;

pub use music::{
    coarray_autocorrelation, music_spectrum, music_value_direct, noise_projector, pick_peaks,
    pick_peaks_refined, spatially_smoothed, toeplitz_augment, AutocorrVector, DoaEstimates,
    MusicConfig, Spectrum,
};
pub use signal::{
    noise_power_for_snr, sample_covariance, simulate_snapshots, steering_vector, true_covariance,
    CovarianceMatrix, SnapshotSet, SourceScenario,
};

use crate::coarray::{central_ula, difference_coarray};
use crate::coupling::CouplingMatrix;
use crate::error::Result;
use crate::geometry::SensorArray;

/// Virtual-ULA covariance from any array covariance, over the central
/// hole-free segment of the co-array.
pub fn virtual_covariance(
    r: &CovarianceMatrix,
    arr: &SensorArray,
    use_toeplitz_augmentation: bool,
) -> Result<CovarianceMatrix> {
    let z = coarray_autocorrelation(r, arr)?;
    let lu = central_ula(&difference_coarray(arr));
    if use_toeplitz_augmentation {
        toeplitz_augment(&z, lu)
    } else {
        spatially_smoothed(&z, lu)
    }
}

/// Spectrum and peaks from one simulated data record.
///
/// The coupling matrix only shapes the simulated data; the estimator
/// assumes the ideal manifold.
pub fn estimate_with_spectrum(
    arr: &SensorArray,
    scenario: &SourceScenario,
    snapshots: usize,
    coupling: Option<&CouplingMatrix>,
    cfg: &MusicConfig,
    seed: u64,
) -> Result<(Spectrum, DoaEstimates)> {
    cfg.validate()?;
    let snaps = simulate_snapshots(arr, scenario, snapshots, coupling, seed)?;
    let r = sample_covariance(&snaps);
    let raug = virtual_covariance(&r, arr, cfg.use_toeplitz_augmentation)?;
    let spec = music_spectrum(&raug, cfg)?;
    let est = if cfg.parabolic_refinement {
        pick_peaks_refined(&spec, cfg.source_count)
    } else {
        pick_peaks(&spec, cfg.source_count)
    };
    Ok((spec, est))
}

pub fn estimate_doas(
    arr: &SensorArray,
    scenario: &SourceScenario,
    snapshots: usize,
    coupling: Option<&CouplingMatrix>,
    cfg: &MusicConfig,
    seed: u64,
) -> Result<DoaEstimates> {
    estimate_with_spectrum(arr, scenario, snapshots, coupling, cfg, seed).map(|(_, est)| est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{build_coupling_matrix, CouplingModel};
    use crate::geometry::{ArrayFamily, ProposedKind};

    #[test]
    fn ula_single_source() {
        let arr = SensorArray::ula(8).unwrap();
        let s = SourceScenario::with_snr(vec![0.1], 20.0).unwrap();
        let cfg = MusicConfig::new(1);
        let est = estimate_doas(&arr, &s, 1000, None, &cfg, 11).unwrap();
        assert!(est.complete);
        assert!((est.estimates[0] - 0.1).abs() <= 2.0 / cfg.grid_points as f64);
    }

    #[test]
    fn deterministic_given_seed() {
        let arr = ArrayFamily::Proposed(ProposedKind::FourRType1)
            .generate(18)
            .unwrap();
        let s = SourceScenario::with_snr(vec![-0.3, 0.0, 0.25], 0.0).unwrap();
        let c = build_coupling_matrix(&arr, &CouplingModel::default());
        let cfg = MusicConfig::new(3);
        let a = estimate_with_spectrum(&arr, &s, 200, Some(&c), &cfg, 5).unwrap();
        let b = estimate_with_spectrum(&arr, &s, 200, Some(&c), &cfg, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn smoothing_and_augmentation_agree() {
        let arr = ArrayFamily::Proposed(ProposedKind::FourRType1)
            .generate(18)
            .unwrap();
        let s = SourceScenario::with_snr(vec![-0.3, 0.0, 0.25], 10.0).unwrap();
        let mut cfg = MusicConfig::new(3);
        let a = estimate_doas(&arr, &s, 500, None, &cfg, 9).unwrap();
        cfg.use_toeplitz_augmentation = false;
        let b = estimate_doas(&arr, &s, 500, None, &cfg, 9).unwrap();
        assert_eq!(a.complete, b.complete);
        for (x, y) in a.estimates.iter().zip(&b.estimates) {
            assert!((x - y).abs() <= 1.0 / cfg.grid_points as f64);
        }
    }

    #[test]
    fn grid_refinement_consistency() {
        let arr = ArrayFamily::Proposed(ProposedKind::FourRType1)
            .generate(18)
            .unwrap();
        let s = SourceScenario::with_snr(vec![-0.21, 0.07, 0.33], 5.0).unwrap();
        let coarse = MusicConfig {
            grid_points: 2001,
            ..MusicConfig::new(3)
        };
        let fine = MusicConfig {
            grid_points: 4002,
            ..coarse
        };
        let a = estimate_doas(&arr, &s, 500, None, &coarse, 2).unwrap();
        let b = estimate_doas(&arr, &s, 500, None, &fine, 2).unwrap();
        for (x, y) in a.estimates.iter().zip(&b.estimates) {
            assert!((x - y).abs() <= 1.0 / 2001.0 + 1e-12);
        }
    }
}
