//! Banded Toeplitz mutual-coupling model.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::SensorArray;

/// Coupling coefficients `c_0 = 1`, `c_l = c_1 e^{-j(l-1) step} / l` for
/// `1 <= l <= band`, zero beyond the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingModel {
    #[serde(alias = "c1_mag")]
    pub c1_magnitude: f64,
    pub c1_phase: f64,
    pub band: usize,
    #[serde(alias = "step")]
    pub decay_phase_step: f64,
}

impl Default for CouplingModel {
    fn default() -> Self {
        Self {
            c1_magnitude: 0.3,
            c1_phase: PI / 3.0,
            band: 100,
            decay_phase_step: PI / 8.0,
        }
    }
}

impl CouplingModel {
    pub fn with_c1_magnitude(self, c1_magnitude: f64) -> Self {
        Self {
            c1_magnitude,
            ..self
        }
    }

    pub fn c1(&self) -> Complex64 {
        Complex64::from_polar(self.c1_magnitude, self.c1_phase)
    }

    pub fn coefficient(&self, lag: usize) -> Complex64 {
        match lag {
            0 => Complex64::new(1.0, 0.0),
            l if l <= self.band => {
                self.c1() * Complex64::from_polar(1.0, -((l - 1) as f64) * self.decay_phase_step)
                    / l as f64
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub entries: DMatrix<Complex64>,
    pub model: CouplingModel,
}

impl CouplingMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// `C[i][j] = c_{|p_i - p_j|}`; positions need not be normalized.
pub fn coupling_matrix_from_positions(positions: &[i64], model: &CouplingModel) -> CouplingMatrix {
    let n = positions.len();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        model.coefficient(positions[i].abs_diff(positions[j]) as usize)
    });
    CouplingMatrix {
        entries,
        model: *model,
    }
}

pub fn build_coupling_matrix(arr: &SensorArray, model: &CouplingModel) -> CouplingMatrix {
    let positions: Vec<i64> = arr.positions().iter().map(|&p| p as i64).collect();
    coupling_matrix_from_positions(&positions, model)
}

/// Off-diagonal share of the Frobenius norm, `||C - diag C||_F / ||C||_F`.
pub fn coupling_leakage(c: &CouplingMatrix) -> f64 {
    let total: f64 = c.entries.iter().map(|z| z.norm_sqr()).sum();
    let diag: f64 = c.entries.diagonal().iter().map(|z| z.norm_sqr()).sum();
    ((total - diag) / total).sqrt()
}

/// Magnitude grid as `row,col,magnitude` CSV.
pub fn write_magnitude_csv<W: Write>(c: &CouplingMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "magnitude"])?;
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            w.write_record([
                i.to_string(),
                j.to_string(),
                format!("{:.12}", c.entries[(i, j)].norm()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ArrayFamily, ProposedKind, ReferenceKind};
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn coefficients() {
        let m = CouplingModel::default();
        assert!((m.coefficient(0) - Complex64::new(1.0, 0.0)).norm() < EPS);
        assert!((m.coefficient(1) - Complex64::from_polar(0.3, PI / 3.0)).norm() < EPS);
        let c2 = Complex64::from_polar(0.15, PI / 3.0 - PI / 8.0);
        assert!((m.coefficient(2) - c2).norm() < EPS);
        assert_eq!(m.coefficient(101), Complex64::new(0.0, 0.0));
        for l in 1..=m.band {
            assert!(m.coefficient(l + 1).norm() < m.coefficient(l).norm());
            // |c_k / c_l| = l / k.
            assert!((m.coefficient(l).norm() * l as f64 - 0.3).abs() < EPS);
        }
    }

    #[test]
    fn small_matrices() {
        let m = CouplingModel::default();
        let c = build_coupling_matrix(&SensorArray::ula(2).unwrap(), &m);
        assert_eq!(c.entries[(0, 1)], m.coefficient(1));
        assert_eq!(c.entries[(1, 0)], m.coefficient(1));
        assert_eq!(c.entries[(0, 0)], Complex64::new(1.0, 0.0));

        let c = build_coupling_matrix(&SensorArray::new(vec![0, 200]).unwrap(), &m);
        assert_eq!(c.entries, DMatrix::identity(2, 2));
        assert_eq!(coupling_leakage(&c), 0.0);
    }

    #[test]
    fn unit_lag_pair_dominates() {
        let arr = ArrayFamily::Proposed(ProposedKind::FourRType1)
            .generate(23)
            .unwrap();
        let c = build_coupling_matrix(&arr, &CouplingModel::default());
        let mut best = (0.0, 0, 0);
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let v = c.entries[(i, j)].norm();
                if i != j && v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        let p = arr.positions();
        assert_eq!(p[best.1].abs_diff(p[best.2]), 1);
    }

    #[test]
    fn leakage_values() {
        let m = CouplingModel::default();
        let lc = |f: ArrayFamily, n| {
            coupling_leakage(&build_coupling_matrix(&f.generate(n).unwrap(), &m))
        };
        let four_r = ArrayFamily::Proposed(ProposedKind::FourRType1);
        let sna = ArrayFamily::Reference(ReferenceKind::SuperNested);
        assert!((lc(four_r, 23) - 0.1612).abs() <= 5e-4);
        assert!((lc(sna, 36) - 0.1988).abs() <= 5e-4);
    }

    #[test]
    fn csv_grid() {
        let c = build_coupling_matrix(&SensorArray::ula(2).unwrap(), &CouplingModel::default());
        let mut buf = Vec::new();
        write_magnitude_csv(&c, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert!(s.contains("0,1,0.300000000000"));
    }

    proptest! {
        #[test]
        fn leakage_translation_invariant(
            set in prop::collection::btree_set(0i64..300, 2..25),
            shift in -1000i64..1000,
        ) {
            let p: Vec<i64> = set.into_iter().collect();
            let q: Vec<i64> = p.iter().map(|x| x + shift).collect();
            let m = CouplingModel::default();
            let a = coupling_leakage(&coupling_matrix_from_positions(&p, &m));
            let b = coupling_leakage(&coupling_matrix_from_positions(&q, &m));
            prop_assert!((a - b).abs() < 1e-14);
            prop_assert!((0.0..1.0).contains(&a));
        }
    }
}
