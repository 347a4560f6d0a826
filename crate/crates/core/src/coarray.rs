//! Difference co-array, weight function and derived figures of merit.

use std::io::Write;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{ArrayFamily, ProposedFamily, ReferenceFamily, SensorArray};

/// Weight function over non-negative lags `0..=aperture`.
///
/// Negative lags mirror positive ones, so only `d >= 0` is stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffCoarray {
    n: usize,
    weights: Vec<usize>,
}

impl DiffCoarray {
    /// Builds a co-array from a dense weight table. Used by the oracle,
    /// which must not share the enumeration below.
    pub fn from_weights(n: usize, weights: Vec<usize>) -> Result<Self> {
        if weights.len() < 2 || weights[0] != n || *weights.last().unwrap() == 0 {
            return Err(Error::InvalidArray("malformed weight table".into()));
        }
        Ok(Self { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn aperture(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// `w(d)`; zero beyond the aperture.
    pub fn weight(&self, lag: usize) -> usize {
        self.weights.get(lag).copied().unwrap_or(0)
    }

    pub fn weight_signed(&self, lag: i64) -> usize {
        self.weight(lag.unsigned_abs() as usize)
    }

    /// `(w(1), w(2), w(3))`.
    pub fn small_lag_weights(&self) -> [i64; 3] {
        [1, 2, 3].map(|d| self.weight(d) as i64)
    }

    /// Ordered-pair count over all lags in `[-L, L]`; equals `n^2`.
    pub fn total_mass(&self) -> usize {
        self.weights[0] + 2 * self.weights[1..].iter().sum::<usize>()
    }

    pub fn is_hole_free(&self) -> bool {
        central_ula(self) == self.aperture()
    }
}

pub fn difference_coarray(arr: &SensorArray) -> DiffCoarray {
    let p = arr.positions();
    let mut weights = vec![0usize; arr.aperture() + 1];
    weights[0] = p.len();
    for (i, &a) in p.iter().enumerate() {
        for &b in &p[i + 1..] {
            weights[b - a] += 1;
        }
    }
    DiffCoarray {
        n: p.len(),
        weights,
    }
}

/// Largest `L_u` with `w(d) >= 1` for every `0 <= d <= L_u`.
pub fn central_ula(dc: &DiffCoarray) -> usize {
    dc.weights
        .iter()
        .position(|&w| w == 0)
        .map_or(dc.aperture(), |hole| hole - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarrayReport {
    pub n: usize,
    pub aperture: usize,
    pub udof: usize,
    pub hole_free: bool,
    pub central_ula_halfwidth: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub redundancy_ratio: Ratio<u64>,
    pub weights: [i64; 3],
}

impl CoarrayReport {
    pub fn redundancy_f64(&self) -> f64 {
        *self.redundancy_ratio.numer() as f64 / *self.redundancy_ratio.denom() as f64
    }
}

fn serialize_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Repr {
        numer: u64,
        denom: u64,
        value: f64,
    }
    Repr {
        numer: *r.numer(),
        denom: *r.denom(),
        value: *r.numer() as f64 / *r.denom() as f64,
    }
    .serialize(s)
}

/// `N(N-1) / (2L)` as a reduced fraction.
pub fn redundancy_ratio(arr: &SensorArray) -> Ratio<u64> {
    let n = arr.len() as u64;
    Ratio::new(n * (n - 1), 2 * arr.aperture() as u64)
}

pub fn analyze(arr: &SensorArray) -> CoarrayReport {
    let dc = difference_coarray(arr);
    let lu = central_ula(&dc);
    CoarrayReport {
        n: arr.len(),
        aperture: arr.aperture(),
        udof: 2 * lu + 1,
        hole_free: lu == dc.aperture(),
        central_ula_halfwidth: lu,
        redundancy_ratio: redundancy_ratio(arr),
        weights: dc.small_lag_weights(),
    }
}

/// Closed-form uDOF of a family member.
///
/// Families without a usable closed form fall back to enumeration.
pub fn theoretical_udof(family: ArrayFamily, n: usize) -> Result<usize> {
    match family {
        ArrayFamily::Proposed(kind) => Ok(ProposedFamily::new(kind, n)?.udof()),
        ArrayFamily::Reference(kind) => {
            let fam = ReferenceFamily::new(kind, n)?;
            match fam.published_udof()? {
                Some(v) => Ok(v),
                None => Ok(analyze(&family.generate(n)?).udof),
            }
        }
    }
}

/// Closed-form `(w(1), w(2), w(3))` of a family member.
pub fn theoretical_weights(family: ArrayFamily, n: usize) -> Result<[i64; 3]> {
    match family {
        ArrayFamily::Proposed(kind) => Ok(ProposedFamily::new(kind, n)?.weights()),
        ArrayFamily::Reference(kind) => ReferenceFamily::new(kind, n)?.published_weights(),
    }
}

/// Two-column `lag,weight` CSV over `[-L, L]`.
pub fn write_weights_csv<W: Write>(dc: &DiffCoarray, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lag", "weight"])?;
    let l = dc.aperture() as i64;
    for lag in -l..=l {
        w.write_record([lag.to_string(), dc.weight_signed(lag).to_string()])?;
    }
    w.flush()?;
    Ok(())
}
