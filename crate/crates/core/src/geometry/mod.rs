//! Sensor array geometry.
//!
//! Arrays live on the integer lattice in half-wavelength units: a position
//! `p` places a sensor at `p * lambda / 2`. Every array is normalized so its
//! first sensor sits at 0, which makes the last position the aperture.

mod family;
pub mod io;
mod pattern;
mod proposed;
mod reference;

pub use family::ArrayFamily;
pub use pattern::{check_restriction, decompose_pattern, PatternDecomposition, RestrictionClass};
pub use proposed::{generate_proposed, resolve_params, BaseClass, ProposedFamily, ProposedKind};
pub use reference::{generate_reference, ReferenceFamily, ReferenceKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, zero-based integer sensor positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SensorArray {
    positions: Vec<usize>,
}

impl SensorArray {
    /// Validates that `positions` start at 0, are strictly increasing and
    /// hold at least two sensors.
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::InvalidArray(format!(
                "need at least 2 sensors, got {}",
                positions.len()
            )));
        }
        if positions[0] != 0 {
            return Err(Error::InvalidArray(format!(
                "first position must be 0, got {}",
                positions[0]
            )));
        }
        if let Some(w) = positions.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArray(format!(
                "positions must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { positions })
    }

    /// Sorts arbitrary integer positions and shifts them so the smallest is 0.
    pub fn normalized(positions: &[i64]) -> Result<Self> {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        let min = *sorted
            .first()
            .ok_or_else(|| Error::InvalidArray("no positions".into()))?;
        let shifted = sorted.iter().map(|&p| (p - min) as usize).collect();
        Self::new(shifted)
    }

    /// Uniform linear array `{0, 1, ..., n-1}`.
    pub fn ula(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; a valid array has at least two sensors.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn aperture(&self) -> usize {
        *self
            .positions
            .last()
            .expect("array has at least two sensors")
    }

    pub fn spacings(&self) -> SpacingArray {
        spacings_from_positions(self)
    }

    /// Reflection `L - p`, which has the same difference co-array.
    pub fn mirrored(&self) -> Self {
        let l = self.aperture();
        let mut positions: Vec<usize> = self.positions.iter().map(|&p| l - p).collect();
        positions.reverse();
        Self { positions }
    }

    /// Array with the sensor at `index` removed, renormalized to start at 0.
    pub fn without_sensor(&self, index: usize) -> Result<Self> {
        let rest: Vec<i64> = self
            .positions
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, &p)| p as i64)
            .collect();
        Self::normalized(&rest)
    }
}

impl TryFrom<Vec<usize>> for SensorArray {
    type Error = Error;

    fn try_from(positions: Vec<usize>) -> Result<Self> {
        Self::new(positions)
    }
}

impl From<SensorArray> for Vec<usize> {
    fn from(arr: SensorArray) -> Self {
        arr.positions
    }
}

/// Inter-sensor spacings `d_i = s_{i+1} - s_i`, all strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SpacingArray {
    spacings: Vec<usize>,
}

impl SpacingArray {
    pub fn new(spacings: Vec<usize>) -> Result<Self> {
        if spacings.is_empty() {
            return Err(Error::EmptySpacings);
        }
        if let Some(index) = spacings.iter().position(|&d| d == 0) {
            return Err(Error::NonPositiveSpacing { index, value: 0 });
        }
        Ok(Self { spacings })
    }

    /// Accepts signed input so that callers parsing untrusted data get a
    /// `NonPositiveSpacing` error rather than a wrap-around.
    pub fn from_signed(spacings: &[i64]) -> Result<Self> {
        if spacings.is_empty() {
            return Err(Error::EmptySpacings);
        }
        if let Some((index, &value)) = spacings.iter().enumerate().find(|(_, &d)| d < 1) {
            return Err(Error::NonPositiveSpacing { index, value });
        }
        Ok(Self {
            spacings: spacings.iter().map(|&d| d as usize).collect(),
        })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.spacings
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    /// Always false; a valid spacing array is non-empty.
    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn total(&self) -> usize {
        self.spacings.iter().sum()
    }
}

impl TryFrom<Vec<usize>> for SpacingArray {
    type Error = Error;

    fn try_from(spacings: Vec<usize>) -> Result<Self> {
        Self::new(spacings)
    }
}

impl From<SpacingArray> for Vec<usize> {
    fn from(d: SpacingArray) -> Self {
        d.spacings
    }
}

/// Prefix sums of the spacings, with a leading 0.
pub fn positions_from_spacings(spacings: &SpacingArray) -> SensorArray {
    let mut positions = Vec::with_capacity(spacings.len() + 1);
    let mut acc = 0;
    positions.push(acc);
    for &d in spacings.as_slice() {
        acc += d;
        positions.push(acc);
    }
    SensorArray { positions }
}

pub fn spacings_from_positions(arr: &SensorArray) -> SpacingArray {
    SpacingArray {
        spacings: arr.positions.windows(2).map(|w| w[1] - w[0]).collect(),
    }
}

/// Expands `(value, count)` runs into a flat spacing list. Zero counts are
/// skipped, which is how closed forms with an exponent of 0 collapse.
pub(crate) fn expand_runs(runs: &[(usize, usize)]) -> Vec<usize> {
    runs.iter()
        .flat_map(|&(value, count)| std::iter::repeat_n(value, count))
        .collect()
}
