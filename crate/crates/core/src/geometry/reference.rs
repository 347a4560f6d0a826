//! Previously published hole-free array families used for comparison.
//!
//! Every generator reproduces its published spacing row. Rows split into
//! sub-cases (parity of N, N mod 4) dispatch internally; an N covered by no
//! sub-case is rejected rather than approximated.

use serde::{Deserialize, Serialize};

use super::{expand_runs, positions_from_spacings, SensorArray, SpacingArray};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReferenceKind {
    Ula,
    Wichmann,
    Bracewell,
    Nested,
    ImprovedNested,
    SuperNested,
    AugmentedNestedI2,
    Misc,
    Type93FourRPlus3,
    Type93FourRPlus1,
    Type93FourR,
    Type10FourRPlus3,
    Type10FourRPlus1A,
    Type10FourRPlus1B,
    Type10FourR,
}

impl ReferenceKind {
    pub const ALL: [ReferenceKind; 15] = [
        ReferenceKind::Ula,
        ReferenceKind::Wichmann,
        ReferenceKind::Bracewell,
        ReferenceKind::Nested,
        ReferenceKind::ImprovedNested,
        ReferenceKind::SuperNested,
        ReferenceKind::AugmentedNestedI2,
        ReferenceKind::Misc,
        ReferenceKind::Type93FourRPlus3,
        ReferenceKind::Type93FourRPlus1,
        ReferenceKind::Type93FourR,
        ReferenceKind::Type10FourRPlus3,
        ReferenceKind::Type10FourRPlus1A,
        ReferenceKind::Type10FourRPlus1B,
        ReferenceKind::Type10FourR,
    ];

    pub fn id(self) -> &'static str {
        use ReferenceKind::*;
        match self {
            Ula => "ula",
            Wichmann => "wichmann",
            Bracewell => "bracewell",
            Nested => "na",
            ImprovedNested => "ina",
            SuperNested => "sna",
            AugmentedNestedI2 => "ana-i2",
            Misc => "misc",
            Type93FourRPlus3 => "type93-4r3",
            Type93FourRPlus1 => "type93-4r1",
            Type93FourR => "type93-4r",
            Type10FourRPlus3 => "type10-4r3",
            Type10FourRPlus1A => "type10-4r1a",
            Type10FourRPlus1B => "type10-4r1b",
            Type10FourR => "type10-4r",
        }
    }

    /// `(k_min, min_r)` for the `N = 6r + k` families, `None` otherwise.
    fn six_r_window(self) -> Option<(i64, i64)> {
        use ReferenceKind::*;
        match self {
            Type93FourRPlus3 | Type10FourRPlus3 => Some((1, 1)),
            Type93FourRPlus1 | Type10FourRPlus1A | Type10FourRPlus1B => Some((-1, 2)),
            Type93FourR => Some((-3, 2)),
            Type10FourR => Some((-3, 3)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReferenceFamily {
    pub kind: ReferenceKind,
    pub n: usize,
}

impl ReferenceFamily {
    pub fn new(kind: ReferenceKind, n: usize) -> Result<Self> {
        let fam = Self { kind, n };
        fam.spacing_runs()?;
        Ok(fam)
    }

    fn unsupported(&self, reason: impl Into<String>) -> Error {
        Error::UnsupportedN {
            family: self.kind.id(),
            n: self.n,
            reason: reason.into(),
        }
    }

    /// `(r, k)` for the `N = 6r + k` families.
    pub fn six_r_params(&self) -> Result<(usize, i64)> {
        let (k_min, min_r) = self
            .kind
            .six_r_window()
            .ok_or_else(|| self.unsupported("family is not parameterized by N = 6r + k"))?;
        let n = self.n as i64;
        let k = (n - k_min).rem_euclid(6) + k_min;
        let r = (n - k) / 6;
        if r < min_r {
            return Err(self.unsupported(format!("requires r >= {min_r}, got r = {r}")));
        }
        Ok((r as usize, k))
    }

    /// Spacing row as `(value, repeat)` runs.
    pub fn spacing_runs(&self) -> Result<Vec<(usize, usize)>> {
        use ReferenceKind::*;
        let n = self.n;
        if n < 2 {
            return Err(self.unsupported("requires n >= 2"));
        }
        let runs = match self.kind {
            Ula => vec![(1, n - 1)],
            Wichmann => {
                if n < 10 || !(n - 4).is_multiple_of(6) {
                    return Err(self.unsupported("requires n = 6r + 4 with r >= 1"));
                }
                let r = (n - 4) / 6;
                vec![
                    (1, r),
                    (2 * r + 2, r + 1),
                    (4 * r + 3, 2 * r + 1),
                    (2 * r + 1, r),
                    (r + 1, 1),
                    (1, r),
                ]
            }
            Bracewell => {
                if n < 4 {
                    return Err(self.unsupported("requires n >= 4"));
                }
                if n.is_multiple_of(2) {
                    let m = n / 2;
                    vec![(1, m - 1), (m + 1, 1), (m, m - 1)]
                } else {
                    let m = (n - 1) / 2;
                    vec![(1, m), (m + 2, 1), (m + 1, m - 1)]
                }
            }
            Nested => {
                let m = n / 2;
                if n.is_multiple_of(2) {
                    vec![(1, m), (m + 1, m - 1)]
                } else {
                    vec![(1, m), (m + 1, m)]
                }
            }
            ImprovedNested => {
                let m = n / 2;
                if n.is_multiple_of(2) {
                    vec![(1, m - 1), (m + 1, m - 1), (m, 1)]
                } else {
                    vec![(1, m - 1), (m + 1, m), (m, 1)]
                }
            }
            SuperNested => return self.super_nested_runs(),
            AugmentedNestedI2 => {
                if n < 4 {
                    return Err(self.unsupported("requires n >= 4"));
                }
                match n % 4 {
                    0 => {
                        let m = n / 2;
                        vec![
                            (1, 1),
                            (2, m / 2 - 1),
                            (1, 1),
                            (m + 1, m - 1),
                            (2, m / 2 - 1),
                        ]
                    }
                    1 => {
                        let m = (n - 1) / 2;
                        vec![(1, 1), (2, m / 2 - 1), (1, 1), (m + 1, m), (2, m / 2 - 1)]
                    }
                    2 => {
                        let m = (n - 2) / 2;
                        vec![(1, 1), (2, m / 2), (m + 1, m), (1, 1), (2, m / 2 - 1)]
                    }
                    _ => {
                        let m = (n - 3) / 2;
                        vec![(1, 1), (2, m / 2), (m + 1, m + 1), (1, 1), (2, m / 2 - 1)]
                    }
                }
            }
            Misc => {
                let p = 2 * (n / 4) + 2;
                if n < 4 {
                    return Err(self.unsupported("requires n >= 4"));
                }
                let half = (p - 4) / 2;
                vec![(1, 1), (p - 3, 1), (p, n - p), (2, half), (3, 1), (2, half)]
            }
            Type93FourRPlus3 => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, r),
                    (2 * r + 2, r + 1),
                    (4 * r + 3, (2 * r as i64 + k - 3) as usize),
                    (2 * r + 1, r),
                    (r + 1, 1),
                    (1, r),
                ]
            }
            Type93FourRPlus1 => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, r),
                    (2 * r + 1, r),
                    (4 * r + 1, (2 * r as i64 + k - 1) as usize),
                    (2 * r, r - 1),
                    (r, 1),
                    (1, r),
                ]
            }
            Type93FourR => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, 1),
                    (2, r),
                    (2 * r + 1, r - 1),
                    (4 * r, (2 * r as i64 + k) as usize),
                    (2 * r - 1, r - 1),
                    (1, 1),
                    (2, r - 1),
                ]
            }
            Type10FourRPlus3 => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, r),
                    (2 * r + 2, r),
                    (4 * r + 3, (2 * r as i64 + k - 3) as usize),
                    (2 * r + 1, r + 1),
                    (r + 1, 1),
                    (1, r),
                ]
            }
            Type10FourRPlus1A => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, r),
                    (2 * r, 1),
                    (1, 1),
                    (2 * r + 1, r - 1),
                    (4 * r + 1, (2 * r as i64 + k - 1) as usize),
                    (2 * r, r - 1),
                    (r + 1, 1),
                    (1, r - 1),
                ]
            }
            Type10FourRPlus1B => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, r),
                    (2 * r + 1, r - 1),
                    (4 * r + 1, (2 * r as i64 + k - 1) as usize),
                    (2 * r, r),
                    (r, 1),
                    (1, r),
                ]
            }
            Type10FourR => {
                let (r, k) = self.six_r_params()?;
                vec![
                    (1, 2),
                    (2, r - 2),
                    (1, 1),
                    (2 * r - 1, r - 1),
                    (4 * r, (2 * r as i64 + k) as usize),
                    (2 * r + 1, r - 2),
                    (2, 1),
                    (2 * r + 1, 1),
                    (2, r - 1),
                ]
            }
        };
        Ok(runs)
    }

    /// Second-order super nested array over a nested parent with
    /// `N1 = floor(N/2)` dense and `N2 = N - N1` sparse sensors.
    ///
    /// The dense part is split into four interleaved sub-ULAs of step 2
    /// whose sizes depend on `N1 mod 4`; for odd `N1` this reduces to the
    /// `{2^a, 3, 2^a, (m+1)^b, m, 1}` spacing rows.
    fn super_nested_runs(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.n;
        if n < 8 {
            return Err(self.unsupported("requires n >= 8 (N1 >= 4, N2 >= 3)"));
        }
        let n1 = (n / 2) as i64;
        let n2 = n as i64 - n1;
        let q = n1 / 4;
        // Sizes minus one of X1, Y1, X2, Y2; -1 marks an empty sub-array.
        let (a1, b1, a2, b2) = match n1 % 4 {
            0 => (q, q - 1, q - 1, q - 2),
            1 => (q, q - 1, q - 1, q - 1),
            2 => (q + 1, q - 1, q, q - 2),
            _ => (q, q, q, q - 1),
        };
        let step = n1 + 1;
        let mut positions: Vec<i64> = Vec::with_capacity(n);
        positions.extend((0..=a1).map(|l| 1 + 2 * l));
        positions.extend((0..=b1).map(|l| step - (1 + 2 * l)));
        positions.extend((0..=a2).map(|l| step + 2 + 2 * l));
        positions.extend((0..=b2).map(|l| 2 * step - (2 + 2 * l)));
        positions.extend((2..=n2).map(|l| l * step));
        positions.push(n2 * step - 1);
        positions.sort_unstable();
        positions.dedup();
        if positions.len() != n {
            return Err(self.unsupported("super nested construction collapsed sensors"));
        }
        // Re-encode as runs of the spacing sequence.
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for w in positions.windows(2) {
            let d = (w[1] - w[0]) as usize;
            match runs.last_mut() {
                Some((v, c)) if *v == d => *c += 1,
                _ => runs.push((d, 1)),
            }
        }
        Ok(runs)
    }

    /// Published uDOF expression, or `None` where no usable closed form
    /// exists (odd-N Bracewell arrays).
    pub fn published_udof(&self) -> Result<Option<usize>> {
        use ReferenceKind::*;
        self.spacing_runs()?;
        let n = self.n as i64;
        let even = n % 2 == 0;
        let k = self.six_r_params().map(|(_, k)| k).unwrap_or(0);
        let v = match self.kind {
            Ula => 2 * n - 1,
            Wichmann => (2 * n * n + 2 * n - 1) / 3,
            Bracewell if even => n * n / 2 + n + 1,
            Bracewell => return Ok(None),
            Nested | SuperNested if even => n * n / 2 + n - 1,
            Nested | SuperNested => (n * n + 2 * n - 1) / 2,
            ImprovedNested if even => n * n / 2 + 2 * n - 3,
            ImprovedNested => (n * n + 4 * n - 7) / 2,
            AugmentedNestedI2 if even => n * n / 2 + 2 * n - 5,
            AugmentedNestedI2 => (n * n + 4 * n - 11) / 2,
            Misc if even => n * n / 2 + 3 * n - 9,
            Misc if n % 4 == 1 => (n * n + 6 * n - 17) / 2,
            Misc => (n * n + 6 * n - 21) / 2,
            Type93FourRPlus3 => (2 * n * n + 2 * n - 2 * k * k + 16 * k - 33) / 3,
            Type93FourRPlus1 | Type10FourRPlus1A => (2 * n * n - 2 * k * k + 6 * k - 3) / 3,
            Type93FourR => (2 * n * n - 2 * k * k + 3) / 3,
            Type10FourRPlus3 => (2 * n * n + 2 * n - 2 * k * k + 16 * k - 39) / 3,
            Type10FourRPlus1B => (2 * n * n - 2 * k * k + 6 * k - 9) / 3,
            Type10FourR => (2 * n * n - 2 * k * k - 3) / 3,
        };
        Ok(Some(v as usize))
    }

    /// Published `(w(1), w(2), w(3))` expression.
    pub fn published_weights(&self) -> Result<[i64; 3]> {
        use ReferenceKind::*;
        self.spacing_runs()?;
        let n = self.n as i64;
        let r = self
            .six_r_params()
            .map(|(r, _)| r as i64)
            .unwrap_or((n - 4) / 6);
        let half = n / 2;
        let a = (n - 1) / 2;
        let w = match self.kind {
            Ula => [n - 1, n - 2, n - 3],
            Wichmann | Type93FourRPlus3 | Type93FourRPlus1 | Type10FourRPlus3
            | Type10FourRPlus1B => [2 * r, 2 * r - 2, 2 * r - 4],
            Type10FourRPlus1A => [2 * r - 1, 2 * r - 3, 2 * r - 5],
            Type93FourR => [2, 2 * r - 1, 2],
            Type10FourR => [3, 2 * r - 1, 2],
            Bracewell => [a, a - 1, a - 2],
            Nested => [half, a - 1, a - 2],
            ImprovedNested => [half - 1, half - 2, half - 3],
            SuperNested => [1, half - 1, 1],
            AugmentedNestedI2 => {
                let w2 = if n % 4 <= 1 {
                    half - 2
                } else {
                    (n - 2) / 2 - 1
                };
                [2, w2, 2]
            }
            Misc => [1, 2 * (n / 4) - 2, if n == 9 { 2 } else { 1 }],
        };
        Ok(w)
    }

    pub fn spacings(&self) -> Result<SpacingArray> {
        SpacingArray::new(expand_runs(&self.spacing_runs()?))
    }
}

pub fn generate_reference(family: &ReferenceFamily) -> Result<SensorArray> {
    Ok(positions_from_spacings(&family.spacings()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarray::difference_coarray;

    fn gen(kind: ReferenceKind, n: usize) -> Vec<usize> {
        generate_reference(&ReferenceFamily { kind, n })
            .unwrap()
            .positions()
            .to_vec()
    }

    #[test]
    fn position_sets_n23() {
        use ReferenceKind::*;
        assert_eq!(
            gen(SuperNested, 23),
            [
                0, 2, 4, 6, 8, 10, 13, 15, 17, 19, 21, 23, 35, 47, 59, 71, 83, 95, 107, 119, 131,
                142, 143
            ]
        );
        assert_eq!(
            gen(Misc, 23),
            [
                0, 1, 10, 22, 34, 46, 58, 70, 82, 94, 106, 118, 130, 142, 144, 146, 148, 150, 153,
                155, 157, 159, 161
            ]
        );
        assert_eq!(
            gen(Type93FourRPlus3, 23),
            [
                0, 1, 2, 3, 11, 19, 27, 35, 50, 65, 80, 95, 110, 125, 140, 155, 162, 169, 176, 180,
                181, 182, 183
            ]
        );
        assert_eq!(
            gen(Type93FourR, 23),
            [
                0, 1, 3, 5, 7, 9, 18, 27, 36, 52, 68, 84, 100, 116, 132, 148, 155, 162, 169, 170,
                172, 174, 176
            ]
        );
        assert_eq!(
            gen(Type10FourR, 23),
            [
                0, 1, 2, 4, 6, 7, 14, 21, 28, 44, 60, 76, 92, 108, 124, 140, 149, 158, 160, 169,
                171, 173, 175
            ]
        );
    }

    #[test]
    fn ula() {
        assert_eq!(gen(ReferenceKind::Ula, 4), [0, 1, 2, 3]);
    }

    #[test]
    fn super_nested_matches_odd_n1_rows() {
        // N = 18: N1 = 9, row {2^4, 3, 2^4, 10^6, 9, 1}.
        let expected = expand_runs(&[(2, 4), (3, 1), (2, 4), (10, 6), (9, 1), (1, 1)]);
        let fam = ReferenceFamily::new(ReferenceKind::SuperNested, 18).unwrap();
        assert_eq!(fam.spacings().unwrap().as_slice(), expected.as_slice());
        for n in (8..120).filter(|n| (n / 2) % 2 == 1) {
            let m = n / 2;
            let runs = if n % 2 == 0 {
                vec![
                    (2, (m - 1) / 2),
                    (3, 1),
                    (2, (m - 1) / 2),
                    (m + 1, m - 3),
                    (m, 1),
                    (1, 1),
                ]
            } else {
                vec![
                    (2, (m - 1) / 2),
                    (3, 1),
                    (2, (m - 1) / 2),
                    (m + 1, m - 2),
                    (m, 1),
                    (1, 1),
                ]
            };
            let fam = ReferenceFamily::new(ReferenceKind::SuperNested, n).unwrap();
            assert_eq!(
                fam.spacings().unwrap().as_slice(),
                expand_runs(&runs).as_slice(),
                "n={n}"
            );
        }
    }

    #[test]
    fn domain_restrictions() {
        use ReferenceKind::*;
        for (kind, n) in [
            (Wichmann, 23),
            (Wichmann, 4),
            (Bracewell, 3),
            (SuperNested, 7),
            (Type10FourR, 14),
            (Type93FourRPlus1, 10),
            (Ula, 1),
        ] {
            assert!(
                matches!(
                    ReferenceFamily::new(kind, n),
                    Err(Error::UnsupportedN { .. })
                ),
                "{kind:?} n={n}"
            );
        }
        assert!(ReferenceFamily::new(Wichmann, 22).is_ok());
    }

    #[test]
    fn every_supported_instance_is_hole_free() {
        for kind in ReferenceKind::ALL {
            for n in 2..=80 {
                let Ok(fam) = ReferenceFamily::new(kind, n) else {
                    continue;
                };
                let arr = generate_reference(&fam).unwrap();
                assert_eq!(arr.len(), n, "{kind:?} n={n}");
                let dc = difference_coarray(&arr);
                assert!(dc.is_hole_free(), "{kind:?} n={n} has a hole");
            }
        }
    }
}
