//! The ten low-redundancy families built around a base spacing `c` with
//! exactly `c` non-base spacings on its two sides (`s1 + s2 = c`).
//!
//! Each family is parameterized by `N = 6r + k`; the base is `4r`, `4r + 1`
//! or `4r + 3` depending on the class.

use serde::{Deserialize, Serialize};

use super::{expand_runs, positions_from_spacings, SensorArray, SpacingArray};
use crate::error::{Error, Result};

/// Residue of the base spacing modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseClass {
    FourR,
    FourRPlus1,
    FourRPlus3,
}

impl BaseClass {
    /// Admissible window for `k` in `N = 6r + k`.
    pub fn k_window(self) -> (i64, i64) {
        match self {
            BaseClass::FourR => (-2, 3),
            BaseClass::FourRPlus1 => (-1, 4),
            BaseClass::FourRPlus3 => (2, 7),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProposedKind {
    FourRType1,
    FourRType2,
    FourRType3,
    FourRPlus1Type1,
    FourRPlus1Type2,
    FourRPlus1Type3,
    FourRPlus1Type4,
    FourRPlus1Type5,
    FourRPlus3Type1,
    FourRPlus3Type2,
}

impl ProposedKind {
    pub const ALL: [ProposedKind; 10] = [
        ProposedKind::FourRType1,
        ProposedKind::FourRType2,
        ProposedKind::FourRType3,
        ProposedKind::FourRPlus1Type1,
        ProposedKind::FourRPlus1Type2,
        ProposedKind::FourRPlus1Type3,
        ProposedKind::FourRPlus1Type4,
        ProposedKind::FourRPlus1Type5,
        ProposedKind::FourRPlus3Type1,
        ProposedKind::FourRPlus3Type2,
    ];

    pub fn class(self) -> BaseClass {
        use ProposedKind::*;
        match self {
            FourRType1 | FourRType2 | FourRType3 => BaseClass::FourR,
            FourRPlus1Type1 | FourRPlus1Type2 | FourRPlus1Type3 | FourRPlus1Type4
            | FourRPlus1Type5 => BaseClass::FourRPlus1,
            FourRPlus3Type1 | FourRPlus3Type2 => BaseClass::FourRPlus3,
        }
    }

    /// Smallest admissible `r`.
    pub fn min_r(self) -> usize {
        use ProposedKind::*;
        match self {
            FourRPlus1Type1 | FourRPlus1Type3 | FourRPlus1Type5 => 2,
            // The (4r+3) position forms are only stated for r >= 3.
            _ => 3,
        }
    }

    pub fn id(self) -> &'static str {
        use ProposedKind::*;
        match self {
            FourRType1 => "four-r-1",
            FourRType2 => "four-r-2",
            FourRType3 => "four-r-3",
            FourRPlus1Type1 => "four-r-plus-1-1",
            FourRPlus1Type2 => "four-r-plus-1-2",
            FourRPlus1Type3 => "four-r-plus-1-3",
            FourRPlus1Type4 => "four-r-plus-1-4",
            FourRPlus1Type5 => "four-r-plus-1-5",
            FourRPlus3Type1 => "four-r-plus-3-1",
            FourRPlus3Type2 => "four-r-plus-3-2",
        }
    }
}

/// A concrete member of a proposed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProposedFamily {
    pub kind: ProposedKind,
    pub r: usize,
    pub k: i64,
}

pub const MIN_PROPOSED_N: usize = 18;

impl ProposedFamily {
    pub fn new(kind: ProposedKind, n: usize) -> Result<Self> {
        let (r, k) = resolve_params(kind, n)?;
        Ok(Self { kind, r, k })
    }

    pub fn n(&self) -> usize {
        (6 * self.r as i64 + self.k) as usize
    }

    /// Closed-form aperture.
    pub fn aperture(&self) -> usize {
        let (r, k) = (self.r as i64, self.k);
        let l = match self.kind.class() {
            BaseClass::FourR => 12 * r * r + 4 * r * k - 2,
            BaseClass::FourRPlus1 => 12 * r * r + 4 * r * k + k - 2,
            BaseClass::FourRPlus3 => 12 * r * r + 4 * r * k - r + 3 * k - 8,
        };
        l as usize
    }

    /// Closed-form uniform degrees of freedom.
    pub fn udof(&self) -> usize {
        let n = self.n() as i64;
        let k = self.k;
        let num = match self.kind.class() {
            BaseClass::FourR => 2 * n * n - 2 * k * k - 9,
            BaseClass::FourRPlus1 => 2 * n * n - 2 * k * k + 6 * k - 9,
            BaseClass::FourRPlus3 => 2 * n * n - n - 2 * k * k + 19 * k - 45,
        };
        debug_assert_eq!(num % 3, 0);
        (num / 3) as usize
    }

    /// Closed-form weights `(w(1), w(2), w(3))`.
    pub fn weights(&self) -> [i64; 3] {
        use ProposedKind::*;
        let r = self.r as i64;
        match self.kind {
            FourRType1 => [1, 2 * r - 2, 2],
            FourRType2 | FourRType3 => [2, 2 * r - 2, 2],
            FourRPlus1Type1 | FourRPlus1Type2 | FourRPlus1Type3 => {
                [2 * r - 2, 2 * r - 4, 2 * r - 6]
            }
            FourRPlus1Type4 => [2 * r - 2, 2 * r - 4, 2 * r - 5],
            FourRPlus1Type5 => [2 * r - 1, 2 * r - 4, 2 * r - 6],
            FourRPlus3Type1 | FourRPlus3Type2 => [2 * r, 2 * r - 2, 2 * r - 4],
        }
    }

    /// The spacing row of the family, as `(value, repeat)` runs.
    pub fn spacing_runs(&self) -> Vec<(usize, usize)> {
        use ProposedKind::*;
        let r = self.r;
        // Base repeat counts are >= 1 throughout the admissible (r, k) window.
        let rep = |offset: i64| (2 * r as i64 + self.k + offset) as usize;
        match self.kind {
            FourRType1 => vec![
                (1, 1),
                (2, r - 2),
                (3, 1),
                (2 * r - 1, r),
                (4 * r, rep(-1)),
                (2 * r + 1, r - 1),
                (2, 1),
                (2 * r - 1, 1),
                (2, r - 1),
            ],
            FourRType2 => vec![
                (1, 1),
                (2, r - 1),
                (1, 1),
                (2 * r - 1, r),
                (4 * r, rep(-1)),
                (2 * r + 1, r),
                (2, r - 1),
            ],
            FourRType3 => vec![
                (2, r - 1),
                (1, 1),
                (2 * r - 1, r),
                (4 * r, rep(-1)),
                (2 * r + 1, r),
                (2, r - 1),
                (1, 1),
            ],
            FourRPlus1Type1 => vec![
                (1, r - 1),
                (2 * r + 1, r + 1),
                (4 * r + 1, rep(-2)),
                (2 * r, r),
                (r - 1, 1),
                (2, 1),
                (1, r - 1),
            ],
            FourRPlus1Type2 => vec![
                (1, r - 1),
                (r - 1, 1),
                (r + 2, 1),
                (2 * r + 1, r),
                (4 * r + 1, rep(-2)),
                (2 * r, r),
                (r + 1, 1),
                (1, r - 1),
            ],
            FourRPlus1Type3 => vec![
                (1, r - 1),
                (r, 1),
                (r + 1, 1),
                (2 * r + 1, r),
                (4 * r + 1, rep(-2)),
                (2 * r, r),
                (r + 1, 1),
                (1, r - 1),
            ],
            FourRPlus1Type4 => vec![
                (1, r - 1),
                (3, 1),
                (2 * r - 2, 1),
                (2 * r + 1, r),
                (4 * r + 1, rep(-2)),
                (2 * r, r),
                (r + 1, 1),
                (1, r - 1),
            ],
            FourRPlus1Type5 => vec![
                (1, r - 1),
                (2 * r + 1, r + 1),
                (4 * r + 1, rep(-2)),
                (2 * r, r),
                (1, 1),
                (r, 1),
                (1, r - 1),
            ],
            FourRPlus3Type1 => vec![
                (r + 1, 1),
                (1, r),
                (2 * r + 2, r + 1),
                (4 * r + 3, rep(-4)),
                (2 * r + 1, r),
                (r + 1, 1),
                (1, r),
            ],
            FourRPlus3Type2 => vec![
                (1, r),
                (2 * r + 2, r + 1),
                (4 * r + 3, rep(-4)),
                (2 * r + 1, r),
                (r + 1, 1),
                (1, r),
                (r + 1, 1),
            ],
        }
    }

    pub fn spacings(&self) -> SpacingArray {
        SpacingArray::new(expand_runs(&self.spacing_runs()))
            .expect("closed-form spacings are positive")
    }
}

/// Resolves `N = 6r + k` with `k` inside the kind's window.
pub fn resolve_params(kind: ProposedKind, n: usize) -> Result<(usize, i64)> {
    let unsupported = |reason: String| Error::UnsupportedN {
        family: kind.id(),
        n,
        reason,
    };
    if n < MIN_PROPOSED_N {
        return Err(unsupported(format!("requires n >= {MIN_PROPOSED_N}")));
    }
    let (k_min, _) = kind.class().k_window();
    let n = n as i64;
    let k = (n - k_min).rem_euclid(6) + k_min;
    let r = (n - k) / 6;
    if r < kind.min_r() as i64 {
        return Err(unsupported(format!(
            "n = 6r{k:+} gives r = {r}, below the minimum r = {}",
            kind.min_r()
        )));
    }
    Ok((r as usize, k))
}

pub fn generate_proposed(family: &ProposedFamily) -> SensorArray {
    positions_from_spacings(&family.spacings())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarray::difference_coarray;

    #[test]
    fn resolves_r_and_k() {
        assert_eq!(
            resolve_params(ProposedKind::FourRType1, 18).unwrap(),
            (3, 0)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRType1, 23).unwrap(),
            (4, -1)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRType1, 21).unwrap(),
            (3, 3)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRType1, 22).unwrap(),
            (4, -2)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRPlus3Type1, 20).unwrap(),
            (3, 2)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRPlus3Type1, 25).unwrap(),
            (3, 7)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRPlus1Type2, 18).unwrap(),
            (3, 0)
        );
        assert_eq!(
            resolve_params(ProposedKind::FourRPlus1Type2, 23).unwrap(),
            (4, -1)
        );
    }

    #[test]
    fn small_n_is_unsupported() {
        for kind in ProposedKind::ALL {
            assert!(matches!(
                resolve_params(kind, 17),
                Err(Error::UnsupportedN { .. })
            ));
        }
        // 18 = 6*2 + 6 and 19 = 6*2 + 7 both need r = 2 for the (4r+3) class.
        for n in [18, 19] {
            assert!(resolve_params(ProposedKind::FourRPlus3Type2, n).is_err());
        }
    }

    #[test]
    fn k_stays_in_window() {
        for kind in ProposedKind::ALL {
            let (lo, hi) = kind.class().k_window();
            for n in 20..200 {
                let (r, k) = resolve_params(kind, n).unwrap();
                assert!((lo..=hi).contains(&k));
                assert_eq!(6 * r as i64 + k, n as i64);
            }
        }
    }

    #[test]
    fn example_eighteen() {
        let fam = ProposedFamily::new(ProposedKind::FourRType1, 18).unwrap();
        assert_eq!(
            generate_proposed(&fam).positions(),
            &[0, 1, 3, 6, 11, 16, 21, 33, 45, 57, 69, 81, 88, 95, 97, 102, 104, 106]
        );
    }

    #[test]
    fn position_set_n23() {
        let fam = ProposedFamily::new(ProposedKind::FourRType1, 23).unwrap();
        assert_eq!(
            generate_proposed(&fam).positions(),
            &[
                0, 1, 3, 5, 8, 15, 22, 29, 36, 52, 68, 84, 100, 116, 132, 141, 150, 159, 161, 168,
                170, 172, 174
            ]
        );
    }

    #[test]
    fn four_r_two_eighteen() {
        let fam = ProposedFamily::new(ProposedKind::FourRType2, 18).unwrap();
        let arr = generate_proposed(&fam);
        assert_eq!(arr.aperture(), 106);
        let dc = difference_coarray(&arr);
        assert!((0..=106).all(|d| dc.weight(d) > 0));
    }

    #[test]
    fn counts_and_apertures() {
        for kind in ProposedKind::ALL {
            for n in 18..=120 {
                let Ok(fam) = ProposedFamily::new(kind, n) else {
                    continue;
                };
                let d = fam.spacings();
                assert_eq!(d.len(), n - 1, "{kind:?} n={n}");
                assert_eq!(d.total(), fam.aperture(), "{kind:?} n={n}");
            }
        }
    }

    /// Landmark positions read off the position-form expressions, checked
    /// against the prefix sums of the spacing rows.
    #[test]
    fn position_form_landmarks() {
        fn contains_all(kind: ProposedKind, n: usize, f: impl Fn(i64, i64) -> Vec<i64>) {
            let fam = ProposedFamily::new(kind, n).unwrap();
            let arr = generate_proposed(&fam);
            for p in f(fam.r as i64, fam.k) {
                assert!(
                    arr.positions().contains(&(p as usize)),
                    "{kind:?} n={n}: missing landmark {p}"
                );
            }
        }
        for n in 18..=60 {
            contains_all(ProposedKind::FourRType1, n, |r, k| {
                vec![
                    2 * r,
                    4 * r - 1,
                    2 * r * r + r,
                    2 * r * r + 5 * r,
                    10 * r * r + (4 * k - 3) * r,
                    10 * r * r + (4 * k - 1) * r + 1,
                    12 * r * r + (4 * k - 4) * r - 1,
                    12 * r * r + (4 * k - 4) * r + 1,
                    12 * r * r + (4 * k - 2) * r,
                    12 * r * r + (4 * k - 2) * r + 2,
                    12 * r * r + 4 * k * r - 2,
                ]
            });
            contains_all(ProposedKind::FourRPlus1Type1, n, |r, k| {
                vec![
                    r - 1,
                    3 * r,
                    5 * r + 1,
                    2 * r * r + 4 * r,
                    2 * r * r + 8 * r + 1,
                    10 * r * r + (4 * k - 2) * r + k - 2,
                    10 * r * r + 4 * k * r + k - 2,
                    12 * r * r + (4 * k - 2) * r + k - 2,
                    12 * r * r + (4 * k - 1) * r + k - 3,
                    12 * r * r + (4 * k - 1) * r + k - 1,
                    12 * r * r + 4 * k * r + k - 2,
                ]
            });
            contains_all(ProposedKind::FourRPlus1Type5, n, |r, k| {
                vec![
                    3 * r,
                    12 * r * r + (4 * k - 2) * r + k - 1,
                    12 * r * r + (4 * k - 1) * r + k - 1,
                ]
            });
            if n >= 20 {
                contains_all(ProposedKind::FourRPlus3Type1, n, |r, k| {
                    vec![
                        r + 1,
                        2 * r + 1,
                        4 * r + 3,
                        2 * r * r + 6 * r + 3,
                        2 * r * r + 10 * r + 6,
                        10 * r * r + (4 * k - 4) * r + 3 * k - 9,
                        12 * r * r + 4 * r * k - 3 * r + 3 * k - 9,
                        12 * r * r + 4 * r * k - 2 * r + 3 * k - 8,
                        12 * r * r + 4 * k * r - r + 3 * k - 8,
                    ]
                });
            }
        }
    }
}
