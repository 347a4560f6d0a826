//! Restricted-array pattern analysis.
//!
//! A spacing array is viewed as `left ++ [base; repeat] ++ right` where
//! `base` is the largest spacing and its occurrences form one contiguous run.

use serde::{Deserialize, Serialize};

use super::SpacingArray;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDecomposition {
    pub left: Vec<usize>,
    pub base: usize,
    pub repeat: usize,
    pub right: Vec<usize>,
}

impl PatternDecomposition {
    /// Number of spacings outside the base run.
    pub fn outer_len(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictionClass {
    /// `|left| + |right| = base - 1`.
    Legacy,
    /// `|left| + |right| = base`.
    New,
    Neither,
}

pub fn decompose_pattern(spacings: &SpacingArray) -> Result<PatternDecomposition> {
    let d = spacings.as_slice();
    let base = *d.iter().max().ok_or(Error::EmptySpacings)?;
    let first = d.iter().position(|&x| x == base).expect("max is present");
    let repeat = d[first..].iter().take_while(|&&x| x == base).count();
    let end = first + repeat;
    if d[end..].contains(&base) {
        return Err(Error::NoUniqueBaseRun { base });
    }
    Ok(PatternDecomposition {
        left: d[..first].to_vec(),
        base,
        repeat,
        right: d[end..].to_vec(),
    })
}

pub fn check_restriction(dec: &PatternDecomposition) -> RestrictionClass {
    let outer = dec.outer_len();
    if outer + 1 == dec.base {
        RestrictionClass::Legacy
    } else if outer == dec.base {
        RestrictionClass::New
    } else {
        RestrictionClass::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ProposedFamily, ProposedKind, ReferenceFamily, ReferenceKind};

    fn sp(d: &[usize]) -> SpacingArray {
        SpacingArray::new(d.to_vec()).unwrap()
    }

    fn class_of(d: &SpacingArray) -> RestrictionClass {
        check_restriction(&decompose_pattern(d).unwrap())
    }

    #[test]
    fn example_18_is_new_class() {
        let d = sp(&[1, 2, 3, 5, 5, 5, 12, 12, 12, 12, 12, 7, 7, 2, 5, 2, 2]);
        let p = decompose_pattern(&d).unwrap();
        assert_eq!(p.left, [1, 2, 3, 5, 5, 5]);
        assert_eq!(p.base, 12);
        assert_eq!(p.repeat, 5);
        assert_eq!(p.right, [7, 7, 2, 5, 2, 2]);
        assert_eq!(class_of(&d), RestrictionClass::New);
    }

    #[test]
    fn small_cases() {
        assert_eq!(class_of(&sp(&[1, 3, 1])), RestrictionClass::Legacy);
        let p = decompose_pattern(&sp(&[2, 2, 2])).unwrap();
        assert_eq!(
            (p.left.len(), p.base, p.repeat, p.right.len()),
            (0, 2, 3, 0)
        );
        assert_eq!(class_of(&sp(&[2, 2, 2])), RestrictionClass::Neither);
        assert!(matches!(
            decompose_pattern(&sp(&[3, 1, 3])),
            Err(Error::NoUniqueBaseRun { base: 3 })
        ));
    }

    #[test]
    fn proposed_families_are_new_class() {
        for kind in ProposedKind::ALL {
            for n in 18..=90 {
                let Ok(fam) = ProposedFamily::new(kind, n) else {
                    continue;
                };
                assert_eq!(
                    class_of(&fam.spacings()),
                    RestrictionClass::New,
                    "{kind:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn published_restricted_families_are_legacy() {
        use ReferenceKind::*;
        for kind in [
            Wichmann,
            Type93FourRPlus3,
            Type93FourRPlus1,
            Type93FourR,
            Type10FourRPlus3,
            Type10FourRPlus1A,
            Type10FourRPlus1B,
            Type10FourR,
        ] {
            for n in 18..=90 {
                let Ok(fam) = ReferenceFamily::new(kind, n) else {
                    continue;
                };
                assert_eq!(
                    class_of(&fam.spacings().unwrap()),
                    RestrictionClass::Legacy,
                    "{kind:?} n={n}"
                );
            }
        }
    }
}
