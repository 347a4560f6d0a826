//! Brute-force cross-checks: a second co-array implementation, exhaustive
//! minimum-aperture search and closed-form verification scans.

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::coarray::{analyze, DiffCoarray};
use crate::error::{Error, Result};
use crate::geometry::{generate_proposed, ProposedFamily, ProposedKind, SensorArray};

/// Weight function by a plain double loop over all ordered pairs.
pub fn independent_coarray(arr: &SensorArray) -> DiffCoarray {
    let p = arr.positions();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &a in p {
        for &b in p {
            *counts.entry(a as i64 - b as i64).or_insert(0) += 1;
        }
    }
    let max_lag = *counts.keys().next_back().expect("non-empty") as usize;
    let weights = (0..=max_lag as i64)
        .map(|d| counts.get(&d).copied().unwrap_or(0))
        .collect();
    DiffCoarray::from_weights(p.len(), weights).expect("enumeration yields a valid table")
}

pub const MAX_SEARCH_N: usize = 13;
const MAX_SEARCH_APERTURE: usize = 127;

struct Search {
    n: usize,
    aperture: usize,
    full: u128,
}

impl Search {
    fn new(n: usize, aperture: usize) -> Self {
        let full = if aperture == 127 {
            u128::MAX - 1
        } else {
            ((1u128 << (aperture + 1)) - 1) & !1
        };
        Self { n, aperture, full }
    }

    /// Lags `lo < d < hi` as a mask.
    fn open_range(lo: usize, hi: usize) -> u128 {
        if hi <= lo + 1 {
            return 0;
        }
        let upto = |k: usize| {
            if k >= 128 {
                u128::MAX
            } else {
                (1u128 << k) - 1
            }
        };
        upto(hi) & !upto(lo + 1)
    }

    fn lags_with(&self, marks: &[usize], x: usize) -> u128 {
        marks.iter().fold(1u128 << (self.aperture - x), |acc, &y| {
            acc | 1u128 << (x - y)
        })
    }

    /// Missing lags must stay reachable by future marks in `(last, L)`.
    fn feasible(&self, marks: &[usize], covered: u128) -> bool {
        let missing = self.full & !covered;
        if missing == 0 {
            return true;
        }
        let placed = marks.len() + 1;
        let remaining = self.n - placed;
        if remaining == 0 {
            return false;
        }
        // Counting bound on how many new lags the remaining marks can add.
        let max_new = remaining * placed + remaining * (remaining - 1) / 2;
        if missing.count_ones() as usize > max_new {
            return false;
        }
        let last = *marks.last().unwrap();
        let l = self.aperture;
        // Future pairs with the right end or among themselves reach d < L - last;
        // a pair with an existing mark y reaches last - y < d < L - y.
        let mut reachable = Self::open_range(0, l - last);
        for &y in marks {
            reachable |= Self::open_range(last - y, l - y);
        }
        missing & !reachable == 0
    }

    fn extend(&self, marks: &mut Vec<usize>, covered: u128, out: &mut Vec<Vec<usize>>) {
        if marks.len() + 1 == self.n {
            if covered & self.full == self.full {
                let mut arr = marks.clone();
                arr.push(self.aperture);
                out.push(arr);
            }
            return;
        }
        let last = *marks.last().unwrap();
        for x in last + 1..self.aperture {
            let next = covered | self.lags_with(marks, x);
            marks.push(x);
            if self.feasible(marks, next) {
                self.extend(marks, next, out);
            }
            marks.pop();
        }
    }

    /// Lag `L - 1` forces a mark at 1 or at `L - 1`; up to mirroring the
    /// mark at 1 can be assumed, and canonicalization restores the pairs.
    fn run(&self) -> Vec<Vec<usize>> {
        let l = self.aperture;
        if self.n == 2 {
            return if l == 1 { vec![vec![0, 1]] } else { vec![] };
        }
        let covered = 1u128 << l | self.lags_with(&[0], 1);
        if self.n == 3 {
            let mut out = Vec::new();
            self.extend(&mut vec![0, 1], covered, &mut out);
            return out;
        }
        (2..l)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut marks = vec![0, 1];
                let mut out = Vec::new();
                let next = covered | self.lags_with(&marks, x);
                marks.push(x);
                if self.feasible(&marks, next) {
                    self.extend(&mut marks, next, &mut out);
                }
                out
            })
            .collect()
    }
}

fn canonical(p: Vec<usize>) -> Vec<usize> {
    let l = *p.last().unwrap();
    let mirror: Vec<usize> = p.iter().rev().map(|&x| l - x).collect();
    mirror.min(p)
}

/// Minimum-redundancy search: the largest aperture `L* <= max_aperture` for
/// which a hole-free `n`-sensor array exists, with every such array listed
/// once per mirror pair in lexicographic order.
pub fn min_aperture_search(n: usize, max_aperture: usize) -> Result<Vec<SensorArray>> {
    if !(2..=MAX_SEARCH_N).contains(&n) {
        return Err(Error::UnsupportedN {
            family: "mra",
            n,
            reason: format!("exhaustive search supports 2 <= n <= {MAX_SEARCH_N}"),
        });
    }
    // n sensors give at most n(n-1)/2 distinct positive lags.
    let top = max_aperture.min(n * (n - 1) / 2).min(MAX_SEARCH_APERTURE);
    for l in (n - 1..=top).rev() {
        let found = Search::new(n, l).run();
        if !found.is_empty() {
            let mut canon: Vec<Vec<usize>> = found.into_iter().map(canonical).collect();
            canon.sort_unstable();
            canon.dedup();
            return canon.into_iter().map(SensorArray::new).collect();
        }
    }
    Err(Error::ApertureBudgetExceeded { n, max_aperture })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MraSummary {
    pub n: usize,
    pub aperture: usize,
    pub count: usize,
    pub redundancy: f64,
}

impl MraSummary {
    pub fn from_results(n: usize, arrays: &[SensorArray]) -> Self {
        let aperture = arrays.first().map_or(0, |a| a.aperture());
        Self {
            n,
            aperture,
            count: arrays.len(),
            redundancy: (n * (n - 1)) as f64 / (2 * aperture) as f64,
        }
    }
}

pub fn write_mra_summary_csv<W: Write>(rows: &[MraSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "aperture", "count", "redundancy"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.aperture.to_string(),
            r.count.to_string(),
            format!("{:.6}", r.redundancy),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub family: ProposedKind,
    pub n: usize,
    pub r: usize,
    pub k: i64,
    pub quantity: &'static str,
    pub expected: String,
    pub actual: String,
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct VerificationReport {
    pub instances_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["family", "n", "r", "k", "quantity", "expected", "actual"])?;
        for m in &self.mismatches {
            w.write_record([
                m.family.id().to_string(),
                m.n.to_string(),
                m.r.to_string(),
                m.k.to_string(),
                m.quantity.to_string(),
                m.expected.clone(),
                m.actual.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const VERIFY_N_MIN: usize = 18;
pub const VERIFY_N_MAX: usize = 200;

/// Checks every proposed kind and every supported `n` in the range against
/// its aperture, uDOF, small-lag weight and redundancy closed forms.
pub fn verify_closed_forms(n_min: usize, n_max: usize) -> Result<VerificationReport> {
    if n_min < VERIFY_N_MIN || n_max > VERIFY_N_MAX || n_min > n_max {
        return Err(Error::InvalidSweep(format!(
            "verification range must lie within [{VERIFY_N_MIN}, {VERIFY_N_MAX}]"
        )));
    }
    let mut report = VerificationReport::default();
    for kind in ProposedKind::ALL {
        for n in n_min..=n_max {
            let Ok(fam) = ProposedFamily::new(kind, n) else {
                continue;
            };
            report.instances_checked += 1;
            let arr = generate_proposed(&fam);
            let rep = analyze(&arr);
            let mut check = |quantity: &'static str, expected: String, actual: String| {
                if expected != actual {
                    report.mismatches.push(Mismatch {
                        family: kind,
                        n,
                        r: fam.r,
                        k: fam.k,
                        quantity,
                        expected,
                        actual,
                        positions: arr.positions().to_vec(),
                    });
                }
            };
            check("sensor_count", n.to_string(), arr.len().to_string());
            check("hole_free", true.to_string(), rep.hole_free.to_string());
            check(
                "aperture",
                fam.aperture().to_string(),
                rep.aperture.to_string(),
            );
            check("udof", fam.udof().to_string(), rep.udof.to_string());
            check(
                "weights",
                format!("{:?}", fam.weights()),
                format!("{:?}", rep.weights),
            );
            let closed_r = Ratio::new((n * (n - 1)) as u64, 2 * fam.aperture() as u64);
            check(
                "redundancy",
                closed_r.to_string(),
                rep.redundancy_ratio.to_string(),
            );
            let below = rep.redundancy_ratio < Ratio::new(3, 2);
            check("redundancy_below_3_2", true.to_string(), below.to_string());
        }
    }
    Ok(report)
}
