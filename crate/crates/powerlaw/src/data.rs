//! Frequency tables and their derived views.
//!
//! A [`FrequencyTable`] records, for each distinct productivity count x,
//! how many individuals have exactly that count. Two views serve the two
//! styles of analysis:
//!
//! - [`CurveData`]: the points (x, fraction of individuals), for curve
//!   fitting;
//! - [`SufficientStats`]: (n, Σz, Σ ln z), everything the likelihoods of
//!   the power-law families need.
//!
//! Tail truncation comes in two semantics that matter when tails are long:
//! truncating the *distribution* keeps the original head probabilities
//! (they no longer sum to one), truncating the *data* renormalizes over
//! the retained range. On a log-log plot the two differ by a constant
//! shift, so straight-line fits see the same slope either way.

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;
use std::fmt::Write as _;

/// Validated frequency table: strictly increasing x, positive counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    rows: Vec<(u32, u64)>,
    n: u64,
    x_max: u32,
}

impl FrequencyTable {
    /// Build from (x, count) pairs; any order, duplicates rejected.
    pub fn new(mut rows: Vec<(u32, u64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("frequency table has no rows".into()));
        }
        rows.sort_unstable_by_key(|&(x, _)| x);
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateX(w[0].0));
            }
        }
        for &(x, count) in &rows {
            if x == 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: "x values must be positive".into(),
                });
            }
            if count == 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("count for x = {x} must be positive"),
                });
            }
        }
        let n = rows.iter().map(|&(_, c)| c).sum();
        let x_max = rows.last().unwrap().0;
        Ok(Self { rows, n, x_max })
    }

    /// Parse the CSV interchange format: a `x,count` header, one
    /// `integer,integer` row per distinct x, `#` comment lines, LF or CRLF.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r').trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                let norm: String = line.chars().filter(|c| !c.is_whitespace()).collect();
                if !norm.eq_ignore_ascii_case("x,count") {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("expected header 'x,count', found '{line}'"),
                    });
                }
                saw_header = true;
                continue;
            }
            let (xs, cs) = line.split_once(',').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected 'integer,integer', found '{line}'"),
            })?;
            let parse_field = |name: &str, s: &str| -> Result<u64> {
                let s = s.trim();
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("{name} is not a positive integer: '{s}'"),
                })
            };
            let x = parse_field("x", xs)?;
            let count = parse_field("count", cs)?;
            if x == 0 || count == 0 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "x and count must be >= 1".into(),
                });
            }
            let x = u32::try_from(x).map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("x = {x} is out of range"),
            })?;
            rows.push((x, count));
        }
        if !saw_header {
            return Err(Error::EmptyInput("no header line found".into()));
        }
        Self::new(rows)
    }

    /// Render in the same CSV format accepted by [`FrequencyTable::from_csv`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,count\n");
        for &(x, count) in &self.rows {
            let _ = writeln!(out, "{x},{count}");
        }
        out
    }

    /// Lotka's 1926 author-productivity counts for chemistry
    /// (Chemical Abstracts 1907-1916, letters A and B; 6891 senior authors),
    /// bundled as `data/lotka_chemistry.csv`.
    pub fn lotka_chemistry() -> Self {
        Self::from_csv(include_str!("../../../data/lotka_chemistry.csv"))
            .expect("bundled dataset is valid")
    }

    pub fn rows(&self) -> &[(u32, u64)] {
        &self.rows
    }

    /// Total number of individuals, Σ count.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Largest productivity count present.
    pub fn x_max(&self) -> u32 {
        self.x_max
    }

    /// Count of individuals with productivity exactly x (0 if absent).
    pub fn count_at(&self, x: u32) -> u64 {
        self.rows
            .binary_search_by_key(&x, |&(xx, _)| xx)
            .map(|i| self.rows[i].1)
            .unwrap_or(0)
    }

    /// Empirical CDF F̂(x) = (number of individuals with z ≤ x) / n.
    /// Right-continuous step function; F̂(x) = 1 for x ≥ x_max.
    pub fn empirical_cdf(&self, x: u32) -> f64 {
        let mut cum: u64 = 0;
        for &(xx, count) in &self.rows {
            if xx > x {
                break;
            }
            cum += count;
        }
        cum as f64 / self.n as f64
    }

    /// The curve view: points (x, count / n).
    pub fn curve(&self) -> CurveData {
        let n = self.n as f64;
        CurveData {
            points: self.rows.iter().map(|&(x, c)| (x, c as f64 / n)).collect(),
        }
    }

    /// The sufficient statistics (n, Σz, Σ ln z) of the sample the table
    /// summarizes. Σz is exact integer arithmetic; Σ ln z uses compensated
    /// summation.
    pub fn sufficient_stats(&self) -> SufficientStats {
        let mut sum_z: u64 = 0;
        let mut sum_log = NeumaierSum::new();
        for &(x, count) in &self.rows {
            sum_z += u64::from(x) * count;
            sum_log.add(count as f64 * f64::from(x).ln());
        }
        SufficientStats {
            n: self.n,
            sum_z,
            sum_log_z: sum_log.value(),
        }
    }

    /// Keep only individuals with z ≤ x_cut and renormalize: the
    /// truncate-the-data semantics. The result sums to one over the
    /// retained range.
    pub fn truncate_data(&self, x_cut: u32) -> Result<CurveData> {
        let kept: Vec<_> = self
            .rows
            .iter()
            .copied()
            .filter(|&(x, _)| x <= x_cut)
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyResult(x_cut));
        }
        let total: u64 = kept.iter().map(|&(_, c)| c).sum();
        Ok(CurveData {
            points: kept
                .into_iter()
                .map(|(x, c)| (x, c as f64 / total as f64))
                .collect(),
        })
    }
}

/// Curve view of a distribution: points (x, y) with y ∈ (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    points: Vec<(u32, f64)>,
}

impl CurveData {
    pub fn new(points: Vec<(u32, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("curve has no points".into()));
        }
        for &(x, y) in &points {
            if x == 0 || !(y > 0.0) || y > 1.0 {
                return Err(Error::Domain(format!(
                    "curve point ({x}, {y}) outside x >= 1, 0 < y <= 1"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(u32, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keep points with x ≤ x_cut, y values unchanged: the
    /// truncate-the-distribution semantics. The retained y values no
    /// longer sum to one.
    pub fn truncate_distribution(&self, x_cut: u32) -> Result<CurveData> {
        let points: Vec<_> = self
            .points
            .iter()
            .copied()
            .filter(|&(x, _)| x <= x_cut)
            .collect();
        if points.is_empty() {
            return Err(Error::EmptyResult(x_cut));
        }
        Ok(CurveData { points })
    }

    /// Compensated Σy.
    pub fn total_mass(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for &(_, y) in &self.points {
            acc.add(y);
        }
        acc.value()
    }
}

/// Complete sufficient statistics for both power-law families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    pub n: u64,
    /// Σ z_i = Σ x · count, exact.
    pub sum_z: u64,
    /// Σ ln z_i = Σ count · ln x.
    pub sum_log_z: f64,
}
