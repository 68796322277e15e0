//! Data ingestion, tie de-grouping, and the bundled wind-catastrophe case
//! study.
//!
//! Loss data published in rounded units arrives with heavy ties: every loss
//! in an interval (v − ½, v + ½) prints as v. Fitting continuous models to
//! such clustered values distorts distance-based estimators in particular,
//! so [`degroup`] replaces each tie run by the conditional expectations of
//! the order statistics of a uniform sample on the underlying interval,
//! which spreads the run evenly while preserving its mean exactly.
//!
//! The bundled data set ([`wind_catastrophes`]) holds 40 wind-catastrophe
//! losses (in millions) that were published rounded to the nearest million
//! and then de-grouped by exactly that procedure; [`wind_runs`] carries the
//! original rounded runs so the derivation can be replayed. The canonical
//! values are the de-grouped numbers at the 2-decimal precision they are
//! conventionally printed at, since that is the form every published fit
//! refers to. [`wind_workflow`] fits all ten estimators to them.

use std::fmt::Write as _;
use std::path::Path;

use crate::distribution::Sample;
use crate::error::{LomaxError, LomaxResult};
use crate::estimators::{estimate_many, EstimateResult, Method};

/// The 40 de-grouped wind-catastrophe losses, in millions.
pub const WIND: [f64; 40] = [
    1.58, 1.65, 1.73, 1.81, 1.88, 1.96, 2.04, 2.12, 2.19, 2.27, 2.35, 2.42, 2.70, 2.90, 3.10,
    3.30, 3.75, 4.00, 4.25, 4.70, 4.90, 5.10, 5.30, 5.70, 5.90, 6.10, 6.30, 7.83, 8.17, 9.00,
    15.00, 17.00, 22.00, 23.00, 23.83, 24.17, 25.00, 27.00, 32.00, 43.00,
];

/// The rounded source runs behind [`WIND`]: (rounded value, multiplicity).
/// A rounded value v stands for the interval (v − ½, v + ½).
pub const WIND_RUNS: [(f64, usize); 16] = [
    (2.0, 12),
    (3.0, 4),
    (4.0, 3),
    (5.0, 4),
    (6.0, 4),
    (8.0, 2),
    (9.0, 1),
    (15.0, 1),
    (17.0, 1),
    (22.0, 1),
    (23.0, 1),
    (24.0, 2),
    (25.0, 1),
    (27.0, 1),
    (32.0, 1),
    (43.0, 1),
];

/// The wind-catastrophe losses as a validated [`Sample`].
pub fn wind_catastrophes() -> Sample {
    Sample::new(WIND.to_vec()).expect("bundled data is valid")
}

/// De-group one run of k tied observations known to lie in (l, u).
///
/// Returns the k values ((k+1−j)/(k+1))·l + (j/(k+1))·u for j = 1..k: the
/// expected order statistics of k independent uniforms on (l, u). The output
/// is strictly increasing, interior to the interval, and has mean (l+u)/2.
///
/// # Errors
///
/// Fails unless l < u (both finite) and k ≥ 1.
///
/// # Example
///
/// ```
/// use lomax::data::degroup_run;
/// assert_eq!(degroup_run(0.0, 1.0, 3).unwrap(), vec![0.25, 0.5, 0.75]);
/// ```
pub fn degroup_run(l: f64, u: f64, k: usize) -> LomaxResult<Vec<f64>> {
    if !(l.is_finite() && u.is_finite() && l < u) {
        return Err(LomaxError::InvalidParameter {
            name: "l".to_string(),
            value: l,
            reason: format!("de-grouping needs a finite interval with l < u, got u = {u}"),
        });
    }
    if k == 0 {
        return Err(LomaxError::InvalidParameter {
            name: "k".to_string(),
            value: 0.0,
            reason: "de-grouping needs at least one observation".to_string(),
        });
    }
    let kf = (k + 1) as f64;
    Ok((1..=k)
        .map(|j| (kf - j as f64) / kf * l + j as f64 / kf * u)
        .collect())
}

/// Tied rounded observations with their underlying intervals.
///
/// Runs must be sorted, non-overlapping, and each have lower < upper.
#[derive(Debug, Clone)]
pub struct GroupedTies {
    runs: Vec<(f64, f64, usize)>,
}

impl GroupedTies {
    /// Validate a list of (lower, upper, count) runs.
    ///
    /// # Errors
    ///
    /// Fails on an empty list, a run with lower ≥ upper or count 0, or
    /// overlapping/unsorted runs.
    pub fn new(runs: Vec<(f64, f64, usize)>) -> LomaxResult<Self> {
        if runs.is_empty() {
            return Err(LomaxError::DataError {
                reason: "no tie runs given".to_string(),
            });
        }
        for (i, &(l, u, k)) in runs.iter().enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) || k == 0 {
                return Err(LomaxError::DataError {
                    reason: format!("run {} has an invalid interval or count", i + 1),
                });
            }
            if i > 0 && runs[i - 1].1 > l {
                return Err(LomaxError::DataError {
                    reason: format!("run {} overlaps its predecessor", i + 1),
                });
            }
        }
        Ok(GroupedTies { runs })
    }

    /// Build runs from rounded values: each distinct value v of the sample,
    /// taken in increasing order with multiplicity k, becomes the run
    /// (v − width/2, v + width/2, k).
    pub fn from_rounded(s: &Sample, width: f64) -> LomaxResult<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(LomaxError::InvalidParameter {
                name: "width".to_string(),
                value: width,
                reason: "rounding width must be finite and positive".to_string(),
            });
        }
        let sorted = s.sorted();
        let mut runs = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let v = sorted[i];
            let mut k = 1;
            while i + k < sorted.len() && sorted[i + k] == v {
                k += 1;
            }
            runs.push((v - width / 2.0, v + width / 2.0, k));
            i += k;
        }
        GroupedTies::new(runs)
    }

    /// The validated runs.
    pub fn runs(&self) -> &[(f64, f64, usize)] {
        &self.runs
    }

    /// De-group every run and concatenate the results in order.
    pub fn expand(&self) -> Vec<f64> {
        self.runs
            .iter()
            .flat_map(|&(l, u, k)| degroup_run(l, u, k).expect("runs validated"))
            .collect()
    }
}

/// De-group a sample of rounded values with unit rounding width.
///
/// Every tie run of a value v is replaced by [`degroup_run`] on
/// (v − ½, v + ½); untied values are their own interval midpoint and pass
/// through unchanged. The sample mean is preserved to rounding error.
///
/// # Errors
///
/// Fails if any de-grouped value is negative (a value below ½ has an
/// interval reaching below zero, outside the Lomax support).
pub fn degroup(s: &Sample) -> LomaxResult<Sample> {
    let expanded = GroupedTies::from_rounded(s, 1.0)?.expand();
    Sample::new(expanded)
}

/// How [`load_sample`] interprets a file.
#[derive(Debug, Clone, Copy)]
pub enum SampleFormat<'a> {
    /// One real number per line; blank lines and lines starting with `#`
    /// are ignored.
    Plain,
    /// Delimited file with a header row; values come from the named column.
    Csv { column: &'a str },
}

/// Load a sample from disk.
///
/// # Errors
///
/// Fails on I/O errors, unparseable values (the error names the line),
/// a missing CSV column, or an empty/invalid resulting sample.
///
/// # Example
///
/// ```no_run
/// use lomax::data::{load_sample, SampleFormat};
/// let s = load_sample("losses.txt".as_ref(), SampleFormat::Plain).unwrap();
/// assert!(!s.is_empty());
/// ```
pub fn load_sample(path: &Path, format: SampleFormat<'_>) -> LomaxResult<Sample> {
    let io_err = |e: std::io::Error| LomaxError::DataError {
        reason: format!("{}: {e}", path.display()),
    };
    match format {
        SampleFormat::Plain => {
            let text = std::fs::read_to_string(path).map_err(io_err)?;
            let mut values = Vec::new();
            for (idx, line) in text.lines().enumerate() {
                let token = line.trim();
                if token.is_empty() || token.starts_with('#') {
                    continue;
                }
                let v: f64 = token.parse().map_err(|_| LomaxError::DataError {
                    reason: format!(
                        "{}: line {}: cannot parse {token:?} as a number",
                        path.display(),
                        idx + 1
                    ),
                })?;
                values.push(v);
            }
            if values.is_empty() {
                return Err(LomaxError::DataError {
                    reason: format!("{}: no values found", path.display()),
                });
            }
            Sample::new(values)
        }
        SampleFormat::Csv { column } => {
            let mut reader = csv::Reader::from_path(path).map_err(|e| LomaxError::DataError {
                reason: format!("{}: {e}", path.display()),
            })?;
            let headers = reader.headers().map_err(|e| LomaxError::DataError {
                reason: format!("{}: {e}", path.display()),
            })?;
            let col = headers
                .iter()
                .position(|h| h == column)
                .ok_or_else(|| LomaxError::DataError {
                    reason: format!("{}: no column named {column:?}", path.display()),
                })?;
            let mut values = Vec::new();
            for (idx, record) in reader.records().enumerate() {
                let record = record.map_err(|e| LomaxError::DataError {
                    reason: format!("{}: {e}", path.display()),
                })?;
                let token = record.get(col).unwrap_or("").trim();
                let v: f64 = token.parse().map_err(|_| LomaxError::DataError {
                    reason: format!(
                        "{}: line {}: cannot parse {token:?} as a number",
                        path.display(),
                        idx + 2
                    ),
                })?;
                values.push(v);
            }
            if values.is_empty() {
                return Err(LomaxError::DataError {
                    reason: format!("{}: no values found", path.display()),
                });
            }
            Sample::new(values)
        }
    }
}

/// Write sample values, one per line, with round-trip precision.
pub fn format_sample(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Fit all ten estimators to the bundled wind-catastrophe data.
///
/// Fully deterministic; individual estimator failures (there are none on
/// this data) would be reported in their rows rather than raised.
pub fn wind_workflow() -> Vec<EstimateResult> {
    estimate_many(&wind_catastrophes(), &Method::ALL)
}
