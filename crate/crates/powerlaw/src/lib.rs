//! Fitting and comparison of discrete power-law distributions on integer
//! frequency data.
//!
//! The crate provides:
//!
//! - [`specfun`]: Riemann zeta, the real-slice polylogarithm Li_s(e^β) with
//!   β ≤ 0, their s-derivatives, and the one-degree-of-freedom chi-squared
//!   survival function, all with explicit error bounds.
//! - [`data`]: frequency tables `(x, count)`, the derived curve and
//!   sufficient-statistic views, empirical CDFs, and the two tail-truncation
//!   semantics (truncate the distribution vs. truncate the data).
//! - [`distributions`]: the discrete power law `p(x) = x^-α / ζ(α)` and the
//!   discrete power law with exponential cutoff
//!   `p(x) = e^(βx) x^-α / Li_α(e^β)`, with pmf, log-pmf, CDF, mean, and a
//!   seeded sampler.
//! - [`estimators`]: least-squares fits of the log-log and direct curves
//!   (free and constrained to probability distributions) and maximum
//!   likelihood for both families.
//! - [`comparison`]: nested-model likelihood-ratio tests, the discrete
//!   two-sided Kolmogorov-Smirnov statistic, and a combined model-comparison
//!   report.
//!
//! The repository bundles `data/lotka_chemistry.csv`, Lotka's 1926
//! author-productivity counts for chemistry (6891 senior authors), which the
//! test suite uses as its reference dataset; see
//! [`data::FrequencyTable::lotka_chemistry`].
//!
//! ```
//! use powerlaw::comparison::build_comparison_report;
//! use powerlaw::data::FrequencyTable;
//! use powerlaw::estimators;
//!
//! let table = FrequencyTable::lotka_chemistry();
//! let mle = estimators::fit_mle_power_law(&table.sufficient_stats())?;
//! assert!((mle.alpha - 1.9665).abs() < 1e-3);
//!
//! // the cutoff family beats the plain power law decisively here
//! let report = build_comparison_report(&table, -1e-6)?;
//! assert!(report.power_law.lr_vs_cutoff.unwrap().reject_null);
//! assert!(report.cutoff.ks.d_statistic < report.power_law.ks.d_statistic);
//! # Ok::<(), powerlaw::Error>(())
//! ```

pub mod comparison;
pub mod data;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod specfun;

mod optimize;
mod sum;

pub use error::{Error, Result};
