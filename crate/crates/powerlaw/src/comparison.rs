//! Nested-model likelihood-ratio testing, the discrete two-sided
//! Kolmogorov-Smirnov statistic, and the combined comparison report.
//!
//! The likelihood ratio λ itself is never materialized (it underflows
//! around n ~ 10³); only -2 ln λ is computed, from the log-likelihoods.
//!
//! The KS statistic for integer-supported models evaluates
//! |F̂(x) - F(x)| on x = 1..x_max. Both CDFs are step functions constant
//! on [x, x+1), so the supremum over the reals is attained on that set,
//! and past x_max the gap 1 - F(x) only shrinks. The 95% critical value
//! 1.36/√n comes from the continuous approximation and is conservative
//! for discrete distributions, hence the explicit
//! `conservative_threshold` flag on every result: a rejection at this
//! threshold may not survive an exact p-value computation.

use crate::data::FrequencyTable;
use crate::distributions::{CutoffParams, Model, PowerLawParams};
use crate::error::{Error, Result};
use crate::estimators::{
    fit_mle_cutoff, fit_mle_fixed_beta, fit_mle_power_law, FitMethod, FitResult,
};
use crate::specfun::chi2_sf_1dof;
use crate::sum::NeumaierSum;
use serde::Serialize;
use std::fmt;

/// The 99th-percentile critical value of χ²₁, as conventionally quoted.
pub const CHI2_1DOF_CRITICAL_99: f64 = 6.64;

/// -2(ln L_null - ln L_alt), clamped at zero for round-off-level
/// violations. Errors when the alternative fits worse by more than 1e-6:
/// that signals a failed optimization upstream, not a statistical result.
pub fn lr_statistic(loglik_null: f64, loglik_alt: f64) -> Result<f64> {
    if loglik_alt < loglik_null - 1e-6 {
        return Err(Error::NestingViolation {
            null: loglik_null,
            alt: loglik_alt,
        });
    }
    Ok((-2.0 * (loglik_null - loglik_alt)).max(0.0))
}

/// Outcome of the one-degree-of-freedom likelihood-ratio test.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LrTestResult {
    /// -2 ln λ.
    pub statistic: f64,
    /// P(χ²₁ > statistic).
    pub p_value: f64,
    pub dof: u32,
    /// The conventional 99% critical value, 6.64.
    pub critical_value_99: f64,
    /// statistic > critical value at the configured level.
    pub reject_null: bool,
    /// Set when the null hypothesis sits on the β = 0 boundary of the
    /// parameter space, where the χ²₁ calibration of the statistic is
    /// not justified.
    pub boundary_null_warning: bool,
}

/// χ²₁ critical value at `level` by bisection on the survival function.
fn chi2_critical(level: f64) -> Result<f64> {
    if !(0.0 < level && level < 1.0) {
        return Err(Error::Domain(format!(
            "significance level must be in (0, 1), got {level}"
        )));
    }
    let target = 1.0 - level;
    let (mut lo, mut hi) = (0.0f64, 400.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi2_sf_1dof(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Likelihood-ratio test of a one-parameter null against the
/// two-parameter cutoff alternative.
pub fn lr_test(null_fit: &FitResult, alt_fit: &FitResult, level: f64) -> Result<LrTestResult> {
    if !null_fit.converged {
        return Err(Error::NotConverged(format!(
            "null fit ({}) had not converged",
            null_fit.method.name()
        )));
    }
    if !alt_fit.converged {
        return Err(Error::NotConverged(format!(
            "alternative fit ({}) had not converged",
            alt_fit.method.name()
        )));
    }
    let null_ok = matches!(
        null_fit.method,
        FitMethod::MlePowerLaw | FitMethod::MleFixedBeta
    );
    if !null_ok || alt_fit.method != FitMethod::MleCutoff {
        return Err(Error::InvalidParams(
            "the test needs a one-parameter null (power law or fixed-beta) \
             nested in the two-parameter cutoff alternative"
                .into(),
        ));
    }
    let ln0 = null_fit.log_likelihood.ok_or_else(|| {
        Error::InvalidParams("null fit carries no log-likelihood".into())
    })?;
    let ln1 = alt_fit.log_likelihood.ok_or_else(|| {
        Error::InvalidParams("alternative fit carries no log-likelihood".into())
    })?;
    let statistic = lr_statistic(ln0, ln1)?;
    let p_value = chi2_sf_1dof(statistic)?;
    let critical = chi2_critical(level)?;
    Ok(LrTestResult {
        statistic,
        p_value,
        dof: 1,
        critical_value_99: CHI2_1DOF_CRITICAL_99,
        reject_null: statistic > critical,
        boundary_null_warning: null_fit.method == FitMethod::MlePowerLaw,
    })
}

/// Two-sided KS distance between data and model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsResult {
    /// max over x = 1..x_max of |F̂(x) - F(x)|.
    pub d_statistic: f64,
    /// Smallest x attaining the maximum.
    pub argmax_x: u32,
    /// 1.36/√n, the 95% critical value of the continuous approximation.
    pub critical_value_95: f64,
    pub reject: bool,
    /// The 1.36/√n threshold overstates significance on integer support;
    /// a rejection here may be within acceptance under an exact p-value.
    pub conservative_threshold: bool,
}

/// KS statistic of `table` against `model`, evaluated on x = 1..x_max.
pub fn ks_statistic(table: &FrequencyTable, model: &Model) -> Result<KsResult> {
    let n = table.n() as f64;
    let ln_norm = model.ln_norm();
    if !ln_norm.is_finite() {
        return Err(Error::InvalidParams(
            "model normalizer is not finite".into(),
        ));
    }
    let mut model_cdf = NeumaierSum::new();
    let mut empirical: u64 = 0;
    let mut rows = table.rows().iter().peekable();
    let mut best = (f64::NEG_INFINITY, 1u32);
    for x in 1..=table.x_max() {
        let xf = f64::from(x);
        model_cdf.add((model.beta() * xf - model.alpha() * xf.ln() - ln_norm).exp());
        if let Some(&&(rx, c)) = rows.peek() {
            if rx == x {
                empirical += c;
                rows.next();
            }
        }
        let gap = (empirical as f64 / n - model_cdf.value()).abs();
        if gap > best.0 {
            best = (gap, x);
        }
    }
    let critical_value_95 = 1.36 / n.sqrt();
    Ok(KsResult {
        d_statistic: best.0,
        argmax_x: best.1,
        critical_value_95,
        reject: best.0 > critical_value_95,
        conservative_threshold: true,
    })
}

/// One fitted hypothesis inside a [`ComparisonReport`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypothesisSummary {
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub log_likelihood: f64,
    /// -2 ln λ against the cutoff alternative; absent on the alternative
    /// row itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr_vs_cutoff: Option<LrTestResult>,
    pub ks: KsResult,
    pub iterations: u32,
    pub converged: bool,
}

/// How close the β = 0 fit and the small-β probe fit are on the data
/// range: sup |p0 - p1| and the range of the ratio p0/p1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProximityDiagnostics {
    pub max_abs_diff: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

/// The three-hypothesis model comparison: the cutoff alternative, the
/// power law, and the fixed-β probe null that restores the interior
/// regularity conditions the boundary null lacks.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComparisonReport {
    pub n: u64,
    pub x_max: u32,
    pub beta_probe: f64,
    pub cutoff: HypothesisSummary,
    pub power_law: HypothesisSummary,
    pub probe: HypothesisSummary,
    pub ks_critical_value_95: f64,
    pub proximity: ProximityDiagnostics,
}

/// Fit all three hypotheses, run both LR tests and all three KS
/// statistics, and collect the power-law/probe proximity diagnostics.
pub fn build_comparison_report(table: &FrequencyTable, beta_probe: f64) -> Result<ComparisonReport> {
    if !(beta_probe < 0.0) {
        return Err(Error::InvalidParams(format!(
            "probe beta must be negative (got {beta_probe})"
        )));
    }
    let stats = table.sufficient_stats();
    let alt = fit_mle_cutoff(&stats)?;
    let pl = fit_mle_power_law(&stats)?;
    let probe = fit_mle_fixed_beta(&stats, beta_probe)?;

    let alt_params = CutoffParams::new(alt.alpha, alt.beta.unwrap())?;
    let pl_params = PowerLawParams::new(pl.alpha)?;
    let probe_params = CutoffParams::new(probe.alpha, beta_probe)?;

    let ks_alt = ks_statistic(table, &Model::Cutoff(alt_params))?;
    let ks_pl = ks_statistic(table, &Model::PowerLaw(pl_params))?;
    let ks_probe = ks_statistic(table, &Model::Cutoff(probe_params))?;

    let lr_pl = lr_test(&pl, &alt, 0.99)?;
    let lr_probe = lr_test(&probe, &alt, 0.99)?;

    let mut max_abs_diff: f64 = 0.0;
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = f64::NEG_INFINITY;
    for x in 1..=table.x_max() {
        let p0 = pl_params.pmf(x);
        let p1 = probe_params.pmf(x);
        max_abs_diff = max_abs_diff.max((p0 - p1).abs());
        ratio_min = ratio_min.min(p0 / p1);
        ratio_max = ratio_max.max(p0 / p1);
    }

    let report = ComparisonReport {
        n: table.n(),
        x_max: table.x_max(),
        beta_probe,
        cutoff: HypothesisSummary {
            alpha: alt.alpha,
            beta: alt.beta,
            log_likelihood: alt.log_likelihood.unwrap(),
            lr_vs_cutoff: None,
            ks: ks_alt,
            iterations: alt.iterations,
            converged: alt.converged,
        },
        power_law: HypothesisSummary {
            alpha: pl.alpha,
            beta: None,
            log_likelihood: pl.log_likelihood.unwrap(),
            lr_vs_cutoff: Some(lr_pl),
            ks: ks_pl,
            iterations: pl.iterations,
            converged: pl.converged,
        },
        probe: HypothesisSummary {
            alpha: probe.alpha,
            beta: probe.beta,
            log_likelihood: probe.log_likelihood.unwrap(),
            lr_vs_cutoff: Some(lr_probe),
            ks: ks_probe,
            iterations: probe.iterations,
            converged: probe.converged,
        },
        ks_critical_value_95: 1.36 / (table.n() as f64).sqrt(),
        proximity: ProximityDiagnostics {
            max_abs_diff,
            ratio_min,
            ratio_max,
        },
    };
    debug_assert!(report.cutoff.log_likelihood >= report.power_law.log_likelihood - 1e-9);
    debug_assert!(report.cutoff.log_likelihood >= report.probe.log_likelihood - 1e-9);
    Ok(report)
}

/// Format with 7 significant digits, the precision of the tabulated
/// comparisons.
pub fn sig7(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..7).contains(&mag) {
        return format!("{v:.6e}");
    }
    let decimals = (6 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model comparison (n = {}, x_max = {})", self.n, self.x_max)?;
        writeln!(f)?;
        writeln!(
            f,
            "{:<26} {:>12} {:>14} {:>14} {:>14} {:>12}",
            "hypothesis", "alpha", "beta", "log_lik", "-2 ln lambda", "KS D"
        )?;
        let mut row = |name: &str, h: &HypothesisSummary| {
            writeln!(
                f,
                "{:<26} {:>12} {:>14} {:>14} {:>14} {:>12}",
                name,
                sig7(h.alpha),
                h.beta.map_or_else(|| "0".into(), sig7),
                sig7(h.log_likelihood),
                h.lr_vs_cutoff
                    .map_or_else(|| "--".into(), |t| sig7(t.statistic)),
                sig7(h.ks.d_statistic),
            )
        };
        row("cutoff (alternative)", &self.cutoff)?;
        row("power law (beta = 0)", &self.power_law)?;
        row(&format!("probe (beta = {})", self.beta_probe), &self.probe)?;
        writeln!(f)?;
        writeln!(
            f,
            "KS critical value (95%, conservative): {}",
            sig7(self.ks_critical_value_95)
        )?;
        writeln!(
            f,
            "chi-squared(1) critical value (99%): {}",
            sig7(CHI2_1DOF_CRITICAL_99)
        )?;
        write!(
            f,
            "power law vs probe on [1, {}]: max |p0 - p1| = {}, ratio in [{}, {}]",
            self.x_max,
            sig7(self.proximity.max_abs_diff),
            sig7(self.proximity.ratio_min),
            sig7(self.proximity.ratio_max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lotka() -> FrequencyTable {
        FrequencyTable::lotka_chemistry()
    }

    #[test]
    fn lr_statistic_from_tabulated_log_likelihoods() {
        // twice the gaps between the rounded tabulated log-likelihoods
        let s = lr_statistic(-11705.124, -11646.153).unwrap();
        assert!((s - 117.942).abs() < 1e-9);
        let s = lr_statistic(-11705.068, -11646.153).unwrap();
        assert!((s - 117.830).abs() < 1e-9);
    }

    #[test]
    fn lr_statistic_edge_cases() {
        assert_eq!(lr_statistic(-5.0, -5.0).unwrap(), 0.0);
        // round-off-level inversion clamps to zero
        assert_eq!(lr_statistic(-5.0, -5.0 - 1e-9).unwrap(), 0.0);
        assert!(matches!(
            lr_statistic(-5.0, -5.1),
            Err(Error::NestingViolation { .. })
        ));
    }

    #[test]
    fn chi2_critical_matches_tables() {
        assert!((chi2_critical(0.99).unwrap() - 6.634_896_6).abs() < 1e-5);
        assert!((chi2_critical(0.95).unwrap() - 3.841_458_8).abs() < 1e-5);
    }

    #[test]
    fn lr_test_on_the_reference_data() {
        let stats = lotka().sufficient_stats();
        let alt = fit_mle_cutoff(&stats).unwrap();
        let pl = fit_mle_power_law(&stats).unwrap();
        let probe = fit_mle_fixed_beta(&stats, -1e-6).unwrap();

        let t0 = lr_test(&pl, &alt, 0.99).unwrap();
        assert!((t0.statistic - 117.939).abs() < 0.01);
        assert!(t0.reject_null);
        assert!(t0.boundary_null_warning);
        assert!(t0.p_value < 1e-25);
        assert_eq!(t0.critical_value_99, 6.64);

        let t1 = lr_test(&probe, &alt, 0.99).unwrap();
        assert!((t1.statistic - 117.830).abs() < 0.01);
        assert!(t1.reject_null);
        assert!(!t1.boundary_null_warning);
    }

    #[test]
    fn lr_test_identical_fits_do_not_reject() {
        let stats = lotka().sufficient_stats();
        let alt = fit_mle_cutoff(&stats).unwrap();
        let null = FitResult {
            method: FitMethod::MleFixedBeta,
            ..alt
        };
        let t = lr_test(&null, &alt, 0.99).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.p_value, 1.0);
        assert!(!t.reject_null);
    }

    #[test]
    fn lr_test_rejects_unconverged_fits() {
        let stats = lotka().sufficient_stats();
        let alt = fit_mle_cutoff(&stats).unwrap();
        let mut bad = fit_mle_power_law(&stats).unwrap();
        bad.converged = false;
        assert!(matches!(
            lr_test(&bad, &alt, 0.99),
            Err(Error::NotConverged(_))
        ));
    }

    #[test]
    fn ks_against_fitted_models_regression() {
        let table = lotka();
        let stats = table.sufficient_stats();
        let alt = fit_mle_cutoff(&stats).unwrap();
        let m = Model::Cutoff(CutoffParams::new(alt.alpha, alt.beta.unwrap()).unwrap());
        let ks = ks_statistic(&table, &m).unwrap();
        assert!((ks.d_statistic - 0.007_589_275).abs() < 1e-7);
        assert_eq!(ks.argmax_x, 1);
        assert!((ks.critical_value_95 - 0.016_383_16).abs() < 1e-7);
        assert!(!ks.reject);
        assert!(ks.conservative_threshold);
    }

    #[test]
    fn ks_degenerate_point_mass_table() {
        let t = FrequencyTable::new(vec![(1, 9)]).unwrap();
        let m = Model::PowerLaw(PowerLawParams::new(2.0).unwrap());
        let ks = ks_statistic(&t, &m).unwrap();
        // empirical F(1) = 1 vs model F(1) = 1/ζ(2)
        assert!((ks.d_statistic - (1.0 - 0.607_927_101_9)).abs() < 1e-9);
        assert_eq!(ks.argmax_x, 1);
    }

    #[test]
    fn ks_d_is_zero_only_for_matching_cdfs() {
        let m = Model::PowerLaw(PowerLawParams::new(2.0).unwrap());
        // a table whose empirical CDF equals the model CDF at x = 1 still
        // disagrees beyond it
        let t = FrequencyTable::new(vec![(1, 6079), (2, 3921)]).unwrap();
        let ks = ks_statistic(&t, &m).unwrap();
        assert!(ks.d_statistic > 0.0 && ks.d_statistic <= 1.0);
    }

    #[test]
    fn report_reproduces_the_comparison_table() {
        let report = build_comparison_report(&lotka(), -1e-6).unwrap();
        assert!((report.cutoff.alpha - 1.815_238_7).abs() < 1e-6);
        assert!((report.cutoff.beta.unwrap() + 0.017_286_70).abs() < 1e-7);
        assert!((report.cutoff.log_likelihood + 11_646.140).abs() < 1e-2);
        assert!((report.power_law.alpha - 1.966_509_9).abs() < 1e-6);
        assert!((report.probe.alpha - 1.966_427_3).abs() < 1e-6);
        assert!(report.cutoff.lr_vs_cutoff.is_none());
        assert!(report.power_law.lr_vs_cutoff.unwrap().boundary_null_warning);
        assert!(!report.probe.lr_vs_cutoff.unwrap().boundary_null_warning);
        // every KS max sits at x = 1
        assert_eq!(report.cutoff.ks.argmax_x, 1);
        assert_eq!(report.power_law.ks.argmax_x, 1);
        assert_eq!(report.probe.ks.argmax_x, 1);
        // the alternative dominates both nulls
        assert!(report.cutoff.log_likelihood >= report.power_law.log_likelihood);
        assert!(report.cutoff.log_likelihood >= report.probe.log_likelihood);
        // proximity of the two null pmfs on the data range
        assert!(report.proximity.max_abs_diff < 2.5e-5);
        assert!(report.proximity.ratio_min > 0.9997);
        assert!(report.proximity.ratio_max < 1.0001);
    }

    #[test]
    fn report_is_recomputable_from_stored_parameters() {
        let table = lotka();
        let report = build_comparison_report(&table, -1e-6).unwrap();
        // KS D re-derivable from the stored parameters
        let m = Model::Cutoff(
            CutoffParams::new(report.cutoff.alpha, report.cutoff.beta.unwrap()).unwrap(),
        );
        let ks = ks_statistic(&table, &m).unwrap();
        assert_eq!(ks.d_statistic, report.cutoff.ks.d_statistic);
        // LR statistic re-derivable from the stored log-likelihoods
        let lr = lr_statistic(report.probe.log_likelihood, report.cutoff.log_likelihood).unwrap();
        assert!((lr - report.probe.lr_vs_cutoff.unwrap().statistic).abs() < 1e-12);
    }

    #[test]
    fn report_serializes_and_displays() {
        let report = build_comparison_report(&lotka(), -1e-6).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"cutoff\""));
        assert!(json.contains("\"power_law\""));
        assert!(json.contains("\"probe\""));
        let text = report.to_string();
        assert!(text.contains("hypothesis"));
        assert!(text.contains("cutoff (alternative)"));
        assert!(text.contains("KS critical value"));
    }

    #[test]
    fn sig7_formats_seven_significant_digits() {
        assert_eq!(sig7(1.8152375), "1.815238");
        assert_eq!(sig7(-11646.153), "-11646.15");
        assert_eq!(sig7(0.007589275), "0.007589275");
        assert_eq!(sig7(0.0), "0");
    }
}
