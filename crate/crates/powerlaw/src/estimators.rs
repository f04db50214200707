//! Parameter estimation: four least-squares fits of the frequency curve
//! and maximum likelihood for both model families.
//!
//! Curve fits (on [`CurveData`] points (x_i, y_i)):
//!
//! - [`fit_ols_loglog`]: closed-form least squares of ln y on ln x,
//!   two free parameters (α, b).
//! - [`fit_constrained_ols`]: least squares of ln y on ln x restricted to
//!   lines ln y = -α ln x - ln ζ(α), so the fit is itself a distribution.
//! - [`fit_nls`]: non-linear least squares of y against e^b x^-α.
//! - [`fit_constrained_nls`]: non-linear least squares against x^-α/ζ(α).
//!
//! Likelihood fits (on [`SufficientStats`], everything the likelihood
//! needs):
//!
//! - [`fit_mle_power_law`]: α maximizing -α Σln z - n ln ζ(α).
//! - [`fit_mle_cutoff`]: (α, β) maximizing β Σz - α Σln z - n ln Li_α(e^β),
//!   with β kept negative by optimizing t = ln(-β).
//! - [`fit_mle_fixed_beta`]: the profile fit in α at a fixed β < 0.
//!
//! One-dimensional problems use a coarse scan plus Brent refinement
//! (tolerance 1e-10 in the parameter) and a secant polish of the
//! stationarity condition; the two-dimensional cutoff fit uses Newton with
//! the analytic gradient and a finite-difference Hessian, falling back to
//! Nelder-Mead. Every iterative fit records its iteration count and
//! whether it converged. Residual sums of squares are reported as
//! `objective` for the least-squares fits; r² is deliberately not
//! computed (the residuals are not remotely normal for these curves).

use crate::data::{CurveData, SufficientStats};
use crate::error::{Error, Result};
use crate::optimize;
use crate::specfun;
use crate::sum::NeumaierSum;
use serde::Serialize;

/// Which estimator produced a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    OlsLoglog,
    ConstrainedOls,
    Nls,
    ConstrainedNls,
    MlePowerLaw,
    MleCutoff,
    MleFixedBeta,
}

impl FitMethod {
    pub fn name(&self) -> &'static str {
        match self {
            FitMethod::OlsLoglog => "ols_loglog",
            FitMethod::ConstrainedOls => "constrained_ols",
            FitMethod::Nls => "nls",
            FitMethod::ConstrainedNls => "constrained_nls",
            FitMethod::MlePowerLaw => "mle_power_law",
            FitMethod::MleCutoff => "mle_cutoff",
            FitMethod::MleFixedBeta => "mle_fixed_beta",
        }
    }
}

/// Outcome of any fit. `b` is present for the two-parameter curve fits,
/// `beta` for the cutoff-family fits, `log_likelihood` for the MLE fits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub method: FitMethod,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_likelihood: Option<f64>,
    /// The minimized residual sum of squares, or the maximized
    /// log-likelihood for the MLE methods.
    pub objective: f64,
    pub converged: bool,
    pub iterations: u32,
}

// ---------------------------------------------------------------------
// objectives, public so brute-force scans can verify the optimizers
// against exactly what they minimized
// ---------------------------------------------------------------------

/// Σ (ln y + α ln x - b)².
pub fn ols_objective(curve: &CurveData, alpha: f64, b: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for &(x, y) in curve.points() {
        let r = y.ln() + alpha * f64::from(x).ln() - b;
        acc.add(r * r);
    }
    acc.value()
}

/// Σ (ln y + α ln x + ln ζ(α))²; +∞ outside α > 1.
pub fn constrained_ols_objective(curve: &CurveData, alpha: f64) -> f64 {
    match specfun::zeta(alpha) {
        Ok(z) => ols_objective(curve, alpha, -z.value.ln()),
        Err(_) => f64::INFINITY,
    }
}

/// Σ (y - e^b x^-α)².
pub fn nls_objective(curve: &CurveData, alpha: f64, b: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for &(x, y) in curve.points() {
        let r = y - (b - alpha * f64::from(x).ln()).exp();
        acc.add(r * r);
    }
    acc.value()
}

/// Σ (y - x^-α/ζ(α))²; +∞ outside α > 1.
pub fn constrained_nls_objective(curve: &CurveData, alpha: f64) -> f64 {
    match specfun::zeta(alpha) {
        Ok(z) => nls_objective(curve, alpha, -z.value.ln()),
        Err(_) => f64::INFINITY,
    }
}

/// ℓ(α) = -α Σln z - n ln ζ(α); -∞ outside α > 1.
pub fn log_likelihood_power_law(stats: &SufficientStats, alpha: f64) -> f64 {
    match specfun::zeta(alpha) {
        Ok(z) => -alpha * stats.sum_log_z - stats.n as f64 * z.value.ln(),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// ℓ(α, β) = β Σz - α Σln z - n ln Li_α(e^β); -∞ outside the parameter
/// space.
pub fn log_likelihood_cutoff(stats: &SufficientStats, alpha: f64, beta: f64) -> f64 {
    match specfun::polylog(alpha, beta) {
        Ok(li) => {
            beta * stats.sum_z as f64 - alpha * stats.sum_log_z
                - stats.n as f64 * li.value.ln()
        }
        Err(_) => f64::NEG_INFINITY,
    }
}

// ---------------------------------------------------------------------
// curve fits
// ---------------------------------------------------------------------

/// Closed-form least squares of ln y = -α ln x + b.
pub fn fit_ols_loglog(curve: &CurveData) -> Result<FitResult> {
    if curve.len() < 2 {
        return Err(Error::DegenerateInput(
            "log-log least squares needs at least 2 points".into(),
        ));
    }
    let m = curve.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (
        NeumaierSum::new(),
        NeumaierSum::new(),
        NeumaierSum::new(),
        NeumaierSum::new(),
    );
    for &(x, y) in curve.points() {
        let lx = f64::from(x).ln();
        let ly = y.ln();
        sx.add(lx);
        sy.add(ly);
        sxx.add(lx * lx);
        sxy.add(lx * ly);
    }
    let (sx, sy, sxx, sxy) = (sx.value(), sy.value(), sxx.value(), sxy.value());
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateInput(
            "all x values coincide; the slope is undefined".into(),
        ));
    }
    let slope = (m * sxy - sx * sy) / denom;
    let b = (sy - slope * sx) / m;
    let alpha = -slope;
    Ok(FitResult {
        method: FitMethod::OlsLoglog,
        alpha,
        b: Some(b),
        beta: None,
        log_likelihood: None,
        objective: ols_objective(curve, alpha, b),
        converged: true,
        iterations: 0,
    })
}

const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 50.0;

/// Least squares of ln y on ln x constrained to probability
/// distributions: α > 1 minimizing Σ (ln y + α ln x + ln ζ(α))².
pub fn fit_constrained_ols(curve: &CurveData) -> Result<FitResult> {
    let r = optimize::scan_brent_min(
        |a| constrained_ols_objective(curve, a),
        ALPHA_LO,
        ALPHA_HI,
        256,
        1e-10,
    )?;
    Ok(FitResult {
        method: FitMethod::ConstrainedOls,
        alpha: r.x,
        b: None,
        beta: None,
        log_likelihood: None,
        objective: r.fx,
        converged: true,
        iterations: r.iterations,
    })
}

/// Non-linear least squares of y against e^b x^-α, started from the
/// log-log fit.
pub fn fit_nls(curve: &CurveData) -> Result<FitResult> {
    if curve.len() < 2 {
        return Err(Error::DegenerateInput(
            "non-linear least squares needs at least 2 points".into(),
        ));
    }
    let init = fit_ols_loglog(curve)?;
    let f = |p: &[f64; 2]| nls_objective(curve, p[0], p[1]);
    let grad = |p: &[f64; 2]| {
        let (mut ga, mut gb) = (NeumaierSum::new(), NeumaierSum::new());
        for &(x, y) in curve.points() {
            let lx = f64::from(x).ln();
            let model = (p[1] - p[0] * lx).exp();
            let r = y - model;
            ga.add(2.0 * r * model * lx);
            gb.add(-2.0 * r * model);
        }
        [ga.value(), gb.value()]
    };
    let r = optimize::newton_2d(f, grad, [init.alpha, init.b.unwrap()], 1e-9, 1e-12);
    if !r.converged {
        return Err(Error::Convergence(
            "non-linear least squares did not reach a stationary point".into(),
        ));
    }
    Ok(FitResult {
        method: FitMethod::Nls,
        alpha: r.x[0],
        b: Some(r.x[1]),
        beta: None,
        log_likelihood: None,
        objective: r.fx,
        converged: true,
        iterations: r.iterations,
    })
}

/// Non-linear least squares against the one-parameter family x^-α/ζ(α).
pub fn fit_constrained_nls(curve: &CurveData) -> Result<FitResult> {
    let r = optimize::scan_brent_min(
        |a| constrained_nls_objective(curve, a),
        ALPHA_LO,
        ALPHA_HI,
        256,
        1e-10,
    )?;
    Ok(FitResult {
        method: FitMethod::ConstrainedNls,
        alpha: r.x,
        b: None,
        beta: None,
        log_likelihood: None,
        objective: r.fx,
        converged: true,
        iterations: r.iterations,
    })
}

// ---------------------------------------------------------------------
// likelihood fits
// ---------------------------------------------------------------------

fn check_not_point_mass(stats: &SufficientStats) -> Result<()> {
    // Jensen: Σ ln z / n ≤ ln(Σ z / n), equal only when all z coincide
    let mean = stats.sum_z as f64 / stats.n as f64;
    if stats.sum_log_z / stats.n as f64 >= mean.ln() - 1e-12 {
        return Err(Error::DegenerateInput(
            "all observations are equal; the likelihood has no interior maximum".into(),
        ));
    }
    Ok(())
}

/// Maximum likelihood for the discrete power law. The returned α
/// satisfies the stationarity condition |Σln z / n + ζ'(α)/ζ(α)| ≤ 1e-8.
pub fn fit_mle_power_law(stats: &SufficientStats) -> Result<FitResult> {
    if stats.sum_log_z <= 0.0 {
        return Err(Error::DegenerateInput(
            "all observations are 1; the power-law likelihood increases without bound".into(),
        ));
    }
    let n = stats.n as f64;
    let r = optimize::scan_brent_min(
        |a| -log_likelihood_power_law(stats, a) / n,
        ALPHA_LO,
        ALPHA_HI,
        512,
        1e-10,
    )?;
    // polish the stationarity condition m2 + ζ'(α)/ζ(α) = 0 by secant
    let m2 = stats.sum_log_z / n;
    let g = |a: f64| -> Result<f64> {
        Ok(m2 + specfun::zeta_deriv(a)?.value / specfun::zeta(a)?.value)
    };
    let (alpha, iters) = secant_root(g, r.x, r.x + 1e-6, 1e-12)?;
    let resid = g(alpha)?.abs();
    if resid > 1e-8 {
        return Err(Error::Convergence(format!(
            "power-law MLE stationarity residual {resid:e} exceeds 1e-8"
        )));
    }
    let ll = log_likelihood_power_law(stats, alpha);
    Ok(FitResult {
        method: FitMethod::MlePowerLaw,
        alpha,
        b: None,
        beta: None,
        log_likelihood: Some(ll),
        objective: ll,
        converged: true,
        iterations: r.iterations + iters,
    })
}

/// Secant iteration on g = 0; a step that leaves g's domain ends the
/// polish at the last good iterate (the caller re-checks the residual).
fn secant_root(
    g: impl Fn(f64) -> Result<f64>,
    x0: f64,
    x1: f64,
    tol: f64,
) -> Result<(f64, u32)> {
    let (mut a, mut b) = (x0, x1);
    let mut fa = g(a)?;
    let mut fb = match g(b) {
        Ok(v) => v,
        Err(_) => return Ok((a, 0)),
    };
    for i in 0..60 {
        if (b - a).abs() < tol || fb == fa {
            return Ok((b, i));
        }
        let c = b - fb * (b - a) / (fb - fa);
        if !c.is_finite() {
            return Ok((b, i));
        }
        a = b;
        fa = fb;
        b = c;
        fb = match g(b) {
            Ok(v) => v,
            Err(_) => return Ok((a, i)),
        };
    }
    Ok((b, 60))
}

/// Joint maximum likelihood for the cutoff family. β is optimized as
/// t = ln(-β); convergence requires the (α, β)-gradient components
/// (Σz/n - Li_(α-1)/Li_α and -Σln z/n - ∂ₛLi/Li_α) to fall below 1e-7.
///
/// Starts from (α̂ of the power-law fit, β = -n/Σz). Errors with
/// [`Error::Boundary`] when the maximizer runs off to β → 0⁻, where the
/// supremum is the power-law fit itself.
pub fn fit_mle_cutoff(stats: &SufficientStats) -> Result<FitResult> {
    check_not_point_mass(stats)?;
    let n = stats.n as f64;
    let m1 = stats.sum_z as f64 / n;
    let m2 = stats.sum_log_z / n;

    // per-observation gradient of -ℓ in (α, t); β = -e^t
    let grad_ab = |alpha: f64, beta: f64| -> Option<[f64; 2]> {
        let li = specfun::polylog(alpha, beta).ok()?;
        let li_m1 = specfun::polylog(alpha - 1.0, beta).ok()?;
        let ds = specfun::polylog_ds(alpha, beta).ok()?;
        Some([
            m2 + ds.value / li.value,
            -m1 + li_m1.value / li.value,
        ])
    };
    let f = |p: &[f64; 2]| -log_likelihood_cutoff(stats, p[0], -p[1].exp()) / n;
    let g = |p: &[f64; 2]| {
        let beta = -p[1].exp();
        match grad_ab(p[0], beta) {
            Some(gab) => [gab[0], gab[1] * beta],
            None => [f64::NAN, f64::NAN],
        }
    };

    let init_alpha = match fit_mle_power_law(stats) {
        Ok(fit) => fit.alpha,
        Err(Error::DegenerateInput(m)) => return Err(Error::DegenerateInput(m)),
        Err(_) => 1.5,
    };
    // The likelihood is concave (exponential family), so the maximizer is
    // interior exactly when ∂ℓ/∂β > 0 at the β = 0 restricted optimum:
    // the sample mean must fall short of the β → 0⁻ model-mean limit
    // ζ(α̂₀-1)/ζ(α̂₀), which is infinite for α̂₀ ≤ 2.
    if init_alpha > 2.0 + 1e-9 {
        let mean_limit = specfun::zeta(init_alpha - 1.0)?.value / specfun::zeta(init_alpha)?.value;
        if m1 >= mean_limit {
            return Err(Error::Boundary);
        }
    }
    let init_t = (n / stats.sum_z as f64).ln();
    let r = optimize::newton_2d(f, g, [init_alpha, init_t], 1e-9, 1e-11);

    let alpha = r.x[0];
    let beta = -r.x[1].exp();
    if beta > -1e-12 {
        return Err(Error::Boundary);
    }
    let gab = grad_ab(alpha, beta).ok_or(Error::Boundary)?;
    let gnorm = (gab[0] * gab[0] + gab[1] * gab[1]).sqrt();
    if gnorm > 1e-7 {
        return Err(Error::Convergence(format!(
            "cutoff MLE gradient norm {gnorm:e} exceeds 1e-7 at (α = {alpha}, β = {beta})"
        )));
    }
    let ll = log_likelihood_cutoff(stats, alpha, beta);
    Ok(FitResult {
        method: FitMethod::MleCutoff,
        alpha,
        b: None,
        beta: Some(beta),
        log_likelihood: Some(ll),
        objective: ll,
        converged: true,
        iterations: r.iterations,
    })
}

/// Profile maximum likelihood in α at a fixed β < 0. Any real α is
/// admissible: β < 0 normalizes the pmf for every α.
pub fn fit_mle_fixed_beta(stats: &SufficientStats, beta: f64) -> Result<FitResult> {
    if !(beta < 0.0) {
        return Err(Error::InvalidParams(format!(
            "fixed-beta fit requires beta < 0 (got {beta})"
        )));
    }
    check_not_point_mass(stats)?;
    let n = stats.n as f64;
    let r = optimize::scan_brent_min(
        |a| -log_likelihood_cutoff(stats, a, beta) / n,
        -10.0,
        ALPHA_HI,
        512,
        1e-10,
    )?;
    let m2 = stats.sum_log_z / n;
    let g = |a: f64| -> Result<f64> {
        Ok(m2 + specfun::polylog_ds(a, beta)?.value / specfun::polylog(a, beta)?.value)
    };
    let (alpha, iters) = secant_root(g, r.x, r.x + 1e-6, 1e-12)?;
    let resid = g(alpha)?.abs();
    if resid > 1e-7 {
        return Err(Error::Convergence(format!(
            "fixed-beta MLE stationarity residual {resid:e} exceeds 1e-7"
        )));
    }
    let ll = log_likelihood_cutoff(stats, alpha, beta);
    Ok(FitResult {
        method: FitMethod::MleFixedBeta,
        alpha,
        b: None,
        beta: Some(beta),
        log_likelihood: Some(ll),
        objective: ll,
        converged: true,
        iterations: r.iterations + iters,
    })
}

/// Deterministic brute-force grid scans for verifying the optimizers.
pub mod oracle {
    /// Minimum of f over {lo, lo+step, …, hi}; returns (argmin, min).
    pub fn grid_min_1d(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
        let mut best = (lo, f64::INFINITY);
        let count = ((hi - lo) / step).round() as usize;
        for i in 0..=count {
            let x = lo + step * i as f64;
            let v = f(x);
            if v.is_finite() && v < best.1 {
                best = (x, v);
            }
        }
        best
    }

    /// Minimum of f over the rectangle grid; returns ((x, y), min).
    pub fn grid_min_2d(
        mut f: impl FnMut(f64, f64) -> f64,
        x: (f64, f64, f64),
        y: (f64, f64, f64),
    ) -> ((f64, f64), f64) {
        let mut best = ((x.0, y.0), f64::INFINITY);
        let nx = ((x.1 - x.0) / x.2).round() as usize;
        let ny = ((y.1 - y.0) / y.2).round() as usize;
        for i in 0..=nx {
            let xi = x.0 + x.2 * i as f64;
            for j in 0..=ny {
                let yj = y.0 + y.2 * j as f64;
                let v = f(xi, yj);
                if v.is_finite() && v < best.1 {
                    best = ((xi, yj), v);
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FrequencyTable;

    fn lotka_curve() -> CurveData {
        FrequencyTable::lotka_chemistry().curve()
    }

    fn lotka_stats() -> SufficientStats {
        FrequencyTable::lotka_chemistry().sufficient_stats()
    }

    #[test]
    fn ols_exact_power_law_has_zero_residual() {
        let c = 0.3;
        let pts: Vec<(u32, f64)> = (1..=40).map(|x| (x, c * f64::from(x).powi(-2))).collect();
        let curve = CurveData::new(pts).unwrap();
        let fit = fit_ols_loglog(&curve).unwrap();
        assert!((fit.alpha - 2.0).abs() < 1e-12);
        assert!((fit.b.unwrap() - c.ln()).abs() < 1e-12);
        assert!(fit.objective < 1e-24);
    }

    #[test]
    fn ols_lotka_regression() {
        let fit = fit_ols_loglog(&lotka_curve()).unwrap();
        assert!((fit.alpha - 1.812_700_341_127_419).abs() < 1e-9);
        assert!((fit.b.unwrap() + 0.880_305_982_397_047_7).abs() < 1e-9);
        assert!((fit.objective - 17.645_041_592_2).abs() < 1e-6);
    }

    #[test]
    fn ols_rejects_degenerate_input() {
        let curve = CurveData::new(vec![(3, 0.5), (3, 0.25)]);
        // duplicate x still builds a curve; degenerate slope is the fit's
        // problem
        let fit = fit_ols_loglog(&curve.unwrap());
        assert!(matches!(fit, Err(Error::DegenerateInput(_))));
        assert!(fit_ols_loglog(&CurveData::new(vec![(5, 0.2)]).unwrap()).is_err());
    }

    #[test]
    fn constrained_ols_recovers_exact_distribution() {
        let z = specfun::zeta(2.2).unwrap().value;
        let pts: Vec<(u32, f64)> = (1..=50)
            .map(|x| (x, f64::from(x).powf(-2.2) / z))
            .collect();
        let fit = fit_constrained_ols(&CurveData::new(pts).unwrap()).unwrap();
        assert!((fit.alpha - 2.2).abs() < 1e-8, "alpha = {}", fit.alpha);
    }

    #[test]
    fn constrained_ols_lotka_regression() {
        let fit = fit_constrained_ols(&lotka_curve()).unwrap();
        assert!((fit.alpha - 1.899_579_643_323_152).abs() < 1e-7);
    }

    #[test]
    fn nls_exact_curve_recovery() {
        let pts: Vec<(u32, f64)> = (1..=30).map(|x| (x, 0.5 * f64::from(x).powi(-2))).collect();
        let fit = fit_nls(&CurveData::new(pts).unwrap()).unwrap();
        assert!((fit.alpha - 2.0).abs() < 1e-7);
        assert!((fit.b.unwrap() - 0.5f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn nls_lotka_regression() {
        let fit = fit_nls(&lotka_curve()).unwrap();
        assert!((fit.alpha - 1.901_864_380_733_183).abs() < 1e-6);
        assert!((fit.b.unwrap() + 0.546_572_064_510_567_8).abs() < 1e-6);
    }

    #[test]
    fn constrained_nls_recovers_and_regresses() {
        let z = specfun::zeta(1.7).unwrap().value;
        let pts: Vec<(u32, f64)> = (1..=60)
            .map(|x| (x, f64::from(x).powf(-1.7) / z))
            .collect();
        let fit = fit_constrained_nls(&CurveData::new(pts).unwrap()).unwrap();
        assert!((fit.alpha - 1.7).abs() < 1e-8);

        let fit = fit_constrained_nls(&lotka_curve()).unwrap();
        assert!((fit.alpha - 1.918_536_403_216_023).abs() < 1e-7);
    }

    #[test]
    fn mle_power_law_lotka_regression() {
        let fit = fit_mle_power_law(&lotka_stats()).unwrap();
        assert!((fit.alpha - 1.966_509_862_289_41).abs() < 1e-8);
        assert!((fit.log_likelihood.unwrap() + 11_705.109_841_318_54).abs() < 1e-5);
        // stationarity: Σln z / n = -ζ'(α̂)/ζ(α̂)
        let s = lotka_stats();
        let resid = s.sum_log_z / s.n as f64
            + specfun::zeta_deriv(fit.alpha).unwrap().value
                / specfun::zeta(fit.alpha).unwrap().value;
        assert!(resid.abs() < 1e-8);
    }

    #[test]
    fn mle_power_law_recovers_synthetic_alpha() {
        // exact stats of a power law with α* = 2.5: Σln z/n = -ζ'/ζ(α*)
        let m2 = -specfun::zeta_deriv(2.5).unwrap().value / specfun::zeta(2.5).unwrap().value;
        let stats = SufficientStats {
            n: 1000,
            sum_z: 0,
            sum_log_z: 1000.0 * m2,
        };
        let fit = fit_mle_power_law(&stats).unwrap();
        assert!((fit.alpha - 2.5).abs() < 1e-8);
    }

    #[test]
    fn mle_power_law_degenerate_all_ones() {
        let t = FrequencyTable::new(vec![(1, 50)]).unwrap();
        assert!(matches!(
            fit_mle_power_law(&t.sufficient_stats()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn mle_cutoff_lotka_regression() {
        let fit = fit_mle_cutoff(&lotka_stats()).unwrap();
        assert!((fit.alpha - 1.815_238_736_679_27).abs() < 1e-6, "alpha {}", fit.alpha);
        assert!(
            (fit.beta.unwrap() + 0.017_286_700_335_632_45).abs() < 1e-7,
            "beta {}",
            fit.beta.unwrap()
        );
        assert!((fit.log_likelihood.unwrap() + 11_646.140_283_352_43).abs() < 1e-5);
    }

    #[test]
    fn mle_cutoff_mean_matching_first_order_condition() {
        let s = lotka_stats();
        let fit = fit_mle_cutoff(&s).unwrap();
        let params =
            crate::distributions::CutoffParams::new(fit.alpha, fit.beta.unwrap()).unwrap();
        let mean = params.model_mean().unwrap();
        let sample_mean = s.sum_z as f64 / s.n as f64;
        assert!(((mean - sample_mean) / sample_mean).abs() < 1e-6);
    }

    #[test]
    fn mle_cutoff_gradient_matches_finite_differences() {
        let s = lotka_stats();
        let fit = fit_mle_cutoff(&s).unwrap();
        let (a, b) = (fit.alpha, fit.beta.unwrap());
        let h = 1e-6;
        let fd_a = (log_likelihood_cutoff(&s, a + h, b) - log_likelihood_cutoff(&s, a - h, b))
            / (2.0 * h);
        let fd_b = (log_likelihood_cutoff(&s, a, b + h) - log_likelihood_cutoff(&s, a, b - h))
            / (2.0 * h);
        // analytic gradient is zero at the optimum; finite differences
        // agree within 1e-5 (absolute, scaled per observation)
        let n = s.n as f64;
        assert!((fd_a / n).abs() < 1e-5, "fd_a/n = {}", fd_a / n);
        assert!((fd_b / n).abs() < 1e-5, "fd_b/n = {}", fd_b / n);
    }

    #[test]
    fn mle_cutoff_boundary_detection() {
        // light tail but inflated mean: the power-law fit gives α̂ ≈ 2.7,
        // yet the sample mean 3.5 exceeds ζ(α̂-1)/ζ(α̂) ≈ 2.9, so the
        // cutoff likelihood is maximized on the β = 0 boundary
        let t = FrequencyTable::new(vec![(1, 900), (2, 50), (50, 50)]).unwrap();
        assert!(matches!(
            fit_mle_cutoff(&t.sufficient_stats()),
            Err(Error::Boundary)
        ));
    }

    #[test]
    fn mle_fixed_beta_lotka_regression() {
        let fit = fit_mle_fixed_beta(&lotka_stats(), -1e-6).unwrap();
        assert!((fit.alpha - 1.966_427_329_479_881).abs() < 1e-7);
        assert!((fit.log_likelihood.unwrap() + 11_705.055_155_148_67).abs() < 1e-5);
    }

    #[test]
    fn mle_fixed_beta_admits_alpha_below_one() {
        // β < 0 normalizes every α, so the profile fit may land well
        // under the power-law threshold
        let model = crate::distributions::CutoffParams::new(0.5, -0.2).unwrap();
        let t = model.sample(200_000, 99).unwrap();
        let fit = fit_mle_fixed_beta(&t.sufficient_stats(), -0.2).unwrap();
        assert!((fit.alpha - 0.5).abs() < 0.05, "alpha {}", fit.alpha);
    }

    #[test]
    fn mle_cutoff_recovers_synthetic_parameters() {
        let model = crate::distributions::CutoffParams::new(1.8, -0.02).unwrap();
        let t = model.sample(200_000, 4242).unwrap();
        let fit = fit_mle_cutoff(&t.sufficient_stats()).unwrap();
        assert!((fit.alpha - 1.8).abs() < 0.1, "alpha {}", fit.alpha);
        assert!((fit.beta.unwrap() + 0.02).abs() < 0.01, "beta {:?}", fit.beta);
        // the fitted likelihood can only dominate the generator's
        let stats = t.sufficient_stats();
        assert!(
            fit.log_likelihood.unwrap() >= log_likelihood_cutoff(&stats, 1.8, -0.02) - 1e-9
        );
    }

    #[test]
    fn mle_fixed_beta_profile_consistency() {
        let s = lotka_stats();
        let joint = fit_mle_cutoff(&s).unwrap();
        let profile = fit_mle_fixed_beta(&s, joint.beta.unwrap()).unwrap();
        assert!((profile.alpha - joint.alpha).abs() < 1e-6);
    }

    #[test]
    fn nesting_monotonicity_on_lotka() {
        let s = lotka_stats();
        let cutoff = fit_mle_cutoff(&s).unwrap().log_likelihood.unwrap();
        let pl = fit_mle_power_law(&s).unwrap().log_likelihood.unwrap();
        for beta in [-1e-6, -1e-3, -0.0172867, -0.1] {
            let fixed = fit_mle_fixed_beta(&s, beta).unwrap().log_likelihood.unwrap();
            assert!(cutoff >= fixed - 1e-9, "beta = {beta}");
        }
        assert!(cutoff >= pl - 1e-9);
    }

    #[test]
    fn ols_slope_invariant_under_y_scaling() {
        let base = lotka_curve();
        let scaled = CurveData::new(
            base.points()
                .iter()
                .map(|&(x, y)| (x, y * 0.237))
                .collect(),
        )
        .unwrap();
        let f0 = fit_ols_loglog(&base).unwrap();
        let f1 = fit_ols_loglog(&scaled).unwrap();
        assert!((f0.alpha - f1.alpha).abs() < 1e-10);
        assert!((f1.b.unwrap() - f0.b.unwrap() - 0.237f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn all_curve_methods_agree_on_exact_data() {
        let alpha_true = 1.9;
        let z = specfun::zeta(alpha_true).unwrap().value;
        let pts: Vec<(u32, f64)> = (1..=66)
            .map(|x| (x, f64::from(x).powf(-alpha_true) / z))
            .collect();
        let curve = CurveData::new(pts).unwrap();
        let stats = SufficientStats {
            n: 5000,
            sum_z: 0,
            sum_log_z: 5000.0
                * (-specfun::zeta_deriv(alpha_true).unwrap().value / z),
        };
        let fits = [
            fit_ols_loglog(&curve).unwrap().alpha,
            fit_constrained_ols(&curve).unwrap().alpha,
            fit_nls(&curve).unwrap().alpha,
            fit_constrained_nls(&curve).unwrap().alpha,
            fit_mle_power_law(&stats).unwrap().alpha,
        ];
        for a in fits {
            assert!((a - alpha_true).abs() < 1e-6, "{fits:?}");
        }
    }
}
