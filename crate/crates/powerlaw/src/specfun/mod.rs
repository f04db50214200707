//! Special functions: Riemann zeta, the polylogarithm on the real slice
//! Li_s(e^β) with β ≤ 0, their s-derivatives, and the χ²₁ survival function.
//!
//! Every evaluation returns an [`EvalResult`] carrying the value together
//! with a rigorous absolute error bound, so callers (the likelihood
//! optimizers in particular) can assert their own tolerance budgets.
//!
//! Evaluation strategy for Li_s(e^β):
//!
//! - β ≤ -0.05: direct series summation with a geometric tail bound
//!   ([`polylog_by_series`]).
//! - -0.05 < β < 0: the expansion around β = 0,
//!   Li_s(e^β) = Γ(1-s)(-β)^(s-1) + Σ_k ζ(s-k) β^k / k!
//!   ([`polylog_by_expansion`]); the direct series would need ~10^10 terms
//!   at β = -1e-6. Near positive-integer s (removable singularities of
//!   the expansion) the value is interpolated from s ± 1e-4 and the
//!   error bound widened accordingly.
//! - β = 0: Euler-Maclaurin ζ(s), which requires s > 1.
//!
//! All functions here are pure; concurrent use needs no synchronization.

mod gamma;
mod series;

use crate::error::{Error, Result};
use series::Bounded;

/// A computed value with a rigorous absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Bound on |value - exact|; finite and non-negative.
    pub abs_error_bound: f64,
}

impl EvalResult {
    fn from_bounded(b: Bounded) -> Result<Self> {
        if !b.value.is_finite() || !b.bound.is_finite() {
            return Err(Error::Convergence(format!(
                "special-function evaluation produced non-finite result ({} ± {})",
                b.value, b.bound
            )));
        }
        Ok(Self {
            value: b.value,
            abs_error_bound: b.bound.max(0.0),
        })
    }
}

/// Half-width of the interpolation strip around positive-integer s where
/// the β-expansion has removable singularities.
const NEAR_INTEGER: f64 = 1e-4;
/// The β threshold separating direct summation from the β = 0 expansion.
const SERIES_BETA_CUT: f64 = -0.05;

/// Riemann zeta ζ(s) for s > 1.
///
/// Euler-Maclaurin with Bernoulli corrections through B₈; the error bound
/// (first omitted corrections plus round-off) stays below 1e-13·ζ(s).
pub fn zeta(s: f64) -> Result<EvalResult> {
    if !(s > 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "zeta requires s > 1 (got {s}); the series diverges"
        )));
    }
    EvalResult::from_bounded(series::zeta_em(s))
}

/// ζ'(s) for s > 1. Always negative.
pub fn zeta_deriv(s: f64) -> Result<EvalResult> {
    if !(s > 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "zeta_deriv requires s > 1 (got {s})"
        )));
    }
    EvalResult::from_bounded(series::zeta_deriv_em(s))
}

fn check_polylog_domain(s: f64, beta: f64) -> Result<()> {
    if beta > 0.0 || beta.is_nan() || s.is_nan() {
        return Err(Error::Domain(format!(
            "polylog requires beta <= 0 (got s = {s}, beta = {beta})"
        )));
    }
    if beta == 0.0 && s <= 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "polylog at beta = 0 requires s > 1 (got s = {s})"
        )));
    }
    Ok(())
}

fn near_positive_integer(s: f64) -> Option<f64> {
    let r = s.round();
    if r >= 1.0 && (s - r).abs() < NEAR_INTEGER {
        Some(r)
    } else {
        None
    }
}

/// Interpolate f across the strip [r - h, r + h] around a removable
/// singularity at r, widening the error bound by a curvature allowance.
fn interpolate_near_integer(
    f: impl Fn(f64) -> Bounded,
    s: f64,
    r: f64,
) -> Bounded {
    let h = NEAR_INTEGER;
    let lo = f(r - h);
    let hi = f(r + h);
    let t = (s - (r - h)) / (2.0 * h);
    let value = lo.value + t * (hi.value - lo.value);
    Bounded {
        value,
        bound: lo.bound.max(hi.bound) + 1e-7 * value.abs() + 1e-12,
    }
}

/// Polylogarithm on the real slice: Li_s(e^β) for β < 0 (any real s),
/// or β = 0 with s > 1, where it equals ζ(s) by the same code path.
pub fn polylog(s: f64, beta: f64) -> Result<EvalResult> {
    check_polylog_domain(s, beta)?;
    if beta == 0.0 {
        return zeta(s);
    }
    if s == 1.0 {
        // Li₁(z) = -ln(1-z), exact up to round-off
        let value = -(-beta.exp_m1()).ln();
        return Ok(EvalResult {
            value,
            abs_error_bound: 4.0 * f64::EPSILON * value.abs(),
        });
    }
    let b = if beta <= SERIES_BETA_CUT {
        series::polylog_series(s, beta)
    } else if let Some(r) = near_positive_integer(s) {
        interpolate_near_integer(|ss| series::polylog_expansion(ss, beta), s, r)
    } else {
        series::polylog_expansion(s, beta)
    };
    EvalResult::from_bounded(b)
}

/// The direct-summation strategy on its own, for any β < 0. Exposed so
/// the two evaluation routes can be cross-checked on their overlap.
pub fn polylog_by_series(s: f64, beta: f64) -> Result<EvalResult> {
    if beta >= 0.0 {
        return Err(Error::Domain(format!(
            "series strategy requires beta < 0 (got {beta})"
        )));
    }
    EvalResult::from_bounded(series::polylog_series(s, beta))
}

/// The β = 0 expansion strategy on its own, for -2π < β < 0 and s away
/// from positive integers. Exposed for strategy cross-checks.
pub fn polylog_by_expansion(s: f64, beta: f64) -> Result<EvalResult> {
    if beta >= 0.0 || beta <= -2.0 * std::f64::consts::PI {
        return Err(Error::Domain(format!(
            "expansion strategy requires -2pi < beta < 0 (got {beta})"
        )));
    }
    if near_positive_integer(s).is_some() {
        return Err(Error::Domain(format!(
            "expansion strategy is singular near positive integer s (got {s})"
        )));
    }
    EvalResult::from_bounded(series::polylog_expansion(s, beta))
}

/// ∂/∂s Li_s(e^β) = -Σ ln(n) e^(βn) n^(-s). Same domain as [`polylog`];
/// strictly negative.
pub fn polylog_ds(s: f64, beta: f64) -> Result<EvalResult> {
    check_polylog_domain(s, beta)?;
    if beta == 0.0 {
        return zeta_deriv(s);
    }
    let b = if beta <= SERIES_BETA_CUT {
        series::polylog_ds_series(s, beta)
    } else if let Some(r) = near_positive_integer(s) {
        interpolate_near_integer(|ss| series::polylog_ds_expansion(ss, beta), s, r)
    } else {
        series::polylog_ds_expansion(s, beta)
    };
    EvalResult::from_bounded(b)
}

/// Survival function of χ² with one degree of freedom:
/// P(χ²₁ > t) = erfc(√(t/2)). Monotone non-increasing in t.
pub fn chi2_sf_1dof(t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!("chi-squared statistic must be >= 0 (got {t})")));
    }
    Ok(gamma::erfc((t / 2.0).sqrt()))
}
