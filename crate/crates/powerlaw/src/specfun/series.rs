//! Series engines behind the public special functions.
//!
//! - Euler-Maclaurin summation for ζ(s) and ζ'(s), used both in the
//!   convergent region s > 1 and as the analytic continuation for s ≤ 1
//!   (reflection takes over for s ≤ -1).
//! - Direct power series for Li_s(e^β), geometric tail bound.
//! - The expansion of Li_s(e^β) around β = 0, which stays accurate where
//!   the direct series would need ~10^10 terms.

use super::gamma::{cos_pi, digamma, gamma, sin_pi};
use crate::sum::NeumaierSum;
use std::f64::consts::PI;

/// A value together with a rigorous absolute error bound.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounded {
    pub value: f64,
    pub bound: f64,
}

const EM_CUT: usize = 20;
/// B_2k / (2k)! for k = 1..6; the k = 5, 6 entries only feed the error bound.
const EM_COEF: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

/// Rising product ∏_{j=0}^{m-1} (s+j) and its s-derivative Σ_i ∏_{j≠i} (s+j).
fn rising_and_deriv(s: f64, m: usize) -> (f64, f64) {
    let mut prod = 1.0;
    for j in 0..m {
        prod *= s + j as f64;
    }
    let mut deriv = 0.0;
    for i in 0..m {
        let mut p = 1.0;
        for j in 0..m {
            if j != i {
                p *= s + j as f64;
            }
        }
        deriv += p;
    }
    (prod, deriv)
}

/// ζ(s) by Euler-Maclaurin: direct sum to N, integral + midpoint terms,
/// Bernoulli corrections through B₈. Valid as analytic continuation for
/// s > -1 (s ≠ 1); the bound is the first two omitted corrections.
pub(crate) fn zeta_em(s: f64) -> Bounded {
    let n = EM_CUT as f64;
    let mut acc = NeumaierSum::new();
    for k in 1..EM_CUT {
        acc.add((k as f64).powf(-s));
    }
    let n_pow = n.powf(-s);
    acc.add(n_pow * n / (s - 1.0));
    acc.add(0.5 * n_pow);
    let mut scale = n_pow / n; // N^(-s-(2k-1)) for k = 1
    for (k, &c) in EM_COEF.iter().enumerate().take(4) {
        let (prod, _) = rising_and_deriv(s, 2 * k + 1);
        acc.add(c * prod * scale);
        scale /= n * n;
    }
    // scale is now N^(-s-9)
    let (p5, _) = rising_and_deriv(s, 9);
    let (p6, _) = rising_and_deriv(s, 11);
    let omitted = (EM_COEF[4] * p5 * scale).abs()
        + (EM_COEF[5] * p6 * scale / (n * n)).abs();
    let value = acc.value();
    Bounded {
        value,
        bound: omitted + 8.0 * f64::EPSILON * value.abs().max(1.0),
    }
}

/// ζ'(s), the Euler-Maclaurin formula differentiated term by term.
/// Same validity region as [`zeta_em`].
pub(crate) fn zeta_deriv_em(s: f64) -> Bounded {
    let n = EM_CUT as f64;
    let ln_n = n.ln();
    let mut acc = NeumaierSum::new();
    for k in 2..EM_CUT {
        let kf = k as f64;
        acc.add(-kf.ln() * kf.powf(-s));
    }
    let n_pow = n.powf(-s);
    // d/ds [N^(1-s)/(s-1)] and d/ds [N^(-s)/2]
    acc.add(-ln_n * n_pow * n / (s - 1.0) - n_pow * n / ((s - 1.0) * (s - 1.0)));
    acc.add(-0.5 * ln_n * n_pow);
    let mut scale = n_pow / n;
    for (k, &c) in EM_COEF.iter().enumerate().take(4) {
        let (prod, dprod) = rising_and_deriv(s, 2 * k + 1);
        acc.add(c * scale * (dprod - ln_n * prod));
        scale /= n * n;
    }
    let (p5, d5) = rising_and_deriv(s, 9);
    let omitted = (EM_COEF[4] * scale * (d5.abs() + ln_n * p5.abs())).abs();
    let value = acc.value();
    Bounded {
        value,
        bound: omitted + 8.0 * f64::EPSILON * value.abs().max(1.0),
    }
}

/// ζ(s) anywhere on the real line except s = 1 (and poles of the
/// reflection factors at... none: the functional equation is entire in
/// this rearrangement). Used by the β-expansion, whose arguments walk
/// down to large negative s.
pub(crate) fn zeta_real(s: f64) -> Bounded {
    if s > -1.0 {
        zeta_em(s)
    } else {
        // ζ(s) = 2^s π^(s-1) sin(πs/2) Γ(1-s) ζ(1-s), 1-s ≥ 2
        let z = zeta_em(1.0 - s);
        let pref = 2f64.powf(s) * PI.powf(s - 1.0) * sin_pi(s * 0.5);
        let g = gamma(1.0 - s);
        let value = pref * g * z.value;
        let rel = z.bound / z.value.abs() + 4.0 * f64::EPSILON;
        Bounded {
            value,
            bound: value.abs() * rel + f64::MIN_POSITIVE,
        }
    }
}

/// ζ'(s) anywhere on the real line except s = 1.
pub(crate) fn zeta_deriv_real(s: f64) -> Bounded {
    if s > -1.0 {
        zeta_deriv_em(s)
    } else {
        // differentiate ζ(s) = 2^s π^(s-1) sin(πs/2) Γ(1-s) ζ(1-s);
        // grouping so no factor is evaluated at a pole
        let z = zeta_em(1.0 - s);
        let zd = zeta_deriv_em(1.0 - s);
        let (sin_h, cos_h) = (sin_pi(s * 0.5), cos_pi(s * 0.5));
        let pref = 2f64.powf(s) * PI.powf(s - 1.0) * gamma(1.0 - s);
        let inner = ((2.0 * PI).ln() - digamma(1.0 - s)) * sin_h * z.value
            + PI / 2.0 * cos_h * z.value
            - sin_h * zd.value;
        let value = pref * inner;
        let abs_terms = pref.abs()
            * (((2.0 * PI).ln() - digamma(1.0 - s)).abs() * z.value.abs()
                + PI / 2.0 * z.value.abs()
                + zd.value.abs());
        let rel = z.bound / z.value.abs() + zd.bound / zd.value.abs().max(1e-300);
        Bounded {
            value,
            bound: abs_terms * (rel + 8.0 * f64::EPSILON) + f64::MIN_POSITIVE,
        }
    }
}

/// Li_s(e^β) by direct summation, tail bounded by the eventually
/// geometric term ratio. Works for every β < 0 but slows as β → 0.
pub(crate) fn polylog_series(s: f64, beta: f64) -> Bounded {
    debug_assert!(beta < 0.0);
    let r = beta.exp();
    let mut acc = NeumaierSum::new();
    let mut n: u64 = 0;
    let mut fp_err: f64 = 0.0;
    loop {
        n += 1;
        let nf = n as f64;
        let arg = beta * nf - s * nf.ln();
        let term = arg.exp();
        acc.add(term);
        // exp() loses relative accuracy proportionally to |arg|
        fp_err += term * f64::EPSILON * (arg.abs() + 2.0);
        // sup of the forward term ratio: e^β for s ≥ 0, else e^β (1+1/n)^(-s)
        let ratio_sup = if s >= 0.0 {
            r
        } else {
            r * (1.0 + 1.0 / nf).powf(-s)
        };
        if ratio_sup < 1.0 {
            let next = (beta * (nf + 1.0) - s * (nf + 1.0).ln()).exp();
            let tail = next / (1.0 - ratio_sup);
            if tail <= 1e-16 * acc.value() {
                let value = acc.value();
                return Bounded {
                    value,
                    bound: tail + fp_err + 2.0 * f64::EPSILON * value.abs(),
                };
            }
        }
        if n > 200_000_000 {
            // unreachable under the dispatcher's β ≤ -0.05 routing
            let value = acc.value();
            return Bounded { value, bound: value.abs() };
        }
    }
}

/// ∂/∂s Li_s(e^β) = -Σ ln(n) e^(βn) n^(-s), direct summation.
pub(crate) fn polylog_ds_series(s: f64, beta: f64) -> Bounded {
    debug_assert!(beta < 0.0);
    let r = beta.exp();
    let mut acc = NeumaierSum::new();
    let mut n: u64 = 1;
    let mut fp_err: f64 = 0.0;
    loop {
        n += 1;
        let nf = n as f64;
        let arg = beta * nf - s * nf.ln();
        let term = -nf.ln() * arg.exp();
        acc.add(term);
        fp_err += term.abs() * f64::EPSILON * (arg.abs() + 3.0);
        let ratio_sup = (1.0 + 1.0 / (nf * nf.ln()))
            * r
            * if s >= 0.0 { 1.0 } else { (1.0 + 1.0 / nf).powf(-s) };
        if ratio_sup < 1.0 {
            let next = (nf + 1.0).ln() * (beta * (nf + 1.0) - s * (nf + 1.0).ln()).exp();
            let tail = next / (1.0 - ratio_sup);
            if tail <= 1e-16 * acc.value().abs() {
                let value = acc.value();
                return Bounded {
                    value,
                    bound: tail + fp_err + 2.0 * f64::EPSILON * value.abs(),
                };
            }
        }
        if n > 200_000_000 {
            let value = acc.value();
            return Bounded { value, bound: value.abs() };
        }
    }
}

const EXPANSION_MAX_TERMS: usize = 80;

/// Li_s(e^β) for small |β| by the expansion around β = 0:
///
///   Li_s(e^β) = Γ(1-s)(-β)^(s-1) + Σ_{k≥0} ζ(s-k) β^k / k!
///
/// Valid for |β| < 2π and s not a positive integer (the caller
/// interpolates across those removable singularities).
pub(crate) fn polylog_expansion(s: f64, beta: f64) -> Bounded {
    debug_assert!(beta < 0.0);
    let gamma_term = gamma(1.0 - s) * (-beta).powf(s - 1.0);
    let mut acc = NeumaierSum::new();
    acc.add(gamma_term);
    let mut max_abs = gamma_term.abs();
    let mut bound = gamma_term.abs() * 1e-14;
    let mut beta_pow_over_fact = 1.0;
    let mut small_streak = 0;
    for k in 0..EXPANSION_MAX_TERMS {
        if k > 0 {
            beta_pow_over_fact *= beta / k as f64;
        }
        let z = zeta_real(s - k as f64);
        let term = z.value * beta_pow_over_fact;
        acc.add(term);
        bound += z.bound * beta_pow_over_fact.abs();
        max_abs = max_abs.max(term.abs());
        if term.abs() <= 1e-17 * acc.value().abs() {
            small_streak += 1;
            if small_streak >= 2 {
                bound += 2.0 * term.abs();
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    let value = acc.value();
    Bounded {
        value,
        bound: bound + 4.0 * f64::EPSILON * max_abs,
    }
}

/// ∂/∂s of [`polylog_expansion`]:
///
///   Γ(1-s)(-β)^(s-1) [ln(-β) - ψ(1-s)] + Σ_{k≥0} ζ'(s-k) β^k / k!
pub(crate) fn polylog_ds_expansion(s: f64, beta: f64) -> Bounded {
    debug_assert!(beta < 0.0);
    let gamma_term = gamma(1.0 - s) * (-beta).powf(s - 1.0);
    let lead = gamma_term * ((-beta).ln() - digamma(1.0 - s));
    let mut acc = NeumaierSum::new();
    acc.add(lead);
    let mut max_abs = lead.abs();
    let mut bound = lead.abs() * 1e-13;
    let mut beta_pow_over_fact = 1.0;
    let mut small_streak = 0;
    for k in 0..EXPANSION_MAX_TERMS {
        if k > 0 {
            beta_pow_over_fact *= beta / k as f64;
        }
        let zd = zeta_deriv_real(s - k as f64);
        let term = zd.value * beta_pow_over_fact;
        acc.add(term);
        bound += zd.bound * beta_pow_over_fact.abs();
        max_abs = max_abs.max(term.abs());
        if term.abs() <= 1e-17 * acc.value().abs() {
            small_streak += 1;
            if small_streak >= 2 {
                bound += 2.0 * term.abs();
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    let value = acc.value();
    Bounded {
        value,
        bound: bound + 4.0 * f64::EPSILON * max_abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * b.abs(),
            "{a} vs {b} (rel {})",
            ((a - b) / b).abs()
        );
    }

    #[test]
    fn zeta_em_reference_values() {
        // 22-digit references
        rel_close(zeta_em(1.5).value, 2.612_375_348_685_488_3, 1e-14);
        rel_close(zeta_em(2.0).value, std::f64::consts::PI.powi(2) / 6.0, 1e-14);
        rel_close(zeta_em(2.5).value, 1.341_487_257_250_917_2, 1e-14);
        rel_close(zeta_em(3.0).value, 1.202_056_903_159_594_3, 1e-14);
        rel_close(zeta_em(4.0).value, 1.082_323_233_711_138_2, 1e-14);
        rel_close(zeta_em(1.888).value, 1.763_998_407_094_350_1, 1e-14);
    }

    #[test]
    fn zeta_em_continuation_values() {
        // ζ(0) = -1/2, ζ(-1/2) ≈ -0.2078862250, ζ(1/2) ≈ -1.4603545088
        rel_close(zeta_em(0.0).value, -0.5, 1e-13);
        rel_close(zeta_em(-0.5).value, -0.207_886_224_977_354_57, 1e-12);
        rel_close(zeta_em(0.5).value, -1.460_354_508_809_586_8, 1e-13);
    }

    #[test]
    fn zeta_reflection_matches_known_negatives() {
        // ζ(-1) = -1/12, ζ(-3) = 1/120, ζ(-2) = 0
        rel_close(zeta_real(-1.0 - 1e-13).value, -1.0 / 12.0, 1e-9);
        rel_close(zeta_real(-3.0).value, 1.0 / 120.0, 1e-11);
        assert!(zeta_real(-2.0).value.abs() < 1e-15);
        // deep negative (reflection territory)
        rel_close(zeta_real(-9.5).value, -0.006_672_172_296_466_640_8, 1e-12);
        rel_close(zeta_real(-4.7).value, -0.003_724_829_932_056_845_8, 1e-12);
        rel_close(zeta_real(-2.5).value, 0.008_516_928_777_850_330_5, 1e-12);
    }

    #[test]
    fn zeta_deriv_em_reference_values() {
        rel_close(zeta_deriv_em(2.0).value, -0.937_548_254_315_843_75, 1e-12);
        rel_close(zeta_deriv_em(3.0).value, -0.198_126_242_885_636_85, 1e-12);
    }

    #[test]
    fn zeta_deriv_matches_finite_difference_everywhere() {
        let h = 1e-6;
        for &s in &[-8.3, -4.7, -2.5, -0.3, 0.4, 1.5, 2.0, 3.0, 7.0] {
            let fd = (zeta_real(s + h).value - zeta_real(s - h).value) / (2.0 * h);
            let an = zeta_deriv_real(s).value;
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1.0),
                "s = {s}: fd {fd} vs analytic {an}"
            );
        }
    }

    #[test]
    fn series_and_expansion_agree_on_overlap() {
        for &s in &[0.7, 1.2, 1.5, 1.815, 2.3, 2.9] {
            for &b in &[-1.0, -0.3, -0.06, -0.05, -0.04] {
                let a = polylog_series(s, b);
                let e = polylog_expansion(s, b);
                let gap = (a.value - e.value).abs();
                assert!(
                    gap <= (a.bound + e.bound).max(1e-10 * a.value.abs()),
                    "Li_{s}(e^{b}): series {} vs expansion {} (gap {gap})",
                    a.value,
                    e.value
                );
                assert!(gap <= 1e-10 * a.value.abs());
            }
        }
    }

    #[test]
    fn ds_series_and_expansion_agree_on_overlap() {
        for &s in &[1.2, 1.8, 2.5] {
            for &b in &[-0.3, -0.05, -0.04] {
                let a = polylog_ds_series(s, b);
                let e = polylog_ds_expansion(s, b);
                assert!(
                    (a.value - e.value).abs() <= 1e-9 * a.value.abs(),
                    "dsLi_{s}(e^{b}): {} vs {}",
                    a.value,
                    e.value
                );
            }
        }
    }

    #[test]
    fn expansion_handles_tiny_beta() {
        // Li_1.8(e^-0.02): 22-digit reference of the s-derivative partner
        let v = polylog_ds_expansion(1.8, -0.02);
        rel_close(v.value, -1.031_403_502_030_357_9, 1e-11);
        // direct series would need ~10^10 terms here; expansion is exact route
        let tiny = polylog_expansion(1.9664271, -1e-6);
        assert!(tiny.value > 0.0 && tiny.value.is_finite());
        assert!(tiny.bound < 1e-10 * tiny.value);
    }
}
