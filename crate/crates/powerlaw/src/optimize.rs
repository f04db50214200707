//! Internal minimizers: Brent's method in one dimension, Newton with a
//! finite-difference Hessian (Nelder-Mead fallback) in two.
//!
//! Objectives may return non-finite values outside their domain; both
//! methods treat those points as worse than anything finite.

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - φ

pub(crate) struct MinResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: u32,
}

/// Coarse scan for the best point, then Brent refinement between its
/// neighbors. `lo`/`hi` bound the search; `tol` is absolute in x.
pub(crate) fn scan_brent_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
) -> Result<MinResult> {
    let m = scan_points.max(8);
    let mut best_i = 0usize;
    let mut best_v = f64::INFINITY;
    let grid: Vec<f64> = (0..=m)
        .map(|i| lo + (hi - lo) * i as f64 / m as f64)
        .collect();
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v.is_finite() && v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::Convergence(
            "objective is non-finite over the whole bracket".into(),
        ));
    }
    let a = grid[best_i.saturating_sub(1)];
    let b = grid[(best_i + 1).min(m)];
    brent_min(f, a, b, tol)
}

/// Brent's minimizer: golden-section with parabolic interpolation steps.
pub(crate) fn brent_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<MinResult> {
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let eps = f64::EPSILON.sqrt();
    let guard = |v: f64| if v.is_finite() { v } else { f64::INFINITY };

    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = guard(f(x));
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iter in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = tol * x.abs() + eps * eps + tol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(MinResult {
                x,
                fx,
                iterations: iter,
            });
        }
        let mut take_golden = true;
        if e.abs() > tol1 {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                take_golden = false;
            }
        }
        if take_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + if d >= 0.0 { tol1 } else { -tol1 }
        };
        let fu = guard(f(u));
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u >= x {
                b = u;
            } else {
                a = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(MinResult {
        x,
        fx,
        iterations: 200,
    })
}

pub(crate) struct MinResult2 {
    pub x: [f64; 2],
    pub fx: f64,
    pub iterations: u32,
    pub converged: bool,
}

/// Newton's method with analytic gradient and central-difference Hessian,
/// backtracking on ascent, Nelder-Mead fallback when the Hessian step is
/// unusable. Converged when the step length < `step_tol` and the gradient
/// norm < `grad_tol`.
pub(crate) fn newton_2d<F, G>(
    f: F,
    grad: G,
    x0: [f64; 2],
    step_tol: f64,
    grad_tol: f64,
) -> MinResult2
where
    F: Fn(&[f64; 2]) -> f64,
    G: Fn(&[f64; 2]) -> [f64; 2],
{
    let guard = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
    let mut x = x0;
    let mut fx = guard(f(&x));
    let mut iterations = 0;
    let mut newton_ok = true;

    for _ in 0..120 {
        iterations += 1;
        let g = grad(&x);
        let gnorm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        // central-difference Hessian from the analytic gradient
        let h0 = 1e-6 * x[0].abs().max(1e-3);
        let h1 = 1e-6 * x[1].abs().max(1e-3);
        let gp0 = grad(&[x[0] + h0, x[1]]);
        let gm0 = grad(&[x[0] - h0, x[1]]);
        let gp1 = grad(&[x[0], x[1] + h1]);
        let gm1 = grad(&[x[0], x[1] - h1]);
        let hxx = (gp0[0] - gm0[0]) / (2.0 * h0);
        let hxy = 0.5 * ((gp0[1] - gm0[1]) / (2.0 * h0) + (gp1[0] - gm1[0]) / (2.0 * h1));
        let hyy = (gp1[1] - gm1[1]) / (2.0 * h1);
        let det = hxx * hyy - hxy * hxy;
        if !det.is_finite() || det.abs() < 1e-300 {
            newton_ok = false;
            break;
        }
        let step = [
            -(hyy * g[0] - hxy * g[1]) / det,
            -(hxx * g[1] - hxy * g[0]) / det,
        ];
        // backtrack until the step improves f (the Newton direction may
        // point uphill when the Hessian is indefinite)
        let mut scale = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand = [x[0] + scale * step[0], x[1] + scale * step[1]];
            let fc = guard(f(&cand));
            if fc < fx {
                let steplen = ((scale * step[0]).powi(2) + (scale * step[1]).powi(2)).sqrt();
                x = cand;
                fx = fc;
                moved = true;
                if steplen < step_tol && gnorm < grad_tol {
                    return MinResult2 {
                        x,
                        fx,
                        iterations,
                        converged: true,
                    };
                }
                break;
            }
            scale *= 0.5;
        }
        if !moved {
            let g2 = grad(&x);
            if (g2[0] * g2[0] + g2[1] * g2[1]).sqrt() < grad_tol {
                return MinResult2 {
                    x,
                    fx,
                    iterations,
                    converged: true,
                };
            }
            newton_ok = false;
            break;
        }
    }

    if newton_ok {
        // iteration budget exhausted; accept if the gradient is flat
        let g = grad(&x);
        if (g[0] * g[0] + g[1] * g[1]).sqrt() < grad_tol {
            return MinResult2 {
                x,
                fx,
                iterations,
                converged: true,
            };
        }
    }

    // Nelder-Mead fallback
    let nm = nelder_mead_2d(&f, x, 4000);
    let g = grad(&nm.x);
    let gnorm = (g[0] * g[0] + g[1] * g[1]).sqrt();
    MinResult2 {
        x: nm.x,
        fx: nm.fx,
        iterations: iterations + nm.iterations,
        converged: gnorm < grad_tol,
    }
}

/// Standard Nelder-Mead simplex in two dimensions.
pub(crate) fn nelder_mead_2d<F>(f: &F, x0: [f64; 2], max_iter: u32) -> MinResult2
where
    F: Fn(&[f64; 2]) -> f64,
{
    let guard = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
    let s = [x0[0].abs().max(0.1) * 0.05, x0[1].abs().max(0.1) * 0.05];
    let mut pts = [x0, [x0[0] + s[0], x0[1]], [x0[0], x0[1] + s[1]]];
    let mut vals = [guard(f(&pts[0])), guard(f(&pts[1])), guard(f(&pts[2]))];
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        let [b, m, w] = order;
        let spread = (vals[w] - vals[b]).abs();
        let size = (pts[w][0] - pts[b][0]).abs() + (pts[w][1] - pts[b][1]).abs();
        if spread < 1e-14 * (1.0 + vals[b].abs()) && size < 1e-11 {
            break;
        }
        let centroid = [0.5 * (pts[b][0] + pts[m][0]), 0.5 * (pts[b][1] + pts[m][1])];
        let refl = [
            centroid[0] + (centroid[0] - pts[w][0]),
            centroid[1] + (centroid[1] - pts[w][1]),
        ];
        let f_refl = guard(f(&refl));
        if f_refl < vals[b] {
            let exp = [
                centroid[0] + 2.0 * (centroid[0] - pts[w][0]),
                centroid[1] + 2.0 * (centroid[1] - pts[w][1]),
            ];
            let f_exp = guard(f(&exp));
            if f_exp < f_refl {
                pts[w] = exp;
                vals[w] = f_exp;
            } else {
                pts[w] = refl;
                vals[w] = f_refl;
            }
        } else if f_refl < vals[m] {
            pts[w] = refl;
            vals[w] = f_refl;
        } else {
            let contr = [
                centroid[0] + 0.5 * (pts[w][0] - centroid[0]),
                centroid[1] + 0.5 * (pts[w][1] - centroid[1]),
            ];
            let f_contr = guard(f(&contr));
            if f_contr < vals[w] {
                pts[w] = contr;
                vals[w] = f_contr;
            } else {
                for i in [m, w] {
                    pts[i] = [
                        pts[b][0] + 0.5 * (pts[i][0] - pts[b][0]),
                        pts[b][1] + 0.5 * (pts[i][1] - pts[b][1]),
                    ];
                    vals[i] = guard(f(&pts[i]));
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    MinResult2 {
        x: pts[best],
        fx: vals[best],
        iterations,
        converged: true,
    }
}
