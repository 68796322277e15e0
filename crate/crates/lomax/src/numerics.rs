//! Optimization and density-estimation machinery used by the estimators.
//!
//! Four minimizers live here:
//!
//! * [`minimize_scalar`]: bounded golden-section/parabolic search (Brent),
//!   used for the profile-likelihood step of the MLE.
//! * [`minimize_quasi_newton`]: a BFGS descent with numeric central-difference
//!   gradients and Armijo backtracking, for general smooth objectives.
//! * [`bfgs_min`]: a transliteration of the classic variable-metric BFGS with
//!   the exact line-search, restart, and stopping semantics of R's
//!   `optim(method = "BFGS")`, including its absolute-step numeric gradient.
//! * [`nelder_mead_min`]: a transliteration of the Nelder-Mead simplex with
//!   the exact initial-simplex and shrink semantics of R's
//!   `optim(method = "Nelder-Mead")`.
//!
//! The two `optim`-compatible routines exist because the minimum-distance
//! estimators are defined by the behaviour of that optimizer, step for step;
//! a generic minimizer finds the same minima only when the objective is well
//! conditioned, which heavy-tailed samples routinely violate.
//!
//! The density side provides the empirical distribution function, Silverman's
//! rule-of-thumb bandwidth, and a Gaussian kernel density estimator.

use crate::distribution::Sample;
use crate::error::{LomaxError, LomaxResult};

/// Outcome of a bounded scalar minimization.
#[derive(Debug, Clone, Copy)]
pub struct ScalarMinResult {
    /// Abscissa of the located minimum, inside the requested bracket.
    pub argmin: f64,
    /// Objective value at `argmin`.
    pub value: f64,
    /// Number of objective evaluations performed.
    pub iterations: usize,
    /// False only if the internal evaluation cap was reached.
    pub converged: bool,
}

/// Outcome of a multivariate minimization.
#[derive(Debug, Clone)]
pub struct MultiMinResult {
    /// Coordinates of the located minimum.
    pub argmin: Vec<f64>,
    /// Objective value at `argmin`.
    pub value: f64,
    /// Euclidean norm of the numeric gradient at `argmin`.
    pub gradient_norm: f64,
    /// Number of gradient iterations performed.
    pub iterations: usize,
    /// True if the gradient-norm test was met before `max_iter`.
    pub converged: bool,
}

const SCALAR_EVAL_CAP: usize = 1_000;

/// Minimize `f` on `[lo, hi]` by golden-section search with successive
/// parabolic interpolation (Brent's bounded method).
///
/// `|argmin − true minimum| ≤ tol` for unimodal `f`. For multimodal `f` a
/// local minimizer inside the bracket is returned.
///
/// # Errors
///
/// Fails if `lo >= hi` or if `f` returns a non-finite value anywhere it is
/// probed; the error carries the offending abscissa.
///
/// # Example
///
/// ```
/// use lomax::numerics::minimize_scalar;
/// let r = minimize_scalar(|x| (x - 3.0) * (x - 3.0), 0.0, 10.0, 1e-8).unwrap();
/// assert!((r.argmin - 3.0).abs() < 1e-6);
/// ```
pub fn minimize_scalar<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> LomaxResult<ScalarMinResult>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(LomaxError::InvalidParameter {
            name: "lo".to_string(),
            value: lo,
            reason: format!("bracket requires lo < hi, got hi = {hi}"),
        });
    }
    if !(tol > 0.0) {
        return Err(LomaxError::InvalidParameter {
            name: "tol".to_string(),
            value: tol,
            reason: "tolerance must be positive".to_string(),
        });
    }

    let mut evals = 0usize;
    let probe = |f: &mut F, x: f64, evals: &mut usize| -> LomaxResult<f64> {
        let v = f(x);
        *evals += 1;
        if !v.is_finite() {
            return Err(LomaxError::NumericalFailure {
                reason: format!("objective non-finite at x = {x}"),
            });
        }
        Ok(v)
    };

    // golden ratio constant (3 − √5)/2
    let c = (3.0 - 5.0f64.sqrt()) * 0.5;
    let eps = f64::EPSILON.sqrt();
    let tol3 = tol / 3.0;

    let (mut a, mut b) = (lo, hi);
    let mut x = a + c * (b - a);
    let mut v = x;
    let mut w = x;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut fx = probe(&mut f, x, &mut evals)?;
    let mut fv = fx;
    let mut fw = fx;

    let mut converged = true;
    loop {
        let xm = (a + b) * 0.5;
        let tol1 = eps * x.abs() + tol3;
        let t2 = 2.0 * tol1;
        if (x - xm).abs() <= t2 - (b - a) * 0.5 {
            break;
        }
        if evals >= SCALAR_EVAL_CAP {
            converged = false;
            break;
        }

        let mut p = 0.0;
        let mut q = 0.0;
        let mut r = 0.0;
        if e.abs() > tol1 {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = (q - r) * 2.0;
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            r = e;
            e = d;
        }

        let mut u;
        if p.abs() >= (0.5 * q * r).abs() || p <= q * (a - x) || p >= q * (b - x) {
            // golden-section step
            e = if x < xm { b - x } else { a - x };
            d = c * e;
        } else {
            // parabolic-interpolation step
            d = p / q;
            u = x + d;
            if u - a < t2 || b - u < t2 {
                d = tol1;
                if x >= xm {
                    d = -d;
                }
            }
        }

        if d.abs() >= tol1 {
            u = x + d;
        } else if d > 0.0 {
            u = x + tol1;
        } else {
            u = x - tol1;
        }

        let fu = probe(&mut f, u, &mut evals)?;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
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

    Ok(ScalarMinResult {
        argmin: x,
        value: fx,
        iterations: evals,
        converged,
    })
}

/// Central-difference numeric gradient with per-coordinate step
/// `cbrt(machine epsilon) · max(1, |x_i|)`.
pub(crate) fn central_gradient<F>(f: &mut F, x: &[f64]) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let h0 = f64::EPSILON.cbrt();
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        let h = h0 * x[i].abs().max(1.0);
        xp[i] = x[i] + h;
        let f1 = f(&xp);
        xp[i] = x[i] - h;
        let f2 = f(&xp);
        xp[i] = x[i];
        g[i] = (f1 - f2) / (2.0 * h);
    }
    g
}

/// Minimize `f` by BFGS descent with numeric central-difference gradients
/// and a backtracking Armijo line search (halving factor, c₁ = 1e-4).
///
/// Stops when the gradient norm drops to `tol` or after `max_iter` gradient
/// iterations; `converged` reflects which happened.
///
/// # Errors
///
/// Fails if `f` is non-finite at `x0`, or if the line search cannot find any
/// finite step.
pub fn minimize_quasi_newton<F>(
    mut f: F,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> LomaxResult<MultiMinResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return Err(LomaxError::NumericalFailure {
            reason: format!("objective non-finite at start {x:?}"),
        });
    }

    let mut h = identity(n);
    let mut g = central_gradient(&mut f, &x);
    let mut gnorm = norm2(&g);
    let mut iterations = 0usize;
    let mut converged = gnorm <= tol;

    while !converged && iterations < max_iter {
        let mut d = mat_vec_neg(&h, &g);
        let mut slope = dot(&d, &g);
        if !(slope < 0.0) {
            h = identity(n);
            for (di, gi) in d.iter_mut().zip(&g) {
                *di = -gi;
            }
            slope = dot(&d, &g);
            if !(slope < 0.0) {
                break;
            }
        }

        // Armijo backtracking
        let mut step = 1.0;
        let mut xt = vec![0.0; n];
        let mut ft;
        let mut saw_finite = false;
        loop {
            for i in 0..n {
                xt[i] = x[i] + step * d[i];
            }
            ft = f(&xt);
            if ft.is_finite() {
                saw_finite = true;
                if ft <= fx + 1e-4 * step * slope {
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-20 {
                if !saw_finite {
                    return Err(LomaxError::NumericalFailure {
                        reason: "no finite step along the search direction".to_string(),
                    });
                }
                // gradient is at its noise floor; stop here
                let gnorm_now = norm2(&g);
                return Ok(MultiMinResult {
                    argmin: x,
                    value: fx,
                    gradient_norm: gnorm_now,
                    iterations,
                    converged: gnorm_now <= tol,
                });
            }
        }

        let g_new = central_gradient(&mut f, &xt);
        iterations += 1;

        let s: Vec<f64> = (0..n).map(|i| step * d[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm2(&s) * norm2(&y) {
            let hy = mat_vec(&h, &y);
            let yhy = dot(&y, &hy);
            let coef = (1.0 + yhy / sy) / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += coef * s[i] * s[j] - (s[i] * hy[j] + hy[i] * s[j]) / sy;
                }
            }
        }

        x = xt;
        fx = ft;
        g = g_new;
        gnorm = norm2(&g);
        converged = gnorm <= tol;
    }

    Ok(MultiMinResult {
        argmin: x,
        value: fx,
        gradient_norm: gnorm,
        iterations,
        converged,
    })
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn mat_vec_neg(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| -dot(row, v)).collect()
}

/// Result of one of the `optim`-compatible minimizers.
#[derive(Debug, Clone)]
pub struct OptimOutcome {
    /// Final parameter vector.
    pub par: Vec<f64>,
    /// Objective value at `par`.
    pub value: f64,
    /// Gradient iterations (BFGS) or objective evaluations (Nelder-Mead).
    pub iterations: usize,
    /// True unless the iteration budget was exhausted (BFGS, Nelder-Mead) or
    /// the simplex degenerated (Nelder-Mead).
    pub converged: bool,
}

/// Controls for [`bfgs_min`], defaulting to the documented defaults of R's
/// `optim(method = "BFGS")`: `maxit = 100`, `reltol ≈ 1.49e-8` (square root
/// of machine epsilon), numeric-gradient step `ndeps = 1e-3`.
#[derive(Debug, Clone, Copy)]
pub struct BfgsControl {
    /// Cap on gradient iterations.
    pub maxit: usize,
    /// Relative convergence tolerance on the objective value.
    pub reltol: f64,
    /// Absolute step for the central-difference numeric gradient.
    pub ndeps: f64,
}

impl Default for BfgsControl {
    fn default() -> Self {
        Self {
            maxit: 100,
            reltol: 1.490116e-8,
            ndeps: 1e-3,
        }
    }
}

fn optim_gradient<F>(f: &mut F, p: &[f64], ndeps: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = p.len();
    let mut df = vec![0.0; n];
    let mut pp = p.to_vec();
    for i in 0..n {
        pp[i] = p[i] + ndeps;
        let v1 = f(&pp);
        pp[i] = p[i] - ndeps;
        let v2 = f(&pp);
        pp[i] = p[i];
        df[i] = (v1 - v2) / (2.0 * ndeps);
    }
    df
}

/// Minimize `f` with the variable-metric BFGS of R's `optim`, reproducing its
/// line search, inverse-Hessian update, restart policy, and stopping rule,
/// with the same absolute-step central-difference numeric gradient `optim`
/// uses when no analytic gradient is supplied.
///
/// `converged` is false exactly when the iteration cap was reached, matching
/// `optim`'s convergence code. Non-finite objective values are rejected by
/// the line search, so every accepted iterate has a finite objective.
///
/// # Errors
///
/// Fails only if `f` is non-finite at `x0`.
pub fn bfgs_min<F>(mut f: F, x0: &[f64], ctl: &BfgsControl) -> LomaxResult<OptimOutcome>
where
    F: FnMut(&[f64]) -> f64,
{
    const STEPREDN: f64 = 0.2;
    const ACCTOL: f64 = 1e-4;
    const RELTEST: f64 = 10.0;

    let n = x0.len();
    let mut b = x0.to_vec();
    let mut fval = f(&b);
    if !fval.is_finite() {
        return Err(LomaxError::NumericalFailure {
            reason: format!("objective non-finite at start {b:?}"),
        });
    }
    let mut fmin = fval;
    let mut gradcount = 1usize;
    let mut g = optim_gradient(&mut f, &b, ctl.ndeps);
    let mut iter = 1usize;
    let mut ilast = gradcount;

    // Inverse-Hessian approximation, stored as its lower triangle.
    let mut bm = vec![vec![0.0f64; n]; n];
    let mut x = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut xv = vec![0.0; n];

    loop {
        if ilast == gradcount {
            for i in 0..n {
                for j in 0..i {
                    bm[i][j] = 0.0;
                }
                bm[i][i] = 1.0;
            }
        }
        x.copy_from_slice(&b);
        c.copy_from_slice(&g);
        let mut gradproj = 0.0;
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..=i {
                s -= bm[i][j] * g[j];
            }
            for j in (i + 1)..n {
                s -= bm[j][i] * g[j];
            }
            t[i] = s;
            gradproj += s * g[i];
        }

        let mut count: usize;
        if gradproj < 0.0 {
            // downhill: backtracking line search
            let mut steplength = 1.0;
            let mut accpoint = false;
            loop {
                count = 0;
                for i in 0..n {
                    b[i] = x[i] + steplength * t[i];
                    if RELTEST + x[i] == RELTEST + b[i] {
                        count += 1;
                    }
                }
                if count < n {
                    fval = f(&b);
                    accpoint = fval.is_finite()
                        && fval <= fmin + gradproj * steplength * ACCTOL;
                    if !accpoint {
                        steplength *= STEPREDN;
                    }
                }
                if count == n || accpoint {
                    break;
                }
            }
            let enough = (fval - fmin).abs() > ctl.reltol * (fmin.abs() + ctl.reltol);
            if !enough {
                count = n;
                fmin = fval;
            }
            if count < n {
                fmin = fval;
                g = optim_gradient(&mut f, &b, ctl.ndeps);
                gradcount += 1;
                iter += 1;
                let mut d1 = 0.0;
                for i in 0..n {
                    t[i] *= steplength;
                    c[i] = g[i] - c[i];
                    d1 += t[i] * c[i];
                }
                if d1 > 0.0 {
                    let mut d2 = 0.0;
                    for i in 0..n {
                        let mut s = 0.0;
                        for j in 0..=i {
                            s += bm[i][j] * c[j];
                        }
                        for j in (i + 1)..n {
                            s += bm[j][i] * c[j];
                        }
                        xv[i] = s;
                        d2 += s * c[i];
                    }
                    d2 = 1.0 + d2 / d1;
                    for i in 0..n {
                        for j in 0..=i {
                            bm[i][j] +=
                                (d2 * (t[i] * t[j]) - xv[i] * t[j] - t[i] * xv[j]) / d1;
                        }
                    }
                } else {
                    ilast = gradcount;
                }
            } else if ilast < gradcount {
                count = 0;
                ilast = gradcount;
            }
        } else {
            // uphill projection: restart unless just restarted
            count = 0;
            if ilast == gradcount {
                count = n;
            } else {
                ilast = gradcount;
            }
        }
        if iter >= ctl.maxit {
            break;
        }
        if gradcount - ilast > 2 * n {
            ilast = gradcount;
        }
        if count == n && ilast == gradcount {
            break;
        }
    }

    Ok(OptimOutcome {
        par: b,
        value: fmin,
        iterations: iter,
        converged: iter < ctl.maxit,
    })
}

/// Controls for [`nelder_mead_min`], defaulting to the documented defaults of
/// R's `optim(method = "Nelder-Mead")`: `maxit = 500`, `reltol ≈ 1.49e-8`,
/// reflection/contraction/expansion coefficients 1.0, 0.5, 2.0.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadControl {
    /// Cap on objective evaluations.
    pub maxit: usize,
    /// Relative tolerance; the convergence threshold is frozen from the
    /// starting value as `reltol · (|f(x0)| + reltol)`.
    pub reltol: f64,
    /// Reflection coefficient α.
    pub alpha: f64,
    /// Contraction coefficient β.
    pub beta: f64,
    /// Expansion coefficient γ.
    pub gamma: f64,
}

impl Default for NelderMeadControl {
    fn default() -> Self {
        Self {
            maxit: 500,
            reltol: 1.490116e-8,
            alpha: 1.0,
            beta: 0.5,
            gamma: 2.0,
        }
    }
}

/// Minimize `f` with the Nelder-Mead simplex of R's `optim`, reproducing its
/// initial-simplex construction (step `0.1·max_i |x0_i|` per coordinate, or
/// 0.1 for an all-zero start), reflection/expansion/contraction/shrink
/// sequence, and stopping rule. Non-finite objective values are treated as
/// the large constant `1e35`, as `optim` does.
///
/// `converged` is false if the evaluation budget was exhausted or the shrink
/// step failed to reduce the simplex size.
///
/// # Errors
///
/// Fails only if `f` is non-finite at `x0`.
pub fn nelder_mead_min<F>(
    mut f: F,
    x0: &[f64],
    ctl: &NelderMeadControl,
) -> LomaxResult<OptimOutcome>
where
    F: FnMut(&[f64]) -> f64,
{
    const BIG: f64 = 1e35;
    let n = x0.len();
    let n1 = n + 1;
    let mut bvec = x0.to_vec();
    let mut fv = f(&bvec);
    if !fv.is_finite() {
        return Err(LomaxError::NumericalFailure {
            reason: format!("objective non-finite at start {bvec:?}"),
        });
    }
    let mut funcount = 1usize;
    let convtol = ctl.reltol * (fv.abs() + ctl.reltol);
    let mut fail = 0u8;

    // Simplex: column j holds vertex j's coordinates in rows 0..n and its
    // objective value in row n.
    let mut p = vec![vec![0.0f64; n1]; n + 1];
    p[n][0] = fv;
    for i in 0..n {
        p[i][0] = bvec[i];
    }

    let mut l = 1usize;
    let mut size = 0.0;
    let mut step = 0.0;
    for v in &bvec {
        if 0.1 * v.abs() > step {
            step = 0.1 * v.abs();
        }
    }
    if step == 0.0 {
        step = 0.1;
    }
    for j in 2..=n1 {
        for i in 0..n {
            p[i][j - 1] = bvec[i];
        }
        let mut trystep = step;
        while p[j - 2][j - 1] == bvec[j - 2] {
            p[j - 2][j - 1] = bvec[j - 2] + trystep;
            trystep *= 10.0;
        }
        size += trystep;
    }
    let mut oldsize = size;
    let mut calcvert = true;

    loop {
        if calcvert {
            for j in 0..n1 {
                if j + 1 != l {
                    for i in 0..n {
                        bvec[i] = p[i][j];
                    }
                    fv = f(&bvec);
                    if !fv.is_finite() {
                        fv = BIG;
                    }
                    funcount += 1;
                    p[n][j] = fv;
                }
            }
            calcvert = false;
        }

        let mut vl = p[n][l - 1];
        let mut vh = vl;
        let mut h = l;
        for j in 1..=n1 {
            if j != l {
                fv = p[n][j - 1];
                if fv < vl {
                    l = j;
                    vl = fv;
                }
                if fv > vh {
                    h = j;
                    vh = fv;
                }
            }
        }
        if vh <= vl + convtol {
            break;
        }

        let mut cent = vec![0.0; n];
        for (i, ci) in cent.iter_mut().enumerate() {
            let mut sum = 0.0;
            for j in 0..n1 {
                sum += p[i][j];
            }
            *ci = (-p[i][h - 1] + sum) / n as f64;
        }
        for i in 0..n {
            bvec[i] = (1.0 + ctl.alpha) * cent[i] - ctl.alpha * p[i][h - 1];
        }
        fv = f(&bvec);
        if !fv.is_finite() {
            fv = BIG;
        }
        funcount += 1;
        let vr = fv;

        if vr < vl {
            // expansion
            let reflected = bvec.clone();
            for i in 0..n {
                bvec[i] = ctl.gamma * bvec[i] + (1.0 - ctl.gamma) * cent[i];
            }
            fv = f(&bvec);
            if !fv.is_finite() {
                fv = BIG;
            }
            funcount += 1;
            if fv < vr {
                for i in 0..n {
                    p[i][h - 1] = bvec[i];
                }
                p[n][h - 1] = fv;
            } else {
                for i in 0..n {
                    p[i][h - 1] = reflected[i];
                }
                p[n][h - 1] = vr;
            }
        } else {
            if vr < vh {
                for i in 0..n {
                    p[i][h - 1] = bvec[i];
                }
                p[n][h - 1] = vr;
            }
            // contraction
            for i in 0..n {
                bvec[i] = (1.0 - ctl.beta) * p[i][h - 1] + ctl.beta * cent[i];
            }
            fv = f(&bvec);
            if !fv.is_finite() {
                fv = BIG;
            }
            funcount += 1;
            if fv < p[n][h - 1] {
                for i in 0..n {
                    p[i][h - 1] = bvec[i];
                }
                p[n][h - 1] = fv;
            } else if vr >= vh {
                // shrink toward the best vertex
                calcvert = true;
                size = 0.0;
                for j in 0..n1 {
                    if j + 1 != l {
                        for i in 0..n {
                            p[i][j] = ctl.beta * (p[i][j] - p[i][l - 1]) + p[i][l - 1];
                            size += (p[i][j] - p[i][l - 1]).abs();
                        }
                    }
                }
                if size < oldsize {
                    oldsize = size;
                } else {
                    fail = 10;
                    break;
                }
            }
        }

        if funcount > ctl.maxit {
            break;
        }
    }

    let value = p[n][l - 1];
    let par: Vec<f64> = (0..n).map(|i| p[i][l - 1]).collect();
    Ok(OptimOutcome {
        par,
        value,
        iterations: funcount,
        converged: fail == 0 && funcount <= ctl.maxit,
    })
}

/// Empirical distribution function F_n(x) = (1/n)·#{X_i ≤ x}.
pub fn edf(s: &Sample, x: f64) -> f64 {
    s.edf(x)
}

/// Linear-interpolation quantile of sorted data at plotting position
/// 1 + (n−1)p.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0 && (0.0..=1.0).contains(&p));
    let h = 1.0 + (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    if lo >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1])
}

/// Silverman's rule-of-thumb bandwidth
/// h = 0.9 · n^(−1/5) · min(sd, IQR/1.34),
/// with the n−1 standard deviation and the linear-interpolation quantile
/// convention of [`quantile_type7`].
///
/// # Errors
///
/// Fails for n < 2 or when both spread measures are zero.
pub fn silverman_bandwidth(s: &Sample) -> LomaxResult<f64> {
    let n = s.len();
    if n < 2 {
        return Err(LomaxError::InvalidSample {
            reason: "bandwidth selection needs at least 2 observations".to_string(),
        });
    }
    let mean = s.mean();
    let ss: f64 = s.values().iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n as f64 - 1.0)).sqrt();
    let iqr = quantile_type7(s.sorted(), 0.75) - quantile_type7(s.sorted(), 0.25);
    let spread = sd.min(iqr / 1.34);
    if !(spread > 0.0) {
        return Err(LomaxError::InvalidSample {
            reason: "zero spread; bandwidth undefined".to_string(),
        });
    }
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// A Gaussian kernel density estimate with a fixed bandwidth.
#[derive(Debug, Clone)]
pub struct KdeModel {
    data: Vec<f64>,
    bandwidth: f64,
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

impl KdeModel {
    /// Build a model from a sample with the Silverman bandwidth.
    pub fn from_sample(s: &Sample) -> LomaxResult<Self> {
        let bandwidth = silverman_bandwidth(s)?;
        Ok(Self {
            data: s.values().to_vec(),
            bandwidth,
        })
    }

    /// Build a model with an explicit bandwidth.
    pub fn with_bandwidth(data: Vec<f64>, bandwidth: f64) -> LomaxResult<Self> {
        if data.is_empty() {
            return Err(LomaxError::InvalidSample {
                reason: "kernel density estimate needs data".to_string(),
            });
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(LomaxError::InvalidParameter {
                name: "bandwidth".to_string(),
                value: bandwidth,
                reason: "bandwidth must be finite and positive".to_string(),
            });
        }
        Ok(Self { data, bandwidth })
    }

    /// The bandwidth h.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The underlying data points.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Evaluate f̂_h(x) = (1/(nh)) Σ φ((x − X_i)/h), φ the standard normal
    /// density. Strictly positive for every finite x.
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self
            .data
            .iter()
            .map(|xi| {
                let z = (x - xi) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        INV_SQRT_2PI * sum / (self.data.len() as f64 * h)
    }
}

/// Evaluate a kernel density model at `x`; see [`KdeModel::eval`].
pub fn kde_eval(m: &KdeModel, x: f64) -> f64 {
    m.eval(x)
}
