//! Goodness-of-fit assessment by parametric bootstrap.
//!
//! Because the Kolmogorov-Smirnov statistic is computed against a *fitted*
//! distribution, its classical null tables do not apply. The standard remedy
//! is a parametric bootstrap: simulate from the fitted model, refit on every
//! simulated sample with the same estimator, and compare the observed
//! statistic with the resampled ones. The resulting p-value uses the
//! add-one convention (1 + #{D_b ≥ D_obs}) / (kept + 1), which is never
//! exactly zero and accounts for the observed sample itself.
//!
//! Refits that fail to converge are dropped from the null distribution and
//! counted; if more than half fail, the test refuses to report a p-value
//! rather than base it on a biased remnant.

use rayon::prelude::*;

use crate::distribution::{LomaxParams, Sample};
use crate::error::{LomaxError, LomaxResult};
use crate::estimators::{estimate, Method};
use crate::simulation::substream;

/// Default number of bootstrap replications.
pub const DEFAULT_BOOTSTRAP_REPS: usize = 1000;

/// Kolmogorov-Smirnov statistic of a sample against a candidate model:
///
/// D = max over j of max(|j/n − F(X₍ⱼ₎)|, |(j−1)/n − F(X₍ⱼ₎)|).
///
/// # Example
///
/// ```
/// use lomax::distribution::{LomaxParams, Sample};
/// use lomax::gof::ks_statistic;
/// let s = Sample::new(vec![1.0]).unwrap();
/// let p = LomaxParams::new(1.0, 1.0).unwrap();
/// assert_eq!(ks_statistic(&s, &p), 0.5);
/// ```
pub fn ks_statistic(s: &Sample, p: &LomaxParams) -> f64 {
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (j, x) in s.sorted().iter().enumerate() {
        let f = p.cdf_unchecked(*x);
        let hi = ((j + 1) as f64 / n - f).abs();
        let lo = (j as f64 / n - f).abs();
        d = d.max(hi).max(lo);
    }
    d
}

/// Outcome of a parametric-bootstrap Kolmogorov-Smirnov test.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GofResult {
    /// Estimator used for the observed fit and every refit.
    pub method: Method,
    /// Parameters fitted to the observed sample.
    pub fitted: LomaxParams,
    /// Observed Kolmogorov-Smirnov statistic against `fitted`.
    pub statistic: f64,
    /// Bootstrap p-value (1 + #{D_b ≥ D_obs}) / (kept + 1).
    pub p_value: f64,
    /// Bootstrap replications requested.
    pub bootstrap_reps: usize,
    /// Replications whose refit converged and entered the null distribution.
    pub kept: usize,
    /// Replications dropped because their refit failed.
    pub refits_failed: usize,
}

/// Test the fit of `method` on `s` by parametric bootstrap.
///
/// Fits the estimator, simulates `reps` samples of the same size from the
/// fitted model (one [`substream`] per replication, so the result does not
/// depend on thread count), refits each, and returns the add-one bootstrap
/// p-value of the observed statistic.
///
/// # Errors
///
/// * [`LomaxError::EstimationFailed`] when the estimator does not converge
///   on the observed sample.
/// * [`LomaxError::BootstrapUnstable`] when more than half of the refits
///   fail.
/// * [`LomaxError::InvalidParameter`] when `reps` is zero.
pub fn ks_bootstrap_test(
    s: &Sample,
    method: Method,
    reps: usize,
    seed: u64,
) -> LomaxResult<GofResult> {
    if reps == 0 {
        return Err(LomaxError::InvalidParameter {
            name: "reps".to_string(),
            value: 0.0,
            reason: "at least one bootstrap replication is required".to_string(),
        });
    }
    let fit = estimate(s, method);
    let fitted = match (fit.converged, fit.params) {
        (true, Some(p)) => p,
        _ => {
            return Err(LomaxError::EstimationFailed {
                method: method.name().to_string(),
                reason: fit
                    .reason
                    .unwrap_or_else(|| "estimator did not converge".to_string()),
            })
        }
    };
    let d_obs = ks_statistic(s, &fitted);

    let n = s.len();
    let draws: Vec<Option<f64>> = (0..reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, b as u64);
            let boot = Sample::new(fitted.sample(&mut rng, n))
                .expect("simulated values are non-negative and finite");
            let refit = estimate(&boot, method);
            match (refit.converged, refit.params) {
                (true, Some(p)) => Some(ks_statistic(&boot, &p)),
                _ => None,
            }
        })
        .collect();

    let kept = draws.iter().flatten().count();
    let refits_failed = reps - kept;
    if 2 * refits_failed > reps {
        return Err(LomaxError::BootstrapUnstable {
            failed: refits_failed,
            total: reps,
        });
    }
    let hits = draws.iter().flatten().filter(|d| **d >= d_obs).count();
    let p_value = (1 + hits) as f64 / (kept + 1) as f64;
    Ok(GofResult {
        method,
        fitted,
        statistic: d_obs,
        p_value,
        bootstrap_reps: reps,
        kept,
        refits_failed,
    })
}
