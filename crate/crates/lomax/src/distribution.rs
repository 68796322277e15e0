//! The Lomax (Pareto Type II, location zero) distribution.
//!
//! Parameterized by a scale σ > 0 and a shape β > 0, with
//!
//! F(x) = 1 − (1 + x/σ)^(−β),   f(x) = (β/σ)(1 + x/σ)^(−(β+1)),   x ≥ 0.
//!
//! CDF, PDF, and quantile are evaluated through `log1p`/`expm1` so that values
//! near x = 0 and extreme shapes do not lose precision inside the
//! minimum-distance objectives, which call these functions at every data point
//! on every optimizer step.

use crate::error::{LomaxError, LomaxResult};
use rand::Rng;
use statrs::function::gamma::ln_gamma;

/// Parameter pair (σ, β) of a Lomax distribution.
///
/// Construction validates both parameters: finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LomaxParams {
    sigma: f64,
    beta: f64,
}

impl LomaxParams {
    /// Create a validated parameter pair.
    pub fn new(sigma: f64, beta: f64) -> LomaxResult<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(LomaxError::InvalidParameter {
                name: "sigma".to_string(),
                value: sigma,
                reason: "scale parameter must be finite and positive".to_string(),
            });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(LomaxError::InvalidParameter {
                name: "beta".to_string(),
                value: beta,
                reason: "shape parameter must be finite and positive".to_string(),
            });
        }
        Ok(Self { sigma, beta })
    }

    /// Scale parameter σ.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Shape parameter β.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Density f(x) = (β/σ)(1 + x/σ)^(−(β+1)) for x ≥ 0.
    pub fn pdf(&self, x: f64) -> LomaxResult<f64> {
        validate_point(x)?;
        Ok(self.pdf_unchecked(x))
    }

    /// Density without the domain check, for hot loops over validated samples.
    #[inline]
    pub fn pdf_unchecked(&self, x: f64) -> f64 {
        (self.beta / self.sigma) * (-(self.beta + 1.0) * (x / self.sigma).ln_1p()).exp()
    }

    /// CDF F(x) = 1 − (1 + x/σ)^(−β) for x ≥ 0.
    pub fn cdf(&self, x: f64) -> LomaxResult<f64> {
        validate_point(x)?;
        Ok(self.cdf_unchecked(x))
    }

    /// CDF without the domain check, for hot loops over validated samples.
    #[inline]
    pub fn cdf_unchecked(&self, x: f64) -> f64 {
        -(-self.beta * (x / self.sigma).ln_1p()).exp_m1()
    }

    /// Quantile F⁻¹(u) = σ((1−u)^(−1/β) − 1) for u ∈ [0, 1).
    pub fn quantile(&self, u: f64) -> LomaxResult<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(LomaxError::InvalidParameter {
                name: "u".to_string(),
                value: u,
                reason: "probability must lie in [0, 1)".to_string(),
            });
        }
        Ok(self.sigma * (-(-u).ln_1p() / self.beta).exp_m1())
    }

    /// Draw n i.i.d. values by inversion of the CDF.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, out: &mut Vec<f64>) {
        out.clear();
        out.reserve(n);
        for _ in 0..n {
            let u: f64 = rng.random();
            out.push(self.sigma * (-(-u).ln_1p() / self.beta).exp_m1());
        }
    }

    /// Draw n i.i.d. values by inversion of the CDF, allocating the output.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.sample_into(rng, n, &mut out);
        out
    }

    /// Raw moment E[Xʳ] = σʳ Γ(β−r) Γ(1+r) / Γ(β), defined only for r < β.
    ///
    /// The gamma ratio is evaluated through log-gamma differences so that
    /// large shapes do not overflow.
    pub fn raw_moment(&self, r: u32) -> LomaxResult<f64> {
        let rf = f64::from(r);
        if rf >= self.beta {
            return Err(LomaxError::MomentDoesNotExist {
                order: r,
                beta: self.beta,
            });
        }
        let ln = rf * self.sigma.ln() + ln_gamma(self.beta - rf) + ln_gamma(1.0 + rf)
            - ln_gamma(self.beta);
        Ok(ln.exp())
    }

    /// Mean σ/(β−1), defined for β > 1.
    pub fn mean(&self) -> LomaxResult<f64> {
        self.raw_moment(1)
    }

    /// Variance, defined for β > 2.
    pub fn variance(&self) -> LomaxResult<f64> {
        let m1 = self.raw_moment(1)?;
        let m2 = self.raw_moment(2)?;
        Ok(m2 - m1 * m1)
    }
}

fn validate_point(x: f64) -> LomaxResult<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(LomaxError::InvalidParameter {
            name: "x".to_string(),
            value: x,
            reason: "evaluation point must be finite and non-negative".to_string(),
        });
    }
    Ok(())
}

/// Inverse Fisher information K⁻¹ for an n-observation Lomax sample:
///
/// [[σ²(β+2)(β+1)²/(nβ),  σβ(β+1)(β+2)/n],
///  [σβ(β+1)(β+2)/n,      β²(β+1)²/n    ]]
pub fn fisher_information_inverse(p: &LomaxParams, n: usize) -> [[f64; 2]; 2] {
    let (s, b) = (p.sigma(), p.beta());
    let nf = n as f64;
    let off = s * b * (b + 1.0) * (b + 2.0) / nf;
    [
        [s * s * (b + 2.0) * (b + 1.0) * (b + 1.0) / (nf * b), off],
        [off, b * b * (b + 1.0) * (b + 1.0) / nf],
    ]
}

/// A validated sample with its order statistics cached at construction.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    /// Validate and wrap a sample: non-empty, all entries finite and ≥ 0.
    pub fn new(values: Vec<f64>) -> LomaxResult<Self> {
        if values.is_empty() {
            return Err(LomaxError::InvalidSample {
                reason: "sample is empty".to_string(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(LomaxError::InvalidSample {
                reason: format!("non-finite value {bad}"),
            });
        }
        if let Some(bad) = values.iter().find(|v| **v < 0.0) {
            return Err(LomaxError::InvalidSample {
                reason: format!("negative value {bad}; Lomax support is [0, ∞)"),
            });
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
        Ok(Self { values, sorted })
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the sample holds no observations (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The observations in input order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The order statistics X₍₁₎ ≤ … ≤ X₍ₙ₎.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Sample median (average of the middle pair for even n).
    pub fn median(&self) -> f64 {
        let n = self.sorted.len();
        if n % 2 == 1 {
            self.sorted[n / 2]
        } else {
            0.5 * (self.sorted[n / 2 - 1] + self.sorted[n / 2])
        }
    }

    /// Shift every observation by −c, e.g. to remove a location offset.
    ///
    /// Fails if any shifted value becomes negative.
    pub fn shifted(&self, c: f64) -> LomaxResult<Self> {
        Sample::new(self.values.iter().map(|v| v - c).collect())
    }

    /// Empirical distribution function (1/n)·#{Xᵢ ≤ x}.
    pub fn edf(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|v| *v <= x);
        count as f64 / self.len() as f64
    }
}
