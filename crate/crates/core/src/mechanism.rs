//! The truncated and renormalized Laplace mechanism for one true response.

use crate::constraints::{feasible_spans, location_view, ConstraintConfig, PrivacyParams, Span};
use crate::error::{Error, Result};
use crate::laplace::{
    laplace_cdf, laplace_pdf, laplace_sf, normalization, LaplaceParams, MassBreakdown,
};
use crate::plan::{ScaleSchedule, SigmaPlan};
use crate::rng::UniformStream;
use crate::uniform::DEFAULT_PRECISION;

/// One feasible span and the probability mass it carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub span: Span,
    pub mass_before: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLaplace {
    config: ConstraintConfig,
    laplace: LaplaceParams,
    mass: MassBreakdown,
    segments: Vec<Segment>,
}

impl TruncatedLaplace {
    /// Builds the mechanism for `true_response`, choosing the scale from the
    /// configuration class.
    pub fn build(
        config: &ConstraintConfig,
        params: PrivacyParams,
        true_response: f64,
    ) -> Result<Self> {
        if !config.is_feasible(true_response) || !true_response.is_finite() {
            return Err(Error::InfeasibleLocation(true_response));
        }
        let plan = SigmaPlan::compute(config, params, DEFAULT_PRECISION)?;
        Self::from_schedule(config, &plan, true_response)
    }

    pub fn from_schedule<S: ScaleSchedule + ?Sized>(
        config: &ConstraintConfig,
        schedule: &S,
        true_response: f64,
    ) -> Result<Self> {
        if !config.is_feasible(true_response) || !true_response.is_finite() {
            return Err(Error::InfeasibleLocation(true_response));
        }
        let sigma = schedule.sigma_for(true_response)?;
        Self::with_sigma(config, true_response, sigma)
    }

    /// Builds the mechanism with an explicit scale.
    pub fn with_sigma(config: &ConstraintConfig, mu: f64, sigma: f64) -> Result<Self> {
        let view = location_view(config, mu)?;
        let laplace = LaplaceParams::new(mu, sigma)?;
        let mass = normalization(&view, sigma)?;
        let mut segments = Vec::new();
        let mut before = 0.0;
        for span in feasible_spans(config) {
            let raw = if span.lo >= mu {
                laplace_sf(span.lo, laplace) - laplace_sf(span.hi, laplace)
            } else {
                laplace_cdf(span.hi, laplace) - laplace_cdf(span.lo, laplace)
            };
            let m = mass.n * raw;
            segments.push(Segment {
                span,
                mass_before: before,
                mass: m,
            });
            before += m;
        }
        Ok(TruncatedLaplace {
            config: config.clone(),
            laplace,
            mass,
            segments,
        })
    }

    pub fn config(&self) -> &ConstraintConfig {
        &self.config
    }

    pub fn mu(&self) -> f64 {
        self.laplace.mu()
    }

    pub fn sigma(&self) -> f64 {
        self.laplace.sigma()
    }

    pub fn mass(&self) -> MassBreakdown {
        self.mass
    }

    pub fn normalization(&self) -> f64 {
        self.mass.n
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !self.config.is_feasible(x) {
            return 0.0;
        }
        self.mass.n * laplace_pdf(x, self.laplace)
    }

    /// Laplace mass on `[lo, x]`, in unnormalized units.
    fn raw_mass(&self, lo: f64, x: f64) -> f64 {
        if lo >= self.mu() {
            laplace_sf(lo, self.laplace) - laplace_sf(x, self.laplace)
        } else {
            laplace_cdf(x, self.laplace) - laplace_cdf(lo, self.laplace)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let last = self.segments.last().expect("at least one feasible span");
        if x >= last.span.hi {
            return 1.0;
        }
        let Some(seg) = self.segments.iter().rev().find(|s| s.span.lo <= x) else {
            return 0.0;
        };
        let value = if x >= seg.span.hi {
            seg.mass_before + seg.mass
        } else {
            seg.mass_before + self.mass.n * self.raw_mass(seg.span.lo, x)
        };
        value.clamp(0.0, 1.0)
    }

    /// Inverse of [`cdf`](Self::cdf). `p = 0` and `p = 1` give the infimum and
    /// supremum of the feasible support, which may be infinite.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let first = self.segments.first().expect("at least one feasible span");
        let last = self.segments.last().expect("at least one feasible span");
        if p == 0.0 {
            return Ok(first.span.lo);
        }
        if p == 1.0 {
            return Ok(last.span.hi);
        }
        let seg = self
            .segments
            .iter()
            .rev()
            .find(|s| s.mass > 0.0 && s.mass_before <= p)
            .unwrap_or(first);
        let q = ((p - seg.mass_before) / self.mass.n).max(0.0);
        let (mu, sigma) = (self.mu(), self.sigma());
        let below = laplace_cdf(seg.span.lo, self.laplace) + q;
        let x = if below <= 0.5 {
            mu + sigma * (2.0 * below).ln()
        } else {
            let above = laplace_sf(seg.span.lo, self.laplace) - q;
            mu - sigma * (2.0 * above.max(0.0)).ln()
        };
        Ok(x.clamp(seg.span.lo, seg.span.hi))
    }

    /// Maps a uniform deviate to a noisy response. The result is always
    /// finite and feasible.
    pub fn sample(&self, u: f64) -> f64 {
        let u = if u.is_nan() { 0.5 } else { u };
        let u = u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
        self.quantile(u).expect("deviate clamped into (0, 1)")
    }

    /// `n` samples from a seeded stream.
    pub fn sample_seeded(&self, seed: u64, n: usize) -> Vec<f64> {
        UniformStream::new(seed)
            .take(n)
            .map(|u| self.sample(u))
            .collect()
    }
}
