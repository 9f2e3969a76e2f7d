//! Laplace density, CDF, and the mass removed by truncation.

use crate::constraints::LocationView;
use crate::error::{Error, Result};

/// Location `mu` and scale `sigma > 0` of a Laplace density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceParams {
    mu: f64,
    sigma: f64,
}

impl LaplaceParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "location {mu} is not finite"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale must be positive and finite, got {sigma}"
            )));
        }
        Ok(LaplaceParams { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

pub fn laplace_pdf(x: f64, p: LaplaceParams) -> f64 {
    (-(p.mu - x).abs() / p.sigma).exp() / (2.0 * p.sigma)
}

pub fn laplace_cdf(x: f64, p: LaplaceParams) -> f64 {
    if x < p.mu {
        0.5 * ((x - p.mu) / p.sigma).exp()
    } else {
        // -expm1 keeps precision when x is just above mu.
        0.5 - 0.5 * (-(x - p.mu) / p.sigma).exp_m1()
    }
}

/// Upper tail `1 - cdf(x)`, computed without cancellation.
pub fn laplace_sf(x: f64, p: LaplaceParams) -> f64 {
    laplace_cdf(2.0 * p.mu - x, p)
}

/// Removed mass left of the location, `L_j`.
pub fn mass_left(view: &LocationView, sigma: f64) -> f64 {
    let finite: f64 = view
        .left_finite
        .iter()
        .map(|&(dl, dr)| ((-dr / sigma).exp() - (-dl / sigma).exp()) / 2.0)
        .sum();
    let tail = view.dr_infinite.map_or(0.0, |d| (-d / sigma).exp() / 2.0);
    finite + tail
}

/// Removed mass right of the location, `R_j`.
pub fn mass_right(view: &LocationView, sigma: f64) -> f64 {
    let finite: f64 = view
        .right_finite
        .iter()
        .map(|&(dl, dr)| ((-dl / sigma).exp() - (-dr / sigma).exp()) / 2.0)
        .sum();
    let tail = view.dl_infinite.map_or(0.0, |d| (-d / sigma).exp() / 2.0);
    finite + tail
}

/// Removed mass on each side and the resulting normalization factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBreakdown {
    pub l: f64,
    pub r: f64,
    pub n: f64,
}

impl MassBreakdown {
    /// Surviving mass `1 - (l + r)`.
    pub fn retained(&self) -> f64 {
        1.0 - (self.l + self.r)
    }
}

pub fn normalization(view: &LocationView, sigma: f64) -> Result<MassBreakdown> {
    let l = mass_left(view, sigma);
    let r = mass_right(view, sigma);
    let retained = 1.0 - (l + r);
    if retained <= 1e-12 {
        return Err(Error::DegenerateMass { removed: l + r });
    }
    Ok(MassBreakdown {
        l,
        r,
        n: 1.0 / retained,
    })
}
