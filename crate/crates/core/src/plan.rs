//! Scale selection per configuration class.

use crate::constraints::{classify, ConfigClass, ConstraintConfig, PrivacyParams};
use crate::error::{Error, Result};
use crate::single_infinite::SingleInfinitePlan;
use crate::uniform::{optimal_uniform_sigma, UniformPlan};

/// Anything that assigns a scale to a location.
pub trait ScaleSchedule {
    fn sigma_for(&self, location: f64) -> Result<f64>;
}

/// The same scale at every location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedScale(pub f64);

impl ScaleSchedule for FixedScale {
    fn sigma_for(&self, _location: f64) -> Result<f64> {
        if self.0.is_finite() && self.0 > 0.0 {
            Ok(self.0)
        } else {
            Err(Error::InvalidArgument(format!(
                "scale {} is not positive",
                self.0
            )))
        }
    }
}

impl ScaleSchedule for SingleInfinitePlan {
    fn sigma_for(&self, location: f64) -> Result<f64> {
        self.sigma_for_location(location)
    }
}

impl ScaleSchedule for UniformPlan {
    fn sigma_for(&self, _location: f64) -> Result<f64> {
        Ok(self.sigma)
    }
}

impl<F> ScaleSchedule for F
where
    F: Fn(f64) -> Result<f64>,
{
    fn sigma_for(&self, location: f64) -> Result<f64> {
        self(location)
    }
}

/// Scale plan chosen from the configuration class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaPlan {
    /// No constraints: the standard `dF/eps`.
    Standard(f64),
    /// Distance-dependent scale for one infinite constraint.
    SingleInfinite(SingleInfinitePlan),
    /// One scale for every location.
    Uniform(UniformPlan),
}

impl SigmaPlan {
    pub fn compute(
        config: &ConstraintConfig,
        params: PrivacyParams,
        precision_d: u32,
    ) -> Result<Self> {
        Ok(match classify(config) {
            ConfigClass::Empty => SigmaPlan::Standard(params.standard_scale()),
            ConfigClass::SingleInfinite => {
                SigmaPlan::SingleInfinite(SingleInfinitePlan::new(config, params)?)
            }
            ConfigClass::ArbitraryFinite | ConfigClass::Arbitrary => {
                SigmaPlan::Uniform(optimal_uniform_sigma(config, params, precision_d)?)
            }
        })
    }

    /// The scale when it does not depend on the location.
    pub fn uniform_sigma(&self) -> Option<f64> {
        match self {
            SigmaPlan::Standard(s) => Some(*s),
            SigmaPlan::Uniform(p) => Some(p.sigma),
            SigmaPlan::SingleInfinite(_) => None,
        }
    }
}

impl ScaleSchedule for SigmaPlan {
    fn sigma_for(&self, location: f64) -> Result<f64> {
        match self {
            SigmaPlan::Standard(s) => Ok(*s),
            SigmaPlan::SingleInfinite(p) => p.sigma_for_location(location),
            SigmaPlan::Uniform(p) => Ok(p.sigma),
        }
    }
}
