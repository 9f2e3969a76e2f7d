//! Distance-dependent scales for a configuration with one constraint that
//! extends to infinity.
//!
//! All derivations assume the constraint lies to the right of the feasible
//! half-line. A constraint on the left is handled by reflecting the
//! configuration and the location, so only one set of formulas exists.
//!
//! With `i = d / delta_f` the distance from the boundary in units of the
//! sensitivity, the scale at the boundary is
//!
//! ```text
//! sigma_0 = -delta_f / (W0(-1/(2e)) * e * epsilon)        (~1.586 delta_f / epsilon)
//! ```
//!
//! and at distance `i > 0`
//!
//! ```text
//! z(i)     = -(2 i delta_f / sigma_0) e^{-i eps} exp(-i delta_f e^{-i eps} / sigma_0)
//! sigma(i) = -i delta_f e^{i eps} sigma_0 / (W_Z(z(i)) e^{i eps} sigma_0 + i delta_f)
//! ```
//!
//! where `W_Z` is the principal branch up to `i = 1/epsilon` and the lower
//! branch beyond it. `z` reaches its minimum `-1/e` exactly at `i = 1/epsilon`,
//! so the two branches join continuously there.

use std::f64::consts::E;

use crate::constraints::{classify, ConfigClass, ConstraintConfig, PrivacyParams};
use crate::error::{Error, Result};
use crate::special_functions::{lambert_w, BranchIndex};

/// Which side of the feasible half-line the infinite constraint sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintSide {
    /// Constraint `(b, +inf)`; feasible responses are `<= b`.
    ConstraintOnRight,
    /// Constraint `(-inf, b)`; feasible responses are `>= b`.
    ConstraintOnLeft,
}

/// Scale schedule for the single-infinite class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleInfinitePlan {
    params: PrivacyParams,
    boundary: f64,
    side: ConstraintSide,
    sigma0: f64,
}

impl SingleInfinitePlan {
    pub fn new(config: &ConstraintConfig, params: PrivacyParams) -> Result<Self> {
        if classify(config) != ConfigClass::SingleInfinite {
            return Err(Error::UnsupportedClass(classify(config).name()));
        }
        let c = config.intervals()[0];
        let (boundary, side) = if c.right() == f64::INFINITY {
            (c.left(), ConstraintSide::ConstraintOnRight)
        } else {
            (c.right(), ConstraintSide::ConstraintOnLeft)
        };
        Ok(SingleInfinitePlan {
            params,
            boundary,
            side,
            sigma0: sigma_at_boundary(params),
        })
    }

    pub fn params(&self) -> PrivacyParams {
        self.params
    }

    /// Finite endpoint of the infinite constraint.
    pub fn boundary(&self) -> f64 {
        self.boundary
    }

    pub fn side(&self) -> ConstraintSide {
        self.side
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// Distance from a feasible location to the boundary.
    pub fn distance(&self, location: f64) -> Result<f64> {
        if !location.is_finite() {
            return Err(Error::InfeasibleLocation(location));
        }
        // A left-side constraint is mirrored so that it sits right of the
        // mirrored location.
        let (boundary, mirrored) = match self.side {
            ConstraintSide::ConstraintOnRight => (self.boundary, location),
            ConstraintSide::ConstraintOnLeft => (-self.boundary, -location),
        };
        let d = boundary - mirrored;
        if d < 0.0 {
            return Err(Error::InfeasibleLocation(location));
        }
        Ok(d)
    }

    pub fn sigma_for_location(&self, location: f64) -> Result<f64> {
        sigma_at_distance(self.params, self.distance(location)?)
    }
}

/// Scale for a location sitting on the constraint boundary.
pub fn sigma_at_boundary(params: PrivacyParams) -> f64 {
    let w = lambert_w(BranchIndex::Principal, -1.0 / (2.0 * E))
        .expect("-1/(2e) lies inside the principal branch domain");
    -params.delta_f() / (w * E * params.epsilon())
}

/// Input to `W_Z` at distance index `i`, for boundary scale `sigma0`.
fn lambert_input(params: PrivacyParams, sigma0: f64, i: f64) -> f64 {
    let df = params.delta_f();
    let decay = (-i * params.epsilon()).exp();
    -(2.0 * i * df / sigma0) * decay * (-i * df * decay / sigma0).exp()
}

/// `-i dF e^{i eps} sigma0 / (w e^{i eps} sigma0 + i dF)`.
fn sigma_from_w(params: PrivacyParams, sigma0: f64, i: f64, w: f64) -> f64 {
    let df = params.delta_f();
    let grow = (i * params.epsilon()).exp();
    -i * df * grow * sigma0 / (w * grow * sigma0 + i * df)
}

/// Scale for a location at distance `d >= 0` from the constraint boundary.
pub fn sigma_at_distance(params: PrivacyParams, d: f64) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::NegativeDistance(d));
    }
    let sigma0 = sigma_at_boundary(params);
    if d == 0.0 {
        return Ok(sigma0);
    }
    let i = d / params.delta_f();
    let branch = if i <= 1.0 / params.epsilon() {
        BranchIndex::Principal
    } else {
        BranchIndex::MinusOne
    };
    let z = lambert_input(params, sigma0, i);
    if z == 0.0 {
        // Underflow at very large distances; the schedule has reached its floor.
        return Ok(params.standard_scale());
    }
    let w = lambert_w(branch, z)?;
    let sigma = sigma_from_w(params, sigma0, i, w);
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Internal(format!(
            "non-positive scale {sigma} at distance {d}"
        )));
    }
    Ok(sigma)
}

const BOUND_REL_TOL: f64 = 1e-9;

/// Checks a candidate `sigma2` at distance index `i` against the four
/// necessary conditions derived from a boundary location with scale `sigma1`:
///
/// 1. `sigma2 <= B(W0)` and 2. `sigma2 >= B(W-1)`, where `B` is the
///    `sigma_from_w` expression evaluated with the boundary scale `sigma1`;
/// 3. `sigma2 >= i dF / (a - W0(y))` or 4. `sigma2 <= i dF / (a - W-1(y))`,
///    with `c = W0(-1/(2e))`, `a = c i eps e^{1 - i eps}` and
///    `y = 2 c i eps e^{a - i eps + 1}`.
///
/// Comparisons allow a relative slack of `1e-9` since the schedule saturates
/// them exactly.
pub fn check_scale_bounds(params: PrivacyParams, i: f64, sigma1: f64, sigma2: f64) -> Result<bool> {
    if !(i > 0.0 && sigma1 > 0.0 && sigma2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need i > 0 and positive scales, got i={i}, sigma1={sigma1}, sigma2={sigma2}"
        )));
    }
    let le = |a: f64, b: f64| a <= b * (1.0 + BOUND_REL_TOL);
    let ge = |a: f64, b: f64| a >= b * (1.0 - BOUND_REL_TOL);

    let z = lambert_input(params, sigma1, i);
    let upper = sigma_from_w(params, sigma1, i, lambert_w(BranchIndex::Principal, z)?);
    let lower = sigma_from_w(params, sigma1, i, lambert_w(BranchIndex::MinusOne, z)?);
    let within_isolation = le(sigma2, upper) && ge(sigma2, lower);

    let eps = params.epsilon();
    let c = lambert_w(BranchIndex::Principal, -1.0 / (2.0 * E))?;
    let a = c * i * eps * (1.0 - i * eps).exp();
    let y = 2.0 * c * i * eps * (a - i * eps + 1.0).exp();
    let span3 = i * params.delta_f() / (a - lambert_w(BranchIndex::Principal, y)?);
    let span4 = i * params.delta_f() / (a - lambert_w(BranchIndex::MinusOne, y)?);
    let within_domain = ge(sigma2, span3) || le(sigma2, span4);

    Ok(within_isolation && within_domain)
}
