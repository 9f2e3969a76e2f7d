//! Smallest uniform scale for configurations made of several constraints.
//!
//! With one scale everywhere, the guarantee reduces to three families of
//! conditions, all monotone in `sigma`:
//!
//! * a span condition at every location inside a feasible span: the
//!   guarantee must grow no faster than `e^{i eps}` at `i = 0`, i.e.
//!   `dF (1 - 2 L) <= eps sigma (1 - L - R)` with `L`, `R` the removed mass
//!   left and right of the location;
//! * the same condition on the mirrored configuration, covering pairs in the
//!   opposite order;
//! * an endpoint-pair condition across every finite constraint, comparing
//!   the mechanisms located on its two endpoints.
//!
//! The worst location inside a span has no closed form, so every span is
//! probed at its endpoints plus an evenly spaced interior grid. Unbounded
//! spans are probed out to a cutoff far enough that every exponential term is
//! negligible.

use crate::constraints::{
    classify, feasible_spans, location_view, reflect, ConfigClass, ConstraintConfig, PrivacyParams,
    Span,
};
use crate::error::{Error, Result};
use crate::laplace::{mass_left, mass_right};

/// Interior probes per span.
pub const DEFAULT_INTERIOR_PROBES: usize = 256;

/// Cutoff beyond the outermost constraint endpoint, in units of `2 dF/eps`.
pub const UNBOUNDED_CUTOFF: f64 = 50.0;

pub const DEFAULT_PRECISION: u32 = 6;
pub const MAX_PRECISION: u32 = 12;

/// Relative slack when comparing the two sides of a condition.
const CONDITION_SLACK: f64 = 1e-12;

/// Orientation of a span condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Pairs ordered as in the original configuration.
    Regular,
    /// Pairs ordered as in the mirrored configuration.
    Symmetric,
}

/// The first condition found violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailingCondition {
    Span {
        orientation: Orientation,
        /// Index into the feasible spans of the configuration the condition
        /// was evaluated on (mirrored for `Symmetric`).
        span: usize,
        location: f64,
    },
    EndpointPair {
        /// Index into `ConstraintConfig::intervals`.
        constraint: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub failing_condition: Option<FailingCondition>,
}

impl FeasibilityReport {
    fn pass() -> Self {
        FeasibilityReport {
            feasible: true,
            failing_condition: None,
        }
    }

    fn fail(condition: FailingCondition) -> Self {
        FeasibilityReport {
            feasible: false,
            failing_condition: Some(condition),
        }
    }
}

/// Result of the scale search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPlan {
    pub params: PrivacyParams,
    pub sigma: f64,
    pub class: ConfigClass,
    pub precision_d: u32,
}

/// Local growth condition at location `mu` for a uniform `sigma`.
pub fn span_condition(
    config: &ConstraintConfig,
    params: PrivacyParams,
    sigma: f64,
    mu: f64,
) -> Result<bool> {
    let view = location_view(config, mu)?;
    let l = mass_left(&view, sigma);
    let r = mass_right(&view, sigma);
    let lhs = params.delta_f() * (1.0 - 2.0 * l);
    let rhs = params.epsilon() * sigma * (1.0 - l - r);
    Ok(lhs <= rhs + CONDITION_SLACK * rhs.abs().max(lhs.abs()))
}

/// Condition for the pair of locations on the two endpoints of finite
/// constraint `k`, with the first location on the right endpoint.
pub fn endpoint_pair_condition(
    config: &ConstraintConfig,
    params: PrivacyParams,
    sigma: f64,
    k: usize,
) -> Result<bool> {
    let c = config
        .intervals()
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("no constraint with index {k}")))?;
    if !c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "constraint {k} is not finite"
        )));
    }
    let view = location_view(config, c.right())?;
    let l1 = mass_left(&view, sigma);
    let r1 = mass_right(&view, sigma);
    let shift = c.width() / sigma;
    let grow = shift.exp();
    let s = -(-shift).exp_m1() / 2.0;
    let retained_far = 1.0 - (grow * (l1 - s) + r1 / grow + s);
    let lhs = retained_far * grow;
    let i = c.width() / params.delta_f();
    let rhs = (1.0 - (l1 + r1)) * (i * params.epsilon()).exp();
    Ok(lhs <= rhs * (1.0 + CONDITION_SLACK))
}

/// Probe locations for one span.
fn span_probes(span: Span, reach: f64, interior: usize) -> Vec<f64> {
    let (lo, hi) = match (span.lo.is_finite(), span.hi.is_finite()) {
        (true, true) => (span.lo, span.hi),
        (true, false) => (span.lo, span.lo + reach),
        (false, true) => (span.hi - reach, span.hi),
        (false, false) => (-reach, reach),
    };
    let mut probes = Vec::with_capacity(interior + 2);
    probes.push(lo);
    let width = hi - lo;
    probes.extend((1..=interior).map(|k| lo + width * k as f64 / (interior + 1) as f64));
    probes.push(hi);
    probes
}

fn check_spans(
    config: &ConstraintConfig,
    params: PrivacyParams,
    sigma: f64,
    interior: usize,
    orientation: Orientation,
) -> Result<Option<FailingCondition>> {
    let reach = UNBOUNDED_CUTOFF * 2.0 * params.standard_scale();
    for (index, span) in feasible_spans(config).into_iter().enumerate() {
        for mu in span_probes(span, reach, interior) {
            if !span_condition(config, params, sigma, mu)? {
                return Ok(Some(FailingCondition::Span {
                    orientation,
                    span: index,
                    location: mu,
                }));
            }
        }
    }
    Ok(None)
}

/// Checks all conditions with the default probe density.
pub fn feasible(
    config: &ConstraintConfig,
    params: PrivacyParams,
    sigma: f64,
) -> Result<FeasibilityReport> {
    feasible_with_probes(config, params, sigma, DEFAULT_INTERIOR_PROBES)
}

pub fn feasible_with_probes(
    config: &ConstraintConfig,
    params: PrivacyParams,
    sigma: f64,
    interior: usize,
) -> Result<FeasibilityReport> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale must be positive, got {sigma}"
        )));
    }
    if let Some(c) = check_spans(config, params, sigma, interior, Orientation::Regular)? {
        return Ok(FeasibilityReport::fail(c));
    }
    let mirrored = reflect(config);
    if let Some(c) = check_spans(&mirrored, params, sigma, interior, Orientation::Symmetric)? {
        return Ok(FeasibilityReport::fail(c));
    }
    for (k, _) in config.finite_intervals() {
        if !endpoint_pair_condition(config, params, sigma, k)? {
            return Ok(FeasibilityReport::fail(FailingCondition::EndpointPair {
                constraint: k,
            }));
        }
    }
    Ok(FeasibilityReport::pass())
}

/// Smallest feasible `sigma` on the grid `10^-precision_d`, capped at
/// `2 dF/eps`.
pub fn optimal_uniform_sigma(
    config: &ConstraintConfig,
    params: PrivacyParams,
    precision_d: u32,
) -> Result<UniformPlan> {
    let class = classify(config);
    if class == ConfigClass::SingleInfinite {
        return Err(Error::UnsupportedClass(class.name()));
    }
    if precision_d > MAX_PRECISION {
        return Err(Error::InvalidArgument(format!(
            "precision must be at most {MAX_PRECISION}, got {precision_d}"
        )));
    }
    let step = 10f64.powi(-(precision_d as i32));
    let upper = 2.0 * params.standard_scale();
    let grid = |k: u64| (k as f64 * step).min(upper);
    let is_feasible = |k: u64| feasible(config, params, grid(k)).map(|r| r.feasible);

    // Invariant: `hi` feasible, everything below `lo` infeasible.
    let mut lo: u64 = 1;
    let mut hi: u64 = (upper / step).ceil() as u64;
    if !is_feasible(hi)? {
        return Err(Error::Internal(format!(
            "upper bound 2 dF/eps = {upper} is infeasible"
        )));
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if is_feasible(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(UniformPlan {
        params,
        sigma: grid(hi),
        class,
        precision_d,
    })
}
