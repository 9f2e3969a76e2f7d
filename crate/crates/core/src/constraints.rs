//! Constraint configurations: the publicly known ranges a query response can
//! never fall into.
//!
//! Endpoints are represented as `f64`, with `f64::NEG_INFINITY` and
//! `f64::INFINITY` standing for constraints that extend without bound. NaN is
//! rejected everywhere. Constraints are open intervals, so their endpoints are
//! feasible responses and admissible locations.

use std::fmt;

use crate::error::{Error, Result};

/// An infeasible range `(left, right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    left: f64,
    right: f64,
}

impl Interval {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        let invalid = |reason| Error::InvalidInterval {
            left,
            right,
            reason,
        };
        if left.is_nan() || right.is_nan() {
            return Err(invalid("endpoint is NaN"));
        }
        if left == f64::INFINITY || right == f64::NEG_INFINITY {
            return Err(invalid("endpoint infinite in the wrong direction"));
        }
        if left.is_infinite() && right.is_infinite() {
            return Err(invalid("constraint covers the whole real line"));
        }
        if left >= right {
            return Err(invalid("left endpoint must be below right endpoint"));
        }
        Ok(Interval { left, right })
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn is_finite(&self) -> bool {
        self.left.is_finite() && self.right.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    /// True when `x` lies strictly between the endpoints.
    pub fn contains_strictly(&self, x: f64) -> bool {
        self.left < x && x < self.right
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// A maximal feasible span `[lo, hi]`. Unlike [`Interval`], both ends may be
/// infinite (the unconstrained line).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Privacy budget `epsilon` and query sensitivity `delta_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    epsilon: f64,
    delta_f: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta_f: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be a positive finite number, got {epsilon}"
            )));
        }
        if !(delta_f.is_finite() && delta_f > 0.0) {
            return Err(Error::InvalidParams(format!(
                "delta_f must be a positive finite number, got {delta_f}"
            )));
        }
        Ok(PrivacyParams { epsilon, delta_f })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta_f(&self) -> f64 {
        self.delta_f
    }

    /// `delta_f / epsilon`, the scale of the unconstrained Laplace mechanism.
    pub fn standard_scale(&self) -> f64 {
        self.delta_f / self.epsilon
    }
}

/// The four configuration classes, each with its own scale calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigClass {
    Empty,
    SingleInfinite,
    ArbitraryFinite,
    Arbitrary,
}

impl ConfigClass {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigClass::Empty => "empty",
            ConfigClass::SingleInfinite => "single-infinite",
            ConfigClass::ArbitraryFinite => "arbitrary-finite",
            ConfigClass::Arbitrary => "arbitrary",
        }
    }
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sorted, disjoint constraints with strictly positive gaps between them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintConfig {
    intervals: Vec<Interval>,
}

impl ConstraintConfig {
    /// The configuration with no constraints.
    pub fn empty() -> Self {
        ConstraintConfig {
            intervals: Vec::new(),
        }
    }

    /// Parses `(left, right)` pairs and normalizes them.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let raw = pairs
            .iter()
            .map(|&(l, r)| Interval::new(l, r))
            .collect::<Result<Vec<_>>>()?;
        normalize_config(raw)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// A constraint extends to negative infinity.
    pub fn i_left(&self) -> bool {
        self.intervals
            .first()
            .is_some_and(|c| c.left == f64::NEG_INFINITY)
    }

    /// A constraint extends to positive infinity.
    pub fn i_right(&self) -> bool {
        self.intervals
            .last()
            .is_some_and(|c| c.right == f64::INFINITY)
    }

    pub fn finite_intervals(&self) -> impl Iterator<Item = (usize, &Interval)> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_finite())
    }

    pub fn finite_count(&self) -> usize {
        self.finite_intervals().count()
    }

    /// True unless `x` lies strictly inside some constraint.
    pub fn is_feasible(&self, x: f64) -> bool {
        !x.is_nan() && !self.intervals.iter().any(|c| c.contains_strictly(x))
    }

    /// All finite endpoints in increasing order.
    pub fn finite_endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|c| [c.left, c.right])
            .filter(|x| x.is_finite())
            .collect()
    }
}

/// Sorts, merges overlapping or touching constraints and validates that some
/// feasible space remains.
pub fn normalize_config(mut raw: Vec<Interval>) -> Result<ConstraintConfig> {
    raw.sort_by(|a, b| a.left.total_cmp(&b.left));
    let mut merged: Vec<Interval> = Vec::with_capacity(raw.len());
    for c in raw {
        match merged.last_mut() {
            Some(last) if c.left <= last.right => {
                last.right = last.right.max(c.right);
            }
            _ => merged.push(c),
        }
    }
    if merged
        .iter()
        .any(|c| c.left.is_infinite() && c.right.is_infinite())
    {
        return Err(Error::EmptyFeasibleSpace);
    }
    Ok(ConstraintConfig { intervals: merged })
}

pub fn classify(config: &ConstraintConfig) -> ConfigClass {
    let n = config.intervals.len();
    let infinite = config.i_left() || config.i_right();
    match (n, infinite) {
        (0, _) => ConfigClass::Empty,
        (1, true) => ConfigClass::SingleInfinite,
        (_, false) => ConfigClass::ArbitraryFinite,
        (_, true) => ConfigClass::Arbitrary,
    }
}

/// Complement of the constraint union as maximal closed spans.
pub fn feasible_spans(config: &ConstraintConfig) -> Vec<Span> {
    let mut spans = Vec::with_capacity(config.intervals.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    for c in &config.intervals {
        if c.left != f64::NEG_INFINITY {
            spans.push(Span { lo, hi: c.left });
        }
        lo = c.right;
    }
    if lo != f64::INFINITY {
        spans.push(Span {
            lo,
            hi: f64::INFINITY,
        });
    }
    spans
}

/// Distances from a location to every constraint endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationView {
    pub mu: f64,
    /// `(dl, dr)` for each finite constraint left of `mu`, with `dl > dr`.
    pub left_finite: Vec<(f64, f64)>,
    /// `(dl, dr)` for each finite constraint right of `mu`, with `dr > dl`.
    pub right_finite: Vec<(f64, f64)>,
    /// Distance to the right endpoint of the constraint reaching `-inf`.
    pub dr_infinite: Option<f64>,
    /// Distance to the left endpoint of the constraint reaching `+inf`.
    pub dl_infinite: Option<f64>,
}

impl LocationView {
    /// View of an unconstrained location.
    pub fn unconstrained(mu: f64) -> Self {
        LocationView {
            mu,
            left_finite: Vec::new(),
            right_finite: Vec::new(),
            dr_infinite: None,
            dl_infinite: None,
        }
    }
}

pub fn location_view(config: &ConstraintConfig, mu: f64) -> Result<LocationView> {
    if !mu.is_finite() || !config.is_feasible(mu) {
        return Err(Error::InfeasibleLocation(mu));
    }
    let mut view = LocationView::unconstrained(mu);
    for c in &config.intervals {
        if c.left == f64::NEG_INFINITY {
            view.dr_infinite = Some(mu - c.right);
        } else if c.right == f64::INFINITY {
            view.dl_infinite = Some(c.left - mu);
        } else if c.right <= mu {
            view.left_finite.push((mu - c.left, mu - c.right));
        } else {
            view.right_finite.push((c.left - mu, c.right - mu));
        }
    }
    Ok(view)
}

/// Mirror image `x -> -x` of a configuration.
pub fn reflect(config: &ConstraintConfig) -> ConstraintConfig {
    let intervals = config
        .intervals
        .iter()
        .rev()
        .map(|c| Interval {
            left: -c.right,
            right: -c.left,
        })
        .collect();
    ConstraintConfig { intervals }
}
