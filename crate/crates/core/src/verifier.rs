//! Brute-force check of the density-ratio guarantee.
//!
//! For two true responses `f1 >= f2` separated by `i = (f1 - f2)/dF`
//! sensitivities, both mechanisms must satisfy `p1(x) <= e^{i eps} p2(x)` and
//! `p2(x) <= e^{i eps} p1(x)` at every output `x`. The verifier builds both
//! mechanisms from a scale schedule and evaluates the two ratios on a grid of
//! locations and outputs. It is a falsifier at grid resolution, not a proof.

use crate::constraints::{feasible_spans, ConstraintConfig, PrivacyParams, Span};
use crate::error::{Error, Result};
use crate::mechanism::TruncatedLaplace;
use crate::plan::{FixedScale, ScaleSchedule};

/// Relative slack on the bound that absorbs rounding.
pub const RATIO_SLACK: f64 = 1e-9;

/// Default reach of the output grid past the outermost location or endpoint,
/// in units of the larger scale of the pair.
pub const DEFAULT_TAIL_SIGMAS: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuaranteeEvaluation {
    pub f1: f64,
    pub f2: f64,
    pub i: f64,
    pub x: f64,
    /// `p1(x) / p2(x)`.
    pub ratio_forward: f64,
    /// `p2(x) / p1(x)`.
    pub ratio_backward: f64,
    /// `e^{i eps}`.
    pub bound: f64,
    pub pass: bool,
}

impl GuaranteeEvaluation {
    /// Larger of the two ratios divided by the bound.
    pub fn worst_ratio_over_bound(&self) -> f64 {
        self.ratio_forward.max(self.ratio_backward) / self.bound
    }
}

fn evaluate_built(
    m1: &TruncatedLaplace,
    m2: &TruncatedLaplace,
    params: PrivacyParams,
    x: f64,
) -> GuaranteeEvaluation {
    let (f1, f2) = (m1.mu(), m2.mu());
    let i = (f1 - f2) / params.delta_f();
    let bound = (i * params.epsilon()).exp();
    let p1 = m1.pdf(x);
    let p2 = m2.pdf(x);
    let (ratio_forward, ratio_backward) = if p1 == 0.0 && p2 == 0.0 {
        // Output inside a constraint: neither mechanism can produce it.
        (1.0, 1.0)
    } else {
        (p1 / p2, p2 / p1)
    };
    let limit = 1.0 + RATIO_SLACK;
    let pass = ratio_forward / bound <= limit && ratio_backward / bound <= limit;
    GuaranteeEvaluation {
        f1,
        f2,
        i,
        x,
        ratio_forward,
        ratio_backward,
        bound,
        pass,
    }
}

/// Evaluates both ratios for one pair of true responses at output `x`.
/// The larger response is taken as `f1`.
pub fn evaluate_pair<S: ScaleSchedule + ?Sized>(
    config: &ConstraintConfig,
    params: PrivacyParams,
    schedule: &S,
    f1: f64,
    f2: f64,
    x: f64,
) -> Result<GuaranteeEvaluation> {
    let (f1, f2) = if f1 >= f2 { (f1, f2) } else { (f2, f1) };
    let m1 = TruncatedLaplace::from_schedule(config, schedule, f1)?;
    let m2 = TruncatedLaplace::from_schedule(config, schedule, f2)?;
    Ok(evaluate_built(&m1, &m2, params, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub total_checks: usize,
    pub failures: Vec<GuaranteeEvaluation>,
    pub max_ratio_over_bound: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The failure with the largest ratio over bound.
    pub fn worst_failure(&self) -> Option<&GuaranteeEvaluation> {
        self.failures.iter().max_by(|a, b| {
            a.worst_ratio_over_bound()
                .total_cmp(&b.worst_ratio_over_bound())
        })
    }
}

/// Grid density and reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub n_locations: usize,
    pub n_outputs: usize,
    /// Largest pair separation, in sensitivities.
    pub max_i: f64,
    /// Output-grid reach past the pair and the constraint endpoints, in
    /// units of the larger scale of the pair.
    pub tail_sigmas: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            n_locations: 50,
            n_outputs: 200,
            max_i: 10.0,
            tail_sigmas: DEFAULT_TAIL_SIGMAS,
        }
    }
}

pub fn verify_grid<S: ScaleSchedule + ?Sized>(
    config: &ConstraintConfig,
    params: PrivacyParams,
    schedule: &S,
    n_locations: usize,
    n_outputs: usize,
    max_i: f64,
) -> Result<VerificationReport> {
    let options = GridOptions {
        n_locations,
        n_outputs,
        max_i,
        ..GridOptions::default()
    };
    verify_grid_with(config, params, schedule, &options)
}

pub fn verify_grid_with<S: ScaleSchedule + ?Sized>(
    config: &ConstraintConfig,
    params: PrivacyParams,
    schedule: &S,
    options: &GridOptions,
) -> Result<VerificationReport> {
    if options.n_locations < 2 || options.n_outputs < 2 {
        return Err(Error::InvalidArgument(
            "need at least two locations and two outputs".into(),
        ));
    }
    if !(options.max_i.is_finite() && options.max_i > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "max_i must be positive, got {}",
            options.max_i
        )));
    }
    if !(options.tail_sigmas.is_finite() && options.tail_sigmas >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tail_sigmas must be non-negative, got {}",
            options.tail_sigmas
        )));
    }

    let reach = options.max_i * params.delta_f();
    let mechanisms = location_grid(config, reach, options.n_locations)
        .into_iter()
        .map(|f| TruncatedLaplace::from_schedule(config, schedule, f))
        .collect::<Result<Vec<_>>>()?;

    let endpoints = config.finite_endpoints();
    let spans = feasible_spans(config);
    let mut report = VerificationReport {
        total_checks: 0,
        failures: Vec::new(),
        max_ratio_over_bound: 0.0,
    };
    let max_separation = reach * (1.0 + 1e-12);
    for (a, m2) in mechanisms.iter().enumerate() {
        for m1 in &mechanisms[a + 1..] {
            if m1.mu() - m2.mu() > max_separation {
                break;
            }
            let tail = options.tail_sigmas * m1.sigma().max(m2.sigma());
            let lo = endpoints.first().map_or(m2.mu(), |e| e.min(m2.mu())) - tail;
            let hi = endpoints.last().map_or(m1.mu(), |e| e.max(m1.mu())) + tail;
            let mut outputs = spread(&clip(&spans, lo, hi), options.n_outputs);
            outputs.extend([m1.mu(), m2.mu()]);
            outputs.extend(endpoints.iter().copied());
            for x in outputs {
                let eval = evaluate_built(m1, m2, params, x);
                report.total_checks += 1;
                report.max_ratio_over_bound = report
                    .max_ratio_over_bound
                    .max(eval.worst_ratio_over_bound());
                if !eval.pass {
                    report.failures.push(eval);
                }
            }
        }
    }
    Ok(report)
}

/// Feasible spans intersected with `[lo, hi]`.
fn clip(spans: &[Span], lo: f64, hi: f64) -> Vec<Span> {
    spans
        .iter()
        .filter_map(|s| {
            let span = Span {
                lo: s.lo.max(lo),
                hi: s.hi.min(hi),
            };
            (span.lo <= span.hi).then_some(span)
        })
        .collect()
}

/// About `n` points spread over the pieces in proportion to their length,
/// always including both ends of every piece.
fn spread(pieces: &[Span], n: usize) -> Vec<f64> {
    let total: f64 = pieces.iter().map(Span::length).sum();
    let mut points = Vec::with_capacity(n + 2 * pieces.len());
    for piece in pieces {
        let share = if total > 0.0 {
            (n as f64 * piece.length() / total).ceil() as usize
        } else {
            1
        };
        let k = share.max(2);
        if piece.length() == 0.0 {
            points.push(piece.lo);
            continue;
        }
        points.extend((0..k).map(|j| piece.lo + piece.length() * j as f64 / (k - 1) as f64));
    }
    points
}

/// Sorted feasible locations covering every span, with unbounded spans cut
/// `reach` past their finite end.
fn location_grid(config: &ConstraintConfig, reach: f64, n: usize) -> Vec<f64> {
    let windows: Vec<Span> = feasible_spans(config)
        .into_iter()
        .map(|s| match (s.lo.is_finite(), s.hi.is_finite()) {
            (true, true) => s,
            (true, false) => Span {
                lo: s.lo,
                hi: s.lo + reach,
            },
            (false, true) => Span {
                lo: s.hi - reach,
                hi: s.hi,
            },
            (false, false) => Span { lo: 0.0, hi: reach },
        })
        .collect();
    let mut points = spread(&windows, n);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// The fixed standard scale applied to a boundary location of a
/// left-infinite constraint and a second location `i` sensitivities away,
/// evaluated at the boundary.
pub fn naive_violation_at(params: PrivacyParams, i: f64) -> Result<GuaranteeEvaluation> {
    if !(i.is_finite() && i > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "i must be positive, got {i}"
        )));
    }
    let config = ConstraintConfig::from_pairs(&[(f64::NEG_INFINITY, 0.0)])?;
    let naive = FixedScale(params.standard_scale());
    evaluate_pair(&config, params, &naive, i * params.delta_f(), 0.0, 0.0)
}

/// [`naive_violation_at`] with `i = 1`.
pub fn naive_violation_demo(params: PrivacyParams) -> Result<GuaranteeEvaluation> {
    naive_violation_at(params, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_infinite::SingleInfinitePlan;
    use std::f64::consts::E;

    fn params(eps: f64, df: f64) -> PrivacyParams {
        PrivacyParams::new(eps, df).unwrap()
    }

    #[test]
    fn identical_locations_give_unit_ratio() {
        let c = ConstraintConfig::from_pairs(&[(1.0, 2.0)]).unwrap();
        let e = evaluate_pair(&c, params(1.0, 1.0), &FixedScale(1.3), 3.0, 3.0, 0.4).unwrap();
        assert_eq!(
            (e.ratio_forward, e.ratio_backward, e.bound),
            (1.0, 1.0, 1.0)
        );
        assert!(e.pass);
    }

    #[test]
    fn vacuous_inside_constraint() {
        let c = ConstraintConfig::from_pairs(&[(1.0, 2.0)]).unwrap();
        let e = evaluate_pair(&c, params(1.0, 1.0), &FixedScale(0.1), 3.0, 0.0, 1.5).unwrap();
        assert!(e.pass);
    }

    #[test]
    fn standard_laplace_is_private() {
        let p = params(0.8, 2.0);
        let c = ConstraintConfig::empty();
        for &(f1, f2, x) in &[(1.0, 0.0, -5.0), (3.0, -1.0, 1.0), (0.5, 0.2, 9.0)] {
            let e = evaluate_pair(&c, p, &FixedScale(p.standard_scale()), f1, f2, x).unwrap();
            assert!(e.pass, "{e:?}");
        }
    }

    #[test]
    fn boundary_pair_is_tight_for_single_infinite_plan() {
        let p = params(1.0, 1.0);
        let c = ConstraintConfig::from_pairs(&[(f64::NEG_INFINITY, 0.0)]).unwrap();
        let plan = SingleInfinitePlan::new(&c, p).unwrap();
        let e = evaluate_pair(&c, p, &plan, 1.0, 0.0, 0.0).unwrap();
        assert!((e.ratio_backward - E).abs() <= 1e-6 * E, "{e:?}");
        assert!(e.pass);
    }

    #[test]
    fn naive_demo_values() {
        let e = naive_violation_demo(params(1.0, 1.0)).unwrap();
        assert!(!e.pass);
        assert!((e.worst_ratio_over_bound() - (2.0 * E - 1.0) / E).abs() < 1e-9);
        assert!((e.worst_ratio_over_bound() - 1.63212).abs() < 1e-5);

        let e = naive_violation_demo(params(0.1, 1.0)).unwrap();
        let a = 0.1f64.exp();
        assert!((e.worst_ratio_over_bound() - (2.0 * a - 1.0) / a).abs() < 1e-9);
        assert!((e.worst_ratio_over_bound() - 1.09516).abs() < 1e-5);
        assert!(!e.pass);

        let e = naive_violation_demo(params(1e-6, 1.0)).unwrap();
        assert!(e.worst_ratio_over_bound() > 1.0);
        assert!(e.worst_ratio_over_bound() < 1.0 + 2e-6);
    }

    #[test]
    fn naive_fails_across_budgets_and_distances() {
        for eps in [0.1, 0.5, 1.0, 2.0] {
            for i in [0.5, 1.0, 2.0] {
                let e = naive_violation_at(params(eps, 1.0), i).unwrap();
                let a = (i * eps).exp();
                assert!(!e.pass);
                assert!((e.ratio_backward - (2.0 * a - 1.0)).abs() < 1e-9 * a);
            }
        }
    }

    #[test]
    fn grid_rejects_tiny_grids() {
        let c = ConstraintConfig::empty();
        assert!(verify_grid(&c, params(1.0, 1.0), &FixedScale(1.0), 1, 10, 1.0).is_err());
        assert!(verify_grid(&c, params(1.0, 1.0), &FixedScale(1.0), 10, 1, 1.0).is_err());
    }

    #[test]
    fn location_grid_covers_spans_and_endpoints() {
        let c = ConstraintConfig::from_pairs(&[(1.0, 2.0), (4.0, 6.0)]).unwrap();
        let g = location_grid(&c, 10.0, 50);
        assert!(g.len() >= 50);
        for e in [1.0, 2.0, 4.0, 6.0, -9.0, 16.0] {
            assert!(g.contains(&e), "missing {e}");
        }
        assert!(g.iter().all(|&x| c.is_feasible(x)));
    }
}
