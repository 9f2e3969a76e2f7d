//! Real-valued Lambert W function on its two real branches.
//!
//! `W` inverts `w -> w e^w`. On `[-1/e, inf)` the principal branch returns
//! `w >= -1`; on `[-1/e, 0)` the lower branch returns `w <= -1`. Both branches
//! meet at `W(-1/e) = -1`.
//!
//! Evaluation is Halley iteration from a branch-specific starting point:
//! a series in `p = sqrt(2(e x + 1))` near the branch point, logarithmic
//! asymptotics for the lower branch near `0-` and for the principal branch at
//! large `x`.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// `-1/e`, the common branch point.
pub const BRANCH_POINT: f64 = -1.0 / E;

/// Inputs this far below `-1/e` are treated as `-1/e`.
pub const BRANCH_CLAMP: f64 = 1e-12;

const MAX_ITERATIONS: usize = 100;
const STEP_TOLERANCE: f64 = 1e-15;

/// Real branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchIndex {
    /// `W_0`, values in `[-1, inf)`.
    Principal,
    /// `W_{-1}`, values in `(-inf, -1]`.
    MinusOne,
}

/// Evaluates `W_branch(x)`.
pub fn lambert_w(branch: BranchIndex, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("input is NaN".into()));
    }
    if x < BRANCH_POINT - BRANCH_CLAMP {
        return Err(Error::Domain(format!("{x} is below -1/e")));
    }
    if branch == BranchIndex::MinusOne && x >= 0.0 {
        return Err(Error::Domain(format!(
            "lower branch requires a negative input, got {x}"
        )));
    }
    let x = x.max(BRANCH_POINT);
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    // Distance from the branch point, as the series variable.
    let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    let near_branch = p < 0.6;

    let start = match branch {
        BranchIndex::Principal if near_branch => branch_series(p),
        BranchIndex::MinusOne if near_branch => branch_series(-p),
        BranchIndex::Principal if x < 3.0 => x.ln_1p(),
        BranchIndex::Principal | BranchIndex::MinusOne => log_asymptotic(x),
    };
    // The series is already exact to double precision very close to -1/e,
    // where Halley steps are dominated by rounding in `w e^w - x`.
    if near_branch && p < 1e-3 {
        return Ok(start);
    }
    halley(x, start)
}

/// Series of `W` about the branch point in `p = ±sqrt(2(ex+1))`.
fn branch_series(p: f64) -> f64 {
    const C: [f64; 7] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
    ];
    C.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

/// `L1 - L2 + L2/L1` with `L1 = ln|x|`, `L2 = ln|L1|`.
fn log_asymptotic(x: f64) -> f64 {
    let l1 = x.abs().ln();
    let l2 = l1.abs().ln();
    l1 - l2 + l2 / l1
}

fn halley(x: f64, mut w: f64) -> Result<f64> {
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            return Err(Error::Convergence(format!(
                "non-finite Halley step at w = {w} for x = {x}"
            )));
        }
        // Near the branch point rounding in `w e^w - x` bounds the attainable
        // step size; once steps stop shrinking the iterate is at that floor.
        if step.abs() >= previous {
            return Ok(w);
        }
        w -= step;
        // Absolute tolerance, floored at a few ulps of w for large |w|.
        if step.abs() <= STEP_TOLERANCE.max(4.0 * f64::EPSILON * w.abs()) {
            return Ok(w);
        }
        previous = step.abs();
    }
    Err(Error::Convergence(format!(
        "lambert_w did not converge for x = {x} within {MAX_ITERATIONS} iterations"
    )))
}
