//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use range_laplace::uniform::feasible;
use range_laplace::{feasible_spans, ConstraintConfig, PrivacyParams, TruncatedLaplace};

pub const INF: f64 = f64::INFINITY;

pub fn params(eps: f64, df: f64) -> PrivacyParams {
    PrivacyParams::new(eps, df).unwrap()
}

pub fn config(pairs: &[(f64, f64)]) -> ConstraintConfig {
    ConstraintConfig::from_pairs(pairs).unwrap()
}

/// The six reference configurations, by name.
pub fn canonical_configs() -> Vec<(&'static str, ConstraintConfig)> {
    vec![
        ("empty", ConstraintConfig::empty()),
        ("left-infinite", config(&[(-INF, 0.0)])),
        ("right-infinite", config(&[(0.0, INF)])),
        ("one-finite", config(&[(0.0, 1.0)])),
        ("two-finite", config(&[(1.0, 2.0), (4.0, 6.0)])),
        ("mixed", config(&[(-INF, 0.0), (5.0, 7.5), (10.0, INF)])),
    ]
}

/// A few feasible locations per configuration, boundary points included.
pub fn sample_locations(c: &ConstraintConfig) -> Vec<f64> {
    let mut out = Vec::new();
    for s in feasible_spans(c) {
        let (lo, hi) = match (s.lo.is_finite(), s.hi.is_finite()) {
            (true, true) => (s.lo, s.hi),
            (true, false) => (s.lo, s.lo + 4.0),
            (false, true) => (s.hi - 4.0, s.hi),
            (false, false) => (-2.0, 2.0),
        };
        for t in [0.0, 0.3, 0.5, 1.0] {
            out.push(lo + t * (hi - lo));
        }
    }
    out
}

/// Adaptive Simpson quadrature on a finite interval.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Integral of the mechanism density over `[a, b]`, split at the location
/// and at every constraint endpoint so each piece is smooth.
pub fn integrate_pdf(m: &TruncatedLaplace, a: f64, b: f64) -> f64 {
    let mut cuts = vec![a, b, m.mu()];
    cuts.extend(m.config().finite_endpoints());
    cuts.retain(|&x| a <= x && x <= b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            if !m.config().is_feasible(0.5 * (lo + hi)) {
                return 0.0;
            }
            simpson(&|x| m.pdf(x), lo, hi, 1e-13)
        })
        .sum()
}

/// Integral of the density over its feasible support, with unbounded spans
/// cut 80 scales from the location.
pub fn total_mass(m: &TruncatedLaplace) -> f64 {
    let reach = 80.0 * m.sigma();
    integrate_pdf(m, m.mu() - reach, m.mu() + reach)
}

/// Smallest feasible scale found by scanning upward in steps of `step`,
/// capped at `2 dF/eps`.
pub fn linear_scan_sigma(c: &ConstraintConfig, p: PrivacyParams, step: f64) -> f64 {
    let upper = 2.0 * p.standard_scale();
    let mut k = 1u64;
    loop {
        let sigma = (k as f64 * step).min(upper);
        if feasible(c, p, sigma).unwrap().feasible || sigma >= upper {
            return sigma;
        }
        k += 1;
    }
}

/// Pearson statistic of `samples` over `bins` bins with edges at the
/// mechanism quantiles. Expected counts come from quadrature of the density,
/// not from the CDF; the two outer bins take the remaining mass.
pub fn chi_square(m: &TruncatedLaplace, samples: &[f64], bins: usize) -> f64 {
    let edges: Vec<f64> = (1..bins)
        .map(|k| m.quantile(k as f64 / bins as f64).unwrap())
        .collect();
    let mut probs = vec![0.0; bins];
    for k in 1..bins - 1 {
        probs[k] = integrate_pdf(m, edges[k - 1], edges[k]);
    }
    let inner: f64 = probs.iter().sum();
    let below = integrate_pdf(m, m.mu().min(edges[0]) - 80.0 * m.sigma(), edges[0]);
    probs[0] = below;
    probs[bins - 1] = 1.0 - inner - below;

    let mut counts = vec![0usize; bins];
    for &x in samples {
        counts[edges.partition_point(|&e| e < x)] += 1;
    }
    let n = samples.len() as f64;
    counts
        .iter()
        .zip(&probs)
        .map(|(&c, &p)| (c as f64 - n * p).powi(2) / (n * p))
        .sum()
}
