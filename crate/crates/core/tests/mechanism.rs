mod common;

use common::*;
use proptest::prelude::*;
use range_laplace::{feasible_spans, ConstraintConfig, SigmaPlan, TruncatedLaplace};

/// Up to three disjoint constraints, optionally with infinite ends, plus a
/// feasible location.
fn arb_setup() -> impl Strategy<Value = (ConstraintConfig, f64)> {
    (
        any::<bool>(),
        any::<bool>(),
        prop::collection::vec((0.1f64..3.0, 0.1f64..3.0), 0..3),
        0.0f64..1.0,
    )
        .prop_map(|(left_inf, right_inf, gaps, t)| {
            let mut pairs = Vec::new();
            let mut x = 0.0;
            if left_inf {
                pairs.push((-INF, x));
            }
            for (gap, width) in gaps {
                x += gap;
                pairs.push((x, x + width));
                x += width;
            }
            x += 1.0;
            if right_inf && !(left_inf && pairs.len() == 1) {
                pairs.push((x, INF));
            }
            let c = config(&pairs);
            let spans = feasible_spans(&c);
            let s = spans[(t * spans.len() as f64) as usize % spans.len()];
            let lo = if s.lo.is_finite() {
                s.lo
            } else {
                s.hi.min(0.0) - 5.0
            };
            let hi = if s.hi.is_finite() {
                s.hi
            } else {
                lo.max(0.0) + 5.0
            };
            (c, lo + t * (hi - lo))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_integrates_to_one((c, mu) in arb_setup(), sigma in 0.2f64..4.0) {
        let m = TruncatedLaplace::with_sigma(&c, mu, sigma).unwrap();
        prop_assert!((total_mass(&m) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cdf_inverts_quantile((c, mu) in arb_setup(), sigma in 0.2f64..4.0) {
        let m = TruncatedLaplace::with_sigma(&c, mu, sigma).unwrap();
        for k in 1..1000 {
            let q = k as f64 / 1000.0;
            let x = m.quantile(q).unwrap();
            prop_assert!(c.is_feasible(x));
            prop_assert!((m.cdf(x) - q).abs() < 1e-9, "q={q} x={x} cdf={}", m.cdf(x));
        }
    }

    #[test]
    fn samples_stay_in_range((c, mu) in arb_setup(), sigma in 0.2f64..4.0, seed in any::<u64>()) {
        let m = TruncatedLaplace::with_sigma(&c, mu, sigma).unwrap();
        for x in m.sample_seeded(seed, 2000) {
            prop_assert!(x.is_finite() && c.is_feasible(x));
        }
    }

    #[test]
    fn density_decreases_away_from_location((c, mu) in arb_setup(), sigma in 0.2f64..4.0, a in 0.0f64..5.0, b in 0.0f64..5.0) {
        let m = TruncatedLaplace::with_sigma(&c, mu, sigma).unwrap();
        let (near, far) = if a <= b { (a, b) } else { (b, a) };
        for dir in [-1.0, 1.0] {
            let (xn, xf) = (mu + dir * near, mu + dir * far);
            if c.is_feasible(xn) && c.is_feasible(xf) {
                prop_assert!(m.pdf(xn) >= m.pdf(xf));
            }
        }
    }

    #[test]
    fn cdf_is_monotone((c, mu) in arb_setup(), sigma in 0.2f64..4.0, a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let m = TruncatedLaplace::with_sigma(&c, mu, sigma).unwrap();
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(m.cdf(a) <= m.cdf(b));
    }
}

#[test]
fn samples_are_deterministic_per_seed() {
    let c = config(&[(1.0, 2.0), (4.0, 6.0)]);
    let m = TruncatedLaplace::build(&c, params(1.0, 1.0), 3.0).unwrap();
    assert_eq!(m.sample_seeded(7, 100), m.sample_seeded(7, 100));
    assert_ne!(m.sample_seeded(7, 100), m.sample_seeded(8, 100));
}

#[test]
fn unconstrained_sample_mean_near_location() {
    let p = params(1.0, 1.0);
    let m = TruncatedLaplace::build(&ConstraintConfig::empty(), p, 3.5).unwrap();
    let n = 100_000;
    let mean = m.sample_seeded(99, n).iter().sum::<f64>() / n as f64;
    // Laplace standard deviation is sqrt(2) sigma.
    let se = 2f64.sqrt() * m.sigma() / (n as f64).sqrt();
    assert!((mean - 3.5).abs() < 5.0 * se, "mean {mean}");
}

#[test]
fn chi_square_on_canonical_configs() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let critical = ChiSquared::new(49.0).unwrap().inverse_cdf(0.999);
    let p = params(1.0, 1.0);
    for (seed, (name, c)) in (1000..).zip(canonical_configs()) {
        let plan = SigmaPlan::compute(&c, p, 6).unwrap();
        for mu in sample_locations(&c) {
            let m = TruncatedLaplace::from_schedule(&c, &plan, mu).unwrap();
            let samples = m.sample_seeded(seed, 20_000);
            let stat = chi_square(&m, &samples, 50);
            assert!(stat < critical, "{name} mu={mu} chi2={stat}");
        }
    }
}
