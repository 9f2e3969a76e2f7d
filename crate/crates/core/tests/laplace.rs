mod common;

use common::*;
use proptest::prelude::*;
use range_laplace::laplace::{laplace_cdf, laplace_pdf, laplace_sf, LaplaceParams};

proptest! {
    #[test]
    fn pdf_integrates_to_cdf(mu in -50.0f64..50.0, sigma in 0.05f64..20.0, a in -5.0f64..5.0, w in 0.01f64..5.0) {
        let p = LaplaceParams::new(mu, sigma).unwrap();
        let (lo, hi) = (mu + a * sigma, mu + (a + w) * sigma);
        let f = |x: f64| laplace_pdf(x, p);
        let q = if lo < mu && mu < hi {
            simpson(&f, lo, mu, 1e-13) + simpson(&f, mu, hi, 1e-13)
        } else {
            simpson(&f, lo, hi, 1e-13)
        };
        let exact = laplace_cdf(hi, p) - laplace_cdf(lo, p);
        prop_assert!((q - exact).abs() < 1e-9, "q={q} exact={exact}");
    }

    #[test]
    fn total_mass_is_one(mu in -50.0f64..50.0, sigma in 0.05f64..20.0) {
        let p = LaplaceParams::new(mu, sigma).unwrap();
        let f = |x: f64| laplace_pdf(x, p);
        let reach = 60.0 * sigma;
        let q = simpson(&f, mu - reach, mu, 1e-12) + simpson(&f, mu, mu + reach, 1e-12);
        prop_assert!((q - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cdf_and_sf_complement(mu in -50.0f64..50.0, sigma in 0.05f64..20.0, t in -30.0f64..30.0) {
        let p = LaplaceParams::new(mu, sigma).unwrap();
        let x = mu + t * sigma;
        prop_assert!((laplace_cdf(x, p) + laplace_sf(x, p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cdf_is_monotone(mu in -5.0f64..5.0, sigma in 0.05f64..5.0, a in -40.0f64..40.0, b in -40.0f64..40.0) {
        let p = LaplaceParams::new(mu, sigma).unwrap();
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(laplace_cdf(a, p) <= laplace_cdf(b, p));
    }
}
