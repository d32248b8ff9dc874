use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use viralcm::population::{conditional_transmitter_pmf, DegreeLaw, JointDegreeLaw, TransmissionModel};
use viralcm::special::{stirling2, zeta};

fn joint(degree: DegreeLaw, model: TransmissionModel) -> JointDegreeLaw {
    JointDegreeLaw::new(degree, model).unwrap()
}

/// Distinct values among all `d^K` sequences, counted by brute force.
fn enumerate_occupancy(d: usize, k: u32) -> Vec<u64> {
    let mut counts = vec![0u64; d + 1];
    let total = (d as u64).pow(k);
    for mut code in 0..total {
        let mut hit = 0u32;
        for _ in 0..k {
            hit |= 1 << (code % d as u64);
            code /= d as u64;
        }
        counts[hit.count_ones() as usize] += 1;
    }
    counts
}

#[test]
fn coupon_pmf_matches_enumeration_exactly() {
    for d in 1..=6usize {
        for k in 0..=8u32 {
            let counts = enumerate_occupancy(d, k);
            let total = BigInt::from(d).pow(k);
            let pmf = conditional_transmitter_pmf(&TransmissionModel::CouponCollector { k }, d as u64).unwrap();
            for (j, &c) in counts.iter().enumerate() {
                let enumerated = BigRational::new(BigInt::from(c), total.clone());
                let falling: BigInt = (0..j).map(|i| BigInt::from(d - i)).product();
                let formula = BigRational::new(falling * BigInt::from(stirling2(k as usize, j)), total.clone());
                assert_eq!(enumerated, formula, "d={d} K={k} j={j}");
                let want = c as f64 / (d as f64).powi(k as i32);
                assert!((pmf.prob(j) - want).abs() < 1e-15, "d={d} K={k} j={j}");
            }
        }
    }
}

#[test]
fn coupon_with_isolated_user_transmits_nothing() {
    let pmf = conditional_transmitter_pmf(&TransmissionModel::CouponCollector { k: 4 }, 0).unwrap();
    assert_eq!(pmf.weights(), &[1.0]);
}

#[test]
fn poisson_bernoulli_sample_mean() {
    let s = joint(DegreeLaw::poisson(2.0).unwrap(), TransmissionModel::Bernoulli { p: 0.8 }).sample(100_000, 42).unwrap();
    let mean = s.iter().map(|p| p.degree as f64).sum::<f64>() / s.len() as f64;
    // 3 sigma of the mean is 3 * sqrt(2 / 1e5) ~ 0.013
    assert!((mean - 2.0).abs() < 0.05, "{mean}");
    assert!(s.iter().all(|p| p.transmitter <= p.degree));
}

#[test]
fn power_law_sample_mean() {
    let s = joint(DegreeLaw::power_law(2.45).unwrap(), TransmissionModel::Bernoulli { p: 0.5 }).sample(100_000, 7).unwrap();
    let mean = s.iter().map(|p| p.degree as f64).sum::<f64>() / s.len() as f64;
    let want = zeta(1.45).unwrap() / zeta(2.45).unwrap();
    assert!((mean / want - 1.0).abs() < 0.10, "{mean} vs {want}");
    assert!(s.iter().all(|p| p.transmitter <= p.degree));
}

fn chi_square_by_degree(model: TransmissionModel, seed: u64) {
    let s = joint(DegreeLaw::poisson(3.0).unwrap(), model).sample(100_000, seed).unwrap();
    for d in 1..=6u32 {
        let pmf = conditional_transmitter_pmf(&model, d as u64).unwrap();
        let mut counts = vec![0f64; d as usize + 1];
        for p in s.iter().filter(|p| p.degree == d) {
            counts[p.transmitter as usize] += 1.0;
        }
        let total: f64 = counts.iter().sum();
        let cells: Vec<(f64, f64)> = counts
            .iter()
            .enumerate()
            .filter(|(k, _)| pmf.prob(*k) > 0.0)
            .map(|(k, &c)| (c, total * pmf.prob(k)))
            .collect();
        if cells.len() < 2 {
            continue;
        }
        let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
        let q99 = ChiSquared::new((cells.len() - 1) as f64).unwrap().inverse_cdf(0.99);
        assert!(stat < q99, "{model:?} d={d}: chi2 {stat} >= {q99}");
    }
}

#[test]
fn conditional_frequencies_fit_bernoulli() {
    chi_square_by_degree(TransmissionModel::Bernoulli { p: 0.4 }, 1);
}

#[test]
fn conditional_frequencies_fit_node_percolation() {
    chi_square_by_degree(TransmissionModel::NodePercolation { p: 0.3 }, 2);
}

#[test]
fn conditional_frequencies_fit_coupon_collector() {
    chi_square_by_degree(TransmissionModel::CouponCollector { k: 3 }, 3);
}

#[test]
fn moments_match_summation() {
    let (lambda, p) = (2.0, 0.8);
    let law = joint(DegreeLaw::poisson(lambda).unwrap(), TransmissionModel::Bernoulli { p });
    let m = law.moments();
    assert!((m.mean_transmitter_degree - p * (lambda * lambda + lambda)).abs() < 1e-8);
    assert!((m.mean_transmitter - p * lambda).abs() < 1e-8);
    assert!((m.mean_receiver - (1.0 - p) * lambda).abs() < 1e-8);
}

fn model_strategy() -> impl Strategy<Value = TransmissionModel> {
    prop_oneof![
        (0.0..=1.0f64).prop_map(|p| TransmissionModel::Bernoulli { p }),
        (0.0..=1.0f64).prop_map(|p| TransmissionModel::NodePercolation { p }),
        (0u32..12).prop_map(|k| TransmissionModel::CouponCollector { k }),
    ]
}

proptest! {
    #[test]
    fn conditional_pmf_normalized(model in model_strategy(), d in 0u64..=50) {
        let pmf = conditional_transmitter_pmf(&model, d).unwrap();
        let total: f64 = pmf.weights().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(pmf.max_value() as u64 <= d);
    }

    #[test]
    fn bernoulli_conditional_mean(p in 0.0..=1.0f64, d in 0u64..=50) {
        let pmf = conditional_transmitter_pmf(&TransmissionModel::Bernoulli { p }, d).unwrap();
        prop_assert!((pmf.mean() - p * d as f64).abs() < 1e-12);
    }

    #[test]
    fn sampled_pairs_respect_support(model in model_strategy(), lambda in 0.1..8.0f64, seed in any::<u64>()) {
        let s = joint(DegreeLaw::poisson(lambda).unwrap(), model).sample(500, seed).unwrap();
        prop_assert!(s.iter().all(|p| p.transmitter <= p.degree));
        let again = joint(DegreeLaw::poisson(lambda).unwrap(), model).sample(500, seed).unwrap();
        prop_assert_eq!(s, again);
    }
}
