//! Scalar special functions: Riemann and Hurwitz zeta, the polylogarithm on
//! `[0, 1]`, Stirling numbers, and generating functions of discrete pmfs.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Neumaier's variant of compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.carry += (self.sum - t) + term;
        } else {
            self.carry += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

// B_2, B_4, ..., B_30
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}` by Euler–Maclaurin summation.
///
/// Valid for every real `s ≠ 1` with `s > -20` and `a > 0`; this is the
/// analytic continuation for `s < 1`.
fn hurwitz_em(s: f64, a: f64) -> f64 {
    let shift_to = 12.0_f64.max(s.abs() + 10.0);
    let mut head = CompensatedSum::default();
    let mut w = a;
    while w < shift_to {
        head.add(w.powf(-s));
        w += 1.0;
    }
    let mut tail = CompensatedSum::default();
    tail.add(w.powf(1.0 - s) / (s - 1.0));
    tail.add(0.5 * w.powf(-s));
    // rising factorial s (s+1) ... (s+2j-2) / (2j)! times w^{-s-2j+1}
    let mut factor = s / 2.0 * w.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b * factor;
        tail.add(term);
        if term.abs() < 1e-18 * tail.value().abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        factor *= (s + m - 1.0) * (s + m) / ((m + 1.0) * (m + 2.0)) / (w * w);
    }
    head.value() + tail.value()
}

/// Hurwitz zeta `ζ(s, a)` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !(a > 0.0) {
        return Err(domain(format!("hurwitz_zeta needs s > 1 and a > 0, got s={s}, a={a}")));
    }
    Ok(hurwitz_em(s, a))
}

/// Riemann zeta `ζ(s)` for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(domain(format!("zeta needs s > 1, got {s}")));
    }
    Ok(hurwitz_em(s, 1.0))
}

/// Riemann zeta continued to all real `s ≠ 1`.
fn zeta_continued(s: f64) -> f64 {
    if s >= 0.0 {
        hurwitz_em(s, 1.0)
    } else if s == s.round() && (s as i64) % 2 == 0 {
        0.0
    } else {
        // functional equation
        let t = 1.0 - s;
        2f64.powf(s) * PI.powf(s - 1.0) * (PI * s / 2.0).sin() * statrs::function::gamma::gamma(t) * hurwitz_em(t, 1.0)
    }
}

/// Direct series `Σ_{k≥1} k^{-s} x^k` with a certified tail.
fn polylog_series(s: f64, x: f64) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut xk = 1.0;
    let mut k = 1u64;
    loop {
        xk *= x;
        let term = xk * (k as f64).powf(-s);
        acc.add(term);
        let kf = k as f64;
        let ratio = x * ((kf + 1.0) / kf).powf(-s);
        let geometric = if ratio < 1.0 { term * ratio / (1.0 - ratio) } else { f64::INFINITY };
        let integral = if s > 1.0 { kf.powf(1.0 - s) / (s - 1.0) } else { f64::INFINITY };
        let bound = geometric.min(integral);
        if bound < 1e-17 * acc.value().abs().max(1e-300) || bound < 1e-300 {
            break;
        }
        k += 1;
    }
    acc.value()
}

/// Expansion around `x = 1` in `μ = ln x`, convergent for `|μ| < 2π`.
fn polylog_near_one(s: f64, x: f64) -> f64 {
    let mu = (x - 1.0).ln_1p();
    let n = s.round();
    let integer = (s - n).abs() < 1e-12 && n >= 1.0;
    let mut acc = CompensatedSum::default();
    if integer {
        let n = n as u32;
        let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
        let fact: f64 = (1..n).map(|j| j as f64).product();
        acc.add(mu.powi(n as i32 - 1) / fact * (harmonic - (-mu).ln()));
    } else {
        acc.add(statrs::function::gamma::gamma(1.0 - s) * (-mu).powf(s - 1.0));
    }
    let mut mu_k_over_fact = 1.0;
    for k in 0..80u32 {
        if k > 0 {
            mu_k_over_fact *= mu / k as f64;
        }
        let arg = s - k as f64;
        if integer && k + 1 == n as u32 {
            continue;
        }
        acc.add(zeta_continued(arg) * mu_k_over_fact);
        // |ζ(s-k)| μ^k / k! decays like (|μ| / 2π)^k
        if (mu.abs() / (2.0 * PI)).powi(k as i32) < 1e-20 {
            break;
        }
    }
    acc.value()
}

/// Polylogarithm `Li_s(x) = Σ_{k≥1} k^{-s} x^k` for `x ∈ [0, 1]`.
///
/// `Li_s(1) = ζ(s)` and requires `s > 1`. Orders within `1e-12` of a
/// positive integer are evaluated with the integer-order expansion.
pub fn polylog(s: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("polylog argument must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return zeta(s);
    }
    if x <= 0.5 || s >= 8.0 {
        Ok(polylog_series(s, x))
    } else {
        Ok(polylog_near_one(s, x))
    }
}

/// `Li_s(x) / x`, continuous at `x = 0` where it equals 1.
pub(crate) fn polylog_over_x(s: f64, x: f64) -> Result<f64> {
    if x < 1e-3 && (0.0..=1.0).contains(&x) {
        let mut acc = CompensatedSum::default();
        let mut xk = 1.0;
        for k in 1..40u32 {
            acc.add(xk * (k as f64).powf(-s));
            xk *= x;
            if xk < 1e-300 {
                break;
            }
        }
        return Ok(acc.value());
    }
    Ok(polylog(s, x)? / x)
}

/// Row `{K over k}` for `k = 0..=K` of the Stirling numbers of the second kind.
pub fn stirling2_row(big_k: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for n in 1..=big_k {
        let mut next = vec![BigUint::zero(); n + 1];
        for k in 1..=n {
            let mut v = if k <= n - 1 { &row[k] * BigUint::from(k) } else { BigUint::zero() };
            v += &row[k - 1];
            next[k] = v;
        }
        row = next;
    }
    row
}

/// Stirling number of the second kind `{K over k}`, exact.
pub fn stirling2(big_k: usize, k: usize) -> BigUint {
    if k > big_k {
        return BigUint::zero();
    }
    stirling2_row(big_k).swap_remove(k)
}

/// Signed Stirling numbers of the first kind `s(k, j)`, `j = 0..=k`, so that
/// the falling factorial `(d)_k = Σ_j s(k, j) d^j`.
pub fn stirling1_signed_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=k {
        let mut next = vec![BigInt::zero(); n + 1];
        for j in 1..=n {
            let mut v = row[j - 1].clone();
            if j <= n - 1 {
                v -= &row[j] * BigInt::from(n - 1);
            }
            next[j] = v;
        }
        row = next;
    }
    row
}

/// `num / den` in floating point without overflowing either operand.
pub(crate) fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let bits = num.bits().max(den.bits());
    let shift = bits.saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

pub(crate) fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// A probability mass function on `{0, 1, ..., len - 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePmf {
    weights: Vec<f64>,
}

impl DiscretePmf {
    /// Weights must be non-negative and already sum to one within `1e-9`.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPmf("empty support".into()));
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPmf(format!("weight {w} at {k}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPmf(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Normalizes non-negative masses.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        let mut acc = CompensatedSum::default();
        for m in &masses {
            if !(*m >= 0.0) || !m.is_finite() {
                return Err(Error::InvalidPmf(format!("mass {m}")));
            }
            acc.add(*m);
        }
        let total = acc.value();
        if !(total > 0.0) {
            return Err(Error::InvalidPmf("zero total mass".into()));
        }
        Self::new(masses.into_iter().map(|m| m / total).collect())
    }

    pub fn point_mass(k: usize) -> Self {
        let mut weights = vec![0.0; k + 1];
        weights[k] = 1.0;
        Self { weights }
    }

    /// Empirical law of a list of integers.
    pub fn from_counts<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        let mut counts: Vec<f64> = Vec::new();
        for v in values {
            let v = v as usize;
            if v >= counts.len() {
                counts.resize(v + 1, 0.0);
            }
            counts[v] += 1.0;
        }
        if counts.is_empty() {
            return Err(Error::EmptySample);
        }
        Self::from_masses(counts)
    }

    /// Largest value in the support.
    pub fn max_value(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().copied().enumerate()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|k| k as f64)
    }

    pub fn second_moment(&self) -> f64 {
        self.expect(|k| (k * k) as f64)
    }

    /// `E[f(K)]` with compensated summation.
    pub fn expect(&self, f: impl Fn(usize) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (k, w) in self.iter() {
            if w > 0.0 {
                acc.add(w * f(k));
            }
        }
        acc.value()
    }

    /// Inverse-CDF draw from a uniform `u ∈ [0, 1)`.
    pub fn quantile(&self, cdf: &[f64], u: f64) -> usize {
        let idx = cdf.partition_point(|c| *c <= u);
        idx.min(self.max_value())
    }

    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = CompensatedSum::default();
        self.weights
            .iter()
            .map(|w| {
                acc.add(*w);
                acc.value()
            })
            .collect()
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("pgf argument must lie in [0, 1], got {x}")))
    }
}

/// `E[x^D]`.
pub fn pgf_eval(pmf: &DiscretePmf, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(pmf.weights.iter().rev().fold(0.0, |acc, w| acc * x + w))
}

/// `E[D x^{D-1}]`; at `x = 1` this is the mean.
pub fn pgf_derivative(pmf: &DiscretePmf, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(pmf
        .weights
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, w)| acc * x + k as f64 * w))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA2: f64 = PI * PI / 6.0;

    #[test]
    fn zeta_two_and_domain() {
        assert!((zeta(2.0).unwrap() - ZETA2).abs() < 1e-13);
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        // mpmath: zeta(2.45)
        assert!((zeta(2.45).unwrap() - 1.361_607_348_633_356_6).abs() < 1e-12);
    }

    #[test]
    fn zeta_normalizes_zipf() {
        let v = zeta(2.45).unwrap();
        let head: f64 = (1..=200_000u64).map(|k| (k as f64).powf(-2.45)).sum();
        let tail = hurwitz_zeta(2.45, 200_001.0).unwrap();
        assert!(((head + tail) / v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zipf_mean_near_two() {
        let m = zeta(1.45).unwrap() / zeta(2.45).unwrap();
        assert!((m - 2.0).abs() / 2.0 < 0.05, "{m}");
        assert!((m - 2.079_304_674_209_333_4).abs() < 1e-11);
    }

    #[test]
    fn continued_zeta_against_reference() {
        assert!((zeta_continued(-1.5) + 0.025_485_201_889_833_036).abs() < 1e-14);
        assert!((zeta_continued(0.3) + 0.904_559_257_253_983_97).abs() < 1e-13);
        assert!((zeta_continued(-10.55) - 0.012_328_109_676_745_088).abs() < 1e-13);
        assert!((zeta_continued(0.0) + 0.5).abs() < 1e-14);
        assert_eq!(zeta_continued(-4.0), 0.0);
        assert!((hurwitz_zeta(3.5, 0.5).unwrap() - 11.620_804_663_441_894).abs() < 1e-11);
        assert!((hurwitz_zeta(2.45, 1001.0).unwrap() - 3.078_343_991_610_857_4e-5).abs() < 1e-17);
    }

    #[test]
    fn polylog_trivial_points() {
        assert_eq!(polylog(2.45, 0.0).unwrap(), 0.0);
        assert!((polylog(2.0, 1.0).unwrap() - ZETA2).abs() < 1e-13);
        assert!(polylog(2.0, 1.1).is_err());
        assert!(polylog(2.0, -0.1).is_err());
        assert!(polylog(1.0, 1.0).is_err());
    }

    #[test]
    fn polylog_by_direct_summation() {
        // 10^6 terms; remainder below 0.5^10^6
        let mut acc = CompensatedSum::default();
        let mut xk = 1.0;
        for k in 1..=1_000_000u64 {
            xk *= 0.5;
            acc.add(xk * (k as f64).powf(-2.45));
        }
        assert!((polylog(2.45, 0.5).unwrap() - acc.value()).abs() < 1e-12);
    }

    #[test]
    fn polylog_against_reference_values() {
        // mpmath.polylog at 30 digits
        let cases = [
            (2.45, 0.9, 1.151_023_317_103_981_4),
            (1.45, 0.999_999, 2.824_032_045_587_645),
            (2.45, 0.999, 1.358_884_809_454_241_2),
            (3.0, 0.97, 1.154_271_270_629_363_4),
            (2.0, 0.8, 1.074_794_600_008_248_4),
            (1.45, 0.95, 1.953_122_171_362_185_5),
            (2.2, 1.0 - 1e-9, 1.490_543_250_992_193_6),
            (0.5, 0.9, 4.021_950_427_473_361),
            (1.0, 0.99, 4.605_170_185_988_091),
            (4.3, 0.85, 0.894_237_144_431_848_7),
        ];
        for (s, x, want) in cases {
            let got = polylog(s, x).unwrap();
            assert!((got - want).abs() < 1e-11, "Li_{s}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn polylog_monotone_in_x() {
        for s in [0.5, 1.0, 1.45, 2.0, 2.45, 3.2, 5.0, 9.0] {
            let mut prev = 0.0;
            for i in 0..=1000 {
                let x = i as f64 / 1000.0;
                if x == 1.0 && s <= 1.0 {
                    continue;
                }
                let v = polylog(s, x).unwrap();
                assert!(v >= prev - 1e-13, "s={s} x={x}");
                prev = v;
            }
        }
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        for k in 0..=10 {
            assert_eq!(stirling2(k, k), BigUint::one());
        }
        assert_eq!(stirling2(10, 4), BigUint::from(34105u32));
        assert_eq!(stirling2(0, 0), BigUint::one());
        assert_eq!(stirling2(3, 5), BigUint::zero());
        assert_eq!(stirling2(4, 0), BigUint::zero());
    }

    #[test]
    fn stirling_recurrence_holds() {
        let rows: Vec<Vec<BigUint>> = (0..=30).map(stirling2_row).collect();
        for n in 1..=30 {
            for k in 1..=n {
                let prev_k = if k < n { &rows[n - 1][k] * BigUint::from(k) } else { BigUint::zero() };
                assert_eq!(rows[n][k], &rows[n - 1][k - 1] + prev_k);
            }
        }
    }

    #[test]
    fn stirling_first_kind_expands_falling_factorial() {
        for k in 0..8usize {
            let row = stirling1_signed_row(k);
            for d in 0..12i64 {
                let falling: i64 = (0..k as i64).map(|j| d - j).product();
                let poly: BigInt = row.iter().enumerate().map(|(j, c)| c * BigInt::from(d).pow(j as u32)).sum();
                assert_eq!(poly, BigInt::from(falling));
            }
        }
    }

    fn poisson_pmf(lambda: f64) -> DiscretePmf {
        let mut w = vec![(-lambda).exp()];
        let mut k = 0;
        while k < 200 {
            k += 1;
            let next = w[k - 1] * lambda / k as f64;
            w.push(next);
            if k as f64 > lambda && next < 1e-14 {
                break;
            }
        }
        DiscretePmf::from_masses(w).unwrap()
    }

    #[test]
    fn pmf_validation() {
        assert!(DiscretePmf::new(vec![0.5, 0.4]).is_err());
        assert!(DiscretePmf::new(vec![1.2, -0.2]).is_err());
        assert!(DiscretePmf::new(vec![]).is_err());
        let p = DiscretePmf::from_masses(vec![1.0, 3.0]).unwrap();
        assert!((p.prob(1) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn pgf_of_poisson() {
        let pmf = poisson_pmf(2.0);
        assert!((pgf_eval(&pmf, 1.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((pgf_eval(&pmf, 0.3).unwrap() - (2.0_f64 * (0.3 - 1.0)).exp()).abs() < 1e-8);
        for x in [0.0, 0.25, 0.5, 0.9] {
            let want = 2.0 * (2.0_f64 * (x - 1.0)).exp();
            assert!((pgf_derivative(&pmf, x).unwrap() - want).abs() < 1e-8);
        }
        assert!((pgf_derivative(&pmf, 1.0).unwrap() - pmf.mean()).abs() < 1e-12);
        assert!(pgf_eval(&pmf, 1.5).is_err());
        assert!(pgf_derivative(&pmf, -0.5).is_err());
    }

    #[test]
    fn pgf_monotone_convex_on_grid() {
        let pmf = DiscretePmf::from_masses(vec![0.1, 0.3, 0.0, 0.2, 0.4]).unwrap();
        let vals: Vec<f64> = (0..100).map(|i| pgf_eval(&pmf, i as f64 / 99.0).unwrap()).collect();
        for w in vals.windows(3) {
            assert!(w[1] >= w[0] - 1e-15);
            assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12);
        }
    }

    #[test]
    fn big_ratio_handles_huge_operands() {
        let num = BigUint::from(3u32) << 5000;
        let den = BigUint::from(4u32) << 5000;
        assert!((big_ratio(&num, &den) - 0.75).abs() < 1e-15);
    }
}
