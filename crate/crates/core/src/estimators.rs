//! Campaign evaluation from a pioneer sample alone: is the network too
//! fragmented, is the campaign effective enough, and what fractions of the
//! population and of the pioneers does the plug-in analysis predict.

use serde::{Deserialize, Serialize};

use crate::analytic::{build_empirical_genfns, fractions, solve, Root, RootKind};
use crate::error::{domain, Result};
use crate::sample::DegreeSample;

/// One-sided z multiplier for roughly 99% confidence.
pub const DEFAULT_Z: f64 = 2.33;

/// A mean tested for being positive at a given confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignTest {
    pub stat: f64,
    pub stderr: f64,
    pub pass: bool,
}

fn sign_test(sample: &DegreeSample, z: f64, f: impl Fn(f64, f64) -> f64) -> Result<SignTest> {
    let n = sample.len();
    if n < 2 {
        return Err(domain(format!("a sign test needs at least 2 pioneers, got {n}")));
    }
    let values: Vec<f64> = sample.iter().map(|p| f(p.degree as f64, p.transmitter as f64)).collect();
    let nf = n as f64;
    let stat = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - stat).powi(2)).sum::<f64>() / (nf - 1.0);
    let stderr = (var / nf).sqrt();
    Ok(SignTest { stat, stderr, pass: stat - z * stderr > 0.0 })
}

/// Mean of `D² − 2D`: positive when a giant component exists.
pub fn fragmentation_test(sample: &DegreeSample, z: f64) -> Result<SignTest> {
    sign_test(sample, z, |d, _| d * d - 2.0 * d)
}

/// Mean of `D·D_t − D − D_t`: positive when the campaign can go viral.
pub fn effectiveness_test(sample: &DegreeSample, z: f64) -> Result<SignTest> {
    sign_test(sample, z, |d, t| d * t - d - t)
}

/// Plug-in roots and fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionEstimate {
    pub xi_hat: Root,
    pub xi_bar_hat: Root,
    pub alpha_hat: f64,
    pub alpha_bar_hat: f64,
}

/// Zeros of the empirical `Ĥ`, `H̄̂` and the fractions they give. Roots are
/// absent (fractions zero) when the empirical viral margin is not positive.
pub fn estimate_fractions(sample: &DegreeSample) -> Result<FractionEstimate> {
    let bundle = build_empirical_genfns(sample)?;
    let xi = solve(&bundle, RootKind::H)?;
    let xi_bar = solve(&bundle, RootKind::Hbar)?;
    let r = fractions(&bundle, xi, xi_bar, Root::Absent)?;
    Ok(FractionEstimate { xi_hat: xi, xi_bar_hat: xi_bar, alpha_hat: r.alpha, alpha_bar_hat: r.alpha_bar })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fragmented,
    Ineffective,
    Viable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub z: f64,
    pub cost_per_pioneer: f64,
    pub value_per_influenced: f64,
    /// Population size used to value the reach; omitted reach is valued per capita.
    pub population: Option<u64>,
    /// Largest number of tries reported on the success curve.
    pub max_tries: u32,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self { z: DEFAULT_Z, cost_per_pioneer: 1.0, value_per_influenced: 0.0, population: None, max_tries: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBenefit {
    /// Mean number of random pioneers contacted until a good one: `1/ᾱ̂`.
    pub expected_tries: f64,
    /// `(k, 1 − (1 − ᾱ̂)^k)` for `k = 1..=max_tries`.
    pub success_curve: Vec<(u32, f64)>,
    pub expected_cost: f64,
    /// `α̂ · population · value_per_influenced`, or per capita without a population.
    pub reach_value: f64,
    pub net_value: f64,
}

impl CostBenefit {
    pub fn new(alpha_hat: f64, alpha_bar_hat: f64, config: &CampaignConfig) -> Self {
        let expected_tries = 1.0 / alpha_bar_hat;
        let success_curve = (1..=config.max_tries).map(|k| (k, success_probability(alpha_bar_hat, k))).collect();
        let expected_cost = expected_tries * config.cost_per_pioneer;
        let reach_value = alpha_hat * config.population.unwrap_or(1) as f64 * config.value_per_influenced;
        Self { expected_tries, success_curve, expected_cost, reach_value, net_value: reach_value - expected_cost }
    }
}

/// Probability that at least one of `k` uniformly drawn pioneers is good.
pub fn success_probability(alpha_bar: f64, k: u32) -> f64 {
    1.0 - (1.0 - alpha_bar).powi(k as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub n_samples: usize,
    pub z: f64,
    pub frag_stat: f64,
    pub frag_stderr: f64,
    pub eff_stat: f64,
    pub eff_stderr: f64,
    pub xi_hat: Option<Root>,
    pub xi_bar_hat: Option<Root>,
    pub alpha_hat: f64,
    pub alpha_bar_hat: f64,
    pub verdict: Verdict,
    pub cost_benefit: Option<CostBenefit>,
    /// Why the verdict is inconclusive, when it is.
    pub note: Option<String>,
}

/// Fragmentation, then effectiveness, then the fractions; the first failing
/// step decides the verdict. Samples too small to test, and viable-looking
/// samples whose plug-in fractions vanish, are inconclusive.
pub fn evaluate_campaign(sample: &DegreeSample, config: &CampaignConfig) -> EstimationReport {
    let mut report = EstimationReport {
        n_samples: sample.len(),
        z: config.z,
        frag_stat: f64::NAN,
        frag_stderr: f64::NAN,
        eff_stat: f64::NAN,
        eff_stderr: f64::NAN,
        xi_hat: None,
        xi_bar_hat: None,
        alpha_hat: 0.0,
        alpha_bar_hat: 0.0,
        verdict: Verdict::Inconclusive,
        cost_benefit: None,
        note: None,
    };
    let tests = fragmentation_test(sample, config.z).and_then(|f| Ok((f, effectiveness_test(sample, config.z)?)));
    let (frag, eff) = match tests {
        Ok(t) => t,
        Err(e) => {
            report.note = Some(e.to_string());
            return report;
        }
    };
    report.frag_stat = frag.stat;
    report.frag_stderr = frag.stderr;
    report.eff_stat = eff.stat;
    report.eff_stderr = eff.stderr;
    if !frag.pass {
        report.verdict = Verdict::Fragmented;
        return report;
    }
    if !eff.pass {
        report.verdict = Verdict::Ineffective;
        return report;
    }
    match estimate_fractions(sample) {
        Ok(est) => {
            report.xi_hat = Some(est.xi_hat);
            report.xi_bar_hat = Some(est.xi_bar_hat);
            report.alpha_hat = est.alpha_hat;
            report.alpha_bar_hat = est.alpha_bar_hat;
            if est.alpha_bar_hat > 0.0 {
                report.verdict = Verdict::Viable;
                report.cost_benefit = Some(CostBenefit::new(est.alpha_hat, est.alpha_bar_hat, config));
            } else {
                report.note = Some("plug-in fraction of good pioneers is zero".into());
            }
        }
        Err(e) => report.note = Some(e.to_string()),
    }
    report
}
