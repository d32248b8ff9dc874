//! Degree laws, transmission models and the joint law of
//! `(D, D_t)`: generating functions, moments and samplers.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sample::{DegreePair, DegreeSample};
use crate::special::{
    big_ratio, big_to_f64, hurwitz_zeta, pgf_derivative, pgf_eval, polylog, polylog_over_x, stirling1_signed_row,
    stirling2_row, zeta, CompensatedSum, DiscretePmf,
};

/// Tail mass discarded when truncating an infinite support.
pub const TAIL_MASS: f64 = 1e-12;

/// Serializable description of a degree law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeSpec {
    Poisson { lambda: f64 },
    PowerLaw { beta: f64 },
    Empirical { pmf: Vec<f64> },
}

#[derive(Debug, Clone)]
enum DegreeRepr {
    /// Finite support: truncated Poisson or empirical.
    Table(DiscretePmf),
    Zipf(Zipf),
}

#[derive(Debug, Clone)]
pub(crate) struct Zipf {
    beta: f64,
    zeta_beta: f64,
    /// Largest value kept by the sampler.
    max_degree: u64,
    /// Tail mass beyond `max_degree`.
    cut_mass: f64,
    /// `P{D <= k}` for `k < cdf.len()`, index 0 unused.
    cdf: Vec<f64>,
}

const ZIPF_TABLE: usize = 4096;

impl Zipf {
    fn new(beta: f64) -> Result<Self> {
        let zeta_beta = zeta(beta)?;
        let tail = |k: u64| hurwitz_zeta(beta, k as f64 + 1.0).map(|v| v / zeta_beta);
        // smallest k with P{D > k} <= TAIL_MASS
        let mut hi = ZIPF_TABLE as u64;
        while tail(hi)? > TAIL_MASS {
            hi = hi.saturating_mul(2);
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if tail(mid)? > TAIL_MASS {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // degrees are stored as u32
        let hi = hi.min(u32::MAX as u64);
        let mut cdf = vec![0.0; ZIPF_TABLE + 1];
        let mut acc = CompensatedSum::default();
        for (k, c) in cdf.iter_mut().enumerate().skip(1) {
            acc.add((k as f64).powf(-beta) / zeta_beta);
            *c = acc.value();
        }
        Ok(Self { beta, zeta_beta, max_degree: hi, cut_mass: tail(hi)?, cdf })
    }

    fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else {
            (k as f64).powf(-self.beta) / self.zeta_beta
        }
    }

    fn cdf_at(&self, k: u64) -> f64 {
        if (k as usize) < self.cdf.len() {
            self.cdf[k as usize]
        } else {
            1.0 - hurwitz_zeta(self.beta, k as f64 + 1.0).unwrap_or(0.0) / self.zeta_beta
        }
    }

    /// Inverse CDF of the law truncated at `max_degree`.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random::<f64>() * (1.0 - self.cut_mass);
        let table_top = *self.cdf.last().unwrap();
        if u < table_top {
            return self.cdf.partition_point(|c| *c <= u) as u64;
        }
        let (mut lo, mut hi) = (ZIPF_TABLE as u64, self.max_degree);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cdf_at(mid) <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Law of the total degree `D`.
#[derive(Debug, Clone)]
pub struct DegreeLaw {
    spec: DegreeSpec,
    repr: DegreeRepr,
}

impl DegreeLaw {
    /// Poisson(λ), truncated where the remaining tail mass drops below [`TAIL_MASS`].
    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!("Poisson lambda must be positive, got {lambda}")));
        }
        let ln_p0 = -lambda;
        let mut ln_w = vec![ln_p0];
        let mut k = 0usize;
        loop {
            k += 1;
            let next = ln_w[k - 1] + lambda.ln() - (k as f64).ln();
            ln_w.push(next);
            if k as f64 > lambda {
                // remaining tail after k is at most p_{k+1} / (1 - λ/(k+2))
                let ratio = lambda / (k as f64 + 2.0);
                let bound = (next + lambda.ln() - (k as f64 + 1.0).ln()).exp() / (1.0 - ratio);
                if bound <= TAIL_MASS {
                    break;
                }
            }
        }
        let masses = ln_w.into_iter().map(f64::exp).collect();
        Ok(Self { spec: DegreeSpec::Poisson { lambda }, repr: DegreeRepr::Table(DiscretePmf::from_masses(masses)?) })
    }

    /// Zipf law `P{D = k} = k^-β / ζ(β)`, `k >= 1`, with `β > 2`.
    pub fn power_law(beta: f64) -> Result<Self> {
        if !(beta > 2.0) || !beta.is_finite() {
            return Err(domain(format!("power-law beta must exceed 2, got {beta}")));
        }
        Ok(Self { spec: DegreeSpec::PowerLaw { beta }, repr: DegreeRepr::Zipf(Zipf::new(beta)?) })
    }

    pub fn empirical(pmf: DiscretePmf) -> Self {
        Self { spec: DegreeSpec::Empirical { pmf: pmf.weights().to_vec() }, repr: DegreeRepr::Table(pmf) }
    }

    /// Empirical law of a raw degree list.
    pub fn from_degrees<I: IntoIterator<Item = u64>>(degrees: I) -> Result<Self> {
        Ok(Self::empirical(DiscretePmf::from_counts(degrees)?))
    }

    pub fn from_spec(spec: &DegreeSpec) -> Result<Self> {
        match spec {
            DegreeSpec::Poisson { lambda } => Self::poisson(*lambda),
            DegreeSpec::PowerLaw { beta } => Self::power_law(*beta),
            DegreeSpec::Empirical { pmf } => Ok(Self::empirical(DiscretePmf::from_masses(pmf.clone())?)),
        }
    }

    pub fn spec(&self) -> &DegreeSpec {
        &self.spec
    }

    /// The pmf when the support is finite (truncated Poisson, empirical).
    pub fn table(&self) -> Option<&DiscretePmf> {
        match &self.repr {
            DegreeRepr::Table(pmf) => Some(pmf),
            DegreeRepr::Zipf(_) => None,
        }
    }

    pub fn prob(&self, k: u64) -> f64 {
        match &self.repr {
            DegreeRepr::Table(pmf) => pmf.prob(k as usize),
            DegreeRepr::Zipf(z) => z.pmf(k),
        }
    }

    /// `G_D(x) = E[x^D]`.
    pub fn pgf(&self, x: f64) -> Result<f64> {
        match &self.repr {
            DegreeRepr::Table(pmf) => pgf_eval(pmf, x),
            DegreeRepr::Zipf(z) => Ok(polylog(z.beta, x)? / z.zeta_beta),
        }
    }

    /// `G'_D(x) = E[D x^(D-1)]`.
    pub fn pgf_derivative(&self, x: f64) -> Result<f64> {
        match &self.repr {
            DegreeRepr::Table(pmf) => pgf_derivative(pmf, x),
            DegreeRepr::Zipf(z) => Ok(polylog_over_x(z.beta - 1.0, x)? / z.zeta_beta),
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.repr {
            DegreeRepr::Table(pmf) => pmf.mean(),
            DegreeRepr::Zipf(z) => zeta(z.beta - 1.0).unwrap_or(f64::INFINITY) / z.zeta_beta,
        }
    }

    /// `E[D²]`, infinite for power laws with `β <= 3`.
    pub fn second_moment(&self) -> f64 {
        match &self.repr {
            DegreeRepr::Table(pmf) => pmf.second_moment(),
            DegreeRepr::Zipf(z) => zeta(z.beta - 2.0).map(|v| v / z.zeta_beta).unwrap_or(f64::INFINITY),
        }
    }

    pub(crate) fn sampler(&self) -> DegreeSampler<'_> {
        match &self.repr {
            DegreeRepr::Table(pmf) => DegreeSampler::Table { pmf, cdf: pmf.cdf() },
            DegreeRepr::Zipf(z) => DegreeSampler::Zipf(z),
        }
    }
}

pub(crate) enum DegreeSampler<'a> {
    Table { pmf: &'a DiscretePmf, cdf: Vec<f64> },
    Zipf(&'a Zipf),
}

impl DegreeSampler<'_> {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            DegreeSampler::Table { pmf, cdf } => pmf.quantile(cdf, rng.random::<f64>() * cdf[cdf.len() - 1]) as u64,
            DegreeSampler::Zipf(z) => z.sample(rng),
        }
    }
}

/// How a node's half-edges split into transmitters and receivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransmissionModel {
    /// Each half-edge transmits independently with probability `p`.
    Bernoulli { p: f64 },
    /// With probability `p` every half-edge transmits, otherwise none.
    NodePercolation { p: f64 },
    /// `k` friends drawn uniformly with replacement; distinct ones are influenced.
    CouponCollector { k: u32 },
}

impl TransmissionModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TransmissionModel::Bernoulli { p } | TransmissionModel::NodePercolation { p } => {
                if (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(domain(format!("transmission probability must lie in [0, 1], got {p}")))
                }
            }
            TransmissionModel::CouponCollector { .. } => Ok(()),
        }
    }

    /// The probability parameter, if the model has one.
    pub fn probability(&self) -> Option<f64> {
        match *self {
            TransmissionModel::Bernoulli { p } | TransmissionModel::NodePercolation { p } => Some(p),
            TransmissionModel::CouponCollector { .. } => None,
        }
    }
}

fn binomial_pmf(d: u64, p: f64) -> DiscretePmf {
    if p <= 0.0 || d == 0 {
        return DiscretePmf::point_mass(0);
    }
    if p >= 1.0 {
        return DiscretePmf::point_mass(d as usize);
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let masses = (0..=d)
        .map(|k| (statrs::function::factorial::ln_binomial(d, k) + k as f64 * lp + (d - k) as f64 * lq).exp())
        .collect();
    DiscretePmf::from_masses(masses).expect("binomial masses are positive")
}

/// Occupancy law: distinct friends hit by `K` uniform draws among `d`.
fn occupancy_pmf(stirling_row: &[BigUint], d: u64) -> DiscretePmf {
    let big_k = stirling_row.len() - 1;
    if d == 0 || big_k == 0 {
        return DiscretePmf::point_mass(0);
    }
    let den = BigUint::from(d).pow(big_k as u32);
    let top = big_k.min(d as usize);
    let mut falling = BigUint::from(1u32);
    let mut masses = Vec::with_capacity(top + 1);
    for (k, s) in stirling_row.iter().enumerate().take(top + 1) {
        if k > 0 {
            falling *= BigUint::from(d - (k as u64 - 1));
        }
        masses.push(big_ratio(&(&falling * s), &den));
    }
    DiscretePmf::from_masses(masses).expect("occupancy masses are non-negative")
}

/// `P{D_t = k | D = d}` for `k = 0..=d`.
pub fn conditional_transmitter_pmf(model: &TransmissionModel, d: u64) -> Result<DiscretePmf> {
    model.validate()?;
    Ok(match *model {
        TransmissionModel::Bernoulli { p } => binomial_pmf(d, p),
        TransmissionModel::NodePercolation { p } => {
            if d == 0 {
                DiscretePmf::point_mass(0)
            } else {
                let mut w = vec![0.0; d as usize + 1];
                w[0] = 1.0 - p;
                w[d as usize] = p;
                DiscretePmf::new(w)?
            }
        }
        TransmissionModel::CouponCollector { k } => occupancy_pmf(&stirling2_row(k as usize), d),
    })
}

/// Moments of the joint law. Divergent moments are `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_degree: f64,
    pub second_degree: f64,
    pub mean_transmitter: f64,
    /// `E[D_t D]`
    pub mean_transmitter_degree: f64,
    pub mean_receiver: f64,
}

impl Moments {
    pub fn second_moment_diverges(&self) -> bool {
        self.second_degree.is_infinite()
    }
}

/// Coupon-collector quantities under a zipf degree law.
///
/// Degrees up to `head` are summed term by term; beyond that the occupancy
/// pmf is the finite Laurent polynomial `{K,k} Σ_j s(k,j) d^(j-K)` and each
/// power sums to a Hurwitz zeta tail or a polylog remainder.
#[derive(Debug, Clone)]
struct ZipfCoupon {
    beta: f64,
    zeta_beta: f64,
    big_k: usize,
    head: u64,
    head_pmfs: Vec<DiscretePmf>,
    /// `coeff[k][j] = {K,k} s(k,j)`
    coeff: Vec<Vec<f64>>,
    /// `tail_power[m + K] = Σ_{d>head} d^(m-β) / ζ(β)` for `m = -K..=1`.
    tail_power: Vec<f64>,
}

impl ZipfCoupon {
    fn new(beta: f64, big_k: usize) -> Result<Self> {
        let zeta_beta = zeta(beta)?;
        let head = 64 * big_k.max(1) as u64;
        let row = stirling2_row(big_k);
        let head_pmfs = (1..=head).map(|d| occupancy_pmf(&row, d)).collect();
        let coeff = (0..=big_k)
            .map(|k| {
                let s2 = big_to_f64(&num_bigint::BigInt::from(row[k].clone()));
                stirling1_signed_row(k).iter().map(|s1| s2 * big_to_f64(s1)).collect()
            })
            .collect();
        let tail_power = (-(big_k as i64)..=1)
            .map(|m| hurwitz_zeta(beta - m as f64, head as f64 + 1.0).map(|v| v / zeta_beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { beta, zeta_beta, big_k, head, head_pmfs, coeff, tail_power })
    }

    fn w(&self, m: i64) -> f64 {
        self.tail_power[(m + self.big_k as i64) as usize]
    }

    /// `Σ_{d>head} d^(m-β) x^d / ζ(β)`.
    fn v(&self, m: i64, x: f64) -> Result<f64> {
        let s = self.beta - m as f64;
        if x == 1.0 {
            return Ok(self.w(m));
        }
        let mut head = CompensatedSum::default();
        let mut xd = 1.0;
        for d in 1..=self.head {
            xd *= x;
            head.add((d as f64).powf(-s) * xd);
        }
        Ok((polylog(s, x)? - head.value()) / self.zeta_beta)
    }

    fn head_sum(&self, f: impl Fn(u64, &DiscretePmf) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (i, pmf) in self.head_pmfs.iter().enumerate() {
            let d = i as u64 + 1;
            acc.add((d as f64).powf(-self.beta) / self.zeta_beta * f(d, pmf));
        }
        acc.value()
    }

    /// `Σ_k g(k) Σ_j c_kj h(j - K)` over the tail.
    fn tail_sum(&self, g: impl Fn(usize) -> f64, h: impl Fn(i64) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (k, row) in self.coeff.iter().enumerate() {
            let gk = g(k);
            if gk == 0.0 {
                continue;
            }
            for (j, c) in row.iter().enumerate() {
                if *c != 0.0 {
                    acc.add(gk * c * h(j as i64 - self.big_k as i64));
                }
            }
        }
        acc.value()
    }

    fn transmitter_pgf(&self, x: f64) -> f64 {
        self.head_sum(|_, pmf| pmf.expect(|k| x.powi(k as i32)))
            + self.tail_sum(|k| x.powi(k as i32), |m| self.w(m))
    }

    fn dt_xd(&self, x: f64) -> Result<f64> {
        let vs = (-(self.big_k as i64)..=0).map(|m| self.v(m, x)).collect::<Result<Vec<_>>>()?;
        let big_k = self.big_k as i64;
        Ok(self.head_sum(|d, pmf| x.powi(d as i32) * pmf.mean())
            + self.tail_sum(|k| k as f64, |m| vs[(m + big_k) as usize]))
    }

    fn dt_xdt(&self, x: f64) -> f64 {
        self.head_sum(|_, pmf| pmf.expect(|k| k as f64 * x.powi(k as i32)))
            + self.tail_sum(|k| k as f64 * x.powi(k as i32), |m| self.w(m))
    }

    fn dr_xdt(&self, x: f64) -> f64 {
        let head = self.head_sum(|d, pmf| pmf.expect(|k| (d as f64 - k as f64) * x.powi(k as i32)));
        let deg = self.tail_sum(|k| x.powi(k as i32), |m| self.w(m + 1));
        let tr = self.tail_sum(|k| k as f64 * x.powi(k as i32), |m| self.w(m));
        head + deg - tr
    }

    fn mean_transmitter(&self) -> f64 {
        self.head_sum(|_, pmf| pmf.mean()) + self.tail_sum(|k| k as f64, |m| self.w(m))
    }

    fn mean_transmitter_degree(&self) -> f64 {
        self.head_sum(|d, pmf| d as f64 * pmf.mean()) + self.tail_sum(|k| k as f64, |m| self.w(m + 1))
    }
}

#[derive(Debug, Clone)]
enum CouponRepr {
    /// Conditional pmf for every degree in a finite support.
    Table(Vec<DiscretePmf>),
    Zipf(Box<ZipfCoupon>),
}

/// Joint law of `(D, D_t)`: a degree law with a transmission model on top.
#[derive(Debug, Clone)]
pub struct JointDegreeLaw {
    degree: DegreeLaw,
    transmission: TransmissionModel,
    coupon: Option<CouponRepr>,
}

impl JointDegreeLaw {
    pub fn new(degree: DegreeLaw, transmission: TransmissionModel) -> Result<Self> {
        transmission.validate()?;
        let coupon = match transmission {
            TransmissionModel::CouponCollector { k } => Some(match degree.table() {
                Some(pmf) => {
                    let row = stirling2_row(k as usize);
                    CouponRepr::Table((0..=pmf.max_value() as u64).map(|d| occupancy_pmf(&row, d)).collect())
                }
                None => {
                    let DegreeSpec::PowerLaw { beta } = *degree.spec() else {
                        return Err(Error::Unsupported("coupon collector on this degree law".into()));
                    };
                    CouponRepr::Zipf(Box::new(ZipfCoupon::new(beta, k as usize)?))
                }
            }),
            _ => None,
        };
        Ok(Self { degree, transmission, coupon })
    }

    pub fn degree(&self) -> &DegreeLaw {
        &self.degree
    }

    pub fn transmission(&self) -> &TransmissionModel {
        &self.transmission
    }

    /// `Σ_d P{D=d} f(d, P{D_t=· | D=d})` over a finite degree support.
    fn table_sum(&self, f: impl Fn(u64, &DiscretePmf) -> f64) -> Option<f64> {
        let Some(CouponRepr::Table(conds)) = &self.coupon else { return None };
        let pmf = self.degree.table()?;
        let mut acc = CompensatedSum::default();
        for (d, w) in pmf.iter() {
            if w > 0.0 {
                acc.add(w * f(d as u64, &conds[d]));
            }
        }
        Some(acc.value())
    }

    fn zipf_coupon(&self) -> Option<&ZipfCoupon> {
        match &self.coupon {
            Some(CouponRepr::Zipf(z)) => Some(z),
            _ => None,
        }
    }

    pub fn moments(&self) -> Moments {
        let mean_degree = self.degree.mean();
        let second_degree = self.degree.second_moment();
        let (mean_transmitter, mean_transmitter_degree) = match self.transmission {
            TransmissionModel::Bernoulli { p } | TransmissionModel::NodePercolation { p } => {
                // p E[D^2] with 0 * inf = 0
                let mixed = if p == 0.0 { 0.0 } else { p * second_degree };
                (p * mean_degree, mixed)
            }
            TransmissionModel::CouponCollector { .. } => match self.zipf_coupon() {
                Some(z) => (z.mean_transmitter(), z.mean_transmitter_degree()),
                None => (
                    self.table_sum(|_, c| c.mean()).unwrap_or(0.0),
                    self.table_sum(|d, c| d as f64 * c.mean()).unwrap_or(0.0),
                ),
            },
        };
        Moments {
            mean_degree,
            second_degree,
            mean_transmitter,
            mean_transmitter_degree,
            mean_receiver: mean_degree - mean_transmitter,
        }
    }

    /// `G_{D_t}(x) = E[x^{D_t}]`.
    pub fn transmitter_pgf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        match self.transmission {
            TransmissionModel::Bernoulli { p } => self.degree.pgf(1.0 - p * (1.0 - x)),
            TransmissionModel::NodePercolation { p } => Ok(1.0 - p + p * self.degree.pgf(x)?),
            TransmissionModel::CouponCollector { .. } => Ok(match self.zipf_coupon() {
                Some(z) => z.transmitter_pgf(x),
                None => self.table_sum(|_, c| pgf_eval(c, x).unwrap_or(f64::NAN)).unwrap_or(f64::NAN),
            }),
        }
    }

    /// `E[D_t x^D]`.
    pub fn transmitter_degree_pgf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        match self.transmission {
            TransmissionModel::Bernoulli { p } | TransmissionModel::NodePercolation { p } => {
                Ok(p * x * self.degree.pgf_derivative(x)?)
            }
            TransmissionModel::CouponCollector { .. } => match self.zipf_coupon() {
                Some(z) => z.dt_xd(x),
                None => Ok(self.table_sum(|d, c| x.powi(d as i32) * c.mean()).unwrap_or(f64::NAN)),
            },
        }
    }

    /// `E[D_t x^{D_t}]`.
    pub fn transmitter_self_pgf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        match self.transmission {
            TransmissionModel::Bernoulli { p } => Ok(p * x * self.degree.pgf_derivative(1.0 - p * (1.0 - x))?),
            TransmissionModel::NodePercolation { p } => Ok(p * x * self.degree.pgf_derivative(x)?),
            TransmissionModel::CouponCollector { .. } => Ok(match self.zipf_coupon() {
                Some(z) => z.dt_xdt(x),
                None => self.table_sum(|_, c| c.expect(|k| k as f64 * x.powi(k as i32))).unwrap_or(f64::NAN),
            }),
        }
    }

    /// `E[D_r x^{D_t}]`.
    pub fn receiver_pgf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        match self.transmission {
            TransmissionModel::Bernoulli { p } => Ok((1.0 - p) * self.degree.pgf_derivative(1.0 - p * (1.0 - x))?),
            TransmissionModel::NodePercolation { p } => Ok((1.0 - p) * self.degree.mean()),
            TransmissionModel::CouponCollector { .. } => Ok(match self.zipf_coupon() {
                Some(z) => z.dr_xdt(x),
                None => self
                    .table_sum(|d, c| c.expect(|k| (d as f64 - k as f64) * x.powi(k as i32)))
                    .unwrap_or(f64::NAN),
            }),
        }
    }

    /// Joint pmf `P{D = d, D_t = k}` when the degree support is finite.
    pub fn joint_table(&self) -> Option<Vec<(u64, f64, DiscretePmf)>> {
        let pmf = self.degree.table()?;
        pmf.iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|(d, w)| conditional_transmitter_pmf(&self.transmission, d as u64).ok().map(|c| (d as u64, w, c)))
            .collect()
    }

    /// Draws `n` i.i.d. pioneers. `D_t` is drawn from the transmission
    /// mechanism itself, not from its pmf.
    pub fn sample(&self, n: usize, seed: u64) -> Result<DegreeSample> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = self.degree.sampler();
        let mut pairs = Vec::with_capacity(n);
        let mut picks: Vec<u64> = Vec::new();
        for _ in 0..n {
            let d = sampler.sample(&mut rng);
            let t = match self.transmission {
                TransmissionModel::Bernoulli { p } => {
                    if d == 0 {
                        0
                    } else {
                        Binomial::new(d, p).map_err(|e| domain(e.to_string()))?.sample(&mut rng)
                    }
                }
                TransmissionModel::NodePercolation { p } => {
                    if rng.random::<f64>() < p {
                        d
                    } else {
                        0
                    }
                }
                TransmissionModel::CouponCollector { k } => {
                    if d == 0 {
                        0
                    } else {
                        picks.clear();
                        picks.extend((0..k).map(|_| rng.random_range(0..d)));
                        picks.sort_unstable();
                        picks.dedup();
                        picks.len() as u64
                    }
                }
            };
            let d = u32::try_from(d).map_err(|_| domain(format!("degree {d} exceeds u32")))?;
            pairs.push(DegreePair::new(d, t as u32)?);
        }
        DegreeSample::new(pairs)
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("generating function argument must lie in [0, 1], got {x}")))
    }
}
