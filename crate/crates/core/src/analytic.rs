//! Large-graph limits: viral and giant-component conditions, the functions
//! `H`, `H̄`, `H₀` whose zeros in `(0, 1)` determine the fraction of the
//! population reached (`α`), the fraction of good pioneers (`ᾱ`) and the
//! giant component (`α₀`), plus a Galton–Watson cross-check of `ᾱ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{DegreeLaw, JointDegreeLaw, Moments};
use crate::sample::{DegreePair, DegreeSample};
use crate::special::CompensatedSum;

/// Condition margins within this distance of zero are treated as critical.
pub const CRITICAL_MARGIN: f64 = 1e-9;

/// Largest residual `|f(root)|` accepted from [`find_root`].
pub const ROOT_RESIDUAL: f64 = 1e-12;

/// Generating functions of `(D, D_t)` from a law or from a sample.
#[derive(Debug, Clone)]
pub enum GenFnBundle {
    Law(JointDegreeLaw),
    Sample(EmpiricalGenFns),
}

/// Plug-in generating functions: averages over the sample's pairs.
#[derive(Debug, Clone)]
pub struct EmpiricalGenFns {
    groups: Vec<(DegreePair, f64)>,
    n: f64,
}

impl EmpiricalGenFns {
    fn average(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for (p, count) in &self.groups {
            acc.add(count * f(p.degree as f64, p.transmitter as f64));
        }
        acc.value() / self.n
    }
}

/// Builds the bundle of a law.
pub fn build_genfns(law: &JointDegreeLaw) -> GenFnBundle {
    GenFnBundle::Law(law.clone())
}

/// Builds the plug-in bundle of a sample.
pub fn build_empirical_genfns(sample: &DegreeSample) -> Result<GenFnBundle> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let groups = sample.grouped().into_iter().map(|(p, c)| (p, c as f64)).collect();
    Ok(GenFnBundle::Sample(EmpiricalGenFns { groups, n: sample.len() as f64 }))
}

impl GenFnBundle {
    pub fn moments(&self) -> Moments {
        match self {
            GenFnBundle::Law(law) => law.moments(),
            GenFnBundle::Sample(s) => {
                let mean_degree = s.average(|d, _| d);
                let mean_transmitter = s.average(|_, t| t);
                Moments {
                    mean_degree,
                    second_degree: s.average(|d, _| d * d),
                    mean_transmitter,
                    mean_transmitter_degree: s.average(|d, t| d * t),
                    mean_receiver: s.average(|d, t| d - t),
                }
            }
        }
    }

    /// `G_D(x)`.
    pub fn degree_pgf(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.degree().pgf(x),
            GenFnBundle::Sample(s) => Ok(s.average(|d, _| x.powf(d))),
        }
    }

    /// `G'_D(x)`.
    pub fn degree_pgf_derivative(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.degree().pgf_derivative(x),
            GenFnBundle::Sample(s) => Ok(s.average(|d, _| if d == 0.0 { 0.0 } else { d * x.powf(d - 1.0) })),
        }
    }

    /// `G_{D_t}(x)`.
    pub fn transmitter_pgf(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.transmitter_pgf(x),
            GenFnBundle::Sample(s) => Ok(s.average(|_, t| x.powf(t))),
        }
    }

    /// `E[D_t x^D]`.
    pub fn transmitter_degree_pgf(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.transmitter_degree_pgf(x),
            GenFnBundle::Sample(s) => Ok(s.average(|d, t| t * x.powf(d))),
        }
    }

    /// `E[D_t x^{D_t}]`.
    pub fn transmitter_self_pgf(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.transmitter_self_pgf(x),
            GenFnBundle::Sample(s) => Ok(s.average(|_, t| t * x.powf(t))),
        }
    }

    /// `E[D_r x^{D_t}]`.
    pub fn receiver_pgf(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => law.receiver_pgf(x),
            GenFnBundle::Sample(s) => Ok(s.average(|d, t| (d - t) * x.powf(t))),
        }
    }

    /// `H(x) = E[D]x² − E[D_r]x − E[D_t x^D]`.
    ///
    /// For a sample the average is taken term by term, so `Ĥ(1) = 0` exactly.
    pub fn eval_h(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => {
                let m = law.moments();
                Ok(m.mean_degree * x * x - m.mean_receiver * x - law.transmitter_degree_pgf(x)?)
            }
            GenFnBundle::Sample(s) => Ok(s.average(|d, t| d * x * x - (d - t) * x - t * x.powf(d))),
        }
    }

    /// `H̄(x) = E[D]x² − E[D_t x^{D_t}] − E[D_r x^{D_t}]x`.
    pub fn eval_hbar(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => {
                let m = law.moments();
                Ok(m.mean_degree * x * x - law.transmitter_self_pgf(x)? - law.receiver_pgf(x)? * x)
            }
            GenFnBundle::Sample(s) => {
                Ok(s.average(|d, t| d * x * x - t * x.powf(t) - (d - t) * x.powf(t + 1.0)))
            }
        }
    }

    /// `H₀(x) = E[D]x² − x G'_D(x)`.
    pub fn eval_h0(&self, x: f64) -> Result<f64> {
        match self {
            GenFnBundle::Law(law) => Ok(law.degree().mean() * x * x - x * law.degree().pgf_derivative(x)?),
            GenFnBundle::Sample(s) => Ok(s.average(|d, _| d * x * x - d * x.powf(d))),
        }
    }

    pub fn eval(&self, kind: RootKind, x: f64) -> Result<f64> {
        match kind {
            RootKind::H => self.eval_h(x),
            RootKind::Hbar => self.eval_hbar(x),
            RootKind::H0 => self.eval_h0(x),
        }
    }
}

/// Margin `E[D_t D] − E[D_t] − E[D]` of the viral condition.
pub fn viral_margin(m: &Moments) -> f64 {
    if m.mean_transmitter_degree.is_infinite() {
        return f64::INFINITY;
    }
    m.mean_transmitter_degree - m.mean_transmitter - m.mean_degree
}

/// Margin `E[D²] − 2E[D]` of the giant-component condition.
pub fn giant_margin(m: &Moments) -> f64 {
    if m.second_degree.is_infinite() {
        return f64::INFINITY;
    }
    m.second_degree - 2.0 * m.mean_degree
}

/// `E[D_t D] > E[D_t] + E[D]`, with critical margins counted as false.
pub fn viral_condition(m: &Moments) -> bool {
    viral_margin(m) > CRITICAL_MARGIN
}

/// `E[D(D − 2)] > 0`, with critical margins counted as false.
pub fn giant_condition(m: &Moments) -> bool {
    giant_margin(m) > CRITICAL_MARGIN
}

/// Smallest Bernoulli transmission probability above which the campaign can
/// go viral: `E[D] / (E[D²] − E[D])`. Zero when `E[D²]` diverges, infinite
/// when no probability suffices.
pub fn bernoulli_threshold(degree: &DegreeLaw) -> f64 {
    let second = degree.second_moment();
    if second.is_infinite() {
        return 0.0;
    }
    let mean = degree.mean();
    let denom = second - mean;
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        mean / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    H,
    Hbar,
    H0,
}

impl RootKind {
    fn name(self) -> &'static str {
        match self {
            RootKind::H => "H",
            RootKind::Hbar => "Hbar",
            RootKind::H0 => "H0",
        }
    }
}

fn scan_grid() -> impl Iterator<Item = f64> {
    let linear = (1..1000).rev().map(|i| i as f64 * 1e-3);
    // x² must stay a normal float for the sign test to mean anything
    let geometric = (1..107).map(|i| 1e-3 * 0.125f64.powi(i));
    // near a threshold with heavy tails the root can sit within 1e-6 of 1;
    // closer than 1e-10 the sign of f drowns in rounding
    let near_one = (6..=10).rev().map(|k| 1.0 - 10f64.powi(-k));
    near_one.chain(linear).chain(geometric)
}

/// Zero of `f` in `(0, 1)` nearest to 1.
///
/// Scans downward from `1 − 1e-10` (decades down to `1 − 1e-6`, steps of
/// `1e-3`, then geometric towards 0) for the first sign change, then refines the bracket with secant steps
/// safeguarded by bisection down to adjacent floats. Returns `None` when the
/// scan finds no sign change.
pub fn find_root(f: impl Fn(f64) -> f64) -> Option<f64> {
    let mut grid = scan_grid();
    let mut hi = grid.next()?;
    let mut f_hi = f(hi);
    if f_hi == 0.0 {
        return Some(hi);
    }
    for lo in grid {
        let f_lo = f(lo);
        if f_lo == 0.0 {
            return Some(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            return Some(refine(&f, lo, f_lo, hi, f_hi));
        }
        hi = lo;
        f_hi = f_lo;
    }
    None
}

fn refine(f: &impl Fn(f64) -> f64, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut last_width = b - a;
    let mut use_bisect = false;
    for _ in 0..400 {
        let width = b - a;
        let mid = a + 0.5 * width;
        if mid <= a || mid >= b {
            break;
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let c = if use_bisect || !(secant > a && secant < b) { mid } else { secant };
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
        let new_width = b - a;
        // secant steps that fail to halve the bracket are followed by a bisection
        use_bisect = !use_bisect && new_width > 0.5 * last_width;
        last_width = new_width;
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}

/// Outcome of locating the zero that determines a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum Root {
    /// Zero strictly inside `(0, 1)`.
    Inside(f64),
    /// Condition holds but the function stays positive on `(0, 1)`: the
    /// exploration never dies out and the zero sits at the origin.
    AtOrigin,
    /// Condition margin within [`CRITICAL_MARGIN`] of zero.
    Critical,
    /// Condition fails.
    Absent,
}

impl Root {
    pub fn value(&self) -> Option<f64> {
        match self {
            Root::Inside(x) => Some(*x),
            _ => None,
        }
    }

    /// The point at which the pgf is evaluated, if any.
    fn abscissa(&self) -> Option<f64> {
        match self {
            Root::Inside(x) => Some(*x),
            Root::AtOrigin => Some(0.0),
            _ => None,
        }
    }
}

/// Locates the zero of `kind` after checking the matching condition
/// (viral for `H`, `H̄`; giant for `H₀`).
pub fn solve(bundle: &GenFnBundle, kind: RootKind) -> Result<Root> {
    let m = bundle.moments();
    let margin = match kind {
        RootKind::H | RootKind::Hbar => viral_margin(&m),
        RootKind::H0 => giant_margin(&m),
    };
    if margin.abs() <= CRITICAL_MARGIN {
        return Ok(Root::Critical);
    }
    if margin < 0.0 {
        return Ok(Root::Absent);
    }
    let f = |x: f64| bundle.eval(kind, x).unwrap_or(f64::NAN);
    if let Some(x) = find_root(f) {
        return Ok(Root::Inside(x));
    }
    if scan_grid().all(|x| f(x) > 0.0) {
        Ok(Root::AtOrigin)
    } else {
        Err(Error::NonBracketing(kind.name()))
    }
}

/// Limits for one law or sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub viral_condition: bool,
    pub giant_condition: bool,
    pub viral_margin: f64,
    pub giant_margin: f64,
    pub xi: Root,
    pub xi_bar: Root,
    pub xi0: Root,
    /// Fraction of the population reached from a good pioneer.
    pub alpha: f64,
    /// Fraction of good pioneers.
    pub alpha_bar: f64,
    /// Fraction of nodes in the giant component.
    pub alpha0: f64,
}

/// Fractions `α = 1 − G_D(ξ)`, `ᾱ = 1 − G_{D_t}(ξ̄)`, `α₀ = 1 − G_D(ξ₀)`;
/// zero where the root is absent or critical.
pub fn fractions(bundle: &GenFnBundle, xi: Root, xi_bar: Root, xi0: Root) -> Result<AnalyticResult> {
    let m = bundle.moments();
    let frac = |root: Root, pgf: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok(match root.abscissa() {
            Some(x) => (1.0 - pgf(x)?).clamp(0.0, 1.0),
            None => 0.0,
        })
    };
    Ok(AnalyticResult {
        viral_condition: viral_condition(&m),
        giant_condition: giant_condition(&m),
        viral_margin: viral_margin(&m),
        giant_margin: giant_margin(&m),
        xi,
        xi_bar,
        xi0,
        alpha: frac(xi, &|x| bundle.degree_pgf(x))?,
        alpha_bar: frac(xi_bar, &|x| bundle.transmitter_pgf(x))?,
        alpha0: frac(xi0, &|x| bundle.degree_pgf(x))?,
    })
}

/// Conditions, roots and fractions in one pass.
pub fn analyze(bundle: &GenFnBundle) -> Result<AnalyticResult> {
    let xi = solve(bundle, RootKind::H)?;
    let xi_bar = solve(bundle, RootKind::Hbar)?;
    let xi0 = solve(bundle, RootKind::H0)?;
    fractions(bundle, xi, xi_bar, xi0)
}

/// Joint law of `(D̃_r, D̃_t)`: the half-edges left on a node reached along a
/// uniformly chosen edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeBiasedLaw {
    /// `((receiver, transmitter), probability)`
    pub atoms: Vec<((u64, u64), f64)>,
}

impl SizeBiasedLaw {
    pub fn total_mass(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        self.atoms.iter().for_each(|(_, p)| acc.add(*p));
        acc.value()
    }

    /// `E[D̃_t]`, the mean offspring count.
    pub fn mean_transmitter(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        self.atoms.iter().for_each(|((_, w), p)| acc.add(*w as f64 * p));
        acc.value()
    }

    /// Offspring pgf `E[q^{D̃_t}]`.
    pub fn offspring_pgf(&self, q: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        self.atoms.iter().for_each(|((_, w), p)| acc.add(p * q.powi(*w as i32)));
        acc.value()
    }
}

/// `P{D̃_r = v, D̃_t = w} = ((v+1) p_{v+1,w} + (w+1) p_{v,w+1}) / E[D]`.
///
/// Needs a finite degree support (truncated Poisson or empirical).
pub fn size_biased_law(joint: &JointDegreeLaw) -> Result<SizeBiasedLaw> {
    let table = joint
        .joint_table()
        .ok_or_else(|| Error::Unsupported("size-biased law needs a finite degree support".into()))?;
    let mean = joint.degree().mean();
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::DegenerateLaw(format!("E[D] = {mean}")));
    }
    let mut atoms: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for (d, w_d, cond) in &table {
        for (t, c) in cond.iter() {
            let q = w_d * c;
            if q == 0.0 {
                continue;
            }
            let (r, t) = (d - t as u64, t as u64);
            // remove the half-edge the node was reached through
            if r > 0 {
                *atoms.entry((r - 1, t)).or_default() += r as f64 * q / mean;
            }
            if t > 0 {
                *atoms.entry((r, t - 1)).or_default() += t as f64 * q / mean;
            }
        }
    }
    Ok(SizeBiasedLaw { atoms: atoms.into_iter().collect() })
}

/// Galton–Watson approximation of the exploration from a random pioneer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingCheck {
    pub supercritical: bool,
    pub mean_offspring: f64,
    /// Extinction probability of a lineage started along an edge.
    pub p_ext: f64,
    /// `1 − E[p_ext^{D_t}]`.
    pub alpha_bar_bp: f64,
    pub viral_condition: bool,
    pub alpha_bar: f64,
    pub xi_bar: Root,
}

impl BranchingCheck {
    /// Supercriticality matches the viral condition, `p_ext` is the zero of
    /// `H̄` and the survival probability matches `ᾱ`, all within `tol`.
    pub fn consistent(&self, tol: f64) -> bool {
        let ext_matches = match self.xi_bar {
            Root::Inside(x) => (x - self.p_ext).abs() < tol.sqrt(),
            Root::AtOrigin => self.p_ext.abs() < tol.sqrt(),
            Root::Absent | Root::Critical => !self.supercritical,
        };
        self.supercritical == self.viral_condition && ext_matches && (self.alpha_bar_bp - self.alpha_bar).abs() < tol
    }
}

/// Smallest fixed point of the offspring pgf in `[0, 1)`.
fn extinction_probability(sb: &SizeBiasedLaw) -> f64 {
    let g = |q: f64| sb.offspring_pgf(q) - q;
    let mut q = 0.0;
    for _ in 0..10_000 {
        let next = sb.offspring_pgf(q);
        if next - q < 1e-15 {
            q = next;
            break;
        }
        q = next;
    }
    // iterates approach from below: g(q) >= 0; bisect against a point with g < 0
    let (mut lo, mut hi) = (q.min(1.0 - 1e-6), 1.0 - 1e-6);
    if g(lo) <= 0.0 || g(hi) >= 0.0 {
        return q;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Compares the branching-process survival probability of a random pioneer
/// with `ᾱ` from the analytic route.
pub fn branching_crosscheck(joint: &JointDegreeLaw) -> Result<BranchingCheck> {
    let sb = size_biased_law(joint)?;
    let mean_degree = joint.degree().mean();
    let mean_offspring = sb.mean_transmitter();
    let supercritical = (mean_offspring - 1.0) * mean_degree > CRITICAL_MARGIN;
    let p_ext = if supercritical { extinction_probability(&sb) } else { 1.0 };
    // marginal of D_t straight from the joint table
    let mut survival = CompensatedSum::default();
    survival.add(1.0);
    for (_, w_d, cond) in joint.joint_table().unwrap_or_default() {
        for (t, c) in cond.iter() {
            survival.add(-w_d * c * p_ext.powi(t as i32));
        }
    }
    let alpha_bar_bp = if supercritical { survival.value().clamp(0.0, 1.0) } else { 0.0 };
    let bundle = build_genfns(joint);
    let m = bundle.moments();
    let xi_bar = solve(&bundle, RootKind::Hbar)?;
    let r = fractions(&bundle, Root::Absent, xi_bar, Root::Absent)?;
    Ok(BranchingCheck {
        supercritical,
        mean_offspring,
        p_ext,
        alpha_bar_bp,
        viral_condition: viral_condition(&m),
        alpha_bar: r.alpha_bar,
        xi_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::TransmissionModel;
    use crate::special::{polylog, zeta};

    fn poisson_bern(lambda: f64, p: f64) -> JointDegreeLaw {
        JointDegreeLaw::new(DegreeLaw::poisson(lambda).unwrap(), TransmissionModel::Bernoulli { p }).unwrap()
    }

    #[test]
    fn viral_condition_examples() {
        assert!(viral_condition(&poisson_bern(2.0, 0.8).moments()));
        assert!(!viral_condition(&poisson_bern(2.0, 0.0).moments()));
        assert!(!viral_condition(&poisson_bern(2.0, 0.5).moments()));
        let zipf = JointDegreeLaw::new(DegreeLaw::power_law(2.45).unwrap(), TransmissionModel::Bernoulli { p: 0.0 }).unwrap();
        assert!(!viral_condition(&zipf.moments()));
    }

    #[test]
    fn giant_condition_examples() {
        assert!(giant_condition(&poisson_bern(2.0, 1.0).moments()));
        let fixed = JointDegreeLaw::new(DegreeLaw::from_degrees([1, 1, 1]).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        assert!((giant_margin(&fixed.moments()) + 1.0).abs() < 1e-15);
        assert!(!giant_condition(&fixed.moments()));
        let at = |beta: f64| {
            giant_condition(&JointDegreeLaw::new(DegreeLaw::power_law(beta).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap().moments())
        };
        assert!(at(3.4));
        assert!(!at(3.6));
    }

    #[test]
    fn zipf_giant_boundary_near_3_48() {
        let f = |b: f64| zeta(b - 2.0).unwrap() - 2.0 * zeta(b - 1.0).unwrap();
        let (mut lo, mut hi) = (3.3, 3.7);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 3.48).abs() < 0.005, "{lo}");
    }

    #[test]
    fn mixed_pgf_closed_forms() {
        let (lambda, p): (f64, f64) = (2.0, 0.8);
        let b = build_genfns(&poisson_bern(lambda, p));
        for x in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let want = p * lambda * x * (lambda * (x - 1.0)).exp();
            assert!((b.transmitter_degree_pgf(x).unwrap() - want).abs() < 1e-8);
        }
        let z = JointDegreeLaw::new(DegreeLaw::power_law(2.45).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        let zb = build_genfns(&z);
        for x in [0.1, 0.5, 0.95] {
            let want = polylog(1.45, x).unwrap() / zeta(2.45).unwrap();
            assert!((zb.transmitter_degree_pgf(x).unwrap() - want).abs() < 1e-8);
        }
    }

    #[test]
    fn single_pair_sample() {
        let s = DegreeSample::from_tuples([(3, 1)]).unwrap();
        let b = build_empirical_genfns(&s).unwrap();
        for x in [0.0, 0.3, 0.7, 1.0] {
            assert!((b.degree_pgf(x).unwrap() - x.powi(3)).abs() < 1e-15);
            assert!((b.transmitter_pgf(x).unwrap() - x).abs() < 1e-15);
        }
    }

    #[test]
    fn h_closed_form_and_endpoints() {
        let b = build_genfns(&poisson_bern(2.0, 0.8));
        let x: f64 = 0.5;
        let want = 2.0 * x * x - 0.4 * x - 1.6 * x * (2.0 * (x - 1.0)).exp();
        assert!((b.eval_h(x).unwrap() - want).abs() < 1e-8);
        for kind in [RootKind::H, RootKind::Hbar, RootKind::H0] {
            assert!(b.eval(kind, 1.0).unwrap().abs() < 1e-9);
            assert!(b.eval(kind, 0.0).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn critical_poisson_has_no_root() {
        let b = build_genfns(&poisson_bern(2.0, 0.5));
        assert_eq!(solve(&b, RootKind::H).unwrap(), Root::Critical);
        let r = analyze(&b).unwrap();
        assert_eq!((r.alpha, r.alpha_bar), (0.0, 0.0));
    }

    #[test]
    fn erdos_renyi_giant_component() {
        let b = build_genfns(&poisson_bern(2.0, 1.0));
        let r = analyze(&b).unwrap();
        // fixed-point iteration of 1 - a = exp(-2a)
        let mut a: f64 = 0.5;
        for _ in 0..2000 {
            a = 1.0 - (-2.0 * a).exp();
        }
        assert!((r.alpha0 - a).abs() < 1e-9);
        assert!((r.alpha - a).abs() < 1e-9);
        let xi0 = r.xi0.value().unwrap();
        assert!((xi0 - 0.2032).abs() < 1e-4);
        assert!(b.eval_h0(xi0).unwrap().abs() <= ROOT_RESIDUAL);
    }

    #[test]
    fn bernoulli_roots_related_by_substitution() {
        let p = 0.7;
        let b = build_genfns(&poisson_bern(3.0, p));
        let xi = solve(&b, RootKind::H).unwrap().value().unwrap();
        let xi_bar = solve(&b, RootKind::Hbar).unwrap().value().unwrap();
        assert!((1.0 - p * (1.0 - xi_bar) - xi).abs() < 1e-10);
    }

    #[test]
    fn fraction_identities() {
        let r = analyze(&build_genfns(&poisson_bern(3.0, 0.6))).unwrap();
        assert!((r.alpha - r.alpha_bar).abs() < 1e-9);
        assert!(r.alpha <= r.alpha0 + 1e-12);
        let np = JointDegreeLaw::new(DegreeLaw::poisson(3.0).unwrap(), TransmissionModel::NodePercolation { p: 0.6 }).unwrap();
        let rn = analyze(&build_genfns(&np)).unwrap();
        assert!((rn.alpha_bar - 0.6 * rn.alpha).abs() < 1e-9);
        assert!((rn.alpha - r.alpha).abs() < 1e-9);
        let sub = analyze(&build_genfns(&poisson_bern(3.0, 0.2))).unwrap();
        assert_eq!((sub.alpha, sub.alpha_bar), (0.0, 0.0));
        assert_eq!(sub.xi, Root::Absent);
    }

    #[test]
    fn all_transmitting_regular_graph_roots_at_origin() {
        let law = JointDegreeLaw::new(DegreeLaw::from_degrees([3]).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        let r = analyze(&build_genfns(&law)).unwrap();
        assert_eq!(r.xi, Root::AtOrigin);
        assert_eq!(r.alpha, 1.0);
        assert_eq!(r.alpha_bar, 1.0);
    }

    #[test]
    fn thresholds() {
        for lambda in [0.5, 1.35, 2.0, 6.0] {
            let t = bernoulli_threshold(&DegreeLaw::poisson(lambda).unwrap());
            assert!((t - 1.0 / lambda).abs() < 1e-8);
        }
        assert_eq!(bernoulli_threshold(&DegreeLaw::power_law(2.8).unwrap()), 0.0);
        let want = zeta(2.2).unwrap() / (zeta(1.2).unwrap() - zeta(2.2).unwrap());
        assert!((bernoulli_threshold(&DegreeLaw::power_law(3.2).unwrap()) - want).abs() < 1e-12);
        assert!((want - 0.363_455_014_543_227_8).abs() < 1e-10);
        assert!(bernoulli_threshold(&DegreeLaw::from_degrees([1]).unwrap()).is_infinite());
    }

    #[test]
    fn size_biased_examples() {
        let law = JointDegreeLaw::new(DegreeLaw::from_degrees([2]).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        let sb = size_biased_law(&law).unwrap();
        assert_eq!(sb.atoms, vec![((0, 1), 1.0)]);
        let sb = size_biased_law(&poisson_bern(2.0, 0.8)).unwrap();
        assert!((sb.total_mass() - 1.0).abs() < 1e-9);
        assert!((sb.mean_transmitter() - 1.6).abs() < 1e-9);
        let zero = JointDegreeLaw::new(DegreeLaw::from_degrees([0, 0]).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        assert!(matches!(size_biased_law(&zero), Err(Error::DegenerateLaw(_))));
        let zipf = JointDegreeLaw::new(DegreeLaw::power_law(2.5).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        assert!(matches!(size_biased_law(&zipf), Err(Error::Unsupported(_))));
    }

    #[test]
    fn branching_examples() {
        let c = branching_crosscheck(&poisson_bern(2.0, 0.8)).unwrap();
        assert!(c.supercritical && c.viral_condition);
        assert!(c.consistent(1e-9), "{c:?}");
        let c = branching_crosscheck(&poisson_bern(2.0, 0.0)).unwrap();
        assert!(!c.supercritical);
        assert_eq!(c.alpha_bar_bp, 0.0);
        assert!(c.consistent(1e-9));
    }

    #[test]
    fn certain_survival_has_zero_extinction() {
        let law = JointDegreeLaw::new(DegreeLaw::from_degrees([2, 3, 4]).unwrap(), TransmissionModel::Bernoulli { p: 1.0 }).unwrap();
        let c = branching_crosscheck(&law).unwrap();
        assert_eq!(c.p_ext, 0.0);
        assert_eq!(c.alpha_bar_bp, 1.0);
        assert!(c.consistent(1e-9), "{c:?}");
    }
}
