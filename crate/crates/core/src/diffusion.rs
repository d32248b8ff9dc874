//! Forward influence and reverse acknowledgement on a realized graph.
//!
//! Exploring half-edges one at a time reveals exactly the uniform matching,
//! so the set a pioneer eventually influences is its forward-reachable set
//! in the influence digraph, and the pioneers that reach a node form its
//! backward-reachable set. Both are computed on the static digraph.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::InfluenceDigraph;

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_FLOOR: f64 = 0.01;

fn traverse<'a>(n: usize, start: usize, next: impl Fn(usize) -> &'a [u32]) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut out = vec![start];
    while let Some(u) = queue.pop_front() {
        for &v in next(u) {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                out.push(v);
                queue.push_back(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Nodes influenced by `pioneer`, itself included, in increasing order.
///
/// # Panics
/// If `pioneer` is not a node.
pub fn influenced_set(g: &InfluenceDigraph, pioneer: usize) -> Vec<usize> {
    traverse(g.n(), pioneer, |u| g.successors(u))
}

/// Pioneers whose influence reaches `target`, itself included, in
/// increasing order.
///
/// # Panics
/// If `target` is not a node.
pub fn reverse_reach(g: &InfluenceDigraph, target: usize) -> Vec<usize> {
    traverse(g.n(), target, |v| g.predecessors(v))
}

/// Strongly connected components by an iterative Tarjan pass. Returns the
/// component of each node and the component count; components are numbered
/// in reverse topological order (every arc goes to an equal or lower id).
pub fn strongly_connected_components(g: &InfluenceDigraph) -> (Vec<u32>, usize) {
    const UNSEEN: u32 = u32::MAX;
    let n = g.n();
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut next_order = 0u32;
    let mut count = 0usize;

    for root in 0..n {
        if order[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        order[root] = next_order;
        low[root] = next_order;
        next_order += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut i)) = calls.last_mut() {
            let succ = g.successors(u);
            if *i < succ.len() {
                let v = succ[*i] as usize;
                *i += 1;
                if order[v] == UNSEEN {
                    order[v] = next_order;
                    low[v] = next_order;
                    next_order += 1;
                    stack.push(v as u32);
                    on_stack[v] = true;
                    calls.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(order[v]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == order[u] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    on_stack[w] = false;
                    comp[w] = count as u32;
                    if w == u {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}

/// Size of every node's influenced set, computed once per strongly
/// connected component on the condensation DAG.
pub fn reach_sizes(g: &InfluenceDigraph) -> Vec<u32> {
    let (comp, count) = strongly_connected_components(g);
    let mut size = vec![0u32; count];
    for &c in &comp {
        size[c as usize] += 1;
    }
    let cond_arcs: Vec<(u32, u32)> =
        g.arcs().map(|(u, v)| (comp[u as usize], comp[v as usize])).filter(|(a, b)| a != b).collect();
    let dag = InfluenceDigraph::from_arcs(count, &cond_arcs);

    let per_comp: Vec<u32> = (0..count)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; count], Vec::<u32>::new()),
            |(mark, stack), c| {
                let stamp = c as u32;
                mark[c] = stamp;
                stack.push(stamp);
                let mut total = 0u32;
                while let Some(x) = stack.pop() {
                    total += size[x as usize];
                    for &y in dag.successors(x as usize) {
                        if mark[y as usize] != stamp {
                            mark[y as usize] = stamp;
                            stack.push(y);
                        }
                    }
                }
                total
            },
        )
        .collect();
    comp.iter().map(|&c| per_comp[c as usize]).collect()
}

/// Good pioneers: nodes whose reach is at least
/// `max(gamma · max reach, floor · n)`.
pub fn classify_good_pioneers(reach: &[u32], gamma: f64, floor: f64) -> Result<Vec<usize>> {
    check_rule(gamma, floor)?;
    let max = reach.iter().copied().max().unwrap_or(0) as f64;
    let cut = (gamma * max).max(floor * reach.len() as f64);
    Ok((0..reach.len()).filter(|&v| reach[v] as f64 >= cut).collect())
}

fn check_rule(gamma: f64, floor: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    if !(0.0..1.0).contains(&floor) {
        return Err(domain(format!("floor must lie in [0, 1), got {floor}")));
    }
    Ok(())
}

/// Reach sizes of every pioneer and the fractions derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionOutcome {
    pub n: usize,
    pub gamma: f64,
    pub floor: f64,
    pub reach_sizes: Vec<u32>,
    pub good_pioneers: Vec<usize>,
    /// Mean reach of the good pioneers over `n`; zero when there are none.
    pub alpha_hat_sim: f64,
    /// Good pioneers over `n`.
    pub alpha_bar_hat_sim: f64,
    /// `(reach / n, node count)` in increasing reach order.
    pub reach_histogram: Vec<(f64, u64)>,
}

impl DiffusionOutcome {
    /// Coefficient of variation of the good pioneers' reach sizes.
    pub fn good_reach_cv(&self) -> Option<f64> {
        if self.good_pioneers.is_empty() {
            return None;
        }
        let k = self.good_pioneers.len() as f64;
        let sizes = || self.good_pioneers.iter().map(|&v| self.reach_sizes[v] as f64);
        let mean = sizes().sum::<f64>() / k;
        let var = sizes().map(|s| (s - mean).powi(2)).sum::<f64>() / k;
        Some(var.sqrt() / mean)
    }
}

/// Exact reach of every node and the good-pioneer classification.
pub fn all_reach(g: &InfluenceDigraph, gamma: f64, floor: f64) -> Result<DiffusionOutcome> {
    let reach_sizes = reach_sizes(g);
    outcome_from_reach(reach_sizes, gamma, floor)
}

/// Classifies precomputed reach sizes.
pub fn outcome_from_reach(reach_sizes: Vec<u32>, gamma: f64, floor: f64) -> Result<DiffusionOutcome> {
    let n = reach_sizes.len();
    let good_pioneers = classify_good_pioneers(&reach_sizes, gamma, floor)?;
    let nf = n.max(1) as f64;
    let alpha_hat_sim = if good_pioneers.is_empty() {
        0.0
    } else {
        good_pioneers.iter().map(|&v| reach_sizes[v] as f64).sum::<f64>() / good_pioneers.len() as f64 / nf
    };
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &reach_sizes {
        *counts.entry(r).or_default() += 1;
    }
    Ok(DiffusionOutcome {
        n,
        gamma,
        floor,
        alpha_bar_hat_sim: good_pioneers.len() as f64 / nf,
        good_pioneers,
        alpha_hat_sim,
        reach_histogram: counts.into_iter().map(|(r, c)| (r as f64 / nf, c)).collect(),
        reach_sizes,
    })
}

/// Estimate from a random subset of pioneers, for graphs too large for
/// exact all-pairs reach.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledOutcome {
    pub n: usize,
    pub pioneers: Vec<usize>,
    pub reach_sizes: Vec<u32>,
    pub good: usize,
    pub alpha_hat_sim: f64,
    pub alpha_bar_hat_sim: f64,
    /// Wilson score interval for the good-pioneer fraction.
    pub alpha_bar_ci: (f64, f64),
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let m = trials as f64;
    let p = successes as f64 / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = z / denom * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Explores from `m` distinct pioneers drawn uniformly; the good-pioneer rule
/// uses the largest sampled reach. The interval uses `z = 1.96`.
pub fn sampled_reach(g: &InfluenceDigraph, m: usize, seed: u64, gamma: f64, floor: f64) -> Result<SampledOutcome> {
    check_rule(gamma, floor)?;
    let n = g.n();
    let m = m.min(n);
    if m == 0 {
        return Err(domain("need at least one pioneer"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pioneers = index::sample(&mut rng, n, m).into_vec();
    pioneers.sort_unstable();
    let reach: Vec<u32> = pioneers.par_iter().map(|&v| influenced_set(g, v).len() as u32).collect();
    let max = reach.iter().copied().max().unwrap_or(0) as f64;
    let cut = (gamma * max).max(floor * n as f64);
    let good: Vec<f64> = reach.iter().filter(|&&r| r as f64 >= cut).map(|&r| r as f64).collect();
    let alpha_hat_sim = if good.is_empty() { 0.0 } else { good.iter().sum::<f64>() / good.len() as f64 / n as f64 };
    Ok(SampledOutcome {
        n,
        good: good.len(),
        alpha_hat_sim,
        alpha_bar_hat_sim: good.len() as f64 / m as f64,
        alpha_bar_ci: wilson_interval(good.len(), m, 1.96),
        pioneers,
        reach_sizes: reach,
    })
}
