use std::collections::VecDeque;

use proptest::prelude::*;
use viralcm::analytic::{analyze, build_genfns};
use viralcm::diffusion::{all_reach, influenced_set, reach_sizes, reverse_reach, sampled_reach, DEFAULT_FLOOR, DEFAULT_GAMMA};
use viralcm::graph::{EnhancedGraph, InfluenceDigraph};
use viralcm::population::{DegreeLaw, JointDegreeLaw, TransmissionModel};
use viralcm::sample::DegreeSample;

fn poisson_bernoulli(lambda: f64, p: f64) -> JointDegreeLaw {
    JointDegreeLaw::new(DegreeLaw::poisson(lambda).unwrap(), TransmissionModel::Bernoulli { p }).unwrap()
}

fn build(law: &JointDegreeLaw, n: usize, seed: u64) -> EnhancedGraph {
    EnhancedGraph::build(&law.sample(n, seed).unwrap(), seed).unwrap()
}

/// Reflexive transitive closure by repeated boolean matrix squaring.
fn closure(g: &InfluenceDigraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut m = vec![vec![false; n]; n];
    for (u, row) in m.iter_mut().enumerate() {
        row[u] = true;
        for &v in g.successors(u) {
            row[v as usize] = true;
        }
    }
    let mut len = 1;
    while len < n {
        let mut next = m.clone();
        for i in 0..n {
            for k in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        next[i][j] |= m[k][j];
                    }
                }
            }
        }
        m = next;
        len *= 2;
    }
    m
}

fn naive_reach(g: &InfluenceDigraph, s: usize) -> usize {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    let mut count = 1;
    while let Some(u) = q.pop_front() {
        for &v in g.successors(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                q.push_back(v as usize);
            }
        }
    }
    count
}

fn small_sample() -> impl Strategy<Value = DegreeSample> {
    proptest::collection::vec((0u32..5, 0u32..5), 1..=12).prop_map(|v| {
        DegreeSample::from_tuples(v.into_iter().map(|(a, b)| (a.max(b), a.min(b)))).unwrap()
    })
}

#[test]
fn matching_is_uniform_over_three_pairings() {
    let s = DegreeSample::from_tuples([(1, 1); 4]).unwrap();
    let mut freq = [0usize; 3];
    for seed in 0..2000 {
        let g = EnhancedGraph::build(&s, seed).unwrap();
        let partner = g
            .matching()
            .iter()
            .find_map(|&(a, b)| match (g.owner(a), g.owner(b)) {
                (0, v) | (v, 0) => Some(v),
                _ => None,
            })
            .unwrap();
        freq[partner - 1] += 1;
    }
    for f in freq {
        assert!((f as f64 / 2000.0 - 1.0 / 3.0).abs() < 0.05, "{freq:?}");
    }
}

#[test]
fn arc_count_tracks_transmitter_mean() {
    let g = build(&poisson_bernoulli(2.0, 0.8), 1000, 5);
    let per_node = g.digraph().arc_count() as f64 / 1000.0;
    assert!((per_node - 1.6).abs() < 0.15, "{per_node}");
}

#[test]
fn subcritical_reach_stays_small() {
    // λp = 0.6: no node reaches more than a few percent of the graph. The
    // default floor (1% of n) still admits the largest small components.
    let law = poisson_bernoulli(2.0, 0.3);
    for seed in 0..5 {
        let g = build(&law, 1000, seed);
        let o = all_reach(g.digraph(), DEFAULT_GAMMA, DEFAULT_FLOOR).unwrap();
        assert!(*o.reach_sizes.iter().max().unwrap() < 50);
        assert!(o.alpha_hat_sim < 0.05);
        assert!(all_reach(g.digraph(), DEFAULT_GAMMA, 0.05).unwrap().good_pioneers.is_empty());
    }
}

#[test]
fn supercritical_matches_analytic() {
    let law = poisson_bernoulli(2.0, 0.8);
    let alpha = analyze(&build_genfns(&law)).unwrap().alpha;
    for seed in 0..3 {
        let g = build(&law, 1000, seed);
        let o = all_reach(g.digraph(), DEFAULT_GAMMA, DEFAULT_FLOOR).unwrap();
        assert!((o.alpha_hat_sim - alpha).abs() < 0.1, "{} vs {alpha}", o.alpha_hat_sim);
        assert!(o.good_reach_cv().unwrap() < 0.1);
        // a member of the giant strongly connected part is reached by every good pioneer
        let frac = o.good_pioneers.iter().take(20).map(|&v| reverse_reach(g.digraph(), v).len()).max().unwrap() as f64 / 1000.0;
        assert!((frac - alpha).abs() < 0.1, "{frac} vs {alpha}");
    }
}

#[test]
fn classification_insensitive_to_gamma() {
    let g = build(&poisson_bernoulli(2.0, 0.8), 1000, 9);
    let reference = all_reach(g.digraph(), 0.5, DEFAULT_FLOOR).unwrap().good_pioneers;
    for gamma in [0.3, 0.4, 0.6, 0.7, 0.8, 0.9] {
        assert_eq!(all_reach(g.digraph(), gamma, DEFAULT_FLOOR).unwrap().good_pioneers, reference);
    }
}

#[test]
fn no_transmission_means_unit_reach() {
    let g = build(&poisson_bernoulli(2.0, 0.0), 500, 1);
    assert!(reach_sizes(g.digraph()).iter().all(|&r| r == 1));
}

#[test]
fn condensation_matches_naive_search() {
    for (i, &(lambda, p, n)) in [(2.0, 0.8, 2000), (3.0, 0.4, 1500), (1.5, 1.0, 800), (4.0, 0.2, 2000)].iter().enumerate() {
        let g = build(&poisson_bernoulli(lambda, p), n, i as u64);
        let fast = reach_sizes(g.digraph());
        for (v, &r) in fast.iter().enumerate() {
            assert_eq!(r as usize, naive_reach(g.digraph(), v));
        }
    }
}

#[test]
fn sampled_mode_brackets_exact_fraction() {
    let g = build(&poisson_bernoulli(2.0, 0.8), 3000, 4);
    let exact = all_reach(g.digraph(), DEFAULT_GAMMA, DEFAULT_FLOOR).unwrap();
    let s = sampled_reach(g.digraph(), 400, 8, DEFAULT_GAMMA, DEFAULT_FLOOR).unwrap();
    let (lo, hi) = s.alpha_bar_ci;
    assert!(lo <= exact.alpha_bar_hat_sim && exact.alpha_bar_hat_sim <= hi, "{lo} {hi} {}", exact.alpha_bar_hat_sim);
    assert!((s.alpha_hat_sim - exact.alpha_hat_sim).abs() < 0.01);
}

proptest! {
    #[test]
    fn matching_is_perfect(sample in small_sample(), seed in any::<u64>()) {
        let g = EnhancedGraph::build(&sample, seed).unwrap();
        let mut seen = vec![0u8; g.half_edge_count()];
        for &(a, b) in g.matching() {
            seen[a] += 1;
            seen[b] += 1;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        let c = g.degree_checksums();
        prop_assert_eq!(c.half_edges, 2 * c.edges);
        prop_assert_eq!(c.sum_d, sample.iter().map(|p| p.degree as u64).sum::<u64>());
        prop_assert_eq!(c.sum_dt, sample.iter().map(|p| p.transmitter as u64).sum::<u64>());
        prop_assert_eq!(c.parity_fixed, c.sum_d % 2 == 1);
        prop_assert_eq!(g.digraph().arc_count() as u64, c.sum_dt);
    }

    #[test]
    fn arcs_reconstruct_from_matching(sample in small_sample(), seed in any::<u64>()) {
        let g = EnhancedGraph::build(&sample, seed).unwrap();
        let mut want = Vec::new();
        for &(a, b) in g.matching() {
            for (x, y) in [(a, b), (b, a)] {
                if g.is_transmitter(x) {
                    want.push((g.owner(x) as u32, g.owner(y) as u32));
                }
            }
        }
        let mut got: Vec<_> = g.digraph().arcs().collect();
        want.sort_unstable();
        got.sort_unstable();
        prop_assert_eq!(got, want);
        let rebuilt = EnhancedGraph::build(&sample, seed).unwrap();
        prop_assert_eq!(rebuilt.matching(), g.matching());
    }

    #[test]
    fn reach_sets_match_closure(sample in small_sample(), seed in any::<u64>()) {
        let g = EnhancedGraph::build(&sample, seed).unwrap();
        let d = g.digraph();
        let m = closure(d);
        let sizes = reach_sizes(d);
        for u in 0..d.n() {
            let fwd: Vec<usize> = (0..d.n()).filter(|&v| m[u][v]).collect();
            let back: Vec<usize> = (0..d.n()).filter(|&v| m[v][u]).collect();
            prop_assert_eq!(&influenced_set(d, u), &fwd);
            prop_assert_eq!(&reverse_reach(d, u), &back);
            prop_assert_eq!(sizes[u] as usize, fwd.len());
        }
    }

    #[test]
    fn reachability_duality(n in 1usize..=200, density in 0.0..3.0f64, seed in any::<u64>()) {
        let law = JointDegreeLaw::new(DegreeLaw::poisson(density.max(0.05)).unwrap(), TransmissionModel::Bernoulli { p: 0.6 }).unwrap();
        let g = EnhancedGraph::build(&law.sample(n, seed).unwrap(), seed).unwrap();
        let d = g.digraph();
        let fwd: Vec<Vec<usize>> = (0..n).map(|u| influenced_set(d, u)).collect();
        for v in 0..n {
            let back = reverse_reach(d, v);
            let want: Vec<usize> = (0..n).filter(|&u| fwd[u].binary_search(&v).is_ok()).collect();
            prop_assert_eq!(back, want);
        }
    }

    #[test]
    fn adding_an_arc_never_shrinks_reach(sample in small_sample(), seed in any::<u64>(), extra in (0u32..12, 0u32..12)) {
        let g = EnhancedGraph::build(&sample, seed).unwrap();
        let n = g.n() as u32;
        let mut arcs: Vec<_> = g.digraph().arcs().collect();
        arcs.push((extra.0 % n, extra.1 % n));
        let bigger = InfluenceDigraph::from_arcs(n as usize, &arcs);
        let before = reach_sizes(g.digraph());
        let after = reach_sizes(&bigger);
        for u in 0..n as usize {
            prop_assert!(after[u] >= before[u]);
            let old = influenced_set(g.digraph(), u);
            let new = influenced_set(&bigger, u);
            prop_assert!(old.iter().all(|v| new.binary_search(v).is_ok()));
        }
    }
}
