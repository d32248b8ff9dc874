//! Enhanced configuration model: half-edges flagged transmitter or receiver,
//! matched uniformly at random, and the influence digraph they induce.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sample::DegreeSample;

/// Directed graph in compressed sparse row form, with its reverse.
/// Self-loops and parallel arcs are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceDigraph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

impl InfluenceDigraph {
    /// Builds from an arc list `(u, v)` meaning `u` influences `v`.
    ///
    /// # Panics
    /// If an endpoint is not below `n`.
    pub fn from_arcs(n: usize, arcs: &[(u32, u32)]) -> Self {
        let (out_offsets, out_targets) = csr(n, arcs.iter().copied());
        let (in_offsets, in_sources) = csr(n, arcs.iter().map(|&(u, v)| (v, u)));
        Self { n, out_offsets, out_targets, in_offsets, in_sources }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn successors(&self, u: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    pub fn predecessors(&self, v: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |u| self.successors(u).iter().map(move |&v| (u as u32, v)))
    }
}

fn csr(n: usize, arcs: impl Iterator<Item = (u32, u32)> + Clone) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; n + 1];
    for (u, _) in arcs.clone() {
        assert!((u as usize) < n, "arc endpoint {u} out of range for {n} nodes");
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut targets = vec![0u32; offsets[n]];
    for (u, v) in arcs {
        assert!((v as usize) < n, "arc endpoint {v} out of range for {n} nodes");
        targets[fill[u as usize]] = v;
        fill[u as usize] += 1;
    }
    (offsets, targets)
}

/// Totals of a built graph, for comparison with its input sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeChecksums {
    pub sum_d: u64,
    pub sum_dt: u64,
    pub parity_fixed: bool,
    pub half_edges: u64,
    pub edges: u64,
}

/// A realized enhanced configuration model.
///
/// Half-edges of node `v` occupy indices `offsets[v]..offsets[v + 1]`, its
/// transmitter half-edges first.
#[derive(Debug, Clone)]
pub struct EnhancedGraph {
    seed: u64,
    transmitters: Vec<u32>,
    receivers: Vec<u32>,
    offsets: Vec<usize>,
    owner: Vec<u32>,
    matching: Vec<(usize, usize)>,
    parity_node: Option<usize>,
    digraph: InfluenceDigraph,
}

impl EnhancedGraph {
    /// Attaches the sampled half-edges to `sample.len()` nodes and pairs them
    /// by a uniform random permutation.
    ///
    /// An odd half-edge total gets one extra receiver half-edge on a node
    /// drawn uniformly; see [`EnhancedGraph::parity_node`].
    pub fn build(sample: &DegreeSample, seed: u64) -> Result<Self> {
        let n = sample.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let transmitters: Vec<u32> = sample.iter().map(|p| p.transmitter).collect();
        let mut receivers: Vec<u32> = sample.iter().map(|p| p.receiver()).collect();
        let total: u64 = sample.iter().map(|p| p.degree as u64).sum();
        let parity_node = if total % 2 == 1 {
            let v = rng.random_range(0..n);
            receivers[v] += 1;
            Some(v)
        } else {
            None
        };

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for v in 0..n {
            offsets.push(offsets[v] + (transmitters[v] + receivers[v]) as usize);
        }
        let h = offsets[n];
        let mut owner = Vec::with_capacity(h);
        for v in 0..n {
            owner.extend(std::iter::repeat_n(v as u32, offsets[v + 1] - offsets[v]));
        }

        let mut perm: Vec<usize> = (0..h).collect();
        perm.shuffle(&mut rng);
        let matching: Vec<(usize, usize)> = perm.chunks_exact(2).map(|c| (c[0], c[1])).collect();

        let is_transmitter = |e: usize| {
            let v = owner[e] as usize;
            e - offsets[v] < transmitters[v] as usize
        };
        let mut arcs = Vec::with_capacity(transmitters.iter().map(|&t| t as usize).sum());
        for &(a, b) in &matching {
            if is_transmitter(a) {
                arcs.push((owner[a], owner[b]));
            }
            if is_transmitter(b) {
                arcs.push((owner[b], owner[a]));
            }
        }
        let digraph = InfluenceDigraph::from_arcs(n, &arcs);
        Ok(Self { seed, transmitters, receivers, offsets, owner, matching, parity_node, digraph })
    }

    pub fn n(&self) -> usize {
        self.transmitters.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn digraph(&self) -> &InfluenceDigraph {
        &self.digraph
    }

    /// Matched half-edge pairs, by half-edge index.
    pub fn matching(&self) -> &[(usize, usize)] {
        &self.matching
    }

    pub fn half_edge_count(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, half_edge: usize) -> usize {
        self.owner[half_edge] as usize
    }

    pub fn is_transmitter(&self, half_edge: usize) -> bool {
        let v = self.owner(half_edge);
        half_edge - self.offsets[v] < self.transmitters[v] as usize
    }

    /// `(receiver, transmitter)` half-edge counts of `v` after parity repair.
    pub fn half_edges(&self, v: usize) -> (u32, u32) {
        (self.receivers[v], self.transmitters[v])
    }

    /// Node that received the parity-repair half-edge, if any.
    pub fn parity_node(&self) -> Option<usize> {
        self.parity_node
    }

    pub fn parity_fixed(&self) -> bool {
        self.parity_node.is_some()
    }

    pub fn degree_checksums(&self) -> DegreeChecksums {
        let sum_dt: u64 = self.transmitters.iter().map(|&t| t as u64).sum();
        let sum_dr: u64 = self.receivers.iter().map(|&r| r as u64).sum();
        let repaired = self.parity_fixed() as u64;
        DegreeChecksums {
            sum_d: sum_dt + sum_dr - repaired,
            sum_dt,
            parity_fixed: self.parity_fixed(),
            half_edges: self.owner.len() as u64,
            edges: self.matching.len() as u64,
        }
    }

    /// Writes a JSON header line followed by one `u v` line per arc.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Header {
            n: usize,
            seed: u64,
            parity_fixed: bool,
        }
        let header = Header { n: self.n(), seed: self.seed, parity_fixed: self.parity_fixed() };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(std::io::Error::other)?)?;
        for (u, v) in self.digraph.arcs() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}
