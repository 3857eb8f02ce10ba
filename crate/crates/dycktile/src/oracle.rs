//! Brute-force ground truth on small graphs: exact enumeration of perfect
//! matchings, double-dimer superpositions, and groves.  Everything here is
//! exact rational arithmetic; these enumerators back the validation suite and
//! the `oracle` CLI subcommand, not the production formulas.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::catalan::NoncrossingPairing;
use crate::config::Caps;
use crate::ddimer::{PairingDistribution, XMatrix};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// A perfect matching given by edge indices, with its weight product.
#[derive(Debug, Clone)]
pub struct Matching {
    pub edge_indices: Vec<usize>,
    pub weight: BigRational,
}

/// All perfect matchings of the graph minus `removed`, with weights.
pub fn enumerate_matchings(
    graph: &WeightedGraph,
    removed: &[usize],
    caps: &Caps,
) -> Result<Vec<Matching>> {
    if graph.edges().len() > caps.max_oracle_edges {
        return Err(Error::CapExceeded {
            what: "edges",
            value: graph.edges().len(),
            cap: caps.max_oracle_edges,
        });
    }
    let n = graph.vertex_count();
    let mut alive = vec![true; n];
    for &v in removed {
        if v >= n {
            return Err(Error::InvalidGraph(format!("removed vertex {v} out of range")));
        }
        alive[v] = false;
    }
    let mut out = Vec::new();
    if alive.iter().filter(|a| **a).count() % 2 != 0 {
        return Ok(out); // odd vertex count: no perfect matching
    }
    let adj = graph.adjacency();
    let mut matched = vec![false; n];
    let mut chosen = Vec::new();
    let one = BigRational::from(BigInt::from(1));
    fn rec(
        graph: &WeightedGraph,
        adj: &[Vec<(usize, usize)>],
        alive: &[bool],
        matched: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        weight: &BigRational,
        out: &mut Vec<Matching>,
    ) {
        let Some(v) = (0..matched.len()).find(|&v| alive[v] && !matched[v]) else {
            out.push(Matching { edge_indices: chosen.clone(), weight: weight.clone() });
            return;
        };
        matched[v] = true;
        for &(u, e) in &adj[v] {
            if alive[u] && !matched[u] {
                matched[u] = true;
                chosen.push(e);
                let w = weight * &graph.edges()[e].2;
                rec(graph, adj, alive, matched, chosen, &w, out);
                chosen.pop();
                matched[u] = false;
            }
        }
        matched[v] = false;
    }
    rec(graph, &adj, &alive, &mut matched, &mut chosen, &one, &mut out);
    Ok(out)
}

/// Weighted sum of the perfect matchings of `graph` minus `removed`.
pub fn matching_sum(graph: &WeightedGraph, removed: &[usize], caps: &Caps) -> Result<BigRational> {
    Ok(enumerate_matchings(graph, removed, caps)?
        .into_iter()
        .map(|m| m.weight)
        .sum())
}

/// Exact boundary measurements from the dimer oracle: `X_(i,j) = Z_(i,j)/Z`.
pub fn x_matrix(graph: &WeightedGraph, caps: &Caps) -> Result<XMatrix> {
    graph.check_alternating_nodes()?;
    let nodes = graph.nodes();
    let n2 = nodes.len();
    if n2 == 0 || n2 % 2 != 0 {
        return Err(Error::InvalidGraph("need a positive even number of nodes".into()));
    }
    let z = matching_sum(graph, &[], caps)?;
    if z.is_zero() {
        return Err(Error::InvalidGraph("graph has no perfect matching".into()));
    }
    let mut entries = BTreeMap::new();
    for i in (1..=n2).step_by(2) {
        for j in (2..=n2).step_by(2) {
            let zij = matching_sum(graph, &[nodes[i - 1], nodes[j - 1]], caps)?;
            entries.insert((i, j), zij / &z);
        }
    }
    XMatrix::new(n2 / 2, entries)
}

/// One double-dimer configuration: a matching of the full graph superposed
/// with a matching of the graph minus its nodes, decomposed into loops,
/// doubled edges, and node-to-node chains.
#[derive(Debug, Clone)]
pub struct DoubleDimerConfig {
    pub matching_full: Vec<usize>,
    pub matching_inner: Vec<usize>,
    pub doubled_edges: Vec<usize>,
    pub loop_count: usize,
    /// Chain endpoints as 1-based node positions.
    pub chains: Vec<(usize, usize)>,
    pub weight: BigRational,
}

impl DoubleDimerConfig {
    /// The chain pairing of the node positions.
    pub fn pairing(&self) -> Result<NoncrossingPairing> {
        NoncrossingPairing::from_pairs(self.chains.len(), &self.chains)
    }
}

/// Decomposes the superposition of a matching of the graph and a matching of
/// the graph minus its nodes.
pub fn superpose(
    graph: &WeightedGraph,
    full: &Matching,
    inner: &Matching,
) -> Result<DoubleDimerConfig> {
    let n = graph.vertex_count();
    let nodes = graph.nodes();
    // partner arrays per layer
    let mut next = vec![[usize::MAX; 2]; n];
    for (layer, m) in [(0usize, full), (1usize, inner)] {
        for &e in &m.edge_indices {
            let (u, v, _) = &graph.edges()[e];
            next[*u][layer] = *v;
            next[*v][layer] = *u;
        }
    }
    let doubled: Vec<usize> = full
        .edge_indices
        .iter()
        .copied()
        .filter(|e| inner.edge_indices.contains(e))
        .collect();
    let mut visited = vec![false; n];
    // walk chains from each node: start in the full matching (nodes are
    // unmatched in the inner one), alternate layers until another node
    let node_pos: BTreeMap<usize, usize> =
        nodes.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let mut chains = Vec::new();
    for (pos, &start) in nodes.iter().enumerate() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut layer = 0;
        let mut cur = start;
        loop {
            let nxt = next[cur][layer];
            if nxt == usize::MAX {
                return Err(Error::InvalidGraph(
                    "superposition chain ended away from a node".into(),
                ));
            }
            visited[nxt] = true;
            cur = nxt;
            if node_pos.contains_key(&cur) && next[cur][1] == usize::MAX {
                break;
            }
            layer = 1 - layer;
        }
        let a = pos + 1;
        let b = node_pos[&cur];
        if a != b {
            chains.push((a.min(b), a.max(b)));
        }
    }
    chains.sort();
    chains.dedup();
    // classify the remaining doubly matched vertices: doubled edges are the
    // 2-cycles, everything else closes into loops
    let mut loop_count = 0;
    for v in 0..n {
        if visited[v] || next[v][0] == usize::MAX || next[v][1] == usize::MAX {
            continue;
        }
        if next[v][0] == next[v][1] {
            visited[v] = true;
            visited[next[v][0]] = true;
            continue;
        }
        loop_count += 1;
        let mut layer = 0;
        let mut cur = v;
        while !visited[cur] {
            visited[cur] = true;
            cur = next[cur][layer];
            layer = 1 - layer;
        }
    }
    Ok(DoubleDimerConfig {
        matching_full: full.edge_indices.clone(),
        matching_inner: inner.edge_indices.clone(),
        doubled_edges: doubled,
        loop_count,
        chains,
        weight: &full.weight * &inner.weight,
    })
}

/// Brute-force double-dimer pairing distribution.
pub fn double_dimer_distribution(graph: &WeightedGraph, caps: &Caps) -> Result<PairingDistribution> {
    graph.check_alternating_nodes()?;
    let full_matchings = enumerate_matchings(graph, &[], caps)?;
    let inner_matchings = enumerate_matchings(graph, graph.nodes(), caps)?;
    if full_matchings.is_empty() || inner_matchings.is_empty() {
        return Err(Error::InvalidGraph("no double-dimer configurations".into()));
    }
    let mut weights: BTreeMap<NoncrossingPairing, BigRational> = BTreeMap::new();
    let mut total = BigRational::zero();
    for f in &full_matchings {
        for i in &inner_matchings {
            let config = superpose(graph, f, i)?;
            let pairing = config.pairing()?;
            total += &config.weight;
            *weights.entry(pairing).or_insert_with(BigRational::zero) += &config.weight;
        }
    }
    let probabilities: BTreeMap<NoncrossingPairing, BigRational> =
        weights.into_iter().map(|(k, w)| (k, w / &total)).collect();
    Ok(PairingDistribution { probabilities, all_nonnegative: true })
}

// ---- Groves ----

/// A set partition of the 1-based node positions, blocks and entries sorted.
pub type NodePartition = Vec<Vec<usize>>;

pub fn partition_of_pairing(pairing: &NoncrossingPairing) -> NodePartition {
    pairing.pairs().iter().map(|&(a, b)| vec![a, b]).collect()
}

pub fn singleton_partition(n_nodes: usize) -> NodePartition {
    (1..=n_nodes).map(|i| vec![i]).collect()
}

/// Weighted sums of groves, grouped by the node partition they induce.  A
/// grove is a spanning forest in which every tree contains at least one node.
pub fn grove_partition_sums(
    graph: &WeightedGraph,
    caps: &Caps,
) -> Result<BTreeMap<NodePartition, BigRational>> {
    if graph.vertex_count() > caps.max_oracle_vertices {
        return Err(Error::CapExceeded {
            what: "vertices",
            value: graph.vertex_count(),
            cap: caps.max_oracle_vertices,
        });
    }
    let n = graph.vertex_count();
    let nodes = graph.nodes();
    let mut out: BTreeMap<NodePartition, BigRational> = BTreeMap::new();
    let edges = graph.edges();
    // recursive include/exclude with a cloneable union-find
    fn root(parent: &[usize], mut v: usize) -> usize {
        while parent[v] != v {
            v = parent[v];
        }
        v
    }
    struct Ctx<'a> {
        edges: &'a [(usize, usize, BigRational)],
        nodes: &'a [usize],
        n: usize,
    }
    fn rec(
        ctx: &Ctx,
        idx: usize,
        parent: Vec<usize>,
        weight: BigRational,
        out: &mut BTreeMap<NodePartition, BigRational>,
    ) {
        if idx == ctx.edges.len() {
            // every component must contain a node
            let mut has_node = vec![false; ctx.n];
            for &v in ctx.nodes {
                has_node[root(&parent, v)] = true;
            }
            for v in 0..ctx.n {
                if !has_node[root(&parent, v)] {
                    return;
                }
            }
            let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (pos, &v) in ctx.nodes.iter().enumerate() {
                blocks.entry(root(&parent, v)).or_default().push(pos + 1);
            }
            let partition: NodePartition = {
                let mut p: Vec<Vec<usize>> = blocks.into_values().collect();
                p.sort();
                p
            };
            *out.entry(partition).or_insert_with(BigRational::zero) += weight;
            return;
        }
        let (u, v, w) = &ctx.edges[idx];
        // exclude
        rec(ctx, idx + 1, parent.clone(), weight.clone(), out);
        // include when acyclic
        let ru = root(&parent, *u);
        let rv = root(&parent, *v);
        if ru != rv {
            let mut next = parent;
            next[ru] = rv;
            rec(ctx, idx + 1, next, weight * w, out);
        }
    }
    let ctx = Ctx { edges, nodes, n };
    let parent: Vec<usize> = (0..n).collect();
    rec(&ctx, 0, parent, BigRational::from(BigInt::from(1)), &mut out);
    Ok(out)
}

/// Weighted sum of groves realizing exactly the given node partition.
pub fn grove_partition(
    graph: &WeightedGraph,
    partition: &NodePartition,
    caps: &Caps,
) -> Result<BigRational> {
    let mut key = partition.clone();
    for block in &mut key {
        block.sort();
    }
    key.sort();
    Ok(grove_partition_sums(graph, caps)?
        .get(&key)
        .cloned()
        .unwrap_or_else(BigRational::zero))
}
