//! Max-flow/min-cut on reduced graphs, seed terminals, and projection of the
//! cut back onto hypergraph vertices.

mod hlpp;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::reduction::{reduce_hypergraph, Capacity, Caps, EdgeStrategy, FlowNetwork, NodeKind, ReductionMode};
use crate::splitting::{check_spec_count, hypergraph_cut_indicator, SplittingSpec};

/// Largest graph accepted by [`brute_force_min_cut`].
pub const BRUTE_FORCE_NODES: usize = 22;

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    /// Membership of each node in the source side.
    pub source_side: Vec<bool>,
    pub value: Capacity,
    /// Max-flow value; equals `value` when finite.
    pub flow_value: f64,
}

impl CutResult {
    pub fn source_nodes(&self) -> Vec<usize> {
        (0..self.source_side.len()).filter(|&v| self.source_side[v]).collect()
    }

    fn infinite(n: usize, s: usize) -> Self {
        let mut side = vec![false; n];
        side[s] = true;
        CutResult {
            source_side: side,
            value: Capacity::Infinite,
            flow_value: f64::INFINITY,
        }
    }
}

fn check_terminals(g: &FlowNetwork, s: usize, t: usize) -> Result<()> {
    for v in [s, t] {
        if v >= g.node_count() {
            return Err(Error::NodeOutOfRange(v));
        }
    }
    if s == t {
        return Err(Error::SameTerminal(s));
    }
    Ok(())
}

/// Minimum `s`-`t` cut by highest-label push-relabel. The source side is the
/// set of nodes reachable from `s` in the final residual graph, which is the
/// smallest minimum cut.
pub fn max_flow_min_cut(g: &FlowNetwork, s: usize, t: usize) -> Result<CutResult> {
    check_terminals(g, s, t)?;
    if hlpp::infinite_path(g, s, t) {
        return Ok(CutResult::infinite(g.node_count(), s));
    }
    let mut solver = hlpp::Hlpp::new(g, s, t);
    let flow = solver.run();
    let side = solver.source_side();
    let value = g.cut_value(&side);
    Ok(CutResult {
        source_side: side,
        value: Capacity::Finite(value),
        flow_value: flow,
    })
}

/// Exhaustive minimum over all `2^(n−2)` bipartitions. Among minimum cuts the
/// one with the fewest source-side nodes is returned.
pub fn brute_force_min_cut(g: &FlowNetwork, s: usize, t: usize) -> Result<CutResult> {
    check_terminals(g, s, t)?;
    let n = g.node_count();
    if n > BRUTE_FORCE_NODES {
        return Err(Error::GraphTooLarge(n));
    }
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut side = vec![false; n];
    let mut best: Option<(f64, u32, u64)> = None;
    for mask in 0..(1u64 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            side[v] = mask >> i & 1 == 1;
        }
        side[s] = true;
        let value = g.cut_value(&side);
        let size = mask.count_ones();
        let better = match best {
            None => true,
            Some((bv, bs, _)) => value < bv || (value == bv && size < bs),
        };
        if better {
            best = Some((value, size, mask));
        }
    }
    let (value, _, mask) = best.unwrap();
    if value.is_infinite() {
        return Ok(CutResult::infinite(n, s));
    }
    let mut side = vec![false; n];
    side[s] = true;
    for (i, &v) in free.iter().enumerate() {
        side[v] = mask >> i & 1 == 1;
    }
    Ok(CutResult {
        source_side: side,
        value: Capacity::Finite(value),
        flow_value: value,
    })
}

/// Copy of `g` with a super-source and super-sink joined to the seeds by
/// infinite arcs. Returns the new graph and the terminal indices.
pub fn attach_terminals(g: &FlowNetwork, sources: &[usize], sinks: &[usize]) -> Result<(FlowNetwork, usize, usize)> {
    if sources.is_empty() {
        return Err(Error::EmptySeeds("source"));
    }
    if sinks.is_empty() {
        return Err(Error::EmptySeeds("sink"));
    }
    for &v in sources.iter().chain(sinks) {
        if v >= g.node_count() {
            return Err(Error::NodeOutOfRange(v));
        }
    }
    if let Some(&v) = sources.iter().find(|v| sinks.contains(v)) {
        return Err(Error::OverlappingSeeds(v));
    }
    let mut out = g.clone();
    let s = out.add_node(NodeKind::Source);
    let t = out.add_node(NodeKind::Sink);
    for &v in sources {
        out.add_arc(s, v, Capacity::Infinite)?;
    }
    for &v in sinks {
        out.add_arc(v, t, Capacity::Infinite)?;
    }
    Ok((out, s, t))
}

/// A hypergraph bipartition and its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedCut {
    /// Source-side vertices.
    pub set: BTreeSet<VertexId>,
    /// Value of the graph cut; in exact mode this equals the hypergraph cut.
    pub value: f64,
    pub strategies: Vec<EdgeStrategy>,
    pub nodes: usize,
    pub arcs: usize,
}

fn check_seeds(h: &Hypergraph, sources: &BTreeSet<VertexId>, sinks: &BTreeSet<VertexId>) -> Result<()> {
    for &v in sources.iter().chain(sinks) {
        if v >= h.vertex_count() {
            return Err(Error::VertexOutOfRange(v));
        }
    }
    Ok(())
}

/// Minimum hypergraph cut separating `sources` from `sinks`.
pub fn hypergraph_min_st_cut(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
    mode: ReductionMode,
    caps: &Caps,
) -> Result<ProjectedCut> {
    check_seeds(h, sources, sinks)?;
    let reduction = reduce_hypergraph(h, specs, mode, caps)?;
    let (set, value) = solve_seeded(&reduction.network, h.vertex_count(), sources, sinks)?;
    Ok(ProjectedCut {
        set,
        value,
        strategies: reduction.strategies,
        nodes: reduction.network.node_count() + 2,
        arcs: reduction.network.arc_count() + sources.len() + sinks.len(),
    })
}

/// Seeded minimum cut on an already reduced network whose first
/// `vertex_count` nodes are the hypergraph vertices in order.
pub fn solve_seeded(
    network: &FlowNetwork,
    vertex_count: usize,
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
) -> Result<(BTreeSet<VertexId>, f64)> {
    let src: Vec<usize> = sources.iter().copied().collect();
    let snk: Vec<usize> = sinks.iter().copied().collect();
    let (g, s, t) = attach_terminals(network, &src, &snk)?;
    let cut = max_flow_min_cut(&g, s, t)?;
    let value = match cut.value {
        Capacity::Finite(v) => v,
        Capacity::Infinite => return Err(Error::InfeasibleSeeds),
    };
    let set = (0..vertex_count).filter(|&v| cut.source_side[v]).collect();
    Ok((set, value))
}

/// Exhaustive minimum of the hypergraph cut over seed-respecting
/// bipartitions (at most 22 free vertices). Ties go to the smallest set.
pub fn brute_force_hypergraph_st_cut(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
) -> Result<(BTreeSet<VertexId>, f64)> {
    check_spec_count(h, specs)?;
    check_seeds(h, sources, sinks)?;
    if sources.is_empty() {
        return Err(Error::EmptySeeds("source"));
    }
    if sinks.is_empty() {
        return Err(Error::EmptySeeds("sink"));
    }
    if let Some(&v) = sources.intersection(sinks).next() {
        return Err(Error::OverlappingSeeds(v));
    }
    let free: Vec<VertexId> = (0..h.vertex_count())
        .filter(|v| !sources.contains(v) && !sinks.contains(v))
        .collect();
    if free.len() > BRUTE_FORCE_NODES {
        return Err(Error::GraphTooLarge(free.len()));
    }
    let mut indicator = vec![false; h.vertex_count()];
    for &v in sources {
        indicator[v] = true;
    }
    let mut best: Option<(f64, u32, u64)> = None;
    for mask in 0..(1u64 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            indicator[v] = mask >> i & 1 == 1;
        }
        let value = hypergraph_cut_indicator(h, specs, &indicator)?;
        let size = mask.count_ones();
        if best.map_or(true, |(bv, bs, _)| value < bv || (value == bv && size < bs)) {
            best = Some((value, size, mask));
        }
    }
    let (value, _, mask) = best.unwrap();
    let mut set: BTreeSet<VertexId> = sources.clone();
    set.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
    Ok((set, value))
}
