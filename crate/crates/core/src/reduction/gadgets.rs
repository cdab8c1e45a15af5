//! Single-hyperedge gadgets and the brute-force gadget-cut oracle.
//!
//! Every gadget network starts with one `Original` node per member of the
//! hyperedge (in member order), followed by its auxiliary nodes.

use std::collections::BTreeSet;

use super::network::{Capacity, FlowNetwork, NodeKind};
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, VertexId};

/// Largest auxiliary group enumerated by [`gadget_split_value`].
pub const MAX_AUX_GROUP: usize = 20;

fn base(e: &Hyperedge) -> FlowNetwork {
    FlowNetwork::with_originals(e.members().iter().copied())
}

fn aux(g: &mut FlowNetwork, edge: usize, index: usize) -> usize {
    g.add_node(NodeKind::Auxiliary { edge, index })
}

fn fin(c: f64) -> Capacity {
    Capacity::Finite(c)
}

/// Undirected clique with weight `γ(u)γ(v)` on every member pair.
pub fn expand_clique(e: &Hyperedge) -> Result<FlowNetwork> {
    if e.len() < 2 {
        return Err(Error::EdgeTooSmall {
            edge: e.id().to_string(),
            size: e.len(),
        });
    }
    let mut g = base(e);
    let w = e.gamma();
    for u in 0..e.len() {
        for v in u + 1..e.len() {
            g.add_undirected(u, v, fin(w[u] * w[v]))?;
        }
    }
    Ok(g)
}

/// Undirected star through one auxiliary node, weight `γ(v)` per spoke.
pub fn expand_star(e: &Hyperedge, edge_index: usize) -> Result<FlowNetwork> {
    let mut g = base(e);
    let hub = aux(&mut g, edge_index, 0);
    for (v, &w) in e.gamma().iter().enumerate() {
        g.add_undirected(v, hub, fin(w))?;
    }
    Ok(g)
}

/// Symmetric EDVWs gadget: `v → e′` and `e″ → v` at `scale·γ(v)`, plus
/// `e′ → e″` at `scale·b`. Realises `scale·min{γ(S), γ(e∖S), b}`.
pub fn expand_sym(e: &Hyperedge, edge_index: usize, b: f64, scale: f64) -> Result<FlowNetwork> {
    let mut g = base(e);
    push_sym(&mut g, e, edge_index, 0, b, scale)?;
    Ok(g)
}

pub(crate) fn push_sym(
    g: &mut FlowNetwork,
    e: &Hyperedge,
    edge_index: usize,
    first_aux: usize,
    b: f64,
    scale: f64,
) -> Result<()> {
    let upper = aux(g, edge_index, first_aux);
    let lower = aux(g, edge_index, first_aux + 1);
    for (v, &w) in e.gamma().iter().enumerate() {
        g.add_arc(v, upper, fin(scale * w))?;
        g.add_arc(lower, v, fin(scale * w))?;
    }
    g.add_arc(upper, lower, fin(scale * b))
}

/// Asymmetric EDVWs gadget: `v → v_e` at `a·γ(v)` and `v_e → v` at `b·γ(v)`.
/// Realises `min{a·γ(S), b·γ(e∖S)}`.
pub fn expand_asym(e: &Hyperedge, edge_index: usize, a: f64, b: f64) -> Result<FlowNetwork> {
    let mut g = base(e);
    push_asym(&mut g, e, edge_index, 0, a, b)?;
    Ok(g)
}

pub(crate) fn push_asym(
    g: &mut FlowNetwork,
    e: &Hyperedge,
    edge_index: usize,
    aux_index: usize,
    a: f64,
    b: f64,
) -> Result<()> {
    let hub = aux(g, edge_index, aux_index);
    for (v, &w) in e.gamma().iter().enumerate() {
        g.add_arc(v, hub, fin(a * w))?;
        g.add_arc(hub, v, fin(b * w))?;
    }
    Ok(())
}

/// Lawler gadget: infinite `v → e′`, `e″ → v` arcs and `e′ → e″` at `κ`.
pub fn expand_lawler(e: &Hyperedge, edge_index: usize, kappa: f64) -> Result<FlowNetwork> {
    let mut g = base(e);
    let upper = aux(&mut g, edge_index, 0);
    let lower = aux(&mut g, edge_index, 1);
    for v in 0..e.len() {
        g.add_arc(v, upper, Capacity::Infinite)?;
        g.add_arc(lower, v, Capacity::Infinite)?;
    }
    g.add_arc(upper, lower, fin(kappa))?;
    Ok(g)
}

/// `ŵ_e(S) = min { cut(T) : T ∩ e = S }` by exhaustive placement of the
/// auxiliary nodes. Auxiliary nodes are split into groups connected through
/// auxiliary-auxiliary arcs; groups are independent, so each is enumerated on
/// its own (at most [`MAX_AUX_GROUP`] nodes per group).
///
/// `Original` nodes must belong to `e`; a `Source` node counts as inside `T`
/// and a `Sink` node as outside. Returns `f64::INFINITY` when every placement
/// cuts an infinite arc.
pub fn gadget_split_value(g: &FlowNetwork, e: &Hyperedge, subset: &BTreeSet<VertexId>) -> Result<f64> {
    for &v in subset {
        if !e.contains(v) {
            return Err(Error::VertexNotInEdge {
                edge: e.id().to_string(),
                vertex: v,
            });
        }
    }
    let n = g.node_count();
    let mut fixed: Vec<Option<bool>> = vec![None; n];
    for (i, kind) in g.nodes().iter().enumerate() {
        fixed[i] = match kind {
            NodeKind::Original(v) => {
                if !e.contains(*v) {
                    return Err(Error::VertexNotInEdge {
                        edge: e.id().to_string(),
                        vertex: *v,
                    });
                }
                Some(subset.contains(v))
            }
            NodeKind::Source => Some(true),
            NodeKind::Sink => Some(false),
            NodeKind::Auxiliary { .. } => None,
        };
    }
    min_cut_with_fixed(g, &fixed)
}

/// Minimum cut over all placements of the unfixed nodes, with fixed nodes
/// pinned to the given side (`true` = inside).
pub fn min_cut_with_fixed(g: &FlowNetwork, fixed: &[Option<bool>]) -> Result<f64> {
    let n = g.node_count();
    // union-find over free nodes joined by free-free arcs
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in g.arcs() {
        if fixed[a.tail].is_none() && fixed[a.head].is_none() {
            let (x, y) = (find(&mut parent, a.tail), find(&mut parent, a.head));
            if x != y {
                parent[x] = y;
            }
        }
    }
    let mut group_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_group = vec![usize::MAX; n];
    for v in 0..n {
        if fixed[v].is_some() {
            continue;
        }
        let r = find(&mut parent, v);
        if root_group[r] == usize::MAX {
            root_group[r] = groups.len();
            groups.push(Vec::new());
        }
        group_of[v] = root_group[r];
        groups[root_group[r]].push(v);
    }
    if let Some(big) = groups.iter().find(|grp| grp.len() > MAX_AUX_GROUP) {
        return Err(Error::TooManyAuxiliaries(big.len()));
    }

    let mut constant = 0.0;
    let mut group_arcs: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    for (i, a) in g.arcs().iter().enumerate() {
        match (fixed[a.tail], fixed[a.head]) {
            (Some(true), Some(false)) => constant += a.capacity.as_f64(),
            (Some(_), Some(_)) => {}
            (None, _) => group_arcs[group_of[a.tail]].push(i),
            (_, None) => group_arcs[group_of[a.head]].push(i),
        }
    }

    let mut total = constant;
    let mut side = vec![false; n];
    for (v, f) in fixed.iter().enumerate() {
        side[v] = f.unwrap_or(false);
    }
    for (grp, arcs) in groups.iter().zip(&group_arcs) {
        let mut best = f64::INFINITY;
        for mask in 0u64..1 << grp.len() {
            for (bit, &v) in grp.iter().enumerate() {
                side[v] = mask >> bit & 1 == 1;
            }
            let value: f64 = arcs
                .iter()
                .map(|&i| &g.arcs()[i])
                .filter(|a| side[a.tail] && !side[a.head])
                .map(|a| a.capacity.as_f64())
                .sum();
            best = best.min(value);
        }
        total += best;
    }
    Ok(total)
}
