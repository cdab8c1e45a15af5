//! Hypergraph-to-digraph reduction: per-edge gadgets merged into one flow
//! network that shares the original vertex nodes.

pub mod combine;
pub mod gadgets;
pub mod network;

use log::debug;
use rayon::prelude::*;

pub use combine::{
    asymmetric_coefficients, enumerate_qa, enumerate_qs, reduce_asymmetric, reduce_symmetric,
    subset_sums, symmetric_coefficients, Caps, GadgetCombination, GadgetMode, GadgetTerm,
};
pub use gadgets::{
    expand_asym, expand_clique, expand_lawler, expand_star, expand_sym, gadget_split_value,
    min_cut_with_fixed,
};
pub use network::{Capacity, FlowArc, FlowNetwork, NodeKind};

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::sparsify::{envelope_to_symmetric, sparsify_asymmetric, sparsify_continuous, sparsify_discrete};
use crate::splitting::{check_spec_count, Generator, SplittingSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionMode {
    Exact,
    /// `(1+ε)`-approximate reduction.
    Sparsified(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// Nothing to cut: singleton edge or all-zero combination.
    Empty,
    Lawler,
    ExactSymmetric,
    ExactAsymmetric,
    ContinuousSymmetric,
    DiscreteSymmetric,
    DiscreteAsymmetric,
}

/// How one hyperedge was reduced.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStrategy {
    pub edge: String,
    pub kind: StrategyKind,
    /// Gadgets in the combination (1 for Lawler, 0 for `Empty`).
    pub terms: usize,
    /// Set when a preferred construction was unavailable.
    pub fallback: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub network: FlowNetwork,
    pub strategies: Vec<EdgeStrategy>,
}

impl Reduction {
    pub fn gadget_count(&self) -> usize {
        self.strategies.iter().map(|s| s.terms).sum()
    }
}

/// Reduces `h` to a single flow network. Originals come first in vertex
/// order, then auxiliary nodes in edge order.
pub fn reduce_hypergraph(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    mode: ReductionMode,
    caps: &Caps,
) -> Result<Reduction> {
    check_spec_count(h, specs)?;
    if let ReductionMode::Sparsified(eps) = mode {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::InvalidConfig(format!("epsilon {eps} must be non-negative")));
        }
    }
    let per_edge: Vec<Result<(FlowNetwork, EdgeStrategy)>> = h
        .edges()
        .par_iter()
        .enumerate()
        .map(|(i, e)| reduce_edge(e, i, &specs[i], mode, caps).map_err(|err| Error::in_edge(e.id(), err)))
        .collect();
    let mut network = FlowNetwork::with_originals(0..h.vertex_count());
    let mut strategies = Vec::with_capacity(per_edge.len());
    for item in per_edge {
        let (gadget, strategy) = item?;
        network.absorb(&gadget);
        strategies.push(strategy);
    }
    debug!(
        "reduced {} edges to {} nodes, {} arcs",
        h.edges().len(),
        network.node_count(),
        network.arc_count()
    );
    Ok(Reduction { network, strategies })
}

fn strategy(e: &Hyperedge, kind: StrategyKind, terms: usize, fallback: Option<String>) -> EdgeStrategy {
    EdgeStrategy {
        edge: e.id().to_string(),
        kind,
        terms,
        fallback,
    }
}

/// Gadget network and strategy for one hyperedge.
pub fn reduce_edge(
    e: &Hyperedge,
    edge_index: usize,
    spec: &SplittingSpec,
    mode: ReductionMode,
    caps: &Caps,
) -> Result<(FlowNetwork, EdgeStrategy)> {
    if e.len() < 2 {
        let g = FlowNetwork::with_originals(e.members().iter().copied());
        return Ok((g, strategy(e, StrategyKind::Empty, 0, None)));
    }
    if spec.is_all_or_nothing() {
        let g = expand_lawler(e, edge_index, e.kappa())?;
        return Ok((g, strategy(e, StrategyKind::Lawler, 1, None)));
    }
    let gen = spec.edge_generator(e)?;
    let (comb, kind, fallback) = match mode {
        ReductionMode::Exact => exact_combination(e, &gen, caps)?,
        ReductionMode::Sparsified(eps) => sparse_combination(e, &gen, eps, caps)?,
    };
    let kind = if comb.terms.is_empty() { StrategyKind::Empty } else { kind };
    let g = comb.expand(e, edge_index)?;
    Ok((g, strategy(e, kind, comb.gadget_count(), fallback)))
}

type Choice = (GadgetCombination, StrategyKind, Option<String>);

fn exact_combination(e: &Hyperedge, gen: &Generator, caps: &Caps) -> Result<Choice> {
    if gen.is_symmetric() {
        Ok((reduce_symmetric(e, gen, caps)?, StrategyKind::ExactSymmetric, None))
    } else {
        Ok((reduce_asymmetric(e, gen, caps)?, StrategyKind::ExactAsymmetric, None))
    }
}

fn sparse_combination(e: &Hyperedge, gen: &Generator, eps: f64, caps: &Caps) -> Result<Choice> {
    if !gen.is_symmetric() {
        let qa = enumerate_qa(e, caps)?;
        let points: Vec<(f64, f64)> = qa.iter().map(|&q| (q, gen.value(q))).collect();
        let comb = sparsify_asymmetric(e.id(), &points, e.gamma_total(), eps)?;
        if sandwiched(&comb, &points, eps) {
            return Ok((comb, StrategyKind::DiscreteAsymmetric, None));
        }
        let exact = reduce_asymmetric(e, gen, caps)?;
        return Ok((exact, StrategyKind::ExactAsymmetric, Some("asymmetric envelope failed sandwich check".into())));
    }

    let half = e.gamma_total() / 2.0;
    let mut notes = Vec::new();
    let continuous = if eps > 0.0 && gen.has_slope() {
        let slope = |x: f64| gen.right_slope(x).unwrap_or(f64::NAN);
        match sparsify_continuous(|x| gen.value(x), slope, half, eps) {
            Ok(p) => Some(envelope_to_symmetric(e.id(), e.gamma_total(), &p)?),
            Err(err @ (Error::InfiniteInitialSlope | Error::NoTangentFound(_))) => {
                notes.push(err.to_string());
                None
            }
            Err(err) => return Err(err),
        }
    } else {
        notes.push("continuous envelope unavailable".to_string());
        None
    };
    let (discrete, continuous) = match enumerate_qs(e, caps) {
        Ok(qs) => {
            let points: Vec<(f64, f64)> = qs.iter().map(|&q| (q, gen.value(q))).collect();
            let p = sparsify_discrete(&points, eps)?;
            // the continuous envelope assumes concavity; trust it only where it is checked
            let continuous = continuous.filter(|c| {
                let ok = sandwiched(c, &points, eps);
                if !ok {
                    notes.push("continuous envelope failed sandwich check".to_string());
                }
                ok
            });
            (Some(envelope_to_symmetric(e.id(), e.gamma_total(), &p)?), continuous)
        }
        Err(err @ Error::EdgeTooLarge { .. }) => {
            if continuous.is_none() {
                return Err(err);
            }
            (None, continuous)
        }
        Err(err) => return Err(err),
    };
    let fallback = if notes.is_empty() { None } else { Some(notes.join("; ")) };
    match (continuous, discrete) {
        (Some(c), Some(d)) if c.gadget_count() < d.gadget_count() => Ok((c, StrategyKind::ContinuousSymmetric, None)),
        (_, Some(d)) => Ok((d, StrategyKind::DiscreteSymmetric, fallback)),
        (Some(c), None) => Ok((c, StrategyKind::ContinuousSymmetric, None)),
        (None, None) => unreachable!("both envelopes missing"),
    }
}

fn sandwiched(comb: &GadgetCombination, points: &[(f64, f64)], eps: f64) -> bool {
    points.iter().all(|&(q, v)| {
        let a = comb.value_at(q);
        a >= v - 1e-9 * v.max(1.0) && a <= (1.0 + eps) * v * (1.0 + 1e-9)
    })
}
