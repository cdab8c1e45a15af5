use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::hypergraph::VertexId;

/// Arc capacity. Infinite arcs are never cut when a finite cut exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity {
    Finite(f64),
    Infinite,
}

impl Capacity {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    /// `f64::INFINITY` for infinite arcs.
    pub fn as_f64(&self) -> f64 {
        match self {
            Capacity::Finite(c) => *c,
            Capacity::Infinite => f64::INFINITY,
        }
    }

    pub fn from_f64(c: f64) -> Self {
        if c.is_infinite() {
            Capacity::Infinite
        } else {
            Capacity::Finite(c)
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c:?}"),
            Capacity::Infinite => write!(f, "inf"),
        }
    }
}

/// Where a flow-network node came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Original(VertexId),
    /// `index`-th auxiliary node introduced for hyperedge number `edge`.
    Auxiliary { edge: usize, index: usize },
    Source,
    Sink,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Original(v) => write!(f, "original {v}"),
            NodeKind::Auxiliary { edge, index } => write!(f, "auxiliary {edge} {index}"),
            NodeKind::Source => write!(f, "source"),
            NodeKind::Sink => write!(f, "sink"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: Capacity,
}

/// Directed capacitated graph with node provenance. Undirected edges are
/// stored as two opposing arcs of equal capacity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowNetwork {
    nodes: Vec<NodeKind>,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Network holding `Original(v)` for each `v` in order and no arcs.
    pub fn with_originals(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        FlowNetwork {
            nodes: vertices.into_iter().map(NodeKind::Original).collect(),
            arcs: Vec::new(),
        }
    }

    pub fn add_node(&mut self, kind: NodeKind) -> usize {
        self.nodes.push(kind);
        self.nodes.len() - 1
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: Capacity) -> Result<()> {
        let n = self.nodes.len();
        if tail >= n {
            return Err(Error::NodeOutOfRange(tail));
        }
        if head >= n {
            return Err(Error::NodeOutOfRange(head));
        }
        if tail == head {
            return Err(Error::SelfLoop(tail));
        }
        if let Capacity::Finite(c) = capacity {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::InvalidCapacity {
                    tail,
                    head,
                    value: c,
                });
            }
        }
        self.arcs.push(FlowArc {
            tail,
            head,
            capacity,
        });
        Ok(())
    }

    /// Two opposing arcs of equal capacity.
    pub fn add_undirected(&mut self, u: usize, v: usize, capacity: Capacity) -> Result<()> {
        self.add_arc(u, v, capacity)?;
        self.add_arc(v, u, capacity)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.nodes[node]
    }

    pub fn auxiliary_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|k| matches!(k, NodeKind::Auxiliary { .. }))
            .count()
    }

    /// Node carrying `Original(v)`, if any.
    pub fn original_node(&self, v: VertexId) -> Option<usize> {
        self.nodes.iter().position(|k| *k == NodeKind::Original(v))
    }

    /// Like [`original_node`](Self::original_node), checking index `v` first
    /// since reduced networks keep originals in vertex order.
    fn original_index(&self, v: VertexId) -> Option<usize> {
        if self.nodes.get(v) == Some(&NodeKind::Original(v)) {
            return Some(v);
        }
        self.original_node(v)
    }

    /// Σ capacities of arcs leaving the set marked by `side`.
    pub fn cut_value(&self, side: &[bool]) -> f64 {
        self.arcs
            .iter()
            .filter(|a| side[a.tail] && !side[a.head])
            .map(|a| a.capacity.as_f64())
            .sum()
    }

    /// Sum of all finite capacities.
    pub fn finite_capacity_total(&self) -> f64 {
        self.arcs
            .iter()
            .filter_map(|a| match a.capacity {
                Capacity::Finite(c) => Some(c),
                Capacity::Infinite => None,
            })
            .sum()
    }

    /// Copy with every finite capacity multiplied by `10^digits` and rounded to
    /// an integer, for exact arithmetic on small instances.
    pub fn quantized(&self, digits: u32) -> Result<FlowNetwork> {
        if digits > 9 {
            return Err(Error::InvalidConfig(format!(
                "quantization digits {digits} exceed 9"
            )));
        }
        let scale = 10f64.powi(digits as i32);
        let arcs = self
            .arcs
            .iter()
            .map(|a| FlowArc {
                capacity: match a.capacity {
                    Capacity::Finite(c) => Capacity::Finite((c * scale).round()),
                    Capacity::Infinite => Capacity::Infinite,
                },
                ..*a
            })
            .collect();
        Ok(FlowNetwork {
            nodes: self.nodes.clone(),
            arcs,
        })
    }

    /// Appends `other`, identifying its `Original` nodes with existing ones
    /// (created on demand) and copying every other node.
    pub fn absorb(&mut self, other: &FlowNetwork) {
        let map: Vec<usize> = other
            .nodes
            .iter()
            .map(|kind| match kind {
                NodeKind::Original(v) => match self.original_index(*v) {
                    Some(i) => i,
                    None => self.add_node(*kind),
                },
                _ => self.add_node(*kind),
            })
            .collect();
        self.arcs.extend(other.arcs.iter().map(|a| FlowArc {
            tail: map[a.tail],
            head: map[a.head],
            capacity: a.capacity,
        }));
    }

    /// Line format: `n <index> <provenance>` records, then
    /// `a <tail> <head> <capacity|inf>` records.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, kind) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "n {i} {kind}");
        }
        for a in &self.arcs {
            let _ = writeln!(out, "a {} {} {}", a.tail, a.head, a.capacity);
        }
        out
    }

    pub fn parse(text: &str) -> Result<FlowNetwork> {
        let mut net = FlowNetwork::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::parse(line_no, format!("bad integer `{s}`")))
            };
            match fields.as_slice() {
                ["n", index, rest @ ..] => {
                    if int(index)? != net.nodes.len() {
                        return Err(Error::parse(line_no, "node indices must be consecutive"));
                    }
                    let kind = match rest {
                        ["original", v] => NodeKind::Original(int(v)?),
                        ["auxiliary", e, i] => NodeKind::Auxiliary {
                            edge: int(e)?,
                            index: int(i)?,
                        },
                        ["source"] => NodeKind::Source,
                        ["sink"] => NodeKind::Sink,
                        _ => return Err(Error::parse(line_no, "bad node provenance")),
                    };
                    net.add_node(kind);
                }
                ["a", tail, head, cap] => {
                    let capacity = if *cap == "inf" {
                        Capacity::Infinite
                    } else {
                        Capacity::Finite(cap.parse().map_err(|_| {
                            Error::parse(line_no, format!("bad capacity `{cap}`"))
                        })?)
                    };
                    net.add_arc(int(tail)?, int(head)?, capacity)
                        .map_err(|e| Error::parse(line_no, e.to_string()))?;
                }
                _ => return Err(Error::parse(line_no, format!("unrecognised record `{line}`"))),
            }
        }
        Ok(net)
    }
}
