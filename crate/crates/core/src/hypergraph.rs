//! Hypergraphs with edge-dependent vertex weights (EDVWs).
//!
//! Every hyperedge carries its own weight map `gamma` over its members and a
//! positive hyperedge weight `kappa`. Vertices are interned to dense ids in
//! declaration order; the external names are kept for I/O.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    id: String,
    members: Vec<VertexId>,
    gamma: Vec<f64>,
    kappa: f64,
    gamma_total: f64,
}

impl Hyperedge {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Members in declaration order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    /// `gamma()[i]` is the weight of `members()[i]`.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// γ_e(e), the sum of all member weights.
    pub fn gamma_total(&self) -> f64 {
        self.gamma_total
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.members.iter().position(|&m| m == v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    /// γ_e(S) for `S ⊆ e`. Accumulates in member order, so repeated calls are
    /// bit-identical.
    pub fn gamma_sum(&self, subset: &BTreeSet<VertexId>) -> Result<f64> {
        let mut total = 0.0;
        let mut seen = 0;
        for (&v, &w) in self.members.iter().zip(&self.gamma) {
            if subset.contains(&v) {
                total += w;
                seen += 1;
            }
        }
        if seen != subset.len() {
            let stray = subset
                .iter()
                .copied()
                .find(|v| !self.contains(*v))
                .unwrap_or_default();
            return Err(Error::VertexNotInEdge {
                edge: self.id.clone(),
                vertex: stray,
            });
        }
        Ok(total)
    }

    /// γ_e(S ∩ e) where `indicator[v]` marks membership of vertex `v` in `S`.
    pub fn gamma_sum_indicator(&self, indicator: &[bool]) -> f64 {
        let mut total = 0.0;
        for (&v, &w) in self.members.iter().zip(&self.gamma) {
            if indicator[v] {
                total += w;
            }
        }
        total
    }

    /// γ_e(S) where bit `i` of `mask` selects `members()[i]`.
    pub fn gamma_sum_mask(&self, mask: u64) -> f64 {
        let mut total = 0.0;
        for (i, &w) in self.gamma.iter().enumerate() {
            if mask >> i & 1 == 1 {
                total += w;
            }
        }
        total
    }

    /// Converts a vertex set into a member bitmask. Requires `|e| <= 64`.
    pub fn mask_of(&self, subset: &BTreeSet<VertexId>) -> Result<u64> {
        if self.len() > 64 {
            return Err(Error::EdgeTooLarge {
                edge: self.id.clone(),
                size: self.len(),
                limit: 64,
            });
        }
        let mut mask = 0u64;
        for &v in subset {
            let pos = self.position(v).ok_or_else(|| Error::VertexNotInEdge {
                edge: self.id.clone(),
                vertex: v,
            })?;
            mask |= 1 << pos;
        }
        Ok(mask)
    }

    /// Vertex set selected by a member bitmask.
    pub fn subset_of_mask(&self, mask: u64) -> BTreeSet<VertexId> {
        self.members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    }

    /// Mask selecting every member.
    pub fn full_mask(&self) -> u64 {
        if self.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }
}

/// Input record for one hyperedge: id, κ, and `(vertex name, γ)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInput {
    pub id: String,
    pub kappa: f64,
    pub members: Vec<(String, f64)>,
}

impl EdgeInput {
    pub fn new(id: impl Into<String>, kappa: f64, members: &[(&str, f64)]) -> Self {
        EdgeInput {
            id: id.into(),
            kappa,
            members: members.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Validates and interns a hypergraph.
    pub fn build<S: AsRef<str>>(vertex_names: &[S], edges: Vec<EdgeInput>) -> Result<Self> {
        let mut names = Vec::with_capacity(vertex_names.len());
        let mut index = HashMap::with_capacity(vertex_names.len());
        for name in vertex_names {
            let name = name.as_ref();
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(Error::DuplicateVertex(name.to_string()));
            }
            names.push(name.to_string());
        }

        let mut edge_ids = BTreeSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for input in edges {
            if !edge_ids.insert(input.id.clone()) {
                return Err(Error::DuplicateEdge(input.id));
            }
            if !(input.kappa > 0.0) || !input.kappa.is_finite() {
                return Err(Error::NonPositiveWeight {
                    edge: input.id,
                    what: "kappa".into(),
                    value: input.kappa,
                });
            }
            if input.members.is_empty() {
                return Err(Error::EmptyEdge(input.id));
            }
            let mut members = Vec::with_capacity(input.members.len());
            let mut gamma = Vec::with_capacity(input.members.len());
            for (name, w) in &input.members {
                let v = *index.get(name).ok_or_else(|| Error::UnknownVertex {
                    edge: input.id.clone(),
                    vertex: name.clone(),
                })?;
                if members.contains(&v) {
                    return Err(Error::DuplicateMember {
                        edge: input.id.clone(),
                        vertex: name.clone(),
                    });
                }
                if !(*w > 0.0) || !w.is_finite() {
                    return Err(Error::NonPositiveWeight {
                        edge: input.id.clone(),
                        what: format!("vertex `{name}`"),
                        value: *w,
                    });
                }
                members.push(v);
                gamma.push(*w);
            }
            let gamma_total = gamma.iter().sum();
            built.push(Hyperedge {
                id: input.id,
                members,
                gamma,
                kappa: input.kappa,
                gamma_total,
            });
        }

        Ok(Hypergraph {
            names,
            index,
            edges: built,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Hyperedge {
        &self.edges[i]
    }

    pub fn edge_by_id(&self, id: &str) -> Option<&Hyperedge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Resolves a list of vertex names, failing on the first unknown one.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<BTreeSet<VertexId>> {
        names
            .iter()
            .map(|n| {
                self.vertex(n.as_ref()).ok_or_else(|| Error::UnknownVertex {
                    edge: "-".into(),
                    vertex: n.as_ref().to_string(),
                })
            })
            .collect()
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// v <name>
    /// e <id> <kappa> <name>:<gamma> <name>:<gamma> ...
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut declared = BTreeSet::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("v") => {
                    let name = fields
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "vertex record without a name"))?;
                    if fields.next().is_some() {
                        return Err(Error::parse(line_no, "trailing fields after vertex name"));
                    }
                    if !declared.insert(name.to_string()) {
                        return Err(Error::parse(
                            line_no,
                            format!("vertex `{name}` declared twice"),
                        ));
                    }
                    names.push(name.to_string());
                }
                Some("e") => {
                    let id = fields
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "hyperedge record without an id"))?;
                    let kappa = fields
                        .next()
                        .ok_or_else(|| Error::parse(line_no, "hyperedge record without kappa"))?;
                    let kappa: f64 = kappa
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad kappa `{kappa}`")))?;
                    let mut members = Vec::new();
                    for field in fields {
                        let (name, w) = field.rsplit_once(':').ok_or_else(|| {
                            Error::parse(line_no, format!("expected name:gamma, got `{field}`"))
                        })?;
                        let w: f64 = w
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("bad gamma `{w}`")))?;
                        members.push((name.to_string(), w));
                    }
                    edges.push((line_no, EdgeInput {
                        id: id.to_string(),
                        kappa,
                        members,
                    }));
                }
                Some(other) => {
                    return Err(Error::parse(line_no, format!("unknown record `{other}`")));
                }
                None => unreachable!(),
            }
        }
        let mut seen_edges = BTreeSet::new();
        for (line_no, e) in &edges {
            if !seen_edges.insert(e.id.clone()) {
                return Err(Error::parse(
                    *line_no,
                    format!("hyperedge `{}` declared twice", e.id),
                ));
            }
        }
        Hypergraph::build(&names, edges.into_iter().map(|(_, e)| e).collect())
    }

    /// Writes the text format read by [`Hypergraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "v {name}");
        }
        for e in &self.edges {
            let _ = write!(out, "e {} {:?}", e.id, e.kappa);
            for (&v, &w) in e.members.iter().zip(&e.gamma) {
                let _ = write!(out, " {}:{:?}", self.names[v], w);
            }
            out.push('\n');
        }
        out
    }
}
