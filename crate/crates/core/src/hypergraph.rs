//! Hypergraph data model: dense node indices, a hyperedge multiset with
//! per-edge anchors, and an index of unique hyperedges.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::Range;

use crate::error::{Error, Result};

/// Dense node index in `0..node_count()`.
pub type NodeId = u32;

/// A node set plus a multiset of hyperedges, each with its anchor member(s).
///
/// Hyperedges are stored as sorted member lists. Repeated hyperedges stay as
/// distinct entries (they may carry different anchors) and share one unique
/// key.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    names: Vec<String>,
    name_index: BTreeMap<String, NodeId>,
    edges: Vec<Vec<NodeId>>,
    anchors: Vec<Vec<NodeId>>,
    edge_key: Vec<usize>,
    unique_edges: Vec<Vec<usize>>,
    unique_index: BTreeMap<Vec<NodeId>, usize>,
    offsets: Vec<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph whose node names are the decimal indices.
    pub fn from_edges(
        node_count: usize,
        edges: Vec<Vec<NodeId>>,
        anchors: Vec<Vec<NodeId>>,
    ) -> Result<Self> {
        if edges.len() != anchors.len() {
            return Err(Error::DimensionMismatch {
                expected: edges.len(),
                found: anchors.len(),
            });
        }
        let mut builder = HypergraphBuilder::new();
        for i in 0..node_count {
            builder.intern(&i.to_string());
        }
        for (members, anchors) in edges.into_iter().zip(anchors) {
            builder.add_edge(members, anchors)?;
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<NodeId>] {
        &self.edges
    }

    /// Sorted members of hyperedge `e`.
    pub fn edge(&self, e: usize) -> &[NodeId] {
        &self.edges[e]
    }

    pub fn anchors(&self, e: usize) -> &[NodeId] {
        &self.anchors[e]
    }

    pub fn all_anchors(&self) -> &[Vec<NodeId>] {
        &self.anchors
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.names[v as usize]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.name_index.get(name).copied()
    }

    /// Number of unique hyperedges (distinct member sets).
    pub fn unique_count(&self) -> usize {
        self.unique_edges.len()
    }

    /// Unique key of hyperedge `e`; keys are numbered in first-seen order.
    pub fn unique_key(&self, e: usize) -> usize {
        self.edge_key[e]
    }

    /// Edge positions sharing unique key `key`, in edge order.
    pub fn unique_positions(&self, key: usize) -> &[usize] {
        &self.unique_edges[key]
    }

    /// Unique key of a sorted member set, if present.
    pub fn find_unique(&self, members: &[NodeId]) -> Option<usize> {
        self.unique_index.get(members).copied()
    }

    /// Member list of unique key `key`.
    pub fn unique_members(&self, key: usize) -> &[NodeId] {
        &self.edges[self.unique_edges[key][0]]
    }

    /// Canonical textual key: sorted dense indices joined by `,`.
    pub fn canonical_key(&self, key: usize) -> String {
        let mut out = String::new();
        for (i, v) in self.unique_members(key).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out
    }

    /// Total number of (node, hyperedge) incidences, i.e. `Σ_e |e|`.
    pub fn incidence_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Incidence rows of hyperedge `e` (members in sorted order).
    pub fn incidence_range(&self, e: usize) -> Range<usize> {
        self.offsets[e]..self.offsets[e + 1]
    }

    /// Degree of every node, counting repeated hyperedges and size-1 edges.
    pub fn degrees(&self) -> Vec<u32> {
        self.degrees_over(0..self.edges.len())
    }

    /// Degrees restricted to the given hyperedges.
    pub fn degrees_over(&self, edges: impl IntoIterator<Item = usize>) -> Vec<u32> {
        let mut degrees = alloc::vec![0u32; self.node_count()];
        for e in edges {
            for &v in &self.edges[e] {
                degrees[v as usize] += 1;
            }
        }
        degrees
    }

    /// Hyperedges incident to each node, in edge order.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut incident = alloc::vec![Vec::new(); self.node_count()];
        for (e, members) in self.edges.iter().enumerate() {
            for &v in members {
                incident[v as usize].push(e);
            }
        }
        incident
    }

    /// Checks that every hyperedge of size ≥ 2 carries exactly `k` anchors.
    pub fn require_anchor_count(&self, k: usize) -> Result<()> {
        for (e, anchors) in self.anchors.iter().enumerate() {
            if self.edges[e].len() >= 2 && anchors.len() != k {
                return Err(Error::AnchorCount {
                    edge: e,
                    count: anchors.len(),
                    expected: k,
                });
            }
        }
        Ok(())
    }

    /// Copy of this hypergraph with every anchor list replaced.
    pub fn with_anchors(&self, anchors: Vec<Vec<NodeId>>) -> Result<Self> {
        if anchors.len() != self.edges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.edges.len(),
                found: anchors.len(),
            });
        }
        for (e, list) in anchors.iter().enumerate() {
            check_anchors(e, &self.edges[e], list)?;
        }
        let mut out = self.clone();
        out.anchors = anchors;
        Ok(out)
    }

    /// Copy without hyperedge `e`; node indices are unchanged.
    pub fn without_edge(&self, e: usize) -> Self {
        let mut builder = HypergraphBuilder::new();
        for name in &self.names {
            builder.intern(name);
        }
        for (i, (members, anchors)) in self.edges.iter().zip(&self.anchors).enumerate() {
            if i != e {
                builder
                    .add_edge(members.clone(), anchors.clone())
                    .expect("edges of a valid hypergraph stay valid");
            }
        }
        builder.build()
    }
}

fn check_anchors(edge: usize, members: &[NodeId], anchors: &[NodeId]) -> Result<()> {
    for (i, &a) in anchors.iter().enumerate() {
        if members.binary_search(&a).is_err() {
            return Err(Error::AnchorNotMember { edge, node: a });
        }
        if anchors[..i].contains(&a) {
            return Err(Error::DuplicateMember { edge, node: a });
        }
    }
    Ok(())
}

/// Incremental constructor assigning dense indices in first-seen order.
#[derive(Debug, Default, Clone)]
pub struct HypergraphBuilder {
    names: Vec<String>,
    name_index: BTreeMap<String, NodeId>,
    edges: Vec<Vec<NodeId>>,
    anchors: Vec<Vec<NodeId>>,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `name`, assigning the next free index if unseen.
    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.name_index.get(name) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Adds a hyperedge given by member and anchor indices.
    ///
    /// Members are sorted; duplicates, empty edges, unknown indices and
    /// anchors outside the edge are rejected.
    pub fn add_edge(&mut self, mut members: Vec<NodeId>, anchors: Vec<NodeId>) -> Result<usize> {
        let edge = self.edges.len();
        if members.is_empty() {
            return Err(Error::EmptyEdge { edge });
        }
        let nodes = self.names.len();
        if let Some(&node) = members.iter().find(|&&v| v as usize >= nodes) {
            return Err(Error::NodeOutOfRange { node, nodes });
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember { edge, node: w[0] });
        }
        check_anchors(edge, &members, &anchors)?;
        self.edges.push(members);
        self.anchors.push(anchors);
        Ok(edge)
    }

    /// Adds a hyperedge given by external ids. Member ids are interned in
    /// order; anchors must name members of this edge.
    pub fn add_named_edge<S: AsRef<str>>(&mut self, members: &[S], anchors: &[S]) -> Result<usize> {
        let edge = self.edges.len();
        if members.is_empty() {
            return Err(Error::EmptyEdge { edge });
        }
        let mut seen: Vec<(&str, NodeId)> = Vec::with_capacity(members.len());
        for m in members {
            let name = m.as_ref();
            if seen.iter().any(|(n, _)| *n == name) {
                let node = self.intern(name);
                return Err(Error::DuplicateMember { edge, node });
            }
            let id = self.intern(name);
            seen.push((name, id));
        }
        let mut anchor_ids = Vec::with_capacity(anchors.len());
        for a in anchors {
            match seen.iter().find(|(n, _)| *n == a.as_ref()) {
                Some(&(_, id)) => anchor_ids.push(id),
                None => {
                    let node = self.intern(a.as_ref());
                    return Err(Error::AnchorNotMember { edge, node });
                }
            }
        }
        self.add_edge(seen.into_iter().map(|(_, id)| id).collect(), anchor_ids)
    }

    pub fn build(self) -> Hypergraph {
        let mut unique_index: BTreeMap<Vec<NodeId>, usize> = BTreeMap::new();
        let mut unique_edges: Vec<Vec<usize>> = Vec::new();
        let mut edge_key = Vec::with_capacity(self.edges.len());
        let mut offsets = Vec::with_capacity(self.edges.len() + 1);
        offsets.push(0);
        for (e, members) in self.edges.iter().enumerate() {
            let key = match unique_index.get(members) {
                Some(&k) => k,
                None => {
                    let k = unique_edges.len();
                    unique_index.insert(members.clone(), k);
                    unique_edges.push(Vec::new());
                    k
                }
            };
            unique_edges[key].push(e);
            edge_key.push(key);
            offsets.push(offsets[e] + members.len());
        }
        Hypergraph {
            names: self.names,
            name_index: self.name_index,
            edges: self.edges,
            anchors: self.anchors,
            edge_key,
            unique_edges,
            unique_index,
            offsets,
        }
    }
}
