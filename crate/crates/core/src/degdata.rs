//! The data model: decorated trees (simple and double species) and decorated
//! component graphs (global species), with canonical encoding and isomorphism.
//!
//! A local datum is a tree of genus-0 vertices; each vertex carries a torsor
//! label, a different degree delta, and marked points; each edge carries a
//! thickness e = p*t and a pair of half-labels (m, h), one per side.  The
//! boundary attachments (origin point of a simple datum, the two geodesic
//! endpoint points of a double datum) are half-edges: they carry vertex-side
//! labels and a thickness but no far vertex.
//!
//! Canonical encoding is AHU-style over the rooted tree (root = origin or
//! first endpoint), with children sorted by their full encoded label tuples.
//! Two data are isomorphic iff their encodings are equal; isomorphisms fix
//! the origin (resp. both endpoints) and preserve every label verbatim.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::arith::place::Place;
use crate::error::StructureError;
use crate::torsor::{GroupKind, TorsorRep};

pub type VertexId = usize;

/// Boundary invariant (kind, m, h) of a local datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryType {
    pub kind: GroupKind,
    pub m: i64,
    pub h: u64,
}

/// Torsor label of a vertex or component: the completely split cover, a kind
/// without coordinates, or an explicit representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTorsor {
    Split,
    Symbolic(GroupKind),
    Concrete(TorsorRep),
}

impl VertexTorsor {
    /// None exactly for the split marker.
    pub fn kind(&self) -> Option<GroupKind> {
        match self {
            VertexTorsor::Split => None,
            VertexTorsor::Symbolic(k) => Some(*k),
            VertexTorsor::Concrete(t) => Some(t.kind),
        }
    }

    pub fn is_radicial(&self) -> bool {
        self.kind().map_or(false, |k| k.is_radicial())
    }
}

/// A smooth marked point: location (None = anonymous geometric point),
/// conductor m, residue h, and the number r of branch points specializing
/// there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedPointDatum {
    pub location: Option<Place>,
    pub m: i64,
    pub h: u64,
    pub r: i64,
}

/// One vertex of a local tree (projective line) or, with genus > 0, one
/// component of a global base curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexLabel {
    pub torsor: VertexTorsor,
    pub delta: u64,
    pub genus: u64,
    pub marked: Vec<MarkedPointDatum>,
}

/// Conductor and residue on one side of a double point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfLabel {
    pub m: i64,
    pub h: u64,
}

/// A double point between two vertices; half[k] sits on the side of ends[k].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDatum {
    pub ends: [VertexId; 2],
    pub e: u64,
    pub half: [HalfLabel; 2],
}

/// A boundary attachment point: vertex-side (m, h), thickness t of the
/// attaching double point (e = p*t), and an optional explicit location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attachment {
    pub m: i64,
    pub h: u64,
    pub t: u64,
    pub location: Option<Place>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    Split,
    NonSplit,
}

/// Degeneration datum at a smooth point: type (r, boundary), a decorated
/// tree, an origin vertex, and the origin attachment point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleDegData {
    pub species: Species,
    pub r: i64,
    pub boundary: BoundaryType,
    pub vertices: Vec<VertexLabel>,
    pub edges: Vec<EdgeDatum>,
    pub origin: VertexId,
    pub origin_point: Attachment,
}

/// Degeneration datum at a double point: type (r, boundary1, boundary2),
/// a decorated tree, and two geodesic endpoints with attachment points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleDegData {
    pub species: Species,
    pub r: i64,
    pub boundaries: [BoundaryType; 2],
    pub vertices: Vec<VertexLabel>,
    pub edges: Vec<EdgeDatum>,
    pub endpoints: [VertexId; 2],
    pub endpoint_points: [Attachment; 2],
}

/// One component of a global base curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentLabel {
    pub genus: u64,
    pub torsor: VertexTorsor,
    pub delta: u64,
    /// Generic component in the sense of the zero-count condition; only
    /// meaningful for radicial torsors.
    pub generic: bool,
}

/// A node of the base curve with its two-sided labels, branch count, and the
/// attached double datum (None = type-only stub).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDatum {
    pub ends: [usize; 2],
    pub half: [HalfLabel; 2],
    pub r: i64,
    pub data: Option<DoubleDegData>,
}

/// A marked smooth point of the base curve where branch points specialize.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedDatum {
    pub component: usize,
    pub location: Option<Place>,
    pub m: i64,
    pub h: u64,
    pub r: i64,
    pub data: Option<SimpleDegData>,
}

/// A critical point: a zero of the differential form of a radicial component
/// torsor; carries a simple datum of type (0, (kind, m, h)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalDatum {
    pub component: usize,
    pub location: Option<Place>,
    pub m: i64,
    pub h: u64,
    pub data: Option<SimpleDegData>,
}

/// Degeneration datum over a proper semi-stable base curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalDegData {
    pub components: Vec<ComponentLabel>,
    pub nodes: Vec<NodeDatum>,
    pub marked: Vec<MarkedDatum>,
    pub critical: Vec<CriticalDatum>,
    /// Total branch count; must equal sum of node and marked r values.
    pub r: i64,
}

/// Adjacency lists (edge index, far vertex) with range and loop checks.
pub fn adjacency(
    n: usize,
    edges: &[EdgeDatum],
) -> Result<Vec<Vec<(usize, usize)>>, StructureError> {
    let mut adj = vec![Vec::new(); n];
    for (k, ed) in edges.iter().enumerate() {
        let [a, b] = ed.ends;
        if a >= n {
            return Err(StructureError::BadVertex(a));
        }
        if b >= n {
            return Err(StructureError::BadVertex(b));
        }
        if a == b {
            return Err(StructureError::SelfLoop(k));
        }
        adj[a].push((k, b));
        adj[b].push((k, a));
    }
    Ok(adj)
}

/// BFS parents from the root; Err on cycles or disconnection.
/// parent[v] = (edge index, parent vertex), None at the root.
pub fn tree_parents(
    n: usize,
    edges: &[EdgeDatum],
    root: VertexId,
) -> Result<Vec<Option<(usize, usize)>>, StructureError> {
    if root >= n {
        return Err(StructureError::BadVertex(root));
    }
    if edges.len() + 1 != n {
        // a connected graph on n vertices is a tree iff it has n-1 edges
        return Err(if edges.len() + 1 > n {
            StructureError::Cyclic
        } else {
            StructureError::Disconnected
        });
    }
    let adj = adjacency(n, edges)?;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &(k, w) in &adj[v] {
            if parent[v].map_or(false, |(pk, _)| pk == k) {
                continue;
            }
            if seen[w] {
                return Err(StructureError::Cyclic);
            }
            seen[w] = true;
            parent[w] = Some((k, v));
            reached += 1;
            queue.push_back(w);
        }
    }
    if reached != n {
        return Err(StructureError::Disconnected);
    }
    Ok(parent)
}

fn place_key(loc: &Option<Place>) -> String {
    match loc {
        None => "_".into(),
        // serde output is deterministic and needs no field context
        Some(p) => serde_json::to_string(p).unwrap(),
    }
}

fn torsor_key(t: &VertexTorsor) -> String {
    match t {
        VertexTorsor::Split => "s".into(),
        VertexTorsor::Symbolic(k) => format!("y{}", k.tag()),
        VertexTorsor::Concrete(rep) => {
            format!("c{}:{}", rep.kind.tag(), serde_json::to_string(&rep.rep).unwrap())
        }
    }
}

fn marked_keys(marked: &[MarkedPointDatum]) -> Vec<String> {
    let mut keys: Vec<String> = marked
        .iter()
        .map(|mp| format!("(m{},h{},r{},@{})", mp.m, mp.h, mp.r, place_key(&mp.location)))
        .collect();
    keys.sort();
    keys
}

fn attachment_key(a: &Attachment) -> String {
    format!("(m{},h{},t{},@{})", a.m, a.h, a.t, place_key(&a.location))
}

fn boundary_key(b: &BoundaryType) -> String {
    format!("({},m{},h{})", b.kind.tag(), b.m, b.h)
}

/// Recursive vertex encoding; `extra` carries attachment markers for the
/// distinguished vertices.
fn encode_vertex(
    v: usize,
    vertices: &[VertexLabel],
    edges: &[EdgeDatum],
    children: &[Vec<usize>],
    parent: &[Option<(usize, usize)>],
    extra: &[String],
) -> String {
    let mut child_entries: Vec<String> = children[v]
        .iter()
        .map(|&w| {
            let (k, _) = parent[w].unwrap();
            let ed = &edges[k];
            // orient the stored half-labels: index 0 of the pair faces v
            let (near, far) = if ed.ends[0] == v { (0, 1) } else { (1, 0) };
            format!(
                "(e{},n{}:{},f{}:{},{})",
                ed.e,
                ed.half[near].m,
                ed.half[near].h,
                ed.half[far].m,
                ed.half[far].h,
                encode_vertex(w, vertices, edges, children, parent, extra)
            )
        })
        .collect();
    child_entries.sort();
    let lab = &vertices[v];
    format!(
        "[T{},d{},g{},X{},M{:?},C{:?}]",
        torsor_key(&lab.torsor),
        lab.delta,
        lab.genus,
        extra[v],
        marked_keys(&lab.marked),
        child_entries
    )
}

fn encode_tree(
    vertices: &[VertexLabel],
    edges: &[EdgeDatum],
    root: VertexId,
    extra: &[String],
) -> Result<String, StructureError> {
    let parent = tree_parents(vertices.len(), edges, root)?;
    let mut children = vec![Vec::new(); vertices.len()];
    for (w, p) in parent.iter().enumerate() {
        if let Some((_, v)) = p {
            children[*v].push(w);
        }
    }
    Ok(encode_vertex(root, vertices, edges, &children, &parent, extra))
}

impl SimpleDegData {
    /// Canonical byte encoding; equal iff isomorphic fixing the origin.
    pub fn canonical_encode(&self) -> Result<Vec<u8>, StructureError> {
        let mut extra = vec![String::new(); self.vertices.len()];
        if self.origin >= self.vertices.len() {
            return Err(StructureError::BadVertex(self.origin));
        }
        extra[self.origin] = format!("o{}", attachment_key(&self.origin_point));
        let body = encode_tree(&self.vertices, &self.edges, self.origin, &extra)?;
        Ok(format!(
            "S({:?},r{},{}){}",
            self.species,
            self.r,
            boundary_key(&self.boundary),
            body
        )
        .into_bytes())
    }
}

impl DoubleDegData {
    /// Canonical byte encoding; equal iff isomorphic fixing both endpoints
    /// in order.
    pub fn canonical_encode(&self) -> Result<Vec<u8>, StructureError> {
        let n = self.vertices.len();
        let [a, b] = self.endpoints;
        if a >= n {
            return Err(StructureError::BadVertex(a));
        }
        if b >= n {
            return Err(StructureError::BadVertex(b));
        }
        let mut extra = vec![String::new(); n];
        extra[a] = format!("p{}", attachment_key(&self.endpoint_points[0]));
        extra[b] += &format!("q{}", attachment_key(&self.endpoint_points[1]));
        let body = encode_tree(&self.vertices, &self.edges, a, &extra)?;
        Ok(format!(
            "D({:?},r{},{},{}){}",
            self.species,
            self.r,
            boundary_key(&self.boundaries[0]),
            boundary_key(&self.boundaries[1]),
            body
        )
        .into_bytes())
    }
}

impl GlobalDegData {
    /// Deterministic digest: components in stored order (the base curve is a
    /// fixed marked curve), node/marked/critical lists sorted, attached local
    /// data replaced by their canonical encodings.
    pub fn canonical_digest(&self) -> Result<Vec<u8>, StructureError> {
        let mut comp_keys = Vec::new();
        for c in &self.components {
            comp_keys.push(format!(
                "(g{},T{},d{},G{})",
                c.genus,
                torsor_key(&c.torsor),
                c.delta,
                c.generic
            ));
        }
        let mut node_keys = Vec::new();
        for nd in &self.nodes {
            let inner = match &nd.data {
                None => "-".to_string(),
                Some(d) => String::from_utf8(d.canonical_encode()?).unwrap(),
            };
            node_keys.push(format!(
                "({}~{},n0:{}:{},n1:{}:{},r{},{})",
                nd.ends[0], nd.ends[1], nd.half[0].m, nd.half[0].h, nd.half[1].m, nd.half[1].h,
                nd.r, inner
            ));
        }
        node_keys.sort();
        let mut marked_keys_g = Vec::new();
        for mk in &self.marked {
            let inner = match &mk.data {
                None => "-".to_string(),
                Some(d) => String::from_utf8(d.canonical_encode()?).unwrap(),
            };
            marked_keys_g.push(format!(
                "(c{},@{},m{},h{},r{},{})",
                mk.component,
                place_key(&mk.location),
                mk.m,
                mk.h,
                mk.r,
                inner
            ));
        }
        marked_keys_g.sort();
        let mut crit_keys = Vec::new();
        for ck in &self.critical {
            let inner = match &ck.data {
                None => "-".to_string(),
                Some(d) => String::from_utf8(d.canonical_encode()?).unwrap(),
            };
            crit_keys.push(format!(
                "(c{},@{},m{},h{},{})",
                ck.component,
                place_key(&ck.location),
                ck.m,
                ck.h,
                inner
            ));
        }
        crit_keys.sort();
        Ok(format!(
            "G(r{},C{:?},N{:?},M{:?},Z{:?})",
            self.r, comp_keys, node_keys, marked_keys_g, crit_keys
        )
        .into_bytes())
    }
}

/// Encoding equality; errors on structurally broken input.
pub fn is_isomorphic(a: &SimpleDegData, b: &SimpleDegData) -> Result<bool, StructureError> {
    Ok(a.canonical_encode()? == b.canonical_encode()?)
}

pub fn is_isomorphic_double(
    a: &DoubleDegData,
    b: &DoubleDegData,
) -> Result<bool, StructureError> {
    Ok(a.canonical_encode()? == b.canonical_encode()?)
}

/// Vertex bijection a -> b realizing an isomorphism, if one exists.
/// Children with equal encodings are interchangeable, so pairing sorted
/// encodings subtree-by-subtree is sound.
pub fn isomorphism_witness(
    a: &SimpleDegData,
    b: &SimpleDegData,
) -> Result<Option<Vec<usize>>, StructureError> {
    if !is_isomorphic(a, b)? {
        return Ok(None);
    }
    let pa = tree_parents(a.vertices.len(), &a.edges, a.origin)?;
    let pb = tree_parents(b.vertices.len(), &b.edges, b.origin)?;
    let mut ca = vec![Vec::new(); a.vertices.len()];
    for (w, p) in pa.iter().enumerate() {
        if let Some((_, v)) = p {
            ca[*v].push(w);
        }
    }
    let mut cb = vec![Vec::new(); b.vertices.len()];
    for (w, p) in pb.iter().enumerate() {
        if let Some((_, v)) = p {
            cb[*v].push(w);
        }
    }
    let extra_a = vec![String::new(); a.vertices.len()];
    let extra_b = vec![String::new(); b.vertices.len()];
    let key_a = |v: usize| {
        let mut e = None;
        if let Some((k, p)) = pa[v] {
            let ed = &a.edges[k];
            let (near, far) = if ed.ends[0] == p { (0, 1) } else { (1, 0) };
            e = Some((ed.e, ed.half[near], ed.half[far]));
        }
        (
            e,
            encode_vertex(v, &a.vertices, &a.edges, &ca, &pa, &extra_a),
        )
    };
    let key_b = |v: usize| {
        let mut e = None;
        if let Some((k, p)) = pb[v] {
            let ed = &b.edges[k];
            let (near, far) = if ed.ends[0] == p { (0, 1) } else { (1, 0) };
            e = Some((ed.e, ed.half[near], ed.half[far]));
        }
        (
            e,
            encode_vertex(v, &b.vertices, &b.edges, &cb, &pb, &extra_b),
        )
    };
    let mut map = vec![usize::MAX; a.vertices.len()];
    let mut stack = vec![(a.origin, b.origin)];
    while let Some((va, vb)) = stack.pop() {
        map[va] = vb;
        let mut ka: Vec<_> = ca[va].iter().map(|&w| (key_a(w), w)).collect();
        let mut kb: Vec<_> = cb[vb].iter().map(|&w| (key_b(w), w)).collect();
        if ka.len() != kb.len() {
            return Ok(None);
        }
        ka.sort();
        kb.sort();
        for ((la, wa), (lb, wb)) in ka.into_iter().zip(kb) {
            if la != lb {
                return Ok(None);
            }
            stack.push((wa, wb));
        }
    }
    Ok(Some(map))
}
