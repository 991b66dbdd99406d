//! The residue-field Galois action on degeneration data, orbits under a
//! Frobenius power, extraction of data from explicit covers, equivariance
//! of the extraction, and bounded enumeration up to isomorphism.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::field::Fq;
use crate::arith::place::Place;
use crate::arith::PrimeContext;
use crate::degdata::{
    Attachment, BoundaryType, ComponentLabel, CriticalDatum, DoubleDegData, EdgeDatum,
    GlobalDegData, HalfLabel, MarkedDatum, MarkedPointDatum, NodeDatum, SimpleDegData, Species,
    VertexLabel, VertexTorsor,
};
use crate::error::RealizeError;
use crate::torsor::{kind_from_delta, GroupKind, TorsorRep};
use crate::validate::{check_double, check_simple, shape};

/// An element of the absolute Galois group of the base field F_q, as the
/// Frobenius power x -> x^(q^e). Composition adds exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisElement {
    pub q: u64,
    pub e: u64,
}

impl GaloisElement {
    pub fn identity(q: u64) -> GaloisElement {
        GaloisElement { q, e: 0 }
    }

    pub fn frobenius(q: u64) -> GaloisElement {
        GaloisElement { q, e: 1 }
    }

    pub fn compose(&self, other: &GaloisElement) -> GaloisElement {
        assert_eq!(self.q, other.q);
        GaloisElement { q: self.q, e: self.e + other.e }
    }
}

fn move_place(fq: &Fq, s: &GaloisElement, place: &Option<Place>) -> Option<Place> {
    place.as_ref().map(|pl| pl.apply_power(fq, s.q, s.e))
}

fn move_torsor(fq: &Fq, s: &GaloisElement, t: &VertexTorsor) -> VertexTorsor {
    match t {
        VertexTorsor::Concrete(rep) => VertexTorsor::Concrete(rep.apply_power(fq, s.q, s.e)),
        other => other.clone(),
    }
}

/// Transport a simple datum: torsor representatives and recorded places
/// move, the tree and every numeric label stay fixed.
pub fn act_simple(fq: &Fq, s: &GaloisElement, d: &SimpleDegData) -> SimpleDegData {
    let mut out = d.clone();
    for vl in &mut out.vertices {
        vl.torsor = move_torsor(fq, s, &vl.torsor);
        for mp in &mut vl.marked {
            mp.location = move_place(fq, s, &mp.location);
        }
    }
    out.origin_point.location = move_place(fq, s, &out.origin_point.location);
    out
}

pub fn act_double(fq: &Fq, s: &GaloisElement, d: &DoubleDegData) -> DoubleDegData {
    let mut out = d.clone();
    for vl in &mut out.vertices {
        vl.torsor = move_torsor(fq, s, &vl.torsor);
        for mp in &mut vl.marked {
            mp.location = move_place(fq, s, &mp.location);
        }
    }
    for a in &mut out.endpoint_points {
        a.location = move_place(fq, s, &a.location);
    }
    out
}

pub fn act_global(fq: &Fq, s: &GaloisElement, g: &GlobalDegData) -> GlobalDegData {
    let mut out = g.clone();
    for c in &mut out.components {
        c.torsor = move_torsor(fq, s, &c.torsor);
    }
    for nd in &mut out.nodes {
        nd.data = nd.data.as_ref().map(|dd| act_double(fq, s, dd));
    }
    for mk in &mut out.marked {
        mk.location = move_place(fq, s, &mk.location);
        mk.data = mk.data.as_ref().map(|sd| act_simple(fq, s, sd));
    }
    for ck in &mut out.critical {
        ck.location = move_place(fq, s, &ck.location);
        ck.data = ck.data.as_ref().map(|sd| act_simple(fq, s, sd));
    }
    out
}

/// Iterations after which a Frobenius power is guaranteed to fix every
/// scalar in sight: the working-field degree times the lcm of the recorded
/// place degrees.
fn orbit_bound(fq: &Fq, places: &[&Option<Place>]) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let mut l = 1u64;
    for pl in places.iter().filter_map(|o| o.as_ref()) {
        let d = pl.degree() as u64;
        l = l / gcd(l, d) * d;
    }
    fq.degree() as u64 * l
}

fn simple_places(d: &SimpleDegData) -> Vec<&Option<Place>> {
    let mut out = vec![&d.origin_point.location];
    for vl in &d.vertices {
        for mp in &vl.marked {
            out.push(&mp.location);
        }
    }
    out
}

/// Orbit of a simple datum under the cyclic group a Galois element
/// generates, as the sorted set of canonical encodings.
pub fn orbit_simple(fq: &Fq, s: &GaloisElement, d: &SimpleDegData) -> Vec<Vec<u8>> {
    let bound = orbit_bound(fq, &simple_places(d));
    let mut out = vec![d.canonical_encode().expect("valid tree")];
    let mut cur = d.clone();
    for _ in 0..bound {
        cur = act_simple(fq, s, &cur);
        let enc = cur.canonical_encode().expect("valid tree");
        if enc == out[0] {
            break;
        }
        out.push(enc);
    }
    out.sort();
    out.dedup();
    out
}

pub fn orbit_double(fq: &Fq, s: &GaloisElement, d: &DoubleDegData) -> Vec<Vec<u8>> {
    let mut places: Vec<&Option<Place>> = d.endpoint_points.iter().map(|a| &a.location).collect();
    for vl in &d.vertices {
        for mp in &vl.marked {
            places.push(&mp.location);
        }
    }
    let bound = orbit_bound(fq, &places);
    let mut out = vec![d.canonical_encode().expect("valid tree")];
    let mut cur = d.clone();
    for _ in 0..bound {
        cur = act_double(fq, s, &cur);
        let enc = cur.canonical_encode().expect("valid tree");
        if enc == out[0] {
            break;
        }
        out.push(enc);
    }
    out.sort();
    out.dedup();
    out
}

pub fn orbit_global(fq: &Fq, s: &GaloisElement, g: &GlobalDegData) -> Vec<Vec<u8>> {
    let mut places: Vec<&Option<Place>> = Vec::new();
    for mk in &g.marked {
        places.push(&mk.location);
        if let Some(sd) = &mk.data {
            places.extend(simple_places(sd));
        }
    }
    for ck in &g.critical {
        places.push(&ck.location);
        if let Some(sd) = &ck.data {
            places.extend(simple_places(sd));
        }
    }
    let bound = orbit_bound(fq, &places);
    let mut out = vec![g.canonical_digest().expect("valid datum")];
    let mut cur = g.clone();
    for _ in 0..bound {
        cur = act_global(fq, s, &cur);
        let enc = cur.canonical_digest().expect("valid datum");
        if enc == out[0] {
            break;
        }
        out.push(enc);
    }
    out.sort();
    out.dedup();
    out
}

/// An explicit cover of a semi-stable configuration of lines: a
/// degree-p equation on each component plus the points of interest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverComponent {
    pub genus: u64,
    pub torsor: TorsorRep,
    #[serde(default)]
    pub punctures: Vec<Place>,
}

/// A node of the base configuration, located on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverNode {
    pub ends: [usize; 2],
    pub places: [Place; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDescription {
    pub components: Vec<CoverComponent>,
    #[serde(default)]
    pub nodes: Vec<CoverNode>,
}

/// Transport a cover description coefficient-wise.
pub fn apply_cover(fq: &Fq, s: &GaloisElement, c: &CoverDescription) -> CoverDescription {
    CoverDescription {
        components: c
            .components
            .iter()
            .map(|cc| CoverComponent {
                genus: cc.genus,
                torsor: cc.torsor.apply_power(fq, s.q, s.e),
                punctures: cc
                    .punctures
                    .iter()
                    .map(|pl| pl.apply_power(fq, s.q, s.e))
                    .collect(),
            })
            .collect(),
        nodes: c
            .nodes
            .iter()
            .map(|nd| CoverNode {
                ends: nd.ends,
                places: [
                    nd.places[0].apply_power(fq, s.q, s.e),
                    nd.places[1].apply_power(fq, s.q, s.e),
                ],
            })
            .collect(),
    }
}

/// Read the degeneration data off an explicit cover: per-component kind and
/// conductor data at every special or declared point, with zeros of the
/// defining differential becoming critical points and everything else a
/// marked point. Local data are left as stubs.
pub fn extract_degdata(
    ctx: &PrimeContext,
    fq: &Fq,
    cover: &CoverDescription,
) -> Result<GlobalDegData, RealizeError> {
    let nc = cover.components.len();
    let mut components = Vec::with_capacity(nc);
    let mut marked = Vec::new();
    let mut critical = Vec::new();
    let mut node_half: Vec<[Option<HalfLabel>; 2]> = vec![[None, None]; cover.nodes.len()];

    for (i, cc) in cover.components.iter().enumerate() {
        let loc = format!("components[{i}]");
        cc.torsor
            .check_admissible(fq)
            .map_err(|e| RealizeError::new(loc.clone(), e.to_string()))?;
        let kind = cc.torsor.kind;
        components.push(ComponentLabel {
            genus: cc.genus,
            torsor: VertexTorsor::Concrete(cc.torsor.clone()),
            delta: if kind.is_radicial() { ctx.vkp } else { 0 },
            generic: kind.is_radicial(),
        });

        // places of interest: every special point plus every declared
        // puncture, minus the node places which become half labels
        let mut at: Vec<(Place, (i64, u64))> = cc
            .torsor
            .special_points(fq)
            .map_err(|e| RealizeError::new(loc.clone(), e.to_string()))?;
        for pl in &cc.punctures {
            if !at.iter().any(|(q, _)| q == pl) {
                let inv = cc
                    .torsor
                    .conductor_residue(fq, pl)
                    .map_err(|e| RealizeError::new(loc.clone(), e.to_string()))?;
                at.push((pl.clone(), inv));
            }
        }
        at.sort_by(|(a, _), (b, _)| a.sort_key(fq).cmp(&b.sort_key(fq)));
        for (pl, (m, h)) in at {
            let node_side = cover.nodes.iter().enumerate().find_map(|(j, nd)| {
                (0..2).find(|&sd| nd.ends[sd] == i && nd.places[sd] == pl).map(|sd| (j, sd))
            });
            if let Some((j, sd)) = node_side {
                node_half[j][sd] = Some(HalfLabel { m, h });
            } else if m <= -2 {
                critical.push(CriticalDatum { component: i, location: Some(pl), m, h, data: None });
            } else {
                marked.push(MarkedDatum {
                    component: i,
                    location: Some(pl),
                    m,
                    h,
                    r: m + 1,
                    data: None,
                });
            }
        }
    }

    let mut nodes = Vec::with_capacity(cover.nodes.len());
    for (j, nd) in cover.nodes.iter().enumerate() {
        let mut half = [HalfLabel { m: 0, h: 0 }; 2];
        for sd in 0..2 {
            let i = nd.ends[sd];
            if i >= nc {
                return Err(RealizeError::new(
                    format!("nodes[{j}].ends[{sd}]"),
                    format!("component index {i} out of range"),
                ));
            }
            half[sd] = match node_half[j][sd].take() {
                Some(hl) => hl,
                None => {
                    let inv = cover.components[i]
                        .torsor
                        .conductor_residue(fq, &nd.places[sd])
                        .map_err(|e| RealizeError::new(format!("nodes[{j}]"), e.to_string()))?;
                    HalfLabel { m: inv.0, h: inv.1 }
                }
            };
        }
        nodes.push(NodeDatum { ends: nd.ends, half, r: 0, data: None });
    }

    let r = marked.iter().map(|mk| mk.r).sum();
    Ok(GlobalDegData { components, nodes, marked, critical, r })
}

/// The commuting square at the residue level: extracting after moving the
/// cover agrees with moving the extracted datum.
pub fn equivariance_check(
    ctx: &PrimeContext,
    fq: &Fq,
    s: &GaloisElement,
    cover: &CoverDescription,
) -> Result<bool, RealizeError> {
    let direct = extract_degdata(ctx, fq, &apply_cover(fq, s, cover))?;
    let routed = act_global(fq, s, &extract_degdata(ctx, fq, cover)?);
    let a = direct.canonical_digest().map_err(|e| RealizeError::new("extract", e.to_string()))?;
    let b = routed.canonical_digest().map_err(|e| RealizeError::new("act", e.to_string()))?;
    Ok(a == b)
}

/// All labeled trees on n vertices, from Prufer sequences. Edges are stored
/// with the smaller endpoint first.
fn labeled_trees(n: usize) -> Vec<Vec<[usize; 2]>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![[0, 1]]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        out.push(prufer_tree(n, &seq));
        let mut k = 0;
        loop {
            seq[k] += 1;
            if seq[k] < n {
                break;
            }
            seq[k] = 0;
            k += 1;
            if k == n - 2 {
                return out;
            }
        }
    }
}

fn prufer_tree(n: usize, seq: &[usize]) -> Vec<[usize; 2]> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| degree[i] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push([leaf.min(s), leaf.max(s)]);
        degree[leaf] -= 1;
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push([rest[0].min(rest[1]), rest[0].max(rest[1])]);
    edges
}

/// Conductor steps of (p - 1) available to a vertex.
fn delta_choices(ctx: &PrimeContext) -> Vec<u64> {
    (0..=ctx.vkp / (ctx.p - 1)).map(|k| k * (ctx.p - 1)).collect()
}

/// Marked-point options for a vertex of the given kind: nothing, or a
/// single point within the conductor bound.
fn marked_choices(ctx: &PrimeContext, kind: GroupKind, max_m: i64) -> Vec<Option<MarkedPointDatum>> {
    let p = ctx.p;
    let mut out: Vec<Option<MarkedPointDatum>> = vec![None];
    match kind {
        GroupKind::Etale => {
            // conductor 0 would put a branch point on an unramified point
            for m in 1..=max_m {
                if m % p as i64 != 0 {
                    out.push(Some(MarkedPointDatum { location: None, m, h: 0, r: m + 1 }));
                }
            }
        }
        GroupKind::Mult => {
            for h in 1..p {
                out.push(Some(MarkedPointDatum { location: None, m: 0, h, r: 1 }));
            }
        }
        GroupKind::Add => {
            for m in 1..=max_m {
                if m % p as i64 != 0 {
                    out.push(Some(MarkedPointDatum { location: None, m, h: 0, r: m + 1 }));
                }
            }
        }
    }
    out
}

/// Attachment options at a boundary vertex: thickness, conductor and
/// residue of the attachment point plus the matching boundary type, with
/// the different at the boundary forced by the crossing rule.
fn attachment_choices(
    ctx: &PrimeContext,
    kind: GroupKind,
    delta: u64,
    max_m: i64,
    max_t: u64,
) -> Vec<(Attachment, BoundaryType)> {
    let p = ctx.p;
    let mut out = Vec::new();
    for t in 1..=max_t {
        for m in -max_m..=max_m {
            for h in 0..p {
                if shape(p, kind, m, h).is_err() {
                    continue;
                }
                // a (0, 0) attachment would give the trivial etale boundary
                if m == 0 && h == 0 {
                    continue;
                }
                let bd = delta as i128 + t as i128 * m as i128 * (p as i128 - 1);
                if bd < 0 || bd > ctx.vkp as i128 {
                    continue;
                }
                let bkind = match kind_from_delta(ctx, bd as u64) {
                    Some(k) => k,
                    None => continue,
                };
                let (bm, bh) = (-m, (p - h) % p);
                if shape(p, bkind, bm, bh).is_err() {
                    continue;
                }
                out.push((
                    Attachment { m, h, t, location: None },
                    BoundaryType { kind: bkind, m: bm, h: bh },
                ));
            }
        }
    }
    out
}

/// Half-label options for one edge given the deltas at its ends: the
/// conductor on the first side is forced by the drop, the residue ranges
/// over whatever the two shapes allow.
fn edge_choices(
    ctx: &PrimeContext,
    kinds: [GroupKind; 2],
    deltas: [u64; 2],
    max_m: i64,
    max_t: u64,
) -> Vec<EdgeChoice> {
    let p = ctx.p;
    let mut out = Vec::new();
    for t in 1..=max_t {
        let step = t as i128 * (p as i128 - 1);
        let diff = deltas[1] as i128 - deltas[0] as i128;
        if diff % step != 0 {
            continue;
        }
        let m = diff / step;
        if m.unsigned_abs() > max_m as u128 {
            continue;
        }
        let m = m as i64;
        for h in 0..p {
            if shape(p, kinds[0], m, h).is_err() || shape(p, kinds[1], -m, (p - h) % p).is_err() {
                continue;
            }
            out.push(EdgeChoice {
                e: p * t,
                half: [HalfLabel { m, h }, HalfLabel { m: -m, h: (p - h) % p }],
            });
        }
    }
    out
}

#[derive(Clone, Copy)]
struct EdgeChoice {
    e: u64,
    half: [HalfLabel; 2],
}

/// Per-vertex admissibility of the incident labels: positive conductor
/// somewhere on etale vertices, differential degree -2 and vanishing
/// residue sum on radicial ones.
fn vertex_ledger_ok(p: u64, kind: GroupKind, incident: &[(i64, u64)]) -> bool {
    match kind {
        GroupKind::Etale => incident.iter().any(|&(m, _)| m > 0),
        GroupKind::Mult => {
            incident.iter().map(|&(m, _)| m + 1).sum::<i64>() == 2
                && incident.iter().map(|&(_, h)| h).sum::<u64>() % p == 0
        }
        GroupKind::Add => incident.iter().map(|&(m, _)| m + 1).sum::<i64>() == 2,
    }
}

struct EnumFrame {
    kinds: Vec<GroupKind>,
    deltas: Vec<u64>,
    edges: Vec<EdgeDatum>,
}

/// Enumerate the kind, delta and edge assignments over one labeled tree,
/// calling the sink for each combination that survives the vertex ledgers
/// away from the boundary vertices.
fn enum_frames(
    ctx: &PrimeContext,
    tree: &[[usize; 2]],
    n: usize,
    max_m: i64,
    max_t: u64,
    sink: &mut dyn FnMut(&EnumFrame),
) {
    let deltas = delta_choices(ctx);
    let mut pick = vec![0usize; n];
    loop {
        let delta: Vec<u64> = pick.iter().map(|&i| deltas[i]).collect();
        let kinds: Vec<GroupKind> = delta
            .iter()
            .map(|&d| kind_from_delta(ctx, d).expect("delta within range"))
            .collect();
        let per_edge: Vec<Vec<EdgeChoice>> = tree
            .iter()
            .map(|&[a, b]| {
                edge_choices(ctx, [kinds[a], kinds[b]], [delta[a], delta[b]], max_m, max_t)
            })
            .collect();
        if per_edge.iter().all(|c| !c.is_empty()) {
            let mut epick = vec![0usize; tree.len()];
            loop {
                let edges: Vec<EdgeDatum> = tree
                    .iter()
                    .enumerate()
                    .map(|(k, &[a, b])| {
                        let c = per_edge[k][epick[k]];
                        EdgeDatum { ends: [a, b], e: c.e, half: c.half }
                    })
                    .collect();
                sink(&EnumFrame { kinds: kinds.clone(), deltas: delta.clone(), edges });
                if !advance(&mut epick, &per_edge.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                    break;
                }
            }
        }
        if !advance(&mut pick, &vec![deltas.len(); n]) {
            break;
        }
    }
}

/// Odometer step; false when the index vector wraps around.
fn advance(pick: &mut [usize], lens: &[usize]) -> bool {
    for (p, &l) in pick.iter_mut().zip(lens) {
        *p += 1;
        if *p < l {
            return true;
        }
        *p = 0;
    }
    false
}

/// All simple data within the bounds, nonsplit species, symbolic torsors,
/// up to isomorphism, sorted by canonical encoding: at most `max_vertices`
/// vertices, all conductors bounded by `max_m` in absolute value, all
/// thicknesses at most `max_t`, at most one marked point per vertex.
pub fn enum_simple(
    ctx: &PrimeContext,
    max_vertices: usize,
    max_m: i64,
    max_t: u64,
) -> Vec<SimpleDegData> {
    let fq = Fq::prime(ctx.p).expect("valid prime");
    let mut seen: BTreeMap<Vec<u8>, SimpleDegData> = BTreeMap::new();
    for n in 1..=max_vertices {
        for tree in labeled_trees(n) {
            enum_frames(ctx, &tree, n, max_m, max_t, &mut |frame| {
                // incident edge labels per vertex, fixed for the frame
                let mut base: Vec<Vec<(i64, u64)>> = vec![Vec::new(); n];
                for ed in &frame.edges {
                    for side in 0..2 {
                        base[ed.ends[side]].push((ed.half[side].m, ed.half[side].h));
                    }
                }
                let marked: Vec<Vec<Option<MarkedPointDatum>>> = (0..n)
                    .map(|v| marked_choices(ctx, frame.kinds[v], max_m))
                    .collect();
                let attach = attachment_choices(ctx, frame.kinds[0], frame.deltas[0], max_m, max_t);
                if attach.is_empty() {
                    return;
                }
                let mut mpick = vec![0usize; n];
                loop {
                    // vertices away from the origin see all their labels now
                    let ok_away = (1..n).all(|v| {
                        let mut inc = base[v].clone();
                        if let Some(mp) = &marked[v][mpick[v]] {
                            inc.push((mp.m, mp.h));
                        }
                        vertex_ledger_ok(ctx.p, frame.kinds[v], &inc)
                    });
                    if ok_away {
                        for (att, bd) in &attach {
                            let mut inc = base[0].clone();
                            if let Some(mp) = &marked[0][mpick[0]] {
                                inc.push((mp.m, mp.h));
                            }
                            inc.push((att.m, att.h));
                            if !vertex_ledger_ok(ctx.p, frame.kinds[0], &inc) {
                                continue;
                            }
                            let vertices: Vec<VertexLabel> = (0..n)
                                .map(|v| VertexLabel {
                                    torsor: VertexTorsor::Symbolic(frame.kinds[v]),
                                    delta: frame.deltas[v],
                                    genus: 0,
                                    marked: marked[v][mpick[v]].iter().cloned().collect(),
                                })
                                .collect();
                            let r = vertices
                                .iter()
                                .flat_map(|vl| vl.marked.iter())
                                .map(|mp| mp.r)
                                .sum();
                            let d = SimpleDegData {
                                species: Species::NonSplit,
                                r,
                                boundary: bd.clone(),
                                vertices,
                                edges: frame.edges.clone(),
                                origin: 0,
                                origin_point: att.clone(),
                            };
                            if !genus_ledger_balances(
                                ctx,
                                d.r,
                                &[(d.boundary.m, d.origin, &d.origin_point)],
                                &d.vertices,
                                &d.edges,
                            ) {
                                continue;
                            }
                            if check_simple(ctx, &fq, &d).all_pass() {
                                let enc = d.canonical_encode().expect("tree by construction");
                                seen.entry(enc).or_insert(d);
                            }
                        }
                    }
                    if !advance(&mut mpick, &marked.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                        break;
                    }
                }
            });
        }
    }
    seen.into_values().collect()
}

/// All double data within the bounds, mirroring `enum_simple`; both
/// endpoints range over the vertices.
pub fn enum_double(
    ctx: &PrimeContext,
    max_vertices: usize,
    max_m: i64,
    max_t: u64,
) -> Vec<DoubleDegData> {
    let fq = Fq::prime(ctx.p).expect("valid prime");
    let mut seen: BTreeMap<Vec<u8>, DoubleDegData> = BTreeMap::new();
    for n in 1..=max_vertices {
        for tree in labeled_trees(n) {
            enum_frames(ctx, &tree, n, max_m, max_t, &mut |frame| {
                let mut base: Vec<Vec<(i64, u64)>> = vec![Vec::new(); n];
                for ed in &frame.edges {
                    for side in 0..2 {
                        base[ed.ends[side]].push((ed.half[side].m, ed.half[side].h));
                    }
                }
                let marked: Vec<Vec<Option<MarkedPointDatum>>> = (0..n)
                    .map(|v| marked_choices(ctx, frame.kinds[v], max_m))
                    .collect();
                let attach: Vec<Vec<(Attachment, BoundaryType)>> = (0..n)
                    .map(|v| attachment_choices(ctx, frame.kinds[v], frame.deltas[v], max_m, max_t))
                    .collect();
                let mut mpick = vec![0usize; n];
                loop {
                    for a in 0..n {
                        for b in 0..n {
                            for (att_a, bd_a) in &attach[a] {
                                for (att_b, bd_b) in &attach[b] {
                                    let ok = (0..n).all(|v| {
                                        let mut inc = base[v].clone();
                                        if let Some(mp) = &marked[v][mpick[v]] {
                                            inc.push((mp.m, mp.h));
                                        }
                                        if v == a {
                                            inc.push((att_a.m, att_a.h));
                                        }
                                        if v == b {
                                            inc.push((att_b.m, att_b.h));
                                        }
                                        vertex_ledger_ok(ctx.p, frame.kinds[v], &inc)
                                    });
                                    if !ok {
                                        continue;
                                    }
                                    let vertices: Vec<VertexLabel> = (0..n)
                                        .map(|v| VertexLabel {
                                            torsor: VertexTorsor::Symbolic(frame.kinds[v]),
                                            delta: frame.deltas[v],
                                            genus: 0,
                                            marked: marked[v][mpick[v]].iter().cloned().collect(),
                                        })
                                        .collect();
                                    let r = vertices
                                        .iter()
                                        .flat_map(|vl| vl.marked.iter())
                                        .map(|mp| mp.r)
                                        .sum();
                                    let d = DoubleDegData {
                                        species: Species::NonSplit,
                                        r,
                                        boundaries: [bd_a.clone(), bd_b.clone()],
                                        vertices,
                                        edges: frame.edges.clone(),
                                        endpoints: [a, b],
                                        endpoint_points: [att_a.clone(), att_b.clone()],
                                    };
                                    if !genus_ledger_balances(
                                        ctx,
                                        d.r,
                                        &[
                                            (d.boundaries[0].m, d.endpoints[0], &d.endpoint_points[0]),
                                            (d.boundaries[1].m, d.endpoints[1], &d.endpoint_points[1]),
                                        ],
                                        &d.vertices,
                                        &d.edges,
                                    ) {
                                        continue;
                                    }
                                    if check_double(ctx, &fq, &d).all_pass() {
                                        let enc =
                                            d.canonical_encode().expect("tree by construction");
                                        seen.entry(enc).or_insert(d);
                                    }
                                }
                            }
                        }
                    }
                    if !advance(&mut mpick, &marked.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                        break;
                    }
                }
            });
        }
    }
    seen.into_values().collect()
}

/// Cheap form of the genus ledger used to prune before full validation.
fn genus_ledger_balances(
    ctx: &PrimeContext,
    r: i64,
    boundaries: &[(i64, usize, &Attachment)],
    vertices: &[VertexLabel],
    edges: &[EdgeDatum],
) -> bool {
    let lhs = r - boundaries.iter().map(|&(m, _, _)| m).sum::<i64>()
        + boundaries.len() as i64
        - 2;
    let mut per_vertex: Vec<i64> = vertices
        .iter()
        .map(|vl| -2 + vl.marked.iter().map(|mp| mp.m + 1).sum::<i64>())
        .collect();
    for ed in edges {
        for side in 0..2 {
            per_vertex[ed.ends[side]] += ed.half[side].m + 1;
        }
    }
    for &(_, v, att) in boundaries {
        per_vertex[v] += att.m + 1;
    }
    let rhs: i64 = vertices
        .iter()
        .zip(&per_vertex)
        .filter(|(vl, _)| vl.torsor.kind() == Some(GroupKind::Etale))
        .map(|(_, s)| *s)
        .sum();
    let _ = ctx;
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::normalize;
    use crate::arith::ratfunc::RationalFunction;
    use crate::fixtures;
    use crate::validate::check_global;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_square() {
        let (_, fq, d) = fixtures::ramified_pair_concrete();
        let id = GaloisElement::identity(3);
        assert_eq!(act_simple(&fq, &id, &d), d);
        let fr = GaloisElement::frobenius(3);
        let once = act_simple(&fq, &fr, &d);
        assert_ne!(once.canonical_encode().unwrap(), d.canonical_encode().unwrap());
        let twice = act_simple(&fq, &fr, &once);
        assert_eq!(twice.canonical_encode().unwrap(), d.canonical_encode().unwrap());
    }

    #[test]
    fn act_preserves_reports() {
        let (ctx, fq, d) = fixtures::ramified_pair_concrete();
        let fr = GaloisElement::frobenius(3);
        let moved = act_simple(&fq, &fr, &d);
        let before = serde_json::to_string(&check_simple(&ctx, &fq, &d)).unwrap();
        let after = serde_json::to_string(&check_simple(&ctx, &fq, &moved)).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn orbit_sizes() {
        let (_, fq, d) = fixtures::ramified_pair_concrete();
        assert_eq!(orbit_simple(&fq, &GaloisElement::frobenius(3), &d).len(), 2);
        // base-rational labels: orbit is a single class
        let (_, fq3, plain) = fixtures::ramified_pair(3);
        assert_eq!(orbit_simple(&fq3, &GaloisElement::frobenius(3), &plain).len(), 1);
    }

    fn line_cover(fq: &Fq, kind: GroupKind, num: Vec<u64>, den: Vec<u64>) -> CoverDescription {
        let num = normalize(fq, num.into_iter().map(|c| fq.from_u64(c)).collect());
        let den = normalize(fq, den.into_iter().map(|c| fq.from_u64(c)).collect());
        let rep = RationalFunction::new(fq, &num, &den).unwrap();
        CoverDescription {
            components: vec![CoverComponent {
                genus: 0,
                torsor: TorsorRep::new(kind, rep),
                punctures: Vec::new(),
            }],
            nodes: Vec::new(),
        }
    }

    #[test]
    fn extraction_reads_conductors() {
        let ctx = fixtures::context(3);
        let fq = Fq::prime(3).unwrap();

        // Kummer equation f = t: simple zero at 0, simple pole at infinity
        let cover = line_cover(&fq, GroupKind::Mult, vec![0, 1], vec![1]);
        let g = extract_degdata(&ctx, &fq, &cover).unwrap();
        assert!(g.critical.is_empty());
        let mut labels: Vec<(i64, u64)> = g.marked.iter().map(|mk| (mk.m, mk.h)).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![(0, 1), (0, 2)]);

        // Artin-Schreier equation g = 1/t^2: conductor 2 at the pole
        let cover = line_cover(&fq, GroupKind::Etale, vec![1], vec![0, 0, 1]);
        let g = extract_degdata(&ctx, &fq, &cover).unwrap();
        assert_eq!(g.marked.len(), 1);
        assert_eq!((g.marked[0].m, g.marked[0].h, g.marked[0].r), (2, 0, 3));

        // Kummer equation f = t^2 + 1: the derivative vanishes at 0, so a
        // critical point of conductor -2 appears there
        let cover = line_cover(&fq, GroupKind::Mult, vec![1, 0, 1], vec![1]);
        let g = extract_degdata(&ctx, &fq, &cover).unwrap();
        assert_eq!(g.critical.len(), 1);
        assert_eq!((g.critical[0].m, g.critical[0].h), (-2, 0));
        let hs: Vec<u64> = g.marked.iter().map(|mk| mk.h).collect();
        assert_eq!(hs.iter().sum::<u64>() % 3, 0);
    }

    #[test]
    fn equivariance_on_moved_coefficients() {
        let ctx = fixtures::context(3);
        let fq = Fq::make(3, 2).unwrap();
        let a = fq.decode(3);
        // f = t - a with a outside the prime field
        let num = normalize(&fq, vec![fq.neg(&a), fq.one()]);
        let den = normalize(&fq, vec![fq.one()]);
        let rep = RationalFunction::new(&fq, &num, &den).unwrap();
        let cover = CoverDescription {
            components: vec![CoverComponent {
                genus: 0,
                torsor: TorsorRep::new(GroupKind::Mult, rep),
                punctures: Vec::new(),
            }],
            nodes: Vec::new(),
        };
        let fr = GaloisElement::frobenius(3);
        assert!(equivariance_check(&ctx, &fq, &fr, &cover).unwrap());
        assert!(equivariance_check(&ctx, &fq, &GaloisElement::identity(3), &cover).unwrap());
        // the move is not a fixed point: the marked places really travel
        let before = extract_degdata(&ctx, &fq, &cover).unwrap();
        let after = extract_degdata(&ctx, &fq, &apply_cover(&fq, &fr, &cover)).unwrap();
        assert_ne!(
            serde_json::to_string(&before.marked).unwrap(),
            serde_json::to_string(&after.marked).unwrap()
        );
    }

    #[test]
    fn random_equivariance() {
        let ctx = fixtures::context(3);
        let fq = Fq::make(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_9a10);
        let fr = GaloisElement::frobenius(3);
        let mut checked = 0;
        while checked < 25 {
            let kind = match rng.gen_range(0..3) {
                0 => GroupKind::Etale,
                1 => GroupKind::Mult,
                _ => GroupKind::Add,
            };
            let deg_n = rng.gen_range(0..3);
            let deg_d = rng.gen_range(0..3);
            let num = normalize(
                &fq,
                (0..=deg_n).map(|_| fq.decode(rng.gen_range(0..9))).collect(),
            );
            let den = normalize(
                &fq,
                (0..=deg_d).map(|_| fq.decode(rng.gen_range(0..9))).collect(),
            );
            let rep = match RationalFunction::new(&fq, &num, &den) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let torsor = TorsorRep::new(kind, rep);
            if torsor.check_admissible(&fq).is_err() {
                continue;
            }
            let cover = CoverDescription {
                components: vec![CoverComponent { genus: 0, torsor, punctures: Vec::new() }],
                nodes: Vec::new(),
            };
            assert!(equivariance_check(&ctx, &fq, &fr, &cover).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn enumeration_contains_the_tail() {
        let (ctx, _, d) = fixtures::tail(3);
        let all = enum_simple(&ctx, 1, 4, 1);
        let enc = d.canonical_encode().unwrap();
        assert!(all.iter().any(|x| x.canonical_encode().unwrap() == enc));
        // determinism: a second run is identical
        let again = enum_simple(&ctx, 1, 4, 1);
        assert_eq!(
            serde_json::to_string(&all).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
        assert!(enum_simple(&ctx, 1, 0, 0).is_empty());
    }

    #[test]
    fn enumeration_is_fixed_by_the_action() {
        let ctx = fixtures::context(3);
        let fq = Fq::prime(3).unwrap();
        let fr = GaloisElement::frobenius(3);
        for d in enum_simple(&ctx, 2, 2, 1) {
            let moved = act_simple(&fq, &fr, &d);
            assert_eq!(moved.canonical_encode().unwrap(), d.canonical_encode().unwrap());
        }
    }

    #[test]
    fn double_enumeration_contains_the_bridge() {
        let (ctx, _, d) = fixtures::bridge(3);
        let all = enum_double(&ctx, 1, 2, 2);
        let enc = d.canonical_encode().unwrap();
        assert!(all.iter().any(|x| x.canonical_encode().unwrap() == enc));
    }

    #[test]
    fn global_orbit_of_stub_data() {
        let (_, fq, g) = fixtures::genus_two_global(3);
        assert_eq!(orbit_global(&fq, &GaloisElement::frobenius(3), &g).len(), 1);
        let rep = check_global(&fixtures::context(3), &fq, &g);
        assert!(rep.all_pass());
    }
}
