//! Axiom checking for degeneration data.
//!
//! Each check emits a report: one pass entry per axiom that holds, one fail
//! entry per violation with a field path, plus informational entries (the
//! type genus, the boundary different). Checks never abort early; a report
//! lists everything wrong at once.
//!
//! Local axioms (simple and double data):
//!   A1 type shape, A2 tree structure, A3 point sanity, A4 torsor labels,
//!   A5 branch ledger, A6 edge antisymmetry, A7 different accounting,
//!   A8 genus identity, A9 splitting agreement.
//! Global axioms:
//!   G1 component torsors, G2 node matching, G3 marked matching,
//!   G4 critical coverage, G5 branch ledger, G6 local data,
//!   G7 generic zero count, G8 different dictionary.

use serde::Serialize;
use thiserror::Error;

use crate::arith::field::Fq;
use crate::arith::place::Place;
use crate::arith::PrimeContext;
use crate::degdata::{
    adjacency, tree_parents, Attachment, BoundaryType, DoubleDegData, EdgeDatum, GlobalDegData,
    SimpleDegData, Species, VertexLabel, VertexTorsor,
};
use crate::torsor::{kind_from_delta, GroupKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub axiom: String,
    pub status: Status,
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<ReportEntry>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    fn fail(&mut self, axiom: &str, location: impl Into<String>, message: impl Into<String>) {
        self.entries.push(ReportEntry {
            axiom: axiom.into(),
            status: Status::Fail,
            location: location.into(),
            message: message.into(),
        });
    }

    fn info(&mut self, axiom: &str, location: impl Into<String>, message: impl Into<String>) {
        self.entries.push(ReportEntry {
            axiom: axiom.into(),
            status: Status::Info,
            location: location.into(),
            message: message.into(),
        });
    }

    /// Emit the pass entry for an axiom if no failure was recorded for it
    /// since `mark` (a prior entries length).
    fn close(&mut self, axiom: &str, mark: usize, message: &str) {
        let failed = self.entries[mark..]
            .iter()
            .any(|e| e.axiom == axiom && e.status == Status::Fail);
        if !failed {
            self.entries.push(ReportEntry {
                axiom: axiom.into(),
                status: Status::Pass,
                location: String::new(),
                message: message.into(),
            });
        }
    }

    fn extend_prefixed(&mut self, prefix: &str, sub: ValidationReport) {
        for mut e in sub.entries {
            e.location = if e.location.is_empty() {
                prefix.to_string()
            } else {
                format!("{prefix}.{}", e.location)
            };
            self.entries.push(e);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("branch ledger gives negative genus multiplier {0}")]
    Negative(i64),
    #[error("genus formula does not yield an integer")]
    NotIntegral,
    #[error("tail conductor must be negative, got {0}")]
    BadTail(i64),
}

fn ledger_genus(ctx: &PrimeContext, k: i64) -> Result<u64, GenusError> {
    if k < 0 {
        return Err(GenusError::Negative(k));
    }
    let twice = (k as i128) * ((ctx.p - 1) as i128);
    if twice % 2 != 0 {
        return Err(GenusError::NotIntegral);
    }
    Ok((twice / 2) as u64)
}

/// Genus of the special fiber a simple datum of type (r, m) describes.
pub fn genus_simple(ctx: &PrimeContext, r: i64, m: i64) -> Result<u64, GenusError> {
    ledger_genus(ctx, r - m - 1)
}

/// Genus for a double datum of type (r, m1, m2).
pub fn genus_double(ctx: &PrimeContext, r: i64, m1: i64, m2: i64) -> Result<u64, GenusError> {
    ledger_genus(ctx, r - m1 - m2)
}

/// Genus of the tail attached at a critical point of conductor m <= -1.
pub fn genus_tail(ctx: &PrimeContext, m: i64) -> Result<u64, GenusError> {
    if m >= 0 {
        return Err(GenusError::BadTail(m));
    }
    ledger_genus(ctx, -m - 1)
}

/// Per-kind shape of a conductor-residue pair, usable as a generation filter. The conductor is never a
/// nonzero multiple of p because it comes from the order of a derivative or
/// a logarithmic differential.
pub fn shape(p: u64, kind: GroupKind, m: i64, h: u64) -> Result<(), String> {
    if m != 0 && m.unsigned_abs() % p == 0 {
        return Err(format!("conductor {m} is a nonzero multiple of p"));
    }
    match kind {
        GroupKind::Etale => {
            if m < 0 {
                return Err(format!("etale conductor {m} is negative"));
            }
            if h != 0 {
                return Err(format!("etale residue {h} is nonzero"));
            }
        }
        GroupKind::Mult => {
            if m > 0 {
                return Err(format!("multiplicative conductor {m} is positive"));
            }
            if (m == 0) != (h != 0) {
                return Err(format!(
                    "multiplicative residue must be nonzero exactly when the conductor is zero, got ({m}, {h})"
                ));
            }
        }
        GroupKind::Add => {
            if m == 0 {
                return Err("additive conductor is zero".into());
            }
            if h != 0 {
                return Err(format!("additive residue {h} is nonzero"));
            }
        }
    }
    Ok(())
}

/// One boundary of a local datum: the type triple plus its attachment point.
struct Boundary<'a> {
    ty: &'a BoundaryType,
    ty_loc: String,
    vertex: usize,
    point: &'a Attachment,
    point_loc: String,
}

struct LocalView<'a> {
    species: Species,
    r: i64,
    boundaries: Vec<Boundary<'a>>,
    vertices: &'a [VertexLabel],
    edges: &'a [EdgeDatum],
}

/// A conductor-residue pair incident to a vertex, with its field path and
/// optional explicit location.
struct Incident<'a> {
    m: i64,
    h: u64,
    loc: String,
    place: Option<&'a Place>,
}

/// Check a simple datum against the local axioms.
pub fn check_simple(ctx: &PrimeContext, fq: &Fq, d: &SimpleDegData) -> ValidationReport {
    debug_assert_eq!(fq.p(), ctx.p);
    let view = LocalView {
        species: d.species,
        r: d.r,
        boundaries: vec![Boundary {
            ty: &d.boundary,
            ty_loc: "boundary".into(),
            vertex: d.origin,
            point: &d.origin_point,
            point_loc: "origin_point".into(),
        }],
        vertices: &d.vertices,
        edges: &d.edges,
    };
    check_local(ctx, fq, &view)
}

/// Check a double datum against the local axioms.
pub fn check_double(ctx: &PrimeContext, fq: &Fq, d: &DoubleDegData) -> ValidationReport {
    debug_assert_eq!(fq.p(), ctx.p);
    let view = LocalView {
        species: d.species,
        r: d.r,
        boundaries: (0..2)
            .map(|k| Boundary {
                ty: &d.boundaries[k],
                ty_loc: format!("boundaries[{k}]"),
                vertex: d.endpoints[k],
                point: &d.endpoint_points[k],
                point_loc: format!("endpoint_points[{k}]"),
            })
            .collect(),
        vertices: &d.vertices,
        edges: &d.edges,
    };
    check_local(ctx, fq, &view)
}

fn check_local(ctx: &PrimeContext, fq: &Fq, v: &LocalView) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let p = ctx.p;
    let n = v.vertices.len();

    // A1: type shape
    let mark = rep.entries.len();
    if v.r < 0 {
        rep.fail("A1", "r", format!("branch count {} is negative", v.r));
    }
    for b in &v.boundaries {
        if b.ty.h >= p {
            rep.fail("A1", format!("{}.h", b.ty_loc), format!("residue {} not reduced mod p", b.ty.h));
        } else if let Err(msg) = shape(p, b.ty.kind, b.ty.m, b.ty.h) {
            rep.fail("A1", b.ty_loc.clone(), msg);
        }
        if v.species == Species::Split
            && (b.ty.kind != GroupKind::Etale || b.ty.m != 0 || b.ty.h != 0)
        {
            rep.fail(
                "A1",
                b.ty_loc.clone(),
                "split species requires an etale boundary with conductor and residue zero",
            );
        }
        // the trivial etale boundary splits the cover on the boundary annulus
        if v.species == Species::NonSplit
            && b.ty.kind == GroupKind::Etale
            && b.ty.m == 0
            && b.ty.h == 0
        {
            rep.fail(
                "A1",
                b.ty_loc.clone(),
                "an etale boundary with conductor and residue zero forces the split species",
            );
        }
    }
    let lhs_multiplier =
        v.r - v.boundaries.iter().map(|b| b.ty.m).sum::<i64>() + v.boundaries.len() as i64 - 2;
    if v.species == Species::NonSplit {
        match ledger_genus(ctx, lhs_multiplier) {
            Ok(g) => rep.info("A1", "", format!("type genus {g}")),
            Err(e) => rep.fail("A1", "r", format!("type genus: {e}")),
        }
    }
    rep.close("A1", mark, "type triple well formed");

    // A2: tree structure
    let mark = rep.entries.len();
    if n == 0 {
        rep.fail("A2", "vertices", "tree has no vertices");
    }
    for b in &v.boundaries {
        if b.vertex >= n {
            rep.fail(
                "A2",
                b.point_loc.clone(),
                format!("attachment vertex {} out of range", b.vertex),
            );
        }
    }
    let ids_ok = adjacency(n, v.edges).is_ok();
    if !ids_ok {
        if let Err(e) = adjacency(n, v.edges) {
            rep.fail("A2", "edges", e.to_string());
        }
    }
    let root = v.boundaries[0].vertex.min(n.saturating_sub(1));
    let structure = n > 0 && v.boundaries[0].vertex < n && tree_parents(n, v.edges, root).is_ok();
    if ids_ok && n > 0 && v.boundaries[0].vertex < n {
        if let Err(e) = tree_parents(n, v.edges, root) {
            rep.fail("A2", "edges", e.to_string());
        }
    }
    rep.close("A2", mark, "decoration graph is a tree");

    // incident pairs per vertex, used by A4 and A8
    let mut incident: Vec<Vec<Incident>> = (0..n).map(|_| Vec::new()).collect();
    for (i, vl) in v.vertices.iter().enumerate() {
        for (j, mp) in vl.marked.iter().enumerate() {
            incident[i].push(Incident {
                m: mp.m,
                h: mp.h,
                loc: format!("vertices[{i}].marked[{j}]"),
                place: mp.location.as_ref(),
            });
        }
    }
    for (k, ed) in v.edges.iter().enumerate() {
        for side in 0..2 {
            if ed.ends[side] < n {
                incident[ed.ends[side]].push(Incident {
                    m: ed.half[side].m,
                    h: ed.half[side].h,
                    loc: format!("edges[{k}].half[{side}]"),
                    place: None,
                });
            }
        }
    }
    for b in &v.boundaries {
        if b.vertex < n {
            incident[b.vertex].push(Incident {
                m: b.point.m,
                h: b.point.h,
                loc: b.point_loc.clone(),
                place: b.point.location.as_ref(),
            });
        }
    }

    // A3: point sanity
    let mark = rep.entries.len();
    for (i, vl) in v.vertices.iter().enumerate() {
        if vl.genus != 0 {
            rep.fail(
                "A3",
                format!("vertices[{i}].genus"),
                format!("tree vertices are projective lines, genus {} given", vl.genus),
            );
        }
        let mut seen: Vec<&Place> = Vec::new();
        for inc in &incident[i] {
            if inc.h >= p {
                rep.fail("A3", format!("{}.h", inc.loc), format!("residue {} not reduced mod p", inc.h));
            }
            if let Some(pl) = inc.place {
                if !pl.is_consistent(fq) {
                    rep.fail("A3", format!("{}.location", inc.loc), "place is not a point over the working field");
                } else if seen.iter().any(|&q| q == pl) {
                    rep.fail("A3", format!("{}.location", inc.loc), "same point listed twice on one vertex");
                } else {
                    seen.push(pl);
                }
            }
        }
    }
    for b in &v.boundaries {
        if b.point.t == 0 {
            rep.fail("A3", format!("{}.t", b.point_loc), "thickness parameter must be at least 1");
        }
    }
    rep.close("A3", mark, "marked and attachment points well formed");

    // A4: torsor labels
    let mark = rep.entries.len();
    for (i, vl) in v.vertices.iter().enumerate() {
        let loc = format!("vertices[{i}]");
        match vl.torsor.kind() {
            None => {
                // split marker: conductors on this vertex carry no constraint
                if vl.delta != 0 {
                    rep.fail("A4", format!("{loc}.delta"), "split vertices store different degree 0");
                }
            }
            Some(kind) => {
                match kind_from_delta(ctx, vl.delta) {
                    Some(k) if k == kind => {}
                    Some(k) => rep.fail(
                        "A4",
                        format!("{loc}.delta"),
                        format!("different degree {} dictates {k} but vertex is {kind}", vl.delta),
                    ),
                    None => rep.fail(
                        "A4",
                        format!("{loc}.delta"),
                        format!("different degree {} exceeds v(p) = {}", vl.delta, ctx.vkp),
                    ),
                }
                for inc in &incident[i] {
                    if let Err(msg) = shape(p, kind, inc.m, inc.h) {
                        rep.fail("A4", inc.loc.clone(), msg);
                    }
                }
                if kind.is_radicial() {
                    let sum: i64 = incident[i].iter().map(|inc| -inc.m - 1).sum();
                    if sum != -2 {
                        rep.fail(
                            "A4",
                            loc.clone(),
                            format!(
                                "orders of the torsor differential at the special points sum to {sum}, need -2"
                            ),
                        );
                    }
                }
                if kind == GroupKind::Mult {
                    let hsum: u64 = incident[i].iter().map(|inc| inc.h % p).sum::<u64>() % p;
                    if hsum != 0 {
                        rep.fail(
                            "A4",
                            loc.clone(),
                            format!("residues at the special points sum to {hsum}, need 0 mod p"),
                        );
                    }
                }
                if kind == GroupKind::Etale && !incident[i].iter().any(|inc| inc.m > 0) {
                    rep.fail(
                        "A4",
                        loc.clone(),
                        "etale vertex is unramified everywhere, so its torsor is split",
                    );
                }
            }
        }
        if let VertexTorsor::Concrete(t) = &vl.torsor {
            if let Err(e) = t.check_admissible(fq) {
                rep.fail("A4", format!("{loc}.torsor"), e.to_string());
                continue;
            }
            let specials = t.special_points(fq).expect("admissible rep");
            let baseline = if t.kind.is_radicial() { (-1, 0) } else { (0, 0) };
            let mut unmatched = specials.clone();
            let mut anon: Vec<(i64, u64, String)> = Vec::new();
            for inc in &incident[i] {
                match inc.place {
                    Some(pl) => {
                        let got = t.conductor_residue(fq, pl).expect("admissible rep");
                        if got != (inc.m, inc.h) {
                            rep.fail(
                                "A4",
                                inc.loc.clone(),
                                format!(
                                    "declared ({}, {}) but the representative has ({}, {}) there",
                                    inc.m, inc.h, got.0, got.1
                                ),
                            );
                        }
                        unmatched.retain(|(q, _)| q != pl);
                    }
                    None => {
                        if (inc.m, inc.h) != baseline && (inc.m, inc.h) != (0, 0) {
                            anon.push((inc.m, inc.h, inc.loc.clone()));
                        }
                    }
                }
            }
            let mut pool: Vec<(i64, u64)> = unmatched.iter().map(|(_, l)| *l).collect();
            pool.sort_unstable();
            let mut decl: Vec<(i64, u64)> = anon.iter().map(|(m, h, _)| (*m, *h)).collect();
            decl.sort_unstable();
            if pool != decl {
                rep.fail(
                    "A4",
                    format!("{loc}.torsor"),
                    format!(
                        "special points of the representative {pool:?} do not match the declared labels {decl:?}"
                    ),
                );
            }
        }
    }
    rep.close("A4", mark, "torsor labels admissible");

    // A5: branch ledger
    let mark = rep.entries.len();
    let mut total = 0i64;
    for (i, vl) in v.vertices.iter().enumerate() {
        for (j, mp) in vl.marked.iter().enumerate() {
            let loc = format!("vertices[{i}].marked[{j}]");
            total += mp.r;
            if vl.torsor.kind().is_none() {
                rep.fail("A5", loc.clone(), "marked point on a split vertex");
                continue;
            }
            match v.species {
                Species::NonSplit => {
                    if mp.r != mp.m + 1 {
                        rep.fail(
                            "A5",
                            format!("{loc}.r"),
                            format!("{} branch points at a point of conductor {}, need m + 1 = {}", mp.r, mp.m, mp.m + 1),
                        );
                    }
                    // a marked point receives at least one branch point
                    if mp.m < 0 {
                        rep.fail(
                            "A5",
                            format!("{loc}.m"),
                            "marked points have conductor at least 0",
                        );
                    }
                    // a single branch point cannot land on an unramified point
                    if vl.torsor.kind() == Some(GroupKind::Etale) && mp.m == 0 {
                        rep.fail(
                            "A5",
                            format!("{loc}.m"),
                            "marked points on an etale vertex have positive conductor",
                        );
                    }
                }
                Species::Split => {
                    if mp.r != 1 || mp.m != -1 || mp.h != 0 {
                        rep.fail(
                            "A5",
                            loc.clone(),
                            "split species puts single branch points at points of invariant (-1, 0)",
                        );
                    }
                    if vl.torsor.kind() != Some(GroupKind::Mult) {
                        rep.fail("A5", loc.clone(), "split species marks points on multiplicative vertices");
                    }
                }
            }
        }
    }
    if total != v.r {
        rep.fail(
            "A5",
            "r",
            format!("marked branch counts sum to {total}, type says {}", v.r),
        );
    }
    for b in &v.boundaries {
        if b.point.m + b.ty.m != 0 || (b.point.h + b.ty.h) % p != 0 {
            rep.fail(
                "A5",
                b.point_loc.clone(),
                format!(
                    "attachment ({}, {}) does not match boundary ({}, {})",
                    b.point.m, b.point.h, b.ty.m, b.ty.h
                ),
            );
        }
    }
    rep.close("A5", mark, "branch ledger consistent");

    // A6: edge antisymmetry
    let mark = rep.entries.len();
    for (k, ed) in v.edges.iter().enumerate() {
        if ed.half[0].m + ed.half[1].m != 0 || (ed.half[0].h + ed.half[1].h) % p != 0 {
            rep.fail(
                "A6",
                format!("edges[{k}].half"),
                format!(
                    "sides ({}, {}) and ({}, {}) are not opposite",
                    ed.half[0].m, ed.half[0].h, ed.half[1].m, ed.half[1].h
                ),
            );
        }
    }
    rep.close("A6", mark, "edge labels antisymmetric");

    // A7: different accounting
    let mark = rep.entries.len();
    for (i, vl) in v.vertices.iter().enumerate() {
        if vl.delta % (p - 1).max(1) != 0 {
            rep.fail(
                "A7",
                format!("vertices[{i}].delta"),
                format!("different degree {} not divisible by p - 1", vl.delta),
            );
        }
    }
    for (k, ed) in v.edges.iter().enumerate() {
        if ed.e == 0 || ed.e % p != 0 {
            rep.fail(
                "A7",
                format!("edges[{k}].e"),
                format!("thickness {} is not a positive multiple of p", ed.e),
            );
            continue;
        }
        let t = (ed.e / p) as i128;
        let [a, b] = ed.ends;
        if a >= n || b >= n {
            continue;
        }
        if v.vertices[a].torsor.kind().is_none() || v.vertices[b].torsor.kind().is_none() {
            continue; // crossings into split parts carry no different
        }
        let lhs = v.vertices[b].delta as i128 - v.vertices[a].delta as i128;
        let rhs = t * ed.half[0].m as i128 * (p as i128 - 1);
        if lhs != rhs {
            rep.fail(
                "A7",
                format!("edges[{k}]"),
                format!(
                    "crossing drops the different by {rhs} but the vertex degrees differ by {lhs}"
                ),
            );
        }
    }
    for b in &v.boundaries {
        if b.vertex >= n {
            continue;
        }
        let vl = &v.vertices[b.vertex];
        if vl.torsor.kind().is_none() {
            continue;
        }
        let bd = vl.delta as i128 + b.point.t as i128 * b.point.m as i128 * (p as i128 - 1);
        if bd < 0 || bd > ctx.vkp as i128 {
            rep.fail(
                "A7",
                b.point_loc.clone(),
                format!("boundary different degree {bd} outside [0, {}]", ctx.vkp),
            );
        } else {
            let kind = kind_from_delta(ctx, bd as u64).unwrap();
            if kind != b.ty.kind {
                rep.fail(
                    "A7",
                    b.ty_loc.clone(),
                    format!(
                        "boundary different degree {bd} dictates {kind} but the type says {}",
                        b.ty.kind
                    ),
                );
            } else {
                rep.info("A7", b.ty_loc.clone(), format!("boundary different degree {bd}"));
            }
        }
    }
    rep.close("A7", mark, "different accounting consistent");

    // A8: genus identity
    let mark = rep.entries.len();
    if v.species == Species::NonSplit && structure {
        let rhs: i64 = (0..n)
            .filter(|&i| v.vertices[i].torsor.kind() == Some(GroupKind::Etale))
            .map(|i| -2 + incident[i].iter().map(|inc| inc.m + 1).sum::<i64>())
            .sum();
        if rhs != lhs_multiplier {
            rep.fail(
                "A8",
                "",
                format!(
                    "etale vertices contribute {rhs} times (p - 1)/2 to the genus, the type demands {lhs_multiplier}"
                ),
            );
        }
        rep.close("A8", mark, "genus identity holds");
    } else if v.species == Species::Split {
        rep.info("A8", "", "genus identity does not constrain split species");
    }

    // A9: splitting agreement
    let mark = rep.entries.len();
    let split_boundary = v
        .boundaries
        .iter()
        .all(|b| b.vertex < n && v.vertices[b.vertex].torsor.kind().is_none());
    if (v.species == Species::Split) != split_boundary {
        rep.fail(
            "A9",
            "species",
            match v.species {
                Species::Split => "split species requires split torsors at the boundary vertices",
                Species::NonSplit => "split boundary vertices force the split species",
            },
        );
    }
    for (k, ed) in v.edges.iter().enumerate() {
        let [a, b] = ed.ends;
        if a >= n || b >= n {
            continue;
        }
        for (this, far) in [(a, b), (b, a)] {
            if v.vertices[this].torsor.kind().is_none() {
                let far_side = if ed.ends[0] == far { 0 } else { 1 };
                match v.vertices[far].torsor.kind() {
                    Some(k2) if k2.is_radicial() => rep.fail(
                        "A9",
                        format!("edges[{k}]"),
                        "split cover meets a radicial one, but sheet counts p and 1 cannot glue",
                    ),
                    Some(_) => {
                        if ed.half[far_side].m != 0 || ed.half[far_side].h != 0 {
                            rep.fail(
                                "A9",
                                format!("edges[{k}].half[{far_side}]"),
                                "etale side of a split crossing must be unramified with trivial residue",
                            );
                        }
                    }
                    None => {}
                }
            }
        }
    }
    rep.close("A9", mark, "splitting agreement holds");

    rep
}

/// Different degree at a boundary of a local datum, when computable:
/// the attached vertex degree plus the crossing drop.
pub fn boundary_delta(
    ctx: &PrimeContext,
    vertices: &[VertexLabel],
    vertex: usize,
    point: &Attachment,
) -> Option<i128> {
    let vl = vertices.get(vertex)?;
    vl.torsor.kind()?;
    Some(vl.delta as i128 + point.t as i128 * point.m as i128 * (ctx.p as i128 - 1))
}

/// Check a global datum against the global axioms; attached local data are
/// checked recursively with locations prefixed by their field path.
pub fn check_global(ctx: &PrimeContext, fq: &Fq, g: &GlobalDegData) -> ValidationReport {
    debug_assert_eq!(fq.p(), ctx.p);
    let mut rep = ValidationReport::default();
    let p = ctx.p;
    let nc = g.components.len();

    // incident labels per component (node sides, marked, critical)
    let mut incident: Vec<Vec<Incident>> = (0..nc).map(|_| Vec::new()).collect();
    for (j, nd) in g.nodes.iter().enumerate() {
        for side in 0..2 {
            if nd.ends[side] < nc {
                incident[nd.ends[side]].push(Incident {
                    m: nd.half[side].m,
                    h: nd.half[side].h,
                    loc: format!("nodes[{j}].half[{side}]"),
                    place: None,
                });
            }
        }
    }
    for (j, mk) in g.marked.iter().enumerate() {
        if mk.component < nc {
            incident[mk.component].push(Incident {
                m: mk.m,
                h: mk.h,
                loc: format!("marked[{j}]"),
                place: mk.location.as_ref(),
            });
        }
    }
    for (j, ck) in g.critical.iter().enumerate() {
        if ck.component < nc {
            incident[ck.component].push(Incident {
                m: ck.m,
                h: ck.h,
                loc: format!("critical[{j}]"),
                place: ck.location.as_ref(),
            });
        }
    }

    // G1: component torsors
    let mark = rep.entries.len();
    if nc == 0 {
        rep.fail("G1", "components", "no components");
    }
    for (i, c) in g.components.iter().enumerate() {
        let loc = format!("components[{i}]");
        let mut seen: Vec<&Place> = Vec::new();
        for inc in &incident[i] {
            if inc.h >= p {
                rep.fail("G1", format!("{}.h", inc.loc), format!("residue {} not reduced mod p", inc.h));
            }
            if let Some(pl) = inc.place {
                if !pl.is_consistent(fq) {
                    rep.fail("G1", format!("{}.location", inc.loc), "place is not a point over the working field");
                } else if seen.iter().any(|&q| q == pl) {
                    rep.fail("G1", format!("{}.location", inc.loc), "same point listed twice on one component");
                } else {
                    seen.push(pl);
                }
            }
        }
        match c.torsor.kind() {
            None => {
                if c.delta != 0 {
                    rep.fail("G1", format!("{loc}.delta"), "split components store different degree 0");
                }
                if c.generic {
                    rep.fail("G1", format!("{loc}.generic"), "generic flag only applies to radicial components");
                }
            }
            Some(kind) => {
                for inc in &incident[i] {
                    if let Err(msg) = shape(p, kind, inc.m, inc.h) {
                        rep.fail("G1", inc.loc.clone(), msg);
                    }
                }
                if kind.is_radicial() {
                    let want = 2 * c.genus as i64 - 2;
                    let sum: i64 = incident[i].iter().map(|inc| -inc.m - 1).sum();
                    if sum != want {
                        rep.fail(
                            "G1",
                            loc.clone(),
                            format!("orders of the torsor differential at the special points sum to {sum}, need 2g - 2 = {want}"),
                        );
                    }
                } else if c.generic {
                    rep.fail("G1", format!("{loc}.generic"), "generic flag only applies to radicial components");
                }
                if kind == GroupKind::Mult {
                    let hsum: u64 = incident[i].iter().map(|inc| inc.h % p).sum::<u64>() % p;
                    if hsum != 0 {
                        rep.fail(
                            "G1",
                            loc.clone(),
                            format!("residues at the special points sum to {hsum}, need 0 mod p"),
                        );
                    }
                }
                if kind == GroupKind::Etale
                    && c.genus == 0
                    && !incident[i].iter().any(|inc| inc.m > 0)
                {
                    rep.fail(
                        "G1",
                        loc.clone(),
                        "etale torsor on a rational component must ramify somewhere",
                    );
                }
            }
        }
        if let VertexTorsor::Concrete(t) = &c.torsor {
            if c.genus != 0 {
                rep.fail(
                    "G1",
                    format!("{loc}.torsor"),
                    "explicit representatives live on rational components",
                );
            } else if let Err(e) = t.check_admissible(fq) {
                rep.fail("G1", format!("{loc}.torsor"), e.to_string());
            } else {
                let specials = t.special_points(fq).expect("admissible rep");
                let baseline = if t.kind.is_radicial() { (-1, 0) } else { (0, 0) };
                let mut unmatched = specials;
                let mut decl: Vec<(i64, u64)> = Vec::new();
                for inc in &incident[i] {
                    match inc.place {
                        Some(pl) => {
                            let got = t.conductor_residue(fq, pl).expect("admissible rep");
                            if got != (inc.m, inc.h) {
                                rep.fail(
                                    "G1",
                                    inc.loc.clone(),
                                    format!(
                                        "declared ({}, {}) but the representative has ({}, {}) there",
                                        inc.m, inc.h, got.0, got.1
                                    ),
                                );
                            }
                            unmatched.retain(|(q, _)| q != pl);
                        }
                        None => {
                            if (inc.m, inc.h) != baseline && (inc.m, inc.h) != (0, 0) {
                                decl.push((inc.m, inc.h));
                            }
                        }
                    }
                }
                let mut pool: Vec<(i64, u64)> = unmatched.iter().map(|(_, l)| *l).collect();
                pool.sort_unstable();
                decl.sort_unstable();
                if pool != decl {
                    rep.fail(
                        "G1",
                        format!("{loc}.torsor"),
                        format!(
                            "special points of the representative {pool:?} do not match the declared labels {decl:?}"
                        ),
                    );
                }
            }
        }
    }
    rep.close("G1", mark, "component torsors admissible");

    // G2: node matching
    let mark = rep.entries.len();
    for (j, nd) in g.nodes.iter().enumerate() {
        let loc = format!("nodes[{j}]");
        if nd.ends[0] >= nc || nd.ends[1] >= nc {
            rep.fail("G2", format!("{loc}.ends"), "component index out of range");
            continue;
        }
        let kinds = [g.components[nd.ends[0]].torsor.kind(), g.components[nd.ends[1]].torsor.kind()];
        let any_split = kinds.iter().any(|k| k.is_none());
        if any_split {
            for side in 0..2 {
                match kinds[side] {
                    Some(k) if k.is_radicial() => rep.fail(
                        "G2",
                        loc.clone(),
                        "split cover meets a radicial one, but sheet counts p and 1 cannot glue",
                    ),
                    Some(_) => {
                        if nd.half[side].m != 0 || nd.half[side].h != 0 {
                            rep.fail(
                                "G2",
                                format!("{loc}.half[{side}]"),
                                "etale side of a split node must be unramified with trivial residue",
                            );
                        }
                    }
                    None => {}
                }
            }
        }
        if let Some(dd) = &nd.data {
            if dd.r != nd.r {
                rep.fail(
                    "G2",
                    format!("{loc}.data.r"),
                    format!("node says {} branch points, datum says {}", nd.r, dd.r),
                );
            }
            let want_species = if any_split { Species::Split } else { Species::NonSplit };
            if dd.species != want_species {
                rep.fail("G2", format!("{loc}.data.species"), "species does not match the adjacent components");
            }
            for side in 0..2 {
                if dd.boundaries[side].m != nd.half[side].m
                    || dd.boundaries[side].h != nd.half[side].h
                {
                    rep.fail(
                        "G2",
                        format!("{loc}.half[{side}]"),
                        format!(
                            "node side ({}, {}) does not match datum boundary ({}, {})",
                            nd.half[side].m, nd.half[side].h, dd.boundaries[side].m, dd.boundaries[side].h
                        ),
                    );
                }
                if let Some(kind) = kinds[side] {
                    if dd.boundaries[side].kind != kind {
                        rep.fail(
                            "G2",
                            format!("{loc}.data.boundaries[{side}]"),
                            format!(
                                "datum boundary is {} but the component torsor is {kind}",
                                dd.boundaries[side].kind
                            ),
                        );
                    }
                    if let Some(bd) = boundary_delta(
                        ctx,
                        &dd.vertices,
                        dd.endpoints[side],
                        &dd.endpoint_points[side],
                    ) {
                        if bd != g.components[nd.ends[side]].delta as i128 {
                            rep.fail(
                                "G2",
                                format!("{loc}.data"),
                                format!(
                                    "datum boundary different degree {bd} differs from component degree {}",
                                    g.components[nd.ends[side]].delta
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    rep.close("G2", mark, "node data match component labels");

    // G3: marked matching
    let mark = rep.entries.len();
    for (j, mk) in g.marked.iter().enumerate() {
        let loc = format!("marked[{j}]");
        if mk.component >= nc {
            rep.fail("G3", format!("{loc}.component"), "component index out of range");
            continue;
        }
        let ckind = g.components[mk.component].torsor.kind();
        if mk.r - mk.m - 1 < 0 {
            rep.fail(
                "G3",
                format!("{loc}.r"),
                format!("{} branch points cannot produce conductor {}", mk.r, mk.m),
            );
        }
        if ckind == Some(GroupKind::Etale) && mk.m == 0 {
            rep.fail(
                "G3",
                format!("{loc}.m"),
                "marked points on an etale component have positive conductor",
            );
        }
        if let Some(sd) = &mk.data {
            if sd.r != mk.r {
                rep.fail(
                    "G3",
                    format!("{loc}.data.r"),
                    format!("marked point says {} branch points, datum says {}", mk.r, sd.r),
                );
            }
            if sd.boundary.m != mk.m || sd.boundary.h != mk.h {
                rep.fail(
                    "G3",
                    loc.clone(),
                    format!(
                        "marked label ({}, {}) does not match datum boundary ({}, {})",
                        mk.m, mk.h, sd.boundary.m, sd.boundary.h
                    ),
                );
            }
            match ckind {
                Some(kind) => {
                    if sd.species != Species::NonSplit {
                        rep.fail("G3", format!("{loc}.data.species"), "species does not match the component");
                    }
                    if sd.boundary.kind != kind {
                        rep.fail(
                            "G3",
                            format!("{loc}.data.boundary"),
                            format!("datum boundary is {} but the component torsor is {kind}", sd.boundary.kind),
                        );
                    }
                    if let Some(bd) = boundary_delta(ctx, &sd.vertices, sd.origin, &sd.origin_point) {
                        if bd != g.components[mk.component].delta as i128 {
                            rep.fail(
                                "G3",
                                format!("{loc}.data"),
                                format!(
                                    "datum boundary different degree {bd} differs from component degree {}",
                                    g.components[mk.component].delta
                                ),
                            );
                        }
                    }
                }
                None => {
                    if sd.species != Species::Split {
                        rep.fail("G3", format!("{loc}.data.species"), "marked point on a split component needs a split datum");
                    }
                }
            }
        }
    }
    rep.close("G3", mark, "marked data match component labels");

    // G4: critical coverage
    let mark = rep.entries.len();
    for (j, ck) in g.critical.iter().enumerate() {
        let loc = format!("critical[{j}]");
        if ck.component >= nc {
            rep.fail("G4", format!("{loc}.component"), "component index out of range");
            continue;
        }
        match g.components[ck.component].torsor.kind() {
            Some(k) if k.is_radicial() => {}
            _ => {
                rep.fail(
                    "G4",
                    format!("{loc}.component"),
                    "critical points live on radicial components",
                );
                continue;
            }
        }
        if ck.m > -2 {
            rep.fail(
                "G4",
                format!("{loc}.m"),
                format!("conductor {} does not come from a zero of the differential", ck.m),
            );
        }
        if let Some(sd) = &ck.data {
            if sd.r != 0 {
                rep.fail("G4", format!("{loc}.data.r"), "critical data carry no branch points");
            }
            if sd.species != Species::NonSplit {
                rep.fail("G4", format!("{loc}.data.species"), "critical data are never split");
            }
            if sd.boundary.m != ck.m || sd.boundary.h != ck.h {
                rep.fail(
                    "G4",
                    loc.clone(),
                    format!(
                        "critical label ({}, {}) does not match datum boundary ({}, {})",
                        ck.m, ck.h, sd.boundary.m, sd.boundary.h
                    ),
                );
            }
            if let Some(kind) = g.components[ck.component].torsor.kind() {
                if sd.boundary.kind != kind {
                    rep.fail(
                        "G4",
                        format!("{loc}.data.boundary"),
                        format!("datum boundary is {} but the component torsor is {kind}", sd.boundary.kind),
                    );
                }
            }
            if let Some(bd) = boundary_delta(ctx, &sd.vertices, sd.origin, &sd.origin_point) {
                if bd != g.components[ck.component].delta as i128 {
                    rep.fail(
                        "G4",
                        format!("{loc}.data"),
                        format!(
                            "datum boundary different degree {bd} differs from component degree {}",
                            g.components[ck.component].delta
                        ),
                    );
                }
            }
        }
    }
    rep.close("G4", mark, "critical points covered");

    // G5: branch ledger
    let mark = rep.entries.len();
    let mut total = 0i64;
    for (j, nd) in g.nodes.iter().enumerate() {
        if nd.r < 0 {
            rep.fail("G5", format!("nodes[{j}].r"), "negative branch count");
        }
        total += nd.r;
    }
    for (j, mk) in g.marked.iter().enumerate() {
        if mk.r < 0 {
            rep.fail("G5", format!("marked[{j}].r"), "negative branch count");
        }
        total += mk.r;
    }
    if total != g.r {
        rep.fail(
            "G5",
            "r",
            format!("node and marked branch counts sum to {total}, datum says {}", g.r),
        );
    }
    rep.close("G5", mark, "branch ledger consistent");

    // G6: attached local data
    let mark = rep.entries.len();
    let mut local_ok = true;
    for (j, nd) in g.nodes.iter().enumerate() {
        if let Some(dd) = &nd.data {
            let sub = check_double(ctx, fq, dd);
            local_ok &= sub.all_pass();
            rep.extend_prefixed(&format!("nodes[{j}].data"), sub);
        }
    }
    for (j, mk) in g.marked.iter().enumerate() {
        if let Some(sd) = &mk.data {
            let sub = check_simple(ctx, fq, sd);
            local_ok &= sub.all_pass();
            rep.extend_prefixed(&format!("marked[{j}].data"), sub);
        }
    }
    for (j, ck) in g.critical.iter().enumerate() {
        if let Some(sd) = &ck.data {
            let sub = check_simple(ctx, fq, sd);
            local_ok &= sub.all_pass();
            rep.extend_prefixed(&format!("critical[{j}].data"), sub);
        }
    }
    if !local_ok {
        rep.fail("G6", "", "an attached local datum fails its own axioms");
    }
    rep.close("G6", mark, "attached local data pass");

    // G7: generic zero count
    let mark = rep.entries.len();
    let want_m = if p == 2 { -3 } else { -2 };
    for (i, c) in g.components.iter().enumerate() {
        if !c.generic || !c.torsor.is_radicial() {
            continue;
        }
        for inc in &incident[i] {
            let zero_label = inc.m <= -2;
            if zero_label && inc.m != want_m {
                rep.fail(
                    "G7",
                    inc.loc.clone(),
                    format!(
                        "generic component admits only zeros of conductor {want_m}, got {}",
                        inc.m
                    ),
                );
            }
        }
        let zeros: i64 = incident[i].iter().filter(|inc| inc.m <= -2).map(|inc| -inc.m - 1).sum();
        let rest: i64 = incident[i].iter().filter(|inc| inc.m > -2).map(|inc| -inc.m - 1).sum();
        let want = 2 * c.genus as i64 - 2 - rest;
        if zeros != want {
            rep.fail(
                "G7",
                format!("components[{i}]"),
                format!("differential zero orders sum to {zeros}, the remaining labels demand {want}"),
            );
        }
    }
    rep.close("G7", mark, "generic zero counts correct");

    // G8: different dictionary
    let mark = rep.entries.len();
    for (i, c) in g.components.iter().enumerate() {
        let loc = format!("components[{i}].delta");
        if c.delta % (p - 1).max(1) != 0 {
            rep.fail("G8", loc.clone(), format!("different degree {} not divisible by p - 1", c.delta));
        }
        if let Some(kind) = c.torsor.kind() {
            match kind_from_delta(ctx, c.delta) {
                Some(k) if k == kind => {}
                Some(k) => rep.fail(
                    "G8",
                    loc,
                    format!("different degree {} dictates {k} but component is {kind}", c.delta),
                ),
                None => rep.fail(
                    "G8",
                    loc,
                    format!("different degree {} exceeds v(p) = {}", c.delta, ctx.vkp),
                ),
            }
        }
    }
    rep.close("G8", mark, "different degrees within the dictionary");

    rep
}
