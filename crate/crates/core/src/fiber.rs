//! Assembly of the special fiber a datum describes: upstairs components with
//! genera, double points, boundary attachment points, first Betti number and
//! total arithmetic genus, plus the genus conservation check.
//!
//! Realization does not assume the datum has been validated; inconsistencies
//! surface as located errors (negative genus, sheet-count mismatches, ledger
//! mismatches against the type genus).

use serde::Serialize;

use crate::arith::PrimeContext;
use crate::degdata::{
    DoubleDegData, GlobalDegData, SimpleDegData, Species, VertexTorsor,
};
use crate::error::RealizeError;
use crate::torsor::GroupKind;
use crate::validate::{genus_double, genus_simple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FragmentComponent {
    pub id: String,
    pub genus: u64,
    pub provenance: String,
}

/// The cover of one local tree: components, double points, and one list of
/// boundary attachment points per boundary of the datum (each point named by
/// the component carrying it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CurveFragment {
    pub components: Vec<FragmentComponent>,
    pub edges: Vec<(String, String)>,
    pub boundaries: Vec<Vec<String>>,
}

impl CurveFragment {
    pub fn b1(&self) -> u64 {
        betti(&self.components, &self.edges)
    }

    pub fn total_genus(&self) -> u64 {
        total_genus(&self.components, &self.edges)
    }

    /// Graphviz rendering; boundary points become diamond nodes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph fragment {\n");
        out.push_str(&format!("  // b1={} total_genus={}\n", self.b1(), self.total_genus()));
        dot_body(&mut out, &self.components, &self.edges);
        for (i, bd) in self.boundaries.iter().enumerate() {
            out.push_str(&format!("  \"bd{i}\" [shape=diamond,label=\"boundary {i}\"];\n"));
            for comp in bd {
                out.push_str(&format!("  \"bd{i}\" -- \"{comp}\";\n"));
            }
        }
        out.push('}');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SpecialFiber {
    pub components: Vec<FragmentComponent>,
    pub edges: Vec<(String, String)>,
    pub b1: u64,
    pub total_genus: u64,
}

impl SpecialFiber {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph fiber {\n");
        out.push_str(&format!("  // b1={} total_genus={}\n", self.b1, self.total_genus));
        dot_body(&mut out, &self.components, &self.edges);
        out.push('}');
        out
    }
}

fn dot_body(out: &mut String, components: &[FragmentComponent], edges: &[(String, String)]) {
    for c in components {
        out.push_str(&format!("  \"{}\" [label=\"{}:{}\"];\n", c.id, c.id, c.genus));
    }
    for (a, b) in edges {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Conservation {
    pub expected: i64,
    pub realized: i64,
    pub ok: bool,
}

/// Betti number of the component graph: edges - vertices + graph components.
fn betti(components: &[FragmentComponent], edges: &[(String, String)]) -> u64 {
    let index = |id: &str| components.iter().position(|c| c.id == id);
    let n = components.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (a, b) in edges {
        if let (Some(i), Some(j)) = (index(a), index(b)) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let comps = (0..n).filter(|&i| find(&mut parent, i) == i).count();
    (edges.len() + comps - n) as u64
}

fn total_genus(components: &[FragmentComponent], edges: &[(String, String)]) -> u64 {
    components.iter().map(|c| c.genus).sum::<u64>() + betti(components, edges)
}

/// Cover of a single decorated component. Returns the upstairs copy count
/// (p for split, 1 otherwise), the genus of each copy, and the preimage
/// count above each incident point, aligned with `incident`.
pub fn realize_vertex(
    ctx: &PrimeContext,
    genus: u64,
    torsor: &VertexTorsor,
    incident: &[(i64, u64)],
    location: &str,
) -> Result<(u64, u64, Vec<u64>), RealizeError> {
    let p = ctx.p;
    match torsor.kind() {
        None => Ok((p, genus, vec![p; incident.len()])),
        Some(GroupKind::Etale) => {
            let mut ram: i128 = 0;
            let mut points = Vec::with_capacity(incident.len());
            for &(m, h) in incident {
                if m > 0 {
                    ram += (m as i128 + 1) * (p as i128 - 1);
                    points.push(1);
                } else if m == 0 && h == 0 {
                    points.push(p);
                } else {
                    return Err(RealizeError::new(
                        location,
                        format!("label ({m}, {h}) is not an etale conductor"),
                    ));
                }
            }
            let twice = p as i128 * (2 * genus as i128 - 2) + ram + 2;
            if twice < 0 || twice % 2 != 0 {
                return Err(RealizeError::new(
                    location,
                    format!("ramification count gives genus {twice}/2"),
                ));
            }
            Ok((1, (twice / 2) as u64, points))
        }
        Some(_) => Ok((1, genus, vec![1; incident.len()])),
    }
}

/// Where an incident label of a local tree comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Marked,
    Edge(usize, usize),
    Boundary(usize),
}

struct LocalCover {
    components: Vec<FragmentComponent>,
    edges: Vec<(String, String)>,
    /// upstairs point names per vertex and incident slot
    points: Vec<Vec<(Slot, Vec<String>)>>,
}

fn cover_tree(
    ctx: &PrimeContext,
    vertices: &[crate::degdata::VertexLabel],
    edges: &[crate::degdata::EdgeDatum],
    boundaries: &[(usize, i64, u64)],
    prefix: &str,
) -> Result<LocalCover, RealizeError> {
    let n = vertices.len();
    let mut incident: Vec<Vec<(Slot, (i64, u64))>> = (0..n).map(|_| Vec::new()).collect();
    for (i, vl) in vertices.iter().enumerate() {
        for mp in &vl.marked {
            incident[i].push((Slot::Marked, (mp.m, mp.h)));
        }
    }
    for (k, ed) in edges.iter().enumerate() {
        for side in 0..2 {
            let v = ed.ends[side];
            if v >= n {
                return Err(RealizeError::new(
                    format!("{prefix}edges[{k}]"),
                    format!("vertex index {v} out of range"),
                ));
            }
            incident[v].push((Slot::Edge(k, side), (ed.half[side].m, ed.half[side].h)));
        }
    }
    for (b, &(v, m, h)) in boundaries.iter().enumerate() {
        if v >= n {
            return Err(RealizeError::new(
                format!("{prefix}boundary[{b}]"),
                format!("vertex index {v} out of range"),
            ));
        }
        incident[v].push((Slot::Boundary(b), (m, h)));
    }

    let mut components = Vec::new();
    let mut out_edges = Vec::new();
    let mut points: Vec<Vec<(Slot, Vec<String>)>> = (0..n).map(|_| Vec::new()).collect();
    for (i, vl) in vertices.iter().enumerate() {
        let labels: Vec<(i64, u64)> = incident[i].iter().map(|&(_, l)| l).collect();
        let loc = format!("{prefix}vertices[{i}]");
        let (copies, genus, counts) = realize_vertex(ctx, vl.genus, &vl.torsor, &labels, &loc)?;
        let ids: Vec<String> = if copies == 1 {
            vec![format!("{prefix}v{i}")]
        } else {
            (0..copies).map(|c| format!("{prefix}v{i}.{c}")).collect()
        };
        for id in &ids {
            components.push(FragmentComponent {
                id: id.clone(),
                genus,
                provenance: loc.clone(),
            });
        }
        for ((slot, _), count) in incident[i].iter().zip(counts) {
            // a split vertex has one point per copy, otherwise all points
            // sit on the single component
            let names: Vec<String> = if copies > 1 {
                ids.clone()
            } else {
                vec![ids[0].clone(); count as usize]
            };
            points[i].push((*slot, names));
        }
    }
    for (k, ed) in edges.iter().enumerate() {
        let find = |side: usize| -> &Vec<String> {
            let v = ed.ends[side];
            &points[v]
                .iter()
                .find(|(s, _)| *s == Slot::Edge(k, side))
                .unwrap()
                .1
        };
        let (a, b) = (find(0).clone(), find(1).clone());
        if a.len() != b.len() {
            return Err(RealizeError::new(
                format!("{prefix}edges[{k}]"),
                format!(
                    "sides have {} and {} upstairs points and cannot glue",
                    a.len(),
                    b.len()
                ),
            ));
        }
        for (x, y) in a.into_iter().zip(b) {
            out_edges.push((x, y));
        }
    }
    Ok(LocalCover {
        components,
        edges: out_edges,
        points,
    })
}

fn fragment_of(
    ctx: &PrimeContext,
    species: Species,
    type_genus: Option<Result<u64, crate::validate::GenusError>>,
    vertices: &[crate::degdata::VertexLabel],
    edges: &[crate::degdata::EdgeDatum],
    boundaries: &[(usize, i64, u64)],
) -> Result<CurveFragment, RealizeError> {
    let cover = cover_tree(ctx, vertices, edges, boundaries, "")?;
    let mut bps: Vec<Vec<String>> = vec![Vec::new(); boundaries.len()];
    for per_vertex in &cover.points {
        for (slot, names) in per_vertex {
            if let Slot::Boundary(b) = slot {
                bps[*b] = names.clone();
            }
        }
    }
    let frag = CurveFragment {
        components: cover.components,
        edges: cover.edges,
        boundaries: bps,
    };
    if species == Species::NonSplit {
        let want = match type_genus.expect("nonsplit data have a type genus") {
            Ok(g) => g,
            Err(e) => return Err(RealizeError::new("type", e.to_string())),
        };
        let got = total_genus(&frag.components, &frag.edges);
        if got != want {
            return Err(RealizeError::new(
                "type",
                format!("realized fiber has total genus {got} but the type demands {want}"),
            ));
        }
    }
    Ok(frag)
}

/// Realize a simple datum; the single boundary lists the preimages of the
/// origin point.
pub fn realize_simple(
    ctx: &PrimeContext,
    d: &SimpleDegData,
) -> Result<CurveFragment, RealizeError> {
    fragment_of(
        ctx,
        d.species,
        Some(genus_simple(ctx, d.r, d.boundary.m)),
        &d.vertices,
        &d.edges,
        &[(d.origin, d.origin_point.m, d.origin_point.h)],
    )
}

/// Realize a double datum; the two boundaries list the preimages of the two
/// endpoint attachment points in order.
pub fn realize_double(
    ctx: &PrimeContext,
    d: &DoubleDegData,
) -> Result<CurveFragment, RealizeError> {
    fragment_of(
        ctx,
        d.species,
        Some(genus_double(ctx, d.r, d.boundaries[0].m, d.boundaries[1].m)),
        &d.vertices,
        &d.edges,
        &[
            (d.endpoints[0], d.endpoint_points[0].m, d.endpoint_points[0].h),
            (d.endpoints[1], d.endpoint_points[1].m, d.endpoint_points[1].h),
        ],
    )
}

/// Where an incident label of the base curve comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BaseSlot {
    Node(usize, usize),
    Marked(usize),
    Critical(usize),
}

/// Realize a global datum: cover every component, splice in the realized
/// fragments of node data, and hang marked and critical fragments at their
/// attachment points.
pub fn realize_global(
    ctx: &PrimeContext,
    g: &GlobalDegData,
) -> Result<SpecialFiber, RealizeError> {
    let nc = g.components.len();
    let mut incident: Vec<Vec<(BaseSlot, (i64, u64))>> = (0..nc).map(|_| Vec::new()).collect();
    let check = |c: usize, loc: String| -> Result<(), RealizeError> {
        if c >= nc {
            Err(RealizeError::new(loc, format!("component index {c} out of range")))
        } else {
            Ok(())
        }
    };
    for (j, nd) in g.nodes.iter().enumerate() {
        for side in 0..2 {
            check(nd.ends[side], format!("nodes[{j}].ends[{side}]"))?;
            incident[nd.ends[side]].push((
                BaseSlot::Node(j, side),
                (nd.half[side].m, nd.half[side].h),
            ));
        }
    }
    for (j, mk) in g.marked.iter().enumerate() {
        check(mk.component, format!("marked[{j}].component"))?;
        incident[mk.component].push((BaseSlot::Marked(j), (mk.m, mk.h)));
    }
    for (j, ck) in g.critical.iter().enumerate() {
        check(ck.component, format!("critical[{j}].component"))?;
        incident[ck.component].push((BaseSlot::Critical(j), (ck.m, ck.h)));
    }

    let mut components = Vec::new();
    let mut edges = Vec::new();
    // upstairs points above each base slot, per component
    let mut points: Vec<Vec<(BaseSlot, Vec<String>)>> = (0..nc).map(|_| Vec::new()).collect();
    for (i, c) in g.components.iter().enumerate() {
        let labels: Vec<(i64, u64)> = incident[i].iter().map(|&(_, l)| l).collect();
        let loc = format!("components[{i}]");
        let (copies, genus, counts) = realize_vertex(ctx, c.genus, &c.torsor, &labels, &loc)?;
        let ids: Vec<String> = if copies == 1 {
            vec![format!("c{i}")]
        } else {
            (0..copies).map(|k| format!("c{i}.{k}")).collect()
        };
        for id in &ids {
            components.push(FragmentComponent {
                id: id.clone(),
                genus,
                provenance: loc.clone(),
            });
        }
        for ((slot, _), count) in incident[i].iter().zip(counts) {
            let names: Vec<String> = if copies > 1 {
                ids.clone()
            } else {
                vec![ids[0].clone(); count as usize]
            };
            points[i].push((*slot, names));
        }
    }
    let points_at = |points: &[Vec<(BaseSlot, Vec<String>)>], c: usize, slot: BaseSlot| -> Vec<String> {
        points[c]
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|(_, names)| names.clone())
            .unwrap_or_default()
    };

    let glue = |frag: CurveFragment,
                    prefix: &str,
                    attach: Vec<Vec<String>>,
                    loc: &str,
                    components: &mut Vec<FragmentComponent>,
                    edges: &mut Vec<(String, String)>|
     -> Result<(), RealizeError> {
        for mut c in frag.components {
            c.id = format!("{prefix}{}", c.id);
            c.provenance = format!("{loc}.{}", c.provenance);
            components.push(c);
        }
        for (a, b) in frag.edges {
            edges.push((format!("{prefix}{a}"), format!("{prefix}{b}")));
        }
        if frag.boundaries.len() != attach.len() {
            return Err(RealizeError::new(loc, "boundary count mismatch"));
        }
        for (bd, base) in frag.boundaries.iter().zip(attach) {
            if bd.len() != base.len() {
                return Err(RealizeError::new(
                    loc,
                    format!(
                        "datum boundary has {} upstairs points, the curve has {} there",
                        bd.len(),
                        base.len()
                    ),
                ));
            }
            for (x, y) in bd.iter().zip(base) {
                edges.push((format!("{prefix}{x}"), y));
            }
        }
        Ok(())
    };

    for (j, nd) in g.nodes.iter().enumerate() {
        let loc = format!("nodes[{j}]");
        let sides: Vec<Vec<String>> = (0..2)
            .map(|s| points_at(&points, nd.ends[s], BaseSlot::Node(j, s)))
            .collect();
        match &nd.data {
            Some(dd) => {
                let frag = realize_double(ctx, dd)
                    .map_err(|e| RealizeError::new(format!("{loc}.data.{}", e.location), e.message))?;
                glue(frag, &format!("n{j}."), sides, &loc, &mut components, &mut edges)?;
            }
            None => {
                let (a, b) = (&sides[0], &sides[1]);
                if a.len() != b.len() {
                    return Err(RealizeError::new(
                        loc,
                        format!(
                            "sides have {} and {} upstairs points and cannot glue",
                            a.len(),
                            b.len()
                        ),
                    ));
                }
                for (x, y) in a.iter().zip(b) {
                    edges.push((x.clone(), y.clone()));
                }
            }
        }
    }
    for (j, mk) in g.marked.iter().enumerate() {
        if let Some(sd) = &mk.data {
            let loc = format!("marked[{j}]");
            let frag = realize_simple(ctx, sd)
                .map_err(|e| RealizeError::new(format!("{loc}.data.{}", e.location), e.message))?;
            let base = points_at(&points, mk.component, BaseSlot::Marked(j));
            glue(frag, &format!("m{j}."), vec![base], &loc, &mut components, &mut edges)?;
        }
    }
    for (j, ck) in g.critical.iter().enumerate() {
        if let Some(sd) = &ck.data {
            let loc = format!("critical[{j}]");
            let frag = realize_simple(ctx, sd)
                .map_err(|e| RealizeError::new(format!("{loc}.data.{}", e.location), e.message))?;
            let base = points_at(&points, ck.component, BaseSlot::Critical(j));
            glue(frag, &format!("z{j}."), vec![base], &loc, &mut components, &mut edges)?;
        }
    }

    let b1 = betti(&components, &edges);
    let total = components.iter().map(|c| c.genus).sum::<u64>() + b1;
    Ok(SpecialFiber {
        components,
        edges,
        b1,
        total_genus: total,
    })
}

/// Compare the realized total genus with the genus of the generic fiber
/// computed from the base genus and the branch count.
pub fn conservation_check(
    ctx: &PrimeContext,
    g: &GlobalDegData,
) -> Result<Conservation, RealizeError> {
    let p = ctx.p as i128;
    let nc = g.components.len();
    // base curve connectivity
    let mut parent: Vec<usize> = (0..nc).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for nd in &g.nodes {
        if nd.ends[0] < nc && nd.ends[1] < nc {
            let (a, b) = (find(&mut parent, nd.ends[0]), find(&mut parent, nd.ends[1]));
            parent[a] = b;
        }
    }
    let base_comps = (0..nc).filter(|&i| find(&mut parent, i) == i).count();
    if base_comps != 1 {
        return Err(RealizeError::new(
            "components",
            "conservation needs a connected base curve",
        ));
    }
    let b1_base = (g.nodes.len() + 1 - nc) as i128;
    let g_x = g.components.iter().map(|c| c.genus as i128).sum::<i128>() + b1_base;

    let fiber = realize_global(ctx, g)?;
    let realized = fiber.total_genus as i64;
    let fiber_comps =
        fiber.components.len() as i128 - fiber.edges.len() as i128 + fiber.b1 as i128;
    if fiber_comps == 1 {
        let twice = p * (2 * g_x - 2) + g.r as i128 * (p - 1) + 2;
        if twice % 2 != 0 {
            return Err(RealizeError::new("r", "generic fiber genus is not an integer"));
        }
        let expected = twice / 2;
        if expected < 0 {
            return Err(RealizeError::new("r", format!("generic fiber genus {expected} is negative")));
        }
        Ok(Conservation {
            expected: expected as i64,
            realized,
            ok: expected as i64 == realized,
        })
    } else {
        // the cover is split into p disjoint copies of the base
        let expected = (p * g_x) as i64;
        let ok = fiber_comps == p && expected == realized;
        Ok(Conservation { expected, realized, ok })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degdata::VertexTorsor;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p, 2 * (p - 1)).unwrap()
    }

    #[test]
    fn vertex_covers() {
        let c = ctx(3);
        let et = VertexTorsor::Symbolic(GroupKind::Etale);
        // conductor 2: completed cover of the affine line, genus (p-1)/2
        assert_eq!(realize_vertex(&c, 0, &et, &[(2, 0)], "v").unwrap(), (1, 1, vec![1]));
        // two points of conductor 1: genus p-1
        assert_eq!(
            realize_vertex(&c, 0, &et, &[(1, 0), (1, 0)], "v").unwrap(),
            (1, 2, vec![1, 1])
        );
        // one ramified point plus one split point
        assert_eq!(
            realize_vertex(&c, 0, &et, &[(1, 0), (0, 0)], "v").unwrap(),
            (1, 0, vec![1, 3])
        );
        let sp = VertexTorsor::Split;
        assert_eq!(realize_vertex(&c, 2, &sp, &[(0, 0)], "v").unwrap(), (3, 2, vec![3]));
        let mu = VertexTorsor::Symbolic(GroupKind::Mult);
        assert_eq!(
            realize_vertex(&c, 2, &mu, &[(-1, 0), (-2, 0)], "v").unwrap(),
            (1, 2, vec![1, 1])
        );
        // no ramification at all: the count demands negative genus
        assert!(realize_vertex(&c, 0, &et, &[(0, 0)], "v").is_err());
    }

    #[test]
    fn betti_of_theta_graph() {
        let comp = |id: &str| FragmentComponent {
            id: id.into(),
            genus: 0,
            provenance: String::new(),
        };
        let comps = vec![comp("a"), comp("b")];
        let edges = vec![
            ("a".to_string(), "b".to_string()),
            ("a".to_string(), "b".to_string()),
            ("a".to_string(), "b".to_string()),
        ];
        assert_eq!(betti(&comps, &edges), 2);
    }
}
