//! Worked data shared by tests, the command line examples, and the docs.
//!
//! Every constructor returns the ambient context and working field along
//! with the datum, so call sites can validate or realize immediately.

use crate::arith::field::Fq;
use crate::arith::place::Place;
use crate::arith::poly::normalize;
use crate::arith::ratfunc::RationalFunction;
use crate::arith::PrimeContext;
use crate::degdata::{
    Attachment, BoundaryType, ComponentLabel, CriticalDatum, DoubleDegData, EdgeDatum,
    GlobalDegData, HalfLabel, MarkedDatum, MarkedPointDatum, NodeDatum, SimpleDegData, Species,
    VertexLabel, VertexTorsor,
};
use crate::torsor::{GroupKind, TorsorRep};

/// Context with the smallest even ramification, vkp = 2(p - 1).
pub fn context(p: u64) -> PrimeContext {
    PrimeContext::new(p, 2 * (p - 1)).expect("valid context")
}

fn field(p: u64) -> Fq {
    Fq::prime(p).expect("valid prime")
}

fn vertex(torsor: VertexTorsor, delta: u64) -> VertexLabel {
    VertexLabel { torsor, delta, genus: 0, marked: Vec::new() }
}

fn etale(delta: u64) -> VertexLabel {
    vertex(VertexTorsor::Symbolic(GroupKind::Etale), delta)
}

fn attach(m: i64, t: u64) -> Attachment {
    Attachment { m, h: 0, t, location: None }
}

fn mult_boundary(m: i64) -> BoundaryType {
    BoundaryType { kind: GroupKind::Mult, m, h: 0 }
}

/// One unramified line with a single wildly branched point of conductor 2,
/// hanging off a multiplicative boundary. Total genus (p - 1)/2. Needs
/// p >= 3 so the conductor is prime to p.
pub fn tail(p: u64) -> (PrimeContext, Fq, SimpleDegData) {
    tail_chain(p, 2)
}

/// Tail of conductor c (so p does not divide c): one line, one branched
/// point, boundary (mult, -c, 0); the different drops all the way from
/// vkp = c(p - 1) to 0. Total genus (c - 1)(p - 1)/2.
pub fn tail_chain(p: u64, c: u64) -> (PrimeContext, Fq, SimpleDegData) {
    assert!(c >= 2 && c % p != 0);
    let ctx = PrimeContext::new(p, c * (p - 1)).expect("valid context");
    let d = SimpleDegData {
        species: Species::NonSplit,
        r: 0,
        boundary: mult_boundary(-(c as i64)),
        vertices: vec![etale(0)],
        edges: Vec::new(),
        origin: 0,
        origin_point: attach(c as i64, 1),
    };
    (ctx, field(p), d)
}

/// Two lines joined by a split node, each carrying one tamely extended
/// branch point of conductor 1; r = 2. Total genus p - 1 with first Betti
/// number p - 1.
pub fn ramified_pair(p: u64) -> (PrimeContext, Fq, SimpleDegData) {
    let ctx = context(p);
    let mut near = etale(0);
    near.marked.push(MarkedPointDatum { location: None, m: 1, h: 0, r: 2 });
    let d = SimpleDegData {
        species: Species::NonSplit,
        r: 2,
        boundary: mult_boundary(-1),
        vertices: vec![etale(0), near],
        edges: vec![EdgeDatum {
            ends: [0, 1],
            e: p,
            half: [HalfLabel { m: 0, h: 0 }, HalfLabel { m: 0, h: 0 }],
        }],
        origin: 0,
        origin_point: attach(1, 2),
    };
    (ctx, field(p), d)
}

/// The ramified pair for p = 3 with the origin vertex made concrete over
/// F_9: the torsor a/(x - 0) with a a generator, pinned at the rational
/// point 0. Frobenius moves a, so the datum has a Galois orbit of size 2.
pub fn ramified_pair_concrete() -> (PrimeContext, Fq, SimpleDegData) {
    let fq = Fq::make(3, 2).expect("valid field");
    let a = fq.decode(3);
    let num = normalize(&fq, vec![a]);
    let den = normalize(&fq, vec![fq.zero(), fq.one()]);
    let rep = RationalFunction::new(&fq, &num, &den).expect("valid function");
    let origin_place = Place::from_element(&fq, &fq.zero());
    let (ctx, _, mut d) = ramified_pair(3);
    d.vertices[0].torsor = VertexTorsor::Concrete(TorsorRep::new(GroupKind::Etale, rep));
    d.origin_point.location = Some(origin_place);
    (ctx, fq, d)
}

/// One line between two multiplicative boundaries, branched at two points
/// of conductor 1 that absorb the different drop; r = 0. Total genus p - 1.
pub fn bridge(p: u64) -> (PrimeContext, Fq, DoubleDegData) {
    let ctx = context(p);
    let d = DoubleDegData {
        species: Species::NonSplit,
        r: 0,
        boundaries: [mult_boundary(-1), mult_boundary(-1)],
        vertices: vec![etale(0)],
        edges: Vec::new(),
        endpoints: [0, 0],
        endpoint_points: [attach(1, 2), attach(1, 2)],
    };
    (ctx, field(p), d)
}

/// Bridge with uneven boundaries (mult, -1, 0) and (mult, -2, 0): the
/// branched points have conductors 1 and 2. Total genus 3(p - 1)/2.
pub fn bridge_skew(p: u64) -> (PrimeContext, Fq, DoubleDegData) {
    let (ctx, fq, mut d) = bridge(p);
    d.boundaries[1] = mult_boundary(-2);
    d.endpoint_points[1] = attach(2, 1);
    (ctx, fq, d)
}

/// Two lines joined by a split node, one conductor-1 branched point on
/// each, between boundaries (mult, -1, 0); r = 0. Total genus p - 1.
pub fn bridge_pair(p: u64) -> (PrimeContext, Fq, DoubleDegData) {
    let ctx = context(p);
    let d = DoubleDegData {
        species: Species::NonSplit,
        r: 0,
        boundaries: [mult_boundary(-1), mult_boundary(-1)],
        vertices: vec![etale(0), etale(0)],
        edges: vec![EdgeDatum {
            ends: [0, 1],
            e: p,
            half: [HalfLabel { m: 0, h: 0 }, HalfLabel { m: 0, h: 0 }],
        }],
        endpoints: [0, 1],
        endpoint_points: [attach(1, 2), attach(1, 2)],
    };
    (ctx, field(p), d)
}

/// The bridge pair with conductor-2 attachments forced onto the same
/// (mult, -1, 0) type. Inconsistent on purpose: the point ledger, the
/// genus ledger and the realized fiber all contradict the type.
pub fn bridge_pair_mismatched(p: u64) -> (PrimeContext, Fq, DoubleDegData) {
    let (ctx, fq, mut d) = bridge_pair(p);
    d.endpoint_points = [attach(2, 1), attach(2, 1)];
    (ctx, fq, d)
}

/// The consistent reading of the mismatched pair: keep conductor-1
/// attachments and put the extra ramification in two branch points on the
/// first line, so r = 2. Total genus 2(p - 1).
pub fn bridge_pair_marked(p: u64) -> (PrimeContext, Fq, DoubleDegData) {
    let (ctx, fq, mut d) = bridge_pair(p);
    d.r = 2;
    d.vertices[0].marked.push(MarkedPointDatum { location: None, m: 1, h: 0, r: 2 });
    (ctx, fq, d)
}

fn mult_component(genus: u64, delta: u64) -> ComponentLabel {
    ComponentLabel {
        genus,
        torsor: VertexTorsor::Symbolic(GroupKind::Mult),
        delta,
        generic: true,
    }
}

/// Two genus-2 components with generically multiplicative reduction, one
/// node carrying a bridge, and two conductor-2 critical points on each
/// component carrying tails. Base genus 4; the cover has total genus
/// 4 + 3(p - 1), which is 10 at p = 3.
pub fn genus_two_global(p: u64) -> (PrimeContext, Fq, GlobalDegData) {
    let ctx = context(p);
    let (_, _, inner) = bridge(p);
    let (tctx, _, tail_data) = tail(p);
    assert_eq!(tctx.vkp, ctx.vkp);
    let half = HalfLabel { m: -1, h: 0 };
    let critical = |component| CriticalDatum {
        component,
        location: None,
        m: -2,
        h: 0,
        data: Some(tail_data.clone()),
    };
    let g = GlobalDegData {
        components: vec![mult_component(2, ctx.vkp), mult_component(2, ctx.vkp)],
        nodes: vec![NodeDatum { ends: [0, 1], half: [half, half], r: 0, data: Some(inner) }],
        marked: Vec::new(),
        critical: vec![critical(0), critical(0), critical(1), critical(1)],
        r: 0,
    };
    (ctx, field(p), g)
}

/// Variant of the genus-two datum where the second differential form has
/// one of its zeros at the node: the node halves become (-1, 0) and
/// (-2, 0), its datum is the skew bridge, and the second component keeps a
/// single critical point. The total genus is unchanged.
pub fn genus_two_global_skew(p: u64) -> (PrimeContext, Fq, GlobalDegData) {
    let (ctx, fq, mut g) = genus_two_global(p);
    let (_, _, inner) = bridge_skew(p);
    g.nodes[0].half[1] = HalfLabel { m: -2, h: 0 };
    g.nodes[0].data = Some(inner);
    g.critical.pop();
    (ctx, fq, g)
}

/// Variant of the genus-two datum where two branch points specialize into
/// the first component. It gains two marked points with residues 1 and
/// p - 1 and two more differential zeros to balance them, so the cover has
/// total genus 4p and the conservation ledger runs with r = 2.
pub fn genus_two_global_marked(p: u64) -> (PrimeContext, Fq, GlobalDegData) {
    let (ctx, fq, mut g) = genus_two_global(p);
    g.critical.push(g.critical[0].clone());
    g.critical.push(g.critical[0].clone());
    for h in [1, p - 1] {
        g.marked.push(MarkedDatum {
            component: 0,
            location: None,
            m: 0,
            h,
            r: 1,
            data: None,
        });
    }
    g.r = 2;
    (ctx, fq, g)
}

/// The same base curve with both torsors split and no local data: the
/// cover is p disjoint copies of the base.
pub fn genus_two_global_split(p: u64) -> (PrimeContext, Fq, GlobalDegData) {
    let ctx = context(p);
    let split = ComponentLabel {
        genus: 2,
        torsor: VertexTorsor::Split,
        delta: 0,
        generic: false,
    };
    let half = HalfLabel { m: 0, h: 0 };
    let g = GlobalDegData {
        components: vec![split.clone(), split],
        nodes: vec![NodeDatum { ends: [0, 1], half: [half, half], r: 0, data: None }],
        marked: Vec::new(),
        critical: Vec::new(),
        r: 0,
    };
    (ctx, field(p), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{conservation_check, realize_double, realize_global, realize_simple};
    use crate::validate::{check_double, check_global, check_simple};

    #[test]
    fn simple_fixtures_validate() {
        for p in [3, 5] {
            for (ctx, fq, d) in [tail(p), tail_chain(p, 4), ramified_pair(p)] {
                let rep = check_simple(&ctx, &fq, &d);
                assert!(rep.all_pass(), "p = {p}: {:?}", rep.failures().collect::<Vec<_>>());
            }
        }
        let (ctx, fq, d) = ramified_pair_concrete();
        let rep = check_simple(&ctx, &fq, &d);
        assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn double_fixtures_validate() {
        for p in [3, 5] {
            for (ctx, fq, d) in [bridge(p), bridge_skew(p), bridge_pair(p), bridge_pair_marked(p)]
            {
                let rep = check_double(&ctx, &fq, &d);
                assert!(rep.all_pass(), "p = {p}: {:?}", rep.failures().collect::<Vec<_>>());
            }
            let (ctx, fq, d) = bridge_pair_mismatched(p);
            assert!(!check_double(&ctx, &fq, &d).all_pass());
        }
    }

    #[test]
    fn global_fixtures_validate() {
        for p in [3, 5] {
            for (ctx, fq, g) in [
                genus_two_global(p),
                genus_two_global_skew(p),
                genus_two_global_marked(p),
                genus_two_global_split(p),
            ] {
                let rep = check_global(&ctx, &fq, &g);
                assert!(rep.all_pass(), "p = {p}: {:?}", rep.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn fixture_fibers() {
        let (ctx, _, d) = tail(3);
        let f = realize_simple(&ctx, &d).unwrap();
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].genus, 1);
        assert!(f.edges.is_empty());
        assert_eq!(f.boundaries[0].len(), 1);

        let (ctx, _, d) = ramified_pair(3);
        let f = realize_simple(&ctx, &d).unwrap();
        assert_eq!(f.components.len(), 2);
        assert!(f.components.iter().all(|c| c.genus == 0));
        assert_eq!(f.edges.len(), 3);
        assert_eq!(f.boundaries[0].len(), 1);

        let (ctx, _, d) = bridge(3);
        let f = realize_double(&ctx, &d).unwrap();
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].genus, 2);
        assert_eq!(f.boundaries[0].len(), 1);
        assert_eq!(f.boundaries[1].len(), 1);

        let (ctx, _, d) = bridge_pair_mismatched(3);
        let err = realize_double(&ctx, &d).unwrap_err();
        assert_eq!(err.location, "type");

        let (ctx, _, g) = genus_two_global(3);
        let f = realize_global(&ctx, &g).unwrap();
        assert_eq!(f.total_genus, 10);
        assert_eq!(f.b1, 0);
        let mut genera: Vec<u64> = f.components.iter().map(|c| c.genus).collect();
        genera.sort_unstable();
        assert_eq!(genera, vec![1, 1, 1, 1, 2, 2, 2]);
        let c = conservation_check(&ctx, &g).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(c.expected, 10);

        let (ctx, _, g) = genus_two_global_skew(3);
        let f = realize_global(&ctx, &g).unwrap();
        assert_eq!(f.total_genus, 10);
        let c = conservation_check(&ctx, &g).unwrap();
        assert!(c.ok, "{c:?}");

        let (ctx, _, g) = genus_two_global_marked(3);
        let f = realize_global(&ctx, &g).unwrap();
        assert_eq!(f.total_genus, 12);
        let c = conservation_check(&ctx, &g).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(c.expected, 12);

        let (ctx, _, g) = genus_two_global_split(3);
        let f = realize_global(&ctx, &g).unwrap();
        assert_eq!(f.components.len(), 6);
        assert_eq!(f.edges.len(), 3);
        assert_eq!(f.b1, 0);
        assert_eq!(f.total_genus, 12);
        let c = conservation_check(&ctx, &g).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(c.expected, 12);
    }
}
