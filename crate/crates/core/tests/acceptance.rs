//! End-to-end gate over the whole pipeline: validation, realization, genus
//! arithmetic, conservation, reduction kernels, the Galois action and the
//! enumeration. Each criterion prints one verdict line; run with
//! `--nocapture` to see the lines on success.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use degenp::arith::field::{Fq, FqElem};
use degenp::arith::place::Place;
use degenp::arith::poly::normalize;
use degenp::arith::ratfunc::{radd, rdiv, rmul, rpow, rsub, RationalFunction};
use degenp::arith::PrimeContext;
use degenp::degdata::{
    Attachment, BoundaryType, EdgeDatum, GlobalDegData, HalfLabel, MarkedPointDatum,
    SimpleDegData, Species, VertexLabel, VertexTorsor,
};
use degenp::fiber::{conservation_check, realize_double, realize_simple};
use degenp::fixtures;
use degenp::galois::{
    apply_cover, enum_double, enum_simple, equivariance_check, extract_degdata, CoverComponent,
    CoverDescription, CoverNode, GaloisElement,
};
use degenp::torsor::{add_reduce, as_reduce, kummer_reduce, GroupKind, TorsorRep};
use degenp::validate::{
    check_double, check_global, check_simple, genus_double, genus_simple, genus_tail, shape,
    GenusError, ValidationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(n: usize, name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    println!("criterion {n} ({name}): {}", if outcome.is_ok() { "pass" } else { "fail" });
    if let Err(payload) = outcome {
        resume_unwind(payload);
    }
}

fn failing(rep: &ValidationReport) -> BTreeSet<String> {
    rep.failures().map(|e| e.axiom.clone()).collect()
}

fn assert_clean(rep: &ValidationReport, what: &str) {
    let got = failing(rep);
    assert!(got.is_empty(), "{what}: unexpected failures {got:?}");
}

fn assert_names(rep: &ValidationReport, axiom: &str, what: &str) {
    let got = failing(rep);
    assert!(got.contains(axiom), "{what}: expected {axiom} among the failures, got {got:?}");
}

fn assert_only(rep: &ValidationReport, axiom: &str, what: &str) {
    let got = failing(rep);
    assert_eq!(got, BTreeSet::from([axiom.to_string()]), "{what}: expected only {axiom}");
}

/// Criterion 1: clean data pass, and every axiom is named by a mutation
/// that breaks it and nothing unrelated.
#[test]
fn criterion_1_axiom_gate() {
    criterion(1, "axiom gate", || {
        for p in [3u64, 5, 7] {
            let (ctx, fq, d) = fixtures::tail(p);
            assert_clean(&check_simple(&ctx, &fq, &d), "tail");
        }
        for (p, c) in [(2u64, 3u64), (3, 4), (5, 3)] {
            let (ctx, fq, d) = fixtures::tail_chain(p, c);
            assert_clean(&check_simple(&ctx, &fq, &d), "tail chain");
        }
        for p in [2u64, 3, 5, 7] {
            let (ctx, fq, d) = fixtures::ramified_pair(p);
            assert_clean(&check_simple(&ctx, &fq, &d), "ramified pair");
        }
        let (ctx, fq, d) = fixtures::ramified_pair_concrete();
        assert_clean(&check_simple(&ctx, &fq, &d), "concrete ramified pair");
        for p in [2u64, 3, 5] {
            let (ctx, fq, d) = fixtures::bridge(p);
            assert_clean(&check_double(&ctx, &fq, &d), "bridge");
            let (ctx, fq, d) = fixtures::bridge_skew(p);
            assert_clean(&check_double(&ctx, &fq, &d), "skew bridge");
            let (ctx, fq, d) = fixtures::bridge_pair(p);
            assert_clean(&check_double(&ctx, &fq, &d), "bridge pair");
            let (ctx, fq, d) = fixtures::bridge_pair_marked(p);
            assert_clean(&check_double(&ctx, &fq, &d), "marked bridge pair");
        }
        for p in [3u64, 5] {
            let (ctx, fq, g) = fixtures::genus_two_global(p);
            assert_clean(&check_global(&ctx, &fq, &g), "global");
            let (ctx, fq, g) = fixtures::genus_two_global_skew(p);
            assert_clean(&check_global(&ctx, &fq, &g), "skew global");
            let (ctx, fq, g) = fixtures::genus_two_global_marked(p);
            assert_clean(&check_global(&ctx, &fq, &g), "marked global");
            let (ctx, fq, g) = fixtures::genus_two_global_split(p);
            assert_clean(&check_global(&ctx, &fq, &g), "split global");
        }

        for p in [3u64, 5] {
            let (ctx, fq, mut d) = fixtures::tail(p);
            d.r = -1;
            assert_names(&check_simple(&ctx, &fq, &d), "A1", "negative branch count");

            let (ctx, fq, mut d) = fixtures::tail(p);
            d.vertices.clear();
            assert_only(&check_simple(&ctx, &fq, &d), "A2", "empty tree");

            let (ctx, fq, mut d) = fixtures::tail(p);
            d.vertices[0].genus = 1;
            assert_only(&check_simple(&ctx, &fq, &d), "A3", "positive genus vertex");

            let (ctx, fq, mut d) = fixtures::tail(p);
            d.vertices[0].delta = ctx.vkp;
            assert_names(&check_simple(&ctx, &fq, &d), "A4", "degree against the dictionary");

            let (ctx, fq, mut d) = fixtures::bridge_pair_marked(p);
            d.vertices[0].marked[0].r = 3;
            assert_only(&check_double(&ctx, &fq, &d), "A5", "marked branch count off by one");

            let (ctx, fq, mut d) = fixtures::bridge_pair(p);
            d.edges[0].half[1] = HalfLabel { m: 1, h: 0 };
            assert_names(&check_double(&ctx, &fq, &d), "A6", "edge halves not opposite");

            let (ctx, fq, mut d) = fixtures::bridge(p);
            d.endpoint_points[0].t = 1;
            assert_only(&check_double(&ctx, &fq, &d), "A7", "attachment misses the boundary degree");

            let (ctx, fq, mut d) = fixtures::bridge_pair(p);
            d.r = 2;
            assert_names(&check_double(&ctx, &fq, &d), "A8", "branch count against the point ledger");

            let (ctx, fq, mut d) = fixtures::bridge(p);
            d.vertices[0].torsor = VertexTorsor::Split;
            assert_names(&check_double(&ctx, &fq, &d), "A9", "split vertex under nonsplit species");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.components[0].genus = 3;
            assert_names(&check_global(&ctx, &fq, &g), "G1", "component genus against the zero count");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.nodes[0].half[1].m = -2;
            assert_names(&check_global(&ctx, &fq, &g), "G2", "node half against its datum");

            let (ctx, fq, mut g) = fixtures::genus_two_global_marked(p);
            g.marked[0].r = 0;
            assert_names(&check_global(&ctx, &fq, &g), "G3", "marked branch count below its label");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.critical[0].m = -1;
            assert_names(&check_global(&ctx, &fq, &g), "G4", "critical conductor too shallow");

            let (ctx, fq, mut g) = fixtures::genus_two_global_marked(p);
            g.r = 1;
            assert_only(&check_global(&ctx, &fq, &g), "G5", "global branch count");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.nodes[0].data.as_mut().unwrap().vertices[0].genus = 1;
            assert_names(&check_global(&ctx, &fq, &g), "G6", "broken datum attached to a node");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.critical[0].m = -4;
            g.critical[0].data = None;
            assert_names(&check_global(&ctx, &fq, &g), "G7", "zero of the wrong order");

            let (ctx, fq, mut g) = fixtures::genus_two_global(p);
            g.components[0].delta = p - 1;
            assert_names(&check_global(&ctx, &fq, &g), "G8", "component degree against the dictionary");
        }

        // concrete vertex whose declared conductor disagrees with the rep
        let (ctx, fq, mut d) = fixtures::ramified_pair_concrete();
        let a = fq.decode(3);
        let num = normalize(&fq, vec![a]);
        let den = normalize(&fq, vec![fq.zero(), fq.zero(), fq.one()]);
        let rep = RationalFunction::new(&fq, &num, &den).expect("valid function");
        d.vertices[0].torsor = VertexTorsor::Concrete(TorsorRep::new(GroupKind::Etale, rep));
        assert_only(&check_simple(&ctx, &fq, &d), "A4", "declared label against the actual rep");
    });
}

/// Criterion 2: the ramified pair realizes to two rational curves joined
/// along p points, so b1 = p - 1 and the type genus is reached.
#[test]
fn criterion_2_split_node_fiber() {
    criterion(2, "split node fiber", || {
        for p in [2u64, 3, 5, 7] {
            let (ctx, fq, d) = fixtures::ramified_pair(p);
            assert_clean(&check_simple(&ctx, &fq, &d), "ramified pair");
            let frag = realize_simple(&ctx, &d).expect("valid datum realizes");
            assert_eq!(frag.components.len(), 2, "one line above each vertex");
            assert!(frag.components.iter().all(|c| c.genus == 0), "rational components");
            assert_eq!(frag.edges.len(), p as usize, "the node has p preimages");
            assert_eq!(frag.b1(), p - 1);
            assert_eq!(frag.boundaries.len(), 1);
            assert_eq!(frag.boundaries[0].len(), 1, "the branched origin has one preimage");
            assert_eq!(frag.total_genus(), p - 1);
            assert_eq!(genus_simple(&ctx, d.r, d.boundary.m), Ok(p - 1));
        }
    });
}

/// Criterion 3: the genus formulas against a hand-computed table, the
/// error cases, and realized tails of every conductor in the table.
#[test]
fn criterion_3_genus_formulas() {
    criterion(3, "genus formulas", || {
        let ctx = |p: u64, vkp: u64| PrimeContext::new(p, vkp).expect("valid context");

        assert_eq!(genus_simple(&ctx(5, 4), 7, 2), Ok(8));
        assert_eq!(genus_simple(&ctx(3, 2), 0, -2), Ok(1));
        assert_eq!(genus_simple(&ctx(7, 6), 0, -2), Ok(3));
        assert_eq!(genus_simple(&ctx(2, 1), 5, 0), Ok(2));
        assert_eq!(genus_double(&ctx(3, 2), 0, -1, -1), Ok(2));
        assert_eq!(genus_double(&ctx(5, 4), 0, -1, -1), Ok(4));
        assert_eq!(genus_double(&ctx(3, 2), 0, -2, -2), Ok(4));
        assert_eq!(genus_double(&ctx(5, 4), 0, -1, -2), Ok(6));
        assert_eq!(genus_tail(&ctx(3, 2), -2), Ok(1));
        assert_eq!(genus_tail(&ctx(5, 4), -2), Ok(2));
        assert_eq!(genus_tail(&ctx(7, 6), -2), Ok(3));
        assert_eq!(genus_tail(&ctx(2, 1), -3), Ok(1));
        assert_eq!(genus_tail(&ctx(2, 1), -1), Ok(0));

        assert_eq!(genus_tail(&ctx(3, 2), 0), Err(GenusError::BadTail(0)));
        assert_eq!(genus_simple(&ctx(3, 2), 0, 3), Err(GenusError::Negative(-4)));
        assert_eq!(genus_simple(&ctx(2, 1), 0, -2), Err(GenusError::NotIntegral));

        // realized tails reach (c - 1)(p - 1) / 2 across characteristics
        for (p, c, want) in [(3u64, 2u64, 1u64), (3, 4, 3), (5, 2, 2), (5, 3, 4), (2, 3, 1), (7, 2, 3)]
        {
            let (cx, fq, d) = fixtures::tail_chain(p, c);
            assert_clean(&check_simple(&cx, &fq, &d), "tail chain");
            let frag = realize_simple(&cx, &d).expect("tail realizes");
            assert_eq!(frag.total_genus(), want, "tail of conductor {c} at p = {p}");
            assert_eq!(genus_tail(&cx, -(c as i64)), Ok(want));
            assert_eq!(genus_simple(&cx, 0, -(c as i64)), Ok(want));
        }
    });
}

/// Criterion 4: every enumerated datum realizes to a fiber whose total
/// genus equals the type genus, and the global fixtures conserve genus.
#[test]
fn criterion_4_conservation() {
    criterion(4, "conservation sweep", || {
        let start = Instant::now();
        let ctx = fixtures::context(3);

        let all = enum_simple(&ctx, 3, 4, 1);
        assert_eq!(all.len(), 361, "simple classes in the slice");
        for d in &all {
            let frag = realize_simple(&ctx, d).expect("enumerated datum realizes");
            assert_eq!(
                Ok(frag.total_genus()),
                genus_simple(&ctx, d.r, d.boundary.m),
                "fiber genus against the type"
            );
        }

        let doubles = enum_double(&ctx, 1, 2, 2);
        assert_eq!(doubles.len(), 119, "double classes in the slice");
        for d in &doubles {
            let frag = realize_double(&ctx, d).expect("enumerated datum realizes");
            assert_eq!(
                Ok(frag.total_genus()),
                genus_double(&ctx, d.r, d.boundaries[0].m, d.boundaries[1].m),
                "fiber genus against the type"
            );
        }

        for p in [3u64, 5] {
            let (cx, _fq, g) = fixtures::genus_two_global(p);
            let cons = conservation_check(&cx, &g).expect("connected base");
            assert!(cons.ok, "genus conserved");
            assert_eq!(cons.expected as u64, 4 + 3 * (p - 1));

            let (cx, _fq, g) = fixtures::genus_two_global_skew(p);
            assert!(conservation_check(&cx, &g).expect("connected base").ok);

            let (cx, _fq, g) = fixtures::genus_two_global_marked(p);
            let cons = conservation_check(&cx, &g).expect("connected base");
            assert!(cons.ok);
            assert_eq!(cons.expected as u64, 4 * p);

            let (cx, _fq, g) = fixtures::genus_two_global_split(p);
            let cons = conservation_check(&cx, &g).expect("connected base");
            assert!(cons.ok);
            assert_eq!(cons.expected as u64, 4 * p);
        }

        assert!(start.elapsed().as_secs() < 60, "sweep stays within budget");
    });
}

fn random_poly(fq: &Fq, rng: &mut ChaCha8Rng, deg: usize) -> Vec<FqElem> {
    (0..=deg).map(|_| fq.decode(rng.gen_range(0..fq.order()))).collect()
}

fn random_rf(fq: &Fq, rng: &mut ChaCha8Rng) -> RationalFunction {
    loop {
        let ndeg = rng.gen_range(0..=3);
        let ddeg = rng.gen_range(0..=2);
        let num = normalize(fq, random_poly(fq, rng, ndeg));
        let den = normalize(fq, random_poly(fq, rng, ddeg));
        if den.is_zero() {
            continue;
        }
        return RationalFunction::new(fq, &num, &den).expect("nonzero denominator");
    }
}

fn random_rep(fq: &Fq, rng: &mut ChaCha8Rng, kind: GroupKind) -> TorsorRep {
    for _ in 0..200 {
        let rep = TorsorRep::new(kind, random_rf(fq, rng));
        if rep.check_admissible(fq).is_ok() {
            return rep;
        }
    }
    panic!("no admissible representative in 200 draws");
}

/// Criterion 5: the reduction maps are projections onto coset
/// representatives, admissible differentials have degree -2, and pinned
/// conductor-residue readings come out exactly.
#[test]
fn criterion_5_torsor_kernels() {
    criterion(5, "torsor reduction kernels", || {
        let fields = [
            Fq::prime(2).unwrap(),
            Fq::prime(3).unwrap(),
            Fq::prime(5).unwrap(),
            Fq::make(3, 2).unwrap(),
        ];
        for fq in &fields {
            let p = fq.p();
            let mut rng = ChaCha8Rng::seed_from_u64(41 + p + fq.degree() as u64);
            for _ in 0..100 {
                let g = random_rf(fq, &mut rng);
                let u = random_rf(fq, &mut rng);
                let up = rpow(fq, &u, p as i64).expect("positive power");

                let canon = as_reduce(fq, &g);
                assert_eq!(as_reduce(fq, &canon).encode(fq), canon.encode(fq), "idempotent");
                let shifted = radd(fq, &g, &rsub(fq, &up, &u));
                assert_eq!(as_reduce(fq, &shifted).encode(fq), canon.encode(fq), "coboundary");

                let acanon = add_reduce(fq, &g);
                assert_eq!(add_reduce(fq, &acanon).encode(fq), acanon.encode(fq), "idempotent");
                assert_eq!(
                    add_reduce(fq, &radd(fq, &g, &up)).encode(fq),
                    acanon.encode(fq),
                    "pth power shift"
                );

                if !g.is_zero() && !u.is_zero() {
                    let kcanon = kummer_reduce(fq, &g).expect("nonzero class");
                    assert_eq!(
                        kummer_reduce(fq, &kcanon).unwrap().encode(fq),
                        kcanon.encode(fq),
                        "idempotent"
                    );
                    assert_eq!(
                        kummer_reduce(fq, &rmul(fq, &g, &up)).unwrap().encode(fq),
                        kcanon.encode(fq),
                        "pth power factor"
                    );
                }
            }

            let mut rng = ChaCha8Rng::seed_from_u64(977 + p);
            for kind in [GroupKind::Etale, GroupKind::Mult, GroupKind::Add] {
                for _ in 0..20 {
                    let rep = random_rep(fq, &mut rng, kind);
                    let total = rep.differential(fq).expect("admissible").total_order(fq);
                    assert_eq!(total, Some(-2), "differential degree on the line");
                }
            }
        }

        let fq = Fq::prime(3).unwrap();
        let x = RationalFunction::x(&fq);
        let one = RationalFunction::one(&fq);
        let inv_x = rdiv(&fq, &one, &x).unwrap();
        let at_zero = Place::from_element(&fq, &fq.zero());
        let at_one = Place::from_element(&fq, &fq.one());

        let mult_x = TorsorRep::new(GroupKind::Mult, x.clone());
        assert_eq!(mult_x.conductor_residue(&fq, &at_zero).unwrap(), (0, 1));
        assert_eq!(mult_x.conductor_residue(&fq, &Place::Infinity).unwrap(), (0, 2));
        assert_eq!(mult_x.conductor_residue(&fq, &at_one).unwrap(), (-1, 0));

        let x2p1 = radd(&fq, &rmul(&fq, &x, &x), &one);
        let mult_quad = TorsorRep::new(GroupKind::Mult, x2p1);
        assert_eq!(mult_quad.conductor_residue(&fq, &at_zero).unwrap(), (-2, 0));

        let etale_pole = TorsorRep::new(GroupKind::Etale, inv_x.clone());
        assert_eq!(etale_pole.conductor_residue(&fq, &at_zero).unwrap(), (1, 0));
        let etale_deep = TorsorRep::new(GroupKind::Etale, rmul(&fq, &inv_x, &inv_x));
        assert_eq!(etale_deep.conductor_residue(&fq, &at_zero).unwrap(), (2, 0));

        let add_pole = TorsorRep::new(GroupKind::Add, inv_x);
        assert_eq!(add_pole.conductor_residue(&fq, &at_zero).unwrap(), (1, 0));

        let f5 = Fq::prime(5).unwrap();
        let x5 = RationalFunction::x(&f5);
        let mult5 = TorsorRep::new(GroupKind::Mult, rpow(&f5, &x5, 3).unwrap());
        let at_zero5 = Place::from_element(&f5, &f5.zero());
        assert_eq!(mult5.conductor_residue(&f5, &at_zero5).unwrap(), (0, 3));
        assert_eq!(mult5.conductor_residue(&f5, &Place::Infinity).unwrap(), (0, 2));
    });
}

fn label_bag(g: &GlobalDegData) -> Vec<(u8, usize, i64, u64, i64)> {
    let mut out = Vec::new();
    for mk in &g.marked {
        out.push((0u8, mk.component, mk.m, mk.h, mk.r));
    }
    for ck in &g.critical {
        out.push((1u8, ck.component, ck.m, ck.h, 0));
    }
    for nd in &g.nodes {
        for sd in 0..2 {
            out.push((2u8, nd.ends[sd], nd.half[sd].m, nd.half[sd].h, 0));
        }
    }
    out.sort_unstable();
    out
}

/// Criterion 6: extracting degeneration data commutes with the arithmetic
/// Frobenius on random covers, and the numeric labels never move.
#[test]
fn criterion_6_galois_equivariance() {
    criterion(6, "galois equivariance", || {
        let kinds = [GroupKind::Etale, GroupKind::Mult, GroupKind::Add];
        for (p, seed) in [(3u64, 11u64), (5, 13)] {
            let ctx = fixtures::context(p);
            let fq = Fq::make(p, 2).unwrap();
            let s = GaloisElement::frobenius(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..100 {
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let mut components = vec![CoverComponent {
                    genus: 0,
                    torsor: random_rep(&fq, &mut rng, kind),
                    punctures: if i % 2 == 0 {
                        vec![Place::from_element(&fq, &fq.decode(rng.gen_range(0..fq.order())))]
                    } else {
                        Vec::new()
                    },
                }];
                let mut nodes = Vec::new();
                if i % 3 == 0 {
                    let other = kinds[rng.gen_range(0..kinds.len())];
                    components.push(CoverComponent {
                        genus: 0,
                        torsor: random_rep(&fq, &mut rng, other),
                        punctures: Vec::new(),
                    });
                    nodes.push(CoverNode {
                        ends: [0, 1],
                        places: [
                            Place::from_element(&fq, &fq.decode(rng.gen_range(0..fq.order()))),
                            Place::from_element(&fq, &fq.decode(rng.gen_range(0..fq.order()))),
                        ],
                    });
                }
                let cover = CoverDescription { components, nodes };
                assert!(
                    equivariance_check(&ctx, &fq, &s, &cover).expect("extraction succeeds"),
                    "extraction commutes with the action at p = {p}, sample {i}"
                );

                let here = extract_degdata(&ctx, &fq, &cover).unwrap();
                let there = extract_degdata(&ctx, &fq, &apply_cover(&fq, &s, &cover)).unwrap();
                assert_eq!(label_bag(&here), label_bag(&there), "labels are Galois invariants");
            }
        }
    });
}

fn shape_labels(p: u64, kind: GroupKind, max_m: i64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    for m in -max_m..=max_m {
        for h in 0..p {
            if shape(p, kind, m, h).is_ok() {
                out.push((m, h));
            }
        }
    }
    out
}

fn oracle_marked(p: u64, kind: GroupKind, max_m: i64) -> Vec<Option<MarkedPointDatum>> {
    let mut out = vec![None];
    for (m, h) in shape_labels(p, kind, max_m) {
        if m >= 0 {
            out.push(Some(MarkedPointDatum { location: None, m, h, r: m + 1 }));
        }
    }
    out
}

fn oracle_boundaries(p: u64, max_m: i64, max_t: u64) -> Vec<(BoundaryType, Attachment)> {
    let mut out = Vec::new();
    for bk in [GroupKind::Etale, GroupKind::Mult, GroupKind::Add] {
        for (bm, bh) in shape_labels(p, bk, max_m) {
            for t in 1..=max_t {
                out.push((
                    BoundaryType { kind: bk, m: bm, h: bh },
                    Attachment { m: -bm, h: (p - bh) % p, t, location: None },
                ));
            }
        }
    }
    out
}

/// Criterion 7: a direct scan over all decorated trees on at most two
/// vertices, filtered only by the validator, finds exactly the classes the
/// enumeration reports.
#[test]
fn criterion_7_enumeration_oracle() {
    criterion(7, "enumeration oracle", || {
        let ctx = fixtures::context(3);
        let fq = Fq::prime(3).unwrap();
        let p = ctx.p;
        let (max_m, max_t) = (2i64, 1u64);
        let kinds = [GroupKind::Etale, GroupKind::Mult, GroupKind::Add];

        let listed = enum_simple(&ctx, 2, max_m, max_t);
        assert_eq!(listed.len(), 60, "classes in the two-vertex slice");
        assert_eq!(listed, enum_simple(&ctx, 2, max_m, max_t), "enumeration is deterministic");
        let classes: BTreeSet<Vec<u8>> =
            listed.iter().map(|d| d.canonical_encode().expect("tree data")).collect();
        assert_eq!(classes.len(), listed.len(), "encodings are pairwise distinct");

        let (_, _, t) = fixtures::tail(3);
        assert!(classes.contains(&t.canonical_encode().unwrap()), "the tail is in the slice");

        let mut scanned: BTreeSet<Vec<u8>> = BTreeSet::new();
        let bts = oracle_boundaries(p, max_m, max_t);
        let mut consider = |d: &SimpleDegData| {
            if check_simple(&ctx, &fq, d).all_pass() {
                scanned.insert(d.canonical_encode().expect("tree data"));
            }
        };

        // single vertex
        for k0 in kinds {
            for d0 in 0..=ctx.vkp {
                for mk in oracle_marked(p, k0, max_m) {
                    for (bt, at) in &bts {
                        consider(&SimpleDegData {
                            species: Species::NonSplit,
                            r: mk.as_ref().map_or(0, |mp| mp.r),
                            boundary: bt.clone(),
                            vertices: vec![VertexLabel {
                                torsor: VertexTorsor::Symbolic(k0),
                                delta: d0,
                                genus: 0,
                                marked: mk.iter().cloned().collect(),
                            }],
                            edges: Vec::new(),
                            origin: 0,
                            origin_point: at.clone(),
                        });
                    }
                }
            }
        }

        // two vertices joined by one edge, the origin on either side
        for k0 in kinds {
            for k1 in kinds {
                let marked0 = oracle_marked(p, k0, max_m);
                let marked1 = oracle_marked(p, k1, max_m);
                for (m0, h0) in shape_labels(p, k0, max_m) {
                    let (m1, h1) = (-m0, (p - h0) % p);
                    if shape(p, k1, m1, h1).is_err() {
                        continue;
                    }
                    for te in 1..=max_t {
                        let edge = EdgeDatum {
                            ends: [0, 1],
                            e: p * te,
                            half: [HalfLabel { m: m0, h: h0 }, HalfLabel { m: m1, h: h1 }],
                        };
                        for d0 in 0..=ctx.vkp {
                            for d1 in 0..=ctx.vkp {
                                for mk0 in &marked0 {
                                    for mk1 in &marked1 {
                                        let vertices = vec![
                                            VertexLabel {
                                                torsor: VertexTorsor::Symbolic(k0),
                                                delta: d0,
                                                genus: 0,
                                                marked: mk0.iter().cloned().collect(),
                                            },
                                            VertexLabel {
                                                torsor: VertexTorsor::Symbolic(k1),
                                                delta: d1,
                                                genus: 0,
                                                marked: mk1.iter().cloned().collect(),
                                            },
                                        ];
                                        let r = mk0.as_ref().map_or(0, |mp| mp.r)
                                            + mk1.as_ref().map_or(0, |mp| mp.r);
                                        for origin in 0..2usize {
                                            for (bt, at) in &bts {
                                                consider(&SimpleDegData {
                                                    species: Species::NonSplit,
                                                    r,
                                                    boundary: bt.clone(),
                                                    vertices: vertices.clone(),
                                                    edges: vec![edge.clone()],
                                                    origin,
                                                    origin_point: at.clone(),
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        assert_eq!(scanned, classes, "direct scan agrees with the enumeration");
    });
}

/// Criterion 8: the deliberately inconsistent pair is rejected by the
/// validator and contradicted by its own fiber, while the consistent
/// reading of the same tree passes both.
#[test]
fn criterion_8_mismatch_diagnosis() {
    criterion(8, "mismatch diagnosis", || {
        for p in [3u64, 5] {
            let (ctx, fq, bad) = fixtures::bridge_pair_mismatched(p);
            let rep = check_double(&ctx, &fq, &bad);
            assert!(!rep.all_pass(), "inconsistent attachments must not validate");
            assert!(!failing(&rep).is_empty());
            let err = realize_double(&ctx, &bad).expect_err("fiber contradicts the type");
            assert_eq!(err.location, "type", "realization pins the contradiction on the type");

            let (ctx, fq, good) = fixtures::bridge_pair_marked(p);
            assert_clean(&check_double(&ctx, &fq, &good), "consistent reading");
            let frag = realize_double(&ctx, &good).expect("consistent reading realizes");
            assert_eq!(frag.total_genus(), 2 * (p - 1));
            assert_eq!(
                genus_double(&ctx, good.r, good.boundaries[0].m, good.boundaries[1].m),
                Ok(2 * (p - 1))
            );
        }
    });
}
