//! Regenerate the JSON documents under fixtures/ from the built-in data.
//!
//! Run from anywhere in the workspace:
//!
//! ```text
//! cargo run -p degenp --example make_fixtures
//! ```

use std::fs;
use std::path::PathBuf;

use degenp::arith::field::Fq;
use degenp::arith::poly::normalize;
use degenp::arith::ratfunc::RationalFunction;
use degenp::fiber::realize_global;
use degenp::fixtures;
use degenp::galois::{CoverComponent, CoverDescription};
use degenp::json::{Document, Payload};
use degenp::torsor::{GroupKind, TorsorRep};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&dir).expect("fixtures directory");
    let write = |name: &str, doc: Document| {
        let path = dir.join(name);
        fs::write(&path, doc.to_string_pretty() + "\n").expect("write fixture");
        println!("wrote {}", path.display());
    };

    let (ctx, _, d) = fixtures::tail(3);
    write("tail_p3.json", Document::new(&ctx, 1, Payload::Simple(d)));

    let (ctx, _, d) = fixtures::ramified_pair(3);
    write("ramified_pair_p3.json", Document::new(&ctx, 1, Payload::Simple(d)));

    let (ctx, fq, d) = fixtures::ramified_pair_concrete();
    write(
        "ramified_pair_concrete_f9.json",
        Document::new(&ctx, fq.degree(), Payload::Simple(d)),
    );

    let (ctx, _, d) = fixtures::bridge(3);
    write("bridge_p3.json", Document::new(&ctx, 1, Payload::Double(d)));

    let (ctx, _, d) = fixtures::bridge_pair(3);
    write("bridge_pair_p3.json", Document::new(&ctx, 1, Payload::Double(d)));

    let (ctx, _, d) = fixtures::bridge_pair_mismatched(3);
    write(
        "bridge_pair_mismatched_p3.json",
        Document::new(&ctx, 1, Payload::Double(d)),
    );

    let (ctx, _, g) = fixtures::genus_two_global(3);
    write("genus_two_global_p3.json", Document::new(&ctx, 1, Payload::Global(g.clone())));
    let fiber = realize_global(&ctx, &g).expect("fixture realizes");
    write("fiber_genus_two_p3.json", Document::new(&ctx, 1, Payload::Fiber(fiber)));

    let (ctx, _, g) = fixtures::genus_two_global(5);
    write("genus_two_global_p5.json", Document::new(&ctx, 1, Payload::Global(g)));

    let (ctx, _, g) = fixtures::genus_two_global_marked(3);
    write("genus_two_global_marked_p3.json", Document::new(&ctx, 1, Payload::Global(g)));

    let (ctx, _, g) = fixtures::genus_two_global_split(3);
    write("genus_two_global_split_p3.json", Document::new(&ctx, 1, Payload::Global(g)));

    // explicit Kummer cover of one line, data read off f = t
    let ctx = fixtures::context(3);
    let fq = Fq::prime(3).expect("field");
    let num = normalize(&fq, vec![fq.zero(), fq.one()]);
    let den = normalize(&fq, vec![fq.one()]);
    let f = RationalFunction::new(&fq, &num, &den).expect("valid function");
    let cover = CoverDescription {
        components: vec![CoverComponent {
            genus: 0,
            torsor: TorsorRep::new(GroupKind::Mult, f),
            punctures: Vec::new(),
        }],
        nodes: Vec::new(),
    };
    write("cover_line_p3.json", Document::new(&ctx, 1, Payload::Cover(cover)));
}
