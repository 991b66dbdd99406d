//! Command line front end: validate, realize, enumerate, orbit,
//! equivariance, render. Exit codes: 0 success, 1 semantic failure,
//! 2 unusable input.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use degenp::arith::field::Fq;
use degenp::arith::PrimeContext;
use degenp::fiber::{
    conservation_check, realize_double, realize_global, realize_simple, CurveFragment,
};
use degenp::galois::{
    enum_double, enum_simple, equivariance_check, extract_degdata, orbit_double, orbit_global,
    orbit_simple, GaloisElement,
};
use degenp::json::{Document, Payload};
use degenp::validate::{check_double, check_global, check_simple, ValidationReport};

#[derive(Parser)]
#[command(name = "degenp", version, about = "Degeneration data of degree-p covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a datum document against the axioms
    Validate {
        path: String,
        /// Print the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Assemble the special fiber a datum describes
    Realize {
        path: String,
        /// Print the fiber as JSON (the default)
        #[arg(long)]
        json: bool,
        /// Print the fiber as DOT instead
        #[arg(long)]
        dot: bool,
    },
    /// List valid data within bounds, one document per line
    Enumerate(EnumerateArgs),
    /// Orbit of a datum under a Frobenius power
    Orbit {
        path: String,
        /// Order of the base field the Frobenius is relative to
        #[arg(long)]
        frobenius: Option<u64>,
    },
    /// Check that extraction commutes with the Galois action on a cover
    Equivariance {
        path: String,
        /// Order of the base field the Frobenius is relative to
        #[arg(long)]
        frobenius: Option<u64>,
    },
    /// Render a document as DOT
    Render { path: String },
}

#[derive(Args)]
struct EnumerateArgs {
    /// Residue characteristic
    #[arg(long)]
    p: u64,
    /// Valuation of p in the base ring; defaults to 2(p - 1)
    #[arg(long)]
    vkp: Option<u64>,
    /// Largest tree size
    #[arg(long, default_value_t = 1)]
    vertices: usize,
    /// Bound on every conductor in absolute value
    #[arg(long = "max-m", default_value_t = 2)]
    max_m: i64,
    /// Bound on every thickness
    #[arg(long = "max-t", default_value_t = 1)]
    max_t: u64,
    /// Print only the number of classes
    #[arg(long)]
    count: bool,
    /// Enumerate double data instead of simple ones
    #[arg(long)]
    double: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Print a line, exiting quietly if the consumer closed the pipe.
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_ref().as_bytes())
        .and_then(|()| out.write_all(b"\n"))
        .is_err()
    {
        std::process::exit(0);
    }
}

fn load(path: &str) -> Result<(Document, PrimeContext, Fq), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let doc = Document::parse(&text).map_err(|e| e.to_string())?;
    let ctx = doc.prime_context;
    let fq = doc.working_field().map_err(|e| e.to_string())?;
    Ok((doc, ctx, fq))
}

fn print_report(rep: &ValidationReport, json: bool) {
    if json {
        emit(serde_json::to_string_pretty(rep).expect("report serializes"));
        return;
    }
    for entry in &rep.entries {
        emit(format!(
            "{:4} {:?}  {}  {}",
            entry.axiom, entry.status, entry.location, entry.message
        ));
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { path, json } => {
            let (doc, ctx, fq) = load(&path)?;
            let rep = match &doc.payload {
                Payload::Simple(d) => check_simple(&ctx, &fq, d),
                Payload::Double(d) => check_double(&ctx, &fq, d),
                Payload::Global(g) => check_global(&ctx, &fq, g),
                Payload::Cover(c) => {
                    let g = extract_degdata(&ctx, &fq, c).map_err(|e| e.to_string())?;
                    check_global(&ctx, &fq, &g)
                }
                Payload::Fiber(f) => {
                    let frag = CurveFragment {
                        components: f.components.clone(),
                        edges: f.edges.clone(),
                        boundaries: Vec::new(),
                    };
                    if frag.b1() == f.b1 && frag.total_genus() == f.total_genus {
                        emit("fiber document is consistent");
                        return Ok(ExitCode::SUCCESS);
                    }
                    eprintln!(
                        "fiber document is inconsistent: b1 {} vs {}, total genus {} vs {}",
                        frag.b1(),
                        f.b1,
                        frag.total_genus(),
                        f.total_genus
                    );
                    return Ok(ExitCode::from(1));
                }
            };
            print_report(&rep, json);
            Ok(if rep.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Realize { path, json: _, dot } => {
            let (doc, ctx, fq) = load(&path)?;
            realize_payload(&doc, &ctx, &fq, dot)
        }
        Command::Render { path } => {
            let (doc, ctx, fq) = load(&path)?;
            realize_payload(&doc, &ctx, &fq, true)
        }
        Command::Enumerate(args) => {
            let vkp = args.vkp.unwrap_or_else(|| 2 * (args.p.saturating_sub(1)));
            let ctx = PrimeContext::new(args.p, vkp).map_err(|e| e.to_string())?;
            if args.double {
                let all = enum_double(&ctx, args.vertices, args.max_m, args.max_t);
                if args.count {
                    emit(all.len().to_string());
                } else {
                    for d in all {
                        let doc = Document::new(&ctx, 1, Payload::Double(d));
                        emit(serde_json::to_string(&doc).expect("document serializes"));
                    }
                }
            } else {
                let all = enum_simple(&ctx, args.vertices, args.max_m, args.max_t);
                if args.count {
                    emit(all.len().to_string());
                } else {
                    for d in all {
                        let doc = Document::new(&ctx, 1, Payload::Simple(d));
                        emit(serde_json::to_string(&doc).expect("document serializes"));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbit { path, frobenius } => {
            let (doc, ctx, fq) = load(&path)?;
            let q = frobenius.unwrap_or(ctx.p);
            let s = GaloisElement::frobenius(q);
            let orbit = match &doc.payload {
                Payload::Simple(d) => orbit_simple(&fq, &s, d),
                Payload::Double(d) => orbit_double(&fq, &s, d),
                Payload::Global(g) => orbit_global(&fq, &s, g),
                _ => return Err("orbit needs a simple, double or global payload".to_string()),
            };
            emit(format!("orbit size {}", orbit.len()));
            for enc in &orbit {
                emit(String::from_utf8_lossy(enc));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equivariance { path, frobenius } => {
            let (doc, ctx, fq) = load(&path)?;
            let cover = match &doc.payload {
                Payload::Cover(c) => c,
                _ => return Err("equivariance needs a cover payload".to_string()),
            };
            let q = frobenius.unwrap_or(ctx.p);
            let s = GaloisElement::frobenius(q);
            let ok = equivariance_check(&ctx, &fq, &s, cover).map_err(|e| e.to_string())?;
            emit(if ok { "equivariant" } else { "NOT equivariant" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn realize_payload(
    doc: &Document,
    ctx: &PrimeContext,
    fq: &Fq,
    dot: bool,
) -> Result<ExitCode, String> {
    let gate = |rep: ValidationReport| -> Result<(), ExitCode> {
        if rep.all_pass() {
            Ok(())
        } else {
            print_report(&rep, false);
            Err(ExitCode::from(1))
        }
    };
    let outcome = match &doc.payload {
        Payload::Simple(d) => {
            if let Err(code) = gate(check_simple(ctx, fq, d)) {
                return Ok(code);
            }
            let f = realize_simple(ctx, d).map_err(|e| e.to_string())?;
            if dot {
                emit(f.to_dot());
            } else {
                emit(serde_json::to_string_pretty(&f).expect("fragment serializes"));
            }
            return Ok(ExitCode::SUCCESS);
        }
        Payload::Double(d) => {
            if let Err(code) = gate(check_double(ctx, fq, d)) {
                return Ok(code);
            }
            let f = realize_double(ctx, d).map_err(|e| e.to_string())?;
            if dot {
                emit(f.to_dot());
            } else {
                emit(serde_json::to_string_pretty(&f).expect("fragment serializes"));
            }
            return Ok(ExitCode::SUCCESS);
        }
        Payload::Global(g) => {
            if let Err(code) = gate(check_global(ctx, fq, g)) {
                return Ok(code);
            }
            let fiber = realize_global(ctx, g).map_err(|e| e.to_string())?;
            let cons = conservation_check(ctx, g).map_err(|e| e.to_string())?;
            if !cons.ok {
                eprintln!(
                    "conservation ledger broken: expected {}, realized {}",
                    cons.expected, cons.realized
                );
                return Ok(ExitCode::from(1));
            }
            fiber
        }
        Payload::Cover(c) => {
            let g = extract_degdata(ctx, fq, c).map_err(|e| e.to_string())?;
            realize_global(ctx, &g).map_err(|e| e.to_string())?
        }
        Payload::Fiber(f) => f.clone(),
    };
    if dot {
        emit(outcome.to_dot());
    } else {
        let out = Document::new(ctx, doc.field_degree, Payload::Fiber(outcome));
        emit(out.to_string_pretty());
    }
    Ok(ExitCode::SUCCESS)
}

