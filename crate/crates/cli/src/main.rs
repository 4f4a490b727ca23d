use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use toric_mirror::kaehler::psibar_by_point;
use toric_mirror::polytope::{int_list_json, lattice_points};
use toric_mirror::series::{Exponent, Series, Truncation, VarNames};
use toric_mirror::slab::{
    enumerate_broken_lines, lift_invariance, mirror_equation, normalize, verify_conditions,
    vertical_initial,
};
use toric_mirror::trees::{
    aut_count, leaf_labels, leaf_product, product_expansion, Grading, TreeEnumerator, TreeType,
};
use toric_mirror::{
    fixtures, kaehler_data, parse_input, Decomposition, Error, KaehlerData, Result,
};

mod parse;
mod selfcheck;

const LEAF_CAP: usize = 64;

#[derive(Parser)]
#[command(
    name = "toric-mirror",
    version,
    about = "Slab functions and mirror equations for toric degenerations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Source {
    /// Built-in decomposition: interval, local-p2, star-square or simplex.
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// JSON decomposition file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct At {
    /// Vertex by coordinates (`-1`, `1,0`), `0` for the origin, or `@INDEX`.
    #[arg(long, allow_hyphen_values = true)]
    vertex: Option<String>,
    /// Truncation order in `Q`.
    #[arg(long, default_value_t = 5)]
    order: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Walls, Kähler monoid, ψ̄ and strict convexity.
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Normalized slab function at a vertex, with the condition report.
    Slab {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        at: At,
    },
    /// The mirror degeneration equation.
    Mirror {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 5)]
        order: u32,
        /// Element of `N^r` used as `z^q`, comma-separated.
        #[arg(long)]
        q_choice: Option<String>,
    },
    /// Product expansion `∏ (1 + a_m z^m)` of the slab function.
    Expand {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        at: At,
    },
    /// Tropical tree types of a given weight.
    Trees {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        at: At,
        /// Weight as a monomial (`x2y2`, `x2yz`, `t^2`) or as `m;q` integers.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Also emit each type as a Graphviz graph.
        #[arg(long)]
        dot: bool,
    },
    /// Broken lines for the vertical initial monomial, and lift invariance.
    BrokenLines {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        at: At,
    },
    /// Runs every cross-check; exit status 4 on any mismatch.
    Selfcheck {
        /// Restrict to one built-in decomposition.
        #[arg(long, conflicts_with = "input")]
        fixture: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        order: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

struct Loaded {
    name: String,
    dec: Decomposition,
    kd: KaehlerData,
}

fn load(fixture: Option<&str>, input: Option<&PathBuf>) -> Result<Loaded> {
    let (name, doc) = match (fixture, input) {
        (_, Some(path)) => (
            path.display().to_string(),
            std::fs::read_to_string(path)
                .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?,
        ),
        (Some(f), None) => (
            f.to_string(),
            fixtures::document(f)
                .ok_or_else(|| {
                    Error::MalformedInput(format!(
                        "unknown fixture {f:?}; try {:?}",
                        fixtures::NAMES
                    ))
                })?
                .to_string(),
        ),
        (None, None) => {
            return Err(Error::MalformedInput(
                "pass --fixture NAME or --input PATH".into(),
            ))
        }
    };
    let dec = parse_input(&doc)?;
    let kd = kaehler_data(&dec)?;
    Ok(Loaded { name, dec, kd })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Internal(_)
        | Error::NonIntegralCoefficient(_)
        | Error::ExponentOverflow(_)
        | Error::ConstantTermNotOne
        | Error::ConstantTermNotZero => 1,
        Error::ConeNotSmooth(_)
        | Error::RankZeroQ
        | Error::TruncationOverflow(_)
        | Error::LeafCapExceeded(_) => 3,
        _ => 2,
    }
}

/// A command result: JSON document plus its plain-text rendering.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            code: 0,
        }
    }
}

fn names(l: &Loaded) -> VarNames {
    VarNames::standard(l.dec.dim(), l.kd.rank)
}

fn analyze(l: &Loaded) -> Output {
    let (dec, kd) = (&l.dec, &l.kd);
    let walls: Vec<Value> = kd
        .walls
        .iter()
        .zip(&kd.bending_images)
        .map(|(w, img)| {
            json!({
                "facet": w.facet.iter().map(|&i| dec.vertex(i).to_string()).collect::<Vec<_>>(),
                "cells": [w.cells.0, w.cells.1],
                "bending": int_list_json(img),
            })
        })
        .collect();
    let by_point: serde_json::Map<String, Value> = psibar_by_point(dec, kd)
        .iter()
        .map(|(p, v)| (p.to_string(), int_list_json(v)))
        .collect();
    let points = lattice_points(dec);
    let interior: Vec<String> = points
        .iter()
        .filter(|p| {
            dec.vertex_index(p)
                .is_some_and(|i| dec.is_interior_vertex(i))
        })
        .map(ToString::to_string)
        .collect();
    let json = json!({
        "source": l.name,
        "dim": dec.dim(),
        "lattice_points": points.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "interior_points": interior,
        "cells": dec.cells().len(),
        "kaehler": kd.to_json(),
        "psibar_by_point": by_point,
        "walls": walls,
        "strictly_convex": kd.strictly_convex,
    });
    let mut text = format!(
        "{}: dimension {}, {} cells, {} walls\nrank of Q: {}\n",
        l.name,
        dec.dim(),
        dec.cells().len(),
        kd.walls.len(),
        kd.rank
    );
    for (p, v) in psibar_by_point(dec, kd) {
        text.push_str(&format!("psibar{p} = {}\n", int_list_json(&v)));
    }
    text.push_str(&format!(
        "strictly convex: {}\n",
        if kd.strictly_convex { "yes" } else { "no" }
    ));
    Output::ok(json, text)
}

fn slab(l: &Loaded, at: &At) -> Result<Output> {
    let v = parse::vertex(&l.dec, at.vertex.as_deref())?;
    let sf = normalize(&l.dec, &l.kd, v, at.order)?;
    let report = verify_conditions(&l.dec, &l.kd, at.order)?;
    let names = names(l);
    let json = json!({ "slab": sf.to_json(&l.dec, &names), "conditions": report.to_json() });
    let text = format!(
        "vertex {} (order {})\nf = {}\ng = {}\nconditions: {}\n",
        l.dec.vertex(v),
        at.order,
        sf.f.render(&names),
        sf.g.render(&names),
        if report.all_pass() { "pass" } else { "FAIL" }
    );
    Ok(Output::ok(json, text))
}

fn mirror(l: &Loaded, order: u32, q_choice: Option<&str>) -> Result<Output> {
    let q = q_choice.map(parse::q_choice).transpose()?;
    let eq = mirror_equation(&l.dec, &l.kd, order, q.as_deref())?;
    let text = format!("{}\n{}\n", eq.homogeneous_text, eq.dehomogenized_text);
    Ok(Output::ok(eq.to_json(), text))
}

fn expand(l: &Loaded, at: &At) -> Result<Output> {
    let v = parse::vertex(&l.dec, at.vertex.as_deref())?;
    let pe = product_expansion(&l.dec, &l.kd, v, at.order)?;
    let names = names(l);
    let grading = Grading::at_vertex(&l.dec, &l.kd, v)?;
    let factor_json: Vec<Value> = pe
        .factors
        .iter()
        .map(|(e, a)| json!({"exponent": e.to_json(), "monomial": names.monomial(e), "level": grading.level(e), "a": a.to_string()}))
        .collect();
    let b_json: Vec<Value> =
        pe.b.iter().map(|(e, c)| json!({"exponent": e.to_json(), "monomial": names.monomial(e), "b": c.to_string()})).collect();
    let json = json!({
        "vertex": v,
        "order": at.order,
        "factors": factor_json,
        "b": b_json,
        "product_equals_slab": pe.product == pe.slab,
    });
    let mut text = String::new();
    for (e, a) in &pe.factors {
        let term = Series::monomial(e.clone(), a.clone(), Truncation::polynomial());
        text.push_str(&format!("(1 + {})\n", term.render(&names)).replace("+ -", "- "));
    }
    for (e, c) in &pe.b {
        text.push_str(&format!("b[{}] = {c}\n", names.monomial(e)));
    }
    text.push_str(&format!(
        "product equals slab function: {}\n",
        pe.product == pe.slab
    ));
    Ok(Output::ok(json, text))
}

fn trees(l: &Loaded, at: &At, target: &str, dot: bool) -> Result<Output> {
    let v = parse::vertex(&l.dec, at.vertex.as_deref())?;
    let w = parse::target(&l.dec, &l.kd, v, target)?;
    if w.is_zero() {
        return Err(Error::MalformedInput(
            "target weight must be nonzero".into(),
        ));
    }
    let sf = normalize(&l.dec, &l.kd, v, at.order)?;
    let weighted = leaf_labels(&sf);
    let labels: Vec<Exponent> = weighted.iter().map(|(e, _)| e.clone()).collect();
    let grading = Grading::at_vertex(&l.dec, &l.kd, v)?;
    let level = grading.level(&w);
    let mut en = TreeEnumerator::new(&labels, grading, level, LEAF_CAP)?;
    let curve = w.is_pure_q();
    let types: Vec<TreeType> = if curve {
        en.curve_types(&w)?
    } else {
        en.disk_types(&w)?
    };
    // Disks count with (-1)^{|V̂|}; pointed curves with (-1)^{|V̂|-1}.
    let sign = |t: &TreeType| if curve { -t.sign() } else { t.sign() };
    let contribution =
        |t: &TreeType| BigRational::from_integer(sign(t).into()) * leaf_product(t, &weighted);
    let coefficient: BigRational = types.iter().map(contribution).sum();
    let names = names(l);
    let type_json: Vec<Value> = types
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut j = json!({
                "tree": t.to_json(),
                "encoding": t.encoding(),
                "sign": sign(t),
                "contribution": contribution(t).to_string(),
                "internal_vertices": t.non_leaf_count(),
                "leaves": t.leaf_count(),
                "automorphisms": aut_count(t).to_string(),
            });
            if dot {
                j["dot"] = Value::String(t.to_dot(&format!("type{i}")));
            }
            j
        })
        .collect();
    let json = json!({
        "vertex": v,
        "target": w.to_json(),
        "monomial": names.monomial(&w),
        "kind": if curve { "curve" } else { "disk" },
        "level": level,
        "count": types.len(),
        "coefficient": coefficient.to_string(),
        "types": type_json,
    });
    let mut text = format!(
        "{} types of weight {} ({}), coefficient {}\n",
        types.len(),
        names.monomial(&w),
        if curve { "curve" } else { "disk" },
        coefficient
    );
    for (i, t) in types.iter().enumerate() {
        text.push_str(&format!(
            "{:>4} {}\n",
            contribution(t).to_string(),
            t.encoding()
        ));
        if dot {
            text.push_str(&t.to_dot(&format!("type{i}")));
            text.push('\n');
        }
    }
    Ok(Output::ok(json, text))
}

fn broken_lines(l: &Loaded, at: &At) -> Result<Output> {
    let v = parse::vertex(&l.dec, at.vertex.as_deref())?;
    let initial = vertical_initial(&l.dec, &l.kd);
    let lines = enumerate_broken_lines(&l.dec, &l.kd, v, &initial, at.order)?;
    let lift = lift_invariance(&l.dec, &l.kd, &initial, at.order)?;
    let names = names(l);
    let json = json!({
        "vertex": v,
        "initial": initial.to_json(),
        "lines": lines.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        "unbent": lines.iter().filter(|b| !b.bent).count(),
        "lift_invariance": lift.to_json(),
    });
    let mut text = format!("{} broken lines at {}\n", lines.len(), l.dec.vertex(v));
    for b in &lines {
        let (e, c) = b.final_monomial();
        text.push_str(&format!(
            "{} {}*{}\n",
            if b.bent { "bent  " } else { "unbent" },
            c,
            names.monomial(e)
        ));
    }
    text.push_str(&format!(
        "lift invariance: {}\n",
        if lift.all_pass() { "pass" } else { "FAIL" }
    ));
    Ok(Output::ok(json, text))
}

fn run_selfcheck(fixture: Option<&str>, input: Option<&PathBuf>, order: u32) -> Result<Output> {
    let sources: Vec<Loaded> = match (fixture, input) {
        (None, None) => fixtures::NAMES
            .iter()
            .map(|n| load(Some(n), None))
            .collect::<Result<_>>()?,
        _ => vec![load(fixture, input)?],
    };
    let mut report = serde_json::Map::new();
    let mut text = String::new();
    let mut all = true;
    for l in &sources {
        let outcome = selfcheck::run(&l.dec, &l.kd, order);
        all &= outcome.pass();
        for (check, ok) in &outcome.checks {
            text.push_str(&format!(
                "{} {}: {}\n",
                if *ok { "ok  " } else { "FAIL" },
                l.name,
                check
            ));
        }
        for (check, err) in &outcome.errors {
            text.push_str(&format!("FAIL {}: {}: {}\n", l.name, check, err));
        }
        report.insert(l.name.clone(), outcome.to_json());
    }
    let json = json!({ "order": order, "pass": all, "fixtures": report });
    Ok(Output {
        json,
        text,
        code: if all { 0 } else { 4 },
    })
}

fn dispatch(command: &Command) -> (Format, Result<Output>) {
    let with = |s: &Source, f: &dyn Fn(&Loaded) -> Result<Output>| {
        (
            s.format,
            load(s.fixture.as_deref(), s.input.as_ref()).and_then(|l| f(&l)),
        )
    };
    match command {
        Command::Analyze { source } => with(source, &|l| Ok(analyze(l))),
        Command::Slab { source, at } => with(source, &|l| slab(l, at)),
        Command::Mirror {
            source,
            order,
            q_choice,
        } => with(source, &|l| mirror(l, *order, q_choice.as_deref())),
        Command::Expand { source, at } => with(source, &|l| expand(l, at)),
        Command::Trees {
            source,
            at,
            target,
            dot,
        } => with(source, &|l| trees(l, at, target, *dot)),
        Command::BrokenLines { source, at } => with(source, &|l| broken_lines(l, at)),
        Command::Selfcheck {
            fixture,
            input,
            order,
            format,
        } => (
            *format,
            run_selfcheck(fixture.as_deref(), input.as_ref(), *order),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = dispatch(&cli.command);
    match result {
        Ok(out) => {
            let body = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n"
                }
                Format::Text => out.text,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            if format == Format::Json {
                let report = json!({ "error": { "code": e.code(), "message": e.to_string() } });
                let body =
                    serde_json::to_string_pretty(&report).expect("JSON values serialize") + "\n";
                let _ = std::io::stdout().lock().write_all(body.as_bytes());
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
