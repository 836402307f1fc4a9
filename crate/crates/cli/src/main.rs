use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use moore3::analysis::{
    diameter_cayley, diameter_full, gaps_finite, moore_table, ratio_strictly_increasing, render_table, spot_check,
    DiamCertificate, MooreRow,
};
use moore3::cover::{cyclic_cover_find, exact_cover, CoverMode, CyclicCover, DESK_NODE_BUDGET};
use moore3::export::{write_edge_list, write_generators, write_vertex_map};
use moore3::gf2m::{poly_to_string, FieldCtx};
use moore3::graphs::{build_aq, build_bq, build_cayley, gen_s, sstar_cayley, GenSetBundle, GraphHandle, GraphMode};
use moore3::polarity::PolarityCtx;
use moore3::suites::{run_suite, Suite};
use moore3::Error;

const SCHEMA_VERSION: u32 = 1;
/// Node budget for exact cover search under `MOORE3_BUDGET=stretch`.
const STRETCH_NODE_BUDGET: u64 = 100_000_000_000;

#[derive(Parser)]
#[command(name = "moore3", version, about = "Diameter-3 Cayley graphs of order q^2(q-1), q = 2^(2n+1)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build C(G,S*), certify its diameter and write it out.
    Build(BuildArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
    /// Find a diameter-2 connection set of Z_m.
    Cm(CmArgs),
    /// Moore-bound gap table over several q.
    Table(TableArgs),
    /// Write one of the graphs A(q), B(q), C(G,S), C(G,S*) as flat files.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order, 2^(2n+1).
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    q: Option<u64>,
    /// Alternatively n, with q = 2^(2n+1).
    #[arg(long)]
    n: Option<u32>,
    /// Reduction polynomial in hex (default: smallest irreducible).
    #[arg(long, value_parser = parse_hex)]
    poly: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverChoice {
    Exact,
    Bounded,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Output directory (default: out/q<q>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Generate neighbours on demand instead of storing adjacency.
    #[arg(long, conflicts_with = "explicit")]
    implicit: bool,
    #[arg(long)]
    explicit: bool,
    /// Cover search (default: exact for q <= 32, bounded above).
    #[arg(long, value_enum)]
    cover: Option<CoverChoice>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// field, geometry, polarity, group, table1, stabilizers or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct CmArgs {
    #[arg(long)]
    m: u64,
    #[arg(long, conflicts_with = "bounded")]
    exact: bool,
    #[arg(long)]
    bounded: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    q: Vec<u64>,
    /// Skip the diameter BFS and tabulate degrees only.
    #[arg(long)]
    no_diameter: bool,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphChoice {
    Aq,
    Bq,
    CayleyS,
    CayleySstar,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "cayley-sstar")]
    graph: GraphChoice,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    cover: Option<CoverChoice>,
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(String),
    Verification(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Runtime(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Io(_) | Error::Json(_) => Failure::Runtime(e.into()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Runtime(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_hex(s: &str) -> Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|e| format!("{s:?}: {e}"))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Budget {
    Desk,
    Stretch,
}

impl Budget {
    fn from_env() -> Result<Budget, Failure> {
        match std::env::var("MOORE3_BUDGET").as_deref() {
            Err(_) | Ok("") | Ok("desk") => Ok(Budget::Desk),
            Ok("stretch") => Ok(Budget::Stretch),
            Ok(other) => Err(Failure::Usage(format!(
                "MOORE3_BUDGET must be desk or stretch, got {other:?}"
            ))),
        }
    }

    fn max_build_q(self) -> u32 {
        match self {
            Budget::Desk => 128,
            Budget::Stretch => 512,
        }
    }

    fn node_budget(self) -> u64 {
        match self {
            Budget::Desk => DESK_NODE_BUDGET,
            Budget::Stretch => STRETCH_NODE_BUDGET,
        }
    }
}

fn field_for_q(q: u64, poly: Option<u64>) -> Result<FieldCtx, Failure> {
    if !q.is_power_of_two() || q.trailing_zeros().is_multiple_of(2) || q < 8 {
        return Err(Failure::Usage(format!("q = {q} is not of the form 2^(2n+1) with n >= 1")));
    }
    let m = q.trailing_zeros();
    Ok(match poly {
        Some(p) => FieldCtx::with_poly(m, p)?,
        None => FieldCtx::new(m)?,
    })
}

impl FieldArgs {
    fn resolve(&self) -> Result<FieldCtx, Failure> {
        let q = match (self.q, self.n) {
            (Some(q), _) => q,
            (None, Some(n)) if (1..=10).contains(&n) => 1u64 << (2 * n + 1),
            (None, Some(n)) => return Err(Failure::Usage(format!("n = {n} is outside 1..=10"))),
            (None, None) => unreachable!("clap enforces --q or --n"),
        };
        field_for_q(q, self.poly)
    }
}

fn gate_build(ctx: &FieldCtx, budget: Budget) -> CmdResult {
    if ctx.q() > budget.max_build_q() {
        return Err(Failure::Usage(format!(
            "q = {} needs MOORE3_BUDGET=stretch (budget {budget:?} builds q <= {})",
            ctx.q(),
            budget.max_build_q()
        )));
    }
    Ok(())
}

fn default_cover_mode(order: u64) -> CoverMode {
    if order <= 31 {
        CoverMode::Exact
    } else {
        CoverMode::Bounded
    }
}

fn find_cover(m: u64, mode: CoverMode, budget: Budget) -> Result<CyclicCover, Failure> {
    Ok(match mode {
        CoverMode::Exact => exact_cover(m, budget.node_budget())?,
        CoverMode::Bounded => cyclic_cover_find(m, CoverMode::Bounded)?,
    })
}

fn cover_mode(choice: Option<CoverChoice>, order: u64) -> CoverMode {
    match choice {
        Some(CoverChoice::Exact) => CoverMode::Exact,
        Some(CoverChoice::Bounded) => CoverMode::Bounded,
        None => default_cover_mode(order),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json(path: &Path, v: &Value) -> CmdResult {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    v
}

/// Full BFS at q = 8, identity BFS plus ten seeded spot checks above.
fn certify(g: &GraphHandle, seed: u64) -> (DiamCertificate, Value, bool) {
    if g.q <= 8 {
        let c = diameter_full(g);
        let ok = c.is_exactly(3);
        let v = serde_json::to_value(&c).unwrap();
        return (c, v, ok);
    }
    let c = diameter_cayley(g);
    let spots = if g.q <= 32 { spot_check(g, 10, seed) } else { Vec::new() };
    let consistent = spots.iter().all(|s| s.eccentricity == c.diameter);
    let mut v = serde_json::to_value(&c).unwrap();
    v["spot_checks"] = serde_json::to_value(&spots).unwrap();
    v["spot_checks_consistent"] = json!(consistent);
    let ok = c.is_exactly(3) && consistent;
    (c, v, ok)
}

fn field_meta(ctx: &FieldCtx) -> Value {
    json!({
        "q": ctx.q(),
        "n": ctx.n(),
        "m": ctx.m(),
        "red_poly": format!("{:#x}", ctx.red_poly()),
        "red_poly_str": poly_to_string(ctx.red_poly()),
    })
}

fn bundle_meta(ctx: &FieldCtx, b: &GenSetBundle) -> Value {
    json!({
        "achieved_degree": b.degree(),
        "c_achieved": b.c,
        "cover": b.cover.elements,
        "cover_exact": b.cover.exact,
        "claimed_degree_bound": b.claimed_degree_bound(ctx.q()),
        "parts": { "s": b.s.len(), "s1": b.s1.len(), "s2": b.s2.len(), "s3": b.s3.len() },
    })
}

fn merge(a: Value, b: Value) -> Value {
    let (Value::Object(mut x), Value::Object(y)) = (a, b) else {
        unreachable!("objects only")
    };
    x.extend(y);
    Value::Object(x)
}

fn cmd_build(a: BuildArgs) -> CmdResult {
    let start = Instant::now();
    let budget = Budget::from_env()?;
    let ctx = a.field.resolve()?;
    gate_build(&ctx, budget)?;
    let q = ctx.q();
    let mode = if a.implicit {
        GraphMode::Implicit
    } else if a.explicit {
        GraphMode::Explicit
    } else {
        GraphMode::default_for(q)
    };
    let cmode = cover_mode(a.cover, ctx.group_order());
    let cover = find_cover(ctx.group_order(), cmode, budget)?;
    let (bundle, g) = sstar_cayley(&ctx, &cover, mode)?;

    let out = a.out.unwrap_or_else(|| PathBuf::from(format!("out/q{q}")));
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    if mode == GraphMode::Explicit {
        let mut w = create(&out.join("edges.txt"))?;
        write_edge_list(&mut w, &g)?;
        w.flush()?;
    }
    let mut w = create(&out.join("generators.txt"))?;
    write_generators(&mut w, q, &bundle.sstar)?;
    w.flush()?;
    let mut w = create(&out.join("vertices.txt"))?;
    write_vertex_map(&mut w, &g)?;
    w.flush()?;

    let (cert, cert_json, ok) = certify(&g, a.seed);
    write_json(&out.join("certificate.json"), &with_schema(cert_json.clone()))?;
    let meta = merge(
        merge(field_meta(&ctx), bundle_meta(&ctx, &bundle)),
        json!({
            "order": g.order,
            "diameter": cert.diameter,
            "diameter_method": cert.method,
            "graph_mode": mode,
            "cover_mode": format!("{cmode:?}").to_lowercase(),
            "budget": format!("{budget:?}").to_lowercase(),
            "seed": a.seed,
            "runtime_ms": start.elapsed().as_millis() as u64,
        }),
    );
    write_json(&out.join("metadata.json"), &with_schema(meta))?;
    println!(
        "q={q} order={} degree={} (bound {}) c={} diameter={} [{}] -> {}",
        g.order,
        bundle.degree(),
        bundle.claimed_degree_bound(q),
        bundle.c,
        cert.diameter.map_or("inf".into(), |d| d.to_string()),
        serde_json::to_value(cert.method).unwrap().as_str().unwrap_or(""),
        out.display()
    );
    if ok {
        Ok(())
    } else {
        eprintln!("{}", serde_json::to_string_pretty(&cert_json).unwrap());
        Err(Failure::Verification(format!("diameter is {:?}, expected 3", cert.diameter)))
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let suites = Suite::parse(&a.suite).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown suite {:?}; expected field, geometry, polarity, group, table1, stabilizers or all",
            a.suite
        ))
    })?;
    let pol = PolarityCtx::new(a.field.resolve()?);
    let mut reports = Vec::new();
    for s in suites {
        let rep = run_suite(&pol, s, a.seed)?;
        print!("{}", rep.render());
        reports.push(rep);
    }
    let passed = reports.iter().all(|r| r.passed());
    if let Some(p) = &a.json_out {
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "field": field_meta(pol.field()),
            "passed": passed,
            "reports": reports,
        });
        write_json(p, &v)?;
    }
    if passed {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Verification("some checks failed".into()))
    }
}

fn cmd_cm(a: CmArgs) -> CmdResult {
    let budget = Budget::from_env()?;
    let mode = if a.exact {
        CoverMode::Exact
    } else if a.bounded {
        CoverMode::Bounded
    } else {
        default_cover_mode(a.m)
    };
    let c = find_cover(a.m, mode, budget)?;
    let bound = 2 * moore3::cover::ceil_sqrt(a.m);
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "m": c.m,
        "mode": format!("{mode:?}").to_lowercase(),
        "elements": c.elements,
        "size": c.size(),
        "exact": c.exact,
        "covers": c.covers(),
        "two_ceil_sqrt_m": bound,
        "within_two_ceil_sqrt_m": c.within_two_sqrt_bound(),
    });
    println!("{}", serde_json::to_string_pretty(&v).unwrap());
    if c.covers() && c.is_inverse_closed() {
        Ok(())
    } else {
        Err(Failure::Verification("cover check failed".into()))
    }
}

fn cmd_table(a: TableArgs) -> CmdResult {
    let budget = Budget::from_env()?;
    let mut rows = Vec::new();
    let mut all_three = true;
    for &q in &a.q {
        let ctx = field_for_q(q, None)?;
        gate_build(&ctx, budget)?;
        let cover = find_cover(ctx.group_order(), default_cover_mode(ctx.group_order()), budget)?;
        let (bundle, g) = sstar_cayley(&ctx, &cover, GraphMode::Implicit)?;
        let mut row = MooreRow::new(ctx.q(), bundle.degree() as u64, g.order as u64);
        if !a.no_diameter {
            row.diameter = diameter_cayley(&g).diameter;
            all_three &= row.diameter == Some(3);
        }
        rows.push(row);
    }
    let rows = moore_table(rows);
    let increasing = ratio_strictly_increasing(&rows);
    let finite = gaps_finite(&rows);
    print!("{}", render_table(&rows));
    println!("ratio strictly increasing in q: {increasing}; normalized gaps finite: {finite}");
    if let Some(p) = &a.json_out {
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "rows": rows,
            "ratio_strictly_increasing": increasing,
            "normalized_gaps_finite": finite,
        });
        write_json(p, &v)?;
    }
    if a.no_diameter || all_three {
        Ok(())
    } else {
        Err(Failure::Verification("some diameter differs from 3".into()))
    }
}

fn cmd_export(a: ExportArgs) -> CmdResult {
    let budget = Budget::from_env()?;
    let ctx = a.field.resolve()?;
    gate_build(&ctx, budget)?;
    let q = ctx.q();
    let pol = PolarityCtx::new(ctx.clone());
    let (g, gens) = match a.graph {
        GraphChoice::Aq => (build_aq(&pol)?, None),
        GraphChoice::Bq => (build_bq(&pol)?, None),
        GraphChoice::CayleyS => {
            let s = gen_s(&ctx);
            (build_cayley(&ctx, &s, GraphMode::default_for(q), "C(G,S)")?, Some(s))
        }
        GraphChoice::CayleySstar => {
            let cmode = cover_mode(a.cover, ctx.group_order());
            let cover = find_cover(ctx.group_order(), cmode, budget)?;
            let (b, g) = sstar_cayley(&ctx, &cover, GraphMode::default_for(q))?;
            (g, Some(b.sstar))
        }
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    if g.csr().is_some() {
        let mut w = create(&a.out.join("edges.txt"))?;
        write_edge_list(&mut w, &g)?;
        w.flush()?;
    }
    if let Some(gens) = gens {
        let mut w = create(&a.out.join("generators.txt"))?;
        write_generators(&mut w, q, &gens)?;
        w.flush()?;
    }
    let mut w = create(&a.out.join("vertices.txt"))?;
    write_vertex_map(&mut w, &g)?;
    w.flush()?;
    println!("{} order={} -> {}", g.name, g.order, a.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Build(a) => cmd_build(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Cm(a) => cmd_cm(a),
        Cmd::Table(a) => cmd_table(a),
        Cmd::Export(a) => cmd_export(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
