//! `shiftkit`: batch front end to the shiftkit library.
//!
//! Exit codes: 0 when every check passes, 1 when the analysis finds a
//! failure or a witness, 2 on input or usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use shiftkit::graph::{GraphSpec, Verdict};
use shiftkit::io::{self, Certificate};
use shiftkit::path_space::{
    compute_ja, count_period_dividing, empty_is_cluster_point, validate_model, BoundaryFamily,
    EssentialFreeness, MarkovModel, SpectrumPoint,
};
use shiftkit::semigroup::{parse_expression, rn_partition, verify_ck_relations};
use shiftkit::sse::{
    build_conjugacy, edge_paths, search_elementary, verify_chain, verify_shift_equivalence, ChainVerdict,
    IntMatrix, Invariants, SearchOutcome,
};

#[derive(Parser, Debug)]
#[command(name = "shiftkit", version, about = "Cuntz-Krieger relations and shift equivalence checks")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Graph, certificate or matrix file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,

    #[arg(long, global = true, default_value_t = 6)]
    max_period: usize,

    #[arg(long, global = true, default_value_t = 0)]
    max_preperiod: usize,

    #[arg(long, global = true, default_value_t = 3)]
    entry_bound: usize,

    #[arg(long, global = true, default_value_t = 4)]
    inner_dim: usize,

    /// Boundary family: `auto` or a JSON list of patterns. Overrides the file.
    #[arg(long, global = true, value_name = "SPEC|auto")]
    boundary: Option<String>,

    /// Spectrum level (`spectrum`, `rn`).
    #[arg(long, global = true)]
    level: Option<usize>,

    /// Vertex window for infinite graphs.
    #[arg(long, global = true)]
    window: Option<usize>,

    /// Monomial expression such as `S(1,2)* . S(1)`, normalized by `ck-verify`.
    #[arg(long, global = true)]
    monomial: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Verb {
    /// Condition (L), irreducibility and the simplicity criteria.
    Classify,
    /// Points of one level of the spectrum.
    Spectrum,
    /// The Cuntz-Krieger relations CK1 to CK4.
    CkVerify,
    /// Cylinders on which two powers of the shift agree.
    EssentialFreeness,
    /// Periodic and eventually periodic points.
    Periodic,
    /// The cluster points of the columns and the boundary family in use.
    Jset,
    /// Check a strong shift equivalence or shift equivalence certificate.
    SseVerify,
    /// Search for an elementary equivalence between A and B.
    SseSearch,
    /// det(I - A), Bowen-Franks group and characteristic polynomial.
    Invariants,
    /// The conjugacy induced by an elementary equivalence.
    Conjugacy,
    /// Classes of the relation R_N on a spectrum level (N = --depth).
    Rn,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Report {
    body: Map<String, Value>,
    ok: bool,
}

impl Report {
    fn new(ok: bool) -> Self {
        Report { body: Map::new(), ok }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.body.insert(key.to_string(), v.into());
    }
}

/// An error that maps to exit code 2.
struct InputError(String);

impl From<shiftkit::Error> for InputError {
    fn from(e: shiftkit::Error) -> Self {
        InputError(e.to_string())
    }
}

type Run<T> = Result<T, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", emit(&Value::Object(report.body), cli.format));
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(cli: &Cli) -> Run<(String, String)> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| InputError("--input FILE is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), text))
}

fn in_file<T>(file: &str, r: shiftkit::Result<T>) -> Run<T> {
    r.map_err(|e| InputError(format!("{file}: {e}")))
}

fn load_graph(cli: &Cli) -> Run<(GraphSpec, BoundaryFamily)> {
    let (file, text) = read_input(cli)?;
    let (g, family) = in_file(&file, io::parse_graph(&text))?;
    let family = match &cli.boundary {
        Some(spec) => io::parse_boundary(spec).map_err(|e| InputError(format!("--boundary: {e}")))?,
        None => family,
    };
    Ok((g, family))
}

fn load_model(cli: &Cli) -> Run<MarkovModel> {
    let (g, family) = load_graph(cli)?;
    let model = validate_model(&g, &family).map_err(|e| InputError(format!("model: {e}")))?;
    Ok(match cli.window {
        Some(w) => model.with_window(w),
        None => model,
    })
}

fn run(cli: &Cli) -> Run<Report> {
    match cli.verb {
        Verb::Classify => classify(cli),
        Verb::Spectrum => spectrum(cli),
        Verb::CkVerify => ck_verify(cli),
        Verb::EssentialFreeness => essential_freeness(cli),
        Verb::Periodic => periodic(cli),
        Verb::Jset => jset(cli),
        Verb::SseVerify => sse_verify(cli),
        Verb::SseSearch => sse_search(cli),
        Verb::Invariants => invariants(cli),
        Verb::Conjugacy => conjugacy(cli),
        Verb::Rn => rn(cli),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::CriteriaMet => json!({"met": true}),
        Verdict::CriteriaFailed(w) => json!({"met": false, "witness": w.to_string()}),
        Verdict::NotApplicable => json!({"met": false, "witness": "the graph has a zero row"}),
    }
}

fn classify(cli: &Cli) -> Run<Report> {
    let (g, _) = load_graph(cli)?;
    let c = g.classify();
    let mut r = Report::new(c.condition_l.0 && c.simple.is_met() && c.purely_infinite.is_met());
    r.set("no_zero_rows", c.no_zero_rows);
    if let Some(v) = c.zero_row {
        r.set("zero_row", v);
    }
    let mut l = json!({"holds": c.condition_l.0});
    if let Some(lp) = &c.condition_l.1 {
        l["exitless_loop"] = lp.to_string().into();
    }
    r.set("condition_L", l);
    let mut irr = json!({"holds": c.irreducible.0});
    if let Some((i, j)) = c.irreducible.1 {
        irr["unreachable"] = json!([i, j]);
    }
    r.set("irreducible", irr);
    let mut reach = json!({"holds": c.every_vertex_reaches_loop.0});
    if let Some(v) = c.every_vertex_reaches_loop.1 {
        reach["vertex"] = v.into();
    }
    r.set("every_vertex_reaches_loop", reach);
    r.set("simple", verdict_json(&c.simple));
    r.set("purely_infinite", verdict_json(&c.purely_infinite));
    Ok(r)
}

fn point(model: &MarkovModel, p: &SpectrumPoint) -> String {
    format!("({})", p.render(model.graph()))
}

fn spectrum(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    let level = cli.level.unwrap_or(1);
    let s = model.spectrum_level(level)?;
    let mut r = Report::new(true);
    r.set("level", level);
    r.set("count", s.len());
    r.set("partial", s.partial);
    let pts: Vec<Value> = s.points.iter().map(|p| point(&model, p).into()).collect();
    r.set("points", pts);
    Ok(r)
}

fn ck_verify(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    let report = verify_ck_relations(&model)?;
    let mut r = Report::new(report.all_passed());
    for c in &report.checks {
        let mut v = json!({"passed": c.passed});
        if let Some(i) = &c.instance {
            v["instance"] = i.clone().into();
        }
        if let Some(w) = &c.witness {
            v["witness"] = point(&model, w).into();
        }
        r.set(c.name, v);
    }
    r.set("partial", report.partial);
    if let Some(expr) = &cli.monomial {
        let m = parse_expression(&model, expr).map_err(|e| InputError(format!("--monomial: {e}")))?;
        let mut v = json!({"input": expr, "normal_form": m.to_string()});
        if let Ok(c) = m.cocycle() {
            v["cocycle"] = c.into();
        }
        r.set("monomial", v);
    }
    Ok(r)
}

fn essential_freeness(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    if cli.depth < cli.max_period {
        return Err(InputError(format!(
            "--depth {} is smaller than --max-period {}",
            cli.depth, cli.max_period
        )));
    }
    let mut violations = Vec::new();
    for n0 in 1..=cli.max_period {
        for m0 in 0..n0 {
            if let EssentialFreeness::Violation(w) = model.essential_freeness_scan(m0, n0, cli.depth)? {
                violations.push(json!({"m": m0, "n": n0, "cylinder": join(&w)}));
            }
        }
    }
    let mut r = Report::new(violations.is_empty());
    r.set("depth", cli.depth);
    r.set("max_power", cli.max_period);
    r.set("violations", violations);
    Ok(r)
}

fn join(w: &[usize]) -> String {
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn periodic(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    let recs = model.periodic_points(cli.max_period, cli.max_preperiod)?;
    let mut r = Report::new(!recs.iter().any(|p| p.isolated));
    let records: Vec<Value> = recs
        .iter()
        .map(|p| {
            let mut v = json!({
                "preperiod": p.preperiod,
                "period": p.period,
                "loop": p.lp.to_string(),
                "isolated": p.isolated,
            });
            if !p.prefix.is_empty() {
                v["prefix"] = join(&p.prefix).into();
            }
            v
        })
        .collect();
    let counts: Vec<Value> = (1..=cli.max_period).map(|k| count_period_dividing(&recs, k).into()).collect();
    r.set("records", records);
    r.set("fixed_by_power", counts);
    Ok(r)
}

fn jset(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    let g = model.graph();
    let mut r = Report::new(true);
    let ja: Vec<Value> = compute_ja(g).iter().map(|p| p.render(g).into()).collect();
    let fam: Vec<Value> = model.boundary().iter().map(|p| p.render(g).into()).collect();
    r.set("cluster_points", ja);
    r.set("boundary", fam);
    r.set("dense", model.is_dense());
    r.set("empty_is_cluster_point", empty_is_cluster_point(g));
    Ok(r)
}

fn load_certificate(cli: &Cli) -> Run<Certificate> {
    let (file, text) = read_input(cli)?;
    in_file(&file, io::parse_certificate(&text))
}

fn sse_verify(cli: &Cli) -> Run<Report> {
    let cert = load_certificate(cli)?;
    let mut r;
    match &cert {
        Certificate::Chain { a, b, chain } => {
            let v = verify_chain(a, b, chain)?;
            r = Report::new(v == ChainVerdict::Valid);
            r.set("kind", "chain");
            r.set("steps", chain.len());
            r.set(
                "verdict",
                match v {
                    ChainVerdict::Valid => "valid".to_string(),
                    ChainVerdict::BrokenStep(i) => format!("step {} does not hold", i + 1),
                    ChainVerdict::WrongEnd => "the chain does not end at B".to_string(),
                },
            );
        }
        Certificate::Lag { a, b, r: rm, s, lag } => {
            let ok = verify_shift_equivalence(a, b, rm, s, *lag)?;
            r = Report::new(ok);
            r.set("kind", "lag");
            r.set("lag", *lag);
            r.set("verdict", if ok { "valid" } else { "the identities do not hold" });
        }
    }
    Ok(r)
}

fn load_matrices(cli: &Cli) -> Run<(IntMatrix, Option<IntMatrix>)> {
    let (file, text) = read_input(cli)?;
    in_file(&file, io::parse_matrices(&text))
}

fn sse_search(cli: &Cli) -> Run<Report> {
    let (a, b) = load_matrices(cli)?;
    let b = b.ok_or_else(|| InputError("sse-search needs a file with both A and B".into()))?;
    let outcome = search_elementary(&a, &b, cli.inner_dim, cli.entry_bound)?;
    let mut r = Report::new(matches!(outcome, SearchOutcome::Found { .. }));
    match outcome {
        SearchOutcome::Found { r: rm, s } => {
            r.set("outcome", "found");
            r.set("R", rm.to_string());
            r.set("S", s.to_string());
        }
        SearchOutcome::Separated(why) => {
            r.set("outcome", "separated");
            r.set("invariant", why);
        }
        SearchOutcome::Exhausted => r.set("outcome", "exhausted"),
    }
    r.set("entry_bound", cli.entry_bound);
    r.set("inner_dim", cli.inner_dim);
    Ok(r)
}

fn invariants_json(inv: &Invariants, a: &IntMatrix) -> Run<Map<String, Value>> {
    let mut m = Map::new();
    let det = inv.det();
    let det: Value = match i64::try_from(det) {
        Ok(d) => d.into(),
        Err(_) => det.to_string().into(),
    };
    m.insert("det".into(), det);
    let factors: Vec<Value> = inv
        .bowen_franks
        .nontrivial_factors()
        .iter()
        .map(|f| i64::try_from(f).map_or_else(|_| f.to_string().into(), Value::from))
        .collect();
    m.insert("bowen_franks".into(), factors.into());
    m.insert("group".into(), inv.bowen_franks.group().into());
    m.insert("charpoly".into(), shiftkit::sse::charpoly(a)?.to_string().into());
    m.insert("charpoly_nonzero".into(), inv.charpoly_nonzero.to_string().into());
    Ok(m)
}

fn invariants(cli: &Cli) -> Run<Report> {
    let (a, b) = load_matrices(cli)?;
    let ia = Invariants::of(&a)?;
    match b {
        None => {
            let mut r = Report::new(true);
            r.body = invariants_json(&ia, &a)?;
            Ok(r)
        }
        Some(b) => {
            let ib = Invariants::of(&b)?;
            let cmp = shiftkit::sse::InvariantComparison { a: ia, b: ib };
            let mut r = Report::new(cmp.all_equal());
            r.set("A", invariants_json(&cmp.a, &a)?);
            r.set("B", invariants_json(&cmp.b, &b)?);
            r.set(
                "equal",
                json!({
                    "det": cmp.det_equal(),
                    "bowen_franks": cmp.bowen_franks_equal(),
                    "charpoly_nonzero": cmp.charpoly_equal(),
                }),
            );
            Ok(r)
        }
    }
}

fn conjugacy(cli: &Cli) -> Run<Report> {
    let cert = load_certificate(cli)?;
    let (rm, s) = cert
        .elementary_pair()
        .ok_or_else(|| InputError("conjugacy needs a single elementary pair".into()))?;
    let pair = build_conjugacy(rm, s, cert.a(), cert.b())?;
    let table = |m: &std::collections::BTreeMap<_, (_, _)>, first: &str, second: &str| -> Vec<Value> {
        m.iter()
            .map(|(e, (x, y)): (&shiftkit::sse::Edge, &(shiftkit::sse::Edge, shiftkit::sse::Edge))| {
                format!("{e} -> {first}{x} {second}{y}").into()
            })
            .collect()
    };
    // ψφ shifts by one edge and consumes two, so check on paths of length depth.
    let mut failures = Vec::new();
    for (m, fwd) in [(cert.a(), true), (cert.b(), false)] {
        for p in edge_paths(m, cli.depth.max(3))? {
            let round = if fwd {
                pair.apply_psi(&pair.apply_phi(&p)?)?
            } else {
                pair.apply_phi(&pair.apply_psi(&p)?)?
            };
            let shifted = p.shift().truncate(round.len());
            if round != shifted {
                failures.push(Value::from(p.to_string()));
            }
        }
    }
    let mut r = Report::new(failures.is_empty());
    r.set("alpha", table(&pair.alpha, "r", "s"));
    r.set("beta", table(&pair.beta, "s", "r"));
    r.set("path_length", cli.depth.max(3));
    r.set("failures", failures);
    Ok(r)
}

fn rn(cli: &Cli) -> Run<Report> {
    let model = load_model(cli)?;
    let big_n = cli.depth;
    let level = cli.level.unwrap_or(big_n);
    let classes = rn_partition(&model, big_n, level)?;
    let mut r = Report::new(true);
    r.set("N", big_n);
    r.set("level", level);
    let cl: Vec<Value> = classes
        .iter()
        .map(|c| c.iter().map(|p| Value::from(point(&model, p))).collect::<Vec<_>>().into())
        .collect();
    r.set("sizes", classes.iter().map(Vec::len).collect::<Vec<_>>());
    r.set("classes", cl);
    Ok(r)
}

/// Sorted-key JSON, or one `key: value` line per scalar.
fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            text(v, 0, None, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Bool(true) => "✓".into(),
        Value::Bool(false) => "✗".into(),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn text(v: &Value, indent: usize, key: Option<&str>, out: &mut String) {
    let pad = "  ".repeat(indent);
    let label = key.map(|k| format!("{k}:")).unwrap_or_else(|| "-".into());
    match v {
        Value::Object(m) => {
            if key.is_some() {
                out.push_str(&format!("{pad}{label}\n"));
            }
            let inner = if key.is_some() { indent + 1 } else { indent };
            for (k, x) in m {
                text(x, inner, Some(k), out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) && xs.len() <= 12 => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{label} [{}]\n", items.join(", ")));
        }
        Value::Array(xs) => {
            out.push_str(&format!("{pad}{label}\n"));
            for x in xs {
                match x {
                    Value::Array(ys) if ys.iter().all(|y| !y.is_object() && !y.is_array()) => {
                        let items: Vec<String> = ys.iter().map(scalar).collect();
                        out.push_str(&format!("{pad}  - [{}]\n", items.join(", ")));
                    }
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}  -\n"));
                        text(x, indent + 2, None, out);
                    }
                    _ => out.push_str(&format!("{pad}  - {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{label} {}\n", scalar(v))),
    }
}
