//! Driver behind the `dicing` binary: argument parsing, the per-stage reports
//! and their JSON and plain-text renderings.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use dicing_core::exactmat::IntMatrix;
use dicing_core::graph::{parse_graph, GraphInvolution, MultiGraph};
use dicing_core::homology::{cographic_dicing_system, cycle_basis, is_cycle, HomologyError};
use dicing_core::prym::{is_anti_invariant, prym_dicing_from_lattice, x_minus_with_tree, PrymError};
use dicing_core::segre::{fixture, reproduce_theorem, validate_paper_basis, SegreError};
use dicing_core::unimod::{
    is_cographic, is_totally_unimodular, matroid_equivalent, systems_equivalent, CographicOptions, SystemError,
    UnimodularSystem,
};
use dicing_core::{exactmat, prym};

#[derive(Debug, Parser)]
#[command(name = "dicing", version, about = "Cycle lattices, Prym lattices and unimodular dicing systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the report as JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// Progress messages on stderr
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Spanning forest as comma- or space-separated edge labels
    #[arg(long, global = true)]
    pub tree: Option<String>,
    /// Cap on candidate graphs in the cographic search
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_graphs: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental cycle basis of H1
    Cycles { graph: PathBuf },
    /// Cographic dicing system of the cycle lattice
    JacobianDice { graph: PathBuf },
    /// Anti-invariant lattice, multipliers and dicing system of a graph with involution
    PrymDice { graph: PathBuf },
    /// Admissibility test on invariant subgraphs
    Vologodsky { graph: PathBuf },
    /// Total unimodularity by all square minors
    CheckTu { matrix: PathBuf },
    /// Exhaustive cographic recognition
    CheckCographic { matrix: PathBuf },
    /// Lattice equivalence of two systems
    Equiv { a: PathBuf, b: PathBuf },
    /// Full computation for the Segre cover
    Segre,
}

impl Command {
    pub fn stage(&self) -> &'static str {
        match self {
            Command::Cycles { .. } => "cycles",
            Command::JacobianDice { .. } => "jacobian-dice",
            Command::PrymDice { .. } => "prym-dice",
            Command::Vologodsky { .. } => "vologodsky",
            Command::CheckTu { .. } => "check-tu",
            Command::CheckCographic { .. } => "check-cographic",
            Command::Equiv { .. } => "equiv",
            Command::Segre => "segre",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Computation(String),
    #[error("input is not totally unimodular (minor det = {0})")]
    NotTu(String),
    #[error("cographic search stopped after {0} candidate graphs; raise --max-graphs")]
    CapExceeded(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 input, 3 search cap, 4 internal, 5 non-TU input to the cographic test.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Input { .. } | CliError::Computation(_) => 1,
            CliError::CapExceeded(_) => 3,
            CliError::Internal(_) => 4,
            CliError::NotTu(_) => 5,
        }
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::SearchCapExceeded { cap } => CliError::CapExceeded(cap),
            SystemError::NotTotallyUnimodular { det } => CliError::NotTu(det.to_string()),
            SystemError::Internal(msg) => CliError::Internal(msg),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::System(s) => s.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<PrymError> for CliError {
    fn from(e: PrymError) -> Self {
        match e {
            PrymError::System(s) => s.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<SegreError> for CliError {
    fn from(e: SegreError) -> Self {
        match e {
            SegreError::System { source, .. } => source.into(),
            SegreError::Prym { source, .. } => source.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// A finished stage: `{stage, inputs, result, certificate}` plus a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub summary: String,
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<(MultiGraph, Option<GraphInvolution>), CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn load_matrix(path: &Path) -> Result<IntMatrix, CliError> {
    read(path)?.parse::<IntMatrix>().map_err(|e| CliError::Input {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn load_system(path: &Path) -> Result<UnimodularSystem, CliError> {
    UnimodularSystem::new(load_matrix(path)?).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn parse_tree(tree: &Option<String>) -> Option<Vec<String>> {
    tree.as_ref().map(|t| {
        t.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Runs one subcommand and builds its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let stage = cli.command.stage();
    let say = |msg: &str| {
        if cli.verbose {
            eprintln!("[{stage}] {msg}");
        }
    };
    let tree = parse_tree(&cli.tree);
    let opts = CographicOptions {
        max_graphs: cli.max_graphs,
    };
    let (inputs, result, certificate, summary) = match &cli.command {
        Command::Cycles { graph } => {
            let (g, _) = load_graph(graph)?;
            say("computing fundamental cycles");
            let basis = cycle_basis(&g, tree.as_deref())?;
            let all_cycles = basis.basis.iter().all(|h| is_cycle(&g, h));
            let m = basis.coefficient_matrix();
            let rank = exactmat::rank(&m);
            let summary = format!("H1 has rank {}", basis.len());
            (
                json!({ "graph": path_str(graph), "tree": tree }),
                json!({
                    "betti_number": g.betti_number(),
                    "tree": basis.tree_labels(),
                    "non_tree": basis.non_tree_edges.iter().map(|&e| g.edge(e).label.clone()).collect::<Vec<_>>(),
                    "cycles": basis.basis.iter().map(|h| g.format_chain(h)).collect::<Vec<_>>(),
                    "edges": g.edge_labels(),
                    "matrix": to_json(&m),
                }),
                json!({ "all_boundaries_zero": all_cycles, "rank": rank }),
                summary,
            )
        }
        Command::JacobianDice { graph } => {
            let (g, _) = load_graph(graph)?;
            say("building edge functionals on H1");
            let d = cographic_dicing_system(&g)?;
            let tu = d.system.is_totally_unimodular();
            let summary = format!(
                "cographic dicing: {}x{} system, {}",
                d.system.dim(),
                d.system.len(),
                if tu.is_tu() { "TU" } else { "not TU" }
            );
            (
                json!({ "graph": path_str(graph) }),
                to_json(&d),
                json!({ "totally_unimodular": to_json(&tu) }),
                summary,
            )
        }
        Command::PrymDice { graph } => {
            let (g, iota) = load_graph(graph)?;
            let iota = iota.unwrap_or_else(|| GraphInvolution::identity(&g));
            say("computing the anti-invariant lattice");
            let lattice = x_minus_with_tree(&g, &iota, tree.as_deref())?;
            let anti = is_anti_invariant(&iota, &lattice)?;
            say("computing multipliers and the dicing system");
            let p = prym_dicing_from_lattice(&g, &iota, lattice)?;
            let tu = p.dicing.system.is_totally_unimodular();
            let summary = format!(
                "X- has rank {}; {}x{} system; {}; {}",
                p.lattice.rank(),
                p.dicing.system.dim(),
                p.dicing.system.len(),
                if tu.is_tu() { "TU" } else { "not TU" },
                if p.family_dependent { "family-dependent" } else { "admissible" }
            );
            (
                json!({ "graph": path_str(graph), "tree": tree }),
                json!({
                    "x_minus": to_json(&p.lattice),
                    "multipliers": to_json(&p.multipliers),
                    "dicing": to_json(&p.dicing),
                    "family_dependent": p.family_dependent,
                }),
                json!({
                    "anti_invariant": anti,
                    "vologodsky": to_json(&p.vologodsky),
                    "totally_unimodular": to_json(&tu),
                }),
                summary,
            )
        }
        Command::Vologodsky { graph } => {
            let (g, iota) = load_graph(graph)?;
            let iota = iota.unwrap_or_else(|| GraphInvolution::identity(&g));
            say("searching invariant subgraph pairs");
            let r = prym::vologodsky_check(&g, &iota)?;
            let summary = match &r.witness {
                None => "pass".to_string(),
                Some(w) => format!(
                    "fail: {{{}}} and {{{}}} joined by {}",
                    w.subgraph_0.join(" "),
                    w.subgraph_1.join(" "),
                    w.connecting_edges.join(" ")
                ),
            };
            (
                json!({ "graph": path_str(graph) }),
                json!({ "verdict": to_json(&r.verdict), "invariant_subgraphs": r.invariant_subgraphs }),
                json!({ "witness": to_json(&r.witness) }),
                summary,
            )
        }
        Command::CheckTu { matrix } => {
            let m = load_matrix(matrix)?;
            say("enumerating square minors");
            let c = is_totally_unimodular(&m);
            let summary = match &c.violating_minor {
                None => "TU".to_string(),
                Some(minor) => format!("not TU, minor det = {}", minor.det),
            };
            (
                json!({ "matrix": path_str(matrix) }),
                json!({ "verdict": to_json(&c.verdict), "minors_checked": c.minors_checked }),
                json!({ "violating_minor": to_json(&c.violating_minor) }),
                summary,
            )
        }
        Command::CheckCographic { matrix } => {
            let s = load_system(matrix)?;
            say("enumerating candidate graphs");
            let c = is_cographic(&s, &opts)?;
            let summary = if c.is_cographic() {
                "cographic".to_string()
            } else {
                format!("not cographic ({} candidate graphs tried)", c.search_report.graphs_tried)
            };
            (
                json!({ "matrix": path_str(matrix), "max_graphs": cli.max_graphs }),
                json!({ "verdict": to_json(&c.verdict) }),
                json!({ "graph_witness": to_json(&c.graph_witness), "search_report": to_json(&c.search_report) }),
                summary,
            )
        }
        Command::Equiv { a, b } => {
            let sa = load_system(a)?;
            let sb = load_system(b)?;
            say("searching for a lattice equivalence");
            let eq = systems_equivalent(&sa, &sb)?;
            let verified = eq.as_ref().is_some_and(|e| e.verify(&sa, &sb));
            if eq.is_some() && !verified {
                return Err(CliError::Internal("equivalence failed re-verification".into()));
            }
            let matroid = matroid_equivalent(&sa, &sb)?;
            let summary = if eq.is_some() { "equivalent" } else { "not equivalent" }.to_string();
            (
                json!({ "a": path_str(a), "b": path_str(b) }),
                json!({ "equivalent": eq.is_some(), "matroid_equivalent": matroid.is_some() }),
                json!({ "transformation": to_json(&eq), "verified": verified }),
                summary,
            )
        }
        Command::Segre => {
            let f = fixture();
            say("validating the fixture cycles");
            let basis = validate_paper_basis(&f)?;
            say("running the pipeline");
            let r = reproduce_theorem(&f, &opts)?;
            (
                json!({ "fixture": "segre", "max_graphs": cli.max_graphs }),
                json!({
                    "vologodsky": to_json(&r.vologodsky.verdict),
                    "torus_rank": r.torus_rank,
                    "computed_system": to_json(r.computed_system.matrix()),
                    "column_edges": r.column_edges,
                    "equivalent_to_e5": r.equivalent_to_e5,
                    "e5_cographic": to_json(&r.e5_cographic.verdict),
                    "conclusion": r.conclusion,
                }),
                json!({
                    "transformation": to_json(&r.transformation),
                    "transformation_verified": r.transformation_verified,
                    "vologodsky_witness": to_json(&r.vologodsky.witness),
                    "e5_search_report": to_json(&r.e5_cographic.search_report),
                    "cycle_basis": to_json(&basis),
                }),
                r.conclusion.clone(),
            )
        }
    };
    let mut top = Map::new();
    top.insert("stage".into(), Value::String(stage.into()));
    top.insert("inputs".into(), inputs);
    top.insert("result".into(), result);
    top.insert("certificate".into(), certificate);
    top.insert("summary".into(), Value::String(summary.clone()));
    Ok(Report {
        value: Value::Object(top),
        summary,
    })
}

/// Pretty JSON, newline-terminated.
pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&r.value).expect("values serialize");
    s.push('\n');
    s
}

/// Indented listing of the same value, with the summary moved to a last line
/// of its own after a blank line.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Value::Object(m) = &r.value {
        let mut body = m.clone();
        body.remove("summary");
        text::block(&body, 0, &mut out);
    }
    out.push('\n');
    out.push_str(&r.summary);
    out.push('\n');
    out
}

/// Reads back [`render_text`] output.
pub fn parse_text(s: &str) -> Option<(Value, String)> {
    let (body, summary) = s.trim_end_matches('\n').rsplit_once("\n\n")?;
    let lines: Vec<&str> = body.lines().collect();
    let mut pos = 0;
    let mut v = text::parse_block(&lines, &mut pos, 0)?;
    v.insert("summary".into(), Value::String(summary.to_string()));
    (pos == lines.len()).then(|| (Value::Object(v), summary.to_string()))
}

mod text {
    use serde_json::{Map, Value};

    fn scalar(v: &Value) -> bool {
        !matches!(v, Value::Array(_) | Value::Object(_))
    }

    fn inline_ok(v: &Value) -> bool {
        match v {
            Value::Array(a) => a.iter().all(scalar),
            Value::Object(o) => o.is_empty(),
            _ => true,
        }
    }

    fn bare_ok(s: &str) -> bool {
        !s.is_empty()
            && s.trim() == s
            && !s.contains('\n')
            && !s.ends_with(':')
            && !s.starts_with(['[', '{', '"', '-'])
            && serde_json::from_str::<Value>(s).is_err()
    }

    fn inline(v: &Value) -> String {
        match v {
            Value::String(s) if bare_ok(s) => s.clone(),
            Value::Array(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(", "))
            }
            other => other.to_string(),
        }
    }

    pub(super) fn block(m: &Map<String, Value>, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        for (k, v) in m {
            if inline_ok(v) {
                out.push_str(&format!("{pad}{k}: {}\n", inline(v)));
            } else {
                out.push_str(&format!("{pad}{k}:\n"));
                nested(v, indent + 2, out);
            }
        }
    }

    fn nested(v: &Value, indent: usize, out: &mut String) {
        match v {
            Value::Object(m) => block(m, indent, out),
            Value::Array(a) => list(a, indent, out),
            _ => unreachable!("scalars are inline"),
        }
    }

    fn list(a: &[Value], indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        for item in a {
            if inline_ok(item) {
                out.push_str(&format!("{pad}- {}\n", inline(item)));
            } else {
                out.push_str(&format!("{pad}-\n"));
                nested(item, indent + 2, out);
            }
        }
    }

    fn indent_of(line: &str) -> usize {
        line.len() - line.trim_start_matches(' ').len()
    }

    fn parse_inline(s: &str) -> Option<Value> {
        match serde_json::from_str::<Value>(s) {
            Ok(v) => Some(v),
            Err(_) if bare_ok(s) => Some(Value::String(s.to_string())),
            Err(_) => None,
        }
    }

    fn parse_nested(lines: &[&str], pos: &mut usize, indent: usize) -> Option<Value> {
        let next = lines.get(*pos)?;
        if indent_of(next) != indent {
            return None;
        }
        if next.trim_start().starts_with('-') {
            parse_list(lines, pos, indent).map(Value::Array)
        } else {
            parse_block(lines, pos, indent).map(Value::Object)
        }
    }

    pub(super) fn parse_block(lines: &[&str], pos: &mut usize, indent: usize) -> Option<Map<String, Value>> {
        let mut m = Map::new();
        while let Some(line) = lines.get(*pos) {
            if indent_of(line) < indent {
                break;
            }
            let body = &line[indent..];
            *pos += 1;
            if let Some(k) = body.strip_suffix(':') {
                let v = parse_nested(lines, pos, indent + 2)?;
                m.insert(k.to_string(), v);
            } else {
                let (k, rest) = body.split_once(": ")?;
                m.insert(k.to_string(), parse_inline(rest)?);
            }
        }
        Some(m)
    }

    fn parse_list(lines: &[&str], pos: &mut usize, indent: usize) -> Option<Vec<Value>> {
        let mut a = Vec::new();
        while let Some(line) = lines.get(*pos) {
            if indent_of(line) != indent || !line[indent..].starts_with('-') {
                break;
            }
            let body = &line[indent..];
            *pos += 1;
            if body == "-" {
                a.push(parse_nested(lines, pos, indent + 2)?);
            } else {
                a.push(parse_inline(body.strip_prefix("- ")?)?);
            }
        }
        Some(a)
    }
}
