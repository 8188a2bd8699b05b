//! `kop`: command-line front end for kop-core.
//!
//! Exit codes: 0 success or true, 1 property failure or false, 2 input error,
//! 3 evaluation budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use kop_core::assemble::assemble;
use kop_core::generate::generate;
use kop_core::io::{self, GraphFile};
use kop_core::msol::{self, Assignment, Formula, Mode, Sort, Structure, Value};
use kop_core::planarity::{check_layer_characterization, layered_embedding, OuterFacePolicy, PlanarEmbedding};
use kop_core::remember::{exact_min_remember, remember_report, synthesize_spanning_tree, Objective};
use kop_core::treedec::{td_3connected_kop, td_from_er_fr, td_from_vr_er};
use kop_core::tutte::validate_tutte;
use kop_core::{
    block_decomposition, spanning_forest, stripping_layers, tutte_decomposition, validate, Edge, Error, Graph,
    SpanningForest, TreeDecomposition, Vertex,
};

#[derive(Parser)]
#[command(name = "kop", version, about = "Decompositions of k-outerplanar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout. For `treedec` and `tutte` this is
    /// the stem of the JSON and DOT artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    VrEr,
    ErFr,
    #[value(name = "3conn")]
    ThreeConn,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeChoice {
    /// Breadth-first forest from the smallest vertex.
    Bfs,
    /// Heuristic tree with small fr, then small er.
    Synth,
    ExactVr,
    ExactEr,
    ExactFr,
    /// Minimises max(er + 1, 3 fr).
    ExactErFr,
}

#[derive(Subcommand)]
enum Command {
    /// Stripping layers under the best outer face.
    Layers { input: PathBuf },
    /// Build a tree decomposition and check it against its width bound.
    Treedec {
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Number of layers to assume; defaults to the stripping count.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Block and Tutte decompositions.
    Tutte { input: PathBuf },
    /// Evaluate a formula file or `@Name{k=v}` library predicate, optionally with `(args)`.
    Msol {
        input: PathBuf,
        formula: String,
        /// Free variable value: `x=3`, `e=1-2`, `X=1,2,3`, `F=1-2,2-3`; `X=` is empty.
        /// Unassigned set variables default to all vertices or all edges.
        #[arg(long = "assign", value_name = "NAME=VALUE")]
        assign: Vec<String>,
        /// Extra adjacency `u-v` seen by `edg` and `vedg`.
        #[arg(long = "virtual", value_name = "U-V")]
        virtual_pairs: Vec<String>,
        /// Vertices only; edge variables are rejected.
        #[arg(long)]
        one_sorted: bool,
        #[arg(long, default_value_t = msol::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check a decomposition file against a graph.
    Validate { graph: PathBuf, td: PathBuf },
    /// Seeded k-outerplanar graph with its drawing and layers.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Remember numbers of a spanning tree.
    Spantree {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TreeChoice::Bfs)]
        tree: TreeChoice,
    },
    /// Faces and layer numbers.
    Embed { input: PathBuf },
}

/// Exit code with a message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => 3,
            Error::Parse(_)
            | Error::Schema(_)
            | Error::SyntaxError { .. }
            | Error::SortError(_)
            | Error::UnboundVariable(_)
            | Error::UnknownPredicate(_)
            | Error::BadConstants(_)
            | Error::SelfLoop(_)
            | Error::DuplicateEdge(_)
            | Error::DuplicateVertex(_)
            | Error::UnknownEndpoint(_)
            | Error::UnknownVertex(_)
            | Error::UnknownEdge(_)
            | Error::SelfPair(_)
            | Error::InvalidEmbedding(_)
            | Error::InfeasibleParameters(_) => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(c) => c,
        Err(Failure(c, msg)) => {
            eprintln!("error: {msg}");
            c
        }
    };
    if cli.timings {
        eprintln!("elapsed_ms: {:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Layers { input } => cmd_layers(cli, input),
        Command::Treedec { input, method, k } => cmd_treedec(cli, input, *method, *k),
        Command::Tutte { input } => cmd_tutte(cli, input),
        Command::Msol {
            input,
            formula,
            assign,
            virtual_pairs,
            one_sorted,
            budget,
        } => cmd_msol(cli, input, formula, assign, virtual_pairs, *one_sorted, *budget),
        Command::Validate { graph, td } => cmd_validate(cli, graph, td),
        Command::Gen { n, k, seed } => cmd_gen(cli, *n, *k, *seed),
        Command::Spantree { input, tree } => cmd_spantree(cli, input, *tree),
        Command::Embed { input } => cmd_embed(cli, input),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(GraphFile, Graph), Failure> {
    let f = io::parse_graph_file(&read_text(path)?)?;
    let g = f.graph()?;
    Ok((f, g))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

/// Prints `text` or writes it to `--out`.
fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report<T: Serialize>(kind: &str, body: &T) -> String {
    io::report_to_json(kind, body)
}

fn json_of(text: &str) -> Json {
    serde_json::from_str(text).expect("own output parses")
}

/// Embedding from the file's hint, else the one with the fewest layers.
fn embedding(f: &GraphFile, g: &Graph) -> Result<PlanarEmbedding, Failure> {
    match f.embedding()? {
        Some(e) => Ok(e),
        None => Ok(layered_embedding(g, OuterFacePolicy::Auto)?),
    }
}

fn cmd_layers(cli: &Cli, input: &Path) -> Outcome {
    let (_, g) = load(input)?;
    let p = stripping_layers(&g)?;
    let ok = check_layer_characterization(&g, &p)?;
    let body = json!({ "k": p.k, "layers": p.layers, "characterization_holds": ok });
    emit(cli, &report("layers", &body))?;
    Ok(if ok { 0 } else { 1 })
}

fn default_k(g: &Graph) -> Result<usize, Failure> {
    Ok(stripping_layers(g)?.k.max(1))
}

fn cmd_treedec(cli: &Cli, input: &Path, method: Method, k: Option<usize>) -> Outcome {
    let (f, g) = load(input)?;
    let mut body = serde_json::Map::new();
    let (td, bound, extra_ok) = match method {
        Method::VrEr => {
            let t = spanning_forest(&g, None);
            let r = remember_report(&g, &t, None);
            let td = td_from_vr_er(&g, &t)?;
            body.insert("vr".into(), json!(r.vr));
            body.insert("er".into(), json!(r.er));
            (td, r.vr.max(r.er + 1), true)
        }
        Method::ErFr => {
            let emb = embedding(&f, &g)?;
            let k = k.unwrap_or(emb.layer_partition().k);
            let (t, r) = synthesize_spanning_tree(&g, k, &emb)?;
            let td = td_from_er_fr(&g, &t, &emb)?;
            let fr = r.fr.unwrap_or(0);
            body.insert("er".into(), json!(r.er));
            body.insert("fr".into(), json!(fr));
            (td, (r.er + 1).max(3 * fr), true)
        }
        Method::ThreeConn => {
            let k = match k {
                Some(k) => k,
                None => default_k(&g)?,
            };
            let td = td_3connected_kop(&g, k)?;
            let deg = td.max_degree();
            let roots = td.roots().len();
            body.insert("k".into(), json!(k));
            body.insert("max_degree".into(), json!(deg));
            body.insert("roots".into(), json!(roots));
            (td, 3 * k, deg <= 3 && roots == 1)
        }
        Method::Full => {
            let (td, r) = assemble(&g, k)?;
            body.insert("k".into(), json!(r.k));
            body.insert("max_stage_width".into(), json!(r.max_stage_width));
            body.insert("stages_within_3k".into(), json!(r.stages_within_3k));
            // Without every stage inside 3k only the stage width plus three is promised.
            let bound = if r.stages_within_3k {
                3 * r.k + 3
            } else {
                r.max_stage_width + 3
            };
            (td, bound, true)
        }
    };
    let v = validate(&g, &td);
    let within = td.width() <= bound;
    body.insert("method".into(), json!(method_name(method)));
    body.insert("width".into(), json!(td.width()));
    body.insert("bound".into(), json!(bound));
    body.insert("within_bound".into(), json!(within));
    body.insert("valid".into(), json!(v.valid));
    body.insert("violations".into(), json!(v.violations));
    body.insert("nodes".into(), json!(td.len()));
    let code = if v.valid && within && extra_ok { 0 } else { 1 };
    write_artifacts(
        cli,
        &mut body,
        &io::td_to_json(&td),
        &io::td_to_dot(&td),
        "decomposition",
    )?;
    if cli.out.is_none() && cli.format == Format::Dot {
        print!("{}", io::td_to_dot(&td));
    } else {
        print!("{}", report("treedec", &body));
    }
    Ok(code)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::VrEr => "vr-er",
        Method::ErFr => "er-fr",
        Method::ThreeConn => "3conn",
        Method::Full => "full",
    }
}

/// Writes `<out>.json` and `<out>.dot` when `--out` is set, else inlines the JSON.
fn write_artifacts(
    cli: &Cli,
    body: &mut serde_json::Map<String, Json>,
    json_text: &str,
    dot_text: &str,
    key: &str,
) -> Result<(), Failure> {
    match &cli.out {
        Some(stem) => {
            let j = stem.with_extension("json");
            let d = stem.with_extension("dot");
            write_file(&j, json_text)?;
            write_file(&d, dot_text)?;
            body.insert(
                "outputs".into(),
                json!([j.display().to_string(), d.display().to_string()]),
            );
        }
        None => {
            body.insert(key.into(), json_of(json_text));
        }
    }
    Ok(())
}

fn cmd_tutte(cli: &Cli, input: &Path) -> Outcome {
    let (_, g) = load(input)?;
    if !g.is_connected() {
        return Err(Error::Disconnected.into());
    }
    let bd = block_decomposition(&g)?;
    let mut blocks = Vec::new();
    let mut dots = String::new();
    let mut ok = true;
    for i in 0..bd.blocks.len() {
        if bd.is_edge_block(i) {
            blocks.push(json!({ "vertices": bd.blocks[i], "bridge": true }));
            continue;
        }
        let td3 = tutte_decomposition(&bd.block_graph(i))?;
        let rep = validate_tutte(&td3.host, &td3);
        ok &= rep.valid;
        dots.push_str(&io::tutte_to_dot(&td3));
        blocks.push(json!({
            "vertices": bd.blocks[i],
            "bridge": false,
            "adhesion": td3.adhesion(),
            "cuts": td3.cuts.len(),
            "three_blocks": td3.blocks.len(),
            "valid": rep.valid,
            "violations": rep.violations,
            "decomposition": json_of(&io::tutte_to_json(&td3)),
        }));
    }
    let full = json!({ "cut_vertices": bd.cut_vertices, "blocks": blocks, "valid": ok });
    let mut body = serde_json::Map::new();
    body.insert("cut_vertices".into(), json!(bd.cut_vertices));
    body.insert("valid".into(), json!(ok));
    write_artifacts(cli, &mut body, &report("tutte", &full), &dots, "blocks")?;
    if cli.out.is_none() {
        if cli.format == Format::Dot {
            print!("{dots}");
        } else {
            print!("{}", report("tutte", &full));
        }
    } else {
        print!("{}", report("tutte", &body));
    }
    Ok(if ok { 0 } else { 1 })
}

fn parse_pair(s: &str) -> Result<(Vertex, Vertex), Failure> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| input_error(format!("expected u-v, got {s:?}")))?;
    let p = |x: &str| {
        x.trim()
            .parse::<Vertex>()
            .map_err(|e| input_error(format!("bad vertex {x:?}: {e}")))
    };
    Ok((p(a)?, p(b)?))
}

fn parse_value(sort: Sort, text: &str) -> Result<Value, Failure> {
    let items = || text.split(',').map(str::trim).filter(|s| !s.is_empty());
    let vertex = |x: &str| {
        x.parse::<Vertex>()
            .map_err(|e| input_error(format!("bad vertex {x:?}: {e}")))
    };
    let edge = |x: &str| parse_pair(x).map(|(a, b)| Edge::new(a, b));
    Ok(match sort {
        Sort::Vertex => Value::Vertex(vertex(text.trim())?),
        Sort::Edge => Value::Edge(edge(text)?),
        Sort::VertexSet => Value::VertexSet(items().map(vertex).collect::<Result<_, _>>()?),
        Sort::EdgeSet => Value::EdgeSet(items().map(edge).collect::<Result<_, _>>()?),
    })
}

fn load_formula(call: &str) -> Result<Formula, Failure> {
    match call.strip_prefix('@') {
        // With an argument list it is an inline formula.
        Some(_) if call.contains('(') => Ok(msol::parse_formula(call)?),
        Some(call) => Ok(msol::library_call(call)?),
        None => Ok(msol::parse_formula(&read_text(Path::new(call))?)?),
    }
}

fn cmd_msol(
    cli: &Cli,
    input: &Path,
    formula: &str,
    assign: &[String],
    virtual_pairs: &[String],
    one_sorted: bool,
    budget: u64,
) -> Outcome {
    let (_, g) = load(input)?;
    let f = load_formula(formula)?;
    let mode = if one_sorted { Mode::OneSorted } else { Mode::TwoSorted };
    let pairs = virtual_pairs
        .iter()
        .map(|s| parse_pair(s))
        .collect::<Result<Vec<_>, _>>()?;
    let s = Structure::new(&g, mode)?.with_virtual(&pairs)?;
    let mut a = Assignment::new();
    for item in assign {
        let (name, text) = item
            .split_once('=')
            .ok_or_else(|| input_error(format!("expected NAME=VALUE, got {item:?}")))?;
        let var = f
            .free()
            .find(|v| v.name == name)
            .ok_or_else(|| input_error(format!("{name} is not a free variable of the formula")))?;
        a.set(name, parse_value(var.sort, text)?);
    }
    // Unassigned set variables range over the whole graph.
    let mut defaulted = Vec::new();
    for var in f.free() {
        if a.get(&var.name).is_none() {
            let v = match var.sort {
                Sort::VertexSet => Value::vertex_set(g.vertices().iter().copied()),
                Sort::EdgeSet => Value::edge_set(g.edges().iter().copied()),
                _ => continue,
            };
            a.set(&var.name, v);
            defaulted.push(var.name.clone());
        }
    }
    let ev = msol::evaluate_with_budget(&s, &f, &a, budget)?;
    let body = json!({
        "formula": f.to_string(),
        "value": ev.value,
        "cost": ev.cost,
        "budget": budget,
        "defaulted": defaulted,
    });
    emit(cli, &report("msol", &body))?;
    Ok(if ev.value { 0 } else { 1 })
}

fn cmd_validate(cli: &Cli, graph: &Path, td: &Path) -> Outcome {
    let (_, g) = load(graph)?;
    let td: TreeDecomposition = io::td_from_json(&read_text(td)?)?;
    let r = validate(&g, &td);
    emit(cli, &report("validate", &r))?;
    Ok(if r.valid { 0 } else { 1 })
}

fn cmd_gen(cli: &Cli, n: usize, k: usize, seed: u64) -> Outcome {
    let inst = generate(n, k, seed)?;
    let text = match cli.format {
        Format::Json => GraphFile::from_instance(&inst).to_json(),
        Format::Edgelist => io::graph_to_edge_list(&inst.graph),
        Format::Dot => io::graph_to_dot(&inst.graph),
    };
    emit(cli, &text)?;
    Ok(0)
}

fn cmd_spantree(cli: &Cli, input: &Path, choice: TreeChoice) -> Outcome {
    let (f, g) = load(input)?;
    let emb = embedding(&f, &g).ok();
    let need_emb = || emb.as_ref().ok_or(Failure(1, Error::NotPlanar.to_string()));
    let t: SpanningForest = match choice {
        TreeChoice::Bfs => spanning_forest(&g, None),
        TreeChoice::Synth => {
            let e = need_emb()?;
            synthesize_spanning_tree(&g, e.layer_partition().k, e)?.0
        }
        TreeChoice::ExactVr => exact_min_remember(&g, need_emb()?, Objective::Vr)?.0,
        TreeChoice::ExactEr => exact_min_remember(&g, need_emb()?, Objective::Er)?.0,
        TreeChoice::ExactFr => exact_min_remember(&g, need_emb()?, Objective::Fr)?.0,
        TreeChoice::ExactErFr => exact_min_remember(&g, need_emb()?, Objective::ErFrBound)?.0,
    };
    let r = remember_report(&g, &t, emb.as_ref());
    let body = json!({
        "tree_edges": t.tree_edges(),
        "roots": t.roots(),
        "remember": r,
    });
    emit(cli, &report("spantree", &body))?;
    Ok(0)
}

fn cmd_embed(cli: &Cli, input: &Path) -> Outcome {
    let (f, g) = load(input)?;
    let emb = embedding(&f, &g)?;
    let p = emb.layer_partition();
    let body = json!({
        "outer_face": emb.outer_face(),
        "k": p.k,
        "layers": p.layers,
        "rotation": emb.rotation_map(),
        "faces": emb.faces(),
    });
    emit(cli, &report("embed", &body))?;
    Ok(0)
}
