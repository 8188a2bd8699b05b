use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K4: &str = "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const C4: &str = "1 2\n2 3\n3 4\n4 1\n";
const K5: &str = "1 2\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n3 4\n3 5\n4 5\n";
const THETA: &str = "1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n1 4\n";
const BOWTIE: &str = "1 2\n2 3\n3 1\n3 4\n4 5\n5 3\n";

struct Work(TempDir);

impl Work {
    fn new() -> Self {
        Work(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn kop<I: AsRef<std::ffi::OsStr>>(args: impl IntoIterator<Item = I>) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kop")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn layers_examples() {
    let w = Work::new();
    let o = kop(["layers", p(&w.file("k4.txt", K4))]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert_eq!(j["schema"], 1);
    assert_eq!(j["k"], 2);
    assert_eq!(j["layers"], serde_json::json!([[2, 3, 4], [1]]));
    assert_eq!(j["characterization_holds"], true);

    let o = kop(["layers", p(&w.file("c4.txt", C4))]);
    assert_eq!(stdout_json(&o)["k"], 1);

    let o = kop(["layers", p(&w.file("k5.txt", K5))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not planar"));
}

#[test]
fn treedec_methods() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    let o = kop(["treedec", p(&k4), "--method", "vr-er"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert!(j["width"].as_u64().unwrap() <= 3);
    assert_eq!(j["valid"], true);

    let o = kop(["treedec", p(&k4), "--method", "3conn", "--k", "2"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert!(j["max_degree"].as_u64().unwrap() <= 3);
    assert_eq!(j["roots"], 1);

    let o = kop(["treedec", p(&k4), "--method", "er-fr"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert!(j["width"].as_u64() <= j["bound"].as_u64());

    let theta = w.file("theta.txt", THETA);
    let o = kop(["treedec", p(&theta), "--method", "full", "--k", "1"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert!(j["width"].as_u64().unwrap() <= 6);
    assert_eq!(j["valid"], true);

    // 3-connected construction on a graph that is not 3-connected.
    let o = kop(["treedec", p(&theta), "--method", "3conn"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn treedec_artifacts_validate_and_round_trip() {
    let w = Work::new();
    let theta = w.file("theta.txt", THETA);
    let stem = w.path("theta_td");
    let o = kop(["treedec", p(&theta), "--method", "full", "--out", p(&stem)]);
    assert_eq!(code(&o), 0);
    let json_path = stem.with_extension("json");
    let text = std::fs::read_to_string(&json_path).unwrap();
    let td = kop_core::io::td_from_json(&text).unwrap();
    assert_eq!(kop_core::io::td_to_json(&td), text);
    let dot = std::fs::read_to_string(stem.with_extension("dot")).unwrap();
    assert_eq!(dot.matches("->").count(), td.len() - 1);

    let o = kop(["validate", p(&theta), p(&json_path)]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert_eq!(j["width"], td.width() as u64);

    // Drop vertex 4 from every bag that holds edge {3,4}, so the edge loses its bag.
    let mut broken = td.clone();
    for b in &mut broken.bags {
        if b.contains(&3) && b.contains(&4) {
            b.retain(|&v| v != 4);
        }
    }
    let bad = w.file("bad.json", &kop_core::io::td_to_json(&broken));
    let o = kop(["validate", p(&theta), p(&bad)]);
    assert_eq!(code(&o), 1);
    let j = stdout_json(&o);
    let vs = j["violations"].as_array().unwrap();
    assert!(vs
        .iter()
        .any(|v| v["axiom"] == "edge_cover" && v["witness"].as_str().unwrap().contains("{3,4}")));
}

#[test]
fn tutte_examples() {
    let w = Work::new();
    let o = kop(["tutte", p(&w.file("theta.txt", THETA))]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    let blocks = j["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["cuts"], 1);
    assert_eq!(blocks[0]["adhesion"], 2);
    let kinds: Vec<&Value> = blocks[0]["decomposition"]["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| &b["kind"])
        .collect();
    assert_eq!(kinds, ["cycle", "cycle"]);

    let j = stdout_json(&kop(["tutte", p(&w.file("k4.txt", K4))]));
    assert_eq!(j["blocks"][0]["three_blocks"], 1);
    assert_eq!(j["blocks"][0]["cuts"], 0);

    let j = stdout_json(&kop(["tutte", p(&w.file("bowtie.txt", BOWTIE))]));
    assert_eq!(j["cut_vertices"], serde_json::json!([3]));
    for b in j["blocks"].as_array().unwrap() {
        assert_eq!(b["cuts"], 0);
        assert_eq!(b["three_blocks"], 1);
    }

    let o = kop(["tutte", p(&w.file("theta2.txt", THETA)), "--format", "dot"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("graph Tutte {"));
}

#[test]
fn msol_verdicts_and_budget() {
    let w = Work::new();
    let c4 = w.file("c4.txt", C4);
    let k4 = w.file("k4.txt", K4);
    let o = kop(["msol", p(&c4), "@Outerplanar"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["value"], true);
    let o = kop(["msol", p(&k4), "@Outerplanar"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["value"], false);

    // Inline library calls with arguments.
    let o = kop(["msol", p(&c4), "@Deg{k=2}(x,E)", "--assign", "x=1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["defaulted"], serde_json::json!([]));
    let o = kop(["msol", p(&c4), "@Deg{k=3}(x,E)", "--assign", "x=1"]);
    assert_eq!(code(&o), 1);

    let o = kop(["msol", p(&c4), "@Adj", "--assign", "v=1", "--assign", "w=2"]);
    assert_eq!(code(&o), 0);
    let o = kop(["msol", p(&c4), "@Adj", "--assign", "v=1", "--assign", "w=3"]);
    assert_eq!(code(&o), 1);
    let o = kop([
        "msol",
        p(&c4),
        "@Adj",
        "--assign",
        "v=1",
        "--assign",
        "w=3",
        "--virtual",
        "1-3",
    ]);
    assert_eq!(code(&o), 1, "Adj looks at real edges only");
    let f = w.file("vadj.msol", "vedg(x,y)");
    let o = kop([
        "msol",
        p(&c4),
        p(&f),
        "--assign",
        "x=1",
        "--assign",
        "y=3",
        "--virtual",
        "1-3",
    ]);
    assert_eq!(code(&o), 0);

    let ten: String = (1..=10).map(|i| format!("{i} {}\n", i % 10 + 1)).collect();
    let c10 = w.file("c10.txt", &ten);
    let deep = w.file(
        "deep.msol",
        "exists X . exists Y . exists Z . (mod[0,2](X) & mod[1,3](Y) & !(X sub Y) & !(Y sub Z) & !(Z sub X) & false)",
    );
    let o = kop(["msol", p(&c10), p(&deep), "--budget", "100000"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
}

#[test]
fn input_errors_exit_two() {
    let w = Work::new();
    let c4 = w.file("c4.txt", C4);
    assert_eq!(code(&kop(["layers", p(&w.file("bad.txt", "1 2 3\n"))])), 2);
    assert_eq!(code(&kop(["layers", p(&w.file("loop.txt", "1 1\n"))])), 2);
    assert_eq!(code(&kop(["layers", p(&w.path("missing.txt"))])), 2);
    assert_eq!(code(&kop(["layers", p(&w.file("trunc.json", "{\"vertices\":"))])), 2);
    assert_eq!(code(&kop(["msol", p(&c4), p(&w.file("syn.msol", "exists x ."))])), 2);
    assert_eq!(code(&kop(["msol", p(&c4), "@NoSuchPredicate"])), 2);
    assert_eq!(code(&kop(["msol", p(&c4), "@Adj", "--assign", "v=1"])), 2);
    assert_eq!(code(&kop(["msol", p(&c4), "@Adj", "--assign", "q=1"])), 2);
    assert_eq!(code(&kop(["validate", p(&c4), p(&w.file("td.json", "[]"))])), 2);
    assert_eq!(code(&kop(["gen", "--n", "2", "--k", "1"])), 2);
    assert_eq!(code(&kop(["gen", "--n", "9", "--k", "0"])), 2);
    assert_eq!(code(&kop(["frobnicate"])), 2);
}

fn layers_of(w: &Work, name: &str, graph_json: &[u8]) -> Value {
    let f = w.file(name, std::str::from_utf8(graph_json).unwrap());
    stdout_json(&kop(["layers", p(&f)]))
}

#[test]
fn gen_examples_and_determinism() {
    let w = Work::new();
    let a = kop(["gen", "--n", "8", "--k", "1", "--seed", "11"]);
    let b = kop(["gen", "--n", "8", "--k", "1", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let g = stdout_json(&a);
    assert_eq!(g["layers"].as_array().unwrap().len(), 1);
    assert!(g["embedding_hint"].is_object());
    assert_eq!(layers_of(&w, "g8.json", &a.stdout)["k"], 1);

    let o = kop(["gen", "--n", "12", "--k", "2", "--seed", "4"]);
    assert!(layers_of(&w, "g12.json", &o.stdout)["k"].as_u64().unwrap() <= 2);

    let o = kop(["gen", "--n", "3", "--k", "1", "--seed", "99", "--format", "edgelist"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "1 2\n1 3\n2 3\n");

    let out = w.path("g.json");
    let o = kop(["gen", "--n", "10", "--k", "2", "--seed", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let f = kop_core::io::parse_graph_file(&text).unwrap();
    assert_eq!(f.to_json(), text);

    // Reports from the same inputs are byte-identical.
    let runs: Vec<Output> = (0..2).map(|_| kop(["treedec", p(&out), "--method", "full"])).collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
}

#[test]
fn spantree_and_embed() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    let o = kop(["spantree", p(&k4), "--tree", "exact-fr"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert_eq!(j["remember"]["fr"], 3);
    assert_eq!(j["tree_edges"].as_array().unwrap().len(), 3);

    let o = kop(["spantree", p(&w.file("k5.txt", K5))]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["remember"]["fr"].is_null());
    assert_eq!(
        code(&kop(["spantree", p(&w.file("k5b.txt", K5)), "--tree", "synth"])),
        1
    );

    let j = stdout_json(&kop(["embed", p(&k4)]));
    assert_eq!(j["faces"].as_array().unwrap().len(), 4);
    assert_eq!(j["k"], 2);
    let j = stdout_json(&kop(["embed", p(&w.file("c4.txt", C4))]));
    assert_eq!(j["faces"].as_array().unwrap().len(), 2);
    assert_eq!(j["k"], 1);
}
