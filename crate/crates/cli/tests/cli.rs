use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use deniable_core::deniability::{craft_denial, verify_denial};
use deniable_core::InnerNorm;
use deniable_fit::certificate::{from_json, to_json};
use deniable_fit::csv_io::read_dataset;
use serde_json::Value;
use tempfile::TempDir;

const MODEL: &str = r#"{"kind": "linear-regression", "params": [0.5, 1.25, -0.75, 2.0]}"#;

const DECOY: &str = "x1,x2,x3,y1
3,1,7,4
5,8,2,6
1,4,4,2
7,2,6,8
2,6,1,5
8,3,5,1
4,7,8,3
6,5,3,7
";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deniable-fit"));
    cmd.env_remove("DENIABLE_FIT_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace { dir: TempDir::new().unwrap() };
        ws.write("model.json", MODEL);
        ws.write("decoy.csv", DECOY);
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_owned()
    }

    fn write(&self, name: &str, contents: &str) {
        fs::write(self.path(name), contents).unwrap();
    }

    fn craft(&self, extra: &[&str]) -> Output {
        let (model, decoy, out) = (self.arg("model.json"), self.arg("decoy.csv"), self.arg("cert.json"));
        let mut args = vec!["craft", "--model", &model, "--decoy", &decoy, "--seed", "11", "--out", &out];
        args.extend_from_slice(extra);
        run(&args)
    }

    fn verify(&self, extra: &[&str]) -> Output {
        let (cert, model) = (self.arg("cert.json"), self.arg("model.json"));
        let mut args = vec!["verify", "--certificate", &cert, "--model", &model];
        args.extend_from_slice(extra);
        run(&args)
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn read_json(path: &Path) -> Value {
    json(&fs::read_to_string(path).unwrap())
}

#[test]
fn craft_then_verify() {
    let ws = Workspace::new();
    let crafted = ws.craft(&[]);
    assert_eq!(crafted.status.code(), Some(0), "{}", stderr(&crafted));
    let cert = read_json(&ws.path("cert.json"));
    assert_eq!(cert["schema"], "denial-cert/1");
    assert_eq!(cert["norms"].as_array().unwrap().len(), 1);
    assert_eq!(cert["norms"][0]["B"].as_array().unwrap().len(), 7);

    let verified = ws.verify(&[]);
    assert_eq!(verified.status.code(), Some(0), "{}", stderr(&verified));
    let report = json(&stdout(&verified));
    assert_eq!(report["passed"], true);
    assert!(report["max_abs_diff"].as_f64().unwrap() <= 5e-3);
}

#[test]
fn mae_flag_forces_one_norm() {
    let ws = Workspace::new();
    assert_eq!(ws.craft(&["--mae"]).status.code(), Some(0));
    assert_eq!(read_json(&ws.path("cert.json"))["norms"][0]["variant"], "one-norm");
    assert_eq!(ws.verify(&[]).status.code(), Some(0));
}

#[test]
fn impossible_tolerance_fails_verification() {
    let ws = Workspace::new();
    assert_eq!(ws.craft(&[]).status.code(), Some(0));
    let o = ws.verify(&["--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&stdout(&o))["passed"], false);
}

#[test]
fn tampered_certificate_is_rejected() {
    let ws = Workspace::new();
    assert_eq!(ws.craft(&[]).status.code(), Some(0));
    let mut cert = read_json(&ws.path("cert.json"));
    let y = cert["decoy"]["responses"][0][0].as_f64().unwrap();
    cert["decoy"]["responses"][0][0] = Value::from(y + 0.5);
    ws.write("cert.json", &serde_json::to_string(&cert).unwrap());
    let o = ws.verify(&[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("CertificateTampered"), "{}", stderr(&o));
}

#[test]
fn perfect_decoy_cannot_be_denied() {
    let ws = Workspace::new();
    // Responses equal the model's predictions, so the residual is zero.
    ws.write("decoy.csv", "x1,x2,x3,y1\n1,1,1,3\n2,0,1,5\n0,2,2,3\n1,3,0,-0.5\n");
    let o = ws.craft(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ZeroResidual"), "{}", stderr(&o));
    assert!(!ws.path("cert.json").exists());
}

#[test]
fn malformed_inputs_exit_with_error() {
    let ws = Workspace::new();
    ws.write("decoy.csv", "x1,x2,x3,y1\n1,2,3\n");
    assert_eq!(ws.craft(&[]).status.code(), Some(1));

    let ws = Workspace::new();
    ws.write("decoy.csv", "a,b,c,d\n1,2,3,4\n");
    assert_eq!(ws.craft(&[]).status.code(), Some(1));

    let ws = Workspace::new();
    ws.write("model.json", r#"{"kind": "mlp", "params": [1.0]}"#);
    assert_eq!(ws.craft(&[]).status.code(), Some(1));

    assert_eq!(run(&["craft", "--model", "missing.json"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn certificate_round_trip_replays_identically() {
    let ws = Workspace::new();
    let decoy = read_dataset(DECOY.as_bytes()).unwrap();
    let params = [0.5, 1.25, -0.75, 2.0];
    let model = deniable_fit::model_file::ModelFile::linear(params.to_vec()).model();
    let cert = craft_denial(&model, &params, &decoy, 11, InnerNorm::Euclidean).unwrap();
    let restored = from_json(&to_json(&cert).unwrap()).unwrap();
    assert_eq!(restored, cert);
    let a = verify_denial(&cert, &model, &params, 5e-3).unwrap();
    let b = verify_denial(&restored, &model, &params, 5e-3).unwrap();
    assert_eq!(a, b);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.refit.params), bits(&b.refit.params));

    // Same result through the binary's files.
    assert_eq!(ws.craft(&[]).status.code(), Some(0));
    let from_file = from_json(&fs::read_to_string(ws.path("cert.json")).unwrap()).unwrap();
    assert_eq!(from_file, cert);
}

#[test]
fn bound_examples() {
    let o = run(&["bound", "--k-bits", "512", "--entropy-bits", "33", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&stdout(&o));
    assert_eq!(r["deniable"], false);
    assert_eq!(r["k_bits"], 512);

    let o = run(&["bound", "--param-dim", "6", "--dist", "du:1:8 × 11", "--n", "16"]);
    let r = json(&stdout(&o));
    assert_eq!(r["entropy_per_record_bits"], 33.0);
    assert_eq!(r["deniable"], true);
    assert!(r.get("quantization_resolution").is_none_or(Value::is_null));

    // Boundary: n = k/H is not enough.
    let o = run(&["bound", "--k-bits", "100", "--entropy-bits", "10", "--n", "10"]);
    assert_eq!(json(&stdout(&o))["deniable"], false);

    let o = run(&["bound", "--k-bits", "100", "--dist", "cu:0:1, exp:5", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&stdout(&o))["quantization_resolution"].as_f64().is_some());

    assert_eq!(run(&["bound", "--k-bits", "100", "--n", "10"]).status.code(), Some(1));
}

#[test]
fn experiment_runs_and_reports() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("trials.json");
    let o = run(&["experiment", "--trials", "3", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("3/3"), "{text}");
    let written = read_json(&out);
    assert_eq!(written.as_array().map(Vec::len).or_else(|| written["trials"].as_array().map(Vec::len)), Some(3));

    let o = run(&["experiment", "--trials", "1", "--d", "2", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/1"));
}

#[test]
fn adversary_is_deterministic() {
    let a = run(&["adversary", "--seed", "3"]);
    let b = run(&["adversary", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("input entries that differ"));
    assert_eq!(run(&["adversary", "--n", "3", "--d", "3", "--seed", "1"]).status.code(), Some(1));
}

#[test]
fn seed_falls_back_to_environment() {
    let with_flag = run(&["adversary", "--seed", "42"]);
    let from_env = bin().args(["adversary"]).env("DENIABLE_FIT_SEED", "42").output().unwrap();
    assert_eq!(from_env.status.code(), Some(0));
    assert_eq!(with_flag.stdout, from_env.stdout);
    assert_eq!(run(&["adversary"]).status.code(), Some(1));
}
