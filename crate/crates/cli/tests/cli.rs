use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const KINDS: &[&str] = &[
    "mlij-lb",
    "antichain",
    "example1",
    "example2",
    "mlij-intro",
    "vc-98",
    "ct-113",
    "star-metric",
    "random-mlij",
    "random-covering",
    "random-metric",
    "random-setcover",
    "random-ct",
];

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_equinorm"));
    c.env_remove("EQUINORM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn generate_solve_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    for kind in KINDS {
        let inst = path(&dir, &format!("{kind}.json"));
        let rep = path(&dir, &format!("{kind}.rep.json"));
        let o = run(&["generate", kind, "-o", s(&inst)]);
        assert_eq!(code(&o), 0, "generate {kind}: {}", String::from_utf8_lossy(&o.stderr));
        let o = run(&["solve", s(&inst), "-o", s(&rep)]);
        assert_eq!(code(&o), 0, "solve {kind}: {}", String::from_utf8_lossy(&o.stderr));
        let o = run(&["verify", s(&inst), s(&rep)]);
        assert_eq!(code(&o), 0, "verify {kind}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&rep);
        assert_eq!(r["seed"], 0);
        if let Some(c) = r["certificates"]["topk"].as_object() {
            assert!(c["exact"].is_boolean());
        }
    }
}

#[test]
fn identity_portfolio_verifies_with_ratio_one() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[[1, 2, 3], [3, 2, 1], [2, 2, 2]]");
    let out = path(&dir, "v.json");
    let o = run(&["verify", s(&d), s(&d), "--alpha", "1", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&out)["certificates"]["topk"]["ratio"], 1.0);
}

#[test]
fn example1_pair_is_exact_for_topk() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "e.json");
    assert_eq!(code(&run(&["generate", "example1", "--d", "64", "-o", s(&inst)])), 0);
    let e = json(&inst);
    let vs = e["vectors"].as_array().unwrap();
    let pair = serde_json::to_string(&vec![vs[0].clone(), vs[1].clone()]).unwrap();
    let pf = write(&dir, "p.json", &pair);
    let out = path(&dir, "v.json");
    let o = run(&["verify", s(&inst), s(&pf), "--alpha", "1", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let c = &json(&out)["certificates"];
    assert_eq!(c["topk"]["ratio"], 1.0);
    assert!(c["ordered"]["ratio"].as_f64().unwrap() >= 1.0);
    assert_eq!(c["ordered"]["exact"], false);
}

#[test]
fn false_claim_exits_with_four() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[[4, 0], [1, 1]]");
    let p = write(&dir, "p.json", "[[4, 0]]");
    assert_eq!(code(&run(&["verify", s(&d), s(&p), "--alpha", "1.5"])), 4);
    let outside = write(&dir, "q.json", "[[0, 0]]");
    assert_eq!(code(&run(&["verify", s(&d), s(&outside)])), 4);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"type":"mlij","p":[0],"n":1}"#);
    assert_eq!(code(&run(&["solve", s(&bad)])), 2);
    assert_eq!(code(&run(&["generate", "nope"])), 2);
    assert_eq!(code(&run(&["generate", "mlij-lb", "--d-max", "10"])), 3);
    let m = write(&dir, "m.json", r#"{"type":"mlij","p":[1,2],"n":3}"#);
    assert_eq!(code(&run(&["solve", s(&m), "--alpha", "3"])), 2);
}

#[test]
fn mlij_portfolio_size_bound() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "m.json");
    let out = path(&dir, "r.json");
    for seed in 0..5 {
        let seed = seed.to_string();
        run(&["generate", "random-mlij", "--d", "6", "--n", "9", "--seed", &seed, "-o", s(&inst)]);
        assert_eq!(code(&run(&["solve", s(&inst), "--alpha", "8", "-o", s(&out)])), 0);
        let size = json(&out)["portfolio"]["vectors"].as_array().unwrap().len();
        assert!(size <= 1 + (6f64).log2().ceil() as usize);
        assert_eq!(code(&run(&["solve", s(&inst), "--alpha", "6", "-o", s(&out)])), 0);
        assert_eq!(code(&run(&["verify", s(&inst), s(&out)])), 0);
    }
}

#[test]
fn tradeoff_is_deterministic_and_monotone() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "m.json");
    run(&["generate", "random-mlij", "--d", "6", "--n", "10", "--seed", "3", "-o", s(&inst)]);
    let a = run(&["tradeoff", s(&inst), "--alphas", "5,8,16"]);
    let b = run(&["tradeoff", s(&inst), "--alphas", "5,8,16", "--jobs", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "param,portfolio_size,exact_topk_ratio,sampled_ord_ratio,seconds");
    let sizes: Vec<usize> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(sizes.len(), 3);
    assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    let one = run(&["tradeoff", s(&inst), "--alphas", "8"]);
    assert_eq!(String::from_utf8(one.stdout).unwrap().lines().count(), 2);
}

#[test]
fn covering_sweep_respects_certificates() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "c.json");
    run(&["generate", "random-covering", "--d", "5", "--seed", "1", "-o", s(&inst)]);
    let o = run(&["tradeoff", s(&inst), "--epsilons", "1,0.5,0.25"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let eps: f64 = f[0].parse().unwrap();
        let ratio: f64 = f[2].parse().unwrap();
        assert!(ratio <= 1.0 + eps + 1e-6, "{line}");
    }
}

#[test]
fn seed_env_var_overrides_flag() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[[1, 2], [2, 1]]");
    let o = bin()
        .args(["solve", s(&d), "--seed", "4"])
        .env("EQUINORM_SEED", "11")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed"], 11);
    assert_eq!(r["certificates"]["seed"], 11);
}

#[test]
fn solve_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for kind in ["random-covering", "random-ct", "random-metric"] {
        let inst = path(&dir, "i.json");
        run(&["generate", kind, "--seed", "7", "-o", s(&inst)]);
        let a = run(&["solve", s(&inst), "--seed", "7"]);
        let b = run(&["solve", s(&inst), "--seed", "7"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
}

#[test]
fn specialised_methods() {
    let dir = TempDir::new().unwrap();
    let ct = path(&dir, "ct.json");
    run(&["generate", "random-ct", "--n", "5", "--d", "3", "--seed", "2", "-o", s(&ct)]);
    let out = path(&dir, "r.json");
    assert_eq!(code(&run(&["solve", s(&ct), "--oracle", "lp", "-o", s(&out)])), 0);
    assert_eq!(json(&out)["portfolio"]["alpha"]["numeric"], 8.0);
    let sc = write(&dir, "sc.json", r#"{"type":"setcover","n_elements":2,"sets":[[0,1]]}"#);
    assert_eq!(code(&run(&["solve", s(&sc), "-o", s(&out)])), 0);
    assert_eq!(json(&out)["details"]["order"], serde_json::json!([0]));
    let star = path(&dir, "star.json");
    run(&["generate", "star-metric", "--n", "9", "-o", s(&star)]);
    assert_eq!(code(&run(&["solve", s(&star), "--method", "ufl", "-o", s(&out)])), 0);
    assert_eq!(code(&run(&["verify", s(&star), s(&out)])), 0);
    assert_eq!(code(&run(&["solve", s(&star), "--k", "2", "--mode", "exact", "--eps", "0.5", "-o", s(&out)])), 0);
}
