use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn slo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slo"))
        .args(args)
        .output()
        .expect("run slo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn free_sl2(dir: &Path) -> String {
    let p = dir.join("fsl2.json");
    let o = slo(&["free-sl", "--gens", "2", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    p.to_str().unwrap().to_string()
}

const CHAIN2: &str = r#"{
  "signature": "signature L op mul:2 op join:2 const zero const one join join zero zero unit one end",
  "carrier": ["0", "1"],
  "ops": {
    "mul": [["0", "0"], ["0", "1"]],
    "join": [["0", "1"], ["1", "1"]],
    "zero": "0",
    "one": "1"
  }
}"#;

#[test]
fn parse_round_trips() {
    let d = TempDir::new().unwrap();
    let sig = write(d.path(), "s.sig", "signature S\n  op f:2\n  op g:1\n  const c\nend\n");
    let o = slo(&["parse", "--sig", &sig]);
    assert!(o.status.success());
    let again = write(d.path(), "t.sig", &stdout(&o));
    assert_eq!(stdout(&slo(&["parse", "--sig", &again])), stdout(&o));
}

#[test]
fn bad_signature_is_usage_error() {
    let d = TempDir::new().unwrap();
    let sig = write(d.path(), "s.sig", "signature S op f: end");
    assert_eq!(slo(&["parse", "--sig", &sig]).status.code(), Some(2));
    assert_eq!(slo(&["props", "--alg", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn check_reports_witness() {
    let d = TempDir::new().unwrap();
    let f = free_sl2(d.path());
    let o = slo(&["check", "--alg", &f, "--id", "mul(x,y) = mul(y,x)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let p = d.path().join("p.json");
    assert!(slo(&["power", "--alg", &f, "--out", p.to_str().unwrap()])
        .status
        .success());
    let o = slo(&["check", "--alg", p.to_str().unwrap(), "--id", "mul(x,x) = x"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("x={x,y}"), "{out}");
    assert!(out.contains("{x,y,xy}"), "{out}");
}

#[test]
fn props_of_free_semilattice() {
    let d = TempDir::new().unwrap();
    let out = stdout(&slo(&["props", "--alg", &free_sl2(d.path())]));
    for line in ["idempotent: true", "entropic: true", "symmetric: true"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn subalgebras_listing() {
    let d = TempDir::new().unwrap();
    let out = stdout(&slo(&["subalgebras", "--alg", &free_sl2(d.path()), "--include-empty"]));
    assert!(out.ends_with("7 subalgebras\n"), "{out}");
    let out = stdout(&slo(&["subalgebras", "--alg", &free_sl2(d.path())]));
    assert!(out.ends_with("6 subalgebras\n"), "{out}");
}

#[test]
fn quotient_rho_sizes() {
    let d = TempDir::new().unwrap();
    let f = free_sl2(d.path());
    let q = d.path().join("q.json");
    let o = slo(&[
        "quotient-rho",
        "--alg",
        &f,
        "--variant",
        "with-empty",
        "--out",
        q.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "7 classes");
    let props = stdout(&slo(&["props", "--alg", q.to_str().unwrap()]));
    assert!(props.contains("idempotent: true"), "{props}");
}

#[test]
fn free_cdis_counts() {
    for (n, want) in [(0, 2), (1, 4), (2, 14), (3, 122), (4, 4960)] {
        let o = slo(&["free-cdis", "--gens", &n.to_string(), "--count"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want.to_string());
    }
}

#[test]
fn disjunctive_form_in_power() {
    let d = TempDir::new().unwrap();
    let f = free_sl2(d.path());
    let p = d.path().join("p.json");
    assert!(slo(&[
        "power",
        "--alg",
        &f,
        "--variant",
        "with-empty",
        "--out",
        p.to_str().unwrap()
    ])
    .status
    .success());
    let o = slo(&[
        "disj",
        "--alg",
        p.to_str().unwrap(),
        "--gens",
        "{x},{y},{xy}",
        "--elem",
        "{x,xy}",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "{x,xy} = {x} + {xy}");
}

#[test]
fn extend_into_chain() {
    let d = TempDir::new().unwrap();
    let free = d.path().join("c.json");
    assert!(slo(&["free-cdis", "--gens", "1", "--out", free.to_str().unwrap()])
        .status
        .success());
    let chain = write(d.path(), "l.json", CHAIN2);
    let o = slo(&[
        "extend",
        "--free",
        free.to_str().unwrap(),
        "--target",
        &chain,
        "--map",
        "x=0",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "⟨⟩ -> 0\n⟨x⟩ -> 0\n⟨⟩+1 -> 1\n⟨x⟩+1 -> 1\n");

    let o = slo(&[
        "extend",
        "--free",
        free.to_str().unwrap(),
        "--target",
        &chain,
        "--map",
        "x=2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = slo(&[
        "extend",
        "--free",
        free.to_str().unwrap(),
        "--target",
        &chain,
        "--map",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suites_pass() {
    for which in ["gl", "cor52", "counts", "universality"] {
        let o = slo(&["suite", which, "--max-size", "2"]);
        assert!(o.status.success(), "{which}: {}", stdout(&o));
        assert!(stdout(&o).contains(" 0 failed"), "{}", stdout(&o));
    }
}

#[test]
fn suite_json_shape() {
    let o = slo(&["suite", "counts", "--max-size", "3", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "counts");
    assert_eq!(v["failed"], 0);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["pass"] == true));

    let o = slo(&["suite", "all", "--max-size", "2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}
