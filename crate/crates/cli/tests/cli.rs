use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn verlinde(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(args)
        .env("VERLINDE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn entry_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for a in std::fs::read_dir(root).into_iter().flatten().flatten() {
        for b in std::fs::read_dir(a.path()).into_iter().flatten().flatten() {
            for f in std::fs::read_dir(b.path()).into_iter().flatten().flatten() {
                out.push(f.path());
            }
        }
    }
    out
}

#[test]
fn tilting_character() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["char", "tilting", "--p", "3", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"3":1,"1":2,"-1":2,"-3":1}"#);
    let o = verlinde(dir.path(), &["char", "tilting", "--p", "3", "--m", "3", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "χ3 + χ1");
}

#[test]
fn other_characters() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["char", "weyl", "--m", "2"]);
    assert_eq!(stdout(&o).trim(), r#"{"2":1,"0":1,"-2":1}"#);
    // L_4 at p = 3 is L_1 tensor a Frobenius twist of L_1
    let o = verlinde(dir.path(), &["char", "simple", "--p", "3", "--m", "4"]);
    assert_eq!(stdout(&o).trim(), r#"{"4":1,"2":1,"-2":1,"-4":1}"#);
    let o = verlinde(dir.path(), &["char", "gl-restriction", "--p", "3", "--m", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_object().unwrap().values().map(|c| c.as_i64().unwrap()).sum::<i64>(), 3);
}

#[test]
fn cell_of_steinberg() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["cell", "--p", "3", "--m", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"cell":2}"#);
    let o = verlinde(dir.path(), &["cell", "--p", "3", "--module", "St(1)*V"]);
    assert_eq!(stdout(&o).trim(), r#"{"cell":1}"#);
}

#[test]
fn padic_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["padic-dim", "--p", "3", "--dims", "1,0,0,1,0,0,0,0,0"]);
    assert_eq!(stdout(&o).trim(), r#"{"p":3,"digits":[0,1]}"#);
    let o = verlinde(dir.path(), &["padic-dim", "--p", "3", "--dims", "1,2,1"]);
    assert_eq!(stdout(&o).trim(), r#"{"p":3,"digits":[2]}"#);
}

#[test]
fn thm_w_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["verify", "thm-w", "--p", "3", "--n", "2", "--m", "3", "--imax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["claim"], "thm-w");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["timing_ms"], Value::Null);
}

#[test]
fn decomposition_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["decompose", "--p", "3", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multiset"]["summands"], serde_json::json!({ "3": 1, "1": 1 }));
    assert_eq!(v["certified"], true);
    let o = verlinde(dir.path(), &["decompose", "--p", "3", "--module", "V^3", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "V^3 = T3 ⊕ T1 (certified)");
}

#[test]
fn cached_and_fresh_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "splitpres", "--p", "3", "--j", "1", "--m", "3", "--imax", "4"];
    let first = verlinde(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(entry_files(dir.path()).len(), 1);
    let second = verlinde(dir.path(), &args);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(entry_files(dir.path()).len(), 1);
    let fresh = verlinde(dir.path(), &[&args[..], &["--no-cache"]].concat());
    assert_eq!(stdout(&first), stdout(&fresh));
}

#[test]
fn flag_order_does_not_change_the_key() {
    let dir = tempfile::tempdir().unwrap();
    verlinde(dir.path(), &["verify", "gl-vanishing", "--p", "3", "--m", "4", "--smax", "2"]);
    verlinde(dir.path(), &["verify", "gl-vanishing", "--smax", "2", "--m", "4", "--p", "3"]);
    assert_eq!(entry_files(dir.path()).len(), 1);
    verlinde(dir.path(), &["verify", "gl-vanishing", "--p", "3", "--m", "4", "--smax", "2", "--seed", "5"]);
    assert_eq!(entry_files(dir.path()).len(), 2);
}

#[test]
fn corrupt_entry_is_a_miss_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cell", "--p", "5", "--m", "24"];
    let first = verlinde(dir.path(), &args);
    let files = entry_files(dir.path());
    std::fs::write(&files[0], "{ truncated").unwrap();
    let second = verlinde(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&second).contains("warning"), "{}", stderr(&second));
    // the recomputed result replaced the bad entry
    let third = verlinde(dir.path(), &args);
    assert!(stderr(&third).is_empty());
}

#[test]
fn tampered_witness_is_not_trusted() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "thm-w", "--p", "3", "--n", "2", "--m", "2", "--imax", "3"];
    let first = verlinde(dir.path(), &args);
    let path = entry_files(dir.path()).pop().unwrap();
    let mut entry: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    entry["payload"]["witnesses"]["powers"][1]["multiset"]["summands"] = serde_json::json!({ "0": 3 });
    std::fs::write(&path, entry.to_string()).unwrap();
    let second = verlinde(dir.path(), &args);
    assert!(stderr(&second).contains("re-check"), "{}", stderr(&second));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn concurrent_writers() {
    let dir = tempfile::tempdir().unwrap();
    let children: Vec<_> = (0..4)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_verlinde"))
                .args(["verify", "example-w", "--p", "3", "--n", "2"])
                .env("VERLINDE_CACHE_DIR", dir.path())
                .stdout(Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    let outs: Vec<Output> = children.into_iter().map(|c| c.wait_with_output().unwrap()).collect();
    assert!(outs.iter().all(|o| o.status.code() == Some(0)));
    assert!(outs.windows(2).all(|w| w[0].stdout == w[1].stdout));
    assert_eq!(entry_files(dir.path()).len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verlinde(dir.path(), &["verify", "thm-w", "--p", "3"]).status.code(), Some(2));
    assert_eq!(verlinde(dir.path(), &["char", "simple", "--p", "4", "--m", "1"]).status.code(), Some(2));
    assert_eq!(verlinde(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let o = verlinde(dir.path(), &["verify", "diagram", "--p", "5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap"));
    let o = verlinde(dir.path(), &["verify", "thm-w", "--p", "5", "--n", "2", "--m", "5", "--imax", "7", "--dim-cap", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let o = verlinde(dir.path(), &["verify", "gr", "--p", "5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(verlinde(dir.path(), &["verify", "gr", "--p", "3", "--n", "2"]).status.code(), Some(0));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let o = verlinde(dir.path(), &["verify", "rem-mn", "--p", "3", "--n", "2", "--timing"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["timing_ms"].is_u64());
    assert!(entry_files(dir.path()).is_empty());
}

#[test]
fn cache_listing_and_gc() {
    let dir = tempfile::tempdir().unwrap();
    verlinde(dir.path(), &["cell", "--p", "3", "--m", "2"]);
    verlinde(dir.path(), &["cell", "--p", "3", "--m", "3"]);
    let o = verlinde(dir.path(), &["cache", "ls"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    std::fs::write(entry_files(dir.path())[0].with_file_name(".tmp-0-0-0"), "").unwrap();
    let o = verlinde(dir.path(), &["cache", "gc"]);
    assert_eq!(stdout(&o).trim(), r#"{"kept":2,"removed":1}"#);
    let o = verlinde(dir.path(), &["--cache-dir", dir.path().join("elsewhere").to_str().unwrap(), "cache", "ls"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["entries"].as_array().unwrap().is_empty());
}
