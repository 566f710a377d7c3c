use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn semioval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semioval")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn search_q2() {
    let out = semioval(&["search", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sizes"], serde_json::json!([6, 8, 9]));
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = semioval(&["construct", "--theorem", "secondo", "--q", "3", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["size"], 22);
    let set = dir.path().join("set.json");
    let out = semioval(&["verify", "--set", set.to_str().unwrap(), "--q", "3", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["size"], 22);
    assert_eq!(v["oracle_agrees"], true);
}

#[test]
fn collinear_triple_fails_with_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    // three points of H_3 on the line X1 = X0 of the standard model
    let model = semioval_core::HermitianModel::for_q(3, semioval_core::Frame::Standard).unwrap();
    let line = model.plane().line([semioval_core::Elem(1), semioval_core::Elem(2), semioval_core::Elem(0)]).unwrap();
    let pts: Vec<[u32; 3]> =
        model.curve_points_on_line(&line).into_iter().take(3).map(|k| model.point(k).0.map(|e| e.code())).collect();
    assert_eq!(pts.len(), 3);
    let file = dir.path().join("triple.json");
    let body = serde_json::json!({"domain": "curve", "q": 3, "frame": "standard", "indices": [], "points": pts});
    std::fs::write(&file, body.to_string()).unwrap();
    let out = semioval(&["verify", "--set", file.to_str().unwrap(), "--q", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["report"]["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(semioval(&["search", "--q", "4"]).status.code(), Some(2));
    assert_eq!(semioval(&["construct", "--theorem", "sesto", "--q", "3"]).status.code(), Some(2));
    assert_eq!(semioval(&["cover", "--q", "5"]).status.code(), Some(2));
    assert_eq!(semioval(&["blocking2", "--q", "7", "--r", "2"]).status.code(), Some(2));
    assert_eq!(semioval(&[]).status.code(), Some(2));
}

#[test]
fn mismatched_index_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let body = serde_json::json!({"domain": "curve", "q": 2, "indices": [1], "points": [[1, 0, 0]]});
    std::fs::write(&file, body.to_string()).unwrap();
    let out = semioval(&["verify", "--set", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let body = serde_json::json!({"domain": "curve", "q": 2, "indices": [], "points": [[1, 1, 1]]});
    std::fs::write(&file, body.to_string()).unwrap();
    assert_eq!(semioval(&["verify", "--set", file.to_str().unwrap()]).status.code(), Some(2));
}

/// Every set written by a subcommand re-verifies to the report it came with.
#[test]
fn written_sets_round_trip() {
    let runs: [(&[&str], &str, bool); 5] = [
        (&["construct", "--theorem", "terzo", "--q", "5"], "/report", false),
        (&["construct", "--theorem", "main", "--q", "9", "--r", "2", "--force"], "/report", false),
        (&["cover", "--q", "5", "--force", "--method", "random", "--seed", "3"], "/semioval", false),
        (&["blocking2", "--q", "5", "--r", "2", "--force"], "/blocking", true),
        (&["search", "--q", "2"], "", false),
    ];
    let mut checked = 0;
    for (args, pointer, blocking) in runs {
        let dir = tempfile::tempdir().unwrap();
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out", dir.path().to_str().unwrap()]);
        let out = semioval(&full);
        assert!(out.status.code() == Some(0) || out.status.code() == Some(1), "{args:?}");
        let manifest = read(&dir.path().join("manifest.json"));
        for name in manifest["outputs"].as_object().unwrap().keys() {
            let is_set = name == "set.json" || name.starts_with("search_");
            if !is_set {
                continue;
            }
            let path = dir.path().join(name);
            let mut vargs = vec!["verify", "--set", path.to_str().unwrap()];
            if blocking {
                vargs.push("--blocking");
            }
            let v = semioval(&vargs);
            let back = json(&v);
            checked += 1;
            if !pointer.is_empty() {
                let written = read(&dir.path().join(format!("{}.json", args[0])));
                assert_eq!(back["report"], *written.pointer(pointer).unwrap(), "{args:?}");
                assert_eq!(v.status.code(), out.status.code(), "{args:?}");
            } else {
                assert_eq!(back["passed"], true);
            }
        }
    }
    assert_eq!(checked, 7);
}

#[test]
fn manifests_are_reproducible() {
    let digests = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let args = ["spectrum", "--theorem", "secondo", "--q", "4", "--seed", seed, "--format", "csv"];
        let mut full = args.to_vec();
        full.extend(["--out", dir.path().to_str().unwrap()]);
        assert_eq!(semioval(&full).status.code(), Some(0));
        let m = read(&dir.path().join("manifest.json"));
        (m["outputs"].clone(), m["seeds"].clone())
    };
    let a = digests("9");
    assert_eq!(a, digests("9"));
    assert_eq!(a.1["interior_sizes"], 9);
    assert!(a.0.get("spectrum.csv").is_some());
}
