use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rankthree::coherent::CoherentConfiguration;
use rankthree::graph::named;
use rankthree::perm::named as groups;
use serde_json::Value;
use tempfile::TempDir;

fn rankthree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankthree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_hs_writes_graph_and_report() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("hs.txt");
    let report = dir.path().join("hs.json");
    let o = rankthree(&[
        "build-hs",
        "--out-graph",
        path_str(&graph),
        "--out-report",
        path_str(&report),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["n"], 100);
    assert_eq!(v["k"], 22);
    assert_eq!(v["lambda"], 0);
    assert_eq!(v["mu"], 6);
    assert_eq!(v["edges"], 1100);
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(on_disk, v);
    let g = rankthree::Graph::parse(&fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(
        g.check_srg(),
        Some(rankthree::SrgParams::new(100, 22, 0, 6))
    );
}

#[test]
fn unwritable_output_exits_2() {
    let dir = TempDir::new().unwrap();
    let blocker = write(&dir, "file", "x");
    let nested = format!("{blocker}/hs.txt");
    let ok = dir.path().join("r.json");
    let o = rankthree(&[
        "build-hs",
        "--out-graph",
        &nested,
        "--out-report",
        path_str(&ok),
    ]);
    assert_eq!(code(&o), 2);

    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let ro = dir.path().join("ro");
        fs::create_dir(&ro).unwrap();
        fs::set_permissions(&ro, fs::Permissions::from_mode(0o555)).unwrap();
        // permission bits do not bind a privileged user
        if fs::write(ro.join("probe"), "").is_err() {
            let g = ro.join("hs.txt");
            let r = ro.join("hs.json");
            let o = rankthree(&[
                "build-hs",
                "--out-graph",
                path_str(&g),
                "--out-report",
                path_str(&r),
            ]);
            assert_eq!(code(&o), 2);
        }
        fs::set_permissions(&ro, fs::Permissions::from_mode(0o755)).unwrap();
    }
}

#[test]
fn closure_of_graph_files() {
    let dir = TempDir::new().unwrap();
    let pentagon = write(&dir, "c5.txt", &named::cycle(5).to_text());
    let o = rankthree(&["closure", &pentagon]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["fibers"], 1);

    let hs = write(
        &dir,
        "hs.txt",
        &rankthree::hs::higman_sims_graph().to_text(),
    );
    let v = stdout_json(&rankthree(&["closure", &hs]));
    assert_eq!(v["rank"], 3);
    assert_eq!(v["class_sizes"], serde_json::json!([100, 2200, 7700]));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let text = rankthree::hs::higman_sims_graph().to_text();
    let truncated = write(&dir, "t.txt", &text[..text.len() / 2]);
    for cmd in ["closure", "autgroup"] {
        assert_eq!(code(&rankthree(&[cmd, &truncated])), 2, "{cmd}");
    }
    let missing = dir.path().join("nope.txt");
    assert_eq!(code(&rankthree(&["closure", path_str(&missing)])), 2);
    let garbage = write(&dir, "g.txt", "degree 3\n(0 1 5)\n");
    assert_eq!(code(&rankthree(&["orbitals", &garbage])), 2);
    let intransitive = write(&dir, "i.txt", "degree 4\n(0 1)\n");
    assert_eq!(code(&rankthree(&["orbitals", &intransitive])), 2);
    let bad_matrix = write(&dir, "m.txt", "2 2\n0 1\n0 0\n");
    assert_eq!(code(&rankthree(&["spectrum", &bad_matrix])), 2);
    assert_eq!(code(&rankthree(&["gq", "2", "2", "5"])), 2);
    assert_eq!(code(&rankthree(&["gq", "2", "2", "6"])), 2);
    assert_eq!(code(&rankthree(&["no-such-command"])), 2);
}

#[test]
fn orbitals_verdicts() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.txt", &groups::cyclic(4).to_text());
    let v = stdout_json(&rankthree(&["orbitals", &c4]));
    assert_eq!(v["primitive"], false);
    assert_eq!(v["oracle_primitive"], false);

    let s4 = write(&dir, "s4.txt", &groups::symmetric(4).to_text());
    let v = stdout_json(&rankthree(&["orbitals", &s4]));
    assert_eq!(v["rank"], 2);
    assert_eq!(v["primitive"], true);

    // both orbital graphs of the product action (rook graph and complement) are connected
    let w = write(&dir, "w.txt", &groups::wreath_square_product(10).to_text());
    let o = rankthree(&["orbitals", &w]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["subdegrees"], serde_json::json!([1, 18, 81]));
    assert_eq!(v["primitive"], true);
    assert_eq!(v["oracle_primitive"], true);
    assert_eq!(v["order"], "26336378880000");
}

#[test]
fn autgroup_and_budget() {
    let dir = TempDir::new().unwrap();
    let pet = write(&dir, "p.txt", &named::petersen().to_text());
    let v = stdout_json(&rankthree(&["autgroup", &pet]));
    assert_eq!(v["order"], "120");
    assert_eq!(v["vertex_transitive"], true);
    for gen in v["generators"].as_array().unwrap() {
        let images: Vec<usize> = serde_json::from_value(gen.clone()).unwrap();
        let p = rankthree::Permutation::from_images(images).unwrap();
        assert!(rankthree::aut::is_graph_automorphism(
            &named::petersen(),
            &p
        ));
    }
    assert_eq!(
        code(&rankthree(&["autgroup", &pet, "--node-budget", "1"])),
        3
    );
    let cfg = write(&dir, "cfg", "node-budget = 1\n");
    assert_eq!(code(&rankthree(&["autgroup", &pet, "--config", &cfg])), 3);
    // the flag wins over the file
    assert_eq!(
        code(&rankthree(&[
            "autgroup",
            &pet,
            "--config",
            &cfg,
            "--node-budget",
            "100000"
        ])),
        0
    );
    let bad_cfg = write(&dir, "bad", "budget=3\n");
    assert_eq!(
        code(&rankthree(&["autgroup", &pet, "--config", &bad_cfg])),
        2
    );
}

#[test]
fn spectrum_of_pentagon_scheme() {
    let dir = TempDir::new().unwrap();
    let cc = CoherentConfiguration::wl2_closure(&named::cycle(5));
    let path = write(&dir, "c5.cc", &cc.to_text());
    let o = rankthree(&["spectrum", &path]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["multiplicities"], serde_json::json!([1, 2, 2]));
    assert_eq!(v["valencies"], serde_json::json!([1, 2, 2]));
    assert_eq!(v["krein_pass"], true);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let row1: Vec<f64> = v["P"][1]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((row1[0] - 1.0).abs() < 1e-12);
    assert!(row1[1..].iter().any(|&x| (x - golden).abs() < 1e-9));
}

#[test]
fn feasibility_commands() {
    let v = stdout_json(&rankthree(&["moore", "--kmax", "100"]));
    assert_eq!(v["valencies"], serde_json::json!([2, 3, 7, 57]));
    let v = stdout_json(&rankthree(&["gq", "4", "2", "4"]));
    assert_eq!(v["pass"], true);
    let v = stdout_json(&rankthree(&["gq", "5", "2", "4"]));
    assert_eq!(v["pass"], false);

    let v = stdout_json(&rankthree(&["feasible-srg", "--max-n", "10"]));
    assert_eq!(
        stdout_json(&rankthree(&["feasible-srg", "--max-n", "10", "--json"])),
        v
    );
    assert_eq!(
        code(&rankthree(&[
            "feasible-srg",
            "--max-n",
            "10",
            "--json",
            "--csv"
        ])),
        2
    );
    let rows = v.as_array().unwrap();
    assert_eq!(rows[0]["r"], "(-1+sqrt(5))/2");
    assert!(rows[0]["flags"]
        .as_array()
        .unwrap()
        .contains(&"conference".into()));
    let o = rankthree(&["feasible-srg", "--max-n", "10", "--csv"]);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("n,k,lambda,mu,r,s,f,g,flags"));
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(csv.contains("\n10,3,0,1,1,-2,5,4,,\n"));

    let v = stdout_json(&rankthree(&["feasible-srg", "--params", "3250,57,0,1"]));
    assert_eq!(v[0]["f"], "1729");
    assert_eq!(v[0]["failed"], serde_json::json!([]));
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let dir = TempDir::new().unwrap();
    let hs = write(
        &dir,
        "hs.txt",
        &rankthree::hs::higman_sims_graph().to_text(),
    );
    let runs: Vec<Vec<&str>> = vec![
        vec!["closure", &hs],
        vec!["autgroup", &hs],
        vec!["feasible-srg", "--max-n", "60"],
        vec!["harness", "--samples", "100", "--seed", "9"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for w in ["1", "3", "8"] {
            let mut a = args.clone();
            a.extend(["--workers", w]);
            let o = rankthree(&a);
            assert_eq!(code(&o), 0, "{args:?}");
            outputs.push(o.stdout);
        }
        outputs.push(rankthree(&args).stdout);
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn harness_seed_and_report() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("run.json");
    let o = rankthree(&["harness", "--samples", "50", "--report", path_str(&report)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["disagreements"], serde_json::json!([]));
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["command"], "harness");
    assert_eq!(r["results"], v);
    assert!(r["elapsed"].as_f64().unwrap() >= 0.0);

    let cfg = write(&dir, "cfg", "seed=4\n");
    let from_file = stdout_json(&rankthree(&[
        "harness",
        "--samples",
        "50",
        "--config",
        &cfg,
    ]));
    assert_eq!(from_file["seed"], 4);
    let flag = stdout_json(&rankthree(&[
        "harness",
        "--samples",
        "50",
        "--config",
        &cfg,
        "--seed",
        "5",
    ]));
    assert_eq!(flag["seed"], 5);

    let pet = write(&dir, "p.txt", &named::petersen().to_text());
    let o = rankthree(&["autgroup", &pet, "--report", path_str(&report)]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let digest = r["inputs"][&pet].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}
