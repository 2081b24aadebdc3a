use std::path::Path;
use std::process::{Command, Output};

fn shearlet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearlet")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compose_with_identity() {
    let o = shearlet(&["group", "--compose", "1,0,0,0", "4,1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("4,1,2,3"));
}

#[test]
fn regular_density_is_near_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = shearlet(&[
        "density", "--family", "regular", "--a", "2.718281828", "--b", "1", "--c", "1", "--h", "1,2,4,8,16", "--centers",
        "100", "--seed", "7", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("h,min_norm_count,max_norm_count,centers\n"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 16.0);
    assert!((0.9..=1.1).contains(&last[1]) && (0.9..=1.1).contains(&last[2]));
}

#[test]
fn coshearlet_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pts.csv");
    let o = shearlet(&["plot-data", "--family", "coshearlet", "--a", "2", "--b", "1", "--c", "1", "--window", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 17usize.pow(4));
    assert!(!text.contains('\r'));
}

#[test]
fn config_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# family choice\nfamily=regular\na=2\nb=5\n");
    let merged = shearlet(&["params", "--config", &cfg, "--b", "1", "--window", "1"]);
    let direct = shearlet(&["params", "--family", "regular", "--a", "2", "--b", "1", "--window", "1"]);
    assert_eq!(merged.status.code(), Some(0), "{}", stderr(&merged));
    assert_eq!(stdout(&merged), stdout(&direct));
    let empty = write(dir.path(), "empty.cfg", "");
    assert_eq!(stdout(&shearlet(&["params", "--config", &empty])), stdout(&shearlet(&["params"])));
}

#[test]
fn config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "a=-1\n");
    let o = shearlet(&["params", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a > 1"), "{}", stderr(&o));
    let typo = write(dir.path(), "typo.cfg", "famly=regular\n");
    let o = shearlet(&["params", "--config", &typo]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`famly`") && stderr(&o).contains("`family`"));
}

#[test]
fn usage_errors_exit_two() {
    let o = shearlet(&["density", "--bogus", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    // randomized commands need an explicit seed
    assert_eq!(shearlet(&["density", "--h", "1"]).status.code(), Some(2));
    assert_eq!(shearlet(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn diagnostics_exit_three() {
    let o = shearlet(&["hap", "--samples", "1", "--seed", "1", "--reach", "3", "--shell", "1", "--no-distance", "--a", "1.41421356", "--b", "0.5", "--c", "0.5"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = shearlet(&["witness", "--target", "1000", "--max-steps", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("reached,false"));
}

#[test]
fn help_lists_flags_with_units() {
    for cmd in [
        "group", "params", "density", "covering", "admissibility", "transform", "isometry", "decay", "amalgam", "hap",
        "frame-bounds", "witness", "plot-data",
    ] {
        let o = shearlet(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("--format"), "{cmd}");
    }
    let o = shearlet(&["density", "--help"]);
    assert!(stdout(&o).contains("[dimensionless]") && stdout(&o).contains("[length]"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let runs: [&[&str]; 4] = [
        &["density", "--h", "2,4", "--centers", "20", "--seed", "3"],
        &["density", "--h", "2,4", "--centers", "20", "--seed", "3", "--format", "json"],
        &["hap", "--a", "1.41421356", "--b", "0.5", "--c", "0.5", "--samples", "2", "--seed", "5", "--format", "json"],
        &["covering", "--h", "1", "--points", "200", "--boxes", "20", "--seed", "9"],
    ];
    for args in runs {
        let a = shearlet(args);
        let b = shearlet(args);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_parse() {
    let o = shearlet(&["frame-bounds", "--seed", "1", "--a", "1.189207115", "--b", "0.25", "--c", "0.25", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (a, b) = (v["a_est"].as_f64().unwrap(), v["b_est"].as_f64().unwrap());
    assert!(0.0 < a && a <= b && b / a < 100.0);
}
