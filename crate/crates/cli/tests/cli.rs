use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{out}"))
}

const A1: &str = "3\n1 2 3\n# 5 #\n# # 7\n# # #\n";
const A2: &str = "3\n1 2 4\n# 5 #\n# # 7\n# # #\n";
const FAR: &str = "2\n500 900\n# 300\n# #\n";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn synth_then_dist_is_zero_for_a_member() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write(dir.path(), "a1.ag", A1);
    let a2 = write(dir.path(), "a2.ag", A2);
    let labels = write(dir.path(), "l.txt", "0->0 1->1 2->2\n0->0 1->1 2->2\n");
    let out = dir.path().join("m.fdg").display().to_string();
    let o = stdout(&fdg(&["synth", "--ag", &a1, "--ag", &a2, "--labels", &labels, "--out", &out]));
    assert_eq!(value(&o, "order"), "3");

    let o = stdout(&fdg(&["dist", "--ag", &a1, "--fdg", &out, "--k3", "0", "--k4", "0"]));
    assert_eq!(value(&o, "valid"), "true");
    assert_eq!(value(&o, "labelling"), "0->0 1->1 2->2");
    let d: f64 = value(&o, "distance").parse().unwrap();
    assert!(d > 0.0 && d < 1.0, "distance {d}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write(dir.path(), "a1.ag", A1);
    let labels = write(dir.path(), "l.txt", "0->0 1->1 2->2\n");
    let f = dir.path().join("m.fdg").display().to_string();
    stdout(&fdg(&["synth", "--ag", &a1, "--labels", &labels, "--out", &f]));
    let cfg = write(dir.path(), "c.cfg", "method = noniter\ntau = 0.5\n");
    let o = stdout(&fdg(&["dist", "--config", &cfg, "--ag", &a1, "--fdg", &f]));
    assert_eq!(value(&o, "method"), "noniter");
    let o = stdout(&fdg(&["dist", "--config", &cfg, "--method", "bnb", "--ag", &a1, "--fdg", &f]));
    assert_eq!(value(&o, "method"), "bnb");
    assert_eq!(value(&o, "distance").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn cluster_writes_fdgs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write(dir.path(), "a1.ag", A1);
    let a2 = write(dir.path(), "a2.ag", A2);
    let far = write(dir.path(), "far.ag", FAR);
    let out = dir.path().join("clusters");
    for method in ["incremental", "complete", "single"] {
        let o = stdout(&fdg(&[
            "cluster", "--cluster-method", method, "--dalpha", "0.5", "--ag", &a1, "--ag", &a2, "--ag", &far, "--out",
            out.to_str().unwrap(),
        ]));
        let k: usize = value(&o, "clusters").parse().unwrap();
        assert!((1..=3).contains(&k));
        for c in 0..k {
            assert!(out.join(format!("cluster_{c}.fdg")).exists());
        }
        let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
        assert_eq!(manifest.lines().count(), k);
    }
}

#[test]
fn classify_by_knn_and_by_models() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write(dir.path(), "a1.ag", A1);
    let a2 = write(dir.path(), "a2.ag", A2);
    let far = write(dir.path(), "far.ag", FAR);
    let o = stdout(&fdg(&["classify", "--classifier", "knn", "--test", &a2, "--ref", &format!("{a1}:0"), "--ref", &format!("{far}:1")]));
    assert_eq!(value(&o, "class"), "0");

    let l3 = write(dir.path(), "l3.txt", "0->0 1->1 2->2\n");
    let l2 = write(dir.path(), "l2.txt", "0->0 1->1\n");
    let m0 = dir.path().join("m0.fdg").display().to_string();
    let m1 = dir.path().join("m1.fdg").display().to_string();
    stdout(&fdg(&["synth", "--ag", &far, "--labels", &l2, "--out", &m0]));
    stdout(&fdg(&["synth", "--ag", &a1, "--labels", &l3, "--out", &m1]));
    let o = stdout(&fdg(&["classify", "--test", &a2, "--models", &m0, &m1]));
    assert_eq!(value(&o, "class"), "1");
}

#[test]
fn bench_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", "n_fdg = 2\nnt = 4\nnr = 1,2\nnv = 4\nne = 5\nnd = 1\nnl = 0\n");
    let csv = dir.path().join("r.csv");
    let o = stdout(&fdg(&["bench", "--config", &cfg, "--seed", "3", "--reps", "1", "--out", csv.to_str().unwrap()]));
    assert!(o.contains("out = "));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bad_inputs_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.ag", "2\n1 x\n");
    let f = dir.path().join("none.fdg").display().to_string();
    let o = fdg(&["dist", "--ag", &bad, "--fdg", &f]);
    assert!(!o.status.success());
    let cfg = write(dir.path(), "b.cfg", "bogus = 1\n");
    let o = fdg(&["bench", "--config", &cfg, "--out", "x.csv"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}
