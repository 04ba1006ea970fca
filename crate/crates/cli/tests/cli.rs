use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cadorder"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn choose_worked_orderings() {
    let s3 = fixture("s3.smt2");
    let o = run(&["choose", "--heuristic", "gmods", "--input", path_str(&s3)]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().next().unwrap().contains("x3,x1,x2"), "{}", stdout(&o));
    let o = run(&["choose", "--heuristic", "brown", "--input", path_str(&s3)]);
    assert!(stdout(&o).lines().next().unwrap().contains("x3,x2,x1"));
}

#[test]
fn choose_random_is_reproducible() {
    let s3 = fixture("s3.smt2");
    let args = ["choose", "--heuristic", "random", "--seed", "7", "--input", path_str(&s3)];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn choose_formats() {
    let s3 = fixture("s3.smt2");
    let o = run(&["choose", "--heuristic", "mods", "--format", "csv", "--input", path_str(&s3)]);
    let text = stdout(&o);
    assert!(text.starts_with("heuristic,candidate,score,chosen\n"));
    assert!(text.contains("mods,\"x3,x1,x2\",2233,true"), "{text}");
    let o = run(&["choose", "--heuristic", "sotd", "--format", "json", "--input", path_str(&s3)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["choices"][0]["ordering"], "x3,x1,x2");
}

#[test]
fn exit_codes() {
    let s3 = fixture("s3.smt2");
    assert_eq!(run(&["choose", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["choose", "--heuristic", "virtual-best", "--input", path_str(&s3)]).status.code(), Some(1));
    assert_eq!(run(&["choose", "--input", "/nonexistent.smt2"]).status.code(), Some(2));
    let capped = run(&["choose", "--heuristic", "mods", "--max-vars", "2", "--input", path_str(&s3)]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("3! = 6"));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn project_dumps_chain() {
    let s3 = fixture("s3.smt2");
    let o = run(&["project", "--ordering", "x3,x1,x2", "--input", path_str(&s3)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("S2: {x2^3 - x1, x1^4 - x2^3 - x2}"), "{text}");
    assert!(text.contains("S1: {x2, x2^2 + 1, x2^11 - x2^2 - 1}"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 1 (x3)"));

    let uni = run(&["project", "--input", path_str(&fixture("univariate.smt2"))]);
    assert_eq!(stdout(&uni), "ordering: x\nS1: {x^2 - 2}\n");

    let bad = run(&["project", "--ordering", "x3,y,x1", "--input", path_str(&s3)]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown variable `y`"));
}

#[test]
fn evaluate_fixture_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let per = dir.path().join("per.csv");
    let json = dir.path().join("report.json");
    let o = run(&[
        "evaluate",
        "--timings",
        path_str(&fixture("timings.csv")),
        "--choices",
        path_str(&fixture("choices.csv")),
        "--report",
        path_str(&report),
        "--per-problem",
        path_str(&per),
        "--json",
        path_str(&json),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.contains("78.75 (77.00)"), "{table}");
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.contains("virtual-best,with_cost,3,1.0,22.0,0.0,3"), "{csv}");
    assert!(csv.contains("gmods,with_cost,3,0.3333333333333333,78.75,"), "{csv}");
    let per = std::fs::read_to_string(&per).unwrap();
    assert!(per.contains("p2,gmods,\"x1,x2\",61.0,8.0,"), "{per}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["dataset"]["all_timeout"], 1);
    assert_eq!(v["heuristics"][0]["with_cost"]["accuracy"], 1.0);
}

#[test]
fn evaluate_hard_slice() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let o = run(&[
        "evaluate",
        "--timings",
        path_str(&fixture("timings.csv")),
        "--min-optimal-seconds",
        "10",
        "--report",
        path_str(&report),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.contains("virtual-best,with_cost,1,1.0,12.0,0.0,1"), "{csv}");
}

#[test]
fn evaluate_computes_choices_from_problems() {
    let o = run(&[
        "evaluate",
        "--timings",
        path_str(&fixture("problem_timings.csv")),
        "--problems",
        path_str(&fixture("problems")),
        "--heuristic",
        "gmods,brown",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.contains("virtual-best") && table.contains("gmods") && table.contains("brown"), "{table}");

    let orphan = run(&[
        "evaluate",
        "--timings",
        path_str(&fixture("timings.csv")),
        "--problems",
        path_str(&fixture("problems")),
    ]);
    assert_eq!(orphan.status.code(), Some(2));
    let needs = run(&["evaluate", "--timings", path_str(&fixture("timings.csv")), "--heuristic", "gmods"]);
    assert_eq!(needs.status.code(), Some(1));
}

#[test]
fn cluster_reports_statistics() {
    let o = run(&["cluster", "--timings", path_str(&fixture("timings.csv"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "total: 4\nall-timeout: 1\nduplicates: 0\nunique: 3\n");
}

#[test]
fn plots_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        let o = run(&[
            "plot",
            "--kind",
            "survival",
            "--per-problem",
            path_str(&fixture("per_problem.csv")),
            "--output",
            path_str(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let data = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(data.contains("h,1,1\nh,2,3\nh,3,6\n"), "{data}");

    let adv = dir.path().join("adv.svg");
    let o = run(&[
        "plot",
        "--kind",
        "adversarial",
        "--heuristic",
        "h,g",
        "--per-problem",
        path_str(&fixture("per_problem.csv")),
        "--output",
        path_str(&adv),
    ]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&adv).unwrap();
    assert_eq!(svg.matches("class=\"timeout\"").count(), 1);
    let data = std::fs::read_to_string(dir.path().join("adv.csv")).unwrap();
    assert!(data.contains("p4,60,2,true,false"), "{data}");

    let same = dir.path().join("same.svg");
    run(&[
        "plot",
        "--kind",
        "adversarial",
        "--heuristic",
        "g,g",
        "--per-problem",
        path_str(&fixture("per_problem.csv")),
        "--output",
        path_str(&same),
    ]);
    let data = std::fs::read_to_string(dir.path().join("same.csv")).unwrap();
    assert!(data.lines().skip(1).all(|l| {
        let f: Vec<&str> = l.split(',').collect();
        f[1] == f[2]
    }));

    let unknown = run(&["plot", "--kind", "pie", "--per-problem", "x", "--output", "y"]);
    assert_eq!(unknown.status.code(), Some(1));
}
