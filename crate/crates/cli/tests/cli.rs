use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lame-bethe"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], threads: &str) -> Output {
    bin().args(args).env("LAME_BETHE_THREADS", threads).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

/// Classical data: rows `(0, -m_s)` at real points.
fn classical(z: &[f64], m: &[f64], l: usize) -> String {
    let zs: Vec<String> = z.iter().map(|x| format!("[{x},0]")).collect();
    let ms: Vec<String> = m.iter().map(|x| format!("[[0,0],[{},0]]", -x)).collect();
    format!(r#"{{"r":1,"z":[{}],"m":[{}],"l":[{l}]}}"#, zs.join(","), ms.join(","))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn count_examples() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "n3l2.json", &classical(&[-1.0, 0.0, 1.0], &[-1.0, -1.0, -1.0], 2));
    let out = run(&["count", "--input", &ws]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["d"], 3);

    let ws0 = write(&dir, "l0.json", &classical(&[-1.0, 0.0, 1.0], &[-1.0, -1.0, -1.0], 0));
    assert_eq!(json(&run(&["count", "--input", &ws0]))["d"], 1);

    // highest weights 1, 1, 1 and l = 1
    let sl2 = write(&dir, "sl2.json", r#"{"r":1,"z":[[0,0],[1,0],[2,0]],"m":[[[1,0],[0,0]],[[1,0],[0,0]],[[1,0],[0,0]]],"l":[1]}"#);
    let v = json(&run(&["count", "--input", &sl2]));
    assert_eq!(v["d"], 2);
    assert_eq!(v["sl2_delta"], 2);

    let csv = run(&["count", "--input", &ws, "--csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "d,separating,sl2_delta\n3,true,\n");
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let non_adm = write(
        &dir,
        "na.json",
        r#"{"r":1,"z":[[1,0],[-1,0]],"m":[[[0,0],[1,0]],[[0,0],[1,0]]],"m_inf":[[-1.5,0],[3.5,0]]}"#,
    );
    assert_eq!(code(&run(&["count", "--input", &non_adm])), 2);
    let broken = write(&dir, "broken.json", "{not json");
    assert_eq!(code(&run(&["count", "--input", &broken])), 2);
    let dup = write(&dir, "dup.json", r#"{"r":1,"z":[[1,0],[1,0]],"m":[[[0,0],[1,0]],[[0,0],[1,0]]],"l":[1]}"#);
    assert_eq!(code(&run(&["solve", "--input", &dup])), 2);
    assert_eq!(code(&run(&["count", "--input", "/nonexistent/ws.json"])), 2);
    assert_eq!(code(&run(&["count"])), 2);
    let ok = write(&dir, "ok.json", &classical(&[1.0, -1.0], &[-1.0, -1.0], 1));
    assert_eq!(code(&run(&["count", "--input", &ok, "--caps", "bogus=3"])), 2);
    assert_eq!(code(&run(&["count", "--input", &ok, "--tol", "-1"])), 2);
}

#[test]
fn resource_limit_exit_4() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.json", &classical(&[-1.0, 0.0, 1.0], &[-1.0, -1.0, -1.0], 2));
    let out = run(&["solve", "--input", &ws, "--real-classical", "--caps", "compositions=1"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solve_l0_gives_one_empty_orbit() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.json", &classical(&[-1.0, 1.0], &[-1.0, -1.0], 0));
    let v = json(&run(&["solve", "--input", &ws]));
    let orbits = v["result"]["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits[0]["coords"], serde_json::json!([[]]));
}

#[test]
fn classical_jacobi_van_vleck_constants() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (1.0, 2.5);
    for l in 1..=4usize {
        let ws = write(&dir, &format!("j{l}.json"), &classical(&[1.0, -1.0], &[-(a + 1.0), -(b + 1.0)], l));
        let out = run(&["classical", "--input", &ws]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["found"], 1);
        assert_eq!(v["expected_count"], 1);
        assert!(v["normalization"].as_str().unwrap().contains("monic"));
        let h = v["orbits"][0]["van_vleck"]["h"][0][0].as_f64().unwrap();
        let lf = l as f64;
        assert!((h + lf * (lf + a + b + 1.0)).abs() < 1e-9, "l={l}: {h}");
    }
    let ws = write(&dir, "csv.json", &classical(&[1.0, -1.0], &[-1.0, -1.0], 2));
    let csv = String::from_utf8(run(&["classical", "--input", &ws, "--csv"]).stdout).unwrap();
    assert!(csv.starts_with("# F = prod_s (x - z_s) is monic"));
    assert_eq!(csv.lines().count(), 3);
}

fn orbit_files(dir: &TempDir, ws: &str) -> (String, String) {
    let v = json(&run(&["solve", "--input", ws, "--real-classical"]));
    let orbit = v["result"]["orbits"][0].clone();
    let good = write(dir, "good.json", &orbit.to_string());
    let mut bad = orbit;
    let x = bad["coords"][0][0][0].as_f64().unwrap();
    bad["coords"][0][0][0] = Value::from(x + 1e-2);
    (good, write(dir, "bad.json", &bad.to_string()))
}

#[test]
fn verify_good_and_tampered() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.json", &classical(&[-1.0, 0.0, 2.0], &[-1.5, -1.0, -2.0], 2));
    let (good, bad) = orbit_files(&dir, &ws);
    for level in ["all", "flag", "tilde", "exponents"] {
        let out = run(&["verify", "--input", &ws, "--orbit", &good, "--level", level]);
        assert_eq!(code(&out), 0, "{level}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["passed"], true);
    }
    let out = run(&["verify", "--input", &ws, "--orbit", &bad]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not critical"));
    assert_eq!(code(&run(&["verify", "--input", &ws, "--orbit", &good, "--level", "nope"])), 2);
}

fn strip_timing(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

fn bytes_without_timing(out: &Output) -> Vec<u8> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).collect::<Vec<_>>().join("\n").into_bytes()
}

#[test]
fn fixed_seed_runs_are_identical() {
    let dir = TempDir::new().unwrap();
    let ws = write(
        &dir,
        "r2.json",
        r#"{"r":2,"z":[[0,0],[1,0],[-0.5,0.7]],"m":[[[1,0],[0,0],[0,0]],[[1,0],[0,0],[0,0]],[[0,0],[0,0],[-1,0]]],"l":[1,1]}"#,
    );
    let args = ["solve", "--input", ws.as_str(), "--seed", "11", "--starts", "200"];
    let a = run_env(&args, "1");
    let b = run_env(&args, "4");
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(strip_timing(&a), strip_timing(&b));
    assert_eq!(bytes_without_timing(&a), bytes_without_timing(&b));
    // the report carries everything needed to rerun it
    let v = strip_timing(&a);
    assert_eq!(v["seed"], 11);
    let echoed = write(&dir, "echo.json", &v["ws"].to_string());
    let c = run_env(&["solve", "--input", &echoed, "--seed", "11", "--starts", "200"], "2");
    assert_eq!(strip_timing(&c), v);

    let csv1 = run(&["solve", "--input", &ws, "--seed", "5", "--starts", "100", "--csv"]);
    let csv2 = run(&["solve", "--input", &ws, "--seed", "5", "--starts", "100", "--csv"]);
    assert_eq!(csv1.stdout, csv2.stdout);
}

#[test]
fn bad_thread_variable_is_rejected() {
    let dir = TempDir::new().unwrap();
    let ws = write(&dir, "ws.json", &classical(&[1.0, -1.0], &[-1.0, -1.0], 1));
    assert_eq!(code(&run_env(&["count", "--input", &ws], "many")), 2);
}
