use std::process::{Command, Output};

fn slcoll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slcoll")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn list_shows_nine_problems() {
    let out = slcoll(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().next().unwrap().starts_with("legendre"));
}

#[test]
fn solve_nasty() {
    let v = json(&slcoll(&["solve", "nasty", "--n", "512", "--count", "24"]));
    let ev = v["eigenvalues"].as_array().unwrap();
    assert!((ev[0].as_f64().unwrap() - 1.1248168).abs() < 1e-6);
    assert!((ev[23].as_f64().unwrap() - 355.7030).abs() < 1e-3);
    assert_eq!(v["plan"]["n"], 512);
    assert_eq!(v["pencil_size"], 510);
}

#[test]
fn solve_is_deterministic_apart_from_timestamp() {
    let run = || {
        let mut v = json(&slcoll(&["solve", "legendre", "--n", "48", "--count", "5"]));
        v.as_object_mut().unwrap().remove("created_unix");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn drift_fokker_planck_lengths() {
    let v = json(&slcoll(&[
        "drift", "fokker_planck", "--alpha", "length", "--values", "4,10", "--threshold", "1e-11",
    ]));
    let good: Vec<u64> = v["drift"]["good_indices"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    for j in 2..32 {
        assert!(good.contains(&j), "index {j} missing from {good:?}");
    }
}

#[test]
fn drift_in_n() {
    let v = json(&slcoll(&["drift", "legendre", "--alpha", "n", "--values", "64,96", "--count", "8"]));
    assert_eq!(v["drift"]["alpha_name"], "n");
    assert_eq!(v["drift"]["drifts"].as_array().unwrap().len(), 8);
}

#[test]
fn csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let decay = dir.path().join("decay.csv");
    let out = slcoll(&[
        "solve", "rod", "--n", "100", "--count", "4", "--format", "csv", "--decay-csv", decay.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("index,eigenvalue,residual_imag\n"));
    assert_eq!(std::fs::read_to_string(&decay).unwrap().lines().count(), 401);
}

#[test]
fn sweep_reports_tracks() {
    let v = json(&slcoll(&[
        "sweep", "bessel_generalized", "--tau-grid", "-0.2,0.2,5", "--nu", "0.3333333333333333", "--n", "128",
    ]));
    let s = &v["sweep"];
    assert_eq!(s["grid"].as_array().unwrap().len(), 5);
    assert_eq!(s["tracks"].as_array().unwrap().len(), 4);
    assert!(s["min_gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn bench_single_case() {
    let out = slcoll(&["bench", "--filter", "legendre"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS legendre"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(slcoll(&["solve", "nope"]).status.code(), Some(2));
    assert_eq!(slcoll(&["solve", "legendre", "--bogus"]).status.code(), Some(2));
    assert_eq!(slcoll(&["solve", "legendre", "--eps", "0.1"]).status.code(), Some(2));
    assert_eq!(slcoll(&["solve", "legendre", "--h", "0.1"]).status.code(), Some(2));
    assert_eq!(slcoll(&["drift", "nasty", "--alpha", "length", "--values", "3,4"]).status.code(), Some(2));
    assert_eq!(slcoll(&["sweep", "legendre", "--tau-grid", "0,1,3"]).status.code(), Some(2));
    assert_eq!(slcoll(&["bench", "--filter", "nothing-matches"]).status.code(), Some(2));
    assert_eq!(slcoll(&[]).status.code(), Some(2));
}

#[test]
fn domain_override_retruncates() {
    let v = json(&slcoll(&["solve", "fokker_planck", "--n", "256", "--domain", "-6,6", "--count", "3"]));
    assert_eq!(v["bc_left"], "u(-6) = 0");
    assert_eq!(v["plan"]["domain"][1], 6.0);
    assert!((v["eigenvalues"][1].as_f64().unwrap() - 1.368592520979542).abs() < 1e-8);
}
