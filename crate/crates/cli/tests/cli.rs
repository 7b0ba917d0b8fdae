use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
experiment = "smoke"
seed = 11
[channel]
sigma2 = [1.0, 1.0]
[budget]
gamma = 4.0
lambda = 1.0
max_bands = 1
[code]
n = [8, 16, 24]
messages = 8
[simulation]
strategies = ["none", "waterfill", "tone:1"]
trials = 300
[sweep]
gamma = [0.5, 1.0, 2.0, 4.0]
lambda = [1.0]
"#;

fn fhjam(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhjam"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup(config: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("exp.toml"), config).unwrap();
    dir
}

#[test]
fn simulate_then_plot() {
    // J = 1 cannot waterfill two equal bands, so use J = 2 here
    let dir = setup(&CONFIG.replace("max_bands = 1", "max_bands = 2"));
    let out = fhjam(dir.path(), &["simulate", "--config", "exp.toml", "--out", "res"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/simulate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 3);
    assert!(csv.starts_with("experiment,n,messages,rate,unit,strategy,trials,errors,error,std_error\n"));

    let out = fhjam(dir.path(), &["plot", "res/simulate.csv", "--kind", "error-vs-n"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(dir.path().join("res/simulate.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    let lines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
    assert_eq!(lines, 3, "one line per strategy");

    // same input, same bytes
    let out = fhjam(dir.path(), &["plot", "res/simulate.csv", "--kind", "error-vs-n", "--out", "again.svg"]);
    assert!(out.status.success());
    assert_eq!(svg, std::fs::read_to_string(dir.path().join("again.svg")).unwrap());

    // identical reruns, regardless of thread count
    let out = fhjam(dir.path(), &["simulate", "--config", "exp.toml", "--threads", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), csv);
}

#[test]
fn bounds_and_upper_flag() {
    let dir = setup(CONFIG);
    let out = fhjam(dir.path(), &["bounds", "--config", "exp.toml"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    // Λ = 1 over two unit bands activates both, but J = 1
    assert!(csv.lines().skip(1).all(|l| l.contains("infeasible")));
    let out = fhjam(dir.path(), &["bounds", "--config", "exp.toml", "--upper"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = setup(&CONFIG.replace("max_bands = 1", "max_bands = 2"));
    let out = fhjam(dir.path(), &["bounds", "--config", "exp.toml", "--upper", "--nats", "--out", "."]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",nats")));
    let out = fhjam(dir.path(), &["plot", "bounds.csv", "--kind", "bounds-vs-gamma"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("bounds.svg")).unwrap();
    roxmltree::Document::parse(&svg).expect("well-formed SVG");
}

#[test]
fn waterfill_and_attack() {
    let dir = setup(&CONFIG.replace("gamma = 4.0", "gamma = 1.0"));
    let out = fhjam(dir.path(), &["waterfill", "--config", "exp.toml"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "band,sigma2,jam_power,active,level\n1,1,0.5,true,1.5\n2,1,0.5,true,1.5\n"
    );
    let out = fhjam(dir.path(), &["attack", "--config", "exp.toml", "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn exit_codes() {
    let dir = setup(&CONFIG.replace("max_bands = 1", "max_bands = 7"));
    let out = fhjam(dir.path(), &["bounds", "--config", "exp.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("config:9: `budget.max_bands`"), "{err}");

    let out = fhjam(dir.path(), &["bounds", "--config", "missing.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fhjam(dir.path(), &["bounds"]);
    assert_eq!(out.status.code(), Some(2));

    // mimic needs Γ ≤ Λ
    let dir = setup(&CONFIG.replace("\"none\", \"waterfill\", \"tone:1\"", "\"mimic\""));
    let out = fhjam(dir.path(), &["simulate", "--config", "exp.toml"]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(dir.path().join("bad.csv"), "a,b\n1,2\n").unwrap();
    let out = fhjam(dir.path(), &["plot", "bad.csv", "--kind", "error-vs-n"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing column `n`"));
}

#[test]
fn minimax_smoke() {
    let dir = setup(&format!(
        "{}\n[minimax]\ninput_max = 2.0\ninput_step = 1.0\njam_max = 1.0\njam_step = 1.0\nbin_max = 4.0\nbin_width = 1.0\niterations = 30\n",
        CONFIG.replace("gamma = [0.5, 1.0, 2.0, 4.0]\nlambda = [1.0]\n", "gamma = [1.0]\nlambda = [1.0]\n")
    ));
    let out = fhjam(dir.path(), &["mi", "--config", "exp.toml", "--out", "mi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("mi/mi.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let head = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let get = |k: &str| row[head.iter().position(|h| h == k).unwrap()].to_string();
    let (value, lo, hi): (f64, f64, f64) =
        (get("value").parse().unwrap(), get("min_side").parse().unwrap(), get("sup_side").parse().unwrap());
    assert!(lo <= value && value <= hi);
    assert_eq!(get("cr_upper"), "infeasible");
    assert!(dir.path().join("mi/mi_trace.csv").exists());
}
