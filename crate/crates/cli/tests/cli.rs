use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("spawn qwalk")
}

fn ok(args: &[&str]) -> String {
    let out = qwalk(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qwalk(args).status.code().expect("exit code")
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const BELL: [&str; 10] = [
    "--init", "psi1", "--eta", "0.25", "--phi", "0", "--theta", "0.25", "--gamma", "0.25",
];

#[test]
fn run_writes_one_symmetric_row_per_step() {
    let mut args = vec!["run", "--pi-units", "--steps", "50"];
    args.extend(BELL);
    let (header, rows) = read_csv(&ok(&args));
    assert_eq!(rows.len(), 51);
    let last = &rows[50];
    for x in 1..=50 {
        let l: f64 = last[column(&header, &format!("p({})", -x))]
            .parse()
            .unwrap();
        let r: f64 = last[column(&header, &format!("p({x})"))].parse().unwrap();
        assert!((l - r).abs() < 1e-12, "x = {x}: {l} vs {r}");
    }
}

#[test]
fn self_trapped_run_stays_at_origin() {
    let (header, rows) = read_csv(&ok(&[
        "run", "--init", "psi2", "--alpha", "0", "--theta", "0", "--gamma", "0", "--steps", "20",
    ]));
    assert_eq!(rows.len(), 21);
    let p0 = column(&header, "p(0)");
    for row in &rows {
        assert_eq!(row[p0].parse::<f64>().unwrap(), 1.0);
        assert_eq!(
            row[column(&header, "variance")].parse::<f64>().unwrap(),
            0.0
        );
    }
}

#[test]
fn invalid_input_exit_codes() {
    assert_eq!(code(&["run", "--steps", "-1"]), 2);
    assert_eq!(code(&["run", "--steps", "ten"]), 2);
    assert_eq!(code(&["run", "--eta", "2"]), 2);
    assert_eq!(
        code(&["run", "--eta", "2", "--allow-any-angle", "--steps", "3"]),
        0
    );
    assert_eq!(code(&["run", "--init", "psi4"]), 2);
    assert_eq!(code(&["run", "--bogus"]), 2);
    assert_eq!(code(&["sweep", "--eta", "0:1:0"]), 2);
    assert_eq!(code(&["sweep", "--theta", ""]), 2);
    assert_eq!(
        code(&["sweep", "--eta", "0:1:1001", "--theta", "0:1:1000"]),
        4
    );
    assert_eq!(code(&["run", "--steps", "10001"]), 4);
    assert_eq!(code(&["run", "--theta", "0.1,0.2"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn limit_rejects_degenerate_angles() {
    assert_eq!(code(&["limit", "--theta", "0"]), 3);
    assert_eq!(code(&["limit", "--theta", "0.5", "--pi-units"]), 3);
    assert_eq!(code(&["limit", "--theta", "0.3", "--gamma", "0.4"]), 2);
}

#[test]
fn limit_matches_closed_form_at_origin() {
    let (header, rows) = read_csv(&ok(&[
        "limit", "--theta", "0.7854", "--init", "psi1", "--eta", "0.7854", "--phi", "0",
    ]));
    assert_eq!(rows.len(), 41);
    let row = rows
        .iter()
        .find(|r| r[column(&header, "x")] == "0")
        .unwrap();
    let p0: f64 = row[column(&header, "p")].parse().unwrap();
    assert!((p0 - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-4, "p0 = {p0}");
}

#[test]
fn compare_converges_at_origin() {
    let (header, rows) = read_csv(&ok(&[
        "compare", "--steps", "200", "--theta", "0.7854", "--init", "psi1", "--eta", "0.7854",
        "--phi", "0",
    ]));
    let row = rows
        .iter()
        .find(|r| r[column(&header, "x")] == "0")
        .unwrap();
    let dev: f64 = row[column(&header, "dev_avg_analytic")].parse().unwrap();
    assert!(dev < 1e-2, "dev = {dev}");
    let fourier: f64 = row[column(&header, "dev_fourier_simulated")]
        .parse()
        .unwrap();
    assert!(fourier < 1e-10);
}

#[test]
fn classify_suite_matches_every_probe() {
    let (header, rows) = read_csv(&ok(&["classify", "--suite", "tables"]));
    assert_eq!(rows.len(), 32);
    let m = column(&header, "match");
    let misses: Vec<_> = rows.iter().filter(|r| r[m] != "true").collect();
    assert!(misses.is_empty(), "{misses:?}");
}

#[test]
fn sweep_is_identical_across_worker_counts() {
    let dir = TempDir::new().unwrap();
    let grid = [
        "sweep",
        "--pi-units",
        "--eta",
        "0:0.5:5",
        "--theta",
        "0:0.5:4",
        "--steps",
        "8,10",
    ];
    let mut texts = Vec::new();
    for w in ["1", "3", "8"] {
        let out = dir.path().join(format!("w{w}.csv"));
        let mut args = grid.to_vec();
        args.extend(["--workers", w, "--output", path_str(&out)]);
        ok(&args);
        let data = std::fs::read(&out).unwrap();
        let side = std::fs::read(dir.path().join(format!("w{w}.csv.config.toml"))).unwrap();
        texts.push((data, side));
    }
    assert!(texts.windows(2).all(|p| p[0] == p[1]));
    let (_, rows) = read_csv(std::str::from_utf8(&texts[0].0).unwrap());
    assert_eq!(rows.len(), 5 * 4 * 2);
}

#[test]
fn csv_and_json_decode_to_equal_values() {
    let mut args = vec![
        "sweep",
        "--pi-units",
        "--eta",
        "0,0.125,0.25",
        "--steps",
        "3,7",
    ];
    args.extend(["--theta", "0.2"]);
    let (header, rows) = read_csv(&ok(&args));
    args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&ok(&args)).unwrap();
    let objs = json.as_array().unwrap();
    assert_eq!(objs.len(), rows.len());
    for (row, obj) in rows.iter().zip(objs) {
        let obj = obj.as_object().unwrap();
        assert_eq!(obj.len(), header.len());
        for (name, cell) in header.iter().zip(row) {
            let v = &obj[name.as_str()];
            match v {
                serde_json::Value::String(s) => assert_eq!(s, cell),
                serde_json::Value::Number(n) if n.is_i64() => assert_eq!(n.to_string(), *cell),
                serde_json::Value::Number(n) => {
                    assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap())
                }
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn single_point_sweep_equals_run() {
    let point = [
        "--init", "psi3", "--eta", "0.3", "--alpha", "0.6", "--beta", "0.9", "--phi", "0.4",
        "--theta", "0.7", "--gamma", "0.2",
    ];
    let mut run = vec!["run", "--steps", "12"];
    run.extend(point);
    let (rh, rrows) = read_csv(&ok(&run));
    let mut sweep = vec!["sweep", "--steps", "12"];
    sweep.extend(point);
    let (sh, srows) = read_csv(&ok(&sweep));
    assert_eq!(srows.len(), 1);
    for name in [
        "variance",
        "shannon_entropy",
        "von_neumann_entropy",
        "class",
    ] {
        assert_eq!(
            rrows[12][column(&rh, name)],
            srows[0][column(&sh, name)],
            "{name}"
        );
    }
    let mut entropy = vec!["entropy", "--steps", "12"];
    entropy.extend(point);
    let (eh, erows) = read_csv(&ok(&entropy));
    assert!(!eh.contains(&"variance".to_string()));
    assert_eq!(
        erows[0][column(&eh, "shannon_entropy")],
        srows[0][column(&sh, "shannon_entropy")]
    );
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("walk.toml");
    std::fs::write(
        &cfg,
        "init = \"psi2\"\nalpha = 0.0\ntheta = 0.0\nsteps = 4\nformat = \"json\"\n",
    )
    .unwrap();
    let from_file: serde_json::Value =
        serde_json::from_str(&ok(&["run", "--config", path_str(&cfg)])).unwrap();
    assert_eq!(from_file.as_array().unwrap().len(), 5);
    assert_eq!(from_file[4]["p(0)"].as_f64().unwrap(), 1.0);

    let out = ok(&[
        "run",
        "--config",
        path_str(&cfg),
        "--steps",
        "2",
        "--format",
        "csv",
    ]);
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(
        code(&[
            "run",
            "--config",
            path_str(&dir.path().join("missing.toml"))
        ]),
        1
    );
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&["run", "--config", path_str(&cfg)]), 2);
}

#[test]
fn sidecar_reproduces_the_output() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("a.csv");
    ok(&[
        "sweep",
        "--pi-units",
        "--eta",
        "0:0.5:3",
        "--steps",
        "5,9",
        "--init",
        "psi2",
        "--output",
        path_str(&first),
    ]);
    let side = dir.path().join("a.csv.config.toml");
    let second = dir.path().join("b.csv");
    ok(&[
        "sweep",
        "--config",
        path_str(&side),
        "--output",
        path_str(&second),
    ]);
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn record_states_writes_amplitudes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run.csv");
    ok(&[
        "run",
        "--steps",
        "3",
        "--record-states",
        "--output",
        path_str(&out),
    ]);
    let text = std::fs::read_to_string(dir.path().join("run.states.csv")).unwrap();
    let (header, rows) = read_csv(&text);
    assert_eq!(header, ["step", "x", "coin", "re", "im"]);
    // sites 1 + 3 + 5 + 7, four amplitudes each
    assert_eq!(rows.len(), 4 * 16);
    let norm: f64 = rows
        .iter()
        .filter(|r| r[0] == "3")
        .map(|r| r[3].parse::<f64>().unwrap().powi(2) + r[4].parse::<f64>().unwrap().powi(2))
        .sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert_eq!(code(&["run", "--record-states"]), 2);
}
