use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ramsey-allee");

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const HEADER: &str = "t,k,c,L,n,x,z,k_lower,k_upper,c_lower,c_upper,savings_rate";

#[test]
fn simulate_writes_a_full_precision_table_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("ces_allee.conf");
    let a = run(&["simulate", "--t-end", "500", "--svg"], &config, dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let first = fs::read(dir.path().join("trajectory.csv")).unwrap();
    assert!(dir.path().join("trajectory.svg").exists());

    let text = String::from_utf8(first.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let mut rows = 0;
    let mut last_t = f64::NEG_INFINITY;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 12, "{line}");
        for cell in &cells {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{cell}");
            cell.parse::<f64>().unwrap();
        }
        let t: f64 = cells[0].parse().unwrap();
        assert!(t > last_t);
        last_t = t;
        rows += 1;
    }
    assert!(rows > 10);
    assert_eq!(last_t, 500.0);
    assert!(!text.contains('\r'));

    let b = run(&["simulate", "--t-end", "500", "--svg"], &config, dir.path());
    assert!(b.status.success());
    assert_eq!(fs::read(dir.path().join("trajectory.csv")).unwrap(), first);
}

#[test]
fn empty_horizon_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", "--t-end", "0"], &configs().join("ces_allee.conf"), dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(text, format!("{HEADER}\n"));
}

#[test]
fn steady_state_reports_delta_x() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["steady-state"], &configs().join("log_high_depreciation.conf"), dir.path());
    assert!(o.status.success());
    let table = fs::read_to_string(dir.path().join("steady_state.csv")).unwrap();
    let row = table.lines().find(|l| l.starts_with("D_x,")).expect("D_x row");
    let value: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((value - 0.107669).abs() < 1e-4, "{value}");
    assert!(stdout(&o).contains("D_x = 0.1076"));
}

#[test]
fn bounds_reports_zero_violations() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bounds", "--t-end", "1000"], &configs().join("ces_allee.conf"), dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("capital sandwich violations: 0"), "{}", stdout(&o));
    assert!(dir.path().join("bounds.csv").exists());
}

#[test]
fn shoot_prints_initial_consumption() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["shoot", "--t-end", "100"], &configs().join("ces_allee.conf"), dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let c0: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("c0 = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((c0 - 1.3589).abs() < 1e-3, "{c0}");
}

#[test]
fn reproduce_figures_flags_the_blow_up() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce-figures", "--svg"], &configs().join("ces_allee.conf"), dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["figure1.csv", "figure2.csv", "figure3.csv", "figure1.svg", "figure2.svg", "figure3.svg"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let fig1 = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    assert_eq!(fig1.lines().next(), Some("t,k_L0_0.5,k_L0_1.5"));
    let fig3 = fs::read_to_string(dir.path().join("figure3.csv")).unwrap();
    assert_eq!(fig3.lines().next(), Some(HEADER));
    assert!(fig3.lines().last().unwrap().starts_with("# partial: blow_up at t="));
}

#[test]
fn sweep_rows_follow_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep"], &configs().join("sweep_rate.conf"), dir.path());
    assert!(o.status.success());
    let table = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with("population.r,population.l0,k_inf,"));
    let keys: Vec<(f64, f64)> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[1].parse().unwrap())
        })
        .collect();
    let mut expected = Vec::new();
    for r in [0.01, 0.025, 0.05] {
        for l0 in [0.5, 1.5, 3.0] {
            expected.push((r, l0));
        }
    }
    assert_eq!(keys, expected);
    let again = run(&["sweep"], &configs().join("sweep_rate.conf"), dir.path());
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), table);
}

#[test]
fn bad_config_names_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    let text = fs::read_to_string(configs().join("ces_allee.conf"))
        .unwrap()
        .replace("production.tau = 0.01", "production.tau = 0");
    fs::write(&path, text).unwrap();
    let o = run(&["simulate"], &path, dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("production.tau") && err.contains("line 4"), "{err}");

    fs::write(&path, "production.kind = log\nsolver.colour = blue\n").unwrap();
    let o = run(&["simulate"], &path, dir.path());
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("solver.colour") && err.contains("unknown key"), "{err}");
}

#[test]
fn unstable_regime_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unstable.conf");
    let text = fs::read_to_string(configs().join("ces_allee.conf"))
        .unwrap()
        .replace("population.r = 0.025", "population.r = 0.085");
    fs::write(&path, text).unwrap();
    let o = run(&["shoot"], &path, dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no saddle path"));
}
