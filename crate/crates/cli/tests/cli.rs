use std::path::Path;
use std::process::{Command, Output};

use chkp_core::functionals::FunctionalReport;
use chkp_core::puiseux::PuiseuxReport;
use chkp_core::specdisc::SpectrumReport;
use tempfile::TempDir;

fn chkp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chkp"))
        .args(args)
        .current_dir(dir)
        .env_remove("CHKP_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn figure1_svg() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "figure1", "--k", "1", "--c", "4", "--eta", "0.01", "--nu", "0.1", "--out", "fig1.svg",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("figure1: max Re = -"), "{line}");
    assert_eq!(line.lines().count(), 1);
    let svg = read(dir.path(), "fig1.svg");
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polyline"));
}

#[test]
fn puiseux_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &["puiseux", "--k", "1", "--c", "4", "--out", "p.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: PuiseuxReport = serde_json::from_str(&read(dir.path(), "p.json")).unwrap();
    assert!((report.lambda1_sq + 1.1405).abs() < 1e-4);
    assert!((report.lambda2 + 2.0613).abs() < 1e-4);
}

#[test]
fn existence_boundary_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = chkp(dir.path(), &["puiseux", "--k", "1", "--c", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("c > 3k"), "{}", stderr(&o));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn validation_errors_are_aggregated() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &["profile", "--k", "-1", "--c", "x", "--n-x", "3"],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(
        err.contains("k: must be positive")
            && err.contains("not a finite number")
            && err.contains("n-x")
    );
}

#[test]
fn module_error_exits_with_one() {
    let dir = TempDir::new().unwrap();
    // The default ξ grid is odd-sized and hits ξ = 0, where the symbol is
    // singular for ν = 0 and η ≠ 0.
    let o = chkp(
        dir.path(),
        &[
            "figure1", "--k", "1", "--c", "4", "--eta", "0.01", "--nu", "0",
        ],
    );
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn puiseux_speed_sweep() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "sweep", "puiseux", "--k", "1", "--c", "3.1:6:30", "--out", "s.csv", "--jobs", "3",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "sweep puiseux: 30 rows -> s.csv");
    let csv = read(dir.path(), "s.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("c,lambda1_sq,lambda2,asym_lambda1_sq,asym_2lambda2")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 30);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(rows.iter().all(|r| r[1] < 0.0 && r[2] < 0.0));
    assert!(!csv.contains('\r'));
}

#[test]
fn empty_range_rejected() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &["sweep", "puiseux", "--k", "1", "--c", "3.1:6:0"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn two_ranges_rejected() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "sweep", "symbol", "--k", "1", "--c", "3.5:4:3", "--nu", "0.1", "--eta", "0:1:3",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at most one"));
}

#[test]
fn ranges_only_in_sweep() {
    let dir = TempDir::new().unwrap();
    let o = chkp(dir.path(), &["puiseux", "--k", "1", "--c", "3.5:4:3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eta_sweep_of_track() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "sweep",
            "track",
            "--k",
            "1",
            "--c",
            "3.5",
            "--nu-frac",
            "0.3",
            "--eta",
            "0:0.01:6",
            "--n-modes",
            "256",
            "--out",
            "t.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(dir.path(), "t.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("c,nu,eta,re_meas,im_meas,re_pred,im_pred,dist")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0][3].abs() < 1e-6 && rows[0][4].abs() < 1e-6);
    for w in rows.windows(2) {
        assert!(w[1][4].abs() > w[0][4].abs());
        assert!(w[1][3] < w[0][3]);
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    for out in ["a.csv", "b.csv"] {
        let o = chkp(
            dir.path(),
            &[
                "sweep", "symbol", "--k", "1", "--c", "3.2:5:4", "--nu", "0.1", "--eta", "0.05",
                "--out", out,
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(read(dir.path(), "a.csv"), read(dir.path(), "b.csv"));
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "stray files left behind: {names:?}");
}

#[test]
fn config_file_with_override() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("run.conf"),
        "# wave\nk = 1\nc = 3.5\nout = from_file.json\n",
    )
    .unwrap();
    let o = chkp(dir.path(), &["puiseux", "--config", "run.conf", "--c", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: PuiseuxReport = serde_json::from_str(&read(dir.path(), "from_file.json")).unwrap();
    assert_eq!(report.c, 4.0);

    std::fs::write(dir.path().join("bad.conf"), "k = 1\nspeed = 4\n").unwrap();
    let o = chkp(dir.path(), &["puiseux", "--config", "bad.conf"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("unknown key speed") && err.contains("c: required"),
        "{err}"
    );
}

#[test]
fn jobs_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_chkp"))
        .args(["sweep", "puiseux", "--k", "1", "--c", "3.5:4:2"])
        .current_dir(dir.path())
        .env("CHKP_JOBS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("jobs"));
}

#[test]
fn functionals_json_has_both_methods() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "functionals",
            "--k",
            "1",
            "--c",
            "4",
            "--format",
            "json",
            "--out",
            "f.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let reports: Vec<FunctionalReport> = serde_json::from_str(&read(dir.path(), "f.json")).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(((reports[0].mass - reports[1].mass) / reports[0].mass).abs() < 1e-8);
}

#[test]
fn profile_csv_columns() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &["profile", "--k", "1", "--c", "4", "--n-x", "512"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(dir.path(), "profile.csv");
    assert!(csv.starts_with("x,psi,dpsi,ddpsi,dcpsi,dcmu\n"));
    assert_eq!(csv.lines().count(), 513);
}

#[test]
fn eigs_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "eigs",
            "--k",
            "1",
            "--c",
            "3.5",
            "--nu-frac",
            "0.3",
            "--eta",
            "0.005",
            "--n-modes",
            "128",
            "--out",
            "e.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: SpectrumReport = serde_json::from_str(&read(dir.path(), "e.json")).unwrap();
    assert_eq!(report.eigenvalues.len(), 128);
    assert!(report.resonance_pair.is_some());
    assert!(stdout(&o).contains("lambda+ = -"));
}

#[test]
fn eigs_rejects_singular_mode() {
    let dir = TempDir::new().unwrap();
    let o = chkp(
        dir.path(),
        &[
            "eigs", "--k", "1", "--c", "3.5", "--nu", "0", "--eta", "0.01",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}
