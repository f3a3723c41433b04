use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    output: Output,
    dir: TempDir,
}

impl Run {
    fn code(&self) -> i32 {
        self.output.status.code().expect("exit code")
    }

    fn stdout(&self) -> String {
        String::from_utf8_lossy(&self.output.stdout).into_owned()
    }

    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.output.stderr).into_owned()
    }

    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.out().join(name)).unwrap()
    }

    fn table(&self, name: &str) -> Vec<Vec<f64>> {
        self.read(name)
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    }
}

fn auxtherm(command: &str, config: &str, extra: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, config).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_auxtherm"))
        .arg(command)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(extra)
        .output()
        .unwrap();
    Run { output, dir }
}

const MEDIUM: &str = "[medium]\nn_atoms = 100\nvolume = 50.0\n";

fn no_files(dir: &Path) -> bool {
    !dir.exists() || std::fs::read_dir(dir).unwrap().next().is_none()
}

#[test]
fn poles_single_yukawa_matches_hand_formulas() {
    let run = auxtherm(
        "poles",
        &format!("{MEDIUM}[potential]\npoles = [[1.5, 0.02]]\n"),
        &[],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let csv = run.read("poles.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,mu,kappa,gamma,sign,T_s,alpha,T_crit"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(lines.next().is_none());
    let n = 100.0 / 50.0;
    let gamma2 = 4.0 * PI * 0.02;
    let alpha: f64 = row[6].parse().unwrap();
    let t_crit: f64 = row[7].parse().unwrap();
    assert!((alpha / (n * gamma2 / (2.0 * 1.5f64.powi(3))) - 1.0).abs() < 1e-14);
    assert!((t_crit / (n * gamma2 / (2.0 * 1.5 * 1.5)) - 1.0).abs() < 1e-14);
    assert_eq!(row[4], "repulsive");
    assert!(run.stdout().contains("global threshold"));
}

#[test]
fn poles_rows_sorted_by_mass() {
    let run = auxtherm(
        "poles",
        &format!("{MEDIUM}[potential]\npoles = [[3.0, 0.1], [0.5, -0.2]]\n"),
        &[],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let mus: Vec<String> = run
        .read("poles.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(mus, ["0.5", "3.0"]);
}

#[test]
fn empty_channel_list_is_a_config_error() {
    let run = auxtherm("poles", &format!("{MEDIUM}[potential]\npoles = []\n"), &[]);
    assert_eq!(run.code(), 2);
    let run = auxtherm("poles", MEDIUM, &[]);
    assert_eq!(run.code(), 2);
}

#[test]
fn unknown_key_is_named() {
    let run = auxtherm("poles", &format!("{MEDIUM}volumee = 3.0\n"), &[]);
    assert_eq!(run.code(), 2);
    assert!(run.stderr().contains("volumee"), "{}", run.stderr());
}

#[test]
fn missing_config_file_is_a_config_error() {
    let output = Command::new(env!("CARGO_BIN_EXE_auxtherm"))
        .args(["poles", "--config", "/nonexistent/run.toml"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn fcurve_free_field_rises_toward_one() {
    let run = auxtherm(
        "fcurve",
        "[fcurve]\nalpha = 0.0\ntau = [100.0, 1.0, 10.0]\n",
        &[],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    assert!(run.read("fcurve.csv").starts_with("tau,f,f2\n"));
    let rows = run.table("fcurve.csv");
    assert_eq!(rows.len(), 3);
    assert_eq!([rows[0][0], rows[1][0], rows[2][0]], [1.0, 10.0, 100.0]);
    assert!(rows[0][1] < rows[1][1] && rows[1][1] < rows[2][1]);
    assert!(rows[2][1] < 1.0 && rows[2][1] > 0.999);
}

#[test]
fn fcurve_output_is_deterministic() {
    let cfg = "[fcurve]\nalpha = 0.5\ntau = { from = 0.6, to = 5.0, points = 25 }\n";
    let a = auxtherm("fcurve", cfg, &[]);
    let b = auxtherm("fcurve", cfg, &[]);
    assert_eq!(a.code(), 0);
    assert_eq!(
        a.read("fcurve.csv").as_bytes(),
        b.read("fcurve.csv").as_bytes()
    );
}

#[test]
fn fcurve_rejects_points_below_alpha_before_writing() {
    let run = auxtherm(
        "fcurve",
        "[fcurve]\nalpha = 0.5\ntau = [0.4, 1.0, 2.0]\n",
        &[],
    );
    assert_eq!(run.code(), 3);
    assert!(run.stderr().contains("0.4"), "{}", run.stderr());
    assert!(no_files(&run.out()));
}

#[test]
fn fcurve_alpha_from_single_channel() {
    let cfg = format!("{MEDIUM}[[channel]]\nmu = 1.0\ngamma = 0.5\n[fcurve]\ntau = [2.0]\n");
    let run = auxtherm("fcurve", &cfg, &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
}

fn heatcap_config(channels: &str, temps: &str) -> String {
    format!("{MEDIUM}{channels}[heatcap]\ntemperature = {temps}\n")
}

const FREE: &str = "[[channel]]\nmu = 1.0\ngamma = 0.0\n";
const COUPLED: &str = "[[channel]]\nmu = 1.0\ngamma = 0.6\n";

#[test]
fn heatcap_free_field_follows_t_cubed() {
    let temps = "{ from = 100.0, to = 1000.0, points = 10, spacing = \"log\" }";
    let run = auxtherm("heatcap", &heatcap_config(FREE, temps), &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    assert!(run
        .read("heatcap_channel_0.csv")
        .starts_with("T,tau,W,Cv\n"));
    let rows = run.table("heatcap_channel_0.csv");
    let ratios: Vec<f64> = rows.iter().map(|r| r[3] / r[0].powi(3)).collect();
    let top = ratios[ratios.len() - 1];
    for r in &ratios {
        assert!((r / top - 1.0).abs() < 1e-3, "{ratios:?}");
    }
}

#[test]
fn heatcap_totals_add_channels() {
    let temps = "[3.0, 5.0, 9.0]";
    let single = auxtherm("heatcap", &heatcap_config(COUPLED, temps), &[]);
    let double = auxtherm(
        "heatcap",
        &heatcap_config(&format!("{COUPLED}{COUPLED}"), temps),
        &[],
    );
    assert_eq!(double.code(), 0, "{}", double.stderr());
    let one = single.table("heatcap_channel_0.csv");
    let total = double.table("heatcap_total.csv");
    for (a, b) in one.iter().zip(&total) {
        assert_eq!(a[0], b[0]);
        assert!((b[1] / (2.0 * a[2]) - 1.0).abs() < 1e-14);
        assert!((b[2] / (2.0 * a[3]) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn heatcap_rises_toward_threshold() {
    // T_crit = nγ²/(2ϰμ²) = 2·0.36/2 = 0.36
    let temps = "[0.3604, 0.361, 0.365, 0.38, 0.42]";
    let run = auxtherm("heatcap", &heatcap_config(COUPLED, temps), &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let cv: Vec<f64> = run
        .table("heatcap_channel_0.csv")
        .iter()
        .map(|r| r[3])
        .collect();
    assert!(cv.windows(2).all(|w| w[0] > w[1]), "{cv:?}");
}

#[test]
fn heatcap_below_threshold_fails_without_output() {
    let run = auxtherm("heatcap", &heatcap_config(COUPLED, "[0.3, 1.0]"), &[]);
    assert_eq!(run.code(), 3);
    assert!(run.stderr().contains("0.3"), "{}", run.stderr());
    assert!(no_files(&run.out()));
}

#[test]
fn heatcap_prefactor_switch() {
    let cfg = heatcap_config(COUPLED, "[2.0]");
    let paper = auxtherm("heatcap", &cfg, &["--prefactor", "paper"]);
    let dos = auxtherm("heatcap", &cfg, &["--prefactor", "dos"]);
    let (p, d) = (
        paper.table("heatcap_total.csv"),
        dos.table("heatcap_total.csv"),
    );
    assert!((d[0][1] / p[0][1] / (8.0 * PI * PI) - 1.0).abs() < 1e-13);
    let bad = auxtherm("heatcap", &cfg, &["--prefactor", "weird"]);
    assert_eq!(bad.code(), 2);
}

#[test]
fn classical_energy_grows_by_2t_per_mode() {
    let cfg = format!("{MEDIUM}{FREE}[classical]\ntemperature = 2.0\nmodes = [0, 1, 10, 100]\n");
    let run = auxtherm("classical-energy", &cfg, &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    assert!(run.read("classical_energy.csv").starts_with("M,E\n"));
    let rows = run.table("classical_energy.csv");
    assert_eq!(rows[0][1], 1.5 * 100.0 * 2.0);
    for r in &rows {
        assert!(((r[1] - rows[0][1]) - 2.0 * r[0] * 2.0).abs() < 1e-9 * r[1]);
    }
}

#[test]
fn classical_energy_slope_is_below_2t_with_coupling() {
    let cfg = format!("{MEDIUM}{COUPLED}[classical]\ntemperature = 2.0\nmodes = [10, 100]\n");
    let run = auxtherm("classical-energy", &cfg, &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let rows = run.table("classical_energy.csv");
    let slope = (rows[1][1] - rows[0][1]) / 90.0;
    assert!(slope < 4.0 && slope > 3.9, "{slope}");
}

#[test]
fn classical_energy_names_subcritical_mode() {
    let cfg = format!("{MEDIUM}{COUPLED}[classical]\ntemperature = 0.05\nmodes = [5]\n");
    let run = auxtherm("classical-energy", &cfg, &[]);
    assert_eq!(run.code(), 3);
    assert!(
        run.stderr().contains("s = 0") && run.stderr().contains("k = "),
        "{}",
        run.stderr()
    );
}

#[test]
fn validate_passes_and_lists_every_check() {
    let run = auxtherm("validate", "", &[]);
    assert_eq!(run.code(), 0, "{}\n{}", run.stdout(), run.stderr());
    for name in auxtherm_core::validation::CHECK_NAMES {
        assert!(run.stdout().contains(name), "{name}");
    }
    assert!(!run.stdout().contains("FAIL"));
}

#[test]
fn validate_reports_injected_fault() {
    let run = auxtherm("validate", "[validate]\ninject_fault = true\n", &[]);
    assert_eq!(run.code(), 1);
    let out = run.stdout();
    assert!(out.contains("FAIL weyl-bessel"), "{out}");
    assert!(out.contains("FAIL bessel-series"), "{out}");
    assert!(out.contains("PASS stefan-boltzmann"), "{out}");
}
