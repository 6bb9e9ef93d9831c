use super::*;
use clap::CommandFactory;
use xdlab_runner::acceptance::criterion4;
use xdlab_runner::config::{load_sweep, load_validation};

const HEADER: &str =
    "snr_db,eta,mode,metric,analytic_value,analytic_validity,mc_mean,mc_stderr,abs_gap,within_tolerance";

fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("xdlab").chain(args.iter().copied())).unwrap()
}

// Runs `xdlab run <config> --out-dir <dir>/<out> [extra]`.
fn run_in(dir: &Path, config: &Path, out: &str, extra: &[&str]) -> Result<bool, CliError> {
    let out = dir.join(out);
    let mut args = vec!["run", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    dispatch(&parse(&args))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

const SMALL: &str = r#"{
  "metric": "outage",
  "modes": ["FD", "HD", "XD"],
  "snr_db": [10, 20],
  "eta": [0.2, 0.05],
  "trials": 20000,
  "seed": 5
}"#;

#[test]
fn empty_modes_is_a_config_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        "{\n  \"metric\": \"outage\",\n  \"modes\": [],\n  \"snr_db\": [10], \"eta\": [0.2], \"trials\": 10, \"seed\": 1\n}\n",
    );
    let e = run_in(dir.path(), &cfg, "out", &[]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("c.json:3:3: modes: must not be empty"), "{e}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn malformed_json_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", "{\"metric\": \"outage\",\n \"modes\": [\"FD\"\n");
    let e = run_in(dir.path(), &cfg, "out", &[]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("c.json:3:"), "{e}");

    let cfg = write(dir.path(), "d.json", &SMALL.replace("\"seed\"", "\"sead\""));
    let e = run_in(dir.path(), &cfg, "out", &[]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("unknown field `sead`"), "{e}");

    let e = run_in(dir.path(), &dir.path().join("missing.json"), "out", &[]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn bad_overrides_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let e = run_in(dir.path(), &cfg, "out", &["--tol-scale", "-1"]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("--tol-scale: must be positive"), "{e}");
    let e = Cli::try_parse_from(["xdlab", "run", "c.json", "--trials", "0"])
        .err()
        .unwrap();
    assert_eq!(e.exit_code(), 2);
    assert!(Cli::try_parse_from(["xdlab", "frobnicate"]).is_err());
}

#[test]
fn thread_count_parses_the_environment() {
    assert_eq!(thread_count(None).unwrap(), None);
    assert_eq!(thread_count(Some("8".into())).unwrap(), Some(8));
    for bad in ["0", "zero", "-2", ""] {
        let e = thread_count(Some(bad.into())).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("XDLAB_THREADS"));
    }
}

#[test]
fn run_writes_csvs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    assert!(run_in(dir.path(), &cfg, "a", &[]).unwrap());
    let out = dir.path().join("a");
    for name in ["outage_eta0.2.csv", "outage_eta0.05.csv"] {
        let text = read(out.join(name));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        // three modes × two SNR points
        assert_eq!(lines.len(), 7);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert!(lines[1].starts_with("10,"), "{}", lines[1]);
        let modes: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap()).collect();
        assert_eq!(modes, ["FD", "FD", "HD", "HD", "XD", "XD"]);
    }
    let manifest: serde_json::Value = serde_json::from_str(&read(out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["config"]["trials"], 20000);
    assert_eq!(manifest["config"]["r0"], 2.0);
    assert_eq!(manifest["files"][0], "outage_eta0.2.csv");
    assert!(manifest["version"]
        .as_str()
        .unwrap()
        .starts_with(env!("CARGO_PKG_VERSION")));
    assert!(manifest["threads"].as_u64().unwrap() >= 1);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    run_in(dir.path(), &cfg, "a", &[]).unwrap();
    run_in(dir.path(), &cfg, "b", &[]).unwrap();
    // a manifest is itself a valid config
    run_in(dir.path(), &dir.path().join("a/manifest.json"), "c", &[]).unwrap();
    for name in ["outage_eta0.2.csv", "outage_eta0.05.csv"] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        assert_eq!(a, std::fs::read(dir.path().join("b").join(name)).unwrap());
        assert_eq!(a, std::fs::read(dir.path().join("c").join(name)).unwrap());
    }
    // a different seed changes the Monte-Carlo columns
    run_in(dir.path(), &cfg, "d", &["--seed", "6"]).unwrap();
    assert_ne!(
        read(dir.path().join("a/outage_eta0.2.csv")),
        read(dir.path().join("d/outage_eta0.2.csv"))
    );
}

#[test]
fn tol_scale_widens_the_band() {
    let dir = tempfile::tempdir().unwrap();
    // the asymptotic XD CDF is about 0.013 off here, outside 0.01 + 3σ
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"metric": "cdf", "modes": ["XD"], "snr_db": [20], "eta": [0.2], "x": 3, "trials": 200000, "seed": 7}"#,
    );
    let within = |out: &str, extra: &[&str]| {
        run_in(dir.path(), &cfg, out, extra).unwrap();
        let text = read(dir.path().join(out).join("cdf_eta0.2.csv"));
        text.lines().nth(1).unwrap().ends_with(",true")
    };
    assert!(!within("a", &[]));
    assert!(within("b", &["--tol-scale", "10"]));
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path().join("b/manifest.json"))).unwrap();
    assert_eq!(manifest["config"]["tol_scale"], 10.0);
}

#[test]
fn series_failure_without_fallback_is_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"metric": "sumrate", "modes": ["XD"], "snr_db": [40], "eta": [0.01], "trials": 1000, "seed": 1,
            "series": {"quadrature_fallback": false}}"#,
    );
    let e = run_in(dir.path(), &cfg, "out", &[]).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert!(e.to_string().contains("sumrate XD at 40 dB, eta = 0.01"), "{e}");

    // with the fallback the same point succeeds and is marked numeric
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"metric": "sumrate", "modes": ["XD"], "snr_db": [40], "eta": [0.01], "trials": 1000, "seed": 1}"#,
    );
    run_in(dir.path(), &cfg, "out", &[]).unwrap();
    assert!(read(dir.path().join("out/sumrate_eta0.01.csv")).contains(",numeric,"));
}

#[test]
fn pa_outage_writes_both_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"metric": "pa_outage", "modes": ["FD_PA", "XD_PA"], "snr_db": [20], "eta": [0.2], "trials": 20000, "seed": 3}"#,
    );
    run_in(dir.path(), &cfg, "out", &[]).unwrap();
    let text = read(dir.path().join("out/pa_outage_eta0.2.csv"));
    let rows: Vec<(String, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[2].to_string(), f[3].to_string())
        })
        .collect();
    let want = [
        ("FD_PA", "pa_outage_upper"),
        ("FD_PA", "pa_outage_lower"),
        ("XD_PA", "pa_outage_upper"),
        ("XD_PA", "pa_outage_lower"),
    ];
    assert_eq!(rows.len(), want.len());
    for ((mode, metric), (m, k)) in rows.iter().zip(want) {
        assert_eq!((mode.as_str(), metric.as_str()), (m, k));
    }
}

#[test]
fn specfun_check_prints_oracle_table() {
    let text = specfun_table().unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("function"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 100);
    assert!(rows.iter().any(|r| r.starts_with("bessel_k ")), "{text}");
    for r in rows {
        let err: f64 = r.split_whitespace().last().unwrap().parse().unwrap();
        assert!(err <= 1e-3, "{r}");
    }
}

#[test]
fn version_names_the_build() {
    let v = Cli::command().render_version();
    assert!(v.starts_with(concat!("xdlab ", env!("CARGO_PKG_VERSION"))), "{v}");
}

#[test]
fn shipped_configs_load() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name == "validate.json" {
            load_validation(&path).unwrap();
        } else {
            load_sweep(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn outage_figure_config_gives_three_curves() {
    let dir = tempfile::tempdir().unwrap();
    run_in(
        dir.path(),
        &configs().join("fig2_outage.json"),
        "out",
        &["--trials", "2000"],
    )
    .unwrap();
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "manifest.json",
            "outage_eta0.01.csv",
            "outage_eta0.05.csv",
            "outage_eta0.2.csv"
        ]
    );
    // 21 SNR points for each of three modes
    assert_eq!(read(dir.path().join("out/outage_eta0.2.csv")).lines().count(), 1 + 63);
}

#[test]
fn validate_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.json", r#"{"trials": 0, "seed": 1}"#);
    let out = dir.path().join("out");
    let e = dispatch(&parse(&[
        "validate",
        cfg.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]))
    .unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("v.json:1:2: trials"), "{e}");
}

fn worst(measured: &str) -> f64 {
    measured["worst ".len()..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn k1_bias_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let suite = |k1_bias| Suite {
        trials: 100_000,
        seed: 11,
        tol_scale: 1.0,
        k1_bias,
        exe: None,
        work_dir: dir.path().to_path_buf(),
    };
    let clean = worst(&criterion4(&suite(0.0)).unwrap().measured);
    let biased = criterion4(&suite(0.5)).unwrap();
    assert!(!biased.pass);
    assert!(worst(&biased.measured) > clean + 0.02, "{clean} vs {}", biased.measured);
}
