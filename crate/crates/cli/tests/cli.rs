use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dmasim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmasim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn body(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

const SMALL: [&str; 6] = ["--n-slot", "8", "--subcarriers", "8", "--resolution", "41"];

#[test]
fn sweep_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let mut args = vec![
            "sweep-bandwidth",
            "--values",
            "5e7,2e8",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend(SMALL);
        let o = dmasim(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for file in ["per_subcarrier.csv", "summary.csv"] {
        let text = fs::read_to_string(a.join(file)).unwrap();
        assert!(text.starts_with("# dmasim sweep-bandwidth seed=0 generated_unix="));
        assert_eq!(body(&a.join(file)), body(&b.join(file)));
    }
    let summary = body(&a.join("summary.csv"));
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario_id,algorithm,axis,value,g_sum,spectral_efficiency,data_rate,std_error,trials"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    fs::write(&cfg, "n_slot = 12\nbandwidth = 5e7\n").unwrap();
    let o = dmasim(&[
        "show-config",
        "--config",
        cfg.to_str().unwrap(),
        "--bandwidth",
        "1e8",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("n_slot = 12"));
    assert!(text.contains("bandwidth = 100000000.0"));
}

#[test]
fn bad_input_exits_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "sweep-angle",
            "--values",
            "10,-10",
            "--out",
            out.to_str().unwrap(),
        ],
        vec![
            "sweep-lambda",
            "--values",
            "0.5,1.5",
            "--out",
            out.to_str().unwrap(),
        ],
        vec!["show-config", "--config", "/nonexistent/sim.toml"],
        vec!["show-config", "--subcarriers", "3"],
    ];
    for args in cases {
        let o = dmasim(&args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.starts_with("dmasim: "));
    }
    assert!(!out.exists());

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "n_slots = 4\n").unwrap();
    let o = dmasim(&["show-config", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("bad.toml"));
}

#[test]
fn multipath_with_channel_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mp");
    let mut args = vec![
        "multipath-mc",
        "--values",
        "1,2",
        "--trials",
        "3",
        "--seed",
        "5",
        "--dump-channel",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(SMALL);
    let o = dmasim(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let channel = body(&out.join("channel.csv"));
    assert!(channel.starts_with("k,f_k,n,re_h,im_h,h_att"));
    assert_eq!(channel.lines().count(), 1 + 8 * 8);
    assert_eq!(body(&out.join("summary.csv")).lines().count(), 1 + 2 * 2);
}

#[test]
fn validate_approx_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let mut args = vec![
        "validate-approx",
        "--values",
        "0.25,1",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(SMALL);
    let o = dmasim(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["tuning_sweep.csv", "lambda_sweep.csv", "per_subcarrier.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}
