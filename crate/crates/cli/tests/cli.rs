use std::path::PathBuf;
use std::process::{Command, Output};

use tcqsim_cli::{execute, parse_config, parse_config_for, render_csv, Command as Cmd};

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tcqsim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcqsim"))
        .args(args)
        .output()
        .unwrap()
}

fn body(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn rip_run_prints_one_row_per_state() {
    let cfg = scratch(
        "rip.cfg",
        "command = rip\n[rip]\nshape = square\nduration = 300 ns\n",
    );
    let out = run(&["rip", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tool: tcqsim\n# version: "));
    assert!(text.contains("\n# timestamp: "));
    let rows = body(&text);
    assert_eq!(rows[0], "state,pull_hz,phase_rad,residual_photons");
    let states: Vec<&str> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(states, ["00", "01", "10", "11"]);
}

#[test]
fn out_flag_writes_the_file() {
    let cfg = scratch("chi.cfg", "command = chi\n");
    let dest = cfg.with_file_name("chi.csv");
    let out = run(&[
        "chi",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dest).unwrap();
    let rows = body(&text);
    assert_eq!(rows[0], "side,mode,level,frequency_hz,chi_hz,two_chi_hz");
    assert_eq!(rows.len(), 5);
    assert!(!text.contains("NaN"));
}

#[test]
fn config_errors_carry_module_and_line() {
    let cfg = scratch(
        "bad.cfg",
        "command = rip\n[rip]\nshape = square\nbogus = 1\n",
    );
    let out = run(&["rip", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error\tmodule=config\t"), "{err}");
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn command_mismatch_is_rejected() {
    let cfg = scratch("mismatch.cfg", "command = rip\n");
    let out = run(&["chi", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("module=config"));
}

#[test]
fn compute_errors_name_their_module() {
    let cfg = scratch(
        "edge.cfg",
        "command = rip\n[rip]\nduration = 100 ns\nedge = 80 ns\n",
    );
    let out = run(&["rip", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error\tmodule="), "{err}");
}

#[test]
fn command_may_come_from_the_caller_alone() {
    let cfg = parse_config_for("[rip]\nshape = square\n", Some(Cmd::Rip)).unwrap();
    assert_eq!(cfg.command, Cmd::Rip);
    assert!(parse_config("[rip]\nshape = square\n").is_err());
}

#[test]
fn calibration_row_hits_the_target() {
    let cfg = parse_config("command = calibrate\n[calibration]\ntarget = 1 MHz\n").unwrap();
    let table = execute(&cfg).unwrap();
    let half: f64 = match table.column("chi_half_hz").unwrap()[0] {
        tcqsim_cli::run::Cell::Float(x) => *x,
        other => panic!("{other:?}"),
    };
    assert!((half - 1e6).abs() <= 1e3, "{half}");
}

#[test]
fn csv_is_stable_apart_from_the_timestamp() {
    let cfg = parse_config("command = rip\n[rip]\nshape = square\n").unwrap();
    let a = render_csv(&execute(&cfg).unwrap(), Some("a")).unwrap();
    let b = render_csv(&execute(&cfg).unwrap(), Some("b")).unwrap();
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("# timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(a.ends_with('\n') && !a.contains('\r'));
}
