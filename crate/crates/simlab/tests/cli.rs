use std::path::PathBuf;
use std::process::{Command, Output};

fn simlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simlab")).args(args).output().unwrap()
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("simlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let cfg = write("det.cfg", "kind = auer\nrows = 20\nebn0_db = 0, 2\nmax_trials = 3000\ntarget_errors = 50\n");
    let path = cfg.to_str().unwrap();
    let one = simlab(&["auer", "--config", path, "--threads", "1", "--seed", "9"]);
    let three = simlab(&["auer", "--config", path, "--threads", "3", "--seed", "9"]);
    assert!(one.status.success() && three.status.success());
    assert_eq!(stdout(&one), stdout(&three));
    let other = simlab(&["auer", "--config", path, "--seed", "10"]);
    assert_ne!(stdout(&one), stdout(&other));
    assert!(stdout(&one).starts_with("# schema=1\nebn0_db,M,tau_prior,trials,aud_errors,auer_sim,auer_theory"));
}

#[test]
fn estimates_are_counts_over_denominators() {
    let cfg = write("ber.cfg", "kind = ber\nrows = 339\ntau = 2\nebn0_db = 4.5\nmax_trials = 40\n");
    let out = stdout(&simlab(&["ber", "--config", cfg.to_str().unwrap()]));
    let row: Vec<f64> = out.lines().nth(2).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let (trials, bit_errors, ber, fer, frames) = (row[4], row[5], row[6], row[7], row[8]);
    assert_eq!(ber, bit_errors / (trials * 2.0 * 508.0));
    assert_eq!(fer, frames / (trials * 2.0));
}

#[test]
fn empty_rate_list_gives_a_header() {
    let cfg = write("empty.cfg", "kind = shannon_table\nrates =\n");
    let out = simlab(&["shannon", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "# schema=1\nrc,ebn0_min_db\n");
}

#[test]
fn config_errors_exit_with_two() {
    let cfg = write("bad.cfg", "kind = auer\n# fine\nfrobnicate = 3\n");
    let out = simlab(&["auer", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3") && err.contains("frobnicate"), "{err}");

    let cfg = write("kind.cfg", "kind = ber\nebn0_db = 1\n");
    assert_eq!(simlab(&["auer", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let cfg = write("rows.cfg", "kind = ber\nrows = 10\nebn0_db = 1\n");
    assert_eq!(simlab(&["ber", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn set_commands() {
    let out = simlab(&["construct", "--generator", "1 1i 2 2i", "--mode", "cyclic"]);
    assert!(out.status.success());
    let set = write("set.txt", &stdout(&out));
    let back = simlab(&["construct", "--set-file", set.to_str().unwrap()]);
    assert_eq!(stdout(&back), stdout(&out));

    let ok = simlab(&["validate", "--set-file", set.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).ends_with("valid\n"));

    let dup = write("dup.txt", "2 1 adhoc\n1+0i\n1+0i\n");
    let bad = simlab(&["validate", "--set-file", dup.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("condition 1: FAILED"));

    let malformed = write("malformed.txt", "2 1 adhoc\n1+0i\n");
    assert_eq!(simlab(&["construct", "--set-file", malformed.to_str().unwrap()]).status.code(), Some(2));

    let sp = stdout(&simlab(&["sumpatterns", "--generator", "1 1i 2 2i", "--tau", "3", "--mu", "1"]));
    assert_eq!(sp.lines().nth(2), Some("3,1,1 2 3,1,9,3,2,30"));
}
