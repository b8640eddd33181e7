use std::path::Path;
use std::process::{Command, Output};

fn ttp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttp")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("{key} missing in {out}"))
}

#[test]
fn generate_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(ttp(&["generate", "--cities", "30", "--category", "b", "--seed", "2", "--out", "g.ttp"], p).status.success());
    let solved = ttp(
        &["solve", "--instance", "g.ttp", "--timeout-ms", "300", "--clock", "work", "--solution-out", "g.sol"],
        p,
    );
    assert!(solved.status.success(), "{}", String::from_utf8_lossy(&solved.stderr));
    let objective = value(&stdout(&solved), "objective");
    let checked = ttp(&["validate", "--instance", "g.ttp", "--solution", "g.sol"], p);
    assert!(checked.status.success());
    let again = value(&stdout(&checked), "objective");
    assert!((again - objective).abs() <= 1e-6 * objective.abs().max(1.0));
}

#[test]
fn oracle_size_guard_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(ttp(&["generate", "--cities", "20", "--category", "a", "--out", "big.ttp"], p).status.success());
    assert_eq!(ttp(&["oracle", "--instance", "big.ttp"], p).status.code(), Some(3));
    assert!(ttp(&["generate", "--cities", "5", "--category", "a", "--out", "tiny.ttp"], p).status.success());
    let out = ttp(&["oracle", "--instance", "tiny.ttp"], p);
    assert!(out.status.success());
    assert!(stdout(&out).contains("tour 1 "));
}

#[test]
fn bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(ttp(&["solve"], p).status.code(), Some(1));
    assert_eq!(ttp(&["solve", "--instance", "nope.ttp"], p).status.code(), Some(2));
    std::fs::write(p.join("broken.ttp"), "PROBLEM NAME: x\nDIMENSION: two\n").unwrap();
    assert_eq!(ttp(&["solve", "--instance", "broken.ttp"], p).status.code(), Some(2));
    assert_eq!(ttp(&["experiment"], p).status.code(), Some(1));
    assert_eq!(ttp(&["--help"], p).status.code(), Some(0));
}

#[test]
fn experiment_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::create_dir(p.join("inst")).unwrap();
    for s in 0..2 {
        let out = format!("inst/i{s}.ttp");
        assert!(ttp(&["generate", "--cities", "15", "--seed", &s.to_string(), "--out", &out], p).status.success());
    }
    std::fs::write(
        p.join("exp.toml"),
        "instances = [\"inst\"]\nversions = [\"noch+sbfs\", \"pgch+mbfs\"]\nruns = 2\ntimeout_ms = 100\nclock = \"work\"\nout = \"res\"\n",
    )
    .unwrap();
    let out = ttp(&["experiment", "--config", "exp.toml"], p);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(p.join("res/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2);

    let sub = p.join("sub");
    std::fs::create_dir(&sub).unwrap();
    let again = ttp(&["experiment", "--config", "../exp.toml", "--runs", "1", "--versions", "pgch+sbfs"], &sub);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    let csv = std::fs::read_to_string(p.join("res/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2);
    assert!(csv.lines().skip(1).all(|l| l.contains("PGCH+SBFS")));

    let printed = ttp(&["experiment", "--instances", "inst/i0.ttp", "--runs", "1", "--timeout-ms", "50", "--clock", "work"], p);
    assert_eq!(stdout(&printed).lines().count(), 1 + 2);
}
