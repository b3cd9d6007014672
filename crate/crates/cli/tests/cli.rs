use std::path::Path;
use std::process::{Command, Output};

fn heilbronn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heilbronn"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_then_validate() {
    let d = tempfile::tempdir().unwrap();
    let o = heilbronn(d.path(), &["gen", "vertical", "--delta", "0.125", "--dim", "2", "-o", "v.plc"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = heilbronn(d.path(), &["validate", "v.plc"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn invalid_file_exits_3() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bad.plc"), "plc v1 dim=2 n=2\np 0.5 0.5 q 0.5 0.5 v 1 0\n").unwrap();
    let o = heilbronn(d.path(), &["validate", "bad.plc"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_error_exits_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(heilbronn(d.path(), &["dx"]).status.code(), Some(2));
    assert_eq!(heilbronn(d.path(), &["no-such-command"]).status.code(), Some(2));
}

#[test]
fn missing_input_exits_3() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(heilbronn(d.path(), &["dx", "-x", "absent.plc"]).status.code(), Some(3));
}

#[test]
fn table_goes_to_stdout_with_header() {
    let d = tempfile::tempdir().unwrap();
    heilbronn(d.path(), &["gen", "random-points", "--n", "30", "--dim", "2", "--seed", "3", "-o", "p.pts"]);
    let o = heilbronn(d.path(), &["min-triangle", "-p", "p.pts", "--method", "brute"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("# heilbronn min-triangle"), "{s}");
    let fast = stdout(&heilbronn(d.path(), &["min-triangle", "-p", "p.pts", "--method", "fast"]));
    let area = |t: &str| t.lines().filter(|l| !l.starts_with('#')).nth(1).map(str::to_owned);
    assert!(area(&s).is_some());
    assert_eq!(
        area(&s).unwrap().split(',').find(|f| f.contains('.')).map(str::to_owned),
        area(&fast).unwrap().split(',').find(|f| f.contains('.')).map(str::to_owned)
    );
}

#[test]
fn manifest_run_writes_log_and_ledger() {
    let d = tempfile::tempdir().unwrap();
    let m = d.path().join("m.toml");
    std::fs::write(&m, "command = \"gen\"\nargs = [\"vertical\"]\noutput = \"out\"\n[params]\ndelta = 0.25\ndim = 3\n").unwrap();
    let o = heilbronn(d.path(), &["run", "--manifest", "m.toml"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let log = std::fs::read_to_string(d.path().join("out/run.log")).unwrap();
    assert!(log.contains("manifest_sha256"));
    assert!(log.contains("exit_status"));
    assert!(d.path().join("out/gen.plc").exists());
    assert!(d.path().join("out/ledger.csv").exists());
}
