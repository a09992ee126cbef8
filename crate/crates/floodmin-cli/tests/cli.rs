use std::io::Write;
use std::process::{Command, Stdio};

use tempfile::tempdir;

const TABLE1_PLA: &str = "\
.i 4
.o 1
.ilb A B C D
.p 5
0000 1
0001 1
0100 1
0101 1
0111 1
.e
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floodmin"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = bin().args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn run_with_stdin(args: &[&str], input: &str) -> (String, String, i32) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn table1_file(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("table1.pla");
    std::fs::write(&path, TABLE1_PLA).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn minimize_prints_cover_and_summary() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, code) = run(&["minimize", &path]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "A'BD + A'C'");
    assert!(lines[1].starts_with("implicants=2 literals=5 time="));
    assert!(lines[1].ends_with("s verified=true"));
}

#[test]
fn minimize_can_render_pla_rows() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, code) = run(&["minimize", &path, "--out", "pla"]);
    assert_eq!(code, 0);
    assert!(stdout.contains(".i 4\n.o 1\n.p 2\n"));
    assert!(stdout.contains("01-1 1\n"));
    assert!(stdout.contains("0-0- 1\n"));
}

#[test]
fn minimize_output_feeds_verify() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, _) = run(&["minimize", &path]);
    let cover = stdout.lines().next().unwrap();
    let (stdout, _, code) = run(&["verify", &path, "--cover", cover]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "EQUIVALENT");
}

#[test]
fn verify_reports_the_first_mismatch() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, code) = run(&["verify", &path, "--cover", "A'C'"]);
    assert_eq!(code, 1);
    assert_eq!(stdout.trim(), "NOT-EQUIVALENT counterexample=0111");
}

#[test]
fn verify_rejects_unparseable_cover_text() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (_, stderr, code) = run(&["verify", &path, "--cover", "A # B"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");
}

#[test]
fn minimize_accepts_stdin_minterms() {
    let (stdout, _, code) =
        run_with_stdin(&["minimize", "-", "--format", "minterms"], "n=4\n0\n1\n4\n5\n7\n");
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next().unwrap(), "A'BD + A'C'");
}

#[test]
fn minimize_respects_the_output_index() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("two.pla");
    std::fs::write(&path, ".i 2\n.o 2\n01 10\n10 01\n11 01\n.e\n").unwrap();
    let (stdout, _, code) = run(&["minimize", path.to_str().unwrap(), "--output-index", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next().unwrap(), "A");
    let (_, stderr, code) = run(&["minimize", path.to_str().unwrap(), "--output-index", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("output index 2"));
}

#[test]
fn minimize_oracle_flag_adds_a_comparison_line() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, code) = run(&["minimize", &path, "--oracle"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("oracle_implicants=2 oracle_literals=5\n"));
}

#[test]
fn generate_zero_density_gives_an_empty_instance() {
    let (stdout, _, code) =
        run(&["generate", "--dims", "4", "--density", "0", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, ".i 4\n.o 1\n.p 0\n.e\n");
}

#[test]
fn generate_is_deterministic_and_writes_files() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("inst.mint");
    let args = [
        "generate", "--dims", "8", "--density", "0.25", "--seed", "5",
        "--format", "minterms", "--output", path.to_str().unwrap(),
    ];
    let (_, _, code) = run(&args);
    assert_eq!(code, 0);
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(first.lines().count(), 65, "header plus 64 = round(0.25 * 256) indices");
    let (_, _, code) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    let (stdout, _, code) =
        run(&["minimize", path.to_str().unwrap(), "--format", "minterms"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("verified=true"));
}

#[test]
fn oracle_prints_an_exact_cover() {
    let dir = tempdir().unwrap();
    let path = table1_file(&dir);
    let (stdout, _, code) = run(&["oracle", &path]);
    assert_eq!(code, 0);
    assert!(stdout.ends_with("implicants=2 literals=5\n"));
}

#[test]
fn oracle_rejects_large_dimensions() {
    let (_, stderr, code) =
        run_with_stdin(&["oracle", "-", "--format", "minterms"], "n=11\n0\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("oracle limit exceeded"));
}

#[test]
fn bench_writes_csv_with_one_row_per_cell() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let (_, _, code) = run(&[
        "bench", "--dims", "4,5", "--densities", "0.2,0.5", "--repeats", "2",
        "--seed", "7", "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "dims,density,seed,elapsed_seconds,num_implicants,num_literals,verified,gen_mode,verify_mode"
    );
    assert_eq!(lines.len(), 9);
    for row in &lines[1..] {
        assert!(row.contains(",true,exact,exhaustive"), "row: {row}");
    }
}

#[test]
fn bench_accepts_a_dimension_range_and_no_verify() {
    let (stdout, _, code) = run(&[
        "bench", "--dims-range", "4..6", "--densities", "0.5", "--no-verify",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 4);
    for (row, dims) in lines[1..].iter().zip(["4,", "5,", "6,"]) {
        assert!(row.starts_with(dims), "row: {row}");
        assert!(row.contains(",false,exact,skipped"), "row: {row}");
    }
}

#[test]
fn usage_and_file_errors_exit_2() {
    let (_, _, code) = run(&["bench", "--densities", "0.5"]);
    assert_eq!(code, 2);
    let (_, _, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (_, stderr, code) = run(&["minimize", "/nonexistent/instance.pla"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error: "));
    let (_, stderr, code) =
        run_with_stdin(&["minimize", "-"], ".i 2\n.o 1\n0x 1\n.e\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
    let (_, stderr, code) = run(&["bench", "--dims-range", "9..4", "--densities", "0.5"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("empty"));
}
