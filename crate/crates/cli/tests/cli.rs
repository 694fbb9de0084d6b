use std::fs;
use std::process::{Command, Output};

fn picard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picard"))
        .args(args)
        .output()
        .expect("run picard")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sunit_lists_canonical_lambdas() {
    let o = picard(&["sunit", "--primes", "2,3", "--bound", "4"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["2", "3", "4", "9"]);
}

#[test]
fn hilbert_reports_places() {
    let o = picard(&["hilbert", "-a", "-1", "-b", "-1"]);
    let s = stdout(&o);
    assert!(s.contains("inf: -1"), "{s}");
    assert!(s.contains("2: -1"), "{s}");
    assert!(s.contains("nontrivial: 2,inf") || s.contains("nontrivial: inf,2"), "{s}");
}

#[test]
fn ternary_discriminant_factorization() {
    let o = picard(&["disc", "--ternary", "y^3*z - x^4 + z^4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("factorization = -1 * 2^16 * 3^9"));
}

#[test]
fn minimize_lowers_the_seven_adic_exponent() {
    let o = picard(&["minimize", "--curve", "y^3=7*(x^4-9*x^2-10*x-9)", "--prime", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("v_7(disc) = 10"));
}

#[test]
fn quartic_subcommands() {
    let o = picard(&["quartic", "disc", "--poly", "x^4-1"]);
    assert!(stdout(&o).contains("disc = -256"));
    let o = picard(&["quartic", "equiv", "--poly", "x^4+x", "--other", "x^4+512*x"]);
    assert!(stdout(&o).starts_with("equivalent"));
    let o = picard(&["quartic", "symmetries", "--poly", "x^4+x"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn goodred_and_invariants() {
    let o = picard(&["goodred", "--curve", "y^3=x^4+x", "--primes", "2,3"]);
    assert_eq!(stdout(&o), "2: good (disc-unit)\n3: bad (odd-3-valuation)\n");
    let o = picard(&["invariants", "--curve", "y^3=x^4+x"]);
    let s = stdout(&o);
    assert!(s.contains("aut: Z9"), "{s}");
    let o = picard(&["invariants", "--curve", "x^4=y^3+1"]);
    assert!(stdout(&o).contains("class: 0 twist 1"));
}

#[test]
fn malformed_input_exits_with_two() {
    let o = picard(&["disc", "--ternary", "((x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = picard(&["twists", "--curve", "x^4=y^3+1", "--primes", "2,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn database_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("curves.txt");
    let db = dir.path().join("db.pdb");
    fs::write(
        &input,
        "# test curves\ny^3 = x^4 + x\ny^3 = x^4 + 512*x ; provenance=scaled\nx^4 = y^3 + 1\n",
    )
    .unwrap();
    let o = picard(&["db", "build", "--in", input.to_str().unwrap(), "--out", db.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "2 records from 3 curves\n");

    let dbs = db.to_str().unwrap();
    let o = picard(&["db", "query", "--db", dbs, "--curve", "y^3 = x^4 + 19683*x"]);
    assert_eq!(stdout(&o).matches("label=").count(), 1);
    let o = picard(&["db", "query", "--db", dbs, "--curve", "y^3 = x^4 + 8*x"]);
    assert_eq!(stdout(&o).matches("label=").count(), 0);
    let o = picard(&["db", "query", "--db", dbs, "--curve", "y^3 = x^4 + 8*x", "--twists"]);
    assert_eq!(stdout(&o).matches("label=").count(), 1);
    let o = picard(&["db", "query", "--db", dbs, "--bad-primes", "2,3"]);
    assert_eq!(stdout(&o).matches("label=").count(), 2);
    let o = picard(&["db", "validate", "--db", dbs]);
    assert_eq!(o.status.code(), Some(0));
    let o = picard(&["validate", "--db", dbs]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn conductor_violations_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("curves.txt");
    let db = dir.path().join("db.pdb");
    fs::write(&input, "y^3 = x^4 + x ; conductor=3:3\n").unwrap();
    let o = picard(&["db", "build", "--in", input.to_str().unwrap(), "--out", db.to_str().unwrap()]);
    assert!(o.status.success());
    let o = picard(&["validate", "--db", db.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1 violation(s)"));
}

#[test]
fn malformed_database_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.pdb");
    fs::write(&db, "# picard curve database v1\n\nlabel=x\nkind=weird\n").unwrap();
    let o = picard(&["db", "validate", "--db", db.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
