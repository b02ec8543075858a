use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use swo::cli::{run, Outcome};
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn swo(args: &[&str]) -> Outcome {
    run(std::iter::once("swo").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RDU_SQRT: &str = "kind = \"rdu\"\nrho = \"101/100\"\ng = { kind = \"sqrt\" }\n";
const RDU_FAST: &str = "kind = \"rdu\"\nrho = \"2\"\ng = { kind = \"identity\" }\n";

#[test]
fn compare_large_profiles_reports_values() {
    let fx = Fixture::new();
    let ord = fx.file("rdu.toml", RDU_SQRT);
    let prof = fx.file("p.txt", "1000000*100\n90, 999*100, 999000*300\n");
    let out = swo(&["compare", "--ordering", s(&ord), "--profiles", s(&prof)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("StrictlyBetter"), "{}", out.stdout);
    assert!(out.stdout.contains("value(u) = 1.01"), "{}", out.stdout);
}

#[test]
fn compare_leximin_edge_cases() {
    let fx = Fixture::new();
    let ord = fx.file("lex.toml", "kind = \"leximin\"\n");
    let same = swo(&["compare", "--ordering", s(&ord), "2, 1", "1, 2"]);
    assert_eq!(same.stdout.lines().next(), Some("Equivalent"));
    let sizes = swo(&["compare", "--ordering", s(&ord), "1, 2", "1, 2, 3"]);
    assert_eq!(sizes.code, 0);
    assert_eq!(sizes.stdout.lines().next(), Some("Incomparable"));
    assert!(sizes.stdout.contains("population sizes 2 and 3"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let fx = Fixture::new();
    let ord = fx.file("lex.toml", "kind = \"leximin\"\n");
    let prof = fx.file("bad.txt", "1, 2\n3, x\n");
    let out = swo(&["compare", "--ordering", s(&ord), "--profiles", s(&prof)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2, column 4"), "{}", out.stderr);

    let bad_ord = fx.file("bad.toml", "kind = \"rdu\"\nrho = \"2\"\n");
    let out = swo(&["compare", "--ordering", s(&bad_ord), "1", "2"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("missing field `g`"), "{}", out.stderr);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(swo(&["frobnicate"]).code, 2);
    assert_eq!(swo(&["--help"]).code, 0);
}

#[test]
fn suffavg_passes_its_axiom_suite() {
    let fx = Fixture::new();
    let ord = fx.file(
        "sa.toml",
        "kind = \"suff-avg\"\ntheta_p = 2\nlambda = { kind = \"constant\", value = \"1/2\" }\n",
    );
    let params = fx.file(
        "params.toml",
        "axioms = [\"anonymity\", \"strong-pareto\", \"pigou-dalton\"]\ninstances = 200\n",
    );
    let out = swo(&["axiom-suite", "--ordering", s(&ord), "--params", s(&params), "--seed", "3"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("pigou-dalton"));

    // The shortfall sum grows with population while the mean does not.
    let out = swo(&[
        "axiom-suite", "--ordering", s(&ord), "--param", "axioms=replication-invariance", "--param", "instances=500",
        "--seed", "3",
    ]);
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("# first violation of replication-invariance"));
}

#[test]
fn rdu_suite_finds_ratio_aggregation_witness() {
    let fx = Fixture::new();
    let ord = fx.file("rdu.toml", RDU_FAST);
    let out = swo(&[
        "axiom-suite", "--ordering", s(&ord), "--param", "axioms=ratio-aggregation", "--param", "gamma=2",
        "--param", "delta=1", "--param", "lambda=1/2", "--param", "population=2..40", "--param", "instances=200",
    ]);
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("# first violation of ratio-aggregation"));
    assert!(out.stdout.contains("axiom = \"ratio-aggregation\""));
}

#[test]
fn leximin_never_violates_strong_non_aggregation() {
    let fx = Fixture::new();
    let ord = fx.file("lex.toml", "kind = \"leximin\"\n");
    let out = swo(&[
        "axiom-suite", "--ordering", s(&ord), "--param", "axioms=strong-non-aggregation", "--param", "alpha=2",
        "--param", "beta=1", "--param", "instances=300",
    ]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let row = out.stdout.lines().find(|l| l.starts_with("strong-non-aggregation")).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cols[3], "0", "{row}");
}

#[test]
fn replay_valid_and_guarded_chains() {
    let ok = swo(&["replay", "prop1"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert!(ok.stdout.contains("valid: every step's preconditions hold"));

    let guarded = swo(&["replay", "prop3", "--param", "h=1", "--param", "delta=1", "--param", "alpha=3"]);
    assert_eq!(guarded.code, 2);
    assert!(guarded.stderr.contains("hδ > α"), "{}", guarded.stderr);
}

#[test]
fn certificate_round_trips_through_replay() {
    let fx = Fixture::new();
    let cert = fx.path("p4.cert");
    let built = swo(&["replay", "prop4", "--format", "cert", "--out", s(&cert)]);
    assert_eq!(built.code, 0, "{}", built.stderr);
    assert!(built.stdout.starts_with("CHAIN\tkind=dominance\tlabel=prop4"));
    assert_eq!(fs::read_to_string(&cert).unwrap(), built.stdout);

    let replayed = swo(&["replay", "--certificate", s(&cert)]);
    assert_eq!(replayed.code, 0, "{}", replayed.stderr);
    assert!(replayed.stdout.contains("claim: (1, 2, 3) ≻ (2*1, 5)"), "{}", replayed.stdout);

    let again = swo(&["replay", "--certificate", s(&cert), "--format", "cert"]);
    assert_eq!(again.stdout, built.stdout);
}

#[test]
fn tampered_certificate_fails() {
    let fx = Fixture::new();
    let cert = fx.path("p1.cert");
    assert_eq!(swo(&["replay", "prop1", "--out", s(&cert)]).code, 0);
    let text = fs::read_to_string(&cert).unwrap();
    let step = text.lines().position(|l| l.starts_with("STEP")).unwrap();
    let tampered: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == step { l.replace("\talpha=", "\talpha=9") } else { l.to_string() })
        .collect();
    let bad = fx.file("bad.cert", &(tampered.join("\n") + "\n"));
    let out = swo(&["replay", "--certificate", s(&bad)]);
    assert_eq!(out.code, 1, "{}{}", out.stdout, out.stderr);
}

#[test]
fn plot_data_tables() {
    let fx = Fixture::new();
    let ord = fx.file("rdu.toml", RDU_SQRT);
    let empty = swo(&["plot-data", "coefficient", "--ordering", s(&ord), "--param", "lambda=1/2", "--from", "5", "--to", "4"]);
    assert_eq!(empty.code, 0);
    assert_eq!(empty.stdout, "n\tceil_lambda_n\tcoefficient\n");

    let coef = swo(&["plot-data", "coefficient", "--ordering", s(&ord), "--param", "lambda=1/2", "--from", "2", "--to", "6"]);
    assert_eq!(coef.stdout.lines().count(), 6);

    let interval = swo(&[
        "plot-data", "lambda-interval", "--from", "2", "--to", "20", "--param", "alpha=2", "--param", "beta=1",
        "--param", "gamma=2", "--param", "delta=1", "--param", "lambda=1/2",
    ]);
    assert_eq!(interval.code, 0, "{}", interval.stderr);
    let rows: Vec<&str> = interval.stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 19);
    for row in rows {
        let cols: Vec<&str> = row.split('\t').collect();
        assert_eq!(cols.len(), 6, "{row}");
        assert!(matches!(cols[5], "true" | "false"), "{row}");
    }
}

#[test]
fn prop5_sqrt_condition() {
    let out = swo(&[
        "prop5", "--param", "rho=2", "--param", "g=sqrt", "--param", "theta_p=4", "--param", "theta_r=9",
        "--param", "alpha=3", "--param", "beta=1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("non-aggregation condition: holds"));
    // 2 (√10 − 3)
    assert!(out.stdout.contains("rhs = 3.24555320336"), "{}", out.stdout);
}

#[test]
fn search_is_deterministic_per_seed() {
    let fx = Fixture::new();
    let ord = fx.file("rdu.toml", RDU_FAST);
    let args = [
        "search", "--ordering", s(&ord), "--axiom", "ratio-aggregation", "--param", "gamma=2", "--param", "delta=1",
        "--param", "lambda=1/2", "--param", "population=2..40", "--seed", "7",
    ];
    let a = swo(&args);
    let b = swo(&args);
    assert_eq!(a.code, 1, "{}{}", a.stdout, a.stderr);
    assert_eq!(a, b);
}

#[test]
fn binary_exit_codes() {
    let fx = Fixture::new();
    let ord = fx.file("lex.toml", "kind = \"leximin\"\n");
    let bin = env!("CARGO_BIN_EXE_swo");
    let ok = Command::new(bin).args(["compare", "--ordering", s(&ord), "1, 3", "1, 2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().next(), Some("StrictlyBetter"));
    let bad = Command::new(bin).args(["compare", "--ordering", s(&fx.path("missing.toml")), "1", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
