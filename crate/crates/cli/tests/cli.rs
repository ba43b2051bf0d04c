use std::process::Command;

use bchdual_cli::report::{Output, Report};
use bchdual_cli::{exit_code, EXIT_MISMATCH, EXIT_OK, EXIT_PRECONDITION};
use serde_json::Value;

fn bchdual(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bchdual")).args(args).env_remove("BCHDUAL_THREADS").output().unwrap();
    let code = out.status.code().expect("exited normally");
    (code, String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Report, String) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = bchdual(&full);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    let report: Report = serde_json::from_str(&out).unwrap();
    (code, report, out)
}

#[test]
fn cosets_power_form_has_no_closed_form() {
    let (_, r, _) = json(&["cosets", "--q", "3", "--m", "6", "--s", "2", "--top", "1"]);
    let Output::Cosets(c) = r.output else { panic!() };
    assert_eq!(c.n, 91);
    assert_eq!(c.top.len(), 1);
    assert_eq!(c.top[0].leader, 49);
    assert_eq!(c.top[0].closed_form, None);
    assert_eq!(c.closed_form_note.as_deref(), Some("s>1: no closed form"));
    let (_, table, _) = bchdual(&["cosets", "--q", "3", "--m", "6", "--s", "2", "--top", "1"]);
    assert!(table.contains("n/a (s>1: no closed form)"));
}

#[test]
fn cosets_binary_primitive_agrees_with_closed_form() {
    let (_, r, _) = json(&["cosets", "--q", "2", "--m", "6", "--lambda", "1", "--top", "3", "--closed-form"]);
    let Output::Cosets(c) = r.output else { panic!() };
    let leaders: Vec<u64> = c.top.iter().map(|t| t.leader).collect();
    assert_eq!(leaders, [31, 27, 23]);
    assert!(c.top.iter().all(|t| t.agrees == Some(true)));
    assert_eq!(c.formulas.len(), 3);
    assert_eq!(c.coset_count, 13);
    assert_eq!(c.cosets.iter().map(|r| r.size).sum::<usize>(), 63);
}

#[test]
fn cosets_modulus_given_directly() {
    let (_, r, _) = json(&["cosets", "--q", "3", "--n", "40", "--top", "2"]);
    let Output::Cosets(c) = r.output else { panic!() };
    assert_eq!(c.top.iter().map(|t| t.leader).collect::<Vec<_>>(), [25, 22]);
    assert_eq!(r.input.n, Some(40));
    assert_eq!(r.input.m, None);
}

#[test]
fn cosets_rejects_non_coprime_modulus() {
    let (code, out, err) = bchdual(&["cosets", "--q", "3", "--n", "42"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(out.is_empty());
    assert!(err.contains("gcd"), "{err}");
}

#[test]
fn lambda_and_s_together_is_a_precondition_error() {
    let (code, _, err) = bchdual(&["dual-bound", "--q", "2", "--m", "6", "--lambda", "1", "--s", "1", "--delta", "3"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("cannot be used with"), "{err}");
}

#[test]
fn dual_bound_binary_certified_exact() {
    let (_, r, _) = json(&["dual-bound", "--q", "2", "--m", "6", "--lambda", "1", "--delta", "3", "--certify"]);
    let Output::DualBound(d) = r.output else { panic!() };
    assert_eq!(d.report.lower_bound_closed, Some(32));
    let c = d.certificate.unwrap();
    assert_eq!((c.lower, c.upper), (32, 32));
    assert_eq!(format!("{:?}", c.status), "Exact");
    assert_eq!(d.dual_dimension, Some(6));
}

#[test]
fn dual_bound_gf5_bracket_then_exact() {
    let (_, r, _) = json(&["dual-bound", "--q", "5", "--m", "2", "--lambda", "1", "--delta", "3", "--certify"]);
    let Output::DualBound(d) = r.output else { panic!() };
    assert_eq!(d.report.lower_bound_closed, Some(15));
    let c = d.certificate.unwrap();
    assert_eq!(c.prior_lower, 15);
    assert_eq!(c.upper, 16);
    assert_eq!(c.lower, 16);
    assert_eq!(c.witness.iter().filter(|&&x| x != 0).count(), 16);
}

#[test]
fn dual_bound_tail_case() {
    let (_, r, _) = json(&["dual-bound", "--q", "3", "--m", "3", "--lambda", "1", "--delta", "26"]);
    let Output::DualBound(d) = r.output else { panic!() };
    assert_eq!(d.report.i_delta_direct, 1);
    assert_eq!(d.report.i_delta_closed.map(|c| c.value), Some(1));
    assert_eq!(d.report.lower_bound_closed, Some(2));
    assert!(d.certificate.is_none());
}

#[test]
fn dual_bound_needs_force_direct_outside_hypotheses() {
    let args = ["dual-bound", "--q", "3", "--m", "2", "--lambda", "2", "--delta", "3"];
    let (code, _, err) = bchdual(&args);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("--force-direct"), "{err}");
    let mut forced = args.to_vec();
    forced.push("--force-direct");
    let (_, r, _) = json(&forced);
    let Output::DualBound(d) = r.output else { panic!() };
    assert_eq!(d.mode, "direct");
    assert_eq!(d.report.lower_bound_closed, None);
}

#[test]
fn dual_bound_delta_out_of_range() {
    let (code, _, err) = bchdual(&["dual-bound", "--q", "2", "--m", "6", "--delta", "64"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(!err.is_empty());
}

#[test]
fn information_set_search_is_seed_deterministic() {
    let args = ["dual-bound", "--q", "2", "--m", "6", "--delta", "15", "--certify", "--budget", "4096", "--seed", "9"];
    let (_, a, ja) = json(&args);
    let (_, _, jb) = json(&args);
    assert_eq!(ja, jb);
    let Output::DualBound(d) = a.output else { panic!() };
    let c = d.certificate.unwrap();
    assert_eq!(c.seed, 9);
    assert_eq!(c.upper, 8);
    assert_eq!(c.lower, 8);
}

type Verdicts = Vec<(u64, bool, Option<bool>)>;

fn threshold(args: &[&str]) -> (Option<u64>, Verdicts) {
    let (_, r, _) = json(args);
    assert!(r.mismatches.is_empty());
    let Output::DuallyBch(d) = r.output else { panic!() };
    (d.threshold, d.rows.iter().map(|r| (r.delta, r.direct, r.closed)).collect())
}

#[test]
fn dually_bch_thresholds() {
    assert_eq!(
        threshold(&["dually-bch", "--q", "5", "--m", "4", "--lambda", "2", "--delta-range", "2:312"]).0,
        Some(247)
    );
    assert_eq!(
        threshold(&["dually-bch", "--q", "7", "--m", "3", "--lambda", "3", "--delta-range", "2:114"]).0,
        Some(95)
    );
}

#[test]
fn dually_bch_transition_in_window() {
    let (t, rows) = threshold(&["dually-bch", "--q", "3", "--m", "9", "--s", "3", "--delta-range", "380:400"]);
    assert_eq!(t, Some(388));
    assert_eq!(rows.len(), 21);
    for (delta, direct, closed) in rows {
        assert_eq!(direct, delta > 388, "delta={delta}");
        assert_eq!(closed, Some(direct));
    }
}

#[test]
fn dually_bch_rows_ordered_regardless_of_threads() {
    let args = ["dually-bch", "--q", "3", "--m", "6", "--s", "2", "--format", "json"];
    let (_, one, _) = bchdual(&[&args[..], &["--threads", "1"]].concat());
    let out = Command::new(env!("CARGO_BIN_EXE_bchdual")).args(args).env("BCHDUAL_THREADS", "3").output().unwrap();
    assert_eq!(one, String::from_utf8(out.stdout).unwrap());
    let r: Report = serde_json::from_str(&one).unwrap();
    let Output::DuallyBch(d) = r.output else { panic!() };
    let deltas: Vec<u64> = d.rows.iter().map(|r| r.delta).collect();
    assert_eq!(deltas, (2..=91).collect::<Vec<_>>());
}

#[test]
fn dually_bch_range_outside_length() {
    let (code, _, err) = bchdual(&["dually-bch", "--q", "7", "--m", "3", "--lambda", "3", "--delta-range", "2:115"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("2:114"), "{err}");
}

#[test]
fn verify_paper_all_ok() {
    let (code, out, _) = bchdual(&["verify-paper"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("MISMATCH"));
    let (_, r, _) = json(&["verify-paper"]);
    let Output::VerifyPaper(v) = r.output else { panic!() };
    assert!(v.checks.iter().all(|c| c.ok));
    for g in ["leaders", "bounds", "dually", "distance", "props"] {
        assert!(v.checks.iter().any(|c| c.group == g), "missing group {g}");
    }
    assert_eq!(v.props.len(), 3);
}

#[test]
fn verify_paper_only_filters() {
    let (_, r, _) = json(&["verify-paper", "--only", "leaders"]);
    let Output::VerifyPaper(v) = r.output else { panic!() };
    assert!(!v.checks.is_empty());
    assert!(v.checks.iter().all(|c| c.group == "leaders"));
    assert!(v.props.is_empty());

    let (_, r, _) = json(&["verify-paper", "--only", "tperp_leader_membership"]);
    let Output::VerifyPaper(v) = r.output else { panic!() };
    assert_eq!(v.props.len(), 1);
    assert_eq!(v.props[0].lemma_id.as_str(), "tperp_leader_membership");
}

#[test]
fn verify_paper_custom_grid() {
    let dir = std::env::temp_dir().join(format!("bchdual-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.toml");
    std::fs::write(
        &path,
        "[[grid]]\nlemma_id = \"leader_floor_power_form\"\nq = [2]\nm = [6]\ns = [1, 2]\nmax_modulus = 100\n",
    )
    .unwrap();
    let (_, r, _) = json(&["verify-paper", "--only", "props", "--grid", path.to_str().unwrap()]);
    let Output::VerifyPaper(v) = r.output else { panic!() };
    assert_eq!(v.props.len(), 1);
    assert_eq!(v.props[0].parameter_grid.len(), 2);

    std::fs::write(&path, "[[grid]]\nlemma_id = \"nope\"\nq = [2]\n").unwrap();
    let (code, _, _) = bchdual(&["verify-paper", "--grid", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_only_group() {
    let (code, _, err) = bchdual(&["verify-paper", "--only", "nothing"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("leaders"));
}

#[test]
fn json_round_trips_for_every_command() {
    for args in [
        &["cosets", "--q", "3", "--n", "40", "--top", "2"][..],
        &["dual-bound", "--q", "5", "--m", "2", "--delta", "3", "--certify"],
        &["dually-bch", "--q", "7", "--m", "3", "--lambda", "3"],
        &["verify-paper", "--only", "bounds"],
    ] {
        let (_, report, text) = json(args);
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        let generic: Value = serde_json::from_str(&text).unwrap();
        assert!(generic["output"]["operation"].is_string());
        assert!(generic["input"].is_object());
    }
}

#[test]
fn csv_and_table_show_the_same_values() {
    let base = ["dually-bch", "--q", "7", "--m", "3", "--lambda", "3", "--delta-range", "90:100"];
    let (_, table, _) = bchdual(&base);
    let (_, csv, _) = bchdual(&[&base[..], &["--format", "csv"]].concat());
    assert!(csv.contains("# verdicts\ndelta,I(delta),direct,closed,witness\n"));
    assert!(csv.contains("threshold,95"));
    let cells = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| l.starts_with("96"))
            .flat_map(|l| l.split([',', ' ']).map(String::from).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect()
    };
    assert_eq!(cells(&table), cells(&csv));
}

#[test]
fn mismatches_exit_with_two() {
    let (_, mut r, _) = json(&["verify-paper", "--only", "leaders"]);
    assert_eq!(exit_code(&r), EXIT_OK);
    r.mismatches.push("injected".into());
    assert_eq!(exit_code(&r), EXIT_MISMATCH);
    assert!(r.render(bchdual_cli::Format::Table).contains("injected"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = bchdual(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("dually-bch"));
}
