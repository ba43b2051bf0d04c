use bchdual_core::dualtools::{self, closed_path, dually_threshold, sweep};
use bchdual_core::mindist::{certify, CertifyConfig, SearchConfig, DEFAULT_INFO_WEIGHT};
use bchdual_core::paper_props::{run_manifest, GridManifest, LemmaId};
use bchdual_core::{
    analyze, dual_code_params, largest_leaders_closed_form, BchFamily, BchSpec, CodeContext, CosetTable, DualError,
    LambdaKind, LeaderFamily, MinDistError, Status,
};

use crate::args::{CosetsArgs, DualBoundArgs, DuallyBchArgs, FamilyArgs, VerifyArgs};
use crate::report::{
    CheckRow, CosetRow, CosetsOutput, DualBoundOutput, DuallyBchOutput, DuallyRow, InputEcho, Output, Report,
    TopLeader, VerifyOutput,
};

/// A violated precondition; the process exits with status 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precondition(pub String);

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Precondition {}

fn pre<E: std::fmt::Display>(e: E) -> Precondition {
    Precondition(e.to_string())
}

fn family(a: &FamilyArgs) -> Result<BchFamily, Precondition> {
    BchFamily::new(a.q, a.m, a.lambda_kind()).map_err(pre)
}

fn echo(f: &BchFamily) -> InputEcho {
    InputEcho { q: Some(f.q()), m: Some(f.m()), n: Some(f.n()), lambda: Some(f.lambda()), ..InputEcho::default() }
}

const NO_CLOSED_FORM: &str = "no closed form applies: need lambda = q^s - 1 with m/s >= 3, \
                              or lambda | q - 1 with lambda != q - 1 and m >= 2 (use --force-direct)";

/// The leader family with a closed form for `(q, m, lambda)`, or why there is none.
fn leader_family(q: u64, lambda: LambdaKind) -> Result<LeaderFamily, String> {
    match lambda {
        LambdaKind::PowerForm(s) if s > 1 => Err("s>1: no closed form".into()),
        LambdaKind::DivisorOfQMinus1(1) => Ok(LeaderFamily::Full),
        LambdaKind::PowerForm(_) if q == 2 => Ok(LeaderFamily::Full),
        LambdaKind::DivisorOfQMinus1(2) => Ok(LeaderFamily::Half),
        LambdaKind::PowerForm(_) => Ok(LeaderFamily::QMinus1),
        LambdaKind::DivisorOfQMinus1(l) if l == q - 1 => Ok(LeaderFamily::QMinus1),
        LambdaKind::DivisorOfQMinus1(l) => Err(format!("lambda={l}: no closed form")),
    }
}

fn formulas(family: LeaderFamily) -> Vec<String> {
    match family {
        LeaderFamily::Full => vec![
            "delta1 = (q-1) q^(m-1) - 1".into(),
            "delta2 = (q-1) q^(m-1) - 1 - q^floor((m-1)/2)".into(),
            "delta3 = (q-1) q^(m-1) - 1 - q^floor((m+1)/2)  (m >= 4)".into(),
        ],
        LeaderFamily::QMinus1 => {
            vec!["delta1 = q^(m-1) - 1 - (sum_{t=1}^{q-2} q^(ceil(m t/(q-1)) - 1) + 2 - q)/(q-1)  (q >= 3, m >= 4)"
                .into()]
        }
        LeaderFamily::Half => vec![
            "delta1 = ((q-1) q^(m-1) - 1 - q^floor((m-1)/2))/2".into(),
            "delta2 = ((q-1) q^(m-1) - 1 - q^floor((m+1)/2))/2".into(),
        ],
    }
}

pub fn cosets(a: &CosetsArgs) -> Result<Report, Precondition> {
    let (n, input, closed) = match (a.n, a.m) {
        (Some(n), _) => {
            let input = InputEcho { q: Some(a.q), n: Some(n), ..InputEcho::default() };
            (n, input, Err("no family: modulus given directly".to_string()))
        }
        (None, Some(m)) => {
            let fa = FamilyArgs { q: a.q, m, lambda: a.lambda, s: a.s };
            let f = family(&fa)?;
            (f.n(), echo(&f), leader_family(f.q(), f.lambda()).map(|lf| (lf, m)))
        }
        (None, None) => return Err(Precondition("either --n or --m is required".into())),
    };
    let table = CosetTable::new(n, a.q).map_err(pre)?;
    let top = table.largest_leaders(a.top);
    let (closed_values, note, formula_lines) = match closed {
        Ok((lf, m)) => match largest_leaders_closed_form(a.q, m, lf) {
            Ok(v) => (v, None, if a.closed_form { formulas(lf) } else { Vec::new() }),
            Err(e) => (Vec::new(), Some(e.to_string()), Vec::new()),
        },
        Err(note) => (Vec::new(), Some(note), Vec::new()),
    };
    let mut mismatches = Vec::new();
    let top: Vec<TopLeader> = top
        .iter()
        .enumerate()
        .map(|(i, &leader)| {
            let closed_form = closed_values.get(i).copied();
            let agrees = closed_form.map(|c| c == leader);
            if agrees == Some(false) {
                mismatches.push(format!("leader rank {}: computed {leader}, closed form {}", i + 1, closed_values[i]));
            }
            TopLeader { rank: i + 1, leader, closed_form, agrees }
        })
        .collect();
    let cosets = table.cosets().map(|(leader, c)| CosetRow { leader, size: c.len(), members: c.to_vec() }).collect();
    let output = CosetsOutput {
        n,
        q: a.q,
        coset_count: table.coset_count(),
        cosets,
        top,
        closed_form_note: note,
        formulas: formula_lines,
    };
    Ok(Report { input, output: Output::Cosets(output), mismatches })
}

fn certify_config(a: &DualBoundArgs) -> CertifyConfig {
    CertifyConfig {
        budget: a.search.budget,
        search: SearchConfig { trials: a.search.trials, seed: a.search.seed, info_weight: DEFAULT_INFO_WEIGHT },
    }
}

pub fn dual_bound(a: &DualBoundArgs) -> Result<Report, Precondition> {
    let f = family(&a.family)?;
    let spec = f.with_delta(a.delta).map_err(pre)?;
    if closed_path(&f).is_none() && !a.force_direct {
        return Err(Precondition(NO_CLOSED_FORM.into()));
    }
    let cx = CodeContext::new(&f).map_err(pre)?;
    let report = analyze(&spec, cx.table()).map_err(pre)?;
    let mut mismatches = bound_mismatches(&report);
    let (certificate, dual_dimension) = if a.certify {
        let params = dual_code_params(&spec, &cx).map_err(pre)?;
        match certify(&cx, &params, &report, &certify_config(a)) {
            Ok(c) => (Some(c), Some(params.k)),
            Err(e @ (MinDistError::BoundViolated { .. } | MinDistError::BadWitness(_))) => {
                mismatches.push(e.to_string());
                (None, Some(params.k))
            }
            Err(e) => return Err(pre(e)),
        }
    } else {
        (None, None)
    };
    let mode = if report.i_delta_closed.is_some() { "closed" } else { "direct" };
    let mut input = echo(&f);
    input.delta = Some(a.delta);
    let output = DualBoundOutput { mode: mode.into(), report, dual_dimension, certificate };
    Ok(Report { input, output: Output::DualBound(output), mismatches })
}

fn bound_mismatches(r: &bchdual_core::BoundReport) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(c) = &r.i_delta_closed {
        if c.value != r.i_delta_direct {
            out.push(format!("delta={}: I(delta) closed {} != direct {}", r.delta, c.value, r.i_delta_direct));
        }
    }
    if let Some(b) = r.lower_bound_closed {
        if b > r.lower_bound_direct {
            out.push(format!("delta={}: closed bound {b} exceeds cyclic BCH bound {}", r.delta, r.lower_bound_direct));
        }
    }
    if let Some(c) = r.dually_bch_closed {
        if c != r.dually_bch_direct.dually_bch {
            out.push(format!("delta={}: dually-BCH closed {c} != direct {}", r.delta, r.dually_bch_direct.dually_bch));
        }
    }
    out
}

pub fn dually_bch(a: &DuallyBchArgs) -> Result<Report, Precondition> {
    let f = family(&a.family)?;
    let (lo, hi) = a.delta_range.unwrap_or((2, f.n()));
    if lo < 2 || hi > f.n() {
        return Err(Precondition(format!("delta range {lo}:{hi} must lie within 2:{}", f.n())));
    }
    let table = f.coset_table().map_err(pre)?;
    match dualtools::dually_bch_closed(&f.with_delta(lo).map_err(pre)?, &table) {
        Ok(_) => {}
        Err(DualError::Hypothesis(msg)) if !a.force_direct => {
            return Err(Precondition(format!("{msg} (use --force-direct)")))
        }
        Err(DualError::Hypothesis(_)) => {}
        Err(e) => return Err(pre(e)),
    }
    let reports = sweep(&f, &table, lo, hi).map_err(pre)?;
    let mismatches = reports.iter().flat_map(bound_mismatches).collect();
    let threshold = dually_threshold(&reports);
    let closed = reports.iter().any(|r| r.dually_bch_closed.is_some());
    let delta1 = table.largest_leaders(1)[0];
    let delta2 = table.largest_leaders(2).get(1).copied();
    let rows = reports
        .into_iter()
        .map(|r| DuallyRow {
            delta: r.delta,
            i_delta: r.i_delta_direct,
            direct: r.dually_bch_direct.dually_bch,
            closed: r.dually_bch_closed,
            witness: r.dually_bch_direct.witness,
        })
        .collect();
    let mut input = echo(&f);
    input.delta_range = Some((lo, hi));
    let mode = if closed { "closed" } else { "direct" };
    let output = DuallyBchOutput { mode: mode.into(), n: f.n(), delta1, delta2, threshold, rows };
    Ok(Report { input, output: Output::DuallyBch(output), mismatches })
}

const GROUPS: [&str; 5] = ["leaders", "bounds", "dually", "distance", "props"];

fn check(group: &str, name: String, expected: String, computed: String) -> CheckRow {
    let ok = expected == computed;
    CheckRow { group: group.into(), name, expected, computed, ok }
}

fn show<T: std::fmt::Display, E: std::fmt::Display>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn family_of(q: u64, m: u32, l: LambdaKind) -> BchFamily {
    BchFamily::new(q, m, l).expect("built-in example parameters are valid")
}

const ONE: LambdaKind = LambdaKind::DivisorOfQMinus1(1);

fn leader_checks(out: &mut Vec<CheckRow>) {
    for (q, m, l, want) in [
        (3, 6, LambdaKind::PowerForm(2), 49),
        (3, 9, LambdaKind::PowerForm(3), 388),
        (5, 4, LambdaKind::DivisorOfQMinus1(2), 247),
        (7, 3, LambdaKind::DivisorOfQMinus1(3), 95),
    ] {
        let f = family_of(q, m, l);
        let got = f.coset_table().map(|t| t.largest_leaders(1)[0]);
        out.push(check("leaders", format!("largest leader, q={q} n={}", f.n()), want.to_string(), show(got)));
    }
    let f = family_of(2, 6, ONE);
    let brute = f.coset_table().map(|t| format!("{:?}", t.largest_leaders(3)));
    let closed = largest_leaders_closed_form(2, 6, LeaderFamily::Full).map(|v| format!("{v:?}"));
    out.push(check("leaders", "largest 3 leaders, q=2 n=63 (enumerated)".into(), "[31, 27, 23]".into(), show(brute)));
    out.push(check("leaders", "largest 3 leaders, q=2 n=63 (closed form)".into(), "[31, 27, 23]".into(), show(closed)));
}

fn bound_checks(out: &mut Vec<CheckRow>) {
    for (q, m, l, delta, want) in [
        (2, 6, LambdaKind::PowerForm(1), 3, 32),
        (2, 6, LambdaKind::PowerForm(1), 15, 8),
        (3, 3, ONE, 5, 9),
        (5, 2, ONE, 3, 15),
    ] {
        let got = BchSpec::new(q, m, l, delta).map_err(DualError::from).and_then(|s| dualtools::dual_lower_bound(&s));
        let name = format!("dual bound, q={q} m={m} {l} delta={delta}");
        out.push(check("bounds", name, want.to_string(), show(got)));
    }
}

fn dually_checks(out: &mut Vec<CheckRow>) {
    let point = |q, m, l, delta| -> String {
        let run = || -> Result<String, DualError> {
            let spec = BchSpec::new(q, m, l, delta)?;
            let table = spec.family().coset_table()?;
            let r = analyze(&spec, &table)?;
            Ok(format!("direct={} closed={}", r.dually_bch_direct.dually_bch, show_opt(r.dually_bch_closed)))
        };
        show(run())
    };
    for (q, m, l, delta, want) in [
        (3, 6, LambdaKind::PowerForm(2), 50, true),
        (5, 4, LambdaKind::DivisorOfQMinus1(2), 247, false),
        (3, 9, LambdaKind::PowerForm(3), 388, false),
        (3, 9, LambdaKind::PowerForm(3), 389, true),
        (7, 3, LambdaKind::DivisorOfQMinus1(3), 96, true),
        (2, 6, LambdaKind::PowerForm(1), 3, true),
    ] {
        let name = format!("dually-BCH, q={q} m={m} {l} delta={delta}");
        out.push(check("dually", name, format!("direct={want} closed={want}"), point(q, m, l, delta)));
    }
    for (q, m, l, want) in [
        (3, 6, LambdaKind::PowerForm(2), 49),
        (5, 4, LambdaKind::DivisorOfQMinus1(2), 247),
        (3, 9, LambdaKind::PowerForm(3), 388),
        (7, 3, LambdaKind::DivisorOfQMinus1(3), 95),
    ] {
        let f = family_of(q, m, l);
        let got = f
            .coset_table()
            .map_err(DualError::from)
            .and_then(|t| sweep(&f, &t, 2, f.n()))
            .map(|rows| show_opt(dually_threshold(&rows)));
        out.push(check("dually", format!("threshold, q={q} m={m} {l} n={}", f.n()), want.to_string(), show(got)));
    }
}

fn show_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn distance_checks(out: &mut Vec<CheckRow>) {
    for (q, m, delta, want) in [(2, 6, 3, 32), (2, 6, 15, 8), (3, 3, 5, 9), (5, 2, 3, 16)] {
        let run = || -> Result<String, String> {
            let spec = BchSpec::new(q, m, ONE, delta).map_err(|e| e.to_string())?;
            let cx = CodeContext::new(spec.family()).map_err(|e| e.to_string())?;
            let params = dual_code_params(&spec, &cx).map_err(|e| e.to_string())?;
            let rep = analyze(&spec, cx.table()).map_err(|e| e.to_string())?;
            let c = certify(&cx, &params, &rep, &CertifyConfig::default()).map_err(|e| e.to_string())?;
            let status = if c.status == Status::Exact { "exact" } else { "bracketed" };
            Ok(format!("{status} {}", c.upper))
        };
        let name = format!("dual distance, q={q} m={m} delta={delta}");
        out.push(check("distance", name, format!("exact {want}"), run().unwrap_or_else(|e| format!("error: {e}"))));
    }
}

pub fn verify_paper(a: &VerifyArgs) -> Result<Report, Precondition> {
    let (groups, lemma): (Vec<&str>, Option<LemmaId>) = match a.only.as_deref() {
        None => (GROUPS.to_vec(), None),
        Some(g) if GROUPS.contains(&g) => (vec![g], None),
        Some(g) => match g.parse::<LemmaId>() {
            Ok(l) => (vec!["props"], Some(l)),
            Err(_) => {
                let ids: Vec<&str> = LemmaId::ALL.iter().map(|l| l.as_str()).collect();
                return Err(Precondition(format!(
                    "unknown --only {g:?}; expected one of {} or a lemma id ({})",
                    GROUPS.join(", "),
                    ids.join(", ")
                )));
            }
        },
    };
    let manifest = match &a.grid {
        Some(p) => GridManifest::load(p).map_err(pre)?,
        None => GridManifest::default_grids(),
    };
    let mut checks = Vec::new();
    let mut props = Vec::new();
    for g in groups {
        match g {
            "leaders" => leader_checks(&mut checks),
            "bounds" => bound_checks(&mut checks),
            "dually" => dually_checks(&mut checks),
            "distance" => distance_checks(&mut checks),
            _ => {
                props = run_manifest(&manifest, lemma).map_err(pre)?;
                for p in &props {
                    let computed = format!("{} failures in {} checks", p.failures.len(), p.checks);
                    let expected = format!("0 failures in {} checks", p.checks);
                    checks.push(check("props", p.lemma_id.to_string(), expected, computed));
                }
            }
        }
    }
    let mismatches = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}: expected {}, computed {}", c.name, c.expected, c.computed))
        .collect();
    Ok(Report { input: InputEcho::default(), output: Output::VerifyPaper(VerifyOutput { checks, props }), mismatches })
}
