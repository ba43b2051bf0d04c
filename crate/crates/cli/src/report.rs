use std::fmt::Write as _;

use bchdual_core::dualtools::{ClosedCase, ClosedValue};
use bchdual_core::mindist::Method;
use bchdual_core::{BoundReport, DistanceCertificate, DuallyWitness, LambdaKind, PropResult};
use serde::{Deserialize, Serialize};

use crate::args::Format;

/// Everything a command prints, in every format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputEcho,
    pub output: Output,
    /// Disagreements between independent computations; nonempty means exit 2.
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub q: Option<u64>,
    pub m: Option<u32>,
    pub n: Option<u64>,
    pub lambda: Option<LambdaKind>,
    pub delta: Option<u64>,
    pub delta_range: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "operation", rename_all = "kebab-case")]
pub enum Output {
    Cosets(CosetsOutput),
    DualBound(DualBoundOutput),
    DuallyBch(DuallyBchOutput),
    VerifyPaper(VerifyOutput),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetsOutput {
    pub n: u64,
    pub q: u64,
    pub coset_count: usize,
    pub cosets: Vec<CosetRow>,
    pub top: Vec<TopLeader>,
    /// Why no closed form is shown, if none is.
    pub closed_form_note: Option<String>,
    /// Filled by `--closed-form`.
    pub formulas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRow {
    pub leader: u64,
    pub size: usize,
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopLeader {
    pub rank: usize,
    pub leader: u64,
    pub closed_form: Option<u64>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualBoundOutput {
    /// `closed` when the closed forms apply, `direct` under `--force-direct`.
    pub mode: String,
    pub report: BoundReport,
    pub dual_dimension: Option<u64>,
    pub certificate: Option<DistanceCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuallyBchOutput {
    pub mode: String,
    pub n: u64,
    pub delta1: u64,
    pub delta2: Option<u64>,
    /// Largest delta in the range whose code is not dually-BCH.
    pub threshold: Option<u64>,
    pub rows: Vec<DuallyRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuallyRow {
    pub delta: u64,
    pub i_delta: u64,
    pub direct: bool,
    pub closed: Option<bool>,
    pub witness: DuallyWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub checks: Vec<CheckRow>,
    pub props: Vec<PropResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub group: String,
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

/// A titled block of rows; the common shape behind table and csv output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    fn new(title: &str, headers: &[&str]) -> Self {
        Section { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn kv(title: &str, pairs: Vec<(&str, String)>) -> Self {
        let mut s = Section::new(title, &["field", "value"]);
        for (k, v) in pairs {
            s.push(vec![k.into(), v]);
        }
        s
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn lambda_text(l: LambdaKind) -> String {
    match l {
        LambdaKind::DivisorOfQMinus1(l) => format!("lambda={l}"),
        LambdaKind::PowerForm(s) => format!("s={s}"),
    }
}

fn case_text(c: &ClosedValue) -> String {
    let case = match c.case {
        ClosedCase::PowerRange { t } => format!("power range t={t}"),
        ClosedCase::PowerTail => "power tail".into(),
        ClosedCase::DivisorPoint { t, s } => format!("divisor point t={t} s={s}"),
        ClosedCase::DivisorInterval { t, s } => format!("divisor interval t={t} s={s}"),
        ClosedCase::DivisorBoundary { t } => format!("divisor boundary t={t}"),
        ClosedCase::DivisorTail => "divisor tail".into(),
    };
    format!("{} ({case})", c.value)
}

fn method_text(m: Method) -> &'static str {
    match m {
        Method::Exhaustive => "exhaustive",
        Method::InformationSet => "information set",
    }
}

fn witness_text(w: &DuallyWitness) -> String {
    match w {
        DuallyWitness::J(j) => format!("J={j}"),
        DuallyWitness::StrayLeader(l) => format!("stray leader {l}"),
    }
}

impl Report {
    pub fn sections(&self) -> Vec<Section> {
        let mut out = Vec::new();
        let i = &self.input;
        let mut echo = Vec::new();
        if let Some(q) = i.q {
            echo.push(("q", q.to_string()));
        }
        if let Some(m) = i.m {
            echo.push(("m", m.to_string()));
        }
        if let Some(l) = i.lambda {
            echo.push(("lambda", lambda_text(l)));
        }
        if let Some(n) = i.n {
            echo.push(("n", n.to_string()));
        }
        if let Some(d) = i.delta {
            echo.push(("delta", d.to_string()));
        }
        if let Some((a, b)) = i.delta_range {
            echo.push(("delta range", format!("{a}:{b}")));
        }
        if !echo.is_empty() {
            out.push(Section::kv("input", echo));
        }
        match &self.output {
            Output::Cosets(c) => cosets_sections(c, &mut out),
            Output::DualBound(d) => dual_bound_sections(d, &mut out),
            Output::DuallyBch(d) => dually_sections(d, &mut out),
            Output::VerifyPaper(v) => verify_sections(v, &mut out),
        }
        if !self.mismatches.is_empty() {
            let mut s = Section::new("mismatches", &["detail"]);
            for m in &self.mismatches {
                s.push(vec![m.clone()]);
            }
            out.push(s);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => render_table(&self.sections()),
            Format::Csv => render_csv(&self.sections()),
        }
    }
}

fn cosets_sections(c: &CosetsOutput, out: &mut Vec<Section>) {
    out.push(Section::kv(
        "summary",
        vec![("n", c.n.to_string()), ("q", c.q.to_string()), ("cosets", c.coset_count.to_string())],
    ));
    let mut top = Section::new("largest leaders", &["rank", "leader", "closed form", "agrees"]);
    for t in &c.top {
        let closed = match (t.closed_form, &c.closed_form_note) {
            (Some(v), _) => v.to_string(),
            (None, Some(note)) => format!("n/a ({note})"),
            (None, None) => "-".into(),
        };
        top.push(vec![t.rank.to_string(), t.leader.to_string(), closed, opt(t.agrees.map(yes_no))]);
    }
    out.push(top);
    if !c.formulas.is_empty() {
        let mut f = Section::new("closed-form formulas", &["formula"]);
        for line in &c.formulas {
            f.push(vec![line.clone()]);
        }
        out.push(f);
    }
    let mut part = Section::new("cosets", &["leader", "size", "members"]);
    for row in &c.cosets {
        let members: Vec<String> = row.members.iter().map(u64::to_string).collect();
        part.push(vec![row.leader.to_string(), row.size.to_string(), members.join(" ")]);
    }
    out.push(part);
}

fn dual_bound_sections(d: &DualBoundOutput, out: &mut Vec<Section>) {
    let r = &d.report;
    out.push(Section::kv(
        "dual bound",
        vec![
            ("mode", d.mode.clone()),
            ("n", r.n.to_string()),
            ("I(delta) direct", r.i_delta_direct.to_string()),
            ("I(delta) closed", opt(r.i_delta_closed.as_ref().map(case_text))),
            ("bound (closed form)", opt(r.lower_bound_closed)),
            ("bound (cyclic BCH on dual)", r.lower_bound_direct.to_string()),
            ("best lower bound", r.best_lower_bound().to_string()),
            (
                "dually-BCH direct",
                format!("{} ({})", yes_no(r.dually_bch_direct.dually_bch), witness_text(&r.dually_bch_direct.witness)),
            ),
            ("dually-BCH closed", opt(r.dually_bch_closed.map(yes_no))),
            ("delta1", r.delta1.to_string()),
            ("delta2", opt(r.delta2)),
        ],
    ));
    let mut prior = Section::new("prior bounds", &["name", "value", "vacuous"]);
    for b in &r.prior_bounds {
        prior.push(vec![b.name.clone(), b.value.to_string(), yes_no(b.vacuous)]);
    }
    if !prior.rows.is_empty() {
        out.push(prior);
    }
    if let Some(c) = &d.certificate {
        out.push(Section::kv(
            "certificate",
            vec![
                ("dual dimension", opt(d.dual_dimension)),
                ("lower", format!("{} ({})", c.lower, c.lower_source)),
                ("prior lower", format!("{} ({})", c.prior_lower, c.prior_source)),
                ("upper", c.upper.to_string()),
                ("status", format!("{:?}", c.status).to_lowercase()),
                ("method", method_text(c.method).into()),
                ("seed", c.seed.to_string()),
                ("trials run", c.trials_run.to_string()),
            ],
        ));
    }
}

fn dually_sections(d: &DuallyBchOutput, out: &mut Vec<Section>) {
    out.push(Section::kv(
        "summary",
        vec![
            ("mode", d.mode.clone()),
            ("n", d.n.to_string()),
            ("delta1", d.delta1.to_string()),
            ("delta2", opt(d.delta2)),
            ("threshold", opt(d.threshold)),
        ],
    ));
    let mut rows = Section::new("verdicts", &["delta", "I(delta)", "direct", "closed", "witness"]);
    for r in &d.rows {
        rows.push(vec![
            r.delta.to_string(),
            r.i_delta.to_string(),
            r.direct.to_string(),
            opt(r.closed),
            witness_text(&r.witness),
        ]);
    }
    out.push(rows);
}

fn verify_sections(v: &VerifyOutput, out: &mut Vec<Section>) {
    let mut s = Section::new("checks", &["group", "name", "expected", "computed", "status"]);
    for c in &v.checks {
        let status = if c.ok { "OK" } else { "MISMATCH" };
        s.push(vec![c.group.clone(), c.name.clone(), c.expected.clone(), c.computed.clone(), status.into()]);
    }
    out.push(s);
    let mut f = Section::new("lemma counterexamples", &["lemma", "q", "m", "lambda", "detail"]);
    for p in &v.props {
        for c in &p.failures {
            f.push(vec![
                p.lemma_id.to_string(),
                c.params.q.to_string(),
                c.params.m.to_string(),
                lambda_text(c.params.lambda),
                c.detail.clone(),
            ]);
        }
    }
    if !f.rows.is_empty() {
        out.push(f);
    }
}

pub fn render_table(sections: &[Section]) -> String {
    let mut s = String::new();
    for (i, sec) in sections.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "== {} ==", sec.title);
        let mut widths: Vec<usize> = sec.headers.iter().map(|h| h.chars().count()).collect();
        for row in &sec.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut l = String::new();
            for (j, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if j + 1 == cells.len() {
                    l.push_str(cell);
                } else {
                    let _ = write!(l, "{cell:<w$}  ");
                }
            }
            l.trim_end().to_string()
        };
        let _ = writeln!(s, "{}", line(&sec.headers));
        let _ = writeln!(s, "{}", widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        for row in &sec.rows {
            let _ = writeln!(s, "{}", line(row));
        }
    }
    s
}

/// One csv block per section, each led by a `# title` line.
pub fn render_csv(sections: &[Section]) -> String {
    let mut s = String::new();
    for (i, sec) in sections.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "# {}", sec.title);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&sec.headers).expect("in-memory csv");
        for row in &sec.rows {
            w.write_record(row).expect("in-memory csv");
        }
        s.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Section> {
        let mut s = Section::new("t", &["a", "long header"]);
        s.push(vec!["1".into(), "x, y".into()]);
        s.push(vec!["12345".into(), "z".into()]);
        vec![s]
    }

    #[test]
    fn table_columns_align() {
        let t = render_table(&sample());
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "== t ==");
        assert_eq!(lines[1], "a      long header");
        assert_eq!(lines[3], "1      x, y");
        assert_eq!(lines[4], "12345  z");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(render_csv(&sample()), "# t\na,long header\n1,\"x, y\"\n12345,z\n");
    }

    #[test]
    fn json_round_trip() {
        let r = Report {
            input: InputEcho { q: Some(3), n: Some(40), ..InputEcho::default() },
            output: Output::VerifyPaper(VerifyOutput {
                checks: vec![CheckRow {
                    group: "g".into(),
                    name: "n".into(),
                    expected: "1".into(),
                    computed: "1".into(),
                    ok: true,
                }],
                props: vec![],
            }),
            mismatches: vec![],
        };
        let text = r.render(Format::Json);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.render(Format::Json), text);
    }
}
