//! Brute-force checks of the coset-leader and membership lemmas behind the
//! closed forms, driven by a TOML grid manifest.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::checked_pow;
use crate::bch::{BchError, BchFamily, DefiningSetSweep, LambdaKind};
use crate::cyclotomic::orbit_leader;

/// The manifest shipped with the crate.
pub const DEFAULT_MANIFEST: &str = include_str!("../grids/default.toml");

#[derive(Debug, thiserror::Error)]
pub enum PropError {
    #[error("cannot read manifest {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid manifest: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("grid entry for {lemma} needs {field}")]
    MissingField { lemma: LemmaId, field: &'static str },
    #[error("hypothesis violated for {lemma} at q={q} m={m} {lambda}: {reason}")]
    Hypothesis { lemma: LemmaId, q: u64, m: u32, lambda: LambdaKind, reason: &'static str },
    #[error(transparent)]
    Bch(#[from] BchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `CL(q^{ts}-1 + (q^s-1) u q^{ts}) >= q^{ts+s}-1` modulo `q^m-1`.
    LeaderFloorPowerForm,
    /// `CL((lambda u+1) q^{t+1} - q + lambda s) > q^{t+1} - q + lambda s` modulo `q^m-1`.
    LeaderFloorDivisorForm,
    /// Specific elements of `T⊥` are coset leaders for given delta ranges.
    TperpLeaderMembership,
}

impl LemmaId {
    pub const ALL: [LemmaId; 3] =
        [LemmaId::LeaderFloorPowerForm, LemmaId::LeaderFloorDivisorForm, LemmaId::TperpLeaderMembership];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::LeaderFloorPowerForm => "leader_floor_power_form",
            LemmaId::LeaderFloorDivisorForm => "leader_floor_divisor_form",
            LemmaId::TperpLeaderMembership => "tperp_leader_membership",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LemmaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL.into_iter().find(|l| l.as_str() == s).ok_or_else(|| format!("unknown lemma id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTuple {
    pub q: u64,
    pub m: u32,
    pub lambda: LambdaKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub params: ParamTuple,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropResult {
    pub lemma_id: LemmaId,
    pub parameter_grid: Vec<ParamTuple>,
    pub checks: u64,
    pub failures: Vec<Counterexample>,
}

impl PropResult {
    fn single(lemma_id: LemmaId, params: ParamTuple) -> Self {
        PropResult { lemma_id, parameter_grid: vec![params], checks: 0, failures: Vec::new() }
    }

    fn fail(&mut self, detail: String) {
        let params = self.parameter_grid[0];
        self.failures.push(Counterexample { params, detail });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: PropResult) -> PropResult {
        self.parameter_grid.extend(other.parameter_grid);
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

fn pw(q: u64, e: u32) -> u64 {
    q.pow(e)
}

fn modulus(lemma: LemmaId, q: u64, m: u32, lambda: LambdaKind) -> Result<u64, PropError> {
    BchFamily::new(q, m, lambda)?;
    checked_pow(q, m).map(|v| v - 1).ok_or(PropError::Hypothesis { lemma, q, m, lambda, reason: "q^m overflows" })
}

pub fn check_leader_floor_power_form(q: u64, s: u32, m: u32) -> Result<PropResult, PropError> {
    let lemma = LemmaId::LeaderFloorPowerForm;
    let lambda = LambdaKind::PowerForm(s);
    let big = modulus(lemma, q, m, lambda)?;
    if m / s < 3 {
        return Err(PropError::Hypothesis { lemma, q, m, lambda, reason: "needs m/s >= 3" });
    }
    let mut res = PropResult::single(lemma, ParamTuple { q, m, lambda });
    let qs = pw(q, s) - 1;
    for t in 1..=m / s - 2 {
        let floor = pw(q, t * s + s) - 1;
        let top = (pw(q, m - t * s) - 1) / qs;
        for u in 1..top {
            let a = pw(q, t * s) - 1 + qs * u * pw(q, t * s);
            let leader = orbit_leader(a, q, big);
            res.checks += 1;
            if leader < floor {
                res.fail(format!("t={t} u={u}: CL({a}) = {leader} < {floor}"));
            }
        }
    }
    Ok(res)
}

pub fn check_leader_floor_divisor_form(q: u64, lambda: u64, m: u32) -> Result<PropResult, PropError> {
    let lemma = LemmaId::LeaderFloorDivisorForm;
    let kind = LambdaKind::DivisorOfQMinus1(lambda);
    let big = modulus(lemma, q, m, kind)?;
    if lambda == q - 1 {
        return Err(PropError::Hypothesis { lemma, q, m, lambda: kind, reason: "needs lambda != q - 1" });
    }
    let mut res = PropResult::single(lemma, ParamTuple { q, m, lambda: kind });
    for s in 1..(q - 1) / lambda {
        for t in 0..m.saturating_sub(1) {
            let floor = pw(q, t + 1) - q + lambda * s;
            let top = (pw(q, m - t) - 1) / lambda - s * pw(q, m - t - 1);
            for u in 1..top {
                let a = (lambda * u + 1) * pw(q, t + 1) - q + lambda * s;
                let leader = orbit_leader(a, q, big);
                res.checks += 1;
                if leader <= floor {
                    res.fail(format!("s={s} t={t} u={u}: CL({a}) = {leader} <= {floor}"));
                }
            }
        }
    }
    Ok(res)
}

/// `(lo, hi, e)`: for `lo < delta <= hi`, `e` should be a leader in `T⊥`.
fn membership_items(q: u64, m: u32, kind: LambdaKind, n: u64) -> Vec<(u64, u64, u64)> {
    match kind {
        LambdaKind::PowerForm(s) => {
            let qs = pw(q, s) - 1;
            (1..=m / s - 2)
                .map(|t| {
                    let e = (pw(q, m - t * s) + pw(q, m - t * s - 1) - pw(q, m - (t + 1) * s - 1) - 1) / qs;
                    ((pw(q, t * s) - 1) / qs, (pw(q, (t + 1) * s) - 1) / qs, e)
                })
                .collect()
        }
        LambdaKind::DivisorOfQMinus1(l) => {
            let b = ((l - m as u64 % l) % l) as u32;
            let e1 = (pw(q, m) - ((l - 1) * q + 1) * pw(q, m - 2) - 1) / l;
            let e2 = ((b..m).map(|j| pw(q, j)).sum::<u64>() + 2 * (0..b).map(|j| pw(q, j)).sum::<u64>()) / l;
            let e3 = (q - 1 + l) / l;
            vec![
                (1, (q - 1) / l + 1, e1),
                ((q - 1) / l + 1, (pw(q, m - 1) - 1) / l, e2),
                ((pw(q, m - 1) - 1) / l, n - pw(q, m - 1), e3),
            ]
        }
    }
}

pub fn check_tperp_leader_membership(q: u64, kind: LambdaKind, m: u32) -> Result<PropResult, PropError> {
    let lemma = LemmaId::TperpLeaderMembership;
    let family = BchFamily::new(q, m, kind)?;
    let hyp = |reason| PropError::Hypothesis { lemma, q, m, lambda: kind, reason };
    match kind {
        LambdaKind::PowerForm(s) if s < 2 || m / s < 3 => return Err(hyp("needs s > 1 and m/s >= 3")),
        LambdaKind::DivisorOfQMinus1(l) if q <= 3 || l <= 1 || l >= q - 1 || m < 2 => {
            return Err(hyp("needs q > 3, 1 < lambda < q - 1, m >= 2"))
        }
        _ => {}
    }
    if let LambdaKind::DivisorOfQMinus1(l) = kind {
        // The three elements are integers only when lambda divides their numerators.
        let b = ((l - m as u64 % l) % l) as u32;
        let e2 = (b..m).map(|j| pw(q, j)).sum::<u64>() + 2 * (0..b).map(|j| pw(q, j)).sum::<u64>();
        if e2 % l != 0 || (pw(q, m) - ((l - 1) * q + 1) * pw(q, m - 2) - 1) % l != 0 {
            return Err(hyp("membership element is not an integer"));
        }
    }
    let n = family.n();
    let table = family.coset_table()?;
    let items = membership_items(q, m, kind, n);
    let mut res = PropResult::single(lemma, ParamTuple { q, m, lambda: kind });
    let mut sweep = DefiningSetSweep::new(&family, &table)?;
    while let Some((delta, t)) = sweep.advance() {
        for &(lo, hi, e) in &items {
            if lo < delta && delta <= hi {
                res.checks += 1;
                if e >= n || !table.is_leader(e) {
                    res.fail(format!("delta={delta}: {e} is not a coset leader mod {n}"));
                } else if t.contains((n - e) % n) {
                    res.fail(format!("delta={delta}: {e} not in T-perp"));
                }
            }
        }
    }
    Ok(res)
}

/// One `[[grid]]` table of the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub lemma_id: LemmaId,
    pub q: Vec<u64>,
    #[serde(default)]
    pub m: Option<Vec<u32>>,
    #[serde(default)]
    pub s: Option<Vec<u32>>,
    #[serde(default)]
    pub lambda: Option<Vec<u64>>,
    #[serde(default)]
    pub max_modulus: Option<u64>,
    #[serde(default)]
    pub max_length: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridManifest {
    pub grid: Vec<GridEntry>,
}

impl GridManifest {
    pub fn parse(text: &str) -> Result<Self, PropError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, PropError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PropError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn default_grids() -> Self {
        Self::parse(DEFAULT_MANIFEST).expect("bundled manifest parses")
    }
}

fn allowed<T: PartialEq>(list: &Option<Vec<T>>, v: &T) -> bool {
    list.as_ref().map_or(true, |l| l.contains(v))
}

/// Every admissible parameter tuple of an entry, in `(q, m, lambda)` order.
pub fn expand(entry: &GridEntry) -> Result<Vec<ParamTuple>, PropError> {
    let lemma = entry.lemma_id;
    let mut out = Vec::new();
    for &q in &entry.q {
        let mut m = 1u32;
        loop {
            let Some(big) = checked_pow(q, m).map(|v| v - 1) else { break };
            let over = match lemma {
                // Every admissible length is at least sqrt(q^m - 1); the per-family cap is applied below.
                LemmaId::TperpLeaderMembership => {
                    let cap = entry.max_length.ok_or(PropError::MissingField { lemma, field: "max_length" })?;
                    big > cap.saturating_mul(cap)
                }
                _ => big > entry.max_modulus.ok_or(PropError::MissingField { lemma, field: "max_modulus" })?,
            };
            if over {
                break;
            }
            if allowed(&entry.m, &m) {
                let mut kinds = Vec::new();
                match lemma {
                    LemmaId::LeaderFloorPowerForm => {
                        kinds.extend((1..=m).filter(|&s| m % s == 0 && m / s >= 3).map(LambdaKind::PowerForm));
                    }
                    LemmaId::LeaderFloorDivisorForm => {
                        if m >= 2 {
                            kinds.extend(
                                (1..q.saturating_sub(1))
                                    .filter(|&l| (q - 1) % l == 0)
                                    .map(LambdaKind::DivisorOfQMinus1),
                            );
                        }
                    }
                    LemmaId::TperpLeaderMembership => {
                        let cap = entry.max_length.expect("checked above");
                        let fits = |k: LambdaKind| BchFamily::new(q, m, k).is_ok_and(|f| f.n() <= cap);
                        kinds.extend(
                            (2..=m)
                                .filter(|&s| m % s == 0 && m / s >= 3)
                                .map(LambdaKind::PowerForm)
                                .filter(|&k| fits(k)),
                        );
                        if q > 3 && m >= 2 {
                            kinds.extend(
                                (2..q - 1)
                                    .filter(|&l| (q - 1) % l == 0)
                                    .map(LambdaKind::DivisorOfQMinus1)
                                    .filter(|&k| fits(k)),
                            );
                        }
                    }
                }
                for lambda in kinds {
                    let keep = match lambda {
                        LambdaKind::PowerForm(s) => allowed(&entry.s, &s),
                        LambdaKind::DivisorOfQMinus1(l) => allowed(&entry.lambda, &l),
                    };
                    if keep {
                        out.push(ParamTuple { q, m, lambda });
                    }
                }
            }
            m += 1;
        }
    }
    Ok(out)
}

pub fn check(lemma: LemmaId, p: ParamTuple) -> Result<PropResult, PropError> {
    match (lemma, p.lambda) {
        (LemmaId::LeaderFloorPowerForm, LambdaKind::PowerForm(s)) => check_leader_floor_power_form(p.q, s, p.m),
        (LemmaId::LeaderFloorDivisorForm, LambdaKind::DivisorOfQMinus1(l)) => {
            check_leader_floor_divisor_form(p.q, l, p.m)
        }
        (LemmaId::TperpLeaderMembership, k) => check_tperp_leader_membership(p.q, k, p.m),
        (lemma, lambda) => {
            Err(PropError::Hypothesis { lemma, q: p.q, m: p.m, lambda, reason: "wrong lambda family for lemma" })
        }
    }
}

/// Runs every entry (optionally only one lemma), one merged result per lemma.
pub fn run_manifest(manifest: &GridManifest, only: Option<LemmaId>) -> Result<Vec<PropResult>, PropError> {
    let mut results: Vec<PropResult> = Vec::new();
    for entry in manifest.grid.iter().filter(|e| only.map_or(true, |l| l == e.lemma_id)) {
        let tuples = expand(entry)?;
        let parts: Vec<PropResult> = tuples.par_iter().map(|&p| check(entry.lemma_id, p)).collect::<Result<_, _>>()?;
        let empty = PropResult { lemma_id: entry.lemma_id, parameter_grid: vec![], checks: 0, failures: vec![] };
        let merged = parts.into_iter().fold(empty, PropResult::merge);
        match results.iter().position(|r| r.lemma_id == entry.lemma_id) {
            Some(i) => {
                let prev = results.remove(i);
                results.insert(i, prev.merge(merged));
            }
            None => results.push(merged),
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_form_examples() {
        for (q, s, m) in [(2, 1, 6), (3, 1, 4), (2, 2, 6)] {
            let r = check_leader_floor_power_form(q, s, m).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert!(r.checks > 0);
        }
        assert!(check_leader_floor_power_form(2, 2, 4).is_err());
    }

    #[test]
    fn divisor_form_examples() {
        for (q, l, m) in [(5, 2, 3), (5, 1, 3), (7, 3, 2)] {
            let r = check_leader_floor_divisor_form(q, l, m).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert!(r.checks > 0);
        }
        assert!(check_leader_floor_divisor_form(5, 4, 3).is_err());
    }

    #[test]
    fn membership_examples() {
        let items = membership_items(3, 6, LambdaKind::PowerForm(2), 91);
        assert_eq!(items, vec![(1, 10, 13)]);
        let r = check_tperp_leader_membership(3, LambdaKind::PowerForm(2), 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks, 9);

        let items = membership_items(5, 4, LambdaKind::DivisorOfQMinus1(2), 312);
        assert_eq!(items[0].2, (625 - 6 * 25 - 1) / 2);
        assert_eq!(items[2].2, 3);
        let r = check_tperp_leader_membership(5, LambdaKind::DivisorOfQMinus1(2), 4).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(check_tperp_leader_membership(5, LambdaKind::DivisorOfQMinus1(1), 4).is_err());
    }

    #[test]
    fn manifest_parsing() {
        let m = GridManifest::default_grids();
        assert_eq!(m.grid.len(), 3);
        assert!(GridManifest::parse("[[grid]]\nlemma_id = \"nope\"\nq = [2]").is_err());
        let small = GridManifest::parse(
            "[[grid]]\nlemma_id = \"leader_floor_power_form\"\nq = [2]\ns = [1]\nm = [6]\nmax_modulus = 100",
        )
        .unwrap();
        let tuples = expand(&small.grid[0]).unwrap();
        assert_eq!(tuples, vec![ParamTuple { q: 2, m: 6, lambda: LambdaKind::PowerForm(1) }]);
        let missing = GridManifest::parse("[[grid]]\nlemma_id = \"leader_floor_power_form\"\nq = [2]").unwrap();
        assert!(matches!(expand(&missing.grid[0]), Err(PropError::MissingField { .. })));
    }

    #[test]
    fn small_manifest_runs_clean() {
        let text = "[[grid]]\nlemma_id = \"leader_floor_divisor_form\"\nq = [3, 5]\nmax_modulus = 1000\n\
                    [[grid]]\nlemma_id = \"tperp_leader_membership\"\nq = [2, 5]\nmax_length = 400\n";
        let results = run_manifest(&GridManifest::parse(text).unwrap(), None).unwrap();
        assert_eq!(results.len(), 2);
        for r in &results {
            assert!(r.passed(), "{}: {:?}", r.lemma_id, r.failures);
            assert!(r.checks > 0, "{}", r.lemma_id);
        }
    }
}
