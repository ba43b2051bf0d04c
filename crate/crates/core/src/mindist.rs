//! Minimum-distance oracle for linear codes over GF(q), `q <= 256`.
//!
//! Small codes are enumerated exhaustively along a p-ary Gray code. Larger
//! ones get a seeded information-set search whose lightest word is paired
//! with a lower bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bch::{generator_matrix, BchError, CodeContext, CodeParams};
use crate::dualtools::BoundReport;
use crate::gf::{Matrix, Poly, ScalarField};

pub const DEFAULT_BUDGET: u64 = 1 << 26;
pub const DEFAULT_TRIALS: u64 = 20_000;
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_INFO_WEIGHT: usize = 2;
const MAX_Q: u64 = 256;
/// Trials per parallel batch; early stopping is checked between batches.
const TRIAL_BATCH: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinDistError {
    #[error("empty code: no nonzero codewords")]
    EmptyCode,
    #[error("exhaustive search needs {needed} codewords, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("field order {0} exceeds the supported maximum of 256")]
    FieldTooLarge(u64),
    #[error("matrix over GF({matrix}) used with GF({field})")]
    FieldMismatch { matrix: u64, field: u64 },
    #[error("lower bound {lower} ({bound_source}) exceeds the weight {upper} of a verified codeword")]
    BoundViolated { lower: u64, bound_source: LowerSource, upper: u64 },
    #[error("witness failed verification: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Bch(#[from] BchError),
}

/// Byte tables for GF(q) with `q <= 256`.
#[derive(Debug, Clone)]
struct Tables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    neg: Vec<u8>,
}

impl Tables {
    fn new(field: &ScalarField) -> Result<Self, MinDistError> {
        let q = field.order();
        if q > MAX_Q {
            return Err(MinDistError::FieldTooLarge(q));
        }
        let mut add = Vec::with_capacity((q * q) as usize);
        let mut mul = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                add.push(field.add(a, b) as u8);
                mul.push(field.mul(a, b) as u8);
            }
        }
        let inv = (0..q).map(|a| field.inv(a).unwrap_or(0) as u8).collect();
        let neg = (0..q).map(|a| field.neg(a) as u8).collect();
        Ok(Tables { q: q as usize, add, mul, inv, neg })
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }
}

fn to_bytes(gen: &Matrix, field: &ScalarField) -> Result<Vec<Vec<u8>>, MinDistError> {
    if gen.field_order() != field.order() {
        return Err(MinDistError::FieldMismatch { matrix: gen.field_order(), field: field.order() });
    }
    if field.order() > MAX_Q {
        return Err(MinDistError::FieldTooLarge(field.order()));
    }
    Ok(gen.rows().iter().map(|r| r.iter().map(|&x| x as u8).collect()).collect())
}

fn weight(word: &[u8]) -> usize {
    word.iter().filter(|&&x| x != 0).count()
}

/// Enumeration generators: every row times every additive basis scalar, so a
/// p-ary Gray code over them walks all of GF(q)^k.
fn gray_generators(rows: &[Vec<u8>], tables: &Tables, field: &ScalarField) -> Vec<Vec<u8>> {
    let basis = field.additive_basis();
    rows.iter().flat_map(|r| basis.iter().map(move |&b| r.iter().map(|&x| tables.mul(b as u8, x)).collect())).collect()
}

/// Minimum over `start + span(gens)` (excluding the zero word), walking the
/// modular p-ary Gray code: step `i` adds generator `v_p(i)`.
fn gray_walk(gens: &[Vec<u8>], start: Vec<u8>, p: usize, tables: &Tables) -> Option<(usize, Vec<u8>)> {
    let sparse: Vec<Vec<(usize, u8)>> =
        gens.iter().map(|g| g.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect()).collect();
    let mut word = start;
    let mut w = weight(&word);
    let mut best = (w != 0).then(|| (w, word.clone()));
    let mut digits = vec![0usize; gens.len()];
    loop {
        let Some(v) = digits.iter().position(|&d| d + 1 < p) else { break };
        digits[v] += 1;
        digits[..v].iter_mut().for_each(|d| *d = 0);
        for &(i, val) in &sparse[v] {
            let old = word[i];
            let new = tables.add(old, val);
            word[i] = new;
            w = w + (new != 0) as usize - (old != 0) as usize;
        }
        if w != 0 && best.as_ref().map_or(true, |(b, _)| w < *b) {
            best = Some((w, word.clone()));
        }
    }
    best
}

/// Binary variant on packed words.
fn gray_walk_binary(gens: &[Vec<u64>], start: Vec<u64>) -> Option<(usize, Vec<u64>)> {
    let pop = |x: &[u64]| x.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let mut word = start;
    let w0 = pop(&word);
    let mut best = (w0 != 0).then(|| (w0, word.clone()));
    let k = gens.len();
    if k >= 64 {
        return best;
    }
    for i in 1u64..(1u64 << k) {
        let g = &gens[i.trailing_zeros() as usize];
        for (a, b) in word.iter_mut().zip(g) {
            *a ^= b;
        }
        let w = pop(&word);
        if w != 0 && best.as_ref().map_or(true, |(b, _)| w < *b) {
            best = Some((w, word.clone()));
        }
    }
    best
}

fn pack(word: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; word.len().div_ceil(64)];
    for (i, &x) in word.iter().enumerate() {
        if x != 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn unpack(words: &[u64], n: usize) -> Vec<u8> {
    (0..n).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
}

fn check_budget(q: u64, k: usize, budget: u64) -> Result<(), MinDistError> {
    let fits = u32::try_from(k).ok().and_then(|k| crate::arith::checked_pow(q, k)).filter(|&c| c <= budget);
    match fits {
        Some(_) => Ok(()),
        None => Err(MinDistError::BudgetExceeded { needed: format!("{q}^{k}"), budget }),
    }
}

/// Exact minimum weight and a codeword attaining it.
pub fn exhaustive_min_codeword(
    gen: &Matrix,
    field: &ScalarField,
    budget: u64,
) -> Result<(u64, Vec<u64>), MinDistError> {
    let rows = to_bytes(gen, field)?;
    if rows.is_empty() {
        return Err(MinDistError::EmptyCode);
    }
    check_budget(field.order(), rows.len(), budget)?;
    let tables = Tables::new(field)?;
    let n = gen.ncols();
    let p = field.characteristic() as usize;
    let gens = gray_generators(&rows, &tables, field);

    // Fix the top `split` generators per chunk and walk the rest.
    let total = gens.len();
    let mut split = 0;
    while split < total && p.pow(split as u32) < 64 {
        split += 1;
    }
    let (low, high) = gens.split_at(total - split);
    let chunks = p.pow(split as u32);
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let mut start = vec![0u8; n];
            let mut rest = c;
            for g in high {
                for _ in 0..rest % p {
                    for (a, &b) in start.iter_mut().zip(g) {
                        *a = tables.add(*a, b);
                    }
                }
                rest /= p;
            }
            let found = if field.order() == 2 {
                let packed: Vec<Vec<u64>> = low.iter().map(|g| pack(g)).collect();
                gray_walk_binary(&packed, pack(&start)).map(|(w, x)| (w, unpack(&x, n)))
            } else {
                gray_walk(low, start, p, &tables)
            };
            found.map(|(w, x)| (w, c, x))
        })
        .min_by_key(|(w, c, _)| (*w, *c));
    let (w, _, word) = best.ok_or(MinDistError::EmptyCode)?;
    Ok((w as u64, word.into_iter().map(u64::from).collect()))
}

/// Exact minimum Hamming weight over all `q^k - 1` nonzero codewords.
pub fn exhaustive_min_weight(gen: &Matrix, field: &ScalarField, budget: u64) -> Result<u64, MinDistError> {
    exhaustive_min_codeword(gen, field, budget).map(|(w, _)| w)
}

/// Information-set search settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub trials: u64,
    pub seed: u64,
    /// Maximum number of information positions a candidate may use.
    pub info_weight: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { trials: DEFAULT_TRIALS, seed: DEFAULT_SEED, info_weight: DEFAULT_INFO_WEIGHT }
    }
}

/// Outcome of [`lightest_codeword`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub weight: u64,
    pub codeword: Vec<u64>,
    /// Trial that produced the codeword.
    pub trial: u64,
    pub trials_run: u64,
}

/// Row-reduces `rows` choosing pivots in the column order `order`.
fn systematic(rows: &[Vec<u8>], order: &[usize], t: &Tables) -> Vec<Vec<u8>> {
    let mut rows = rows.to_vec();
    let mut r = 0;
    for &col in order {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, found);
        let inv = t.inv[rows[r][col] as usize];
        for v in rows[r].iter_mut() {
            *v = t.mul(*v, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if i != r && f != 0 {
                let nf = t.neg[f as usize];
                for (a, &b) in row.iter_mut().zip(&pivot) {
                    if b != 0 {
                        *a = t.add(*a, t.mul(nf, b));
                    }
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Lightest combination of at most `depth` rows, first coefficient 1.
/// Returns early once a word of weight `<= target` is found.
fn combos(rows: &[Vec<u8>], depth: usize, target: usize, t: &Tables) -> Option<(usize, Vec<u8>)> {
    struct Walk<'a> {
        rows: &'a [Vec<u8>],
        t: &'a Tables,
        depth: usize,
        target: usize,
        bufs: Vec<Vec<u8>>,
        best: Option<(usize, Vec<u8>)>,
    }

    impl Walk<'_> {
        /// `bufs[level]` holds the partial sum; returns true to stop.
        fn rec(&mut self, level: usize, from: usize) -> bool {
            let q = if level == 0 { 2 } else { self.t.q as u8 };
            for i in from..self.rows.len() {
                for c in 1..q {
                    let (head, tail) = self.bufs.split_at_mut(level + 1);
                    let (prev, cur) = (&head[level], &mut tail[0]);
                    let row = &self.rows[i];
                    let mut w = 0;
                    for j in 0..row.len() {
                        let v = self.t.add(prev[j], self.t.mul(c, row[j]));
                        cur[j] = v;
                        w += (v != 0) as usize;
                    }
                    if w != 0 && self.best.as_ref().map_or(true, |(b, _)| w < *b) {
                        self.best = Some((w, cur.clone()));
                        if w <= self.target {
                            return true;
                        }
                    }
                    if level + 1 < self.depth && self.rec(level + 1, i + 1) {
                        return true;
                    }
                }
            }
            false
        }
    }

    let n = rows.first()?.len();
    let depth = depth.clamp(1, rows.len());
    if depth <= 2 {
        return pairs(rows, depth, target, t);
    }
    let mut walk = Walk { rows, t, depth, target, bufs: vec![vec![0u8; n]; depth + 1], best: None };
    walk.rec(0, 0);
    walk.best
}

/// Depth-2 case without trying every scalar: `wt(r_i + c r_j)` is the size of
/// the joint support minus the positions where `c = -r_i/r_j`, so one pass
/// with a histogram over `c` finds the best scalar for the pair.
fn pairs(rows: &[Vec<u8>], depth: usize, target: usize, t: &Tables) -> Option<(usize, Vec<u8>)> {
    let mut best: Option<(usize, Vec<u8>)> = None;
    let consider = |w: usize, make: &dyn Fn() -> Vec<u8>, best: &mut Option<(usize, Vec<u8>)>| {
        if w != 0 && best.as_ref().map_or(true, |(b, _)| w < *b) {
            *best = Some((w, make()));
        }
        best.as_ref().is_some_and(|(b, _)| *b <= target)
    };
    for r in rows {
        if consider(weight(r), &|| r.clone(), &mut best) {
            return best;
        }
    }
    if depth < 2 {
        return best;
    }
    let mut hist = vec![0usize; t.q];
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            hist.iter_mut().for_each(|h| *h = 0);
            let mut union = 0;
            for (&x, &y) in a.iter().zip(b) {
                if x != 0 || y != 0 {
                    union += 1;
                    if x != 0 && y != 0 {
                        hist[t.mul(t.neg[x as usize], t.inv[y as usize]) as usize] += 1;
                    }
                }
            }
            let (c, cancel) = hist.iter().enumerate().skip(1).max_by_key(|&(c, &h)| (h, std::cmp::Reverse(c))).unwrap();
            let c = c as u8;
            let make = || a.iter().zip(b).map(|(&x, &y)| t.add(x, t.mul(c, y))).collect();
            if consider(union - cancel, &make, &mut best) {
                return best;
            }
        }
    }
    best
}

/// Seeded information-set search: the lightest codeword seen, stopping early
/// once one of weight `<= target` turns up. Deterministic in `cfg.seed`
/// regardless of thread count.
pub fn lightest_codeword(
    gen: &Matrix,
    field: &ScalarField,
    target: u64,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, MinDistError> {
    let rows = to_bytes(gen, field)?;
    if rows.is_empty() {
        return Err(MinDistError::EmptyCode);
    }
    let tables = Tables::new(field)?;
    let n = gen.ncols();
    let target_w = target.min(n as u64) as usize;
    let trials = cfg.trials.max(1);
    let mut best: Option<(usize, u64, Vec<u8>)> = None;
    let mut run = 0;
    while run < trials {
        let end = (run + TRIAL_BATCH).min(trials);
        let batch = (run..end)
            .into_par_iter()
            .filter_map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(trial);
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let sys = systematic(&rows, &order, &tables);
                combos(&sys, cfg.info_weight, target_w, &tables).map(|(w, x)| (w, trial, x))
            })
            .min_by_key(|(w, trial, _)| (*w, *trial));
        run = end;
        if let Some(b) = batch {
            if best.as_ref().map_or(true, |(w, t, _)| (b.0, b.1) < (*w, *t)) {
                best = Some(b);
            }
        }
        if best.as_ref().is_some_and(|(w, _, _)| *w <= target_w) {
            break;
        }
    }
    let (w, trial, word) = best.ok_or(MinDistError::EmptyCode)?;
    Ok(SearchOutcome { weight: w as u64, codeword: word.into_iter().map(u64::from).collect(), trial, trials_run: run })
}

/// A codeword of weight `<= target`, if the search finds one.
pub fn low_weight_search(
    gen: &Matrix,
    field: &ScalarField,
    target: u64,
    trials: u64,
    seed: u64,
) -> Result<Option<Vec<u64>>, MinDistError> {
    if target >= gen.ncols() as u64 {
        return gen.rows().first().cloned().map(Some).ok_or(MinDistError::EmptyCode);
    }
    let cfg = SearchConfig { trials, seed, info_weight: DEFAULT_INFO_WEIGHT };
    let out = lightest_codeword(gen, field, target, &cfg)?;
    Ok((out.weight <= target).then_some(out.codeword))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerSource {
    ClosedForm,
    BchBound,
    Exhaustive,
}

impl std::fmt::Display for LowerSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LowerSource::ClosedForm => "closed form",
            LowerSource::BchBound => "cyclic BCH bound",
            LowerSource::Exhaustive => "exhaustive enumeration",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    Bracketed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    InformationSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub budget: u64,
    pub search: SearchConfig,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { budget: DEFAULT_BUDGET, search: SearchConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub lower: u64,
    pub lower_source: LowerSource,
    /// Best a-priori bound (closed form or BCH bound), kept even when the
    /// search itself proves a higher lower bound.
    pub prior_lower: u64,
    pub prior_source: LowerSource,
    pub upper: u64,
    pub witness: Vec<u64>,
    pub status: Status,
    pub method: Method,
    pub seed: u64,
    pub trials_run: u64,
}

/// Checks that `word` has weight `w` and vanishes at `beta^j` for every `j`
/// in the defining set of the cyclic code generated by `params.generator`.
pub fn verify_witness(cx: &CodeContext, params: &CodeParams, word: &[u64], w: u64) -> Result<(), MinDistError> {
    if word.len() as u64 != params.n {
        return Err(MinDistError::BadWitness(format!("length {} != {}", word.len(), params.n)));
    }
    let actual = word.iter().filter(|&&x| x != 0).count() as u64;
    if actual != w {
        return Err(MinDistError::BadWitness(format!("weight {actual} != claimed {w}")));
    }
    let zeros = cx.root_exponents(&params.generator);
    let poly = Poly::new(word.to_vec());
    let table = cx.table();
    for &leader in table.leaders() {
        if zeros.contains(leader) && !poly.eval_ext(cx.field(), cx.subfield(), &cx.beta_pow(leader)).is_zero() {
            return Err(MinDistError::BadWitness(format!("nonzero at beta^{leader}")));
        }
    }
    Ok(())
}

/// Minimum distance of the cyclic code `params`, exact when affordable and
/// otherwise bracketed between the report's bounds and a found codeword.
pub fn certify(
    cx: &CodeContext,
    params: &CodeParams,
    report: &BoundReport,
    cfg: &CertifyConfig,
) -> Result<DistanceCertificate, MinDistError> {
    if params.k == 0 {
        return Err(MinDistError::EmptyCode);
    }
    let (prior_lower, prior_source) = match report.lower_bound_closed {
        Some(c) if c >= report.lower_bound_direct => (c, LowerSource::ClosedForm),
        _ => (report.lower_bound_direct, LowerSource::BchBound),
    };
    let gen = generator_matrix(params);
    let field = cx.scalars();
    let exhaustive = check_budget(field.order(), params.k as usize, cfg.budget).is_ok();
    let (upper, witness, method, trials_run) = if exhaustive {
        let (w, x) = exhaustive_min_codeword(&gen, field, cfg.budget)?;
        (w, x, Method::Exhaustive, 0)
    } else {
        let out = lightest_codeword(&gen, field, prior_lower, &cfg.search)?;
        (out.weight, out.codeword, Method::InformationSet, out.trials_run)
    };
    verify_witness(cx, params, &witness, upper)?;
    if let Some(c) = report.lower_bound_closed.filter(|&c| c > upper) {
        return Err(MinDistError::BoundViolated { lower: c, bound_source: LowerSource::ClosedForm, upper });
    }
    if report.lower_bound_direct > upper {
        return Err(MinDistError::BoundViolated {
            lower: report.lower_bound_direct,
            bound_source: LowerSource::BchBound,
            upper,
        });
    }
    let (lower, lower_source) = if exhaustive { (upper, LowerSource::Exhaustive) } else { (prior_lower, prior_source) };
    Ok(DistanceCertificate {
        lower,
        lower_source,
        prior_lower,
        prior_source,
        upper,
        witness,
        status: if lower == upper { Status::Exact } else { Status::Bracketed },
        method,
        seed: cfg.search.seed,
        trials_run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::{code_params, dual_code_params, BchSpec, LambdaKind};
    use crate::dualtools::analyze;
    use proptest::prelude::*;

    const ONE: LambdaKind = LambdaKind::DivisorOfQMinus1(1);

    fn dual(q: u64, m: u32, delta: u64) -> (CodeContext, CodeParams, BoundReport) {
        let spec = BchSpec::new(q, m, ONE, delta).unwrap();
        let cx = CodeContext::new(spec.family()).unwrap();
        let params = dual_code_params(&spec, &cx).unwrap();
        let report = analyze(&spec, cx.table()).unwrap();
        (cx, params, report)
    }

    fn naive(gen: &Matrix, field: &ScalarField) -> u64 {
        let q = field.order();
        let k = gen.nrows();
        let mut coeffs = vec![0u64; k];
        let mut best = u64::MAX;
        loop {
            let Some(pos) = coeffs.iter().position(|&c| c + 1 < q) else { break };
            coeffs[pos] += 1;
            coeffs[..pos].iter_mut().for_each(|c| *c = 0);
            let mut word = vec![0u64; gen.ncols()];
            for (c, row) in coeffs.iter().zip(gen.rows()) {
                for (a, &b) in word.iter_mut().zip(row) {
                    *a = field.add(*a, field.mul(*c, b));
                }
            }
            best = best.min(word.iter().filter(|&&x| x != 0).count() as u64);
        }
        best
    }

    #[test]
    fn empty_code_is_an_error() {
        let field = ScalarField::new(2).unwrap();
        let gen = Matrix::new(2, 5, vec![]);
        assert_eq!(exhaustive_min_weight(&gen, &field, 10).unwrap_err(), MinDistError::EmptyCode);
    }

    #[test]
    fn budget_is_enforced() {
        let field = ScalarField::new(3).unwrap();
        let gen = Matrix::new(3, 4, vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        assert!(matches!(exhaustive_min_weight(&gen, &field, 26), Err(MinDistError::BudgetExceeded { .. })));
        assert_eq!(exhaustive_min_weight(&gen, &field, 27).unwrap(), 2);
    }

    #[test]
    fn small_duals_exact() {
        let (cx, params, _) = dual(2, 6, 3);
        assert_eq!(params.k, 6);
        let g = generator_matrix(&params);
        assert_eq!(exhaustive_min_weight(&g, cx.scalars(), 64).unwrap(), 32);

        let (cx, params, _) = dual(3, 3, 5);
        assert_eq!(params.k, 9);
        assert_eq!(exhaustive_min_weight(&generator_matrix(&params), cx.scalars(), DEFAULT_BUDGET).unwrap(), 9);
    }

    #[test]
    fn gray_code_over_gf4_matches_naive() {
        let spec = BchSpec::new(4, 2, LambdaKind::DivisorOfQMinus1(3), 3).unwrap();
        let cx = CodeContext::new(spec.family()).unwrap();
        let params = dual_code_params(&spec, &cx).unwrap();
        let g = generator_matrix(&params);
        assert_eq!(exhaustive_min_weight(&g, cx.scalars(), DEFAULT_BUDGET).unwrap(), naive(&g, cx.scalars()));
    }

    #[test]
    fn gray_code_over_binary_extension_fields() {
        for (q, seed) in [(4u64, 1u64), (8, 2), (16, 3), (9, 4)] {
            let field = ScalarField::new(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..5 {
                use rand::Rng;
                let rows = (0..3).map(|_| (0..9).map(|_| rng.gen_range(0..q)).collect()).collect();
                let g = Matrix::new(q, 9, rows);
                assert_eq!(exhaustive_min_weight(&g, &field, DEFAULT_BUDGET).unwrap(), naive(&g, &field), "GF({q})");
            }
        }
    }

    #[test]
    fn pair_histogram_matches_scalar_scan() {
        use rand::Rng;
        for q in [2u64, 3, 4, 7, 8] {
            let field = ScalarField::new(q).unwrap();
            let t = Tables::new(&field).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            let rows: Vec<Vec<u8>> = (0..6).map(|_| (0..14).map(|_| rng.gen_range(0..q) as u8).collect()).collect();
            let mut want = usize::MAX;
            for (i, a) in rows.iter().enumerate() {
                if weight(a) > 0 {
                    want = want.min(weight(a));
                }
                for b in &rows[i + 1..] {
                    for c in 1..q as u8 {
                        let w: Vec<u8> = a.iter().zip(b).map(|(&x, &y)| t.add(x, t.mul(c, y))).collect();
                        if weight(&w) > 0 {
                            want = want.min(weight(&w));
                        }
                    }
                }
            }
            let (got, word) = pairs(&rows, 2, 0, &t).unwrap();
            assert_eq!(got, want, "GF({q})");
            assert_eq!(weight(&word), got);
            let (deep, _) = combos(&rows, 3, 0, &t).unwrap();
            assert!(deep <= got);
        }
    }

    #[test]
    fn search_finds_known_words() {
        let (cx, params, _) = dual(2, 6, 15);
        assert_eq!(params.k, 39);
        let g = generator_matrix(&params);
        let w = low_weight_search(&g, cx.scalars(), 8, DEFAULT_TRIALS, DEFAULT_SEED).unwrap().unwrap();
        assert_eq!(w.iter().filter(|&&x| x != 0).count(), 8);
        verify_witness(&cx, &params, &w, 8).unwrap();

        let (cx, params, _) = dual(5, 2, 3);
        let g = generator_matrix(&params);
        let w = low_weight_search(&g, cx.scalars(), 16, DEFAULT_TRIALS, DEFAULT_SEED).unwrap().unwrap();
        assert_eq!(w.iter().filter(|&&x| x != 0).count(), 16);

        // target >= n: the first row qualifies.
        let row = low_weight_search(&g, cx.scalars(), 24, 1, 0).unwrap().unwrap();
        assert_eq!(row, g.row(0).to_vec());
    }

    #[test]
    fn search_is_deterministic() {
        let (cx, params, _) = dual(2, 6, 9);
        let g = generator_matrix(&params);
        let cfg = SearchConfig { trials: 200, seed: 7, info_weight: 2 };
        let a = lightest_codeword(&g, cx.scalars(), 0, &cfg).unwrap();
        let b = lightest_codeword(&g, cx.scalars(), 0, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials_run, 200);
    }

    #[test]
    fn certificates() {
        let cfg = CertifyConfig::default();
        let (cx, params, report) = dual(2, 6, 3);
        let c = certify(&cx, &params, &report, &cfg).unwrap();
        assert_eq!((c.upper, c.status, c.method), (32, Status::Exact, Method::Exhaustive));

        let (cx, params, report) = dual(5, 2, 3);
        let c = certify(&cx, &params, &report, &cfg).unwrap();
        assert_eq!((c.lower, c.upper, c.prior_lower, c.status), (16, 16, 15, Status::Exact));

        let small = CertifyConfig { budget: 1000, ..cfg };
        let (cx, params, report) = dual(2, 6, 15);
        let c = certify(&cx, &params, &report, &small).unwrap();
        assert_eq!((c.lower, c.lower_source, c.upper, c.status), (8, LowerSource::ClosedForm, 8, Status::Exact));
        assert_eq!(c.method, Method::InformationSet);
    }

    #[test]
    fn witnesses_are_cyclic() {
        let (cx, params, report) = dual(3, 3, 5);
        let c = certify(&cx, &params, &report, &CertifyConfig::default()).unwrap();
        let mut shifted = c.witness.clone();
        for _ in 0..params.n {
            shifted.rotate_right(1);
            verify_witness(&cx, &params, &shifted, c.upper).unwrap();
        }
    }

    #[test]
    fn primal_code_distance_respects_designed_distance() {
        let spec = BchSpec::new(2, 4, ONE, 5).unwrap();
        let cx = CodeContext::new(spec.family()).unwrap();
        let params = code_params(&spec, &cx).unwrap();
        assert_eq!(exhaustive_min_weight(&generator_matrix(&params), cx.scalars(), DEFAULT_BUDGET).unwrap(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn invariant_under_row_operations(seed in any::<u64>()) {
            let (cx, params, _) = dual(3, 3, 7);
            let field = cx.scalars();
            let g = generator_matrix(&params);
            let base = exhaustive_min_weight(&g, field, DEFAULT_BUDGET).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = g.rows().to_vec();
            for _ in 0..20 {
                use rand::Rng;
                let i = rng.gen_range(0..rows.len());
                let j = rng.gen_range(0..rows.len());
                let c = rng.gen_range(1..3u64);
                if i == j {
                    rows[i].iter_mut().for_each(|x| *x = field.mul(*x, c));
                } else {
                    let src = rows[j].clone();
                    for (a, b) in rows[i].iter_mut().zip(src) {
                        *a = field.add(*a, field.mul(c, b));
                    }
                }
            }
            let moved = Matrix::new(3, g.ncols(), rows);
            prop_assert_eq!(exhaustive_min_weight(&moved, field, DEFAULT_BUDGET).unwrap(), base);
        }
    }
}
