//! Narrow-sense BCH codes of length `n = (q^m - 1)/lambda` and their duals.
//!
//! A code is described by its defining set `T = C_1 ∪ ... ∪ C_{delta-1}`
//! with respect to `beta = alpha^lambda`. The dual's defining set is
//! `Z_n \ (-T)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, checked_pow};
use crate::cyclotomic::{CosetError, CosetTable};
use crate::gf::{self, FieldCtx, FieldElem, GfError, Matrix, Poly, ScalarField, Subfield};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BchError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("m must be at least 1")]
    ZeroDegree,
    #[error("lambda = {lambda} does not divide q - 1 = {}", .q - 1)]
    LambdaNotDivisor { lambda: u64, q: u64 },
    #[error("s = {s} does not divide m = {m}")]
    SNotDivisor { s: u32, m: u32 },
    #[error("q^m = {q}^{m} does not fit in 63 bits")]
    Overflow { q: u64, m: u32 },
    #[error("designed distance {delta} outside [2, {n}]")]
    DeltaOutOfRange { delta: u64, n: u64 },
    #[error("coset table was built for (n = {table_n}, q = {table_q}), code needs (n = {n}, q = {q})")]
    TableMismatch { table_n: u64, table_q: u64, n: u64, q: u64 },
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// How `lambda` is specified; the two families take different closed-form paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum LambdaKind {
    /// `lambda | q - 1`.
    #[serde(rename = "divisor")]
    DivisorOfQMinus1(u64),
    /// `lambda = q^s - 1` with `s | m`.
    #[serde(rename = "power")]
    PowerForm(u32),
}

impl fmt::Display for LambdaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaKind::DivisorOfQMinus1(l) => write!(f, "lambda={l}"),
            LambdaKind::PowerForm(s) => write!(f, "s={s}"),
        }
    }
}

/// `(q, m, lambda)`: everything about a code but its designed distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BchFamily {
    q: u64,
    m: u32,
    lambda: LambdaKind,
    lambda_value: u64,
    n: u64,
}

impl BchFamily {
    pub fn new(q: u64, m: u32, lambda: LambdaKind) -> Result<Self, BchError> {
        if arith::prime_power(q).is_none() {
            return Err(BchError::NotPrimePower(q));
        }
        if m == 0 {
            return Err(BchError::ZeroDegree);
        }
        let qm = checked_pow(q, m).filter(|&v| v <= 1 << 63).ok_or(BchError::Overflow { q, m })?;
        let lambda_value = match lambda {
            LambdaKind::DivisorOfQMinus1(l) => {
                if l == 0 || (q - 1) % l != 0 {
                    return Err(BchError::LambdaNotDivisor { lambda: l, q });
                }
                l
            }
            LambdaKind::PowerForm(s) => {
                if s == 0 || m % s != 0 {
                    return Err(BchError::SNotDivisor { s, m });
                }
                q.pow(s) - 1
            }
        };
        Ok(BchFamily { q, m, lambda, lambda_value, n: (qm - 1) / lambda_value })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> LambdaKind {
        self.lambda
    }

    pub fn lambda_value(&self) -> u64 {
        self.lambda_value
    }

    /// Code length `(q^m - 1)/lambda`.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn with_delta(&self, delta: u64) -> Result<BchSpec, BchError> {
        if delta < 2 || delta > self.n {
            return Err(BchError::DeltaOutOfRange { delta, n: self.n });
        }
        Ok(BchSpec { family: *self, delta })
    }

    pub fn coset_table(&self) -> Result<CosetTable, BchError> {
        Ok(CosetTable::new(self.n, self.q)?)
    }
}

impl fmt::Display for BchFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} m={} {} (n={})", self.q, self.m, self.lambda, self.n)
    }
}

/// A narrow-sense BCH code `C_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BchSpec {
    family: BchFamily,
    delta: u64,
}

impl BchSpec {
    pub fn new(q: u64, m: u32, lambda: LambdaKind, delta: u64) -> Result<Self, BchError> {
        BchFamily::new(q, m, lambda)?.with_delta(delta)
    }

    pub fn family(&self) -> &BchFamily {
        &self.family
    }

    pub fn q(&self) -> u64 {
        self.family.q
    }

    pub fn m(&self) -> u32 {
        self.family.m
    }

    pub fn lambda(&self) -> LambdaKind {
        self.family.lambda
    }

    pub fn n(&self) -> u64 {
        self.family.n
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }
}

impl fmt::Display for BchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} delta={}", self.family, self.delta)
    }
}

/// A subset of Z_n, held as a membership mask.
#[derive(Clone, PartialEq, Eq)]
pub struct DefiningSet {
    mask: Vec<bool>,
}

impl DefiningSet {
    pub fn empty(n: u64) -> Self {
        DefiningSet { mask: vec![false; n as usize] }
    }

    pub fn full(n: u64) -> Self {
        DefiningSet { mask: vec![true; n as usize] }
    }

    pub fn from_members(n: u64, members: impl IntoIterator<Item = u64>) -> Self {
        let mut set = DefiningSet::empty(n);
        for a in members {
            set.mask[(a % n) as usize] = true;
        }
        set
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        DefiningSet { mask }
    }

    pub fn modulus(&self) -> u64 {
        self.mask.len() as u64
    }

    #[inline]
    pub fn contains(&self, a: u64) -> bool {
        self.mask.get(a as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// Sorted members.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// `a ∈ T ⇒ a q mod n ∈ T`.
    pub fn is_q_closed(&self, q: u64) -> bool {
        let n = self.modulus();
        self.members().all(|a| self.contains(arith::mul_mod(a, q, n)))
    }

    /// `{n - i mod n : i ∈ T}`.
    pub fn negated(&self) -> DefiningSet {
        let n = self.modulus();
        DefiningSet::from_members(n, self.members().map(|a| (n - a) % n))
    }

    pub fn complement(&self) -> DefiningSet {
        DefiningSet { mask: self.mask.iter().map(|&b| !b).collect() }
    }

    /// Longest run of consecutive residues, wrapping from `n - 1` to `0`.
    pub fn longest_cyclic_run(&self) -> u64 {
        let n = self.mask.len();
        if n == 0 {
            return 0;
        }
        if self.mask.iter().all(|&b| b) {
            return n as u64;
        }
        // Start just after a gap so wrapping runs are seen whole.
        let gap = self.mask.iter().position(|&b| !b).expect("has a gap");
        let (mut best, mut cur) = (0u64, 0u64);
        for step in 1..=n {
            if self.mask[(gap + step) % n] {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        best
    }

    /// One plus the longest cyclic run. A full set yields `n + 1`.
    pub fn bch_bound(&self) -> u64 {
        self.longest_cyclic_run() + 1
    }
}

impl fmt::Debug for DefiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DefiningSet")
            .field("n", &self.modulus())
            .field("members", &self.members().collect::<Vec<_>>())
            .finish()
    }
}

fn check_table(family: &BchFamily, table: &CosetTable) -> Result<(), BchError> {
    if table.modulus() != family.n || table.base() != family.q {
        return Err(BchError::TableMismatch {
            table_n: table.modulus(),
            table_q: table.base(),
            n: family.n,
            q: family.q,
        });
    }
    Ok(())
}

/// `T = C_1 ∪ C_2 ∪ ... ∪ C_{delta-1}`.
pub fn defining_set(spec: &BchSpec, table: &CosetTable) -> Result<DefiningSet, BchError> {
    check_table(&spec.family, table)?;
    let n = spec.n();
    let mut set = DefiningSet::empty(n);
    for a in 1..spec.delta {
        if set.mask[a as usize] {
            continue;
        }
        for &x in table.coset_of(a) {
            set.mask[x as usize] = true;
        }
    }
    Ok(set)
}

/// `T⊥ = Z_n \ T^{-1}`.
pub fn dual_defining_set(t: &DefiningSet) -> DefiningSet {
    t.negated().complement()
}

/// Walks `delta = 2, 3, ..., n`, growing `T` one coset at a time.
pub struct DefiningSetSweep<'a> {
    table: &'a CosetTable,
    set: DefiningSet,
    next_delta: u64,
}

impl<'a> DefiningSetSweep<'a> {
    pub fn new(family: &BchFamily, table: &'a CosetTable) -> Result<Self, BchError> {
        check_table(family, table)?;
        Ok(DefiningSetSweep { table, set: DefiningSet::empty(family.n), next_delta: 2 })
    }

    /// Advances to the next designed distance; returns it with its `T`.
    pub fn advance(&mut self) -> Option<(u64, &DefiningSet)> {
        let n = self.table.modulus();
        if self.next_delta > n {
            return None;
        }
        let a = self.next_delta - 1;
        if !self.set.mask[a as usize] {
            for &x in self.table.coset_of(a) {
                self.set.mask[x as usize] = true;
            }
        }
        let delta = self.next_delta;
        self.next_delta += 1;
        Some((delta, &self.set))
    }
}

/// Parameters of a cyclic code over GF(q) given by its generator polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    pub n: u64,
    pub k: u64,
    /// Designed distance for BCH codes; `None` for codes such as duals.
    pub delta: Option<u64>,
    pub q: u64,
    pub generator: Poly,
    pub bch_bound: u64,
}

/// Field data shared by all codes of one family: GF(q^m), the GF(q) bridge,
/// `beta = alpha^lambda`, the coset table, and memoized minimal polynomials.
#[derive(Debug)]
pub struct CodeContext {
    family: BchFamily,
    ctx: FieldCtx,
    sub: Subfield,
    beta: FieldElem,
    table: CosetTable,
    minimal: std::sync::Mutex<std::collections::HashMap<u64, Poly>>,
}

impl CodeContext {
    pub fn new(family: &BchFamily) -> Result<Self, BchError> {
        let (p, e) = arith::prime_power(family.q).ok_or(BchError::NotPrimePower(family.q))?;
        let ctx = FieldCtx::new(p, e * family.m)?;
        let sub = Subfield::new(&ctx, family.q)?;
        let beta = ctx.pow(ctx.generator(), family.lambda_value);
        let table = family.coset_table()?;
        Ok(CodeContext { family: *family, ctx, sub, beta, table, minimal: Default::default() })
    }

    pub fn family(&self) -> &BchFamily {
        &self.family
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn subfield(&self) -> &Subfield {
        &self.sub
    }

    pub fn scalars(&self) -> &ScalarField {
        self.sub.scalars()
    }

    /// The primitive n-th root of unity.
    pub fn beta(&self) -> &FieldElem {
        &self.beta
    }

    pub fn beta_pow(&self, i: u64) -> FieldElem {
        self.ctx.pow(&self.beta, i % self.family.n)
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// `m_i(x)`, memoized per coset leader.
    pub fn minimal_polynomial(&self, i: u64) -> Result<Poly, BchError> {
        let leader = self.table.leader(i % self.family.n)?;
        if let Some(p) = self.minimal.lock().expect("poisoned").get(&leader) {
            return Ok(p.clone());
        }
        let poly = gf::minimal_polynomial(&self.ctx, &self.sub, &self.beta_pow(leader), self.table.coset_of(leader))?;
        self.minimal.lock().expect("poisoned").insert(leader, poly.clone());
        Ok(poly)
    }

    /// Product of the minimal polynomials of the cosets making up `set`.
    pub fn generator_of(&self, set: &DefiningSet) -> Result<Poly, BchError> {
        let field = self.scalars();
        let mut g = Poly::one();
        for &leader in self.table.leaders() {
            if set.contains(leader) {
                g = g.mul(&self.minimal_polynomial(leader)?, field);
            }
        }
        Ok(g)
    }

    /// Parameters of the cyclic code with defining set `set`.
    pub fn cyclic_code_params(&self, set: &DefiningSet, delta: Option<u64>) -> Result<CodeParams, BchError> {
        let generator = self.generator_of(set)?;
        let n = self.family.n;
        Ok(CodeParams { n, k: n - set.len() as u64, delta, q: self.family.q, generator, bch_bound: set.bch_bound() })
    }

    /// Exponents `i` with `f(beta^i) = 0`.
    pub fn root_exponents(&self, f: &Poly) -> DefiningSet {
        let n = self.family.n;
        let mut set = DefiningSet::empty(n);
        let mut x = self.ctx.one();
        for i in 0..n {
            if f.eval_ext(&self.ctx, &self.sub, &x).is_zero() {
                set.mask[i as usize] = true;
            }
            x = self.ctx.mul(&x, &self.beta);
        }
        set
    }
}

/// Parameters of `C_delta`: generator, dimension `n - |T|`, cyclic BCH bound.
pub fn code_params(spec: &BchSpec, cx: &CodeContext) -> Result<CodeParams, BchError> {
    let t = defining_set(spec, cx.table())?;
    cx.cyclic_code_params(&t, Some(spec.delta))
}

/// Parameters of the dual `C_delta^⊥`, built from `T⊥`.
pub fn dual_code_params(spec: &BchSpec, cx: &CodeContext) -> Result<CodeParams, BchError> {
    let t = defining_set(spec, cx.table())?;
    cx.cyclic_code_params(&dual_defining_set(&t), None)
}

/// `k x n` matrix whose rows are `x^j g(x)`, `j = 0..k-1`.
pub fn generator_matrix(params: &CodeParams) -> Matrix {
    let n = params.n as usize;
    let g = params.generator.coeffs();
    let rows = (0..params.k as usize)
        .map(|j| {
            let mut row = vec![0u64; n];
            for (i, &c) in g.iter().enumerate() {
                row[(i + j) % n] = c;
            }
            row
        })
        .collect();
    Matrix::new(params.q, n, rows)
}
