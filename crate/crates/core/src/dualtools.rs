//! Dual-distance quantities: `I(delta)`, closed-form lower bounds on the dual
//! distance, classical bounds, and the dually-BCH criteria.
//!
//! Every closed form has a direct counterpart computed from `T⊥`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bch::{defining_set, dual_defining_set, BchError, BchFamily, BchSpec, DefiningSet, LambdaKind};
use crate::cyclotomic::CosetTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("0 is not in the dual defining set (designed distance beyond n?)")]
    ZeroNotInDual,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("delta = {delta} matches no case of the closed form for {family}")]
    NoCaseMatched { family: String, delta: u64 },
    #[error(transparent)]
    Bch(#[from] BchError),
}

fn hyp(msg: impl Into<String>) -> DualError {
    DualError::Hypothesis(msg.into())
}

/// Which closed-form branch produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum ClosedCase {
    /// `(q^{ts}-1)/(q^s-1) < delta <= (q^{(t+1)s}-1)/(q^s-1)`.
    PowerRange { t: u32 },
    /// `delta > (q^{m-s}-1)/(q^s-1)`.
    PowerTail,
    /// `delta = (q^{t+1}-q)/lambda + s + 1`.
    DivisorPoint { t: u32, s: u64 },
    /// `(q^t-1)/lambda + s q^t < delta <= (q^t-1)/lambda + (s+1) q^t`.
    DivisorInterval { t: u32, s: u64 },
    /// `(q^{t+1}-1)/lambda - q^t < delta <= (q^{t+1}-q)/lambda + 1`.
    DivisorBoundary { t: u32 },
    /// `delta > (q^m-1)/lambda - q^{m-1}`.
    DivisorTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedValue {
    pub value: u64,
    pub case: ClosedCase,
}

/// The closed-form route a family qualifies for, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedPath {
    /// `lambda = q^s - 1`, `m/s >= 3`. Also serves `lambda = q - 1` as `s = 1`.
    Power { s: u32 },
    /// `lambda | q - 1`, `lambda != q - 1`, `m >= 2`.
    Divisor { lambda: u64 },
}

pub fn closed_path(family: &BchFamily) -> Option<ClosedPath> {
    let (q, m) = (family.q(), family.m());
    let s = match family.lambda() {
        LambdaKind::PowerForm(s) => s,
        LambdaKind::DivisorOfQMinus1(l) if l == q - 1 => 1,
        LambdaKind::DivisorOfQMinus1(lambda) => return (m >= 2).then_some(ClosedPath::Divisor { lambda }),
    };
    (m / s >= 3).then_some(ClosedPath::Power { s })
}

#[inline]
fn pw(q: u64, e: u32) -> u64 {
    q.pow(e)
}

/// Smallest positive integer not in `T⊥`.
pub fn i_delta_direct(t_perp: &DefiningSet) -> Result<u64, DualError> {
    if !t_perp.contains(0) {
        return Err(DualError::ZeroNotInDual);
    }
    let n = t_perp.modulus();
    Ok((1..n).find(|&i| !t_perp.contains(i)).unwrap_or(n))
}

fn check_power(q: u64, s: u32, m: u32, delta: u64) -> Result<u64, DualError> {
    if s == 0 || m % s != 0 || m / s < 3 {
        return Err(hyp(format!("power form needs s | m and m/s >= 3 (s = {s}, m = {m})")));
    }
    let n = BchFamily::new(q, m, LambdaKind::PowerForm(s))?.n();
    if delta < 2 || delta > n {
        return Err(BchError::DeltaOutOfRange { delta, n }.into());
    }
    Ok(n)
}

fn check_divisor(q: u64, lambda: u64, m: u32, delta: u64) -> Result<u64, DualError> {
    let n = BchFamily::new(q, m, LambdaKind::DivisorOfQMinus1(lambda))?.n();
    if lambda == q - 1 {
        return Err(hyp("divisor form needs lambda != q - 1"));
    }
    if m < 2 {
        return Err(hyp("divisor form needs m >= 2"));
    }
    if delta < 2 || delta > n {
        return Err(BchError::DeltaOutOfRange { delta, n }.into());
    }
    Ok(n)
}

fn power_case(q: u64, s: u32, m: u32, delta: u64) -> Option<ClosedCase> {
    let qs = pw(q, s) - 1;
    let k = m / s;
    for t in 1..=k.saturating_sub(2) {
        if (pw(q, t * s) - 1) / qs < delta && delta <= (pw(q, (t + 1) * s) - 1) / qs {
            return Some(ClosedCase::PowerRange { t });
        }
    }
    ((pw(q, m - s) - 1) / qs < delta).then_some(ClosedCase::PowerTail)
}

fn divisor_case(q: u64, lambda: u64, m: u32, delta: u64) -> Option<ClosedCase> {
    let r = (q - 1) / lambda;
    for t in 0..=m - 2 {
        for s in 1..r {
            if delta == (pw(q, t + 1) - q) / lambda + s + 1 {
                return Some(ClosedCase::DivisorPoint { t, s });
            }
        }
    }
    for t in 1..m {
        let base = (pw(q, t) - 1) / lambda;
        for s in 0..r.saturating_sub(1) {
            if base + s * pw(q, t) < delta && delta <= base + (s + 1) * pw(q, t) {
                return Some(ClosedCase::DivisorInterval { t, s });
            }
        }
    }
    for t in 1..=m.saturating_sub(2) {
        if (pw(q, t + 1) - 1) / lambda - pw(q, t) < delta && delta <= (pw(q, t + 1) - q) / lambda + 1 {
            return Some(ClosedCase::DivisorBoundary { t });
        }
    }
    ((pw(q, m) - 1) / lambda - pw(q, m - 1) < delta).then_some(ClosedCase::DivisorTail)
}

/// `I(delta)` for `n = (q^m-1)/(q^s-1)`, `m/s >= 3`.
pub fn i_delta_closed_power_form(q: u64, s: u32, m: u32, delta: u64) -> Result<ClosedValue, DualError> {
    check_power(q, s, m, delta)?;
    let qs = pw(q, s) - 1;
    let case = power_case(q, s, m, delta)
        .ok_or_else(|| DualError::NoCaseMatched { family: format!("q={q} m={m} s={s}"), delta })?;
    let value = match case {
        ClosedCase::PowerRange { t } => (pw(q, m - t * s) - 1) / qs,
        _ => 1,
    };
    Ok(ClosedValue { value, case })
}

/// `I(delta)` for `n = (q^m-1)/lambda`, `lambda | q-1`, `lambda != q-1`.
/// Exact-point matches take precedence over the interval cases.
pub fn i_delta_closed_divisor_form(q: u64, lambda: u64, m: u32, delta: u64) -> Result<ClosedValue, DualError> {
    check_divisor(q, lambda, m, delta)?;
    let case = divisor_case(q, lambda, m, delta)
        .ok_or_else(|| DualError::NoCaseMatched { family: format!("q={q} m={m} lambda={lambda}"), delta })?;
    let value = match case {
        ClosedCase::DivisorPoint { t, s } => (pw(q, m - t) - 1) / lambda - s * pw(q, m - t - 1),
        ClosedCase::DivisorInterval { t, s } => (pw(q, m - t) - 1) / lambda - s,
        ClosedCase::DivisorBoundary { t } => (pw(q, m - t) - q) / lambda + 1,
        _ => 1,
    };
    Ok(ClosedValue { value, case })
}

/// Closed-form `I(delta)` along whichever path the family qualifies for.
pub fn i_delta_closed(spec: &BchSpec) -> Result<Option<ClosedValue>, DualError> {
    let (q, m, delta) = (spec.q(), spec.m(), spec.delta());
    match closed_path(spec.family()) {
        Some(ClosedPath::Power { s }) => i_delta_closed_power_form(q, s, m, delta).map(Some),
        Some(ClosedPath::Divisor { lambda }) => i_delta_closed_divisor_form(q, lambda, m, delta).map(Some),
        None => Ok(None),
    }
}

/// Closed-form lower bound on the dual distance, evaluated from the bound
/// formulas themselves rather than from `I(delta)`.
pub fn dual_lower_bound(spec: &BchSpec) -> Result<u64, DualError> {
    let (q, m, delta) = (spec.q(), spec.m(), spec.delta());
    let path = closed_path(spec.family()).ok_or_else(|| {
        hyp(format!("{} satisfies neither m/s >= 3 nor (lambda | q-1, lambda != q-1, m >= 2)", spec.family()))
    })?;
    let no_case = || DualError::NoCaseMatched { family: spec.family().to_string(), delta };
    match path {
        ClosedPath::Power { s } => {
            check_power(q, s, m, delta)?;
            let qs = pw(q, s) - 1;
            Ok(match power_case(q, s, m, delta).ok_or_else(no_case)? {
                ClosedCase::PowerRange { t } => (pw(q, m - t * s) - 1) / qs + 1,
                _ => 2,
            })
        }
        ClosedPath::Divisor { lambda } => {
            check_divisor(q, lambda, m, delta)?;
            Ok(match divisor_case(q, lambda, m, delta).ok_or_else(no_case)? {
                ClosedCase::DivisorPoint { t, s } => (pw(q, m - t) + lambda - 1) / lambda - s * pw(q, m - t - 1),
                ClosedCase::DivisorInterval { t, s } => (pw(q, m - t) - 1) / lambda - s + 1,
                ClosedCase::DivisorBoundary { t } => (pw(q, m - t) - q) / lambda + 2,
                _ => 2,
            })
        }
    }
}

/// A classical lower bound on the dual distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorBound {
    pub name: String,
    pub value: i64,
    /// Set when the bound says nothing (`value <= 1`).
    pub vacuous: bool,
}

impl PriorBound {
    fn new(name: &str, value: i64) -> Self {
        PriorBound { name: name.to_string(), value, vacuous: value <= 1 }
    }
}

fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Classical bounds whose hypotheses `spec` meets: Carlitz-Uchiyama and
/// Sidel'nikov (binary primitive, odd delta), and the earlier bounds for
/// lengths `q^m - 1` and `(q^m - 1)/(q - 1)`.
pub fn prior_bounds(spec: &BchSpec) -> Vec<PriorBound> {
    let (q, m, delta, n) = (spec.q(), spec.m(), spec.delta(), spec.n());
    let lambda = spec.family().lambda_value();
    let mut out = Vec::new();
    let qi = q as i64;
    let p = |e: u32| pw(q, e) as i64;

    if q == 2 && lambda == 1 && delta % 2 == 1 {
        let s = (delta - 1) / 2;
        // floor((s-1) 2^{m/2}) = isqrt((s-1)^2 2^m); the bound is the ceiling of the real value.
        let sub = isqrt((s as u128 - 1).pow(2) << m) as i64;
        out.push(PriorBound::new("carlitz-uchiyama", p(m - 1) - sub));
        let log = 63 - (2 * s - 1).leading_zeros();
        out.push(PriorBound::new("sidelnikov", p(m - 1 - log)));
    }

    if lambda == 1 && m >= 3 {
        let d = delta as i64;
        let mut push = |v: i64| out.push(PriorBound::new("primitive-length", v));
        if q == 2 {
            for t in 2..=m - 3 {
                if p(t) <= d && d < p(t + 1) {
                    push(p(m - t));
                }
            }
            if p(m - 2) <= d && d < p(m - 1) - p((m - 1) / 2) {
                push(4);
            }
        } else {
            for t in 1..=m - 2 {
                for a in 1..qi - 1 {
                    if a * p(t) <= d && d < (a + 1) * p(t) {
                        push(p(m - t) - a + 1);
                    }
                }
                if (qi - 1) * p(t) <= d && d <= p(t + 1) - qi + 1 {
                    push(p(m - t) - qi + 2);
                }
            }
            for a in 1..qi - 2 {
                if a * p(m - 1) <= d && d < (a + 1) * p(m - 1) {
                    push(qi - a + 1);
                }
            }
            if (qi - 2) * p(m - 1) <= d && d < (qi - 1) * p(m - 1) - p((m - 1) / 2) {
                push(3);
            }
            for t in 1..m {
                for b in 1..=qi - 2 {
                    if p(t) - b >= 3 && d == p(t) - b {
                        push((b + 1) * p(m - t));
                    }
                }
            }
        }
    }

    if lambda == q - 1 && m >= 3 {
        let qs = q - 1;
        for t in 1..=m - 2 {
            if (pw(q, t) - 1) / qs < delta && delta <= (pw(q, t + 1) - 1) / qs {
                out.push(PriorBound::new("projective-length", ((pw(q, m - t) - 1) / qs + 1) as i64));
            }
        }
        if (pw(q, m - 1) - 1) / qs < delta && delta < n {
            out.push(PriorBound::new("projective-length", 2));
        }
    }
    out
}

/// Why a code is or is not dually-BCH.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum DuallyWitness {
    /// `T⊥ = C_0 ∪ ... ∪ C_{J-1}`.
    J(u64),
    /// The least coset leader in `T⊥` that is at least `I(delta)`.
    StrayLeader(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuallyBch {
    pub dually_bch: bool,
    pub witness: DuallyWitness,
}

/// Decides whether `T⊥` is the union of the cosets of `0..J-1`, `J = I(delta)`.
pub fn dually_bch_direct(t_perp: &DefiningSet, table: &CosetTable) -> Result<DuallyBch, DualError> {
    let j = i_delta_direct(t_perp)?;
    // T⊥ is q-closed, so it is exactly the union of cosets of its leaders.
    let stray = table.leaders().iter().copied().find(|&l| l >= j && t_perp.contains(l));
    Ok(match stray {
        None => DuallyBch { dually_bch: true, witness: DuallyWitness::J(j) },
        Some(l) => DuallyBch { dually_bch: false, witness: DuallyWitness::StrayLeader(l) },
    })
}

/// The dually-BCH criterion in closed form. `delta1`/`delta2` come from `table`.
pub fn dually_bch_closed(spec: &BchSpec, table: &CosetTable) -> Result<bool, DualError> {
    let (q, m, delta) = (spec.q(), spec.m(), spec.delta());
    if table.modulus() != spec.n() || table.base() != q {
        return Err(BchError::TableMismatch { table_n: table.modulus(), table_q: table.base(), n: spec.n(), q }.into());
    }
    let top = table.largest_leaders(2);
    let d1 = top[0];
    let d2 = top.get(1).copied();
    match closed_path(spec.family()) {
        Some(ClosedPath::Power { s }) => {
            if (q != 2 && m < 4) || (q == 2 && m < 6) {
                return Err(hyp("dually-BCH criterion needs m >= 4 (q > 2) or m >= 6 (q = 2)"));
            }
            if q == 2 && s == 1 {
                let d2 = d2.ok_or_else(|| hyp("fewer than two coset leaders"))?;
                Ok(delta == 2 || delta == 3 || delta > d2)
            } else {
                Ok(delta > d1)
            }
        }
        Some(ClosedPath::Divisor { lambda }) => {
            if q < 3 {
                return Err(hyp("dually-BCH criterion needs q >= 3"));
            }
            if lambda == 1 {
                let d2 = d2.ok_or_else(|| hyp("fewer than two coset leaders"))?;
                Ok(delta == 2 || delta > d2)
            } else {
                Ok(delta > d1)
            }
        }
        None => Err(hyp(format!("no dually-BCH criterion covers {}", spec.family()))),
    }
}

/// `CL(n - delta1)`.
pub fn delta_prime(table: &CosetTable) -> u64 {
    let n = table.modulus();
    let d1 = table.largest_leaders(1)[0];
    table.leader_of((n - d1) % n)
}

/// Everything known about `C_delta^⊥` for one spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub m: u32,
    pub lambda: LambdaKind,
    pub n: u64,
    pub delta: u64,
    pub i_delta_direct: u64,
    pub i_delta_closed: Option<ClosedValue>,
    pub lower_bound_closed: Option<u64>,
    /// Cyclic BCH bound of `T⊥`.
    pub lower_bound_direct: u64,
    pub prior_bounds: Vec<PriorBound>,
    pub dually_bch_direct: DuallyBch,
    pub dually_bch_closed: Option<bool>,
    pub delta1: u64,
    pub delta2: Option<u64>,
}

impl BoundReport {
    /// Largest lower bound on the dual distance from any source in the report.
    pub fn best_lower_bound(&self) -> u64 {
        let prior = self.prior_bounds.iter().map(|b| b.value.max(0) as u64);
        self.lower_bound_closed.into_iter().chain(prior).fold(self.lower_bound_direct, u64::max)
    }
}

/// Builds the full report. Closed-form fields are `None` outside their hypotheses.
pub fn analyze(spec: &BchSpec, table: &CosetTable) -> Result<BoundReport, DualError> {
    let t = defining_set(spec, table)?;
    analyze_with(spec, table, &dual_defining_set(&t))
}

fn analyze_with(spec: &BchSpec, table: &CosetTable, t_perp: &DefiningSet) -> Result<BoundReport, DualError> {
    let top = table.largest_leaders(2);
    let i_closed = i_delta_closed(spec)?;
    let lower_closed = match i_closed {
        Some(_) => Some(dual_lower_bound(spec)?),
        None => None,
    };
    let dually_closed = match dually_bch_closed(spec, table) {
        Ok(v) => Some(v),
        Err(DualError::Hypothesis(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(BoundReport {
        q: spec.q(),
        m: spec.m(),
        lambda: spec.lambda(),
        n: spec.n(),
        delta: spec.delta(),
        i_delta_direct: i_delta_direct(t_perp)?,
        i_delta_closed: i_closed,
        lower_bound_closed: lower_closed,
        lower_bound_direct: t_perp.bch_bound(),
        prior_bounds: prior_bounds(spec),
        dually_bch_direct: dually_bch_direct(t_perp, table)?,
        dually_bch_closed: dually_closed,
        delta1: top[0],
        delta2: top.get(1).copied(),
    })
}

/// Reports for every delta in `lo..=hi`, computed in parallel and returned in delta order.
pub fn sweep(family: &BchFamily, table: &CosetTable, lo: u64, hi: u64) -> Result<Vec<BoundReport>, DualError> {
    let lo = lo.max(2);
    let hi = hi.min(family.n());
    (lo..=hi).into_par_iter().map(|delta| analyze(&family.with_delta(delta)?, table)).collect()
}

/// Largest delta in the sweep whose code is not dually-BCH (direct verdict).
pub fn dually_threshold(rows: &[BoundReport]) -> Option<u64> {
    rows.iter().filter(|r| !r.dually_bch_direct.dually_bch).map(|r| r.delta).max()
}
