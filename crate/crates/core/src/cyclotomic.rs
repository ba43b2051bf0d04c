//! q-cyclotomic cosets modulo n, coset leaders and q-adic expansions.

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, gcd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CosetError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("gcd(n = {n}, q = {q}) = {g}, cosets need n coprime to q")]
    NotCoprime { n: u64, q: u64, g: u64 },
    #[error("modulus {0} is too large to tabulate")]
    TooLarge(u64),
    #[error("residue {a} is out of range for modulus {n}")]
    OutOfRange { a: u64, n: u64 },
    #[error("q-adic expansions differ in base or length")]
    Mismatch,
    #[error("closed form needs {0}")]
    Constraint(&'static str),
    #[error("arithmetic overflow")]
    Overflow,
}

/// Partition of Z_n into q-cyclotomic cosets, stored as flat arrays.
#[derive(Debug, Clone)]
pub struct CosetTable {
    n: u64,
    q: u64,
    /// Coset id of every residue.
    coset_id: Vec<u32>,
    /// Leader of each coset, ascending.
    leaders: Vec<u64>,
    /// Members of each coset, ascending.
    members: Vec<Vec<u64>>,
}

impl CosetTable {
    pub fn new(n: u64, q: u64) -> Result<Self, CosetError> {
        if n == 0 {
            return Err(CosetError::ZeroModulus);
        }
        if q < 2 {
            return Err(CosetError::BadBase(q));
        }
        let g = gcd(n, q);
        if g != 1 {
            return Err(CosetError::NotCoprime { n, q, g });
        }
        if n > u32::MAX as u64 {
            return Err(CosetError::TooLarge(n));
        }
        let size = n as usize;
        let qm = q % n;
        let mut coset_id = vec![u32::MAX; size];
        let mut leaders = Vec::new();
        let mut members = Vec::new();
        // Sweeping upward, the first unmarked residue of an orbit is its minimum.
        for a in 0..n {
            if coset_id[a as usize] != u32::MAX {
                continue;
            }
            let id = leaders.len() as u32;
            let mut orbit = Vec::new();
            let mut x = a;
            loop {
                coset_id[x as usize] = id;
                orbit.push(x);
                x = crate::arith::mul_mod(x, qm, n);
                if x == a {
                    break;
                }
            }
            orbit.sort_unstable();
            leaders.push(a);
            members.push(orbit);
        }
        Ok(CosetTable { n, q, coset_id, leaders, members })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.q
    }

    /// CL(a): the smallest element of a's coset.
    pub fn leader(&self, a: u64) -> Result<u64, CosetError> {
        if a >= self.n {
            return Err(CosetError::OutOfRange { a, n: self.n });
        }
        Ok(self.leaders[self.coset_id[a as usize] as usize])
    }

    /// Unchecked variant for hot loops; panics when `a >= n`.
    #[inline]
    pub fn leader_of(&self, a: u64) -> u64 {
        self.leaders[self.coset_id[a as usize] as usize]
    }

    pub fn is_leader(&self, a: u64) -> bool {
        a < self.n && self.leader_of(a) == a
    }

    /// Members of the coset containing `a`.
    pub fn coset_of(&self, a: u64) -> &[u64] {
        &self.members[self.coset_id[a as usize] as usize]
    }

    /// All leaders, ascending.
    pub fn leaders(&self) -> &[u64] {
        &self.leaders
    }

    /// `(leader, members)` pairs in ascending leader order.
    pub fn cosets(&self) -> impl Iterator<Item = (u64, &[u64])> + '_ {
        self.leaders.iter().copied().zip(self.members.iter().map(Vec::as_slice))
    }

    pub fn coset_count(&self) -> usize {
        self.leaders.len()
    }

    /// The `count` largest leaders, descending.
    pub fn largest_leaders(&self, count: usize) -> Vec<u64> {
        self.leaders.iter().rev().take(count).copied().collect()
    }
}

pub fn coset_table(n: u64, q: u64) -> Result<CosetTable, CosetError> {
    CosetTable::new(n, q)
}

pub fn coset_leader(table: &CosetTable, a: u64) -> Result<u64, CosetError> {
    table.leader(a)
}

pub fn largest_leaders(table: &CosetTable, count: usize) -> Vec<u64> {
    table.largest_leaders(count)
}

/// Base-q digits `(i_{m-1}, ..., i_0)`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QAdic {
    q: u64,
    digits: Vec<u64>,
}

impl QAdic {
    pub fn new(i: u64, q: u64, m: u32) -> Result<Self, CosetError> {
        if q < 2 {
            return Err(CosetError::BadBase(q));
        }
        let bound = checked_pow(q, m);
        if bound.is_some_and(|b| i >= b) {
            return Err(CosetError::OutOfRange { a: i, n: bound.unwrap_or(u64::MAX) });
        }
        let mut digits = vec![0u64; m as usize];
        let mut rest = i;
        for d in digits.iter_mut().rev() {
            *d = rest % q;
            rest /= q;
        }
        Ok(QAdic { q, digits })
    }

    pub fn base(&self) -> u64 {
        self.q
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().fold(0, |acc, &d| acc * self.q + d)
    }

    /// Circular j-left-shift, i.e. the expansion of `i * q^j mod (q^m - 1)`.
    pub fn rotate_left(&self, j: usize) -> QAdic {
        let mut digits = self.digits.clone();
        if !digits.is_empty() {
            let len = digits.len();
            digits.rotate_left(j % len);
        }
        QAdic { q: self.q, digits }
    }
}

pub fn q_adic(i: u64, q: u64, m: u32) -> Result<QAdic, CosetError> {
    QAdic::new(i, q, m)
}

/// Whether every circular shift of `a` is at least `b` (digitwise
/// lexicographic order, most significant first). For values below
/// `q^m - 1` this is exactly `CL(a) >= b` modulo `q^m - 1`.
pub fn is_leader_at_least(a: &QAdic, b: &QAdic) -> Result<bool, CosetError> {
    if a.q != b.q || a.digits.len() != b.digits.len() {
        return Err(CosetError::Mismatch);
    }
    let m = a.digits.len();
    Ok((0..m.max(1)).all(|j| {
        let shifted = a.rotate_left(j);
        shifted.digits >= b.digits
    }))
}

/// The three families with a known closed form for the largest leaders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeaderFamily {
    /// Modulus `q^m - 1`.
    Full,
    /// Modulus `(q^m - 1)/(q - 1)`; only `q >= 3`, `m >= 4`.
    QMinus1,
    /// Modulus `(q^m - 1)/2`; only odd `q`.
    Half,
}

impl LeaderFamily {
    pub fn modulus(self, q: u64, m: u32) -> Option<u64> {
        let full = checked_pow(q, m)? - 1;
        match self {
            LeaderFamily::Full => Some(full),
            LeaderFamily::QMinus1 => Some(full / (q - 1)),
            LeaderFamily::Half => Some(full / 2),
        }
    }
}

/// Closed-form largest leaders, descending.
///
/// * `Full`: `delta_1, delta_2` for `m >= 2`, plus `delta_3` when `m >= 4`.
/// * `QMinus1`: `delta_1` for `q >= 3`, `m >= 4`.
/// * `Half`: `delta_1, delta_2` for odd `q`, `m >= 2`.
pub fn largest_leaders_closed_form(q: u64, m: u32, family: LeaderFamily) -> Result<Vec<u64>, CosetError> {
    if q < 2 {
        return Err(CosetError::BadBase(q));
    }
    let pw = |e: u32| checked_pow(q, e).ok_or(CosetError::Overflow);
    match family {
        LeaderFamily::Full => {
            if m < 2 {
                return Err(CosetError::Constraint("m >= 2"));
            }
            let top = (q - 1).checked_mul(pw(m - 1)?).ok_or(CosetError::Overflow)?;
            let mut out = vec![top - 1, top - pw((m - 1) / 2)? - 1];
            if m >= 4 {
                out.push(top - pw((m + 1) / 2)? - 1);
            }
            Ok(out)
        }
        LeaderFamily::QMinus1 => {
            if q < 3 || m < 4 {
                return Err(CosetError::Constraint("q >= 3 and m >= 4"));
            }
            // sum_{t=1}^{q-2} q^{ceil(m t/(q-1) - 1)}; ceil(a/b - 1) = ceil(a/b) - 1.
            let mut sum: u64 = 0;
            for t in 1..=q - 2 {
                let e = (m as u64 * t).div_ceil(q - 1) - 1;
                sum = sum.checked_add(pw(e as u32)?).ok_or(CosetError::Overflow)?;
            }
            let numerator = sum + 2 - q;
            Ok(vec![pw(m - 1)? - 1 - numerator / (q - 1)])
        }
        LeaderFamily::Half => {
            if q % 2 == 0 {
                return Err(CosetError::Constraint("odd q"));
            }
            if m < 2 {
                return Err(CosetError::Constraint("m >= 2"));
            }
            let top = (q - 1).checked_mul(pw(m - 1)?).ok_or(CosetError::Overflow)?;
            Ok(vec![(top - pw((m - 1) / 2)? - 1) / 2, (top - pw((m + 1) / 2)? - 1) / 2])
        }
    }
}

/// Coset leader of `a mod modulus` by walking the orbit; no table needed.
pub fn orbit_leader(a: u64, q: u64, modulus: u64) -> u64 {
    let a = a % modulus;
    let qm = q % modulus;
    let mut best = a;
    let mut x = crate::arith::mul_mod(a, qm, modulus);
    while x != a {
        best = best.min(x);
        x = crate::arith::mul_mod(x, qm, modulus);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn doubling_orbit_mod_63() {
        let t = CosetTable::new(63, 2).unwrap();
        assert_eq!(t.coset_of(1), &[1, 2, 4, 8, 16, 32]);
        assert_eq!(t.leader(0).unwrap(), 0);
        assert_eq!(t.leader(32).unwrap(), 1);
        assert_eq!(t.leader(47).unwrap(), 31);
        assert_eq!(t.leader(63), Err(CosetError::OutOfRange { a: 63, n: 63 }));
        assert_eq!(t.largest_leaders(3), vec![31, 27, 23]);
    }

    #[test]
    fn tripling_orbit_mod_26() {
        let t = CosetTable::new(26, 3).unwrap();
        assert_eq!(t.coset_of(2), &[2, 6, 18]);
        assert_eq!(t.leader(18).unwrap(), 2);
    }

    #[test]
    fn rejects_non_coprime() {
        assert_eq!(CosetTable::new(40, 2).unwrap_err(), CosetError::NotCoprime { n: 40, q: 2, g: 2 });
        assert_eq!(CosetTable::new(0, 2).unwrap_err(), CosetError::ZeroModulus);
    }

    #[test]
    fn trivial_modulus() {
        let t = CosetTable::new(1, 5).unwrap();
        assert_eq!(t.leaders(), &[0]);
    }

    #[test]
    fn q_adic_examples() {
        assert_eq!(q_adic(0, 3, 4).unwrap().digits(), &[0, 0, 0, 0]);
        assert_eq!(q_adic(80, 3, 4).unwrap().digits(), &[2, 2, 2, 2]);
        // q^{t+1} - q + lambda*s with q=5, t=1, lambda=2, s=1.
        assert_eq!(q_adic(22, 5, 4).unwrap().digits(), &[0, 0, 4, 2]);
        assert!(q_adic(81, 3, 4).is_err());
    }

    #[test]
    fn leader_at_least_examples() {
        let e = |v| q_adic(v, 2, 6).unwrap();
        assert!(is_leader_at_least(&e(31), &e(31)).unwrap());
        assert!(!is_leader_at_least(&e(47), &e(32)).unwrap());
        assert!(is_leader_at_least(&e(47), &e(31)).unwrap());
        assert_eq!(is_leader_at_least(&e(1), &q_adic(1, 3, 6).unwrap()), Err(CosetError::Mismatch));
        assert_eq!(is_leader_at_least(&e(1), &q_adic(1, 2, 5).unwrap()), Err(CosetError::Mismatch));
    }

    #[test]
    fn leader_at_least_matches_table_exhaustively() {
        for (q, m) in [(2u64, 10u32), (3, 6), (4, 5), (5, 4), (7, 3), (31, 2)] {
            let modulus = q.pow(m) - 1;
            if modulus > 1 << 10 {
                continue;
            }
            let t = CosetTable::new(modulus, q).unwrap();
            let exps: Vec<QAdic> = (0..modulus).map(|v| q_adic(v, q, m).unwrap()).collect();
            for a in 0..modulus {
                let cl = t.leader_of(a);
                assert!(is_leader_at_least(&exps[a as usize], &exps[cl as usize]).unwrap());
                for b in 0..modulus {
                    assert_eq!(
                        is_leader_at_least(&exps[a as usize], &exps[b as usize]).unwrap(),
                        cl >= b,
                        "q={q} m={m} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(largest_leaders_closed_form(2, 6, LeaderFamily::Full).unwrap(), vec![31, 27, 23]);
        assert_eq!(largest_leaders_closed_form(3, 4, LeaderFamily::QMinus1).unwrap(), vec![25]);
        assert_eq!(largest_leaders_closed_form(3, 4, LeaderFamily::Half).unwrap(), vec![25, 22]);
        assert_eq!(CosetTable::new(40, 3).unwrap().largest_leaders(2), vec![25, 22]);
        assert!(largest_leaders_closed_form(2, 6, LeaderFamily::QMinus1).is_err());
        assert!(largest_leaders_closed_form(3, 3, LeaderFamily::QMinus1).is_err());
        assert!(largest_leaders_closed_form(4, 4, LeaderFamily::Half).is_err());
        // delta_3 is only exposed from m = 4 on (at m = 3 the formula is off).
        assert_eq!(largest_leaders_closed_form(3, 3, LeaderFamily::Full).unwrap().len(), 2);
    }

    #[test]
    fn leader_lifting_exhaustive() {
        // t is a leader mod q^m-1 iff t/mu is a leader mod (q^m-1)/mu, for mu | gcd(t, q^m-1).
        for (q, m) in [(2u64, 6u32), (2, 8), (3, 4), (3, 6), (4, 4), (5, 3), (7, 3)] {
            let full = q.pow(m) - 1;
            let big = CosetTable::new(full, q).unwrap();
            for mu in crate::arith::divisors(full) {
                let small = CosetTable::new(full / mu, q).unwrap();
                for t in (mu..full).step_by(mu as usize) {
                    assert_eq!(big.is_leader(t), small.is_leader(t / mu), "q={q} m={m} mu={mu} t={t}");
                }
            }
        }
    }

    #[test]
    fn coset_compatibility_exhaustive() {
        // a = b q^i mod q^m-1 with lambda | a, b, q^m-1 => a/lambda ~ b/lambda mod (q^m-1)/lambda.
        for (q, m) in [(2u64, 6u32), (3, 4), (3, 6), (5, 3)] {
            let full = q.pow(m) - 1;
            let big = CosetTable::new(full, q).unwrap();
            for lambda in crate::arith::divisors(full).into_iter().filter(|&l| l > 1) {
                let small = CosetTable::new(full / lambda, q).unwrap();
                for a in (lambda..full).step_by(lambda as usize) {
                    for &b in big.coset_of(a) {
                        if b % lambda == 0 {
                            assert_eq!(small.leader_of(a / lambda), small.leader_of(b / lambda));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn table_is_a_partition(n in 1u64..3000, q in 2u64..40) {
            prop_assume!(gcd(n, q) == 1);
            let t = CosetTable::new(n, q).unwrap();
            let total: usize = t.cosets().map(|(_, m)| m.len()).sum();
            prop_assert_eq!(total as u64, n);
            for (leader, members) in t.cosets() {
                prop_assert_eq!(members[0], leader);
                for &x in members {
                    prop_assert_eq!(t.leader_of(x), leader);
                    prop_assert!(members.binary_search(&(x * q % n)).is_ok());
                }
                prop_assert_eq!(t.leader_of(t.leader_of(leader)), leader);
            }
        }

        #[test]
        fn orbit_leader_agrees_with_table(n in 1u64..2000, q in 2u64..20, a in 0u64..2000) {
            prop_assume!(gcd(n, q) == 1);
            let t = CosetTable::new(n, q).unwrap();
            prop_assert_eq!(orbit_leader(a % n, q, n), t.leader_of(a % n));
        }

        #[test]
        fn q_adic_round_trip(q in 2u64..20, m in 1u32..8, raw in any::<u64>()) {
            let bound = q.pow(m);
            let i = raw % bound;
            prop_assert_eq!(q_adic(i, q, m).unwrap().value(), i);
        }
    }
}
