//! Exact arithmetic in GF(p^k) and in polynomials over a subfield GF(q).
//!
//! GF(q^m) for a prime power `q = p^e` is realized as the single extension
//! GF(p^{e*m}) in a polynomial basis. The order-`q` subfield is reached
//! through [`Subfield`], which maps subfield elements onto GF(q)'s own
//! representation (the field `FieldCtx::new(p, e)`) and back.
//!
//! Elements of GF(q) outside of a [`FieldCtx`] are plain `u64` scalars: the
//! polynomial-basis digits of the element read as a base-`p` integer. For a
//! prime `q` this is just the residue.

use std::fmt;

use crate::arith::{self, checked_pow, mul_mod};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} does not fit in 63 bits")]
    OrderTooLarge { p: u64, k: u32 },
    #[error("no primitive polynomial of degree {k} over GF({p}) found")]
    NoPrimitivePolynomial { p: u64, k: u32 },
    #[error("GF({q}) is not a subfield of GF({p}^{k})")]
    NotASubfield { q: u64, p: u64, k: u32 },
    #[error("element is not in the order-{q} subfield")]
    NotInSubfield { q: u64 },
    #[error("conjugates of the element do not close up after {expected} Frobenius steps")]
    WrongCosetSize { expected: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// An element of GF(p^k) in polynomial-basis coordinates, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem{:?}", self.coeffs)
    }
}

/// GF(p^k) with a fixed primitive modulus; immutable once built.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    k: u32,
    order: u64,
    /// Monic, `k + 1` coefficients, lowest degree first.
    modulus: Vec<u64>,
    generator: FieldElem,
}

impl FieldCtx {
    /// Builds GF(p^k) over the lexicographically first primitive polynomial.
    ///
    /// Candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are visited in increasing
    /// order of the integer `sum c_i p^i`; the first one whose root has
    /// multiplicative order `p^k - 1` is used. That order test also rules out
    /// reducible candidates, since a reducible modulus has fewer than
    /// `p^k - 1` units.
    pub fn new(p: u64, k: u32) -> Result<Self, GfError> {
        if !arith::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = match checked_pow(p, k) {
            Some(o) if o <= 1u64 << 63 => o,
            _ => return Err(GfError::OrderTooLarge { p, k }),
        };
        let group = order - 1;
        let cofactors: Vec<u64> = arith::prime_factors(group).into_iter().map(|r| group / r).collect();

        for code in 0..order {
            let mut modulus = digits(code, p, k as usize);
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            let mut ctx = FieldCtx { p, k, order, modulus, generator: FieldElem { coeffs: vec![0; k as usize] } };
            let x = ctx.indeterminate();
            let one = ctx.one();
            if ctx.pow(&x, group) == one && cofactors.iter().all(|&c| ctx.pow(&x, c) != one) {
                ctx.generator = x;
                return Ok(ctx);
            }
        }
        Err(GfError::NoPrimitivePolynomial { p, k })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The primitive element (class of the indeterminate).
    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.k as usize] }
    }

    pub fn one(&self) -> FieldElem {
        self.constant(1)
    }

    /// Embeds a prime-field residue.
    pub fn constant(&self, c: u64) -> FieldElem {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    fn indeterminate(&self) -> FieldElem {
        if self.k == 1 {
            // x = -c_0 modulo the linear modulus x + c_0.
            self.constant((self.p - self.modulus[0]) % self.p)
        } else {
            let mut e = self.zero();
            e.coeffs[1] = 1;
            e
        }
    }

    /// Builds an element from coordinates; each must lie in `[0, p)`.
    pub fn elem(&self, coeffs: &[u64]) -> Option<FieldElem> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(FieldElem { coeffs: coeffs.to_vec() })
    }

    /// Coordinates read as a base-`p` integer in `[0, p^k)`.
    pub fn to_index(&self, x: &FieldElem) -> u64 {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, index: u64) -> FieldElem {
        FieldElem { coeffs: digits(index % self.order, self.p, self.k as usize) }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| add_mod(x, y, p)).collect() }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| add_mod(x, p - y, p)).collect() }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &FieldElem, c: u64) -> FieldElem {
        let p = self.p;
        FieldElem { coeffs: a.coeffs.iter().map(|&x| mul_mod(x, c % p, p)).collect() }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let k = self.k as usize;
        let p = self.p;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
            }
        }
        // Reduce from the top using the monic modulus.
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &mj) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = add_mod(prod[idx], p - mul_mod(c, mj, p), p);
            }
        }
        prod.truncate(k);
        FieldElem { coeffs: prod }
    }

    /// `x^e` by square-and-multiply; `x^0 = 1`.
    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: &FieldElem) -> Option<FieldElem> {
        if x.is_zero() {
            None
        } else {
            Some(self.pow(x, self.order - 2))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FieldElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let one = self.one();
        let mut ord = self.order - 1;
        for r in arith::prime_factors(ord) {
            while ord % r == 0 && self.pow(x, ord / r) == one {
                ord /= r;
            }
        }
        Some(ord)
    }
}

/// Convenience wrapper matching the operation name used across the crate.
pub fn field_new(p: u64, k: u32) -> Result<FieldCtx, GfError> {
    FieldCtx::new(p, k)
}

pub fn elem_pow(ctx: &FieldCtx, x: &FieldElem, e: u64) -> FieldElem {
    ctx.pow(x, e)
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= p {
        s.wrapping_sub(p)
    } else {
        s
    }
}

fn digits(mut v: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % base);
        v /= base;
    }
    out
}

const TABLE_LIMIT: u64 = 256;

/// Arithmetic on GF(q) scalars in their own representation.
///
/// Prime `q` uses residues directly. Prime powers go through the
/// lexicographically-first field `GF(p^e)`, with full tables when `q <= 256`.
#[derive(Debug, Clone)]
pub struct ScalarField {
    q: u64,
    p: u64,
    ctx: FieldCtx,
    tables: Option<Tables>,
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl ScalarField {
    pub fn new(q: u64) -> Result<Self, GfError> {
        let (p, e) = arith::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        let ctx = FieldCtx::new(p, e)?;
        let mut field = ScalarField { q, p, ctx, tables: None };
        if e > 1 && q <= TABLE_LIMIT {
            let size = (q * q) as usize;
            let mut add = Vec::with_capacity(size);
            let mut mul = Vec::with_capacity(size);
            for a in 0..q {
                for b in 0..q {
                    add.push(field.slow_add(a, b) as u16);
                    mul.push(field.slow_mul(a, b) as u16);
                }
            }
            field.tables = Some(Tables { add, mul });
        }
        Ok(field)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_prime_field(&self) -> bool {
        self.q == self.p
    }

    /// GF(q)'s own representation as an extension of GF(p).
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    fn slow_add(&self, a: u64, b: u64) -> u64 {
        let x = self.ctx.from_index(a);
        let y = self.ctx.from_index(b);
        self.ctx.to_index(&self.ctx.add(&x, &y))
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let x = self.ctx.from_index(a);
        let y = self.ctx.from_index(b);
        self.ctx.to_index(&self.ctx.mul(&x, &y))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.q == self.p {
            add_mod(a, b, self.p)
        } else if let Some(t) = &self.tables {
            t.add[(a * self.q + b) as usize] as u64
        } else {
            self.slow_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.q == self.p {
            (self.p - a) % self.p
        } else {
            let x = self.ctx.from_index(a);
            self.ctx.to_index(&self.ctx.neg(&x))
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.q == self.p {
            mul_mod(a, b, self.p)
        } else if let Some(t) = &self.tables {
            t.mul[(a * self.q + b) as usize] as u64
        } else {
            self.slow_mul(a, b)
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    /// The additive basis `{1, x, ..., x^{e-1}}` of GF(q) over GF(p), as scalars.
    pub fn additive_basis(&self) -> Vec<u64> {
        (0..self.ctx.degree()).map(|i| checked_pow(self.p, i).expect("fits")).collect()
    }
}

/// Bridge between GF(p^k) and its order-`q` subfield.
///
/// The fixed basis of the subfield is `{1, r, ..., r^{e-1}}`, where `r` is a
/// root (inside GF(p^k)) of the modulus of GF(q)'s own representation; the
/// coordinates of an element in that basis are exactly its GF(q) scalar.
#[derive(Debug, Clone)]
pub struct Subfield {
    scalars: ScalarField,
    basis: Vec<FieldElem>,
}

impl Subfield {
    pub fn new(ctx: &FieldCtx, q: u64) -> Result<Self, GfError> {
        let not_sub = GfError::NotASubfield { q, p: ctx.p, k: ctx.k };
        let (p, e) = arith::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        if p != ctx.p || ctx.k % e != 0 {
            return Err(not_sub);
        }
        let scalars = ScalarField::new(q)?;
        let small = scalars.ctx();
        let root = if e == 1 {
            ctx.constant((p - small.modulus()[0]) % p)
        } else {
            // gamma generates the subfield's multiplicative group; one of its
            // powers coprime to q - 1 is a root of the small modulus.
            let gamma = ctx.pow(ctx.generator(), (ctx.order - 1) / (q - 1));
            let eval = |r: &FieldElem| {
                small.modulus().iter().rev().fold(ctx.zero(), |acc, &c| ctx.add(&ctx.mul(&acc, r), &ctx.constant(c)))
            };
            let mut cur = gamma.clone();
            let mut found = None;
            for j in 1..q - 1 {
                if arith::gcd(j, q - 1) == 1 && eval(&cur).is_zero() {
                    found = Some(cur.clone());
                    break;
                }
                cur = ctx.mul(&cur, &gamma);
            }
            found.ok_or(not_sub)?
        };
        let mut basis = Vec::with_capacity(e as usize);
        let mut acc = ctx.one();
        for _ in 0..e {
            basis.push(acc.clone());
            acc = ctx.mul(&acc, &root);
        }
        Ok(Subfield { scalars, basis })
    }

    pub fn order(&self) -> u64 {
        self.scalars.order()
    }

    pub fn scalars(&self) -> &ScalarField {
        &self.scalars
    }

    /// GF(q) scalar of a subfield element; errors when `x^q != x`.
    pub fn project(&self, ctx: &FieldCtx, x: &FieldElem) -> Result<u64, GfError> {
        let q = self.order();
        if ctx.pow(x, q) != *x {
            return Err(GfError::NotInSubfield { q });
        }
        let p = ctx.p;
        let k = ctx.k as usize;
        let e = self.basis.len();
        // Solve sum_i a_i basis_i = x over GF(p): k equations, e unknowns.
        let mut rows: Vec<Vec<u64>> = (0..k)
            .map(|r| {
                let mut row: Vec<u64> = self.basis.iter().map(|b| b.coeffs[r]).collect();
                row.push(x.coeffs[r]);
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(e);
        for col in 0..e {
            let Some(found) = (pivot_row..k).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, found);
            let inv = arith::pow_mod(rows[pivot_row][col], p - 2, p);
            for v in rows[pivot_row].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            for r in 0..k {
                if r != pivot_row && rows[r][col] != 0 {
                    let factor = rows[r][col];
                    for c in 0..=e {
                        let sub = mul_mod(factor, rows[pivot_row][c], p);
                        rows[r][c] = add_mod(rows[r][c], p - sub, p);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|row| row[e] != 0) {
            return Err(GfError::NotInSubfield { q });
        }
        let mut coords = vec![0u64; e];
        for (r, &col) in pivots.iter().enumerate() {
            coords[col] = rows[r][e];
        }
        Ok(coords.iter().rev().fold(0u64, |acc, &c| acc * p + c))
    }

    /// Inverse of [`Subfield::project`].
    pub fn embed(&self, ctx: &FieldCtx, a: u64) -> FieldElem {
        let p = ctx.p;
        let mut rest = a;
        let mut out = ctx.zero();
        for b in &self.basis {
            let c = rest % p;
            rest /= p;
            if c != 0 {
                out = ctx.add(&out, &ctx.scale(b, c));
            }
        }
        out
    }
}

/// One-shot projection; builds the subfield bridge on every call.
pub fn subfield_project(ctx: &FieldCtx, x: &FieldElem, q: u64) -> Result<u64, GfError> {
    Subfield::new(ctx, q)?.project(ctx, x)
}

/// Dense polynomial over GF(q), lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize, field: &ScalarField) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = field.neg(1);
        coeffs[n] = 1;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly, field: &ScalarField) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new((0..len).map(|i| field.add(get(&self.coeffs, i), get(&other.coeffs, i))).collect())
    }

    pub fn sub(&self, other: &Poly, field: &ScalarField) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new((0..len).map(|i| field.sub(get(&self.coeffs, i), get(&other.coeffs, i))).collect())
    }

    pub fn scale(&self, c: u64, field: &ScalarField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, field: &ScalarField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = field.add(out[i + j], field.mul(a, b));
                }
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Poly, field: &ScalarField) -> Result<(Poly, Poly), GfError> {
        let dd = divisor.degree().ok_or(GfError::DivisionByZero)?;
        let lead_inv = field.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let f = field.mul(c, lead_inv);
            quot[top - dd] = f;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = field.sub(rem[idx], field.mul(f, dj));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, field: &ScalarField) -> Result<Poly, GfError> {
        Ok(self.div_rem(divisor, field)?.1)
    }

    pub fn monic(&self, field: &ScalarField) -> Poly {
        match field.inv(self.leading()) {
            Some(inv) => self.scale(inv, field),
            None => Poly::zero(),
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, field: &ScalarField) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, field).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// `x^deg * f(1/x)`; for `f(0) != 0` its roots are the inverses of `f`'s.
    pub fn reciprocal(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, field: &ScalarField) -> Result<Poly, GfError> {
        let mut acc = Poly::one().rem(modulus, field)?;
        let mut base = self.rem(modulus, field)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field).rem(modulus, field)?;
            }
            base = base.mul(&base, field).rem(modulus, field)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Evaluates at a point of the extension field the subfield lives in.
    pub fn eval_ext(&self, ctx: &FieldCtx, sub: &Subfield, x: &FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(ctx.zero(), |acc, &c| ctx.add(&ctx.mul(&acc, x), &sub.embed(ctx, c)))
    }

    pub fn eval(&self, a: u64, field: &ScalarField) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, a), c))
    }
}

/// `m(x) = prod_{j in coset} (x - beta^j)`, re-expressed over GF(q).
///
/// `beta_power` is `beta^i` and `coset` the q-cyclotomic coset of `i`. The
/// conjugates are produced by repeated q-th powering, which must return to
/// `beta_power` after exactly `|coset|` steps.
pub fn minimal_polynomial(
    ctx: &FieldCtx,
    sub: &Subfield,
    beta_power: &FieldElem,
    coset: &[u64],
) -> Result<Poly, GfError> {
    let q = sub.order();
    let size = coset.len();
    let mut roots = Vec::with_capacity(size);
    let mut cur = beta_power.clone();
    for step in 0..size {
        if step > 0 && cur == *beta_power {
            return Err(GfError::WrongCosetSize { expected: size });
        }
        roots.push(cur.clone());
        cur = ctx.pow(&cur, q);
    }
    if cur != *beta_power {
        return Err(GfError::WrongCosetSize { expected: size });
    }
    // Product in GF(p^k)[x], lowest degree first.
    let mut prod = vec![ctx.one()];
    for r in &roots {
        let neg_r = ctx.neg(r);
        let mut next = vec![ctx.zero(); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i + 1] = ctx.add(&next[i + 1], c);
            next[i] = ctx.add(&next[i], &ctx.mul(c, &neg_r));
        }
        prod = next;
    }
    let coeffs = prod.iter().map(|c| sub.project(ctx, c)).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// Row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    q: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl Matrix {
    pub fn new(q: u64, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { q, cols, rows }
    }

    pub fn field_order(&self) -> u64 {
        self.q
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// Reduced row echelon form plus its pivot columns.
    pub fn rref(&self, field: &ScalarField) -> (Vec<Vec<u64>>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, found);
            let inv = field.inv(rows[r][col]).expect("nonzero pivot");
            for v in rows[r].iter_mut() {
                *v = field.mul(*v, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let f = rows[i][col];
                    for c in 0..self.cols {
                        let s = field.mul(f, rows[r][c]);
                        rows[i][c] = field.sub(rows[i][c], s);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    pub fn rank(&self, field: &ScalarField) -> usize {
        self.rref(field).1.len()
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[u64], field: &ScalarField) -> bool {
        let (basis, pivots) = self.rref(field);
        let mut rest = v.to_vec();
        for (row, &col) in basis.iter().zip(&pivots) {
            let f = rest[col];
            if f != 0 {
                for c in 0..self.cols {
                    rest[c] = field.sub(rest[c], field.mul(f, row[c]));
                }
            }
        }
        rest.iter().all(|&x| x == 0)
    }
}
