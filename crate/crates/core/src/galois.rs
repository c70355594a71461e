//! Finite fields GF(p^m).
//!
//! Elements are encoded canonically as integers in `[0, q)`. For `m > 1` the
//! base-`p` digits of the encoding are the coefficients of the residue
//! polynomial, digit `j` being the coefficient of `x^j`. Fields with
//! `q <= 2^16` carry log/antilog tables so that multiplication and inversion
//! are table lookups; larger fields multiply polynomials directly.
//!
//! ```
//! use loceret_core::galois::{Field, FieldSpec, Felt};
//!
//! let f13 = Field::new(FieldSpec::prime(13)).unwrap();
//! assert_eq!(f13.inv(Felt(3)).unwrap(), Felt(9));
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default ceiling on the field order.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u32>),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field order {p}^{m} exceeds the cap of {cap}")]
    FieldTooLarge { p: u32, m: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not a field element (q = {q})")]
    OutOfRange { value: i64, q: u32 },
}

/// Parameters of a field: characteristic, degree, and the reduction
/// polynomial for proper extensions (coefficients lowest degree first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one_u32")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one_u32() -> u32 {
    1
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, m: 1, modulus: None }
    }

    pub fn extension(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Self {
        FieldSpec { p, m, modulus }
    }
}

/// A field element in canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A concrete finite field. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        Self::with_max_order(spec, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(spec: FieldSpec, cap: u64) -> Result<Self, FieldError> {
        let FieldSpec { p, m, modulus } = spec;
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= cap && q <= u32::MAX as u64)
            .ok_or(FieldError::FieldTooLarge { p, m, cap })? as u32;

        let modulus = match (m, modulus) {
            (1, None) => vec![0, 1],
            (1, Some(_)) => {
                return Err(FieldError::BadModulus("prime fields take no modulus".into()));
            }
            (_, Some(coeffs)) => {
                if coeffs.len() != m as usize + 1 {
                    return Err(FieldError::BadModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(format!("coefficient not below {p}")));
                }
                if coeffs[m as usize] != 1 {
                    return Err(FieldError::BadModulus("modulus must be monic".into()));
                }
                if !is_irreducible(p, &coeffs) {
                    return Err(FieldError::NotIrreducible(coeffs));
                }
                coeffs
            }
            (_, None) => smallest_irreducible(p, m),
        };

        let mut field = Field { p, m, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Reduction polynomial, lowest degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            m: self.m,
            modulus: (self.m > 1).then(|| self.modulus.clone()),
        }
    }

    #[inline]
    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    #[inline]
    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    /// Checked conversion from a canonical encoding.
    pub fn elem(&self, value: u32) -> Result<Felt, FieldError> {
        if value < self.q {
            Ok(Felt(value))
        } else {
            Err(FieldError::OutOfRange { value: value as i64, q: self.q })
        }
    }

    /// Accepts signed input: a negative value `-v` denotes the additive
    /// inverse of `v`. Prime fields reduce any integer modulo `p`.
    pub fn from_signed(&self, value: i64) -> Result<Felt, FieldError> {
        if self.m == 1 {
            return Ok(Felt(value.rem_euclid(self.p as i64) as u32));
        }
        let mag = value.unsigned_abs();
        if mag >= self.q as u64 {
            return Err(FieldError::OutOfRange { value, q: self.q });
        }
        let e = Felt(mag as u32);
        Ok(if value < 0 { self.neg(e) } else { e })
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.q).map(Felt)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        if self.m == 1 {
            let s = a.0 + b.0;
            Felt(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Felt(a.0 ^ b.0)
        } else {
            self.digitwise(a, b, |x, y| (x + y) % self.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        if a.0 == 0 || self.p == 2 {
            a
        } else if self.m == 1 {
            Felt(self.p - a.0)
        } else {
            self.digitwise(a, Felt::ZERO, |x, _| (self.p - x) % self.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        if self.m == 1 {
            Felt(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
        } else if self.p == 2 {
            Felt(a.0 ^ b.0)
        } else {
            self.digitwise(a, b, |x, y| (x + self.p - y) % self.p)
        }
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        if a.0 == 0 || b.0 == 0 {
            return Felt::ZERO;
        }
        match &self.tables {
            Some(t) => Felt(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_direct(a, b),
        }
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Felt(t.exp[if l == 0 { 0 } else { (self.q - 1 - l) as usize }])
            }
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply. `pow(a, 0) = 1`, including `a = 0`.
    pub fn pow(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inner product of two equal-length vectors.
    pub fn dot(&self, a: &[Felt], b: &[Felt]) -> Felt {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(Felt::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    fn digitwise(&self, a: Felt, b: Felt, op: impl Fn(u32, u32) -> u32) -> Felt {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.m {
            out += op(x % self.p, y % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        Felt(out)
    }

    fn digits(&self, a: Felt) -> Vec<u32> {
        let mut v = a.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn encode_digits(&self, digits: &[u32]) -> Felt {
        Felt(digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d))
    }

    fn mul_direct(&self, a: Felt, b: Felt) -> Felt {
        if self.m == 1 {
            return Felt(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let p = self.p as u64;
        let m = self.m as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^m = -(modulus minus leading term)
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (j, &mc) in self.modulus[..m].iter().enumerate() {
                let idx = deg - m + j;
                prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&d| d as u32).collect();
        self.encode_digits(&digits)
    }

    fn pow_direct(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .map(Felt)
            .find(|&g| factors.iter().all(|&f| self.pow_direct(g, order / f) != Felt::ONE))
            .expect("multiplicative group of a finite field is cyclic");
        let n = self.q as usize - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.q as usize];
        let mut x = Felt::ONE;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_direct(x, generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 0 {
            exp[0] = 1;
        }
        Tables { exp, log }
    }
}

/// A polynomial over a field, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Felt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Felt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Felt) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^deg`.
    pub fn monomial(c: Felt, deg: usize) -> Self {
        let mut coeffs = vec![Felt::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &Field, x: Felt) -> Felt {
        self.coeffs
            .iter()
            .rev()
            .fold(Felt::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn add(&self, field: &Field, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(Felt::ZERO);
        Poly::new((0..len).map(|i| field.add(get(self, i), get(other, i))).collect())
    }

    pub fn scale(&self, field: &Field, c: Felt) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Felt::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, field: &Field, e: usize) -> Poly {
        (0..e).fold(Poly::constant(Felt::ONE), |acc, _| acc.mul(field, self))
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `b`, coefficients mod `p`.
fn poly_rem_mod_p(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - lead) * bc as u64 % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive check: no monic polynomial of degree `1..=deg/2` divides `f`.
/// `f` must be monic, lowest degree first.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for enc in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = enc;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem_mod_p(p, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `m` over GF(p) whose lower coefficients,
/// read as a base-`p` integer (digit `j` for `x^j`), are smallest.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for enc in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut v = enc;
        for _ in 0..m {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
