//! Exact arithmetic in F_{p^n} with a fixed polynomial basis.
//!
//! A [`Field`] is a cheap, shareable handle around an immutable context.
//! Elements are stored packed as [`Fe`]: the coordinate vector
//! `(c_0, .., c_{n-1})` of `c_0 + c_1 t + .. + c_{n-1} t^{n-1}` read as the
//! base-p integer `c_0 + c_1 p + ..`. Fields of order up to [`TABLE_LIMIT`]
//! multiply through discrete-log tables; larger ones fall back to schoolbook
//! multiplication and reduction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields with at most this many elements get log/antilog/Zech tables.
pub const TABLE_LIMIT: u64 = 1 << 16;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Dense polynomials over F_p, coefficients ascending. Only what the
/// irreducibility test needs.
mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    r[idx] = (r[idx] + p - c * mi % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Ben-Or distinct-degree test: `f` of degree n is irreducible iff
/// gcd(x^{p^i} - x, f) = 1 for every 1 <= i <= n/2.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let n = modulus.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = poly::pow_mod(&h, p, modulus, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        poly::trim(&mut diff);
        let g = poly::gcd(modulus, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Parameters of F_{p^n}: the prime, the degree and a monic irreducible
/// modulus given by its coefficients in ascending degree (the last entry
/// is the leading 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec")]
pub struct FieldSpec {
    p: u64,
    n: u32,
    modulus: Vec<u64>,
}

#[derive(Deserialize)]
struct RawFieldSpec {
    p: u64,
    n: u32,
    modulus: Vec<u64>,
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = Error;

    fn try_from(raw: RawFieldSpec) -> Result<Self> {
        FieldSpec::new(raw.p, raw.n, Some(raw.modulus))
    }
}

impl FieldSpec {
    /// Validates `p`, `n` and the modulus. With no modulus, picks the lowest
    /// monic irreducible of degree n, ordering candidates by their
    /// non-leading coefficients read from degree n-1 down to degree 0.
    pub fn new(p: u64, n: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidDegree(n));
        }
        if p.checked_pow(n).is_none_or(|q| q > (1u64 << 62)) {
            return Err(Error::FieldTooLarge { p, n });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(Error::ModulusDegree {
                        expected: n,
                        got: m.len(),
                    });
                }
                if let Some(&bad) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::ModulusDigit(bad as u32));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Reducible(p));
                }
                m
            }
            None => Self::default_modulus(p, n),
        };
        Ok(FieldSpec { p, n, modulus })
    }

    fn default_modulus(p: u64, n: u32) -> Vec<u64> {
        let count = p.pow(n);
        for v in 0..count {
            let mut m = vec![0u64; n as usize + 1];
            let mut rest = v;
            for c in m.iter_mut().take(n as usize) {
                *c = rest % p;
                rest /= p;
            }
            m[n as usize] = 1;
            if is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n)
    }
}

/// A packed field element. Only meaningful together with its [`Field`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed index in `[0, p^n)`.
    pub fn index(self) -> u64 {
        self.0
    }
}

const NO_LOG: u32 = u32::MAX;

struct Tables {
    /// exp[i] = g^i for i in [0, 2(Q-1)).
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), or NO_LOG when 1 + g^d = 0.
    zech: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    order: u64,
    tables: Option<Tables>,
}

/// Shareable handle to F_{p^n}. Cloning is an `Arc` bump.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{}{:?}",
            self.p(),
            self.n(),
            self.inner.spec.modulus
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(p: u64, n: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        Ok(Self::from_spec(FieldSpec::new(p, n, modulus)?))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        let order = spec.order();
        let mut inner = Inner {
            spec,
            order,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Field {
            inner: Arc::new(inner),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn p(&self) -> u64 {
        self.inner.spec.p
    }

    pub fn n(&self) -> u32 {
        self.inner.spec.n
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p() as i64) as u64)
    }

    pub fn from_index(&self, idx: u64) -> Result<Fe> {
        if idx < self.order() {
            Ok(Fe(idx))
        } else {
            Err(Error::BadCoordinates)
        }
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Fe> {
        let p = self.p();
        if coords.len() != self.n() as usize || coords.iter().any(|&c| c >= p) {
            return Err(Error::BadCoordinates);
        }
        Ok(Fe(coords.iter().rev().fold(0u64, |acc, &c| acc * p + c)))
    }

    pub fn coords(&self, a: Fe) -> Vec<u64> {
        let p = self.p();
        let mut v = a.0;
        (0..self.n())
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    /// The element `t` (class of the variable); equals 0 in a prime field
    /// whose modulus is `x`.
    pub fn gen_t(&self) -> Fe {
        if self.n() == 1 {
            self.from_int(-(self.inner.spec.modulus[0] as i64))
        } else {
            Fe(self.p())
        }
    }

    pub fn element(&self, a: Fe) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order()).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> {
        (1..self.order()).map(Fe)
    }

    /// A primitive element, when the field is small enough to carry tables.
    pub fn primitive_element(&self) -> Option<Fe> {
        self.inner.tables.as_ref().map(|t| Fe(t.exp[1] as u64))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p();
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.n() == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        if let Some(t) = &self.inner.tables {
            if a.0 == 0 {
                return b;
            }
            if b.0 == 0 {
                return a;
            }
            let qm1 = self.order() - 1;
            let la = t.log[a.0 as usize] as u64;
            let lb = t.log[b.0 as usize] as u64;
            let d = (lb + qm1 - la) % qm1;
            let z = t.zech[d as usize];
            if z == NO_LOG {
                return Fe::ZERO;
            }
            return Fe(t.exp[(la + z as u64) as usize] as u64);
        }
        self.add_digitwise(a, b)
    }

    fn add_digitwise(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n() {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.p();
        if p == 2 || a.0 == 0 {
            return a;
        }
        if self.n() == 1 {
            return Fe(p - a.0);
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n() {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.inner.tables {
            let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Fe(t.exp[s] as u64);
        }
        self.mul_schoolbook(a, b)
    }

    fn mul_schoolbook(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p();
        let n = self.n() as usize;
        if n == 1 {
            return Fe(((a.0 as u128 * b.0 as u128) % p as u128) as u64);
        }
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let m = &self.inner.spec.modulus;
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &mi) in m.iter().enumerate().take(n) {
                let idx = d - n + i;
                prod[idx] = (prod[idx] + p - c * mi % p) % p;
            }
            prod[d] = 0;
        }
        Fe(prod[..n].iter().rev().fold(0u64, |acc, &c| acc * p + c))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u128) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let qm1 = (self.order() - 1) as u128;
        let e = e % qm1;
        if let Some(t) = &self.inner.tables {
            let l = (t.log[a.0 as usize] as u128 * e) % qm1;
            return Fe(t.exp[l as usize] as u64);
        }
        let mut result = Fe::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.inner.tables {
            let qm1 = self.order() - 1;
            let l = (qm1 - t.log[a.0 as usize] as u64) % qm1;
            return Ok(Fe(t.exp[l as usize] as u64));
        }
        Ok(self.pow(a, (self.order() - 2) as u128))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^i)`; the i-th power of the absolute Frobenius.
    pub fn frobenius(&self, a: Fe, i: u64) -> Fe {
        let i = i % self.n() as u64;
        if i == 0 {
            return a;
        }
        self.pow(a, (self.p() as u128).pow(i as u32))
    }

    /// Membership in the subfield F_{p^m}: fixed by the m-th Frobenius power.
    pub fn in_subfield(&self, a: Fe, m: u32) -> bool {
        self.frobenius(a, m as u64) == a
    }
}

fn build_tables(inner: &Inner) -> Tables {
    // Construct a temporary table-free handle for the slow arithmetic.
    let slow = Field {
        inner: Arc::new(Inner {
            spec: inner.spec.clone(),
            order: inner.order,
            tables: None,
        }),
    };
    let q = inner.order;
    let qm1 = q - 1;
    let factors = prime_factors(qm1.max(1));
    let slow_pow = |a: Fe, mut e: u64| {
        let mut r = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = slow.mul_schoolbook(r, b);
            }
            b = slow.mul_schoolbook(b, b);
            e >>= 1;
        }
        r
    };
    let g = (1..q)
        .map(Fe)
        .find(|&g| qm1 == 1 || factors.iter().all(|&r| slow_pow(g, qm1 / r) != Fe::ONE))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * qm1 as usize];
    let mut log = vec![NO_LOG; q as usize];
    let mut cur = Fe::ONE;
    for i in 0..qm1 as usize {
        exp[i] = cur.0 as u32;
        exp[i + qm1 as usize] = cur.0 as u32;
        log[cur.0 as usize] = i as u32;
        cur = slow.mul_schoolbook(cur, g);
    }
    let mut zech = vec![NO_LOG; qm1 as usize];
    for (d, z) in zech.iter_mut().enumerate() {
        let s = slow.add_digitwise(Fe::ONE, Fe(exp[d] as u64));
        if s.0 != 0 {
            *z = log[s.0 as usize];
        }
    }
    Tables { exp, log, zech }
}

/// An element bundled with its field; the checked, self-describing API.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl FieldElement {
    pub fn from_coords(field: &Field, coords: &[u64]) -> Result<Self> {
        Ok(field.element(field.from_coords(coords)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u128) -> Self {
        self.field.element(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, i: u64) -> Self {
        self.field.element(self.field.frobenius(self.value, i))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}
