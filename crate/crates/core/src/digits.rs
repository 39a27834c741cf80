//! Base-p digit combinatorics: expansions, Lucas binomials, p-cores and
//! defects, the p-digital well-ordering, the cyclic classes `O_q(c)`,
//! `mu_q`, q-critical integers and p-admissible quadruples.
//!
//! Integers are `u64`; every routine here is meant for desk-scale inputs.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;

/// A base-p expansion, most significant digit first. Leading zeros are
/// allowed; the empty string denotes 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitString {
    p: u64,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn new(p: u64, digits: Vec<u64>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::BadDigit { digit: d, p });
        }
        Ok(DigitString { p, digits })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Minimal iff empty or the first digit is nonzero.
    pub fn is_minimal(&self) -> bool {
        self.digits.first().is_none_or(|&d| d != 0)
    }

    /// Cyclic left rotation by one place.
    pub fn rotate_left(&self) -> Self {
        let mut digits = self.digits.clone();
        if !digits.is_empty() {
            digits.rotate_left(1);
        }
        DigitString { p: self.p, digits }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            write!(f, "_{}", self.p)
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]_{}", parts.join(","), self.p)
        }
    }
}

pub fn to_digits(n: u64, p: u64, width: Option<usize>) -> Result<DigitString> {
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push(rest % p);
        rest /= p;
    }
    if let Some(w) = width {
        if w < digits.len() {
            return Err(Error::WidthTooSmall {
                width: w,
                needed: digits.len(),
            });
        }
        digits.resize(w, 0);
    }
    digits.reverse();
    Ok(DigitString { p, digits })
}

pub fn from_digits(d: &DigitString) -> Result<u64> {
    d.digits.iter().try_fold(0u64, |acc, &x| {
        acc.checked_mul(d.p)
            .and_then(|v| v.checked_add(x))
            .ok_or(Error::Overflow)
    })
}

/// `binomial(m, k) mod p` by Lucas' theorem; zero when `k > m`.
pub fn lucas_binom(m: u64, k: u64, p: u64) -> u64 {
    if k > m {
        return 0;
    }
    let (mut m, mut k) = (m, k);
    let mut acc = 1u64;
    while k > 0 {
        let (a, b) = (m % p, k % p);
        if b > a {
            return 0;
        }
        acc = acc * small_binom_mod(a, b, p) % p;
        m /= p;
        k /= p;
    }
    acc
}

fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    // a, b < p, so the multiplicative formula has invertible denominators.
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn ord_p(n: u64, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// `n / p^{ord_p n}`.
pub fn tau_p(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut n = n;
    while n % p == 0 {
        n /= p;
    }
    Ok(n)
}

/// The p-core: strip trailing zero digits, then trailing (p-1) digits.
pub fn p_core(n: u64, p: u64) -> Result<u64> {
    let t = tau_p(n, p)?;
    Ok(tau_p(t + 1, p)? - 1)
}

/// Length of the minimal expansion of the p-core.
pub fn p_defect(n: u64, p: u64) -> Result<u32> {
    let mut k = p_core(n, p)?;
    let mut len = 0;
    while k > 0 {
        k /= p;
        len += 1;
    }
    Ok(len)
}

/// The p-digital well-ordering: compare p-cores, then `n / p^{ord_p n}`,
/// then the integers themselves.
pub fn digital_cmp(m: u64, n: u64, p: u64) -> Result<Ordering> {
    let key = |x: u64| -> Result<(u64, u64, u64)> { Ok((p_core(x, p)?, tau_p(x, p)?, x)) };
    Ok(key(m)?.cmp(&key(n)?))
}

/// `q = p^lambda`, always constructed from the prime and the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    p: u64,
    lambda: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, lambda: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if lambda == 0 {
            return Err(Error::InvalidPrimePower(format!(
                "lambda must be >= 1 (p = {p})"
            )));
        }
        let q = p
            .checked_pow(lambda)
            .filter(|&q| q <= 1 << 40)
            .ok_or_else(|| Error::InvalidPrimePower(format!("{p}^{lambda} is too large")))?;
        Ok(PrimePower { p, lambda, q })
    }

    /// Recovers `(p, lambda)` from `q`, rejecting non prime powers.
    pub fn from_q(p: u64, q: u64) -> Result<Self> {
        let mut lambda = 0;
        let mut v = q;
        while v > 1 && v % p == 0 {
            v /= p;
            lambda += 1;
        }
        if v != 1 || lambda == 0 {
            return Err(Error::InvalidPrimePower(format!(
                "{q} is not a power of {p}"
            )));
        }
        Self::new(p, lambda)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Residue of `c` modulo `q - 1` (always 0 when q = 2).
    fn residue(&self, c: u64) -> u64 {
        c % (self.q - 1)
    }

    /// Residues `p^i c mod (q-1)` for `0 <= i < lambda`.
    pub fn orbit(&self, c: u64) -> Vec<u64> {
        let m = self.q - 1;
        let mut r = self.residue(c);
        (0..self.lambda)
            .map(|_| {
                let cur = r;
                r = ((r as u128 * self.p as u128) % m as u128) as u64;
                cur
            })
            .collect()
    }

    /// Canonical label of the cyclic class of `c`: the least residue in its orbit.
    pub fn orbit_label(&self, c: u64) -> u64 {
        self.orbit(c).into_iter().min().unwrap_or(0)
    }
}

/// `<c>_q`: the least positive integer congruent to `c` modulo `q - 1`.
/// Multiples of `q - 1` map to `q - 1`.
pub fn bracket_q(c: u64, pq: PrimePower) -> u64 {
    let m = pq.q - 1;
    match c % m {
        0 => m,
        r => r,
    }
}

/// Members of `O_q(c)` not exceeding `bound`, ascending.
pub fn o_q_members(c: u64, pq: PrimePower, bound: u64) -> Vec<u64> {
    let classes = pq.orbit(c);
    (1..=bound)
        .filter(|&n| n % pq.p != 0 && classes.contains(&pq.residue(n)))
        .collect()
}

pub fn in_o_q(n: u64, c: u64, pq: PrimePower) -> bool {
    n > 0 && n % pq.p != 0 && pq.orbit(c).contains(&pq.residue(n))
}

/// The least p-core over the cyclic class: `min_i kappa_p(<p^i c>_q)`.
pub fn min_class_core(c: u64, pq: PrimePower) -> u64 {
    pq.orbit(c)
        .into_iter()
        .map(|r| p_core(bracket_q(r, pq), pq.p).expect("brackets are positive"))
        .min()
        .expect("lambda >= 1")
}

/// The p-digitally least element of `O_q(c)`.
///
/// The least core over `O_q(c)` equals the least core over the `lambda`
/// rotations `<p^i c>_q`; the minimizer is then `(core + 1) p^g - 1` for the
/// least `g` landing in the class. Only `g <= lambda` needs checking because
/// the residue of `(core + 1) p^g - 1` is periodic in `g` with period lambda.
pub fn mu_q(c: u64, pq: PrimePower) -> u64 {
    let core = min_class_core(c, pq);
    let classes = pq.orbit(c);
    let mut pg = 1u128;
    for _ in 0..=pq.lambda {
        let n = (core as u128 + 1) * pg - 1;
        if n > 0 && classes.contains(&((n % (pq.q - 1) as u128) as u64)) {
            return n as u64;
        }
        pg *= pq.p as u128;
    }
    panic!(
        "no element of O_q({c}) with the minimal class core (p = {}, q = {})",
        pq.p, pq.q
    )
}

/// Oracle for [`mu_q`]: scans `O_q(c) ∩ [1, bound]` directly.
pub fn mu_q_bruteforce(c: u64, pq: PrimePower, bound: u64) -> Option<u64> {
    o_q_members(c, pq, bound)
        .into_iter()
        .min_by(|&a, &b| digital_cmp(a, b, pq.p).expect("members are positive"))
}

/// `C_q^0` by direct scan of its definition: `c in (0, q)`, coprime to p,
/// with `tau_p(c + 1)` least among `tau_p(n + 1)` for `n` in
/// `O_q(c) ∩ (0, q)`.
pub fn critical_base_set(pq: PrimePower) -> Vec<u64> {
    let q = pq.q;
    let p = pq.p;
    let label = |n: u64| pq.orbit_label(n);
    let mut best: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    for n in (1..q).filter(|n| n % p != 0) {
        let t = tau_p(n + 1, p).unwrap();
        best.entry(label(n))
            .and_modify(|b| *b = (*b).min(t))
            .or_insert(t);
    }
    (1..q)
        .filter(|&c| c % p != 0 && tau_p(c + 1, p).unwrap() == best[&label(c)])
        .collect()
}

/// Membership in `C_q`: `(k, p) = 1` and `kappa_p(k) = kappa_p(mu_q(k))`.
pub fn is_critical(k: u64, pq: PrimePower) -> bool {
    k > 0 && k % pq.p != 0 && p_core(k, pq.p).unwrap() == p_core(mu_q(k, pq), pq.p).unwrap()
}

/// Writes `k = q^i (c + 1) - 1` with `c < q` by stripping trailing blocks of
/// `lambda` digits equal to `p - 1`. Returns `(c, i)`; whether `c` lies in
/// `C_q^0` is for the caller to decide.
pub fn strip_q_blocks(k: u64, pq: PrimePower) -> (u64, u32) {
    let mut c = k;
    let mut i = 0;
    while c >= pq.q && (c + 1) % pq.q == 0 {
        c = (c + 1) / pq.q - 1;
        i += 1;
    }
    (c, i)
}

/// One rotation of the `lambda`-digit string of `<c>_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecklaceRow {
    pub shift: u32,
    pub value: u64,
    pub digits: String,
    /// `(n + 1) / p^{ord_p(n + 1)} - 1` for rows coprime to p.
    pub core: Option<u64>,
    pub core_digits: Option<String>,
}

/// The table of cyclic rotations of `<c>_q` used to decide q-criticality by
/// hand. Rows ending in a zero digit carry no core.
pub fn necklace_table(c: u64, pq: PrimePower) -> Vec<NecklaceRow> {
    let p = pq.p;
    let start = bracket_q(c, pq);
    let mut ds = to_digits(start, p, Some(pq.lambda as usize)).expect("bracket < q");
    let mut rows = Vec::with_capacity(pq.lambda as usize);
    for shift in 0..pq.lambda {
        let value = from_digits(&ds).unwrap();
        let core = (value % p != 0).then(|| tau_p(value + 1, p).unwrap() - 1);
        rows.push(NecklaceRow {
            shift,
            value,
            digits: ds.digits.iter().map(|d| digit_char(*d)).collect(),
            core,
            core_digits: core.map(|k| {
                to_digits(k, p, None)
                    .unwrap()
                    .digits
                    .iter()
                    .map(|d| digit_char(*d))
                    .collect()
            }),
        });
        ds = ds.rotate_left();
    }
    rows
}

fn digit_char(d: u64) -> char {
    char::from_digit(d as u32, 36).unwrap_or('?')
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissibleQuadruple {
    pub j: u64,
    pub k: u64,
    pub ell: u32,
    pub m: u64,
}

impl AdmissibleQuadruple {
    pub fn new(j: u64, k: u64, ell: u32, m: u64, p: u64) -> Result<Self> {
        if is_admissible(j, k, ell, m, p) {
            Ok(AdmissibleQuadruple { j, k, ell, m })
        } else {
            Err(Error::NotAdmissible)
        }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.j, self.k, self.ell as u64, self.m]
    }
}

/// `(m, p) = 1`, `m = k + j (p^ell - 1)` and `binomial(k - 1, j) != 0 mod p`.
pub fn is_admissible(j: u64, k: u64, ell: u32, m: u64, p: u64) -> bool {
    if j == 0 || k == 0 || ell == 0 || m == 0 || m % p == 0 {
        return false;
    }
    let Some(step) = p.checked_pow(ell).map(|v| v - 1) else {
        return false;
    };
    match j.checked_mul(step).and_then(|v| v.checked_add(k)) {
        Some(total) if total == m => lucas_binom(k - 1, j, p) != 0,
        _ => false,
    }
}

/// Admissible quadruples with the given `m`, ascending in `(ell, j)`.
pub fn admissible_for_m(m: u64, p: u64, ell_bound: u32) -> Vec<AdmissibleQuadruple> {
    let mut out = Vec::new();
    if m == 0 || m % p == 0 {
        return out;
    }
    for ell in 1..=ell_bound {
        let Some(step) = p.checked_pow(ell).map(|v| v - 1) else {
            break;
        };
        if step >= m {
            break;
        }
        let mut j = 1;
        while j * step < m {
            let k = m - j * step;
            if lucas_binom(k - 1, j, p) != 0 {
                out.push(AdmissibleQuadruple { j, k, ell, m });
            }
            j += 1;
        }
    }
    out
}

/// All admissible quadruples with `m <= m_bound` and `ell <= ell_bound`,
/// ascending in `(m, ell, j)`.
pub fn admissible_enumerate(p: u64, m_bound: u64, ell_bound: u32) -> Vec<AdmissibleQuadruple> {
    (1..=m_bound)
        .flat_map(|m| admissible_for_m(m, p, ell_bound))
        .collect()
}

/// Largest `ell` with `p^ell - 1 < m_bound`; larger ell admit no quadruple.
pub fn max_useful_ell(p: u64, m_bound: u64) -> u32 {
    let mut ell = 0;
    let mut pe = 1u64;
    while let Some(next) = pe.checked_mul(p) {
        if next > m_bound {
            break;
        }
        pe = next;
        ell += 1;
    }
    ell.max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitGamesWitness {
    pub e: u32,
    pub f: u32,
    pub g: u32,
    pub r: u32,
}

/// Why a quadruple failed to produce a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DigitGamesFailure {
    NotAdmissible,
    /// Zero or several `r` satisfied the congruence conditions.
    RCount {
        candidates: Vec<u32>,
    },
    /// `f + g < e`.
    OrderBound {
        e: u32,
        f: u32,
        g: u32,
    },
    /// `kappa_p(m) < kappa_p(k)`.
    CoreBound {
        core_m: u64,
        core_k: u64,
    },
}

/// `e = ord_p(m + 1)`, `f = ord_p k`, `g = ord_p(k / p^f + 1)` and the unique
/// `r` with `0 <= r <= e + ell - 1`, `ell | r` and
/// `j ≡ (p^r - 1)/(p^ell - 1) mod p^e`; also checks `f + g >= e` and
/// `kappa_p(m) >= kappa_p(k)`.
pub fn digit_games_witness(
    quad: &AdmissibleQuadruple,
    p: u64,
) -> std::result::Result<DigitGamesWitness, DigitGamesFailure> {
    let AdmissibleQuadruple { j, k, ell, m } = *quad;
    if !is_admissible(j, k, ell, m, p) {
        return Err(DigitGamesFailure::NotAdmissible);
    }
    let e = ord_p(m + 1, p).unwrap();
    let f = ord_p(k, p).unwrap();
    let g = ord_p(k / p.pow(f) + 1, p).unwrap();
    let pe = (p as u128).pow(e);
    let step = (p as u128).pow(ell) - 1;
    let target = j as u128 % pe;
    let candidates: Vec<u32> = (0..=e + ell - 1)
        .step_by(ell as usize)
        .filter(|&r| ((p as u128).pow(r) - 1) / step % pe == target)
        .collect();
    if candidates.len() != 1 {
        return Err(DigitGamesFailure::RCount { candidates });
    }
    if f + g < e {
        return Err(DigitGamesFailure::OrderBound { e, f, g });
    }
    let core_m = p_core(m, p).unwrap();
    let core_k = p_core(k, p).unwrap();
    if core_m < core_k {
        return Err(DigitGamesFailure::CoreBound { core_m, core_k });
    }
    Ok(DigitGamesWitness {
        e,
        f,
        g,
        r: candidates[0],
    })
}
