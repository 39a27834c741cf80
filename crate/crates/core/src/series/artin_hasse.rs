//! The Artin-Hasse exponential `exp(sum_i X^{p^i} / p^i)` and its reduction
//! modulo p.
//!
//! The char-p equation `X E' = E * sum X^{p^i}` leaves the coefficients of
//! `X^{pm}` undetermined, so the series is computed over the rationals:
//! `n e_n = sum_{p^i <= n} e_{n - p^i}`, which is the coefficient form of
//! `X E' = E * X (sum X^{p^i}/p^i)'`. Each coefficient must come out
//! p-integral before it is reduced.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{TruncSeries, UnitSeries};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Rational coefficients `e_0 .. e_N`.
pub fn artin_hasse_rational(p: u64, prec: usize) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = Vec::with_capacity(prec + 1);
    e.push(BigRational::one());
    let powers: Vec<usize> = std::iter::successors(Some(1usize), |&x| x.checked_mul(p as usize))
        .take_while(|&x| x <= prec)
        .collect();
    for n in 1..=prec {
        let mut acc = BigRational::zero();
        for &pi in powers.iter().take_while(|&&pi| pi <= n) {
            acc += &e[n - pi];
        }
        e.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    e
}

fn reduce_mod_p(x: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::Internal(format!(
            "Artin-Hasse coefficient {x} is not {p}-integral"
        )));
    }
    let num = x.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    let den_inv = (0..p).find(|&d| d * den % p == 1).unwrap();
    Ok(num * den_inv % p)
}

fn residues(p: u64, prec: usize) -> Result<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&p) {
        if v.len() > prec {
            return Ok(v[..=prec].to_vec());
        }
    }
    let v = artin_hasse_rational(p, prec)
        .iter()
        .map(|x| reduce_mod_p(x, p))
        .collect::<Result<Vec<u64>>>()?;
    let mut guard = cache.lock().unwrap();
    let slot = guard.entry(p).or_default();
    if slot.len() < v.len() {
        *slot = v.clone();
    }
    Ok(v)
}

/// `E_p` modulo `X^{prec+1}`, with coefficients in the prime subfield of
/// `field`.
pub fn artin_hasse(p: u64, prec: usize, field: &Field) -> Result<UnitSeries> {
    if field.p() != p {
        return Err(Error::Characteristic {
            expected: p,
            got: field.p(),
        });
    }
    let coeffs: Vec<Fe> = residues(p, prec)?
        .into_iter()
        .map(|r| field.from_int(r as i64))
        .collect();
    UnitSeries::new(TruncSeries::from_coeffs(field, coeffs)?)
}
