//! The generator series `W_{k,alpha}`, `M_{k,alpha,ell,beta}` and the
//! closed form of `psi_q[M]`.

use super::{artin_hasse, log_deriv, AdditiveSeries, TruncSeries};
use crate::digits::{is_critical, lucas_binom, PrimePower};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

fn prime_inverse(field: &Field, k: u64) -> Result<Fe> {
    let p = field.p();
    if k % p == 0 {
        return Err(Error::NotCoprime(k));
    }
    field.inv(field.from_int((k % p) as i64))
}

/// `W_{k,alpha} = sum_{k p^i <= N} alpha^{p^i} X^{k p^i}`.
pub fn w_series(k: u64, alpha: Fe, field: &Field, prec: usize) -> Result<TruncSeries> {
    let p = field.p();
    if k == 0 || k % p == 0 {
        return Err(Error::NotCoprime(k));
    }
    let mut s = TruncSeries::zero(field, prec);
    let mut e = k as usize;
    let mut i = 0;
    while e <= prec {
        s.set_coeff(e, field.frobenius(alpha, i));
        e *= p as usize;
        i += 1;
    }
    Ok(s)
}

/// `M_{k,alpha,ell,beta}` from its binomial expansion:
/// `W_{k,alpha} + sum_{i>=0} sum_{j>=1} C(p^i k - 1, j) alpha^{p^i} beta^j
/// X^{p^i k + j (q^ell - 1)}`, binomials taken mod p by Lucas.
pub fn m_series(
    k: u64,
    alpha: Fe,
    ell: u32,
    beta: Fe,
    pq: PrimePower,
    field: &Field,
    prec: usize,
) -> Result<TruncSeries> {
    check_char(pq, field)?;
    let mut s = w_series(k, alpha, field, prec)?;
    let p = pq.p() as usize;
    let step = (pq.q() as usize)
        .checked_pow(ell)
        .map(|v| v - 1)
        .unwrap_or(usize::MAX);
    let mut base = k as usize;
    let mut i = 0u64;
    while base <= prec {
        let a = field.frobenius(alpha, i);
        let mut j = 1usize;
        while step <= (prec - base) / j {
            let e = base + j * step;
            let b = lucas_binom(base as u64 - 1, j as u64, pq.p());
            if b != 0 {
                let term = field.mul(
                    field.from_int(b as i64),
                    field.mul(a, field.pow(beta, j as u128)),
                );
                s.set_coeff(e, field.add(s.coeff(e), term));
            }
            j += 1;
        }
        base *= p;
        i += 1;
    }
    Ok(s)
}

/// `M_{k,alpha,ell,beta}` from its definition
/// `k^{-1} D[E_p(alpha (X + beta X^{q^ell})^k)]`.
pub fn m_series_definitional(
    k: u64,
    alpha: Fe,
    ell: u32,
    beta: Fe,
    pq: PrimePower,
    field: &Field,
    prec: usize,
) -> Result<TruncSeries> {
    check_char(pq, field)?;
    let k_inv = prime_inverse(field, k)?;
    let gen = AdditiveSeries::generator(field, pq, prec, ell, beta)?.to_series();
    let mut inner = TruncSeries::one(field, prec);
    for _ in 0..k {
        inner = inner.mul(&gen)?;
    }
    let inner = inner.scale(alpha);
    let e = artin_hasse(pq.p(), prec, field)?;
    let composed = e.compose(&inner)?;
    Ok(log_deriv(&composed)?.scale(k_inv))
}

/// The right-hand side of the reduction identity: for `k in C_q`,
/// `alpha X^{k+1} + sum_{ell | f} (-1)^{f/ell} alpha^{q^f}
/// beta^{(q^f - 1)/(q^ell - 1)} X^{q^f (k+1)}`; zero otherwise.
pub fn nuff_closed_form(
    k: u64,
    alpha: Fe,
    ell: u32,
    beta: Fe,
    pq: PrimePower,
    field: &Field,
    prec: usize,
) -> Result<TruncSeries> {
    check_char(pq, field)?;
    let mut s = TruncSeries::zero(field, prec);
    if !is_critical(k, pq) {
        return Ok(s);
    }
    let q = pq.q() as u128;
    let base = k as u128 + 1;
    s.set_coeff(base as usize, alpha);
    let qell = q.pow(ell);
    let mut f = ell;
    while q.pow(f) * base <= prec as u128 {
        let qf = q.pow(f);
        let sign = if (f / ell) % 2 == 0 {
            Fe::ONE
        } else {
            field.neg(Fe::ONE)
        };
        let a = field.frobenius(alpha, pq.lambda() as u64 * f as u64);
        let b = field.pow(beta, (qf - 1) / (qell - 1));
        let e = (qf * base) as usize;
        s.set_coeff(e, field.add(s.coeff(e), field.mul(sign, field.mul(a, b))));
        f += ell;
    }
    Ok(s)
}

fn check_char(pq: PrimePower, field: &Field) -> Result<()> {
    if pq.p() != field.p() {
        return Err(Error::Characteristic {
            expected: pq.p(),
            got: field.p(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::psi_q;

    #[test]
    fn w_is_log_derivative_of_artin_hasse() {
        for p in [2u64, 3] {
            let f = Field::new(p, 2, None).unwrap();
            let e = artin_hasse(p, 60, &f).unwrap();
            assert_eq!(
                log_deriv(&e).unwrap(),
                w_series(1, Fe::ONE, &f, 60).unwrap()
            );
            let alpha = f.gen_t();
            for k in [1u64, 2, 4, 5, 7] {
                if k % p == 0 {
                    continue;
                }
                let mono = TruncSeries::monomial(&f, 60, k as usize, alpha);
                let def = log_deriv(&e.compose(&mono).unwrap())
                    .unwrap()
                    .scale(prime_inverse(&f, k).unwrap());
                let w = w_series(k, alpha, &f, 60).unwrap();
                assert_eq!(def, w, "p={p} k={k}");
                assert_eq!(w.coeff(k as usize * p as usize), f.frobenius(alpha, 1));
            }
        }
        let f = Field::prime(3).unwrap();
        assert_eq!(w_series(6, Fe::ONE, &f, 10), Err(Error::NotCoprime(6)));
    }

    #[test]
    fn m_closed_form_equals_definition() {
        let f = Field::new(2, 2, None).unwrap();
        for lambda in [1u32, 2] {
            let pq = PrimePower::new(2, lambda).unwrap();
            for k in [1u64, 3, 5, 7] {
                for ell in 1..=2 {
                    let (a, b) = (f.gen_t(), f.add(f.gen_t(), Fe::ONE));
                    let closed = m_series(k, a, ell, b, pq, &f, 96).unwrap();
                    let def = m_series_definitional(k, a, ell, b, pq, &f, 96).unwrap();
                    assert_eq!(closed, def, "lambda={lambda} k={k} ell={ell}");
                    assert_eq!(closed.coeff(k as usize), a);
                }
            }
        }
    }

    #[test]
    fn nuff_cases() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        // 5 = 101_2 is not 4-critical
        assert!(!is_critical(5, pq));
        assert!(nuff_closed_form(5, Fe::ONE, 1, Fe::ONE, pq, &f, 64)
            .unwrap()
            .is_zero());
        let s = nuff_closed_form(3, f.gen_t(), 1, Fe::ONE, pq, &f, 64).unwrap();
        assert_eq!(s.coeff(4), f.gen_t());
        for k in [1u64, 3, 5, 7, 9, 11, 15] {
            let m = m_series(k, f.gen_t(), 1, Fe::ONE, pq, &f, 128).unwrap();
            let lhs = psi_q(&m, pq);
            let rhs = nuff_closed_form(k, f.gen_t(), 1, Fe::ONE, pq, &f, 128).unwrap();
            assert!(lhs.agrees_with(&rhs), "k={k}");
        }
    }
}
