//! Additive series `sum_i a_i X^{q^i}` (the ring `R_{q,K}` under composition)
//! and the group `Gamma_{q,K}` of those with leading term `X`.

use std::collections::BTreeMap;

use super::TruncSeries;
use crate::digits::PrimePower;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Sparse `sum_i a_i X^{q^i}`, keyed by the index `i`. Terms with
/// `q^i > prec` are dropped; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveSeries {
    field: Field,
    pq: PrimePower,
    prec: usize,
    terms: BTreeMap<u32, Fe>,
}

impl AdditiveSeries {
    pub fn new(
        field: &Field,
        pq: PrimePower,
        prec: usize,
        terms: BTreeMap<u32, Fe>,
    ) -> Result<Self> {
        if field.p() != pq.p() {
            return Err(Error::Characteristic {
                expected: pq.p(),
                got: field.p(),
            });
        }
        if terms.values().any(|c| c.index() >= field.order()) {
            return Err(Error::BadCoordinates);
        }
        let mut s = AdditiveSeries {
            field: field.clone(),
            pq,
            prec,
            terms: BTreeMap::new(),
        };
        for (i, c) in terms {
            s.set(i, c);
        }
        Ok(s)
    }

    /// The identity `X`.
    pub fn identity(field: &Field, pq: PrimePower, prec: usize) -> Result<Self> {
        Self::new(field, pq, prec, BTreeMap::from([(0, Fe::ONE)]))
    }

    /// The generator `X + beta X^{q^ell}`.
    pub fn generator(
        field: &Field,
        pq: PrimePower,
        prec: usize,
        ell: u32,
        beta: Fe,
    ) -> Result<Self> {
        Self::new(field, pq, prec, BTreeMap::from([(0, Fe::ONE), (ell, beta)]))
    }

    /// Largest `i` with `q^i <= prec`.
    pub fn max_index(&self) -> u32 {
        max_index(self.pq, self.prec)
    }

    fn set(&mut self, i: u32, c: Fe) {
        if c.is_zero() || i > self.max_index() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, c);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn pq(&self) -> PrimePower {
        self.pq
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<u32, Fe> {
        &self.terms
    }

    pub fn coeff(&self, i: u32) -> Fe {
        self.terms.get(&i).copied().unwrap_or(Fe::ZERO)
    }

    fn q_pow(&self, i: u32) -> usize {
        (self.pq.q() as usize).pow(i)
    }

    /// Frobenius `c -> c^{q^i}`.
    fn frob_q(&self, c: Fe, i: u32) -> Fe {
        self.field.frobenius(c, self.pq.lambda() as u64 * i as u64)
    }

    pub fn to_series(&self) -> TruncSeries {
        let mut s = TruncSeries::zero(&self.field, self.prec);
        for (&i, &c) in &self.terms {
            s.set_coeff(self.q_pow(i), c);
        }
        s
    }

    /// Recognizes a dense series supported on q-power exponents.
    pub fn from_series(s: &TruncSeries, pq: PrimePower) -> Result<Self> {
        let q = pq.q() as usize;
        let mut terms = BTreeMap::new();
        for e in s.support() {
            let mut v = e;
            let mut i = 0;
            while v > 1 && v % q == 0 {
                v /= q;
                i += 1;
            }
            if v != 1 {
                return Err(Error::Format(format!(
                    "exponent {e} is not a power of q = {q}"
                )));
            }
            terms.insert(i, s.coeff(e));
        }
        Self::new(s.field(), pq, s.prec(), terms)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut out = self.clone();
        out.prec = prec.min(self.prec);
        let top = out.max_index();
        out.terms.retain(|&i, _| i <= top);
        out
    }

    /// `self ∘ other`: `(a ∘ b)_n = sum_{i + j = n} a_i b_j^{q^i}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.pq != other.pq {
            return Err(Error::InvalidPrimePower("mismatched q".into()));
        }
        let prec = self.prec.min(other.prec);
        let top = max_index(self.pq, prec);
        let f = &self.field;
        let mut terms: BTreeMap<u32, Fe> = BTreeMap::new();
        for (&i, &a) in &self.terms {
            for (&j, &b) in &other.terms {
                if i + j > top {
                    break;
                }
                let e = terms.entry(i + j).or_insert(Fe::ZERO);
                *e = f.add(*e, f.mul(a, self.frob_q(b, i)));
            }
        }
        Self::new(f, self.pq, prec, terms)
    }

    pub fn is_gamma(&self) -> bool {
        self.coeff(0) == Fe::ONE
    }
}

fn max_index(pq: PrimePower, prec: usize) -> u32 {
    let q = pq.q() as usize;
    let mut i = 0;
    let mut v = 1usize;
    while let Some(next) = v.checked_mul(q) {
        if next > prec {
            break;
        }
        v = next;
        i += 1;
    }
    i
}

/// An element of `Gamma_{q,K}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSeries(AdditiveSeries);

impl GammaSeries {
    pub fn new(s: AdditiveSeries) -> Result<Self> {
        if s.is_gamma() {
            Ok(GammaSeries(s))
        } else {
            Err(Error::Format(
                "leading coefficient of a Gamma element must be 1".into(),
            ))
        }
    }

    pub fn identity(field: &Field, pq: PrimePower, prec: usize) -> Result<Self> {
        Ok(GammaSeries(AdditiveSeries::identity(field, pq, prec)?))
    }

    pub fn additive(&self) -> &AdditiveSeries {
        &self.0
    }

    pub fn into_additive(self) -> AdditiveSeries {
        self.0
    }

    pub fn to_series(&self) -> TruncSeries {
        self.0.to_series()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GammaSeries(self.0.compose(&other.0)?))
    }
}

/// Compositional inverse in `Gamma_{q,K}` up to `X^{prec}`, one index at a
/// time: `h_0 = 1`, `h_n = -sum_{i<n} h_i g_{n-i}^{q^i}`.
pub fn gamma_inverse(g: &GammaSeries, prec: usize) -> Result<GammaSeries> {
    let g = g.0.truncate(prec);
    let f = g.field.clone();
    let top = g.max_index();
    let mut h: Vec<Fe> = vec![Fe::ONE];
    for n in 1..=top {
        let mut acc = Fe::ZERO;
        for (i, &hi) in h.iter().enumerate() {
            let gi = g.coeff(n - i as u32);
            if !gi.is_zero() && !hi.is_zero() {
                acc = f.add(acc, f.mul(hi, g.frob_q(gi, i as u32)));
            }
        }
        h.push(f.neg(acc));
    }
    let terms = h
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i as u32, c))
        .collect();
    GammaSeries::new(AdditiveSeries::new(&f, g.pq, g.prec, terms)?)
}

/// `rho ∘ G = sum_i a_i G^{q^i}`, using `G^{q^i} = sum_k b_k^{q^i} X^{k q^i}`.
/// Precision is `min(N_rho, N_G)`.
pub fn apply_additive(rho: &AdditiveSeries, g: &TruncSeries) -> Result<TruncSeries> {
    if rho.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    let f = rho.field();
    let n = rho.prec().min(g.prec());
    let mut out = TruncSeries::zero(f, n);
    let support = g.truncate(n).support();
    for (&i, &a) in rho.terms() {
        let qi = rho.q_pow(i);
        for &k in &support {
            if k * qi > n {
                break;
            }
            let term = f.mul(a, rho.frob_q(g.coeff(k), i));
            out.set_coeff(k * qi, f.add(out.coeff(k * qi), term));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_acts_trivially() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        let id = AdditiveSeries::identity(&f, pq, 40).unwrap();
        let mut g = TruncSeries::zero(&f, 40);
        g.set_coeff(1, f.gen_t());
        g.set_coeff(3, Fe::ONE);
        g.set_coeff(17, f.gen_t());
        assert_eq!(apply_additive(&id, &g).unwrap(), g);
        let gamma = GammaSeries::identity(&f, pq, 40).unwrap();
        assert_eq!(gamma_inverse(&gamma, 40).unwrap(), gamma);
    }

    #[test]
    fn monomial_action() {
        let f = Field::new(3, 2, None).unwrap();
        let pq = PrimePower::new(3, 1).unwrap();
        let t = f.gen_t();
        let rho = AdditiveSeries::new(&f, pq, 60, BTreeMap::from([(0, t), (1, Fe::ONE), (2, t)]))
            .unwrap();
        // rho ∘ X^{k+1} with k + 1 = 2
        let g = TruncSeries::monomial(&f, 60, 2, Fe::ONE);
        let out = apply_additive(&rho, &g).unwrap();
        let mut want = TruncSeries::zero(&f, 60);
        want.set_coeff(2, t);
        want.set_coeff(6, Fe::ONE);
        want.set_coeff(18, t);
        assert_eq!(out, want);
    }

    #[test]
    fn generator_inverse_closed_form() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 1).unwrap();
        let beta = f.gen_t();
        let n = 256;
        for ell in 1..=3u32 {
            let g =
                GammaSeries::new(AdditiveSeries::generator(&f, pq, n, ell, beta).unwrap()).unwrap();
            let h = gamma_inverse(&g, n).unwrap();
            // sum_i (-1)^i beta^{(q^{ell i} - 1)/(q^ell - 1)} X^{q^{ell i}}
            let mut want = TruncSeries::zero(&f, n);
            let q = pq.q() as u128;
            let mut i = 0u32;
            while (q.pow(ell * i)) as usize <= n {
                let e = (q.pow(ell * i) - 1) / (q.pow(ell) - 1);
                let sign = if i % 2 == 0 { Fe::ONE } else { f.neg(Fe::ONE) };
                want.set_coeff(q.pow(ell * i) as usize, f.mul(sign, f.pow(beta, e)));
                i += 1;
            }
            assert_eq!(h.to_series(), want);
            let x = TruncSeries::x(&f, n);
            assert!(h
                .to_series()
                .compose(&g.to_series())
                .unwrap()
                .agrees_with(&x));
            assert!(g
                .to_series()
                .compose(&h.to_series())
                .unwrap()
                .agrees_with(&x));
        }
    }

    #[test]
    fn composition_matches_dense() {
        let f = Field::new(3, 2, None).unwrap();
        let pq = PrimePower::new(3, 1).unwrap();
        let t = f.gen_t();
        let a = AdditiveSeries::new(
            &f,
            pq,
            100,
            BTreeMap::from([(0, Fe::ONE), (1, t), (3, Fe::ONE)]),
        )
        .unwrap();
        let b = AdditiveSeries::new(
            &f,
            pq,
            100,
            BTreeMap::from([(0, Fe::ONE), (2, f.mul(t, t))]),
        )
        .unwrap();
        let sparse = a.compose(&b).unwrap().to_series();
        let dense = a.to_series().compose(&b.to_series()).unwrap();
        assert_eq!(sparse, dense);
    }

    #[test]
    fn from_series_rejects_non_q_powers() {
        let f = Field::new(2, 1, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        let s = TruncSeries::monomial(&f, 20, 8, Fe::ONE);
        assert!(AdditiveSeries::from_series(&s, pq).is_err());
        let s = TruncSeries::monomial(&f, 20, 16, Fe::ONE);
        assert_eq!(
            AdditiveSeries::from_series(&s, pq).unwrap().coeff(2),
            Fe::ONE
        );
    }
}
