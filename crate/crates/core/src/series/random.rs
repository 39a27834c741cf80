//! Seeded pseudo-random units and Gamma elements.
//!
//! The stream is ChaCha8 seeded with `seed_from_u64(seed)`; field elements
//! are drawn as uniform packed indices. Nothing downstream depends on the
//! particular stream, only on its reproducibility.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AdditiveSeries, GammaSeries, TruncSeries, UnitSeries};
use crate::digits::PrimePower;
use crate::error::Result;
use crate::field::{Fe, Field};

pub type SeriesRng = ChaCha8Rng;

pub fn series_rng(seed: u64) -> SeriesRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_nonzero(rng: &mut SeriesRng, field: &Field) -> Fe {
    Fe(rng.random_range(1..field.order()))
}

pub fn random_unit_from(rng: &mut SeriesRng, field: &Field, prec: usize) -> UnitSeries {
    let mut coeffs = Vec::with_capacity(prec + 1);
    coeffs.push(random_nonzero(rng, field));
    for _ in 0..prec {
        coeffs.push(Fe(rng.random_range(0..field.order())));
    }
    UnitSeries::new(TruncSeries::from_coeffs(field, coeffs).expect("indices in range"))
        .expect("constant term is nonzero")
}

pub fn random_unit(field: &Field, prec: usize, seed: u64) -> UnitSeries {
    random_unit_from(&mut series_rng(seed), field, prec)
}

/// Composes `factors` random generators `X + beta X^{q^ell}` with
/// `q^ell <= prec` and `beta` drawn from `pool` (nonzero elements).
pub fn random_gamma_from(
    rng: &mut SeriesRng,
    pq: PrimePower,
    field: &Field,
    prec: usize,
    factors: usize,
    pool: &[Fe],
) -> Result<GammaSeries> {
    let mut acc = GammaSeries::identity(field, pq, prec)?;
    let max_ell = acc.additive().max_index();
    if max_ell == 0 || pool.is_empty() {
        return Ok(acc);
    }
    for _ in 0..factors {
        let ell = rng.random_range(1..=max_ell);
        let beta = pool[rng.random_range(0..pool.len())];
        let g = GammaSeries::new(AdditiveSeries::generator(field, pq, prec, ell, beta)?)?;
        acc = acc.compose(&g)?;
    }
    Ok(acc)
}

pub fn random_gamma(
    pq: PrimePower,
    field: &Field,
    prec: usize,
    seed: u64,
    factors: usize,
) -> Result<GammaSeries> {
    let pool: Vec<Fe> = field.nonzero_elements().collect();
    random_gamma_from(&mut series_rng(seed), pq, field, prec, factors, &pool)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_and_shape() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 1).unwrap();
        assert_eq!(random_unit(&f, 30, 9), random_unit(&f, 30, 9));
        assert!(random_unit(&f, 30, 9).is_unit());
        assert_eq!(
            random_gamma(pq, &f, 64, 3, 0).unwrap(),
            GammaSeries::identity(&f, pq, 64).unwrap()
        );
        let g = random_gamma(pq, &f, 64, 3, 4).unwrap();
        assert_eq!(g, random_gamma(pq, &f, 64, 3, 4).unwrap());
        assert!(g.additive().is_gamma());
        let dense = g.to_series();
        assert!(dense.support().iter().all(|e| e.is_power_of_two()));
        assert_eq!(dense.coeff(1), Fe::ONE);
    }
}
