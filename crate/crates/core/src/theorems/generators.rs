//! The reduction identity on generator series, and the exploration table
//! of p-digital leading terms of `D[E_p(alpha X^k)]`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::report::{ReportBuilder, Tally, VerifyReport};
use crate::digits::{digital_cmp, in_o_q, is_critical, p_core, p_defect, PrimePower};
use crate::error::Result;
use crate::field::{Fe, Field};
use crate::series::{
    artin_hasse, log_deriv, m_series, m_series_definitional, nuff_closed_form, psi_q, TruncSeries,
};

/// Coefficient sets are capped at this many elements by default.
pub const DEFAULT_COEFF_SET: usize = 8;

/// Parameter grid for [`verify_nuff`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuffGrid {
    pub ks: Vec<u64>,
    pub ells: Vec<u32>,
    pub alphas: Vec<Fe>,
    pub betas: Vec<Fe>,
}

impl NuffGrid {
    /// `k <= k_bound` coprime to p, `1 <= ell <= ell_bound`, and the first
    /// (up to eight) nonzero elements of `field` for both alpha and beta.
    pub fn standard(field: &Field, k_bound: u64, ell_bound: u32) -> Self {
        let p = field.p();
        let coeffs: Vec<Fe> = field.nonzero_elements().take(DEFAULT_COEFF_SET).collect();
        NuffGrid {
            ks: (1..=k_bound).filter(|k| k % p != 0).collect(),
            ells: (1..=ell_bound).collect(),
            alphas: coeffs.clone(),
            betas: coeffs,
        }
    }

    pub fn len(&self) -> usize {
        self.ks.len() * self.ells.len() * self.alphas.len() * self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<(u64, u32, Fe, Fe)> {
        let mut out = Vec::with_capacity(self.len());
        for &k in &self.ks {
            for &ell in &self.ells {
                for &a in &self.alphas {
                    for &b in &self.betas {
                        out.push((k, ell, a, b));
                    }
                }
            }
        }
        out
    }
}

fn nuff_point(
    tally: &mut Tally,
    (k, ell, alpha, beta): (u64, u32, Fe, Fe),
    pq: PrimePower,
    field: &Field,
    prec: usize,
) -> Result<()> {
    let p = pq.p();
    let point =
        || json!({"k": k, "ell": ell, "alpha": field.coords(alpha), "beta": field.coords(beta)});
    let m = m_series(k, alpha, ell, beta, pq, field, prec)?;
    let lhs = psi_q(&m, pq);
    let rhs = nuff_closed_form(k, alpha, ell, beta, pq, field, prec)?;
    tally.check(
        lhs.agrees_with(&rhs),
        || json!({"check": "reduction", "point": point(), "degree": lhs.first_difference(&rhs)}),
    );
    let def = m_series_definitional(k, alpha, ell, beta, pq, field, prec)?;
    tally.check(
        def == m,
        || json!({"check": "dual-path", "point": point(), "degree": def.first_difference(&m)}),
    );
    let bad: Vec<usize> = m
        .support()
        .into_iter()
        .filter(|&e| e as u64 % p != 0 && e as u64 != k)
        .filter(|&e| {
            let e = e as u64;
            !in_o_q(e, k, pq) || digital_cmp(e, k, p) != Ok(Ordering::Greater)
        })
        .collect();
    tally.check(
        bad.is_empty() && m.coeff(k as usize) == alpha,
        || json!({"check": "shape", "point": point(), "exponents": bad}),
    );
    Ok(())
}

/// `psi_q[M_{k,alpha,ell,beta}]` equals its closed form on every grid point;
/// `M` built from its binomial expansion equals `k^{-1} D[E_p(alpha (X +
/// beta X^{q^ell})^k)]`; and every exponent of `M` coprime to p other than
/// `k` lies in `O_q(k)` and is p-digitally larger than `k`.
pub fn verify_nuff(pq: PrimePower, field: &Field, prec: usize, grid: &NuffGrid) -> VerifyReport {
    let builder = ReportBuilder::new(
        "nuff",
        json!({"p": pq.p(), "lambda": pq.lambda(), "q": pq.q(), "field": field.spec(),
               "prec": prec, "ks": grid.ks, "ells": grid.ells,
               "alphas": grid.alphas.iter().map(|&a| field.coords(a)).collect::<Vec<_>>(),
               "betas": grid.betas.iter().map(|&a| field.coords(a)).collect::<Vec<_>>()}),
    );
    let parts: Vec<Tally> = grid
        .points()
        .into_par_iter()
        .map(|pt| {
            let mut tally = Tally::default();
            if let Err(e) = nuff_point(&mut tally, pt, pq, field, prec) {
                tally.fail(json!({"k": pt.0, "ell": pt.1, "error": e.to_string()}));
            }
            tally
        })
        .collect();
    builder.finish(
        format!("{} grid points, degree <= {prec}", grid.len()),
        Tally::merge_all(parts),
    )
}

/// One row of the exploration table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRow {
    pub k: u64,
    pub alpha: Vec<u64>,
    /// The p-digitally least exponent coprime to p with a nonzero
    /// coefficient in `D[E_p(alpha X^k)]`; absent when none lies below the
    /// precision.
    pub leading: Option<u64>,
    pub kappa: Option<u64>,
    pub delta: Option<u32>,
    pub critical: Option<bool>,
}

/// `D[E_p(alpha X^k)]` for `(k, p) = 1`, `k <= k_bound` and `alpha` over
/// the first (up to eight) nonzero elements of `field`, recording the
/// p-digital leading exponent. Data only.
pub fn explore_generators(
    pq: PrimePower,
    field: &Field,
    k_bound: u64,
    prec: usize,
) -> Result<Vec<GeneratorRow>> {
    let p = pq.p();
    let e = artin_hasse(p, prec, field)?;
    let alphas: Vec<Fe> = field.nonzero_elements().take(DEFAULT_COEFF_SET).collect();
    let points: Vec<(u64, Fe)> = (1..=k_bound)
        .filter(|k| k % p != 0)
        .flat_map(|k| alphas.iter().map(move |&a| (k, a)))
        .collect();
    points
        .into_par_iter()
        .map(|(k, alpha)| {
            let inner = TruncSeries::monomial(field, prec, k as usize, alpha);
            let d = log_deriv(&e.compose(&inner)?)?;
            let leading = d
                .support()
                .into_iter()
                .map(|x| x as u64)
                .filter(|x| x % p != 0)
                .min_by(|&a, &b| digital_cmp(a, b, p).expect("positive exponents"));
            Ok(GeneratorRow {
                k,
                alpha: field.coords(alpha),
                leading,
                kappa: leading.map(|m| p_core(m, p).unwrap()),
                delta: leading.map(|m| p_defect(m, p).unwrap()),
                critical: leading.map(|m| is_critical(m, pq)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{apply_additive, gamma_inverse, AdditiveSeries, GammaSeries};
    use crate::theorems::analytic::psi_d;

    #[test]
    fn small_grid_passes() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        let grid = NuffGrid::standard(&f, 9, 2);
        assert_eq!(grid.len(), 5 * 2 * 3 * 3);
        let r = verify_nuff(pq, &f, 96, &grid);
        assert!(r.pass, "{:?}", r.counterexamples);
    }

    #[test]
    fn exploration_table_f2() {
        let f = Field::prime(2).unwrap();
        let pq = PrimePower::new(2, 1).unwrap();
        let rows = explore_generators(pq, &f, 63, 128).unwrap();
        assert_eq!(rows.len(), 32);
        for r in &rows {
            assert_eq!(r.leading, Some(r.k));
            assert_eq!(r.critical, Some(is_critical(r.k, pq)));
        }
    }

    // Composing E_p(alpha X^k) with one generator and applying psi_q . D
    // gives k times the closed form; the equivariant side agrees.
    #[test]
    fn generator_route_matches_closed_form() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        let n = 96;
        let e = artin_hasse(2, n, &f).unwrap();
        for k in [1u64, 3, 5, 7, 11] {
            for ell in 1..=2 {
                let (alpha, beta) = (f.gen_t(), Fe::ONE);
                let g = GammaSeries::new(AdditiveSeries::generator(&f, pq, n, ell, beta).unwrap())
                    .unwrap();
                let fk = e
                    .compose(&TruncSeries::monomial(&f, n, k as usize, alpha))
                    .unwrap();
                let lhs = psi_d(&fk.compose(&g.to_series()).unwrap(), pq).unwrap();
                let kk = f.from_int(k as i64);
                let want = nuff_closed_form(k, alpha, ell, beta, pq, &f, n)
                    .unwrap()
                    .scale(kk);
                assert!(lhs.agrees_with(&want), "k={k} ell={ell}");
                let rhs = apply_additive(
                    gamma_inverse(&g, n + 1).unwrap().additive(),
                    &psi_d(&fk, pq).unwrap(),
                )
                .unwrap();
                assert!(lhs.agrees_with(&rhs));
            }
        }
    }
}
