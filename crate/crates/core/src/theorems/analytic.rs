//! Suites over power series: the equivariance of `psi_q ∘ D`, exactness
//! of the logarithmic-derivative sequence, homogeneity, and the
//! Coleman-style equivariance modulo the uniformizer.

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::report::{ReportBuilder, Tally, VerifyReport};
use crate::digits::{critical_base_set, PrimePower};
use crate::error::Result;
use crate::field::{Fe, Field};
use crate::series::{
    apply_additive, gamma_inverse, image_violation, log_deriv, psi_q, random_gamma_from,
    random_unit_from, series_rng, solve_log_deriv, w_series, AdditiveSeries, GammaSeries,
    SeriesRng, TruncSeries,
};

/// Independent stream for trial `t` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, t: usize) -> SeriesRng {
    series_rng(
        seed ^ (t as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    )
}

fn series_json(s: &TruncSeries) -> Value {
    serde_json::to_value(s).unwrap_or(Value::Null)
}

fn gamma_json(g: &GammaSeries) -> Value {
    serde_json::to_value(g.additive()).unwrap_or(Value::Null)
}

/// `psi_q ∘ D`.
pub fn psi_d(f: &TruncSeries, pq: PrimePower) -> Result<TruncSeries> {
    Ok(psi_q(&log_deriv(f)?, pq))
}

/// Left side minus right side of the equivariance identity, as the first
/// differing degree.
pub fn main_identity_gap(
    f: &TruncSeries,
    gamma: &GammaSeries,
    pq: PrimePower,
) -> Result<Option<usize>> {
    let n = f.prec();
    let lhs = psi_d(&f.compose(&gamma.to_series())?, pq)?;
    let inv = gamma_inverse(gamma, n + 1)?;
    let rhs = apply_additive(inv.additive(), &psi_d(f, pq)?)?;
    Ok(lhs.first_difference(&rhs))
}

/// `psi_q[D[F ∘ gamma]] = gamma^{-1} ∘ psi_q[D[F]]` on random `(F, gamma)`.
/// Trial 0 uses `gamma = X`; then single generators, and compositions of
/// two to four generators, in rotation.
pub fn verify_main(
    pq: PrimePower,
    field: &Field,
    prec: usize,
    trials: usize,
    seed: u64,
) -> VerifyReport {
    let builder = ReportBuilder::new(
        "main",
        json!({"p": pq.p(), "lambda": pq.lambda(), "q": pq.q(), "field": field.spec(),
               "prec": prec, "trials": trials, "seed": seed}),
    );
    let pool: Vec<Fe> = field.nonzero_elements().collect();
    let parts: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut tally = Tally::default();
            let f = random_unit_from(&mut rng, field, prec).into_inner();
            let factors = match t {
                0 => 0,
                t if t % 3 == 1 => 1,
                _ => rng.random_range(2..=4),
            };
            let outcome = random_gamma_from(&mut rng, pq, field, prec + 1, factors, &pool)
                .and_then(|gamma| Ok((main_identity_gap(&f, &gamma, pq)?, gamma)));
            match outcome {
                Ok((gap, gamma)) => tally.check(gap.is_none(), || {
                    json!({"trial": t, "seed": seed, "factors": factors, "degree": gap,
                           "F": series_json(&f), "gamma": gamma_json(&gamma)})
                }),
                Err(e) => tally.fail(json!({"trial": t, "seed": seed, "error": e.to_string()})),
            }
            tally
        })
        .collect();
    builder.finish(
        format!("{trials} trials, degree <= {}", prec + 1),
        Tally::merge_all(parts),
    )
}

fn random_p_power_unit(rng: &mut SeriesRng, field: &Field, prec: usize) -> TruncSeries {
    let p = field.p() as usize;
    let mut u = random_unit_from(rng, field, prec).into_inner();
    for i in (1..=prec).filter(|i| i % p != 0) {
        u.set_coeff(i, Fe::ZERO);
    }
    u
}

/// A random series satisfying `a_0 = 0`, `a_{pi} = a_i^p`.
pub fn random_image_element(rng: &mut SeriesRng, field: &Field, prec: usize) -> TruncSeries {
    let p = field.p() as usize;
    let mut t = TruncSeries::zero(field, prec);
    for i in 1..=prec {
        let c = if i % p == 0 {
            field.frobenius(t.coeff(i / p), 1)
        } else {
            Fe(rng.random_range(0..field.order()))
        };
        t.set_coeff(i, c);
    }
    t
}

fn only_p_multiples(s: &TruncSeries) -> bool {
    let p = s.field().p() as usize;
    s.support().iter().all(|e| e % p == 0)
}

/// Exactness of `1 -> K[[X^p]]^× -> K[[X]]^× -> {a_{pi} = a_i^p} -> 0`.
pub fn verify_factoid(field: &Field, prec: usize, trials: usize, seed: u64) -> VerifyReport {
    let builder = ReportBuilder::new(
        "factoid",
        json!({"field": field.spec(), "prec": prec, "trials": trials, "seed": seed}),
    );
    let parts: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut tally = Tally::default();
            let run = |tally: &mut Tally, rng: &mut SeriesRng| -> Result<()> {
                let u = random_p_power_unit(rng, field, prec);
                let du = log_deriv(&u)?;
                tally.check(du.is_zero(), || json!({"trial": t, "kind": "kernel", "U": series_json(&u)}));

                let f = random_unit_from(rng, field, prec).into_inner();
                let df = log_deriv(&f)?;
                tally.check(df.is_zero() == only_p_multiples(&f), || {
                    json!({"trial": t, "kind": "kernel-converse", "F": series_json(&f)})
                });
                let fu = f.mul(&u)?;
                tally.check(log_deriv(&fu)? == df, || {
                    json!({"trial": t, "kind": "kernel-coset", "F": series_json(&f), "U": series_json(&u)})
                });
                tally.check(image_violation(&df).is_none(), || {
                    json!({"trial": t, "kind": "image", "F": series_json(&f),
                           "index": image_violation(&df)})
                });

                let target = random_image_element(rng, field, prec);
                let sol = solve_log_deriv(&target)?;
                tally.check(log_deriv(&sol)? == target, || {
                    json!({"trial": t, "kind": "surjectivity", "T": series_json(&target)})
                });
                let back = solve_log_deriv(&df)?;
                let quot = back.mul(&f.inv_mult()?)?;
                tally.check(only_p_multiples(&quot), || {
                    json!({"trial": t, "kind": "section-quotient", "F": series_json(&f)})
                });
                Ok(())
            };
            if let Err(e) = run(&mut tally, &mut rng) {
                tally.fail(json!({"trial": t, "error": e.to_string()}));
            }
            tally
        })
        .collect();
    builder.finish(
        format!("{trials} trials, degree <= {prec}"),
        Tally::merge_all(parts),
    )
}

/// `D[F(alpha X)] = D[F](alpha X)` for random `F` and `alpha != 0`.
pub fn verify_homogeneity(field: &Field, prec: usize, trials: usize, seed: u64) -> VerifyReport {
    let builder = ReportBuilder::new(
        "homogeneity",
        json!({"field": field.spec(), "prec": prec, "trials": trials, "seed": seed}),
    );
    let parts: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut tally = Tally::default();
            let f = random_unit_from(&mut rng, field, prec).into_inner();
            let alpha = Fe(rng.random_range(1..field.order()));
            match (log_deriv(&f.scale_arg(alpha)), log_deriv(&f)) {
                (Ok(lhs), Ok(d)) => tally.check(
                    lhs == d.scale_arg(alpha),
                    || json!({"trial": t, "F": series_json(&f), "alpha": field.coords(alpha)}),
                ),
                (Err(e), _) | (_, Err(e)) => {
                    tally.fail(json!({"trial": t, "error": e.to_string()}))
                }
            }
            tally
        })
        .collect();
    builder.finish(
        format!("{trials} trials, degree <= {prec}"),
        Tally::merge_all(parts),
    )
}

/// Nonzero elements of F_q inside `field`: those fixed by `x -> x^q`.
pub fn teichmuller_set(field: &Field, pq: PrimePower) -> Vec<Fe> {
    field
        .nonzero_elements()
        .filter(|&a| field.in_subfield(a, pq.lambda()))
        .collect()
}

/// Modulo the uniformizer, with `K = F_{q^m}`:
/// `Psi[h ∘ theta(omega) ∘ theta(u)] = theta(u)^{-1} ∘ omega^{-1} Psi[h](omega X)`
/// where `Psi = psi_q ∘ D`, `omega` runs over all of `F_q^×` and `theta(u)`
/// over random elements of `Gamma_{q,F_q}`. Also checks that every basis
/// monomial `X^{c+1}`, `c` in `C_q^0`, is hit.
pub fn verify_coleman_equivariance(
    pq: PrimePower,
    ext_degree: u32,
    prec: usize,
    trials: usize,
    seed: u64,
) -> VerifyReport {
    let builder = ReportBuilder::new(
        "coleman",
        json!({"p": pq.p(), "lambda": pq.lambda(), "q": pq.q(), "ext_degree": ext_degree,
               "prec": prec, "trials": trials, "seed": seed}),
    );
    let field = match Field::new(pq.p(), pq.lambda() * ext_degree, None) {
        Ok(f) => f,
        Err(e) => {
            let mut tally = Tally::default();
            tally.fail(json!({"error": e.to_string()}));
            return builder.finish("field construction", tally);
        }
    };
    let omegas = teichmuller_set(&field, pq);
    let parts: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut tally = Tally::default();
            let run = |tally: &mut Tally, rng: &mut SeriesRng| -> Result<()> {
                let h = random_unit_from(rng, &field, prec).into_inner();
                let factors = if t == 0 { 0 } else { rng.random_range(1..=4) };
                let theta_u = random_gamma_from(rng, pq, &field, prec + 1, factors, &omegas)?;
                let theta_u_inv = gamma_inverse(&theta_u, prec + 1)?;
                let psi_h = psi_d(&h, pq)?;
                for &omega in &omegas {
                    let omega_inv = field.inv(omega)?;
                    let conj = psi_h.scale_arg(omega).scale(omega_inv);
                    let scaled = h.scale_arg(omega);
                    // omega-only: Homogeneity conjugation.
                    tally.check(psi_d(&scaled, pq)? == conj, || {
                        json!({"trial": t, "kind": "omega-only", "omega": field.coords(omega),
                               "h": series_json(&h)})
                    });
                    let lhs = psi_d(&scaled.compose(&theta_u.to_series())?, pq)?;
                    let rhs = apply_additive(theta_u_inv.additive(), &conj)?;
                    tally.check(lhs.agrees_with(&rhs), || {
                        json!({"trial": t, "kind": "equivariance", "omega": field.coords(omega),
                               "h": series_json(&h), "theta_u": gamma_json(&theta_u),
                               "degree": lhs.first_difference(&rhs)})
                    });
                }
                Ok(())
            };
            if let Err(e) = run(&mut tally, &mut rng) {
                tally.fail(json!({"trial": t, "error": e.to_string()}));
            }
            tally
        })
        .collect();
    let mut tally = Tally::merge_all(parts);
    for c in critical_base_set(pq)
        .into_iter()
        .filter(|&c| (c as usize) < prec)
    {
        let hit = w_series(c, Fe::ONE, &field, prec)
            .and_then(|w| solve_log_deriv(&w))
            .and_then(|h| psi_d(&h, pq));
        let want = TruncSeries::monomial(&field, prec + 1, c as usize + 1, Fe::ONE);
        tally.check(
            matches!(&hit, Ok(s) if *s == want),
            || json!({"kind": "surjectivity", "c": c}),
        );
    }
    // The identity element of Gamma acts trivially.
    if let Ok(id) = AdditiveSeries::identity(&field, pq, prec + 1) {
        let h = random_unit_from(&mut trial_rng(seed, usize::MAX), &field, prec).into_inner();
        if let Ok(psi_h) = psi_d(&h, pq) {
            tally.check(
                apply_additive(&id, &psi_h)
                    .map(|s| s == psi_h)
                    .unwrap_or(false),
                || json!({"kind": "identity"}),
            );
        }
    }
    builder.finish(
        format!(
            "{trials} trials x {} roots of unity, degree <= {}",
            omegas.len(),
            prec + 1
        ),
        tally,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gamma_gives_psi_d() {
        let f = Field::new(2, 2, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        let h = random_unit_from(&mut series_rng(1), &f, 40).into_inner();
        let id = GammaSeries::identity(&f, pq, 41).unwrap();
        assert_eq!(main_identity_gap(&h, &id, pq).unwrap(), None);
    }

    #[test]
    fn small_runs_pass() {
        let f = Field::new(3, 1, None).unwrap();
        let pq = PrimePower::new(3, 1).unwrap();
        assert!(verify_main(pq, &f, 40, 6, 2).pass);
        assert!(verify_factoid(&f, 40, 6, 2).pass);
        assert!(verify_homogeneity(&f, 40, 6, 2).pass);
        let r = verify_coleman_equivariance(PrimePower::new(2, 1).unwrap(), 2, 32, 4, 5);
        assert!(r.pass, "{:?}", r.counterexamples);
    }

    #[test]
    fn teichmuller_is_fq() {
        let f = Field::new(2, 4, None).unwrap();
        let pq = PrimePower::new(2, 2).unwrap();
        assert_eq!(teichmuller_set(&f, pq).len(), 3);
    }

    #[test]
    fn broken_identity_is_reported() {
        // Acting by gamma instead of gamma^{-1} must be caught.
        let f = Field::new(2, 1, None).unwrap();
        let pq = PrimePower::new(2, 1).unwrap();
        let h = random_unit_from(&mut series_rng(4), &f, 32).into_inner();
        let g =
            GammaSeries::new(AdditiveSeries::generator(&f, pq, 33, 1, Fe::ONE).unwrap()).unwrap();
        let lhs = psi_d(&h.compose(&g.to_series()).unwrap(), pq).unwrap();
        let wrong = apply_additive(g.additive(), &psi_d(&h, pq).unwrap()).unwrap();
        let right = apply_additive(
            gamma_inverse(&g, 33).unwrap().additive(),
            &psi_d(&h, pq).unwrap(),
        )
        .unwrap();
        assert!(lhs.agrees_with(&right));
        assert!(!lhs.agrees_with(&wrong) || lhs.is_zero());
    }
}
