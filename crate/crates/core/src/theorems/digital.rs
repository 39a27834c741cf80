//! Exhaustive checks of the digit-combinatorial statements.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::json;

use super::report::{ReportBuilder, Tally, VerifyReport};
use crate::digits::{
    admissible_for_m, bracket_q, critical_base_set, digit_games_witness, digital_cmp, in_o_q,
    is_critical, mu_q, mu_q_bruteforce, o_q_members, ord_p, p_core, tau_p, PrimePower,
};

fn core(n: u64, p: u64) -> u64 {
    p_core(n, p).expect("positive argument")
}

fn tau(n: u64, p: u64) -> u64 {
    tau_p(n, p).expect("positive argument")
}

/// Bound for the brute-force `mu_q` oracle: `q p^{2 lambda}`.
pub fn oracle_scan_bound(pq: PrimePower) -> u64 {
    pq.q() * pq.p().pow(2 * pq.lambda())
}

/// `mu_q` by brute force, once per cyclic class.
fn brute_mu_by_label(pq: PrimePower, bound: u64) -> BTreeMap<u64, Option<u64>> {
    let labels: BTreeSet<u64> = (1..pq.q()).map(|c| pq.orbit_label(c)).collect();
    labels
        .into_par_iter()
        .map(|l| (l, mu_q_bruteforce(class_rep(l, pq), pq, bound)))
        .collect()
}

fn class_rep(label: u64, pq: PrimePower) -> u64 {
    if label == 0 {
        pq.q() - 1
    } else {
        label
    }
}

/// For every admissible `(j, k, ell, m)` with `m <= m_bound`: `k <_p m`,
/// and equal cores force `j = (p^f - 1)/(p^ell - 1)` with `f = ord_p k`.
pub fn verify_digitmadness(p: u64, m_bound: u64, ell_bound: u32) -> VerifyReport {
    let builder = ReportBuilder::new(
        "digitmadness",
        json!({"p": p, "m_bound": m_bound, "ell_bound": ell_bound}),
    );
    let parts: Vec<(Tally, usize)> = (1..=m_bound)
        .into_par_iter()
        .map(|m| {
            let mut tally = Tally::default();
            let quads = admissible_for_m(m, p, ell_bound);
            for &quad in &quads {
                let k = quad.k;
                tally.check(
                    digital_cmp(k, m, p) == Ok(Ordering::Less),
                    || json!({"quad": quad.as_array(), "part": "i"}),
                );
                if core(k, p) == core(m, p) {
                    let f = ord_p(k, p).unwrap();
                    let step = (p as u128).pow(quad.ell) - 1;
                    let expected = ((p as u128).pow(f) - 1) / step;
                    let ok = f > 0 && f % quad.ell == 0 && quad.j as u128 == expected;
                    tally.check(
                        ok,
                        || json!({"quad": quad.as_array(), "part": "ii", "ord_p_k": f}),
                    );
                }
            }
            (tally, quads.len())
        })
        .collect();
    let count: usize = parts.iter().map(|(_, n)| n).sum();
    let tally = Tally::merge_all(parts.into_iter().map(|(t, _)| t));
    let range = format!("m <= {m_bound}, ell <= {ell_bound}: {count} quadruples");
    builder.finish(range, tally)
}

/// `digit_games_witness` succeeds on every admissible quadruple in range.
pub fn verify_digitgames(p: u64, m_bound: u64, ell_bound: u32) -> VerifyReport {
    let builder = ReportBuilder::new(
        "digitgames",
        json!({"p": p, "m_bound": m_bound, "ell_bound": ell_bound}),
    );
    let parts: Vec<Tally> = (1..=m_bound)
        .into_par_iter()
        .map(|m| {
            let mut tally = Tally::default();
            for quad in admissible_for_m(m, p, ell_bound) {
                let outcome = digit_games_witness(&quad, p);
                tally.check(
                    outcome.is_ok(),
                    || json!({"quad": quad.as_array(), "failure": outcome.as_ref().err()}),
                );
            }
            tally
        })
        .collect();
    let tally = Tally::merge_all(parts);
    let range = format!(
        "m <= {m_bound}, ell <= {ell_bound}: {} quadruples",
        tally.checks
    );
    builder.finish(range, tally)
}

/// (a) `mu_q(c) < q`, `mu_q(c) in O_q(c)` and agreement with the brute-force
/// minimum; (b) `{(mu_q(c)+1) q^i - 1}` equals the set of `c` coprime to p
/// whose core is least in `O_q(c)`, on `[1, oracle_bound]`; (c)
/// `C_q^0 = {mu_q(c)}` and `C_q = {c : kappa(c) = kappa(mu_q(c))}` against
/// their definitions.
pub fn verify_digitmadness2(pq: PrimePower, c_bound: u64, oracle_bound: u64) -> VerifyReport {
    let builder = ReportBuilder::new(
        "digitmadness2",
        json!({"p": pq.p(), "lambda": pq.lambda(), "q": pq.q(),
               "c_bound": c_bound, "oracle_bound": oracle_bound}),
    );
    let p = pq.p();
    let q = pq.q();
    let scan = oracle_scan_bound(pq);
    let brute = brute_mu_by_label(pq, scan);

    // (a)
    let parts: Vec<Tally> = (1..=c_bound)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            let mu = mu_q(c, pq);
            let want = brute[&pq.orbit_label(c)];
            tally.check(
                mu < q && in_o_q(mu, c, pq) && Some(mu) == want,
                || json!({"part": "a", "c": c, "mu": mu, "bruteforce": want, "scan_bound": scan}),
            );
            tally
        })
        .collect();
    let mut tally = Tally::merge_all(parts);

    // (b): least core per class, by scanning the class members.
    let min_core: BTreeMap<u64, u64> = brute
        .keys()
        .map(|&l| {
            let m = o_q_members(class_rep(l, pq), pq, scan.max(oracle_bound))
                .into_iter()
                .map(|n| core(n, p))
                .min()
                .unwrap_or(u64::MAX);
            (l, m)
        })
        .collect();
    let mus: BTreeSet<u64> = (1..q).map(|c| mu_q(c, pq)).collect();
    let mut lhs = BTreeSet::new();
    for &mu in &mus {
        let mut v = mu as u128 + 1;
        while v - 1 <= oracle_bound as u128 {
            lhs.insert((v - 1) as u64);
            v *= q as u128;
        }
    }
    let rhs: BTreeSet<u64> = (1..=oracle_bound)
        .filter(|&c| c % p != 0 && core(c, p) == min_core[&pq.orbit_label(c)])
        .collect();
    let diff: Vec<u64> = lhs.symmetric_difference(&rhs).take(16).copied().collect();
    tally.check(
        diff.is_empty(),
        || json!({"part": "b", "symmetric_difference": diff}),
    );

    // (c)
    let base: BTreeSet<u64> = critical_base_set(pq).into_iter().collect();
    tally.check(
        base == mus,
        || json!({"part": "c0", "definition": base, "mu_values": mus}),
    );
    let mut definitional = BTreeSet::new();
    for &c in &base {
        let mut v = c as u128 + 1;
        while v - 1 <= oracle_bound as u128 {
            definitional.insert((v - 1) as u64);
            v *= q as u128;
        }
    }
    let by_core: BTreeSet<u64> = (1..=oracle_bound).filter(|&k| is_critical(k, pq)).collect();
    let diff: Vec<u64> = definitional
        .symmetric_difference(&by_core)
        .take(16)
        .copied()
        .collect();
    tally.check(
        diff.is_empty(),
        || json!({"part": "c", "symmetric_difference": diff}),
    );

    builder.finish(
        format!("c <= {c_bound}; sets on [1, {oracle_bound}]; oracle scan <= {scan}"),
        tally,
    )
}

/// Rotation properties of `<c>_q` (small rotations, the core formula for
/// `mu_q`, excluded shifts of `mu_q`) plus
/// `tau_p(<n+1>_q) >= 1 + kappa_p(<n>_q)`, for all `c, n <= bound`.
pub fn verify_necklace(pq: PrimePower, bound: u64) -> VerifyReport {
    let p = pq.p();
    let lambda = pq.lambda();
    let mut params = json!({"p": p, "lambda": lambda, "q": pq.q(), "bound": bound});
    if lambda == 1 {
        params["note"] = json!("lambda = 1: rotation statements have an empty range of i");
    }
    let builder = ReportBuilder::new("necklace", params);
    let scan = oracle_scan_bound(pq);
    let brute = brute_mu_by_label(pq, scan);
    let parts: Vec<Tally> = (1..=bound)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            let pow = |i: u32| p.pow(i);
            let bc = bracket_q(c, pq);
            for i in 1..lambda {
                let rot = bracket_q(c * pow(i), pq);
                if rot < pow(i) {
                    tally.check(
                        tau(bc, p) <= rot,
                        || json!({"check": "small-rotation", "c": c, "i": i}),
                    );
                }
            }
            let left = (0..lambda)
                .map(|i| tau(bracket_q(c * pow(i) + 1, pq), p))
                .min()
                .unwrap();
            let middle = 1
                + (0..lambda)
                    .map(|i| core(bracket_q(c * pow(i), pq), p))
                    .min()
                    .unwrap();
            let mu = brute[&pq.orbit_label(c)];
            let right = mu.map(|m| 1 + core(m, p));
            tally.check(
                Some(left) == right && left == middle,
                || json!({"check": "mu-core", "c": c, "values": [left, middle, right]}),
            );
            if let Some(mu) = mu {
                for i in 1..lambda {
                    let n = (mu + 1) * pow(i) - 1;
                    tally.check(
                        !in_o_q(n, c, pq),
                        || json!({"check": "mu-shift", "c": c, "i": i, "mu": mu}),
                    );
                }
            }
            let lhs = tau(bracket_q(c + 1, pq), p);
            let rhs = 1 + core(bracket_q(c, pq), p);
            tally.check(
                lhs >= rhs,
                || json!({"check": "bracket-step", "n": c, "values": [lhs, rhs]}),
            );
            tally
        })
        .collect();
    builder.finish(format!("c, n <= {bound}"), Tally::merge_all(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, l: u32) -> PrimePower {
        PrimePower::new(p, l).unwrap()
    }

    #[test]
    fn small_runs_pass() {
        assert!(verify_digitmadness(2, 256, 8).pass);
        assert!(verify_digitgames(3, 243, 5).pass);
        let r = verify_digitmadness2(pp(2, 2), 100, 1000);
        assert!(r.pass, "{:?}", r.counterexamples);
        let r = verify_necklace(pp(2, 4), 2000);
        assert!(r.pass, "{:?}", r.counterexamples);
        let r = verify_necklace(pp(3, 1), 100);
        assert!(r.pass && r.params.contains_key("note"));
    }

    #[test]
    fn quadruple_counts() {
        // (1,2,1,3) is the only admissible quadruple with m <= 3, p = 2.
        let r = verify_digitgames(2, 3, 4);
        assert_eq!(r.checks, 1);
        assert!(r.range.ends_with(": 1 quadruples"));
        let r = verify_digitmadness(2, 3, 4);
        assert!(r.range.ends_with(": 1 quadruples"));
    }

    #[test]
    fn brute_mu_table() {
        let t = brute_mu_by_label(pp(2, 2), 64);
        assert_eq!(t[&1], Some(1));
        assert_eq!(t[&0], Some(3));
    }
}
