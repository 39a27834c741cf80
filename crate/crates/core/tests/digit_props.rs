use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use qcrit::digits::*;

const PRIMES: &[u64] = &[2, 3, 5, 7, 11];

fn base_p(mut n: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while n > 0 {
        d.push(n % p);
        n /= p;
    }
    d.reverse();
    d
}

fn value(d: &[u64], p: u64) -> u64 {
    d.iter().fold(0, |acc, &x| acc * p + x)
}

/// Core by literal string stripping: trailing zeros, then trailing p-1.
fn core_by_strings(n: u64, p: u64) -> u64 {
    let mut d = base_p(n, p);
    while d.last() == Some(&0) {
        d.pop();
    }
    while d.last() == Some(&(p - 1)) {
        d.pop();
    }
    value(&d, p)
}

fn binomial_big(m: u64, k: u64) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    let mut r = BigUint::from(1u32);
    for i in 0..k {
        r = r * (m - i) / (i + 1);
    }
    r
}

proptest! {
    #[test]
    fn lucas_matches_exact_binomial(p in prop::sample::select(PRIMES), m in 0u64..=300, k in 0u64..=300) {
        let exact = (binomial_big(m, k) % p).to_u64().unwrap();
        prop_assert_eq!(lucas_binom(m, k, p), exact);
    }

    #[test]
    fn digits_round_trip(p in prop::sample::select(PRIMES), n in 0u64..1_000_000_000) {
        let d = to_digits(n, p, None).unwrap();
        prop_assert_eq!(from_digits(&d).unwrap(), n);
        let expected = base_p(n, p);
        prop_assert_eq!(d.digits(), expected.as_slice());
    }

    #[test]
    fn core_and_defect_by_strings(p in prop::sample::select(PRIMES), n in 1u64..10_000_000) {
        let k = core_by_strings(n, p);
        prop_assert_eq!(p_core(n, p).unwrap(), k);
        prop_assert_eq!(p_defect(n, p).unwrap() as usize, base_p(k, p).len());
    }

    #[test]
    fn digital_order_key(p in prop::sample::select(PRIMES), m in 1u64..100_000, n in 1u64..100_000) {
        let key = |x: u64| (core_by_strings(x, p), tau_p(x, p).unwrap(), x);
        prop_assert_eq!(digital_cmp(m, n, p).unwrap(), key(m).cmp(&key(n)));
    }
}

#[test]
fn digital_order_is_total_and_transitive() {
    for &p in &[2u64, 3] {
        let mut v: Vec<u64> = (1..500).collect();
        v.sort_by(|&a, &b| digital_cmp(a, b, p).unwrap());
        for w in v.windows(2) {
            assert_eq!(digital_cmp(w[0], w[1], p).unwrap(), Ordering::Less);
        }
        for a in 1..120u64 {
            assert_eq!(digital_cmp(a, a, p).unwrap(), Ordering::Equal);
            for b in 1..120u64 {
                assert_eq!(
                    digital_cmp(a, b, p).unwrap(),
                    digital_cmp(b, a, p).unwrap().reverse()
                );
            }
        }
    }
}

#[test]
fn mu_fast_path_matches_bruteforce() {
    for &(p, lambda) in &[(2u64, 1u32), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1)] {
        let pq = PrimePower::new(p, lambda).unwrap();
        let bound = pq.q() * p.pow(2 * lambda);
        for c in 1..=1000 {
            assert_eq!(
                Some(mu_q(c, pq)),
                mu_q_bruteforce(c, pq, bound),
                "p={p} lambda={lambda} c={c}"
            );
        }
    }
}

#[test]
fn critical_exponents_stable_under_q() {
    for &(p, lambda) in &[(2u64, 2u32), (2, 3), (3, 2), (5, 1)] {
        let pq = PrimePower::new(p, lambda).unwrap();
        let q = pq.q();
        let base = critical_base_set(pq);
        for k in 1..5000u64 {
            if is_critical(k, pq) {
                assert!(is_critical(q * (k + 1) - 1, pq), "k={k}");
                // Unique decomposition k + 1 = q^i (c + 1), c in C_q^0.
                let hits: Vec<(u64, u32)> = base
                    .iter()
                    .flat_map(|&c| (0..12u32).map(move |i| (c, i)))
                    .filter(|&(c, i)| q.checked_pow(i).is_some_and(|qi| qi * (c + 1) == k + 1))
                    .collect();
                assert_eq!(hits.len(), 1, "k={k}");
                assert_eq!(strip_q_blocks(k, pq), hits[0]);
            }
        }
    }
}

#[test]
fn base_set_of_prime_q() {
    for &p in &[2u64, 3, 5, 7] {
        let pq = PrimePower::new(p, 1).unwrap();
        assert_eq!(critical_base_set(pq), (1..p).collect::<Vec<_>>());
    }
}

#[test]
fn admissible_enumeration_matches_brute_force() {
    for &p in &[2u64, 3, 5] {
        let mut brute = Vec::new();
        for m in 1..=200u64 {
            for ell in 1..=6u32 {
                for j in 1..=m {
                    for k in 1..=m {
                        if is_admissible(j, k, ell, m, p) {
                            brute.push(AdmissibleQuadruple { j, k, ell, m });
                        }
                    }
                }
            }
        }
        assert_eq!(admissible_enumerate(p, 200, 6), brute);
    }
}

#[test]
fn o_q_members_are_coprime_and_in_class() {
    let pq = PrimePower::new(2, 3).unwrap();
    for c in 1..30 {
        let members = o_q_members(c, pq, 500);
        for &n in &members {
            assert!(n % 2 != 0);
            assert!((0..3).any(|i| (n as i64 - (c << i) as i64).rem_euclid(7) == 0));
        }
        assert_eq!(
            members.len(),
            (1..=500).filter(|&n| in_o_q(n, c, pq)).count()
        );
    }
}
