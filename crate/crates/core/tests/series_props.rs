use proptest::prelude::*;
use qcrit::digits::{is_critical, PrimePower};
use qcrit::series::*;
use qcrit::theorems::psi_d;
use qcrit::{Fe, Field, TruncSeries};

/// (p, lambda, n) combinations exercised by the randomized checks.
const SHAPES: &[(u64, u32, u32)] = &[
    (2, 1, 1),
    (2, 1, 2),
    (2, 2, 2),
    (2, 4, 1),
    (3, 1, 2),
    (3, 2, 1),
    (5, 1, 1),
];

fn setup(shape: (u64, u32, u32)) -> (PrimePower, Field) {
    (
        PrimePower::new(shape.0, shape.1).unwrap(),
        Field::new(shape.0, shape.2, None).unwrap(),
    )
}

fn shapes() -> impl Strategy<Value = (u64, u32, u32)> {
    prop::sample::select(SHAPES)
}

fn multiples_of_p_only(s: &TruncSeries) -> bool {
    let p = s.field().p() as usize;
    s.support().iter().all(|e| e % p == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn log_deriv_is_a_homomorphism(shape in shapes(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (_, f) = setup(shape);
        let a = random_unit(&f, 128, s1).into_inner();
        let b = random_unit(&f, 128, s2).into_inner();
        let lhs = log_deriv(&a.mul(&b).unwrap()).unwrap();
        let rhs = log_deriv(&a).unwrap().add(&log_deriv(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_deriv_kernel_and_image(shape in shapes(), s in any::<u64>()) {
        let (_, f) = setup(shape);
        let a = random_unit(&f, 128, s).into_inner();
        let d = log_deriv(&a).unwrap();
        prop_assert_eq!(image_violation(&d), None);
        prop_assert_eq!(d.is_zero(), multiples_of_p_only(&a));
        let sol = solve_log_deriv(&d).unwrap();
        prop_assert_eq!(log_deriv(&sol).unwrap(), d.clone());
        // Two preimages differ by a unit of K[[X^p]].
        prop_assert!(multiples_of_p_only(&sol.mul(&a.inv_mult().unwrap()).unwrap()));
    }

    #[test]
    fn homogeneity(shape in shapes(), s in any::<u64>(), a in any::<u64>()) {
        let (_, f) = setup(shape);
        let alpha = f.from_index(1 + a % (f.order() - 1)).unwrap();
        let x = random_unit(&f, 128, s).into_inner();
        prop_assert_eq!(log_deriv(&x.scale_arg(alpha)).unwrap(), log_deriv(&x).unwrap().scale_arg(alpha));
    }

    #[test]
    fn equivariance(shape in shapes(), s in any::<u64>(), gs in any::<u64>(), factors in 0usize..5) {
        let (pq, f) = setup(shape);
        let x = random_unit(&f, 128, s).into_inner();
        let g = random_gamma(pq, &f, 129, gs, factors).unwrap();
        let lhs = psi_d(&x.compose(&g.to_series()).unwrap(), pq).unwrap();
        let rhs = apply_additive(gamma_inverse(&g, 129).unwrap().additive(), &psi_d(&x, pq).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_action_law(shape in shapes(), s in any::<u64>(), g1 in any::<u64>(), g2 in any::<u64>()) {
        let (pq, f) = setup(shape);
        let x = random_unit(&f, 96, s).into_inner();
        let a = random_gamma(pq, &f, 97, g1, 2).unwrap();
        let b = random_gamma(pq, &f, 97, g2, 2).unwrap();
        let ab = a.compose(&b).unwrap();
        // F o (a o b) = (F o a) o b
        let direct = x.compose(&ab.to_series()).unwrap();
        let staged = x.compose(&a.to_series()).unwrap().compose(&b.to_series()).unwrap();
        prop_assert_eq!(&direct, &staged);
        let psi = psi_d(&x, pq).unwrap();
        let once = apply_additive(gamma_inverse(&ab, 97).unwrap().additive(), &psi).unwrap();
        let a_inv = gamma_inverse(&a, 97).unwrap();
        let b_inv = gamma_inverse(&b, 97).unwrap();
        let twice = apply_additive(b_inv.additive(), &apply_additive(a_inv.additive(), &psi).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn module_axiom(shape in shapes(), s in any::<u64>(), g1 in any::<u64>(), g2 in any::<u64>()) {
        let (pq, f) = setup(shape);
        let mut g = random_unit(&f, 80, s).into_inner();
        g.set_coeff(0, Fe::ZERO);
        let a = random_gamma(pq, &f, 80, g1, 3).unwrap();
        let b = random_gamma(pq, &f, 80, g2, 3).unwrap();
        let ab = a.compose(&b).unwrap();
        let lhs = apply_additive(ab.additive(), &g).unwrap();
        let rhs = apply_additive(a.additive(), &apply_additive(b.additive(), &g).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // Dense composition is the oracle for the additive action.
        prop_assert_eq!(lhs, ab.to_series().compose(&g).unwrap());
    }

    #[test]
    fn gamma_inverse_is_two_sided(shape in shapes(), gs in any::<u64>(), factors in 0usize..5) {
        let (pq, f) = setup(shape);
        let g = random_gamma(pq, &f, 200, gs, factors).unwrap();
        let inv = gamma_inverse(&g, 200).unwrap();
        let id = qcrit::GammaSeries::identity(&f, pq, 200).unwrap();
        prop_assert_eq!(&g.compose(&inv).unwrap(), &id);
        prop_assert_eq!(&inv.compose(&g).unwrap(), &id);
        prop_assert_eq!(g.to_series().revert().unwrap(), inv.to_series());
    }

    #[test]
    fn multiplicative_inverse(shape in shapes(), s in any::<u64>()) {
        let (_, f) = setup(shape);
        let a = random_unit(&f, 100, s).into_inner();
        prop_assert_eq!(a.mul(&a.inv_mult().unwrap()).unwrap(), TruncSeries::one(&f, 100));
    }

    #[test]
    fn json_round_trip(shape in shapes(), s in any::<u64>(), gs in any::<u64>()) {
        let (pq, f) = setup(shape);
        let a = random_unit(&f, 40, s).into_inner();
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<TruncSeries>(&text).unwrap(), a);
        let g = random_gamma(pq, &f, 40, gs, 3).unwrap().into_additive();
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<qcrit::AdditiveSeries>(&text).unwrap(), g);
    }
}

#[test]
fn psi_of_w_series() {
    for &shape in SHAPES {
        let (pq, f) = setup(shape);
        for k in (1..60u64).filter(|k| k % pq.p() != 0) {
            let w = w_series(k, Fe::ONE, &f, 80).unwrap();
            let want = if is_critical(k, pq) {
                TruncSeries::monomial(&f, 81, k as usize + 1, Fe::ONE)
            } else {
                TruncSeries::zero(&f, 81)
            };
            assert_eq!(psi_q(&w, pq), want, "{shape:?} k={k}");
        }
    }
}

#[test]
fn artin_hasse_against_solved_log_derivative() {
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).unwrap();
        let e = artin_hasse(p, 100, &f).unwrap().into_inner();
        let sol = solve_log_deriv(&w_series(1, Fe::ONE, &f, 100).unwrap()).unwrap();
        let quotient = e.mul(&sol.inv_mult().unwrap()).unwrap();
        assert!(multiples_of_p_only(&quotient), "p={p}");
        assert_eq!(e.coeff(0), Fe::ONE);
        assert_eq!(e.coeff(1), Fe::ONE);
    }
}

#[test]
fn m_series_reduces_to_w_without_admissible_terms() {
    // q^ell - 1 > N leaves only the W terms.
    let f = Field::new(2, 2, None).unwrap();
    let pq = PrimePower::new(2, 2).unwrap();
    let m = m_series(3, f.gen_t(), 3, Fe::ONE, pq, &f, 60).unwrap();
    assert_eq!(m, w_series(3, f.gen_t(), &f, 60).unwrap());
}
