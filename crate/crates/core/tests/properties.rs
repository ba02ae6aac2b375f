use std::f64::consts::{PI, TAU};

use dicke_mpemba::analytic::{
    a_minus_b, analytic_l1_difference, theorem1_predicate, SymmetricQubitParams,
};
use dicke_mpemba::linalg::{
    c, casimir_residual, devectorize, kron, max_abs_diff, trace, trace_norm, vectorize, CMatrix,
    CVector, DensityMatrix,
};
use dicke_mpemba::measures::{
    l1_coherence, log_negativity, trace_distance, Bipartition, MeasureKind,
};
use dicke_mpemba::mpemba::{
    coherence_preserving_unitary, detect_mpemba, haar_unitary, random_local_unitary,
    relaxation_time, Ordering, Trajectory,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d)
        .prop_map(move |v| CMatrix::from_iterator(d, d, v.into_iter().map(|(a, b)| c(a, b))))
}

fn state(d: usize) -> impl Strategy<Value = CMatrix> {
    matrix(d).prop_map(|a| {
        let m = &a * a.adjoint() + CMatrix::identity(a.nrows(), a.nrows()) * c(1e-3, 0.0);
        let tr = trace(&m);
        m / tr
    })
}

fn unitary(d: usize) -> impl Strategy<Value = CMatrix> {
    any::<u64>().prop_map(move |seed| haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed), d))
}

fn decay_curve(rate: f64, n: usize, dt: f64) -> Trajectory {
    let times = (0..n).map(|i| i as f64 * dt).collect();
    let values = (0..n).map(|i| (-(i as f64) * dt * rate).exp()).collect();
    Trajectory::new(times, values, 0.0, MeasureKind::TraceDistanceToSteady).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vec_round_trip(m in matrix(4)) {
        prop_assert_eq!(devectorize(&vectorize(&m)).unwrap(), m);
    }

    #[test]
    fn vec_of_product(a in matrix(3), x in matrix(3), b in matrix(3)) {
        // vec(A X B) = (B^T ⊗ A) vec(X)
        let lhs = vectorize(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vectorize(&x);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(3), x in matrix(2), y in matrix(3)) {
        let lhs = kron(&a, &b) * kron(&x, &y);
        let rhs = kron(&(&a * &x), &(&b * &y));
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn trace_norm_unitarily_invariant(m in matrix(4), u in unitary(4), v in unitary(4)) {
        prop_assert!((trace_norm(&(&u * &m * &v)) - trace_norm(&m)).abs() < 1e-10);
    }

    #[test]
    fn casimir_identity(n in 1usize..30) {
        prop_assert!(casimir_residual(n).unwrap() < 1e-9);
    }

    #[test]
    fn l1_invariant_under_diagonal_rotation(rho in state(2), beta in 0.0..TAU) {
        let r = DensityMatrix::new(rho).unwrap();
        let rot = r.conjugate_by(&coherence_preserving_unitary(beta));
        prop_assert!((l1_coherence(&rot) - l1_coherence(&r)).abs() < 1e-12);
    }

    #[test]
    fn log_negativity_local_unitary_invariant(rho in state(6), seed in any::<u64>()) {
        let part = Bipartition::new(2, 3).unwrap();
        let u = random_local_unitary(seed, 2, 3).unwrap();
        let rot = &u * &rho * u.adjoint();
        let a = log_negativity(&rho, part).unwrap();
        let b = log_negativity(&rot, part).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn trace_distance_unitary_invariant(rho in state(3), sigma in state(3), u in unitary(3)) {
        let a = trace_distance(&rho, &sigma).unwrap();
        let b = trace_distance(&(&u * &rho * u.adjoint()), &(&u * &sigma * u.adjoint())).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn trace_distance_metric(x in state(3), y in state(3), z in state(3)) {
        let xy = trace_distance(&x, &y).unwrap();
        prop_assert!((xy - trace_distance(&y, &x).unwrap()).abs() < 1e-14);
        prop_assert!(xy <= trace_distance(&x, &z).unwrap() + trace_distance(&z, &y).unwrap() + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&xy));
    }

    #[test]
    fn detect_mpemba_antisymmetric(r1 in 0.05..2.0f64, r2 in 0.05..2.0f64, eps in 1e-8..1e-2f64) {
        let a = decay_curve(r1, 400, 0.1);
        let b = decay_curve(r2, 400, 0.1);
        let ab = detect_mpemba(&a, &b, eps, 1e-9).unwrap();
        let ba = detect_mpemba(&b, &a, eps, 1e-9).unwrap();
        prop_assert_eq!(ab.ordering.swapped(), ba.ordering);
        if ab.ordering == Ordering::Tie {
            prop_assert_eq!(ba.ordering, Ordering::Tie);
        }
    }

    #[test]
    fn relaxation_time_monotone_in_epsilon(rate in 0.05..2.0f64, e1 in 1e-9..1e-1f64, f in 1.0..1e3f64) {
        let traj = decay_curve(rate, 500, 0.1);
        let e2 = e1 * f;
        let t1 = relaxation_time(&traj, e1).unwrap();
        let t2 = relaxation_time(&traj, e2).unwrap();
        match (t1, t2) {
            (Some(a), Some(b)) => prop_assert!(a >= b),
            (None, _) => {}
            (Some(_), None) => prop_assert!(false, "looser band not reached"),
        }
    }

    #[test]
    fn theorem_predicate_implies_positive_difference(
        p in 0.2..2.0f64, ratio in 1.01..4.0f64, beta in 0.0..TAU, rx in -0.7..0.7f64
    ) {
        prop_assume!(rx.abs() > 1e-3);
        let s = SymmetricQubitParams::new(p, 5f64.sqrt() * p * ratio, beta, rx, 0.0).unwrap();
        for i in 1..=40 {
            let t = i as f64 * 0.5;
            let diff = analytic_l1_difference(&s, t).unwrap();
            let ab = a_minus_b(&s, t).unwrap();
            prop_assert_eq!(diff.partial_cmp(&0.0), ab.partial_cmp(&0.0));
            if theorem1_predicate(&s) {
                prop_assert!(diff > 0.0, "β={} t={}", beta, t);
            }
        }
    }

    #[test]
    fn pure_states_are_valid(v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5)) {
        let psi = CVector::from_iterator(5, v.into_iter().map(|(a, b)| c(a, b)));
        prop_assume!(psi.norm() > 1e-3);
        let n = psi.norm();
        let rho = DensityMatrix::pure(&(psi / c(n, 0.0))).unwrap();
        prop_assert!((trace(&rho).re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn quarter_turn_windows() {
    let s = |beta: f64| SymmetricQubitParams::new(1.0, 3.0, beta, 0.4, 0.0).unwrap();
    assert!(theorem1_predicate(&s(PI / 8.0)));
    assert!(!theorem1_predicate(&s(3.0 * PI / 8.0)));
    assert!(theorem1_predicate(&s(5.0 * PI / 8.0)));
    assert!(theorem1_predicate(&s(13.0 * PI / 8.0)));
    assert!(!theorem1_predicate(&s(15.0 * PI / 8.0)));
}
