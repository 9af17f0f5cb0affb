mod common;

use common::{assert_close, random_qubit_state, rng, uniform};
use proptest::prelude::*;
use qdoeblin::channel::*;
use qdoeblin::doeblin::*;
use qdoeblin::hermlin::{eigenvalues, HermitianMatrix};
use qdoeblin::oracles::{alpha_dmax_qubit, eta_tr_expansion_qubit, eta_tr_qubit};

fn optimal(r: CoefficientResult) -> f64 {
    assert!(r.is_optimal(), "{} finished with {:?} (gap {:e})", r.kind, r.status, r.gap);
    r.value
}

fn qubit_channel(seed: u64) -> QuantumChannel {
    random_channel(2, 2, 1 + (seed % 4) as usize, seed).unwrap()
}

fn mixed_state() -> HermitianMatrix {
    HermitianMatrix::from_real_diag(&[0.3, 0.7])
}

#[test]
fn alpha_examples() {
    assert_close(optimal(alpha(&depolarizing(0.5, 2).unwrap()).unwrap()), 0.5, 1e-6, "alpha(D_0.5)");
    assert_close(optimal(alpha(&identity(2).unwrap()).unwrap()), 0.0, 1e-7, "alpha(id)");

    let n = gad(1.0, 0.5).unwrap();
    let grid = alpha_dmax_qubit(&n).unwrap();
    assert_close(optimal(alpha(&n).unwrap()), grid, 1e-4, "alpha(gad(1, 0.5))");
}

#[test]
fn alpha_witness_is_a_state() {
    let r = alpha(&depolarizing(0.3, 2).unwrap()).unwrap();
    let Some(Witness::Operator(sigma)) = r.witness else {
        panic!("expected an operator witness");
    };
    assert_close(sigma.trace(), 1.0, 1e-9, "witness trace");
    assert!(eigenvalues(&sigma).unwrap()[0] > -1e-8);

    let r = alpha(&identity(2).unwrap()).unwrap();
    assert!(r.witness.is_none());
}

#[test]
fn alpha_transpose_examples() {
    let r = alpha_transpose(&identity(2).unwrap()).unwrap();
    assert!(r.not_applicable && r.value.is_nan());
    assert_eq!(r.applicable_value(), None);

    let n = depolarizing(4.0 / 3.0, 2).unwrap();
    let a = optimal(alpha(&n).unwrap());
    let at = optimal(alpha_transpose(&n).unwrap());
    assert_close(a.max(at), 2.0 - 4.0 / 3.0, 1e-5, "max(alpha, alpha_T)(D_4/3)");
}

#[test]
fn transpose_depolarizing_swaps_roles() {
    for q in [2.0 / 3.0, 0.8, 1.0, 4.0 / 3.0] {
        let at = optimal(alpha_transpose(&transpose_depolarizing(q, 2).unwrap()).unwrap());
        let a = optimal(alpha(&depolarizing(q, 2).unwrap()).unwrap());
        assert_close(at, a, 1e-5, &format!("alpha_T(D^T_{q}) vs alpha(D_{q})"));
        if q <= 1.0 {
            assert_close(at, q, 1e-5, "closed form below p = 1");
        }
    }
}

#[test]
fn alpha_hermitian_examples() {
    assert_close(optimal(alpha_hermitian(&depolarizing(0.5, 2).unwrap()).unwrap()), 0.5, 1e-6, "alpha_H(D_0.5)");
    assert_close(optimal(alpha_hermitian(&bitflip(0.3).unwrap()).unwrap()), 0.0, 1e-6, "alpha_H(bitflip)");

    let n = gad(1.0, 0.7).unwrap();
    let a = optimal(alpha(&n).unwrap());
    let ah = optimal(alpha_hermitian(&n).unwrap());
    assert!(a < 1e-6, "alpha(gad(1, 0.7)) = {a}");
    assert!(ah > 1e-2, "alpha_H(gad(1, 0.7)) = {ah}");
    // The relaxation still bounds the contraction coefficient.
    assert!(ah <= 1.0 - eta_tr_qubit(&n).unwrap() + 1e-4);
}

/// `p₁(D_p)` through isotropic symmetry. Twirling maps any feasible `Ĵ` to
/// `c [F Φ⁺ + (1 − F)(𝟙 − Φ⁺)/(d² − 1)]` without changing the trace `c`.
/// `Ĵ ⪯ J(D_p)` reads `cF ≤ 1 − p + p/d²` and `c(1 − F)/(d² − 1) ≤ p/d²`,
/// and PPT means `F ≤ 1/d`. Grid search over `(c, F)`.
fn p1_isotropic_oracle(p: f64, d: usize) -> f64 {
    let d2 = (d * d) as f64;
    let top = 1.0 - p + p / d2;
    let rest = p / d2;
    let steps = 1000;
    let mut best = 0.0f64;
    for i in 0..=steps {
        let f = i as f64 / steps as f64;
        if f > 1.0 / d as f64 + 1e-12 {
            break;
        }
        for k in 0..=steps {
            let c = k as f64 / steps as f64;
            if c * f <= top + 1e-12 && c * (1.0 - f) / (d2 - 1.0) <= rest + 1e-12 {
                best = best.max(c);
            }
        }
    }
    best
}

#[test]
fn p1_examples() {
    let rep = replacer(&mixed_state(), 2).unwrap();
    assert_close(optimal(p1_eb_ppt(&rep).unwrap()), 1.0, 1e-7, "p1(replacer)");
    assert_close(optimal(p1_eb_ppt(&identity(2).unwrap()).unwrap()), 0.0, 1e-7, "p1(id)");

    let oracle = p1_isotropic_oracle(0.5, 2);
    assert_close(oracle, 0.75, 1e-12, "isotropic oracle");
    assert_close(optimal(p1_eb_ppt(&depolarizing(0.5, 2).unwrap()).unwrap()), oracle, 1e-5, "p1(D_0.5)");
}

#[test]
fn p1_witness_is_a_ppt_minorant() {
    let n = random_channel(2, 2, 3, 11).unwrap();
    let r = p1_eb_ppt(&n).unwrap();
    let Some(Witness::Choi(j)) = &r.witness else {
        panic!("expected a Choi witness");
    };
    let flags = validate(j).unwrap();
    assert!(flags.min_eigenvalue > -1e-7 && flags.min_pt_eigenvalue > -1e-7);
    let gap = n.choi().matrix() - j.matrix();
    assert!(eigenvalues(&gap).unwrap()[0] > -1e-7);
}

#[test]
fn reverse_alpha_examples() {
    for p in [0.2, 0.6, 1.0] {
        assert_close(optimal(reverse_alpha(&depolarizing(p, 2).unwrap()).unwrap()), p, 1e-6, "rev(D_p)");
    }
    assert_close(optimal(reverse_alpha(&identity(2).unwrap()).unwrap()), 0.0, 1e-6, "rev(id)");
    assert_close(optimal(reverse_alpha(&bitflip(0.5).unwrap()).unwrap()), 1.0, 1e-6, "rev(bitflip 0.5)");
}

#[test]
fn reverse_witness_degrades_to_target() {
    let n = depolarizing(0.4, 2).unwrap();
    let r = reverse_alpha(&n).unwrap();
    let Some(Witness::Choi(d)) = &r.witness else {
        panic!("expected a Choi witness");
    };
    let flags = validate(d).unwrap();
    assert!(flags.min_eigenvalue > -1e-7 && flags.marginal_defect < 1e-7);
    let composed = link_product_choi_like(d, n.choi().as_choi_like()).unwrap();
    let target = depolarizing(r.value, 2).unwrap();
    let diff = composed.matrix() - target.choi().matrix();
    assert!(diff.matrix().max_abs() < 1e-6);
}

#[test]
fn reverse_alpha_transpose_examples() {
    assert_close(optimal(reverse_alpha_transpose(&identity(2).unwrap()).unwrap()), 2.0 / 3.0, 1e-6, "rev_T(id)");
    let n = depolarizing(4.0 / 3.0, 2).unwrap();
    assert_close(optimal(reverse_alpha_transpose(&n).unwrap()), 2.0 / 3.0, 1e-5, "rev_T(D_4/3)");
    for seed in 0..20 {
        let v = optimal(reverse_alpha_transpose(&qubit_channel(seed)).unwrap());
        assert!((2.0 / 3.0 - 1e-6..=2.0 + 1e-6).contains(&v), "rev_T = {v}");
    }
}

#[test]
fn reverse_alpha_hermitian_examples() {
    for (p, eta) in [(1.0, 0.3), (0.5, 0.5), (0.2, 0.8)] {
        let v = optimal(reverse_alpha_hermitian(&gad(p, eta).unwrap()).unwrap());
        assert_close(v, 1.0 - eta, 1e-5, &format!("rev_H(gad({p}, {eta}))"));
    }
    let mut r = rng(5);
    for _ in 0..3 {
        let q = uniform(&mut r);
        let sigma = random_qubit_state(&mut r);
        let v = optimal(reverse_alpha_hermitian(&generalized_depolarizing(q, &sigma).unwrap()).unwrap());
        assert_close(v, q, 1e-5, "rev_H(generalized depolarizing)");
    }
    assert_close(optimal(reverse_alpha_hermitian(&identity(2).unwrap()).unwrap()), 0.0, 1e-6, "rev_H(id)");
}

#[test]
fn reverse_requires_matching_dimensions() {
    let n = random_channel(2, 3, 2, 1).unwrap();
    assert!(reverse_alpha(&n).is_err());
    assert!(reverse_alpha_hermitian(&n).is_err());
}

#[test]
fn bound_examples() {
    let n = depolarizing(1.2, 2).unwrap();
    assert_close(contraction_upper_bound(&n).unwrap(), 0.2, 1e-5, "upper(D_1.2)");
    assert_close(expansion_lower_bound(&n).unwrap(), 0.2, 1e-5, "lower(D_1.2)");

    let n = bitflip(0.3).unwrap();
    assert_close(contraction_upper_bound(&n).unwrap(), 1.0, 1e-6, "upper(bitflip)");
    assert!(expansion_lower_bound(&n).unwrap() <= 0.4 + 1e-6);

    let range = dp_range(&replacer(&mixed_state(), 2).unwrap(), "replacer").unwrap();
    assert_eq!(range.id, "replacer");
    assert_close(range.upper, 0.0, 1e-6, "upper(replacer)");
    assert_close(range.lower, 0.0, 1e-6, "lower(replacer)");
}

#[test]
fn combined_transpose_hermitian_bound() {
    let n = depolarizing(1.2, 2).unwrap();
    let doeblin = Doeblin {
        combine_th: true,
        ..Doeblin::default()
    };
    let combined = doeblin.contraction_upper_bound(&n).unwrap();
    assert!(combined <= contraction_upper_bound(&n).unwrap() + 1e-9);
    assert!(combined >= eta_tr_qubit(&n).unwrap() - 1e-4);
}

#[test]
fn capacity_examples() {
    let b = capacity_bounds(&erasure(0.5, 2).unwrap()).unwrap();
    assert_close(b.q_bound.unwrap(), 0.0, 1e-7, "Q(E_0.5)");

    let b = capacity_bounds(&depolarizing(0.3, 2).unwrap()).unwrap();
    assert_close(b.q_bound.unwrap(), 0.4, 1e-6, "Q(D_0.3)");
    assert_close(b.q2_bound, 0.7, 1e-6, "Q2(D_0.3)");
    assert_close(b.c_bound, 0.7, 1e-6, "C(D_0.3)");

    let b = capacity_bounds(&replacer(&mixed_state(), 2).unwrap()).unwrap();
    assert_close(b.q_bound.unwrap(), 0.0, 1e-6, "Q(replacer)");
    assert_close(b.q2_bound, 0.0, 1e-6, "Q2(replacer)");
    assert_close(b.c_bound, 0.0, 1e-6, "C(replacer)");

    for eps in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let b = capacity_bounds(&erasure(eps, 2).unwrap()).unwrap();
        assert_close(b.q_bound.unwrap(), (1.0 - 2.0 * eps).max(0.0), 1e-7, "Q(E_eps)");
    }
    let b = capacity_bounds(&depolarizing(0.3, 3).unwrap()).unwrap();
    assert!(b.q_bound.is_none());
}

#[test]
fn result_serializes_status_as_text() {
    let r = alpha(&depolarizing(0.5, 2).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["kind"], "alpha");
}

#[test]
fn forced_zero_matches_solver() {
    // Kraus rank 2 on a qubit: generically no nonzero σ̂ fits under J.
    for seed in 0..10 {
        let n = random_channel(2, 2, 2, seed).unwrap();
        assert!(Doeblin::default().sdp_problem(CoefficientKind::Alpha, &n).unwrap().is_none());
        let r = alpha(&n).unwrap();
        assert!(r.is_optimal() && r.value == 0.0);
        assert!(optimal(alpha_hermitian(&n).unwrap()) >= -1e-6);
    }
}

/// Channels where the best forward bound says nothing although the channel
/// contracts. Whether these exist is open; they are only reported.
#[test]
fn report_undetected_contraction() {
    let mut found = 0;
    for seed in 0..40 {
        let n = qubit_channel(seed);
        let upper = contraction_upper_bound(&n).unwrap();
        if upper > 1.0 - 1e-6 && eta_tr_qubit(&n).unwrap() < 1.0 - 1e-3 {
            found += 1;
            eprintln!("seed {seed}: upper bound 1, eta_tr {:.6}", eta_tr_qubit(&n).unwrap());
        }
    }
    eprintln!("{found} candidates among 40 channels");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sandwich_and_ordering(seed in any::<u64>()) {
        let n = qubit_channel(seed);
        let a = optimal(alpha(&n).unwrap());
        let ah = optimal(alpha_hermitian(&n).unwrap());
        let p1 = optimal(p1_eb_ppt(&n).unwrap());
        let rev = optimal(reverse_alpha(&n).unwrap());
        let rev_h = optimal(reverse_alpha_hermitian(&n).unwrap());
        let eta = eta_tr_qubit(&n).unwrap();
        let eta_exp = eta_tr_expansion_qubit(&n).unwrap();

        prop_assert!(1.0 - rev <= eta_exp + 1e-4, "1 - rev {} > expansion {}", 1.0 - rev, eta_exp);
        prop_assert!(eta_exp <= eta + 1e-12);
        prop_assert!(eta <= 1.0 - a + 1e-4, "eta {} > 1 - alpha {}", eta, 1.0 - a);
        prop_assert!(a <= ah + 1e-6);
        prop_assert!(ah <= 1.0 - eta + 1e-4, "alpha_H {} > 1 - eta {}", ah, 1.0 - eta);
        prop_assert!(a <= p1 + 1e-6);
        prop_assert!(rev_h <= rev + 1e-6 && rev <= 1.0 + 1e-6);
        for v in [a, ah, p1] {
            prop_assert!((-1e-7..=1.0 + 1e-7).contains(&v));
        }
        prop_assert!((-1e-7..=1.0 + 1e-7).contains(&rev));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn concavity(seed in any::<u64>()) {
        let n = qubit_channel(seed);
        let m = qubit_channel(seed.wrapping_add(0x9e37_79b9));
        let an = optimal(alpha(&n).unwrap());
        let am = optimal(alpha(&m).unwrap());
        for lambda in [0.25, 0.5, 0.75] {
            let mixed = optimal(alpha(&n.mix(lambda, &m).unwrap()).unwrap());
            prop_assert!(mixed >= lambda * an + (1.0 - lambda) * am - 1e-6);
        }
    }

    #[test]
    fn concatenation(seed in any::<u64>()) {
        let n = qubit_channel(seed);
        let m = qubit_channel(seed.wrapping_add(0x7f4a_7c15));
        let an = optimal(alpha(&n).unwrap());
        let am = optimal(alpha(&m).unwrap());
        let anm = optimal(alpha(&n.compose(&m).unwrap()).unwrap());
        prop_assert!(1.0 - anm <= (1.0 - an) * (1.0 - am) + 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn super_multiplicativity(seed in any::<u64>()) {
        // Full Kraus rank keeps α away from the trivial zero.
        let n = random_channel(2, 2, 4, seed).unwrap();
        let m = random_channel(2, 2, 4, seed.wrapping_add(1)).unwrap();
        let an = optimal(alpha(&n).unwrap());
        let am = optimal(alpha(&m).unwrap());
        let joint = optimal(alpha(&n.tensor(&m).unwrap()).unwrap());
        prop_assert!(joint >= an * am - 1e-6, "alpha(N x M) = {} < {}", joint, an * am);
    }

    #[test]
    fn dmax_identity(seed in any::<u64>()) {
        let n = qubit_channel(seed);
        let a = optimal(alpha(&n).unwrap());
        let grid = alpha_dmax_qubit(&n).unwrap();
        prop_assert!((a - grid).abs() <= 1e-4, "SDP {} vs grid {}", a, grid);
    }

    #[test]
    fn reverse_transpose_interval(seed in any::<u64>()) {
        let v = optimal(reverse_alpha_transpose(&qubit_channel(seed)).unwrap());
        prop_assert!((2.0 / 3.0 - 1e-6..=2.0 + 1e-6).contains(&v));
    }
}
