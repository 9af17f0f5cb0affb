mod common;

use common::{assert_close, random_qubit_state, random_state, rng};
use nalgebra::DMatrix;
use proptest::prelude::*;
use qdoeblin::channel::*;
use qdoeblin::doeblin::alpha;
use qdoeblin::hermlin::{trace_norm, HermitianMatrix};
use qdoeblin::oracles::*;

/// `−p log₂ p − (1−p) log₂(1−p)` written with natural logs.
fn entropy_bits(p: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    (t(p) + t(1.0 - p)) / std::f64::consts::LN_2
}

#[test]
fn eta_tr_examples() {
    for p in [0.0, 0.3, 0.7, 1.0, 1.2, 4.0 / 3.0] {
        let v = eta_tr_qubit(&depolarizing(p, 2).unwrap()).unwrap();
        assert_close(v, (1.0 - p).abs(), 1e-4, &format!("eta_tr(D_{p})"));
    }
    for seed in 0..5 {
        let unitary = random_channel(2, 2, 1, seed).unwrap();
        assert_close(eta_tr_qubit(&unitary).unwrap(), 1.0, 1e-6, "eta_tr(unitary)");
    }
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        assert_close(eta_tr_qubit(&bitflip(p).unwrap()).unwrap(), 1.0, 1e-4, "eta_tr(bitflip)");
    }
}

#[test]
fn eta_expansion_examples() {
    for p in [0.0, 0.3, 0.7, 1.0, 1.2] {
        let v = eta_tr_expansion_qubit(&depolarizing(p, 2).unwrap()).unwrap();
        assert_close(v, (1.0 - p).abs(), 1e-3, &format!("expansion(D_{p})"));
    }
    for (p, eta) in [(0.3, 0.6), (1.0, 0.2), (0.5, 0.9)] {
        let v = eta_tr_expansion_qubit(&gad(p, eta).unwrap()).unwrap();
        assert_close(v, eta, 1e-3, &format!("expansion(gad({p}, {eta}))"));
    }
    let rep = replacer(&HermitianMatrix::from_real_diag(&[0.2, 0.8]), 2).unwrap();
    assert_close(eta_tr_expansion_qubit(&rep).unwrap(), 0.0, 1e-9, "expansion(replacer)");
}

#[test]
fn bloch_oracles_require_qubits() {
    let n = depolarizing(0.5, 3).unwrap();
    assert!(eta_tr_qubit(&n).is_err());
    assert!(eta_tr_expansion_qubit(&n).is_err());
    assert!(alpha_dmax_qubit(&n).is_err());
    assert!(alpha_dmax_qubit(&random_channel(2, 3, 2, 0).unwrap()).is_err());
}

#[test]
fn hockey_stick_examples() {
    let mut r = rng(1);
    let rho = random_qubit_state(&mut r);
    assert_eq!(hockey_stick(&rho, &rho, 1.7).unwrap(), 0.0);

    let pair = DivergencePair::flip_pair(0.6).unwrap();
    assert_close(hockey_stick(&pair.rho, &pair.sigma, 2.0).unwrap(), 0.2, 1e-12, "E_2 at eps 0.6");

    // After D_p both states are diagonal: diag(1 − p/2, p/2) and
    // diag((1−p)(1−ε) + p/2, (1−p)ε + p/2). Sum the positive parts.
    for p in [0.1, 0.5, 0.9] {
        for eps in [0.1, 0.4, 0.8] {
            for gamma in [1.0, 1.5, 3.0] {
                let out = DivergencePair::flip_pair(eps).unwrap().depolarized(p).unwrap();
                let a = [1.0 - p / 2.0, p / 2.0];
                let b = [(1.0 - p) * (1.0 - eps) + p / 2.0, (1.0 - p) * eps + p / 2.0];
                let direct: f64 = (0..2).map(|i| (a[i] - gamma * b[i]).max(0.0)).sum();
                let closed = (1.0 - p / 2.0 - gamma * ((1.0 - p) * (1.0 - eps) + p / 2.0)).max(0.0);
                let v = hockey_stick(&out.rho, &out.sigma, gamma).unwrap();
                assert_close(v, direct, 1e-12, "E_gamma after depolarizing");
                assert_close(v, closed, 1e-12, "closed form with +p/2");
            }
        }
    }
}

#[test]
fn f_divergence_examples() {
    let pair = DivergencePair::flip_pair(0.5).unwrap();
    let chi = f_divergence_commuting(&pair.rho, &pair.sigma, FDivergence::ChiSquared).unwrap();
    assert_close(chi, 1.0, 1e-12, "chi^2 at eps 0.5");
    for eps in [0.1, 0.3, 0.9] {
        let pair = DivergencePair::flip_pair(eps).unwrap();
        let chi = f_divergence_commuting(&pair.rho, &pair.sigma, FDivergence::ChiSquared).unwrap();
        assert_close(chi, 1.0 / (1.0 - eps) - 1.0, 1e-12, "chi^2 closed form");
        let kl = f_divergence_commuting(&pair.rho, &pair.sigma, FDivergence::RelativeEntropy).unwrap();
        assert_close(kl, -(1.0 - eps).ln(), 1e-12, "relative entropy closed form");
    }
    let d = HermitianMatrix::from_real_diag(&[0.25, 0.75]);
    for f in [FDivergence::ChiSquared, FDivergence::RelativeEntropy] {
        assert_eq!(f_divergence_commuting(&d, &d, f).unwrap(), 0.0);
    }
    let full = HermitianMatrix::from_real_diag(&[0.5, 0.5]);
    let off = random_qubit_state(&mut rng(2));
    assert!(f_divergence_commuting(&off, &full, FDivergence::ChiSquared).is_err());
}

#[test]
fn chi_squared_slopes_at_zero() {
    for p in [0.2, 0.5, 0.8] {
        let (s_in, s_out) = chi_squared_slopes(p, 1e-5, 1e-6).unwrap();
        assert_close(s_in, 1.0, 1e-3, "slope before depolarizing");
        assert_close(s_out, 0.0, 1e-3, "slope after depolarizing");
    }
}

#[test]
fn hockey_stick_witnesses() {
    for (p, gamma) in [(0.2, 1.5), (0.5, 2.0), (0.8, 3.0)] {
        let w = expansion_witness_hockey_stick(p, gamma).unwrap();
        assert!(w.e_out <= 1e-12, "E_out = {}", w.e_out);
        assert!(w.e_in >= 1e-3, "E_in = {}", w.e_in);
        assert!(w.interval.0 < w.eps_star && w.eps_star < w.interval.1);
    }
    let w = expansion_witness_hockey_stick(0.5, 2.0).unwrap();
    assert_close(w.interval.0, 0.5, 1e-15, "lower end");
    assert_close(w.interval.1, 0.75, 1e-15, "upper end");
    assert_close(w.eps_star, 0.625, 1e-15, "midpoint");
    assert!(expansion_witness_hockey_stick(0.0, 2.0).is_err());
}

#[test]
fn gad_dephasing_examples() {
    assert!(gad_dephasing_identity(0.3, 0.5).unwrap() <= 1e-10);
    // η = 1: no damping, and the dephasing parameter is 0.
    let id_like = gad(0.4, 1.0).unwrap();
    assert!((id_like.choi().matrix() - identity(2).unwrap().choi().matrix()).matrix().max_abs() < 1e-12);
    // η = 0: the right side is the replacer at diag(p, 1 − p).
    let sigma = HermitianMatrix::from_real_diag(&[0.4, 0.6]);
    let lhs = dephasing(0.5).unwrap().compose(&gad(0.4, 0.0).unwrap()).unwrap();
    let rhs = replacer(&sigma, 2).unwrap();
    assert!((lhs.choi().matrix() - rhs.choi().matrix()).matrix().max_abs() < 1e-12);
}

#[test]
fn gad_dephasing_grid() {
    for i in 0..=20 {
        for k in 0..=20 {
            let (p, eta) = (i as f64 / 20.0, k as f64 / 20.0);
            let dev = gad_dephasing_identity(p, eta).unwrap();
            assert!(dev <= 1e-10, "deviation {dev} at ({p}, {eta})");
        }
    }
}

#[test]
fn classical_examples() {
    for p in [0.0, 0.1, 0.3, 0.5, 0.8] {
        let bsc = ClassicalChannel::bsc(p).unwrap();
        assert_close(classical_doeblin(&bsc), 2.0 * p.min(1.0 - p), 1e-15, "alpha(BSC)");
        assert_close(classical_gamma(&bsc).unwrap(), entropy_bits(p), 1e-12, "gamma(BSC)");
    }
    for eps in [0.0, 0.3, 1.0] {
        let bec = ClassicalChannel::bec(eps).unwrap();
        assert_close(classical_doeblin(&bec), eps, 1e-15, "alpha(BEC)");
        assert_close(classical_gamma(&bec).unwrap(), eps, 1e-12, "gamma(BEC)");
    }
    let noiseless = ClassicalChannel::bsc(0.0).unwrap();
    assert_eq!(classical_doeblin(&noiseless), 0.0);
    assert_close(classical_gamma(&noiseless).unwrap(), 0.0, 1e-15, "gamma(noiseless)");

    let c = classical_capacity_biso(&ClassicalChannel::bsc(0.11).unwrap()).unwrap();
    assert_close(c, 1.0 - entropy_bits(0.11), 1e-12, "C(BSC_0.11)");
    assert_close(c, 0.5, 1e-3, "C(BSC_0.11) near one half");
    assert_close(classical_capacity_biso(&ClassicalChannel::bec(0.3).unwrap()).unwrap(), 0.7, 1e-12, "C(BEC)");
    assert_close(binary_entropy(0.5), 1.0, 1e-15, "h(1/2)");
    for p in [0.01, 0.2, 0.37] {
        assert_close(binary_entropy(p), entropy_bits(p), 1e-14, "h(p)");
    }
}

#[test]
fn classical_reverse_examples() {
    for q in [0.0, 0.05, 0.11, 0.25, 0.4, 0.5] {
        let v = classical_reverse_alpha(&ClassicalChannel::bsc(q).unwrap()).unwrap();
        assert_close(v, entropy_bits(q), 1e-4, &format!("reverse(BSC_{q})"));
    }
    for eps in [0.1, 0.3, 0.7] {
        let bec = ClassicalChannel::bec(eps).unwrap();
        let rev = classical_reverse_alpha(&bec).unwrap();
        assert!(rev >= classical_gamma(&bec).unwrap() - 1e-5);
        assert!(classical_gamma(&bec).unwrap() >= classical_doeblin(&bec) - 1e-12);
    }
    let z = ClassicalChannel::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 0.7])).unwrap();
    assert!(classical_reverse_alpha(&z).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn classical_chain(seed in any::<u64>()) {
        let c = ClassicalChannel::random_biso(seed).unwrap();
        prop_assert!(c.is_biso() && (2..=6).contains(&c.outputs()));
        let a = classical_doeblin(&c);
        let g = classical_gamma(&c).unwrap();
        let rev = classical_reverse_alpha(&c).unwrap();
        prop_assert!(a <= g + 1e-12, "alpha {} > gamma {}", a, g);
        prop_assert!(g <= rev + 1e-5, "gamma {} > reverse {}", g, rev);
    }

    #[test]
    fn embedded_classical_alpha(seed in any::<u64>(), size in 2usize..4) {
        let c = ClassicalChannel::random(size, size, seed).unwrap();
        let n = classical_embed(c.matrix()).unwrap();
        let r = alpha(&n).unwrap();
        prop_assert!(r.is_optimal());
        prop_assert!((r.value - classical_doeblin(&c)).abs() <= 1e-5, "{} vs {}", r.value, classical_doeblin(&c));
    }

    #[test]
    fn eta_tr_at_most_one(seed in any::<u64>()) {
        let n = random_channel(2, 2, 1 + (seed % 4) as usize, seed).unwrap();
        prop_assert!(eta_tr_qubit(&n).unwrap() <= 1.0 + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hockey_stick_at_one_is_trace_distance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(2, &mut r);
        let sigma = random_state(2, &mut r);
        let e1 = hockey_stick(&rho, &sigma, 1.0).unwrap();
        let td = 0.5 * trace_norm(&(&rho - &sigma)).unwrap();
        prop_assert!((e1 - td).abs() <= 1e-10);
    }
}
