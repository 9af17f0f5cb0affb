mod common;

use common::{assert_close, random_state, rng, uniform};
use num_complex::Complex64;
use proptest::prelude::*;
use qdoeblin::channel::*;
use qdoeblin::hermlin::{kron, kron_herm, min_eigenvalue, partial_transpose, ComplexMatrix, HermitianMatrix, Subsystem};
use qdoeblin::Error;

fn bell(d: usize) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = Complex64::new(1.0 / d as f64, 0.0);
        }
    }
    HermitianMatrix::new(m).unwrap()
}

fn ket(d: usize, k: usize) -> HermitianMatrix {
    let mut v = vec![0.0; d];
    v[k] = 1.0;
    HermitianMatrix::from_real_diag(&v)
}

#[test]
fn identity_choi_is_bell_state() {
    let id = identity(2).unwrap();
    let j = id.choi().matrix();
    assert!(j.max_abs_diff(&bell(2)) < 1e-15);
    assert_close(j.trace(), 1.0, 1e-15, "trace");
    let rank = qdoeblin::hermlin::eigenvalues(j).unwrap().iter().filter(|&&l| l > 1e-10).count();
    assert_eq!(rank, 1);
}

#[test]
fn full_depolarizing_choi_is_maximally_mixed() {
    let j = depolarizing(1.0, 2).unwrap();
    assert!(j.choi().matrix().max_abs_diff(&HermitianMatrix::identity(4).scale(0.25)) < 1e-15);
}

#[test]
fn gad_choi_entries() {
    let (p, eta) = (0.3, 0.6);
    let j = gad(p, eta).unwrap();
    let j = j.choi().matrix();
    // Output-major index o·2 + i; listing the basis input-major swaps the
    // two middle entries.
    let diag = [
        p + (1.0 - p) * eta,
        p * (1.0 - eta),
        (1.0 - p) * (1.0 - eta),
        p * eta + (1.0 - p),
    ];
    for (k, v) in diag.iter().enumerate() {
        assert_close(j[(k, k)].re, v / 2.0, 1e-15, "gad diagonal");
    }
    assert_close(j[(0, 3)].re, eta.sqrt() / 2.0, 1e-15, "gad coherence");
    assert_close(j[(3, 0)].re, eta.sqrt() / 2.0, 1e-15, "gad coherence");
}

#[test]
fn kraus_from_choi_examples() {
    let k = kraus_from_choi(identity(2).unwrap().choi()).unwrap();
    assert_eq!(k.len(), 1);
    let ratio = k[0][(0, 0)];
    assert!(k[0].max_abs_diff(&ComplexMatrix::identity(2).scale_complex(ratio)) < 1e-12);
    assert_close(ratio.norm(), 1.0, 1e-12, "unitary Kraus");

    assert_eq!(kraus_from_choi(depolarizing(1.0, 2).unwrap().choi()).unwrap().len(), 4);

    for seed in 0..10 {
        let ch = random_channel(2, 3, 3, seed).unwrap();
        let k = kraus_from_choi(ch.choi()).unwrap();
        let back = choi_from_kraus(&k, 2, 3).unwrap();
        assert!(back.matrix().max_abs_diff(ch.choi().matrix()) < 1e-9);
    }
}

#[test]
fn validate_flags() {
    let f = validate(identity(2).unwrap().choi().as_choi_like()).unwrap();
    assert!(f.is_cp && f.is_tp && !f.is_ppt);
    let f = validate(depolarizing(0.8, 2).unwrap().choi().as_choi_like()).unwrap();
    assert!(f.is_cp && f.is_tp && f.is_ppt);
    let f = validate(depolarizing(0.5, 2).unwrap().choi().as_choi_like()).unwrap();
    assert!(f.is_cp && f.is_tp && !f.is_ppt);
    let f = validate(depolarizing(4.0 / 3.0, 2).unwrap().choi().as_choi_like()).unwrap();
    assert!(f.is_cp && f.is_tp);
}

#[test]
fn ppt_boundary_of_qubit_depolarizing() {
    let ppt = |p: f64| validate(depolarizing(p, 2).unwrap().choi().as_choi_like()).unwrap().is_ppt;
    let (mut lo, mut hi) = (0.5, 0.8);
    assert!(!ppt(lo) && ppt(hi));
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if ppt(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert_close(hi, 2.0 / 3.0, 1e-6, "PPT threshold");
}

#[test]
fn compose_examples() {
    let n = random_channel(2, 2, 3, 1).unwrap();
    let c = identity(2).unwrap().compose(&n).unwrap();
    assert!(c.choi().matrix().max_abs_diff(n.choi().matrix()) < 1e-12);

    for (p, q) in [(0.2, 0.5), (0.7, 1.1), (1.3, 0.4)] {
        let c = depolarizing(p, 2).unwrap().compose(&depolarizing(q, 2).unwrap()).unwrap();
        let expected = depolarizing(p + q - p * q, 2).unwrap();
        assert!(c.choi().matrix().max_abs_diff(expected.choi().matrix()) < 1e-12);
        // Bloch vectors shrink by (1 − p)(1 − q).
        let out = c.apply(&ket(2, 0)).unwrap();
        assert_close(out[(0, 0)].re - out[(1, 1)].re, (1.0 - p) * (1.0 - q), 1e-12, "Bloch length");
    }

    let (eps, delta) = (0.3, 0.4);
    let c = erasure(eps, 3).unwrap().compose(&erasure(delta, 2).unwrap()).unwrap();
    let out = c.apply(&ket(2, 0)).unwrap();
    assert_close(out[(0, 0)].re, (1.0 - eps) * (1.0 - delta), 1e-12, "surviving weight");
    assert_close(1.0 - out[(0, 0)].re, 1.0 - (1.0 - eps) * (1.0 - delta), 1e-12, "erased weight");

    assert!(matches!(
        identity(3).unwrap().compose(&identity(2).unwrap()),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn tensor_examples() {
    let id = identity(2).unwrap();
    let t = id.tensor(&id).unwrap();
    assert!(t.choi().matrix().max_abs_diff(identity(4).unwrap().choi().matrix()) < 1e-12);

    let mut r = rng(21);
    let n = random_channel(2, 2, 2, 5).unwrap();
    let m = random_channel(2, 3, 2, 6).unwrap();
    let nm = n.tensor(&m).unwrap();
    for _ in 0..5 {
        let rho = random_state(2, &mut r);
        let sigma = random_state(2, &mut r);
        let lhs = nm.apply(&kron_herm(&rho, &sigma).unwrap()).unwrap();
        let rhs = kron_herm(&n.apply(&rho).unwrap(), &m.apply(&sigma).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    // D_p ⊗ D_p on Φ⁺ gives an isotropic state of fidelity (1−p)² + (1−(1−p)²)/4.
    let p = 0.3;
    let dp = depolarizing(p, 2).unwrap();
    let out = dp.tensor(&dp).unwrap().apply(&bell(2)).unwrap();
    let mut direct = ComplexMatrix::zeros(4, 4);
    for a in dp.kraus() {
        for b in dp.kraus() {
            let k = kron(a, b).unwrap();
            direct = &direct + &k.matmul(bell(2).matrix()).matmul(&k.adjoint());
        }
    }
    assert!(out.matrix().max_abs_diff(&direct) < 1e-12);
    let s = (1.0 - p) * (1.0 - p);
    let iso = &bell(2).scale(s) + &HermitianMatrix::identity(4).scale((1.0 - s) / 4.0);
    assert!(out.max_abs_diff(&iso) < 1e-12);

    let big = random_channel(4, 4, 1, 0).unwrap();
    assert!(matches!(big.tensor(&identity(3).unwrap()), Err(Error::Size(_))));
}

#[test]
fn link_product_examples() {
    let n = random_channel(2, 2, 2, 8).unwrap();
    let id = identity(2).unwrap();
    let l = link_product(id.choi(), n.choi()).unwrap();
    assert!(l.matrix().max_abs_diff(n.choi().matrix()) < 1e-12);

    let sigma = HermitianMatrix::from_real_diag(&[0.2, 0.8]);
    let rep = replacer(&sigma, 2).unwrap();
    let l = link_product(rep.choi(), n.choi()).unwrap();
    assert!(l.matrix().max_abs_diff(rep.choi().matrix()) < 1e-12);

    for seed in 0..200u64 {
        let d = random_channel(2, 2, 1 + (seed % 4) as usize, 1000 + seed).unwrap();
        let n = random_channel(2, 2, 1 + (seed % 3) as usize, 2000 + seed).unwrap();
        let l = link_product(d.choi(), n.choi()).unwrap();
        let c = d.compose(&n).unwrap();
        assert!(l.matrix().max_abs_diff(c.choi().matrix()) < 1e-10);
    }
    assert!(link_product(identity(3).unwrap().choi(), n.choi()).is_err());
}

#[test]
fn constructor_examples() {
    let e = erasure(0.3, 2).unwrap();
    assert_eq!(e.d_out(), 3);
    let j = e.choi().matrix();
    let flag: f64 = (0..2).map(|i| j[(2 * 2 + i, 2 * 2 + i)].re).sum();
    assert_close(flag, 0.3, 1e-15, "flag weight");

    let ad = gad(1.0, 0.3).unwrap();
    let out = ad.apply(&ket(2, 1)).unwrap();
    assert!(out.max_abs_diff(&HermitianMatrix::from_real_diag(&[0.7, 0.3])) < 1e-15);

    let flip = bitflip(0.5).unwrap().apply(&ket(2, 0)).unwrap();
    assert!(flip.max_abs_diff(&HermitianMatrix::identity(2).scale(0.5)) < 1e-15);

    assert!(matches!(depolarizing(1.4, 2), Err(Error::InvalidParameter { .. })));
    assert!(matches!(transpose_depolarizing(0.5, 2), Err(Error::InvalidParameter { .. })));
    assert!(matches!(gad(1.1, 0.5), Err(Error::InvalidParameter { .. })));
    assert!(matches!(erasure(-0.1, 2), Err(Error::InvalidParameter { .. })));
    assert!(matches!(dephasing(2.0), Err(Error::InvalidParameter { .. })));
}

#[test]
fn apply_examples() {
    let mut r = rng(4);
    let rho = random_state(3, &mut r);
    let out = identity(3).unwrap().apply(&rho).unwrap();
    assert!(out.max_abs_diff(&rho) <= 1e-15);

    let sigma = random_state(3, &mut r);
    let out = replacer(&sigma, 2).unwrap().apply(&random_state(2, &mut r)).unwrap();
    assert!(out.max_abs_diff(&sigma) < 1e-12);

    let n = random_channel(3, 2, 4, 3).unwrap();
    let out = n.apply(&rho).unwrap();
    assert_close(out.trace(), 1.0, 1e-12, "trace preserved");
    assert!(min_eigenvalue(&out).unwrap() >= -1e-9);
    assert!(n.apply(&HermitianMatrix::identity(2)).is_err());
}

#[test]
fn every_family_is_a_valid_channel() {
    let sigma = HermitianMatrix::from_real_diag(&[0.1, 0.2, 0.7]);
    let p = nalgebra::DMatrix::from_row_slice(3, 2, &[0.5, 0.1, 0.25, 0.3, 0.25, 0.6]);
    let family = [
        identity(3).unwrap(),
        erasure(0.4, 3).unwrap(),
        depolarizing(1.1, 3).unwrap(),
        transpose_depolarizing(1.2, 3).unwrap(),
        werner_holevo(3).unwrap(),
        gad(0.4, 0.9).unwrap(),
        pauli_channel([0.1, 0.2, 0.3, 0.4]).unwrap(),
        bitflip(0.2).unwrap(),
        dephasing(0.7).unwrap(),
        generalized_depolarizing(0.3, &sigma).unwrap(),
        replacer(&sigma, 4).unwrap(),
        classical_embed(&p).unwrap(),
        random_channel(3, 2, 5, 9).unwrap(),
    ];
    for ch in &family {
        let f = validate(ch.choi().as_choi_like()).unwrap();
        assert!(f.is_cp && f.is_tp, "{f:?}");
        let j = ch.choi().matrix();
        assert_close(j.trace(), 1.0, 1e-10, "trace");
        let marg = qdoeblin::hermlin::partial_trace(j, (ch.d_out(), ch.d_in()), Subsystem::Second).unwrap();
        assert!(marg.max_abs_diff(&HermitianMatrix::identity(ch.d_in()).scale(1.0 / ch.d_in() as f64)) < 1e-10);
    }
}

#[test]
fn transpose_choi_is_output_partial_transpose() {
    let n = random_channel(2, 3, 2, 12).unwrap();
    let t = n.transpose_choi();
    let direct = partial_transpose(n.choi().matrix(), (3, 2), Subsystem::First).unwrap();
    assert_eq!(t.matrix(), &direct);
}

#[test]
fn descriptions_round_trip() {
    let d = ChannelDescription::from_json(r#"{"name": "depolarizing", "params": {"p": 0.25, "d": 2}}"#).unwrap();
    let ch = d.build().unwrap();
    assert!(ch.choi().matrix().max_abs_diff(depolarizing(0.25, 2).unwrap().choi().matrix()) < 1e-15);

    let n = random_channel(2, 2, 3, 77).unwrap();
    let text = serde_json::to_string(&ChannelDescription::from_channel(&n)).unwrap();
    let back = ChannelDescription::from_json(&text).unwrap().build().unwrap();
    assert!(back.choi().matrix().max_abs_diff(n.choi().matrix()) < 1e-12);

    let flat = r#"{"d_in": 2, "d_out": 2, "kraus": [[[1,0],[0,0],[0,0],[1,0]]]}"#;
    let id = ChannelDescription::from_json(flat).unwrap().build().unwrap();
    assert!(id.choi().matrix().max_abs_diff(&bell(2)) < 1e-15);

    let bad = r#"{"d_in": 2, "d_out": 2, "kraus": [[[1,0],[0,0],[0,0],[0.5,0]]]}"#;
    assert!(ChannelDescription::from_json(bad).unwrap().build().is_err());
}

#[test]
fn random_channels_are_reproducible() {
    let a = random_channel(3, 3, 2, 42).unwrap();
    let b = random_channel(3, 3, 2, 42).unwrap();
    assert_eq!(a.choi().matrix(), b.choi().matrix());
    assert_ne!(a.choi().matrix(), random_channel(3, 3, 2, 43).unwrap().choi().matrix());
    let mut r = rng(1);
    assert!(uniform(&mut r) < 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn link_product_agrees_with_compose(seed in any::<u64>(), qutrit in any::<bool>(), env in 1usize..4) {
        let d = if qutrit { 3 } else { 2 };
        let outer = random_channel(d, d, env, seed).unwrap();
        let inner = random_channel(d, d, 4 - env, seed.wrapping_add(1)).unwrap();
        let l = link_product(outer.choi(), inner.choi()).unwrap();
        let c = outer.compose(&inner).unwrap();
        prop_assert!(l.matrix().max_abs_diff(c.choi().matrix()) <= 1e-10);
    }

    #[test]
    fn constructed_channels_satisfy_choi_invariants(seed in any::<u64>(), p in 0.0f64..=1.0, eta in 0.0f64..=1.0) {
        let chans = [gad(p, eta).unwrap(), depolarizing(p * 4.0 / 3.0, 2).unwrap(), random_channel(2, 3, 2, seed).unwrap()];
        for ch in &chans {
            let f = validate(ch.choi().as_choi_like()).unwrap();
            prop_assert!(f.is_cp && f.is_tp);
        }
    }
}
