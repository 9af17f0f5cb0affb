//! Randomized self-checks of the library's invariants.

use qdoeblin::channel::{
    choi_from_kraus, classical_embed, kraus_from_choi, link_product, random_channel, validate, QuantumChannel,
};
use qdoeblin::doeblin::Doeblin;
use qdoeblin::hermlin::{
    eig_hermitian, eigenvalues, partial_transpose, real_embed, ComplexMatrix, HermitianMatrix, Subsystem,
};
use qdoeblin::oracles::{
    alpha_dmax_qubit, binary_entropy, classical_capacity_biso, classical_doeblin, classical_gamma,
    classical_reverse_alpha, eta_tr_expansion_qubit, eta_tr_qubit, ClassicalChannel,
};
use qdoeblin::sdp::solve_with;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult};

pub const SUITES: [&str; 5] = ["linalg", "channel", "sdp", "doeblin", "classical"];

/// `Err(detail)` is a counterexample.
type Outcome = Result<(), String>;

struct Property {
    name: &'static str,
    cases: usize,
    run: fn(&Doeblin, u64) -> qdoeblin::Result<Outcome>,
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok { Ok(()) } else { Err(detail()) }
}

fn optimal(r: qdoeblin::doeblin::CoefficientResult) -> Result<f64, String> {
    if r.is_optimal() {
        Ok(r.value)
    } else {
        Err(format!("{} ended with status {}", r.kind.as_str(), r.status.as_str()))
    }
}

/// Runs `f`, turning a non-optimal coefficient into a counterexample.
macro_rules! try_opt {
    ($e:expr) => {
        match optimal($e) {
            Ok(v) => v,
            Err(d) => return Ok(Err(d)),
        }
    };
}

fn random_hermitian(dim: usize, rng: &mut SplitMix64) -> HermitianMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
    });
    let sum = ComplexMatrix::from_fn(dim, dim, |i, j| a[(i, j)] + a[(j, i)].conj());
    HermitianMatrix::symmetrized(sum)
}

fn qubit_channel(seed: u64) -> qdoeblin::Result<QuantumChannel> {
    random_channel(2, 2, 1 + (seed % 4) as usize, seed)
}

/// Random channel with the smallest admissible environment or up to two more.
fn channel_between(d_in: usize, d_out: usize, rng: &mut SplitMix64) -> qdoeblin::Result<QuantumChannel> {
    let env = d_in.div_ceil(d_out) + rng.random_range(0..=2);
    random_channel(d_in, d_out, env, rng.next_u64())
}

fn small_channel(seed: u64) -> qdoeblin::Result<QuantumChannel> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let (d_in, d_out) = (rng.random_range(1..=3), rng.random_range(1..=3));
    channel_between(d_in, d_out, &mut rng)
}

fn linalg() -> Vec<Property> {
    vec![
        Property {
            name: "eigen_reconstruction",
            cases: 200,
            run: |_, seed| {
                let mut rng = SplitMix64::seed_from_u64(seed);
                let dim = rng.random_range(1..=8);
                let h = random_hermitian(dim, &mut rng);
                let err = eig_hermitian(&h)?.reconstruct_with(|x| x).max_abs_diff(&h);
                Ok(ensure(err <= 1e-10, || format!("dim {dim}: reconstruction error {err:e}")))
            },
        },
        Property {
            name: "partial_transpose_involution",
            cases: 200,
            run: |_, seed| {
                let mut rng = SplitMix64::seed_from_u64(seed);
                let (a, b) = (rng.random_range(1..=3), rng.random_range(1..=3));
                let h = random_hermitian(a * b, &mut rng);
                let on = if rng.random::<bool>() { Subsystem::First } else { Subsystem::Second };
                let back = partial_transpose(&partial_transpose(&h, (a, b), on)?, (a, b), on)?;
                let err = back.max_abs_diff(&h);
                Ok(ensure(err == 0.0, || format!("dims ({a},{b}): error {err:e}")))
            },
        },
        Property {
            name: "real_embedding_doubles_spectrum",
            cases: 200,
            run: |_, seed| {
                let mut rng = SplitMix64::seed_from_u64(seed);
                let dim = rng.random_range(1..=6);
                let h = random_hermitian(dim, &mut rng);
                let mut expected: Vec<f64> = eigenvalues(&h)?.into_iter().flat_map(|v| [v, v]).collect();
                let mut got: Vec<f64> = real_embed(&h).symmetric_eigenvalues().iter().copied().collect();
                expected.sort_by(f64::total_cmp);
                got.sort_by(f64::total_cmp);
                let err = expected.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                Ok(ensure(err <= 1e-10, || format!("dim {dim}: spectrum mismatch {err:e}")))
            },
        },
    ]
}

fn channel() -> Vec<Property> {
    vec![
        Property {
            name: "random_channel_is_valid",
            cases: 100,
            run: |_, seed| {
                let n = small_channel(seed)?;
                let f = validate(n.choi().as_choi_like())?;
                Ok(ensure(f.min_eigenvalue >= -1e-10 && f.marginal_defect <= 1e-10, || {
                    format!("min eigenvalue {:e}, marginal defect {:e}", f.min_eigenvalue, f.marginal_defect)
                }))
            },
        },
        Property {
            name: "link_product_matches_composition",
            cases: 100,
            run: |_, seed| {
                let mut rng = SplitMix64::seed_from_u64(seed);
                let (a, b, c) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
                let n = channel_between(a, b, &mut rng)?;
                let d = channel_between(b, c, &mut rng)?;
                let linked = link_product(d.choi(), n.choi())?;
                let err = linked.matrix().max_abs_diff(d.compose(&n)?.choi().matrix());
                Ok(ensure(err <= 1e-10, || format!("{a}->{b}->{c}: error {err:e}")))
            },
        },
        Property {
            name: "kraus_round_trip",
            cases: 100,
            run: |_, seed| {
                let n = small_channel(seed)?;
                let kraus = kraus_from_choi(n.choi())?;
                let back = choi_from_kraus(&kraus, n.d_in(), n.d_out())?;
                let err = back.matrix().max_abs_diff(n.choi().matrix());
                Ok(ensure(err <= 1e-10, || format!("{}->{}: error {err:e}", n.d_in(), n.d_out())))
            },
        },
    ]
}

fn sdp() -> Vec<Property> {
    use qdoeblin::doeblin::CoefficientKind::{Alpha, RevAlpha};
    vec![
        Property {
            name: "solution_is_feasible",
            cases: 50,
            run: |doeblin, seed| {
                let kind = if seed % 2 == 0 { Alpha } else { RevAlpha };
                let n = random_channel(2, 2, 4, seed)?;
                let Some(problem) = doeblin.sdp_problem(kind, &n)? else {
                    return Ok(Ok(()));
                };
                let sol = solve_with(&problem, &doeblin.settings)?;
                let slack = problem.min_slack_eigenvalue(&sol.y);
                let eq = problem.equality_violation(&sol.y);
                Ok(ensure(sol.is_optimal() && slack >= -1e-7 && eq <= 1e-7, || {
                    format!("{}: status {}, min slack {slack:e}, equality violation {eq:e}", kind.as_str(), sol.status.as_str())
                }))
            },
        },
        Property {
            name: "objective_scaling",
            cases: 50,
            run: |doeblin, seed| {
                let n = random_channel(2, 2, 4, seed)?;
                let Some(problem) = doeblin.sdp_problem(Alpha, &n)? else {
                    return Ok(Ok(()));
                };
                let base = solve_with(&problem, &doeblin.settings)?;
                let scaled = solve_with(&problem.with_scaled_objective(3.0), &doeblin.settings)?;
                let err = (scaled.objective_value - 3.0 * base.objective_value).abs();
                Ok(ensure(err <= 1e-6, || {
                    format!("3 * {} vs {}", base.objective_value, scaled.objective_value)
                }))
            },
        },
        Property {
            name: "deterministic",
            cases: 50,
            run: |doeblin, seed| {
                let mut rng = SplitMix64::seed_from_u64(seed);
                let d = rng.random_range(1..=3);
                let n = channel_between(d, d, &mut rng)?;
                let Some(problem) = doeblin.sdp_problem(RevAlpha, &n)? else {
                    return Ok(Ok(()));
                };
                let a = solve_with(&problem, &doeblin.settings)?;
                let b = solve_with(&problem, &doeblin.settings)?;
                let same = a.y.iter().zip(&b.y).all(|(x, y)| x.to_bits() == y.to_bits());
                Ok(ensure(same && a.iterations == b.iterations, || "repeated solves differ".into()))
            },
        },
    ]
}

fn doeblin() -> Vec<Property> {
    vec![
        Property {
            name: "sandwich_and_ordering",
            cases: 200,
            run: |dn, seed| {
                let n = qubit_channel(seed)?;
                let a = try_opt!(dn.alpha(&n)?);
                let ah = try_opt!(dn.alpha_hermitian(&n)?);
                let p1 = try_opt!(dn.p1_eb_ppt(&n)?);
                let rev = try_opt!(dn.reverse_alpha(&n)?);
                let rev_h = try_opt!(dn.reverse_alpha_hermitian(&n)?);
                let eta = eta_tr_qubit(&n)?;
                let eta_exp = eta_tr_expansion_qubit(&n)?;
                let chain = [
                    (1.0 - rev, eta_exp + 1e-4, "1 - rev <= eta_expansion"),
                    (eta_exp, eta + 1e-12, "eta_expansion <= eta"),
                    (eta, 1.0 - a + 1e-4, "eta <= 1 - alpha"),
                    (a, ah + 1e-6, "alpha <= alpha_H"),
                    (ah, 1.0 - eta + 1e-4, "alpha_H <= 1 - eta"),
                    (a, p1 + 1e-6, "alpha <= p1"),
                    (rev_h, rev + 1e-6, "rev_H <= rev"),
                ];
                for (lhs, rhs, what) in chain {
                    if lhs > rhs {
                        return Ok(Err(format!("{what}: {lhs} vs {rhs}")));
                    }
                }
                Ok(Ok(()))
            },
        },
        Property {
            name: "concavity",
            cases: 100,
            run: |dn, seed| {
                let n = qubit_channel(seed)?;
                let m = qubit_channel(seed.wrapping_add(0x9e37_79b9))?;
                let an = try_opt!(dn.alpha(&n)?);
                let am = try_opt!(dn.alpha(&m)?);
                let mixed = try_opt!(dn.alpha(&n.mix(0.5, &m)?)?);
                Ok(ensure(mixed >= 0.5 * (an + am) - 1e-6, || {
                    format!("alpha of mixture {mixed} < {}", 0.5 * (an + am))
                }))
            },
        },
        Property {
            name: "super_multiplicativity",
            cases: 50,
            run: |dn, seed| {
                let n = random_channel(2, 2, 4, seed)?;
                let m = random_channel(2, 2, 4, seed.wrapping_add(1))?;
                let an = try_opt!(dn.alpha(&n)?);
                let am = try_opt!(dn.alpha(&m)?);
                let joint = try_opt!(dn.alpha(&n.tensor(&m)?)?);
                Ok(ensure(joint >= an * am - 1e-6, || format!("alpha of product {joint} < {}", an * am)))
            },
        },
        Property {
            name: "concatenation",
            cases: 100,
            run: |dn, seed| {
                let n = qubit_channel(seed)?;
                let m = qubit_channel(seed.wrapping_add(0x7f4a_7c15))?;
                let an = try_opt!(dn.alpha(&n)?);
                let am = try_opt!(dn.alpha(&m)?);
                let anm = try_opt!(dn.alpha(&n.compose(&m)?)?);
                Ok(ensure(1.0 - anm <= (1.0 - an) * (1.0 - am) + 1e-6, || {
                    format!("1 - alpha(N∘M) = {} > {}", 1.0 - anm, (1.0 - an) * (1.0 - am))
                }))
            },
        },
        Property {
            name: "dmax_identity",
            cases: 50,
            run: |dn, seed| {
                let n = qubit_channel(seed)?;
                let a = try_opt!(dn.alpha(&n)?);
                let grid = alpha_dmax_qubit(&n)?;
                Ok(ensure((a - grid).abs() <= 1e-4, || format!("SDP {a} vs grid {grid}")))
            },
        },
    ]
}

fn classical() -> Vec<Property> {
    vec![
        Property {
            name: "chain",
            cases: 100,
            run: |_, seed| {
                let c = ClassicalChannel::random_biso(seed)?;
                let a = classical_doeblin(&c);
                let g = classical_gamma(&c)?;
                let rev = classical_reverse_alpha(&c)?;
                Ok(ensure(a <= g + 1e-12 && g <= rev + 1e-5, || {
                    format!("alpha {a}, gamma {g}, reverse {rev}")
                }))
            },
        },
        Property {
            name: "embedded_alpha",
            cases: 50,
            run: |dn, seed| {
                let size = 2 + (seed % 2) as usize;
                let c = ClassicalChannel::random(size, size, seed)?;
                let v = try_opt!(dn.alpha(&classical_embed(c.matrix())?)?);
                let expected = classical_doeblin(&c);
                Ok(ensure((v - expected).abs() <= 1e-5, || format!("SDP {v} vs {expected}")))
            },
        },
        Property {
            name: "bsc_capacity",
            cases: 100,
            run: |_, seed| {
                let q = SplitMix64::seed_from_u64(seed).random::<f64>();
                let cap = classical_capacity_biso(&ClassicalChannel::bsc(q)?)?;
                let expected = 1.0 - binary_entropy(q);
                Ok(ensure((cap - expected).abs() <= 1e-9, || format!("q {q}: {cap} vs {expected}")))
            },
        },
    ]
}

fn suite(name: &str) -> Vec<Property> {
    match name {
        "linalg" => linalg(),
        "channel" => channel(),
        "sdp" => sdp(),
        "doeblin" => doeblin(),
        _ => classical(),
    }
}

/// FNV-1a, to give every property its own seed stream.
fn name_hash(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

struct Failure {
    suite: String,
    property: &'static str,
    case: usize,
    seed: u64,
    detail: String,
}

pub fn run(doeblin: &Doeblin, which: &str, seed: u64) -> CliResult<()> {
    let names: Vec<&str> = if which == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&which) {
        vec![which]
    } else {
        return Err(CliError::Usage(format!(
            "unknown suite {which:?}; expected one of: {}, all",
            SUITES.join(", ")
        )));
    };

    let mut first: Option<Failure> = None;
    for s in names {
        let (mut passed, mut failed) = (0, 0);
        for prop in suite(s) {
            let mut stream = SplitMix64::seed_from_u64(seed ^ name_hash(&format!("{s}/{}", prop.name)));
            let seeds: Vec<u64> = (0..prop.cases).map(|_| stream.next_u64()).collect();
            let outcomes: Vec<Outcome> = seeds
                .par_iter()
                .map(|&case_seed| (prop.run)(doeblin, case_seed).unwrap_or_else(|e| Err(format!("error: {e}"))))
                .collect();
            for (case, (outcome, &case_seed)) in outcomes.into_iter().zip(&seeds).enumerate() {
                match outcome {
                    Ok(()) => passed += 1,
                    Err(detail) => {
                        failed += 1;
                        if first.is_none() {
                            first = Some(Failure {
                                suite: s.to_string(),
                                property: prop.name,
                                case,
                                seed: case_seed,
                                detail,
                            });
                        }
                    }
                }
            }
        }
        println!("{s}: {passed} passed, {failed} failed");
    }

    match first {
        None => Ok(()),
        Some(f) => {
            let report = json!({
                "suite": f.suite,
                "property": f.property,
                "case": f.case,
                "seed": f.seed,
                "detail": f.detail,
            });
            println!("{report}");
            Err(CliError::Check(format!("{}/{} failed", f.suite, f.property)))
        }
    }
}
