//! Brute-force estimators over the qubit Bloch ball.

use num_complex::Complex64;

use crate::channel::QuantumChannel;
use crate::hermlin::{eig_hermitian, kron, trace_norm, ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

const GRID_POINTS: usize = 10_000;
const REFINE_STEPS: usize = 20;

/// `(𝟙 + r·σ⃗)/2`; a state when `|r| ≤ 1`.
pub fn bloch_state(r: [f64; 3]) -> HermitianMatrix {
    let [x, y, z] = r;
    let m = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ],
    )
    .expect("2x2 literal");
    HermitianMatrix::symmetrized(m)
}

/// `n` nearly uniform unit vectors on the Fibonacci lattice.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn add(a: [f64; 3], b: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Two unit vectors orthogonal to `n` and to each other.
fn tangents(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let t1 = normalize([
        n[1] * helper[2] - n[2] * helper[1],
        n[2] * helper[0] - n[0] * helper[2],
        n[0] * helper[1] - n[1] * helper[0],
    ]);
    let t2 = [
        n[1] * t1[2] - n[2] * t1[1],
        n[2] * t1[0] - n[0] * t1[2],
        n[0] * t1[1] - n[1] * t1[0],
    ];
    (t1, t2)
}

/// Compass search on a region described by `project`: polls `±h` along the
/// given axes, moves on improvement, halves `h` otherwise.
fn pattern_search(
    start: [f64; 3],
    step: f64,
    sign: f64,
    axes: impl Fn([f64; 3]) -> Vec<[f64; 3]>,
    project: impl Fn([f64; 3]) -> [f64; 3],
    f: &impl Fn([f64; 3]) -> Result<f64>,
) -> Result<f64> {
    let mut x = start;
    let mut fx = sign * f(x)?;
    let mut h = step;
    let mut halvings = 0;
    while halvings < REFINE_STEPS {
        let mut moved = false;
        for dir in axes(x) {
            for s in [h, -h] {
                let cand = project(add(x, dir, s));
                let fc = sign * f(cand)?;
                if fc > fx {
                    x = cand;
                    fx = fc;
                    moved = true;
                }
            }
        }
        if !moved {
            h *= 0.5;
            halvings += 1;
        }
    }
    Ok(sign * fx)
}

fn require_qubit(n: &QuantumChannel, needs_qubit_output: bool) -> Result<()> {
    if n.d_in() != 2 || (needs_qubit_output && n.d_out() != 2) {
        return Err(Error::InvalidInput(format!(
            "qubit channel required, got {} -> {}",
            n.d_in(),
            n.d_out()
        )));
    }
    Ok(())
}

/// `½‖N(n·σ⃗)‖₁ = ½‖N(ψ_n) − N(ψ_{−n})‖₁` for a unit vector `n`.
fn antipodal_distance(n: &QuantumChannel, dir: [f64; 3]) -> Result<f64> {
    let plus = n.apply(&bloch_state(dir))?;
    let minus = n.apply(&bloch_state([-dir[0], -dir[1], -dir[2]]))?;
    Ok(0.5 * trace_norm(&(&plus - &minus))?)
}

fn sphere_axes(x: [f64; 3]) -> Vec<[f64; 3]> {
    let (t1, t2) = tangents(x);
    vec![t1, t2]
}

fn grid_spacing(points: usize) -> f64 {
    (4.0 * std::f64::consts::PI / points as f64).sqrt()
}

/// Trace-distance contraction coefficient of a qubit channel, estimated as
/// the maximum of `½‖N(ψ_n) − N(ψ_{−n})‖₁` over a Fibonacci grid of Bloch
/// directions followed by a local pattern search. Always a lower bound on
/// the true value.
pub fn eta_tr_qubit(n: &QuantumChannel) -> Result<f64> {
    require_qubit(n, false)?;
    let f = |dir: [f64; 3]| antipodal_distance(n, dir);
    let mut best = (f64::NEG_INFINITY, [0.0, 0.0, 1.0]);
    for dir in fibonacci_sphere(GRID_POINTS) {
        let v = f(dir)?;
        if v > best.0 {
            best = (v, dir);
        }
    }
    let refined = pattern_search(best.1, grid_spacing(GRID_POINTS), 1.0, sphere_axes, normalize, &f)?;
    Ok(refined.max(best.0))
}

/// Expansion ratio `‖N(ρ) − N(σ)‖₁ / ‖ρ − σ‖₁` for Bloch vectors `r ≠ s`.
fn expansion_ratio(n: &QuantumChannel, r: [f64; 3], s: [f64; 3]) -> Result<f64> {
    let din = add(r, s, -1.0);
    let d_in = norm(din);
    let out = &n.apply(&bloch_state(r))? - &n.apply(&bloch_state(s))?;
    Ok(trace_norm(&out)? / d_in)
}

/// Upper estimate of the trace-distance expansion coefficient of a qubit
/// channel: the smallest ratio over antipodal pure pairs, `10⁴` seeded
/// random pairs from the Bloch ball, and a local refinement of the best
/// antipodal direction.
pub fn eta_tr_expansion_qubit(n: &QuantumChannel) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    require_qubit(n, false)?;

    let f = |dir: [f64; 3]| antipodal_distance(n, dir);
    let mut best = (f64::INFINITY, [0.0, 0.0, 1.0]);
    for dir in fibonacci_sphere(GRID_POINTS) {
        let v = f(dir)?;
        if v < best.0 {
            best = (v, dir);
        }
    }
    let refined = pattern_search(best.1, grid_spacing(GRID_POINTS), -1.0, sphere_axes, normalize, &f)?;
    let mut value = refined.min(best.0);

    let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(0x5eed_b10c);
    let sample_ball = |rng: &mut rand_xoshiro::SplitMix64| loop {
        let v = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if norm(v) <= 1.0 {
            break v;
        }
    };
    let mut pairs = 0;
    while pairs < GRID_POINTS {
        let r = sample_ball(&mut rng);
        let s = sample_ball(&mut rng);
        if norm(add(r, s, -1.0)) < 1e-6 {
            continue;
        }
        value = value.min(expansion_ratio(n, r, s)?);
        pairs += 1;
    }
    Ok(value)
}

/// Largest `c` with `c·σ⊗𝟙/2 ⪯ J(N)`, i.e. `exp(−D_max(σ⊗𝟙/2 ‖ J))`.
pub struct DmaxKernel {
    /// Orthonormal basis of the range of `J` (columns) and the inverse
    /// square roots of the matching eigenvalues.
    range: Vec<(f64, Vec<Complex64>)>,
    kernel: Vec<Vec<Complex64>>,
}

impl DmaxKernel {
    pub fn new(choi: &HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(choi)?;
        let scale = eig.max().max(1e-300);
        let mut range = Vec::new();
        let mut kernel = Vec::new();
        for (k, &l) in eig.values.iter().enumerate() {
            if l > 1e-12 * scale {
                range.push((1.0 / l.sqrt(), eig.vector(k)));
            } else {
                kernel.push(eig.vector(k));
            }
        }
        Ok(Self { range, kernel })
    }

    /// `max{c ≥ 0 : c·m ⪯ J}` for PSD `m`.
    pub fn max_scale(&self, m: &ComplexMatrix) -> Result<f64> {
        let quad = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
            let mv = m.mat_vec(v);
            u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
        };
        let mscale = m.max_abs().max(1e-300);
        for v in &self.kernel {
            if quad(v, v).re > 1e-12 * mscale {
                return Ok(0.0);
            }
        }
        let r = self.range.len();
        let w = ComplexMatrix::from_fn(r, r, |i, j| {
            quad(&self.range[i].1, &self.range[j].1) * (self.range[i].0 * self.range[j].0)
        });
        let lmax = eig_hermitian(&HermitianMatrix::symmetrized(w))?.max();
        Ok(if lmax <= 0.0 { f64::INFINITY } else { 1.0 / lmax })
    }
}

/// `α(N) = max_σ max{c : c·σ⊗𝟙/2 ⪯ J(N)}` for a qubit-to-qubit channel,
/// searched over a grid of the closed Bloch ball and refined locally.
pub fn alpha_dmax_qubit(n: &QuantumChannel) -> Result<f64> {
    require_qubit(n, true)?;
    let kernel = DmaxKernel::new(n.choi().matrix())?;
    let half_id = ComplexMatrix::identity(2).scale(0.5);
    let f = |r: [f64; 3]| -> Result<f64> {
        let m = kron(bloch_state(r).matrix(), &half_id)?;
        kernel.max_scale(&m)
    };

    let dirs = fibonacci_sphere(GRID_POINTS / 25);
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for k in 0..25 {
        let radius = 1.0 - k as f64 / 25.0;
        for d in &dirs {
            let r = [d[0] * radius, d[1] * radius, d[2] * radius];
            let v = f(r)?;
            if v > best.0 {
                best = (v, r);
            }
        }
    }
    let project = |r: [f64; 3]| {
        let l = norm(r);
        if l > 1.0 {
            [r[0] / l, r[1] / l, r[2] / l]
        } else {
            r
        }
    };
    let axes = |_: [f64; 3]| vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let refined = pattern_search(best.1, 0.1, 1.0, axes, project, &f)?;
    Ok(refined.max(best.0))
}
