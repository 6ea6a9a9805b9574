#![allow(dead_code)]

use dephaselab_core::dephasing::{DephasingModel, QubitModelParams};
use dephaselab_core::matrixcore::{eig_hermitian, ComplexMatrix, C64};
use dephaselab_core::qstate::DensityMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; one sample is plenty here
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn complex_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(gauss(rng), gauss(rng)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data)
}

pub fn hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    complex_gaussian(rng, n, n).hermitian_part()
}

pub fn unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let h = hermitian(rng, n);
    dephaselab_core::matrixcore::expm_hermitian(&h, 1.0).unwrap()
}

pub fn ket(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| C64::new(gauss(rng), gauss(rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random state with Ginibre rank `rank`.
pub fn density(rng: &mut ChaCha8Rng, dims: &[usize], rank: usize) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = complex_gaussian(rng, n, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part(), dims.to_vec()).unwrap()
}

pub fn qubit_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let rank = rng.gen_range(1..=2);
    density(rng, &[2], rank)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v = [gauss(rng), gauss(rng), gauss(rng)];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn ball_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let u = unit_vector(rng);
    let r: f64 = rng.gen::<f64>().cbrt();
    [r * u[0], r * u[1], r * u[2]]
}

pub fn qubit_params(rng: &mut ChaCha8Rng) -> QubitModelParams {
    QubitModelParams::new(ball_vector(rng), unit_vector(rng), rng.gen_range(0.3..2.0))
}

/// A partner with the same `g` and the same `α·η`, otherwise random.
pub fn equivalent_partner(rng: &mut ChaCha8Rng, p: &QubitModelParams) -> QubitModelParams {
    let k = p.alpha.dot(&p.eta);
    let eta = unit_vector(rng);
    let w = unit_vector(rng);
    // component of w orthogonal to eta
    let wd = w[0] * eta[0] + w[1] * eta[1] + w[2] * eta[2];
    let mut perp = [w[0] - wd * eta[0], w[1] - wd * eta[1], w[2] - wd * eta[2]];
    let pn = (perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt();
    let room = (1.0 - k * k).max(0.0).sqrt() * rng.gen::<f64>();
    for x in &mut perp {
        *x *= room / pn;
    }
    QubitModelParams::new(
        [
            k * eta[0] + perp[0],
            k * eta[1] + perp[1],
            k * eta[2] + perp[2],
        ],
        eta,
        p.g,
    )
}

/// Generic model: random `H_E`, random couplings and a random environment
/// state. Non-commuting with probability one.
pub fn general_model(rng: &mut ChaCha8Rng, d_s: usize, d_e: usize) -> DephasingModel {
    let h = hermitian(rng, d_e).scale_real(0.5);
    let couplings = (0..d_s)
        .map(|_| hermitian(rng, d_e).scale_real(0.5))
        .collect();
    let rank = rng.gen_range(1..=d_e);
    DephasingModel::new(h, couplings, density(rng, &[d_e], rank)).unwrap()
}

/// Commuting model: everything diagonal in one random basis, `ρ_E` generic.
pub fn commuting_model(rng: &mut ChaCha8Rng, d_s: usize, d_e: usize) -> DephasingModel {
    let u = unitary(rng, d_e);
    let diag = |rng: &mut ChaCha8Rng| {
        let d: Vec<f64> = (0..d_e).map(|_| rng.gen_range(-1.0..1.0)).collect();
        &(&u * &ComplexMatrix::from_real_diagonal(&d)) * &u.adjoint()
    };
    let h = diag(rng).hermitian_part();
    let couplings = (0..d_s).map(|_| diag(rng).hermitian_part()).collect();
    let rank = rng.gen_range(1..=d_e);
    DephasingModel::new(h, couplings, density(rng, &[d_e], rank)).unwrap()
}

pub fn max_eigenvalue(m: &ComplexMatrix) -> f64 {
    *eig_hermitian(m).unwrap().eigenvalues.last().unwrap()
}
