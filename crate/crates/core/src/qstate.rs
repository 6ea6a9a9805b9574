//! Density matrices over tensor factors, the qubit Bloch ball, spectral
//! decomposition and the trace distance.

use crate::error::{Error, Result};
use crate::matrixcore::{self, eig_hermitian, kron, pauli, ComplexMatrix, C64, ONE};

/// Positivity slack for eigenvalues and Bloch norms.
pub const TAU_PSD: f64 = 1e-10;
/// Allowed deviation of the trace from one.
pub const TAU_TRACE: f64 = 1e-10;
/// Default cut below which spectral weights are dropped.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector([x, y, z])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &BlochVector) -> BlochVector {
        BlochVector(std::array::from_fn(|i| self.0[i] - other.0[i]))
    }
}

/// A matrix tagged with its tensor-factor dimensions. Construction does not
/// validate; call [`DensityMatrix::validate`] where a physical state is required.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: ComplexMatrix,
    pub dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() || dims.iter().product::<usize>() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} incompatible with {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(DensityMatrix { matrix, dims })
    }

    /// Single-factor state.
    pub fn single(matrix: ComplexMatrix) -> Self {
        let d = matrix.rows();
        DensityMatrix {
            matrix,
            dims: vec![d],
        }
    }

    pub fn pure(ket: &[C64]) -> Self {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::single(ComplexMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::single(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    /// Reduced state on factor `keep`.
    pub fn marginal(&self, keep: usize) -> Result<DensityMatrix> {
        let m = matrixcore::partial_trace(&self.matrix, &self.dims, keep)?;
        Ok(DensityMatrix::single(m))
    }

    /// `tr_E ρ ⊗ tr_S ρ` for a bipartite state.
    pub fn product_of_marginals(&self) -> Result<DensityMatrix> {
        if self.dims.len() != 2 {
            return Err(Error::DimensionMismatch(
                "expected a bipartite state".into(),
            ));
        }
        Ok(self.marginal(0)?.tensor(&self.marginal(1)?))
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix.hermitian_part())?.eigenvalues)
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.matrix.hermiticity_defect();
        if !(defect <= 1e-10) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = self.matrix.trace();
        if (tr - ONE).norm() > TAU_TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()?[0];
        if min < -TAU_PSD {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

/// `(1 + a·σ)/2`.
pub fn from_bloch(a: BlochVector) -> Result<DensityMatrix> {
    let n = a.norm();
    if !(n <= 1.0 + TAU_PSD) {
        return Err(Error::NormExceeded(n));
    }
    let m = &ComplexMatrix::identity(2) + &pauli::dot(a.0);
    Ok(DensityMatrix::single(m.scale_real(0.5)))
}

pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vectors need a qubit, got dimension {}",
            rho.dim()
        )));
    }
    let comp = |p: ComplexMatrix| (&rho.matrix * &p).trace().re;
    Ok(BlochVector([
        comp(pauli::x()),
        comp(pauli::y()),
        comp(pauli::z()),
    ]))
}

/// One term `λ |φ><φ|` of a spectral decomposition.
#[derive(Debug, Clone)]
pub struct SpectralComponent {
    pub weight: f64,
    pub vector: Vec<C64>,
}

/// Eigenpairs with weight above `rank_tol`, weights renormalized to sum to one.
pub fn spectral_decompose(rho: &DensityMatrix, rank_tol: f64) -> Result<Vec<SpectralComponent>> {
    let es = eig_hermitian(&rho.matrix.hermitian_part())?;
    let mut comps: Vec<SpectralComponent> = es
        .eigenvalues
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &w)| w > rank_tol)
        .map(|(k, &w)| SpectralComponent {
            weight: w,
            vector: es.vector(k),
        })
        .collect();
    let total: f64 = comps.iter().map(|c| c.weight).sum();
    if comps.is_empty() || total <= 0.0 {
        return Err(Error::InvalidState(
            "no spectral weight above rank tolerance".into(),
        ));
    }
    for c in &mut comps {
        c.weight /= total;
    }
    Ok(comps)
}

/// `½ ‖ρ₁ − ρ₂‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dims != b.dims {
        return Err(Error::DimensionMismatch(format!(
            "states with dims {:?} and {:?}",
            a.dims, b.dims
        )));
    }
    trace_distance_matrices(&a.matrix, &b.matrix)
}

pub(crate) fn trace_distance_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = (a - b).hermitian_part();
    let es = eig_hermitian(&diff)?;
    Ok(0.5 * es.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// Common system preparations.
pub mod presets {
    use super::DensityMatrix;
    use crate::error::{Error, Result};
    use crate::matrixcore::C64;

    /// `(|0> + |1>)/√2`.
    pub fn psi_plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)])
    }

    /// `r|0> − √(1−r²)|1>`.
    pub fn psi_minus_r(r: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfDomain(format!("r = {r} outside [0, 1]")));
        }
        Ok(DensityMatrix::pure(&[
            C64::new(r, 0.0),
            C64::new(-(1.0 - r * r).sqrt(), 0.0),
        ]))
    }

    /// Pure qubit state with Bloch vector `(sin θ cos φ, sin θ sin φ, cos θ)`,
    /// i.e. `cos(θ/2)|1> + e^{-iφ} sin(θ/2)|0>` (with `σ_y` as defined here).
    pub fn bloch_pure(theta: f64, phi: f64) -> DensityMatrix {
        let up = C64::new((0.5 * theta).cos(), 0.0);
        let down = C64::from_polar((0.5 * theta).sin(), -phi);
        DensityMatrix::pure(&[down, up])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::ZERO;
    use proptest::prelude::*;

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::single(ComplexMatrix::from_real_diagonal(d))
    }

    #[test]
    fn bloch_examples() {
        let mixed = from_bloch(BlochVector::ORIGIN).unwrap();
        assert_eq!(mixed, DensityMatrix::maximally_mixed(2));
        // (0,0,1) is |1><1|, index 1 in |0>-first order
        let up = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!((&up.matrix - &diag(&[0.0, 1.0]).matrix).max_abs() < 1e-15);
        let partial = from_bloch(BlochVector::new(0.0, 0.0, 0.6)).unwrap();
        assert!((partial.matrix[(1, 1)].re - 0.8).abs() < 1e-15);
        assert!((partial.matrix[(0, 0)].re - 0.2).abs() < 1e-15);
        assert!(matches!(
            from_bloch(BlochVector::new(0.0, 0.8, 0.8)),
            Err(Error::NormExceeded(_))
        ));
    }

    #[test]
    fn to_bloch_examples() {
        let b = to_bloch(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(b.norm() < 1e-15);
        let b = to_bloch(&diag(&[0.0, 1.0])).unwrap();
        assert_eq!(b, BlochVector::new(0.0, 0.0, 1.0));
        assert!(to_bloch(&DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn spectral_examples() {
        let half =
            spectral_decompose(&DensityMatrix::maximally_mixed(2), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(half.len(), 2);
        assert!(half.iter().all(|c| (c.weight - 0.5).abs() < 1e-15));

        let rho = from_bloch(BlochVector::new(0.0, 0.0, 0.6)).unwrap();
        let comps = spectral_decompose(&rho, DEFAULT_RANK_TOL).unwrap();
        assert!((comps[0].weight - 0.8).abs() < 1e-14);
        assert!((comps[1].weight - 0.2).abs() < 1e-14);
        // leading eigenvector is |1>
        assert!((comps[0].vector[1].norm() - 1.0).abs() < 1e-14);
        assert!((comps[1].vector[0].norm() - 1.0).abs() < 1e-14);

        let pure = spectral_decompose(&presets::psi_plus(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(pure.len(), 1);
        assert!((pure[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = diag(&[1.0, 0.0]);
        let one = diag(&[0.0, 1.0]);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        let a = BlochVector::new(0.3, -0.2, 0.5);
        let b = BlochVector::new(-0.1, 0.4, 0.2);
        let d = trace_distance(&from_bloch(a).unwrap(), &from_bloch(b).unwrap()).unwrap();
        assert!((d - a.sub(&b).norm() / 2.0).abs() < 1e-14);
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn validation() {
        assert!(presets::psi_plus().validate().is_ok());
        assert!(diag(&[0.5, 0.6]).validate().is_err());
        assert!(diag(&[1.2, -0.2]).validate().is_err());
        let skew = ComplexMatrix::from_vec(2, 2, vec![ONE, ONE, ZERO, ZERO]);
        assert!(DensityMatrix::single(skew).validate().is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4), vec![2, 3]).is_err());
        assert!(presets::psi_minus_r(1.5).is_err());
    }

    #[test]
    fn bloch_pure_points_along_direction() {
        let (theta, phi) = (1.1, -0.7);
        let b = to_bloch(&presets::bloch_pure(theta, phi)).unwrap();
        let expected = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        for (got, want) in b.0.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    fn bloch_strategy() -> impl Strategy<Value = BlochVector> {
        (
            0.0f64..=1.0,
            0.0f64..std::f64::consts::PI,
            0.0f64..std::f64::consts::TAU,
        )
            .prop_map(|(r, th, ph)| {
                BlochVector::new(
                    r * th.sin() * ph.cos(),
                    r * th.sin() * ph.sin(),
                    r * th.cos(),
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn bloch_round_trip(a in bloch_strategy()) {
            let back = to_bloch(&from_bloch(a).unwrap()).unwrap();
            prop_assert!(back.sub(&a).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn trace_distance_metric_on_qubits(a in bloch_strategy(), b in bloch_strategy(), c in bloch_strategy()) {
            let (ra, rb, rc) = (from_bloch(a).unwrap(), from_bloch(b).unwrap(), from_bloch(c).unwrap());
            let ab = trace_distance(&ra, &rb).unwrap();
            let ba = trace_distance(&rb, &ra).unwrap();
            let bc = trace_distance(&rb, &rc).unwrap();
            let ac = trace_distance(&ra, &rc).unwrap();
            prop_assert!((ab - ba).abs() < 1e-14);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        }
    }
}
