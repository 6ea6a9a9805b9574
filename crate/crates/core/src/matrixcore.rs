//! Dense complex linear algebra for the small operators used throughout the
//! crate: Hermitian eigendecomposition by cyclic Jacobi rotations, unitary
//! exponentials, Kronecker products, partial trace/transpose and a
//! fixed-step time-ordered propagator.
//!
//! Composite indices are row-major over the factor list: for factors
//! `[d_S, d_E]` the basis state `|i_S, i_E>` sits at `i_S * d_E + i_E`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical tolerances shared by the kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum `‖H − H†‖` accepted as Hermitian.
    pub hermitian: f64,
    /// Relative off-diagonal norm at which Jacobi sweeps stop.
    pub eigen: f64,
    /// Maximum `‖U†U − 1‖` accepted as unitary.
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            eigen: 1e-12,
            unitary: 1e-12,
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), m, "ragged rows");
                r.iter().copied()
            })
            .collect();
        ComplexMatrix {
            rows: n,
            cols: m,
            data,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `|v><w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (r, a) in v.iter().enumerate() {
            for (c, b) in w.iter().enumerate() {
                m[(r, c)] = a * b.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius norm of `A − A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Frobenius norm of `U†U − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self - Self::identity(self.rows)).frobenius_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// `<v| self |w>`.
    pub fn sandwich(&self, v: &[C64], w: &[C64]) -> C64 {
        let aw = self.mul_vec(w);
        v.iter().zip(&aw).map(|(a, b)| a.conj() * b).sum()
    }

    /// Hermitian part `(A + A†)/2`; used to scrub round-off after products.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    fn checked_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

/// Pauli matrices in the `|0>, |1>` index order, with `σ_z = |1><1| − |0><0|`
/// so that the Bloch vector `(0, 0, 1)` is the state `|1>`.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![-ONE, ZERO, ZERO, ONE])
    }

    /// `v·σ` for a real 3-vector.
    pub fn dot(v: [f64; 3]) -> ComplexMatrix {
        let [a, b, c] = v;
        ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(-c, 0.0),
                C64::new(a, -b),
                C64::new(a, b),
                C64::new(c, 0.0),
            ],
        )
    }
}

/// Eigenvalues (ascending) and the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `U f(Λ) U†`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for r in 0..n {
                let a = u[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += a * u[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| C64::new(l, 0.0))
    }
}

const MAX_SWEEPS: usize = 100;

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenSystem> {
    eig_hermitian_with(h, &Tolerances::default())
}

/// Cyclic complex Jacobi: each pivot is first made real by a phase on column
/// `q`, then annihilated by a real plane rotation.
pub fn eig_hermitian_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    h.checked_square()?;
    let defect = h.hermiticity_defect();
    if !(defect <= tol.hermitian) {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += a[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = scale == 0.0;
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let off = off_norm(&a);
        if converged || off <= f64::EPSILON * scale || off >= previous {
            converged = off <= tol.eigen * scale;
            break;
        }
        previous = off;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // G restricted to (p, q) = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let gpp = C64::new(cs, 0.0);
                let gpq = C64::new(sn, 0.0);
                let gqp = -phase.conj() * sn;
                let gqq = phase.conj() * cs;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(−iθH)` for Hermitian `H`.
pub fn expm_hermitian(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let es = eig_hermitian(h)?;
    Ok(es.apply(|l| C64::from_polar(1.0, -theta * l)))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

fn check_dims(m: &ComplexMatrix, dims: &[usize], factor: usize) -> Result<()> {
    m.checked_square()?;
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "factor dimensions {dims:?} do not multiply to {}",
            m.dim()
        )));
    }
    if factor >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "factor index {factor} out of range for {} factors",
            dims.len()
        )));
    }
    Ok(())
}

/// Splits a composite index into (outer, factor, inner) parts for `factor`.
fn split_index(idx: usize, dims: &[usize], factor: usize) -> (usize, usize, usize) {
    let inner: usize = dims[factor + 1..].iter().product();
    let d = dims[factor];
    (idx / (inner * d), (idx / inner) % d, idx % inner)
}

/// Reduces `m` onto the single factor `keep`, tracing out all others.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    check_dims(m, dims, keep)?;
    let d = dims[keep];
    let inner: usize = dims[keep + 1..].iter().product();
    let outer: usize = dims[..keep].iter().product();
    let mut out = ComplexMatrix::zeros(d, d);
    for o in 0..outer {
        for i in 0..inner {
            for r in 0..d {
                let row = (o * d + r) * inner + i;
                for c in 0..d {
                    let col = (o * d + c) * inner + i;
                    out[(r, c)] += m[(row, col)];
                }
            }
        }
    }
    Ok(out)
}

/// Transposes the `factor` tensor slot of `m`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: &[usize],
    factor: usize,
) -> Result<ComplexMatrix> {
    check_dims(m, dims, factor)?;
    let n = m.dim();
    let inner: usize = dims[factor + 1..].iter().product();
    let d = dims[factor];
    let mut out = ComplexMatrix::zeros(n, n);
    for row in 0..n {
        let (ro, rf, ri) = split_index(row, dims, factor);
        for col in 0..n {
            let (co, cf, ci) = split_index(col, dims, factor);
            let new_row = (ro * d + cf) * inner + ri;
            let new_col = (co * d + rf) * inner + ci;
            out[(new_row, new_col)] = m[(row, col)];
        }
    }
    Ok(out)
}

/// Closest unitary in Frobenius norm, `U (U†U)^{-1/2}`.
pub fn polar_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = (&u.adjoint() * u).hermitian_part();
    let es = eig_hermitian(&gram)?;
    if es.eigenvalues[0] <= 0.0 {
        return Err(Error::NoConvergence(0));
    }
    let inv_sqrt = es.apply(|l| C64::new(1.0 / l.sqrt(), 0.0));
    Ok(u * &inv_sqrt)
}

/// Integrates `dV/ds = −i B(s) V`, `V(0) = 1`, over `[0, t]` with classical
/// RK4 and `steps` equal steps, then projects the result back onto the
/// unitary group.
pub fn time_ordered_propagator<F>(generator: F, t: f64, steps: usize) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
{
    time_ordered_propagator_with(generator, t, steps, &Tolerances::default())
}

pub fn time_ordered_propagator_with<F>(
    generator: F,
    t: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> ComplexMatrix,
{
    if steps == 0 {
        return Err(Error::OutOfDomain(
            "propagator needs at least one step".into(),
        ));
    }
    let sample = |s: f64| -> Result<ComplexMatrix> {
        let b = generator(s);
        let defect = b.hermiticity_defect();
        if !(defect <= tol.hermitian) || !b.is_finite() {
            return Err(Error::NonHermitianGenerator { time: s, defect });
        }
        Ok(b.scale(-I))
    };
    let b0 = generator(0.0);
    b0.checked_square()?;
    let n = b0.dim();
    let h = t / steps as f64;
    let mut v = ComplexMatrix::identity(n);
    let mut k_start = sample(0.0)?;
    for step in 0..steps {
        let s = step as f64 * h;
        let mid = sample(s + 0.5 * h)?;
        let end = sample(s + h)?;
        let k1 = &k_start * &v;
        let k2 = &mid * &(&v + &k1.scale_real(0.5 * h));
        let k3 = &mid * &(&v + &k2.scale_real(0.5 * h));
        let k4 = &end * &(&v + &k3.scale_real(h));
        let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
        v = &v + &incr.scale_real(h / 6.0);
        k_start = end;
    }
    polar_unitary(&v)
}
