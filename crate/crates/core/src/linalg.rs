//! Dense complex linear algebra for dimensions 2 through 4.
//!
//! Everything is sized for two-qubit work: stack-allocated storage, a
//! closed-form 2x2 Hermitian eigensolver, and cyclic complex Jacobi
//! sweeps for dimensions 3 and 4. No external solver is involved, so
//! results are bit-reproducible across platforms with IEEE doubles.

use num_complex::Complex64;

use crate::{Error, Result};

/// Hermiticity and trace checks pass below this tolerance.
pub const TOL_VALIDITY: f64 = 1e-12;
/// Eigendecompositions must reconstruct their input below this tolerance.
pub const TOL_RECONSTRUCT: f64 = 1e-10;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm is below this.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-14;

const MAX_DIM: usize = 4;
const MAX_JACOBI_SWEEPS: usize = 100;

/// Row-major square complex matrix of dimension 2, 3, or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "matrix dimension must be 2..=4, got {dim}"
        )))
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [Complex64::ZERO; MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        Ok(m)
    }

    /// Builds a matrix from complete rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has length {}, expected {dim}",
                    row.len()
                )));
            }
            for (j, &z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::InvalidArgument(
                        "matrix entries must be finite".into(),
                    ));
                }
                m.set(i, j, z);
            }
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j] = z;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for k in 0..self.dim * self.dim {
            out.data[k] += other.data[k];
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        let mut out = self.clone();
        for k in 0..self.dim * self.dim {
            out.data[k] -= other.data[k];
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.scale_c(Complex64::new(factor, 0.0))
    }

    pub fn scale_c(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for k in 0..self.dim * self.dim {
            out.data[k] *= factor;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [Complex64::ZERO; MAX_DIM * MAX_DIM],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch in mul_vec");
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [Complex64::ZERO; MAX_DIM * MAX_DIM],
        };
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [Complex64::ZERO; MAX_DIM * MAX_DIM],
        };
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in trace_product");
        let n = self.dim;
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        acc
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        (0..self.dim * self.dim)
            .map(|k| (self.data[k] - other.data[k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = Self::identity(self.dim).expect("valid dim");
        self.adjoint().matmul(self).max_abs_diff(&id) <= tol
    }

    /// Frobenius norm of the off-diagonal part.
    fn offdiag_norm(&self) -> f64 {
        let n = self.dim;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += self.data[i * n + j].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2).expect("dim 2");
    m.set(0, 1, Complex64::ONE);
    m.set(1, 0, Complex64::ONE);
    m
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2).expect("dim 2");
    m.set(0, 1, Complex64::new(0.0, -1.0));
    m.set(1, 0, Complex64::new(0.0, 1.0));
    m
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2).expect("dim 2");
    m.set(0, 0, Complex64::ONE);
    m.set(1, 1, -Complex64::ONE);
    m
}

/// 2x2 identity.
pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("dim 2")
}

/// Kronecker product of two 2x2 matrices. The left factor owns the first
/// qubit: out[2i+k][2j+l] = a[i][j] * b[k][l].
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "tensor expects two 2x2 matrices, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Result of a Hermitian eigendecomposition.
pub struct Eigendecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors; column k pairs with `values[k]`.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Dimension 2 is solved in closed form; dimensions 3 and 4 run cyclic
/// complex Jacobi sweeps until the off-diagonal norm falls below
/// [`JACOBI_OFFDIAG_TOL`]. The reconstruction V diag(w) V^† is checked
/// against the input to [`TOL_RECONSTRUCT`].
pub fn hermitian_eigs(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    if !m.is_hermitian(TOL_VALIDITY) {
        return Err(Error::InvalidArgument(
            "hermitian_eigs requires a Hermitian matrix".into(),
        ));
    }
    // Work on the exactly Hermitian part so roundoff in the input cannot
    // leak imaginary components onto the diagonal.
    let h = m.add(&m.adjoint()).scale(0.5);
    let (values, vectors) = if m.dim() == 2 {
        eigs_2x2(&h)
    } else {
        jacobi_eigs(&h)?
    };
    let recon = reconstruct(&values, &vectors);
    if recon.max_abs_diff(&h) > TOL_RECONSTRUCT {
        return Err(Error::Numerical(format!(
            "eigendecomposition residual {:.3e} exceeds {:.1e}",
            recon.max_abs_diff(&h),
            TOL_RECONSTRUCT
        )));
    }
    Ok(Eigendecomposition { values, vectors })
}

fn reconstruct(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let n = vectors.dim();
    let mut lambda = ComplexMatrix::zeros(n).expect("valid dim");
    for (k, &w) in values.iter().enumerate() {
        lambda.set(k, k, Complex64::new(w, 0.0));
    }
    vectors.matmul(&lambda).matmul(&vectors.adjoint())
}

/// Closed-form eigensolve for a 2x2 Hermitian matrix.
fn eigs_2x2(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let mut vectors = ComplexMatrix::zeros(2).expect("dim 2");
    if b.norm() < 1e-155 {
        // Already diagonal; order the basis vectors by eigenvalue.
        let (lo, hi, swap) = if a <= d { (a, d, false) } else { (d, a, true) };
        let (c0, c1) = if swap { (1, 0) } else { (0, 1) };
        vectors.set(0, c0, Complex64::ONE);
        vectors.set(1, c1, Complex64::ONE);
        return (vec![lo, hi], vectors);
    }
    let mid = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let lo = mid - radius;
    let hi = mid + radius;
    // (b, lambda - a) solves (H - lambda)v = 0 whenever b != 0.
    for (col, lambda) in [(0usize, lo), (1usize, hi)] {
        let v0 = b;
        let v1 = Complex64::new(lambda - a, 0.0);
        let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        vectors.set(0, col, v0 / norm);
        vectors.set(1, col, v1 / norm);
    }
    (vec![lo, hi], vectors)
}

/// Cyclic complex Jacobi sweeps with phased rotations.
fn jacobi_eigs(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n)?;
    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if a.offdiag_norm() < JACOBI_OFFDIAG_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < JACOBI_OFFDIAG_TOL * 1e-3 {
                    continue;
                }
                let phase = apq / r;
                let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let mut rot = ComplexMatrix::identity(n)?;
                rot.set(p, p, Complex64::new(c, 0.0));
                rot.set(q, q, Complex64::new(c, 0.0));
                rot.set(p, q, phase * s);
                rot.set(q, p, -phase.conj() * s);
                a = rot.adjoint().matmul(&a).matmul(&rot);
                v = v.matmul(&rot);
            }
        }
        // Kill drift accumulated over the sweep.
        a = a.add(&a.adjoint()).scale(0.5);
    }
    if !converged && a.offdiag_norm() >= JACOBI_OFFDIAG_TOL {
        return Err(Error::Numerical(
            "Jacobi sweeps failed to converge".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v.get(row, src));
        }
    }
    Ok((values, vectors))
}

/// Singular values of a real 3x3 matrix, descending.
///
/// Computed as square roots of the eigenvalues of T^T T; tiny negative
/// eigenvalues from roundoff are clamped to zero.
pub fn singular_values_3x3(t: &[[f64; 3]; 3]) -> Result<[f64; 3]> {
    for row in t {
        for &x in row {
            if !x.is_finite() {
                return Err(Error::InvalidArgument(
                    "singular_values_3x3 requires finite entries".into(),
                ));
            }
        }
    }
    let mut gram = vec![vec![0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    let eig = hermitian_eigs(&ComplexMatrix::from_real_rows(&gram)?)?;
    let mut s: Vec<f64> = eig.values.iter().map(|&w| w.max(0.0).sqrt()).collect();
    s.reverse();
    Ok([s[0], s[1], s[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn tensor_of_paulis_has_expected_entries() {
        let xz = tensor(&pauli_x(), &pauli_z()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(xz.max_abs_diff(&expected) == 0.0);

        let ii = tensor(&identity2(), &identity2()).unwrap();
        assert!(ii.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) == 0.0);
    }

    #[test]
    fn tensor_is_multiplicative() {
        // (A (x) B)(C (x) D) = AC (x) BD
        let lhs = tensor(&pauli_x(), &pauli_y())
            .unwrap()
            .matmul(&tensor(&pauli_z(), &pauli_y()).unwrap());
        let rhs = tensor(&pauli_x().matmul(&pauli_z()), &pauli_y().matmul(&pauli_y())).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn tensor_rejects_wrong_dims() {
        let m3 = ComplexMatrix::identity(3).unwrap();
        assert!(tensor(&m3, &identity2()).is_err());
    }

    #[test]
    fn eigs_sigma_z() {
        let eig = hermitian_eigs(&pauli_z()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // Column 1 carries eigenvalue +1, so it must be e0 up to phase.
        assert!((eig.vectors.get(0, 1).norm() - 1.0).abs() < 1e-14);
        assert!(eig.vectors.get(1, 1).norm() < 1e-14);
    }

    #[test]
    fn eigs_x_projector() {
        // (1 + sigma_x)/2 projects onto the +1 eigenvector of X.
        let p = identity2().add(&pauli_x()).scale(0.5);
        let eig = hermitian_eigs(&p).unwrap();
        assert!(eig.values[0].abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigs_compressed_x_vanishes() {
        // P sigma_x P for P = |0><0| is the zero matrix: spectrum (0, 0).
        let mut p = ComplexMatrix::zeros(2).unwrap();
        p.set(0, 0, Complex64::ONE);
        let m = p.matmul(&pauli_x()).matmul(&p);
        let eig = hermitian_eigs(&m).unwrap();
        assert!(eig.values[0].abs() < 1e-14 && eig.values[1].abs() < 1e-14);
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = tensor(&pauli_x(), &pauli_z()).unwrap();
        let b = tensor(&pauli_x(), &identity2()).unwrap();
        let direct = a.matmul(&b).trace();
        assert!((a.trace_product(&b) - direct).norm() < 1e-14);
    }

    #[test]
    fn eigs_complex_2x2() {
        let h = ComplexMatrix::from_rows(&[
            vec![re(1.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), re(1.0)],
        ])
        .unwrap();
        let eig = hermitian_eigs(&h).unwrap();
        assert!(eig.values[0].abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        for k in 0..2 {
            let col: Vec<Complex64> = (0..2).map(|i| eig.vectors.get(i, k)).collect();
            let hv = h.mul_vec(&col);
            for i in 0..2 {
                assert!((hv[i] - col[i] * re(eig.values[k])).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn eigs_bell_diagonal_mixture() {
        // 3/4 phi+ + 1/4 phi-: eigenvalues (0, 0, 1/4, 3/4).
        let mut rho = ComplexMatrix::zeros(4).unwrap();
        rho.set(0, 0, re(0.5));
        rho.set(3, 3, re(0.5));
        rho.set(0, 3, re(0.25));
        rho.set(3, 0, re(0.25));
        let eig = hermitian_eigs(&rho).unwrap();
        let expected = [0.0, 0.0, 0.25, 0.75];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn eigs_3x3_block() {
        let h = ComplexMatrix::from_real_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ])
        .unwrap();
        let eig = hermitian_eigs(&h).unwrap();
        let expected = [1.0, 3.0, 5.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eigs_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![re(0.0), re(1.0)],
            vec![re(0.0), re(0.0)],
        ])
        .unwrap();
        assert!(hermitian_eigs(&m).is_err());
    }

    #[test]
    fn singular_values_known_triples() {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let s = singular_values_3x3(&id).unwrap();
        for x in s {
            assert!((x - 1.0).abs() < 1e-12);
        }

        let half = 3.0f64.sqrt() / 2.0;
        let t = [[half, 0.0, 0.0], [0.0, -half, 0.0], [0.0, 0.0, 1.0]];
        let s = singular_values_3x3(&t).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!((s[1] - half).abs() < 1e-12);
        assert!((s[2] - half).abs() < 1e-12);

        let t = [[0.5, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, 1.0]];
        let s = singular_values_3x3(&t).unwrap();
        assert_eq!(s, [1.0, 0.5, 0.5]);

        let z = [[0.0; 3]; 3];
        assert_eq!(singular_values_3x3(&z).unwrap(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn singular_values_rotated_diag() {
        // Rotating a diagonal matrix leaves singular values unchanged.
        let (c_, s_) = (0.6, 0.8);
        let rot = [[c_, -s_, 0.0], [s_, c_, 0.0], [0.0, 0.0, 1.0]];
        let diag = [0.9, 0.4, 0.2];
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = rot[i][j] * diag[j];
            }
        }
        let s = singular_values_3x3(&t).unwrap();
        assert!((s[0] - 0.9).abs() < 1e-12);
        assert!((s[1] - 0.4).abs() < 1e-12);
        assert!((s[2] - 0.2).abs() < 1e-12);
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
    }

    fn arb_matrix2() -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(arb_c(), 4).prop_map(|v| {
            ComplexMatrix::from_rows(&[vec![v[0], v[1]], vec![v[2], v[3]]]).unwrap()
        })
    }

    fn arb_hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(arb_c(), dim * dim).prop_map(move |v| {
            let rows: Vec<Vec<Complex64>> = (0..dim)
                .map(|i| (0..dim).map(|j| v[i * dim + j]).collect())
                .collect();
            let m = ComplexMatrix::from_rows(&rows).unwrap();
            m.add(&m.adjoint()).scale(0.5)
        })
    }

    proptest! {
        #[test]
        fn tensor_bilinear(a in arb_matrix2(), b in arb_matrix2(), x in arb_matrix2(), s in -2.0f64..2.0) {
            let lhs = tensor(&a.add(&x.scale(s)), &b).unwrap();
            let rhs = tensor(&a, &b).unwrap().add(&tensor(&x, &b).unwrap().scale(s));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
            let lhs = tensor(&a, &b.add(&x.scale(s))).unwrap();
            let rhs = tensor(&a, &b).unwrap().add(&tensor(&a, &x).unwrap().scale(s));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }

        #[test]
        fn eigs_reconstruct_2x2(h in arb_hermitian(2)) {
            let eig = hermitian_eigs(&h).unwrap();
            let recon = {
                let mut lambda = ComplexMatrix::zeros(2).unwrap();
                lambda.set(0, 0, re(eig.values[0]));
                lambda.set(1, 1, re(eig.values[1]));
                eig.vectors.matmul(&lambda).matmul(&eig.vectors.adjoint())
            };
            prop_assert!(recon.max_abs_diff(&h) < TOL_RECONSTRUCT);
            prop_assert!(eig.vectors.is_unitary(1e-12));
        }

        #[test]
        fn eigs_reconstruct_4x4(h in arb_hermitian(4)) {
            let eig = hermitian_eigs(&h).unwrap();
            let mut lambda = ComplexMatrix::zeros(4).unwrap();
            for k in 0..4 {
                lambda.set(k, k, re(eig.values[k]));
            }
            let recon = eig.vectors.matmul(&lambda).matmul(&eig.vectors.adjoint());
            prop_assert!(recon.max_abs_diff(&h) < TOL_RECONSTRUCT);
            prop_assert!(eig.vectors.is_unitary(1e-12));
            for k in 1..4 {
                prop_assert!(eig.values[k] >= eig.values[k - 1]);
            }
        }

        #[test]
        fn eigs_unitarily_invariant(h in arb_hermitian(4), g in arb_hermitian(4)) {
            // Eigenvectors of g form a unitary; conjugation must not move the spectrum.
            let u = hermitian_eigs(&g).unwrap().vectors;
            let rotated = u.matmul(&h).matmul(&u.adjoint());
            let base = hermitian_eigs(&h).unwrap().values;
            let moved = hermitian_eigs(&rotated).unwrap().values;
            for (x, y) in base.iter().zip(moved.iter()) {
                prop_assert!((x - y).abs() < TOL_RECONSTRUCT);
            }
        }
    }
}
