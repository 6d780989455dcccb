//! Dense symmetric eigensolver and matrix-exponential oracle.
//!
//! [`eigensolve`] runs cyclic Jacobi rotations: each rotation zeroes one
//! off-diagonal pair, and sweeps repeat until the off-diagonal Frobenius mass
//! drops below `1e-14 ‖A‖_F`. The accumulated rotations are the eigenvectors.
//!
//! [`expm_apply`] evaluates `e^{-tA} v` by scaling and squaring a truncated
//! Taylor series. It never touches the eigensolver, which makes it usable as
//! an independent check of the eigen-sum heat kernel.

use nalgebra::{DMatrix, DVector};

use crate::operators::DirichletMatrix;
use crate::{HeatError, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;
const SYMMETRY_TOL: f64 = 1e-13;

/// `A = Φ diag(λ) Φᵀ` with ascending eigenvalues and orthonormal columns `Φ_j`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    residual: f64,
    sweeps: usize,
}

impl SpectralDecomposition {
    /// `λ₀ ≤ λ₁ ≤ ... ≤ λ_n`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `j` is the eigenvector of `λ_j`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> DVector<f64> {
        self.eigenvectors.column(j).into_owned()
    }

    /// `max_j ‖A Φ_j - λ_j Φ_j‖`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_state_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `max |ΦᵀΦ - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// `Φ diag(g(λ)) Φᵀ`.
    pub fn spectral_function(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let weights = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| g(l)));
        let scaled = &self.eigenvectors * DMatrix::from_diagonal(&weights);
        scaled * self.eigenvectors.transpose()
    }
}

/// Eigendecomposition of a Dirichlet Laplacian.
pub fn eigensolve(matrix: &DirichletMatrix) -> Result<SpectralDecomposition> {
    eigensolve_symmetric(matrix.matrix())
}

fn frobenius_off_diagonal(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on any real symmetric matrix.
///
/// Output is deterministic: rotations run in a fixed row-by-row order,
/// eigenvalues are sorted ascending, and every eigenvector is signed so that
/// its first component larger than `1e-12` in magnitude is positive.
pub fn eigensolve_symmetric(input: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    let n = input.nrows();
    if n != input.ncols() {
        return Err(HeatError::Contract(format!("matrix is {}x{}, not square", n, input.ncols())));
    }
    if n == 0 {
        return Err(HeatError::Contract("empty matrix".into()));
    }
    let scale = input.amax();
    for i in 0..n {
        for j in 0..i {
            if (input[(i, j)] - input[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(HeatError::Contract(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }

    // row-major working copies
    let mut a: Vec<f64> = (0..n * n).map(|k| input[(k / n, k % n)]).collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = input.norm();
    let target = OFF_DIAGONAL_TOL * norm;

    let mut sweeps = 0;
    loop {
        if frobenius_off_diagonal(&a, n) <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            let (vals, vecs) = unpack(&a, &v, n);
            return Err(HeatError::NoConvergence {
                sweeps,
                residual: residual(input, &vals, &vecs),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // negligible against both diagonals: drop it
                if sweeps > 4 && app.abs() + 100.0 * apq.abs() == app.abs() && aqq.abs() + 100.0 * apq.abs() == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let (eigenvalues, eigenvectors) = unpack(&a, &v, n);
    let residual = residual(input, &eigenvalues, &eigenvectors);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
        sweeps,
    })
}

/// Sorted eigenpairs with the sign convention applied.
fn unpack(a: &[f64], v: &[f64], n: usize) -> (Vec<f64>, DMatrix<f64>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &j) in order.iter().enumerate() {
        let sign = (0..n)
            .map(|k| v[k * n + j])
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, f64::signum);
        for k in 0..n {
            vectors[(k, col)] = sign * v[k * n + j];
        }
    }
    (eigenvalues, vectors)
}

fn residual(a: &DMatrix<f64>, eigenvalues: &[f64], eigenvectors: &DMatrix<f64>) -> f64 {
    let av = a * eigenvectors;
    eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &l)| (av.column(j) - eigenvectors.column(j) * l).norm())
        .fold(0.0, f64::max)
}

/// `e^{-t A}` for a square matrix `A`, by scaling and squaring.
///
/// Picks the smallest `s` with `‖tA‖₁ / 2^s ≤ 1/2`, sums the Taylor series of
/// `e^{-tA/2^s}` until the next term is below `1e-18` relative to the partial
/// sum, then squares `s` times.
pub fn expm_negative(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    if !(t >= 0.0) {
        return Err(HeatError::Contract(format!("time must be nonnegative, got {t}")));
    }
    let n = a.nrows();
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let norm1 = (0..n).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max) * t;
    let mut s = 0u32;
    while norm1 / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let x = a * (-t / 2f64.powi(s as i32));
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..200 {
        term = &term * &x / k as f64;
        sum += &term;
        if term.amax() <= 1e-18 * sum.amax() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `e^{-t Δ_U} v` through [`expm_negative`]. Returns `v` unchanged at `t = 0`.
pub fn expm_apply(matrix: &DirichletMatrix, t: f64, v: &[f64]) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(HeatError::Contract(format!("time must be nonnegative, got {t}")));
    }
    if v.len() != matrix.dim() {
        return Err(HeatError::Contract(format!(
            "vector has length {}, matrix dimension is {}",
            v.len(),
            matrix.dim()
        )));
    }
    if t == 0.0 {
        return Ok(v.to_vec());
    }
    let e = expm_negative(matrix.matrix(), t)?;
    Ok((e * DVector::from_column_slice(v)).iter().copied().collect())
}
