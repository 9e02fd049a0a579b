//! Dense complex matrix helpers: Hermitian eigendecompositions with sorted
//! spectra, SVD-based pseudoinverses, rank and orthonormalization utilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Hermitian part (m + m*)/2.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn fro_norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// Frobenius distance between two matrices of equal shape.
pub fn fro_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// nonincreasing and eigenvector columns permuted to match.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// V f(Lambda) V*.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (j, lam) in self.values.iter().enumerate() {
            let w = cr(f(*lam));
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Columns whose eigenvalue satisfies the predicate.
    pub fn select_vectors(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let cols: Vec<usize> = (0..self.dim()).filter(|&j| keep(self.values[j])).collect();
        let n = self.dim();
        let mut out = CMatrix::zeros(n, cols.len());
        for (k, &j) in cols.iter().enumerate() {
            out.set_column(k, &self.vectors.column(j));
        }
        out
    }
}

/// Symmetrize (internally) and eigendecompose. The input is expected to be
/// Hermitian up to rounding; the symmetrization here only scrubs that noise.
///
/// The decomposition is a cyclic complex Jacobi iteration: each sweep zeroes
/// every off-diagonal entry with an exact unitary plane rotation and the
/// off-diagonal mass decays quadratically once small. Jacobi keeps eigenpair
/// residuals at the rounding floor, which the rank cutoffs downstream rely on.
pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    let n = m.nrows();
    if n == 0 {
        return Ok(HermEig {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let mut a = hermitian_part(m);
    let mut vectors = CMatrix::identity(n, n);
    let scale = fro_norm(&a);
    if scale == 0.0 {
        return Ok(HermEig {
            values: vec![0.0; n],
            vectors,
        });
    }
    let target = f64::EPSILON * scale;
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let beta_abs = beta.norm();
                if beta_abs <= f64::EPSILON * target.max(f64::MIN_POSITIVE) {
                    continue;
                }
                let phase = beta / beta_abs;
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * beta_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_phase = phase.scale(s);
                // Columns p and q of A and of the accumulated vectors.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) - s_phase.conj() * akq;
                    a[(k, q)] = s_phase * akp + akq.scale(c);
                    let vkp = vectors[(k, p)];
                    let vkq = vectors[(k, q)];
                    vectors[(k, p)] = vkp.scale(c) - s_phase.conj() * vkq;
                    vectors[(k, q)] = s_phase * vkp + vkq.scale(c);
                }
                // Rows p and q by conjugate symmetry.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) - s_phase * aqk;
                    a[(q, k)] = s_phase.conj() * apk + aqk.scale(c);
                }
                // Exact zero on the rotated pair; keep the diagonal real.
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = Vec::with_capacity(n);
    let mut sorted_vectors = CMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        let v = a[(j, j)].re;
        if !v.is_finite() {
            return Err(Error::EigenFailure);
        }
        values.push(v);
        sorted_vectors.set_column(k, &vectors.column(j));
    }
    Ok(HermEig {
        values,
        vectors: sorted_vectors,
    })
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eig_h(m: &CMatrix) -> Result<f64> {
    let eig = herm_eig(m)?;
    Ok(eig.values.last().copied().unwrap_or(0.0))
}

/// How far `a <= b` fails in PSD order: max(0, -min eig(b - a)).
pub fn psd_order_defect(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok((-min_eig_h(&(b - a))?).max(0.0))
}

/// Thin SVD with `u` and `v` (not v*) columns paired to `singular_values`,
/// sorted nonincreasing.
pub struct SvdParts {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

/// Relative floor below which a singular value computed through the Gram
/// matrix is rounding noise and is truncated to exactly zero. Squaring the
/// matrix squares the condition, so resolution below sqrt(eps) is not real.
pub const GRAM_SV_FLOOR_REL: f64 = 2.4e-7;

/// SVD through the Hermitian eigendecomposition of the smaller Gram matrix:
/// the right vectors are its eigenvectors, the singular values the square
/// roots of its eigenvalues, and the left vectors m v / sigma with one
/// modified Gram-Schmidt pass to scrub the amplified rounding drift.
pub fn svd_parts(m: &CMatrix) -> Result<SvdParts> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(SvdParts {
            u: CMatrix::zeros(m.nrows(), 0),
            singular_values: Vec::new(),
            v: CMatrix::zeros(m.ncols(), 0),
        });
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows < cols {
        let parts = svd_parts(&m.adjoint())?;
        return Ok(SvdParts {
            u: parts.v,
            singular_values: parts.singular_values,
            v: parts.u,
        });
    }
    let gram = m.adjoint() * m;
    let eig = herm_eig(&gram)?;
    let lam_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let floor = GRAM_SV_FLOOR_REL * lam_max.sqrt();
    let mut singular_values = Vec::with_capacity(cols);
    let mut u = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        let sigma = eig.values[j].max(0.0).sqrt();
        let sigma = if sigma > floor { sigma } else { 0.0 };
        singular_values.push(sigma);
        if sigma > 0.0 {
            let col = (m * eig.vectors.column(j)).unscale(sigma);
            u.set_column(j, &col);
        }
    }
    for j in 0..cols {
        if singular_values[j] == 0.0 {
            continue;
        }
        for i in 0..j {
            if singular_values[i] == 0.0 {
                continue;
            }
            let overlap = u.column(i).dotc(&u.column(j));
            let correction = u.column(i) * overlap;
            let mut col_j = u.column_mut(j);
            col_j -= correction;
        }
        let norm = u.column(j).norm();
        if norm > 0.0 {
            let mut col_j = u.column_mut(j);
            col_j /= cr(norm);
        }
    }
    Ok(SvdParts {
        u,
        singular_values,
        v: eig.vectors,
    })
}

/// Largest singular value; zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let parts = svd_parts(m)?;
    Ok(parts
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max))
}

/// Numerical rank at a relative singular-value cutoff.
pub fn rank_at(m: &CMatrix, rel_tol: f64) -> Result<usize> {
    rank_at_scaled(m, rel_tol, 0.0)
}

/// Numerical rank with the cutoff measured against `max(sigma_max, scale)`.
/// Matrices that are rounding noise around zero need the scale of the
/// computation they came from, not their own.
pub fn rank_at_scaled(m: &CMatrix, rel_tol: f64, scale: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sv = svd_parts(m)?.singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let cut = rel_tol * max.max(scale);
    Ok(sv.iter().filter(|&&s| s > cut).count())
}

/// Orthonormal basis of the column span: left singular vectors above the
/// relative cutoff. A (numerically) zero matrix yields zero columns.
pub fn orthonormal_cols(m: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    orthonormal_cols_scaled(m, rel_tol, 0.0)
}

/// Orthonormal column-span basis with the cutoff measured against
/// `max(sigma_max, scale)`.
pub fn orthonormal_cols_scaled(m: &CMatrix, rel_tol: f64, scale: f64) -> Result<CMatrix> {
    let n = m.nrows();
    if n == 0 || m.ncols() == 0 {
        return Ok(CMatrix::zeros(n, 0));
    }
    let parts = svd_parts(m)?;
    let max = parts
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let cut = rel_tol * max.max(scale);
    let cols: Vec<usize> = (0..parts.singular_values.len())
        .filter(|&j| parts.singular_values[j] > cut && max > 0.0)
        .collect();
    let mut out = CMatrix::zeros(n, cols.len());
    for (k, &j) in cols.iter().enumerate() {
        out.set_column(k, &parts.u.column(j));
    }
    Ok(out)
}

/// Cholesky factorization A = L L* of a Hermitian positive definite matrix;
/// the factor is lower triangular. Fails when a pivot is not positive.
pub fn cholesky_factor(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotInvertible);
        }
        let djj = d.sqrt();
        l[(j, j)] = cr(djj);
        for i in (j + 1)..n {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc.unscale(djj);
        }
    }
    Ok(l)
}

/// Inverse of a Hermitian positive definite matrix through its Cholesky
/// factor (forward and backward substitution on identity columns).
pub fn hpd_inverse(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let l = cholesky_factor(m)?;
    let mut inv = CMatrix::zeros(n, n);
    for col in 0..n {
        // Forward solve L y = e_col.
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = if i == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in 0..i {
                acc -= l[(i, k)] * y[k];
            }
            y[i] = acc / l[(i, i)];
        }
        // Backward solve L* x = y.
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in (i + 1)..n {
                acc -= l[(k, i)].conj() * x[k];
            }
            x[i] = acc / l[(i, i)];
        }
        for i in 0..n {
            inv[(i, col)] = x[i];
        }
    }
    Ok(inv)
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pinv(m: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(CMatrix::zeros(m.ncols(), m.nrows()));
    }
    let parts = svd_parts(m)?;
    let max = parts
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let cut = rel_tol * max;
    let k = parts.singular_values.len();
    let mut scaled = parts.v.clone();
    for j in 0..k {
        let s = parts.singular_values[j];
        let w = if s > cut && max > 0.0 { cr(1.0 / s) } else { cr(0.0) };
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= w;
        }
    }
    Ok(scaled * parts.u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn herm_eig_sorts_descending_complex() {
        // Hermitian with a genuinely complex off-diagonal entry.
        let m = CMatrix::from_row_slice(2, 2, &[cr(2.0), c(0.0, 1.0), c(0.0, -1.0), cr(2.0)]);
        let eig = herm_eig(&m).unwrap();
        assert_relative_eq!(eig.values[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(eig.values[1], 1.0, epsilon = 1e-12);
        let rebuilt = eig.apply_fn(|x| x);
        assert!(fro_dist(&rebuilt, &m) < 1e-12);
    }

    #[test]
    fn pinv_of_diagonal_with_kernel() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(4.0), cr(0.0), cr(0.0), cr(0.0)]);
        let p = pinv(&m, 1e-12).unwrap();
        assert_relative_eq!(p[(0, 0)].re, 0.25, epsilon = 1e-14);
        assert_relative_eq!(p[(1, 1)].re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn orthonormal_cols_of_zero_is_empty() {
        let m = CMatrix::zeros(3, 2);
        let q = orthonormal_cols(&m, 1e-12).unwrap();
        assert_eq!(q.ncols(), 0);
        assert_eq!(rank_at(&m, 1e-12).unwrap(), 0);
    }

    #[test]
    fn op_norm_matches_hand_value() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(3.0), cr(0.0), cr(4.0), cr(0.0)]);
        assert_relative_eq!(op_norm(&m).unwrap(), 5.0, epsilon = 1e-12);
    }
}
