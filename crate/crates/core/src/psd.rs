//! Hermitian/PSD matrix calculus: validated construction with cached spectra,
//! spectral square roots and partial inverses, range bases, orthonormal
//! subspace frames, principal angles, and fundamental symmetries.

use num_complex::Complex64;

use crate::cmat::{
    cr, fro_norm, herm_eig, orthonormal_cols, rank_at, svd_parts, CMatrix, HermEig,
};
use crate::error::{Error, Result};
use crate::tol::{ToleranceContext, MAX_ASYMMETRY_REL};

/// Dense Hermitian positive-semidefinite operator with cached spectral data.
///
/// Construction symmetrizes the input, eigendecomposes it once, clamps tiny
/// negative eigenvalues per the context, and rejects anything genuinely
/// indefinite or too asymmetric. All downstream operations consume the cache,
/// so rank decisions are deterministic given the same input bytes and context.
#[derive(Debug, Clone)]
pub struct PsdOperator {
    mat: CMatrix,
    eig: HermEig,
    ctx: ToleranceContext,
}

impl PsdOperator {
    /// Validate and build from a raw square complex matrix.
    pub fn new(raw: CMatrix, ctx: ToleranceContext) -> Result<Self> {
        Self::new_with_scale(raw, ctx, 0.0)
    }

    /// Like `new`, but the clamp and symmetrization gates are measured
    /// against `max(own size, scale)`. Derived quantities (Schur complements,
    /// sandwiches) that are rounding noise around zero carry the scale of the
    /// operator they came from, not their own.
    pub fn new_with_scale(raw: CMatrix, ctx: ToleranceContext, scale: f64) -> Result<Self> {
        if raw.nrows() != raw.ncols() {
            return Err(Error::NotSquare {
                rows: raw.nrows(),
                cols: raw.ncols(),
            });
        }
        let herm = (&raw + raw.adjoint()).scale(0.5);
        let mut eig = herm_eig(&herm)?;
        let lam_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
        let clamp = ctx.psd_clamp_tol * lam_max.max(scale);
        if let Some(&worst) = eig.values.last() {
            if worst < -clamp {
                return Err(Error::NotPsd {
                    eigenvalue: worst,
                    clamp,
                });
            }
        }
        for v in &mut eig.values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let size = fro_norm(&raw).max(scale);
        let asymmetry = fro_norm(&(&raw - &herm));
        if size > 0.0 && asymmetry > MAX_ASYMMETRY_REL * size {
            return Err(Error::NotHermitian {
                asymmetry: asymmetry / size,
            });
        }
        Ok(Self {
            mat: herm,
            eig,
            ctx,
        })
    }

    /// Real diagonal PSD matrix.
    pub fn from_diagonal(diag: &[f64], ctx: ToleranceContext) -> Result<Self> {
        let n = diag.len();
        let m = CMatrix::from_fn(n, n, |i, j| if i == j { cr(diag[i]) } else { cr(0.0) });
        Self::new(m, ctx)
    }

    pub fn zero(n: usize, ctx: ToleranceContext) -> Self {
        Self::new(CMatrix::zeros(n, n), ctx).expect("zero matrix is PSD")
    }

    pub fn identity(n: usize, ctx: ToleranceContext) -> Self {
        Self::new(CMatrix::identity(n, n), ctx).expect("identity is PSD")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn ctx(&self) -> ToleranceContext {
        self.ctx
    }

    /// Cached eigenvalues, nonincreasing, clamped to be nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }

    /// Cached orthonormal eigenvectors, columns paired with `eigenvalues`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eig.vectors
    }

    pub fn lambda_max(&self) -> f64 {
        self.eig.values.first().copied().unwrap_or(0.0)
    }

    /// Operator norm (largest eigenvalue).
    pub fn norm(&self) -> f64 {
        self.lambda_max()
    }

    pub fn fro_norm(&self) -> f64 {
        fro_norm(&self.mat)
    }

    fn rank_cutoff(&self) -> f64 {
        self.ctx.rank_cutoff(self.lambda_max())
    }

    /// Numerical rank at the context cutoff.
    pub fn rank(&self) -> usize {
        let cut = self.rank_cutoff();
        self.eig.values.iter().filter(|&&v| v > cut).count()
    }

    /// V f(Lambda) V* for a real function of the clamped spectrum.
    pub fn spectral_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.eig.apply_fn(f)
    }

    /// Spectral square root, a PSD operator with the same eigenvectors.
    /// Eigenvalues below the rank cutoff are treated as kernel, so the root
    /// has exactly the same numerical rank and range as the operator.
    pub fn sqrt(&self) -> PsdOperator {
        let m = self.spectral_pow(0.5);
        PsdOperator::new(m, self.ctx).expect("spectral sqrt stays PSD")
    }

    /// Spectral power lambda^p on the range (sub-cutoff eigenvalues map to zero).
    pub fn spectral_pow(&self, p: f64) -> CMatrix {
        let cut = self.rank_cutoff();
        self.spectral_fn(|v| if v > cut { v.powf(p) } else { 0.0 })
    }

    /// Moore-Penrose-style inverse of the square root: eigenvalues above the
    /// rank cutoff map to lambda^{-1/2}, the rest to zero, so the product
    /// with `sqrt()` is the orthogonal projection onto the range.
    pub fn partial_inverse_sqrt(&self) -> CMatrix {
        self.spectral_pow(-0.5)
    }

    /// Pseudoinverse on the range.
    pub fn pinv(&self) -> CMatrix {
        self.spectral_pow(-1.0)
    }

    /// Orthonormal frame spanning the eigenvectors above the rank cutoff.
    /// In finite dimensions ran A = ran A^{1/2}, returned once.
    pub fn range(&self) -> Subspace {
        let cut = self.rank_cutoff();
        let frame = self.eig.select_vectors(|v| v > cut);
        Subspace::from_orthonormal_frame(frame, self.ctx)
    }

    /// Orthogonal projection onto the range.
    pub fn range_projection(&self) -> CMatrix {
        let cut = self.rank_cutoff();
        self.spectral_fn(|v| if v > cut { 1.0 } else { 0.0 })
    }

    /// How far `self <= other` fails in PSD order (0 when it holds).
    pub fn psd_defect_vs(&self, other: &PsdOperator) -> Result<f64> {
        crate::cmat::psd_order_defect(&self.mat, &other.mat)
    }
}

/// Closed subspace represented by an orthonormal column frame. Zero columns
/// encode the trivial subspace.
#[derive(Debug, Clone)]
pub struct Subspace {
    frame: CMatrix,
    ctx: ToleranceContext,
}

impl Subspace {
    /// Wrap a frame that is already orthonormal (checked in debug builds).
    pub fn from_orthonormal_frame(frame: CMatrix, ctx: ToleranceContext) -> Self {
        debug_assert!(
            frame.ncols() == 0
                || fro_norm(
                    &(frame.adjoint() * &frame - CMatrix::identity(frame.ncols(), frame.ncols()))
                ) < 1e-10,
            "frame columns must be orthonormal"
        );
        Self { frame, ctx }
    }

    /// Orthonormalize the column span of an arbitrary matrix.
    pub fn from_spanning(m: &CMatrix, ctx: ToleranceContext) -> Result<Self> {
        let frame = orthonormal_cols(m, ctx.rank_rel_tol)?;
        Ok(Self { frame, ctx })
    }

    /// Orthonormalize with the rank cutoff measured against
    /// `max(own largest singular value, scale)`: spans that are rounding
    /// noise around zero collapse to the trivial subspace.
    pub fn from_spanning_scaled(m: &CMatrix, ctx: ToleranceContext, scale: f64) -> Result<Self> {
        let frame = crate::cmat::orthonormal_cols_scaled(m, ctx.rank_rel_tol, scale)?;
        Ok(Self { frame, ctx })
    }

    pub fn trivial(ambient: usize, ctx: ToleranceContext) -> Self {
        Self {
            frame: CMatrix::zeros(ambient, 0),
            ctx,
        }
    }

    pub fn full(ambient: usize, ctx: ToleranceContext) -> Self {
        Self {
            frame: CMatrix::identity(ambient, ambient),
            ctx,
        }
    }

    /// Span of the chosen coordinate directions.
    pub fn coordinate(ambient: usize, indices: &[usize], ctx: ToleranceContext) -> Self {
        let mut frame = CMatrix::zeros(ambient, indices.len());
        for (k, &i) in indices.iter().enumerate() {
            frame[(i, k)] = cr(1.0);
        }
        Self { frame, ctx }
    }

    /// Span of a single vector (normalized); zero vector gives the trivial subspace.
    pub fn line(v: &[Complex64], ctx: ToleranceContext) -> Self {
        let m = CMatrix::from_fn(v.len(), 1, |i, _| v[i]);
        Self::from_spanning(&m, ctx).expect("1-column SVD")
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn ctx(&self) -> ToleranceContext {
        self.ctx
    }

    /// Orthogonal projection P = frame frame*.
    pub fn projection(&self) -> CMatrix {
        if self.is_trivial() {
            return CMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        }
        &self.frame * self.frame.adjoint()
    }

    /// Orthogonal complement, as eigenvectors of I - P at eigenvalue 1.
    pub fn complement(&self) -> Result<Subspace> {
        let n = self.ambient_dim();
        let p_perp = CMatrix::identity(n, n) - self.projection();
        let eig = herm_eig(&p_perp)?;
        let frame = eig.select_vectors(|v| v > 0.5);
        debug_assert_eq!(frame.ncols(), n - self.dim());
        Ok(Subspace {
            frame,
            ctx: self.ctx,
        })
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Dimension of the span of the union (rank of the concatenated frames).
    pub fn sum_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        let mut cat = CMatrix::zeros(self.ambient_dim(), self.dim() + other.dim());
        for j in 0..self.dim() {
            cat.set_column(j, &self.frame.column(j));
        }
        for j in 0..other.dim() {
            cat.set_column(self.dim() + j, &other.frame.column(j));
        }
        rank_at(&cat, self.ctx.rank_rel_tol)
    }

    /// Dimension of the exact intersection, decided by frame ranks.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum_dim(other)?)
    }

    /// Whether self is contained in other (every frame column within tolerance).
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if self.is_trivial() {
            return Ok(true);
        }
        let resid = &self.frame - other.projection() * &self.frame;
        Ok(fro_norm(&resid) <= self.ctx.angle_tol() * (self.dim() as f64).sqrt())
    }

    /// Equality as subspaces: same dimension and all principal angles below
    /// the angle tolerance.
    pub fn approx_eq(&self, other: &Subspace) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        if self.is_trivial() {
            return Ok(true);
        }
        let angles = principal_angles(self, other)?;
        Ok(angles.iter().all(|&a| a < self.ctx.angle_tol()))
    }

    /// Fundamental symmetry J = 2P - I: Hermitian, J^2 = I, fixes the
    /// subspace pointwise and is -I on its complement.
    pub fn fundamental_symmetry(&self) -> CMatrix {
        let n = self.ambient_dim();
        self.projection().scale(2.0) - CMatrix::identity(n, n)
    }
}

/// Principal angles between two subspaces of the same ambient space, in
/// [0, pi/2], sorted nonincreasing (largest angle first). The cosines are the
/// singular values of frame1* frame2 clamped to [0, 1]; angles in the
/// small-angle regime are recomputed from the sine matrix (the frame of the
/// smaller subspace minus its projection onto the other), which resolves
/// near-zero angles to full precision where the arccosine cannot. The number
/// of angles below the angle tolerance is the dimension of the exact
/// intersection.
pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<Vec<f64>> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: s1.ambient_dim(),
            right: s2.ambient_dim(),
        });
    }
    if s1.is_trivial() || s2.is_trivial() {
        return Ok(Vec::new());
    }
    // Work from the smaller side so both routes yield min(dim1, dim2) values.
    let (small, big) = if s1.dim() <= s2.dim() { (s1, s2) } else { (s2, s1) };
    let m = big.frame().adjoint() * small.frame();
    let mut cos: Vec<f64> = svd_parts(&m)?
        .singular_values
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect();
    cos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sine_mat = small.frame() - big.frame() * &m;
    let mut sin: Vec<f64> = svd_parts(&sine_mat)?
        .singular_values
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect();
    sin.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut angles: Vec<f64> = cos
        .iter()
        .zip(&sin)
        .map(|(&c, &s)| if c * c > 0.5 { s.asin() } else { c.acos() })
        .collect();
    angles.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(angles)
}

/// Matrix block between two spaces with operator norm at most 1 (up to the
/// comparison tolerance).
#[derive(Debug, Clone)]
pub struct Contraction {
    mat: CMatrix,
    norm: f64,
}

impl Contraction {
    pub fn new(mat: CMatrix, ctx: ToleranceContext) -> Result<Self> {
        let norm = crate::cmat::op_norm(&mat)?;
        if norm > 1.0 + ctx.cmp_tol {
            return Err(Error::NotContraction { norm });
        }
        Ok(Self { mat, norm })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{c, fro_dist};
    use approx::assert_relative_eq;

    fn ctx() -> ToleranceContext {
        ToleranceContext::default()
    }

    fn mat2(a: f64, b: f64, c2: f64, d: f64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(a), cr(b), cr(c2), cr(d)])
    }

    #[test]
    fn identity_spectrum() {
        let a = PsdOperator::identity(3, ctx());
        assert_eq!(a.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert_eq!(a.rank(), 3);
    }

    #[test]
    fn two_by_two_spectrum_from_characteristic_polynomial() {
        // [[2,1],[1,1]] has eigenvalues (3 +- sqrt(5))/2, both positive.
        let a = PsdOperator::new(mat2(2.0, 1.0, 1.0, 1.0), ctx()).unwrap();
        let s5 = 5.0f64.sqrt();
        assert_relative_eq!(a.eigenvalues()[0], (3.0 + s5) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(a.eigenvalues()[1], (3.0 - s5) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn antisymmetric_part_is_rejected_as_not_psd() {
        // [[0,1],[0,0]] symmetrizes to [[0,.5],[.5,0]] with eigenvalue -1/2.
        let raw = mat2(0.0, 1.0, 0.0, 0.0);
        match PsdOperator::new(raw, ctx()) {
            Err(Error::NotPsd { eigenvalue, .. }) => {
                assert_relative_eq!(eigenvalue, -0.5, epsilon = 1e-12)
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn mild_asymmetry_is_symmetrized_strong_asymmetry_rejected() {
        let mut raw = mat2(2.0, 1.0, 1.0, 2.0);
        raw[(0, 1)] += cr(1e-9);
        assert!(PsdOperator::new(raw, ctx()).is_ok());
        // PSD after symmetrization but far too asymmetric.
        let raw = mat2(10.0, 1.0, 1.001, 10.0);
        match PsdOperator::new(raw, ctx()) {
            Err(Error::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let raw = CMatrix::zeros(2, 3);
        assert!(matches!(
            PsdOperator::new(raw, ctx()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn complex_hermitian_accepted() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(2.0), c(0.0, 1.0), c(0.0, -1.0), cr(2.0)]);
        let a = PsdOperator::new(m, ctx()).unwrap();
        assert_eq!(a.rank(), 2);
        assert_relative_eq!(a.eigenvalues()[0], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = PsdOperator::from_diagonal(&[4.0, 9.0], ctx()).unwrap();
        let s = a.sqrt();
        assert!(fro_dist(s.matrix(), &mat2(2.0, 0.0, 0.0, 3.0)) < 1e-12);
    }

    #[test]
    fn sqrt_of_rank_one_scales_the_projection() {
        // v v* ||v||^2 has square root v v* ||v|| for a unit direction v.
        let v = CMatrix::from_row_slice(2, 1, &[cr(0.6), cr(0.8)]);
        let proj = &v * v.adjoint();
        let a = PsdOperator::new(proj.scale(4.0), ctx()).unwrap();
        let s = a.sqrt();
        assert!(fro_dist(s.matrix(), &proj.scale(2.0)) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = PsdOperator::new(mat2(2.0, 1.0, 1.0, 1.0), ctx()).unwrap();
        let s = a.sqrt();
        let sq = s.matrix() * s.matrix();
        assert!(fro_dist(&sq, a.matrix()) <= 1e-10);
    }

    #[test]
    fn partial_inverse_sqrt_examples() {
        let a = PsdOperator::from_diagonal(&[4.0, 0.0], ctx()).unwrap();
        assert!(fro_dist(&a.partial_inverse_sqrt(), &mat2(0.5, 0.0, 0.0, 0.0)) < 1e-12);

        let i2 = PsdOperator::identity(2, ctx());
        assert!(fro_dist(&i2.partial_inverse_sqrt(), &CMatrix::identity(2, 2)) < 1e-12);

        // Eigenvalue below the default cutoff is treated as kernel.
        let a = PsdOperator::from_diagonal(&[1e-30, 1.0], ctx()).unwrap();
        assert!(fro_dist(&a.partial_inverse_sqrt(), &mat2(0.0, 0.0, 0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn partial_inverse_sqrt_times_sqrt_is_range_projection() {
        let a = PsdOperator::from_diagonal(&[3.0, 0.0, 1.5], ctx()).unwrap();
        let prod = a.partial_inverse_sqrt() * a.sqrt().matrix();
        assert!(fro_dist(&prod, &a.range_projection()) < 1e-12);
    }

    #[test]
    fn range_basis_examples() {
        let a = PsdOperator::from_diagonal(&[1.0, 0.0, 2.0], ctx()).unwrap();
        let r = a.range();
        assert_eq!(r.dim(), 2);
        let expect = Subspace::coordinate(3, &[0, 2], ctx());
        assert!(r.approx_eq(&expect).unwrap());

        let z = PsdOperator::zero(2, ctx());
        assert!(z.range().is_trivial());

        // Rank-1 (1,1)(1,1)*/2 has range spanned by (1,1)/sqrt(2).
        let a = PsdOperator::new(mat2(0.5, 0.5, 0.5, 0.5), ctx()).unwrap();
        let r = a.range();
        let expect = Subspace::line(&[cr(1.0), cr(1.0)], ctx());
        assert!(r.approx_eq(&expect).unwrap());
    }

    #[test]
    fn principal_angle_examples() {
        let e1 = Subspace::coordinate(2, &[0], ctx());
        let e2 = Subspace::coordinate(2, &[1], ctx());
        let diag = Subspace::line(&[cr(1.0), cr(1.0)], ctx());

        let same = principal_angles(&e1, &e1).unwrap();
        assert_relative_eq!(same[0], 0.0, epsilon = 1e-7);

        let perp = principal_angles(&e1, &e2).unwrap();
        assert_relative_eq!(perp[0], std::f64::consts::FRAC_PI_2, epsilon = 1e-12);

        let mid = principal_angles(&e1, &diag).unwrap();
        assert_relative_eq!(mid[0], std::f64::consts::FRAC_PI_4, epsilon = 1e-12);

        assert!(principal_angles(&e1, &Subspace::trivial(2, ctx()))
            .unwrap()
            .is_empty());
        let e1_3d = Subspace::coordinate(3, &[0], ctx());
        assert!(principal_angles(&e1, &e1_3d).is_err());
    }

    #[test]
    fn fundamental_symmetry_examples() {
        let full = Subspace::full(2, ctx());
        assert!(fro_dist(&full.fundamental_symmetry(), &CMatrix::identity(2, 2)) < 1e-14);

        let trivial = Subspace::trivial(2, ctx());
        assert!(
            fro_dist(
                &trivial.fundamental_symmetry(),
                &CMatrix::identity(2, 2).scale(-1.0)
            ) < 1e-14
        );

        let e1 = Subspace::coordinate(2, &[0], ctx());
        let j = e1.fundamental_symmetry();
        assert!(fro_dist(&j, &mat2(1.0, 0.0, 0.0, -1.0)) < 1e-14);
        assert!(fro_dist(&(&j * &j), &CMatrix::identity(2, 2)) < 1e-14);
    }

    #[test]
    fn complement_and_intersection() {
        let s = Subspace::line(&[cr(1.0), cr(1.0), cr(0.0)], ctx());
        let comp = s.complement().unwrap();
        assert_eq!(comp.dim(), 2);
        assert_eq!(s.intersection_dim(&comp).unwrap(), 0);
        assert_eq!(s.sum_dim(&comp).unwrap(), 3);
        assert!(s.is_subspace_of(&Subspace::full(3, ctx())).unwrap());
        assert!(!Subspace::full(3, ctx()).is_subspace_of(&s).unwrap());
    }

    #[test]
    fn contraction_gate() {
        let ok = Contraction::new(mat2(0.5, 0.0, 0.0, 1.0), ctx());
        assert!(ok.is_ok());
        let bad = Contraction::new(mat2(1.5, 0.0, 0.0, 0.0), ctx());
        assert!(matches!(bad, Err(Error::NotContraction { .. })));
    }
}

