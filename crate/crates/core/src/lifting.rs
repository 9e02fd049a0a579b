//! The lifting calculus: deciding when A = T^{1/2} P_M T^{1/2} admits a
//! range-pathological lifting operator T, recovering the factors of a given
//! witness, classifying which lifting forms a block pair admits, the two
//! canonical example constructions, and truncation-growth diagnostics that
//! stand in for the provably infinite-dimensional sufficiency construction.

use crate::cmat::{fro_dist, op_norm, CMatrix};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::psd::{principal_angles, PsdOperator, Subspace};
use crate::range::douglas_solve;
use crate::shorting::block_split;

/// Decision of the block criterion ran A12 within ran A11^{3/4}, with the
/// conditioning of the lifting factor A11^{-3/4} A12.
#[derive(Debug, Clone)]
pub struct LiftingCriterion {
    /// Range inclusion, decided by rank (in finite dimensions ran A11^{3/4}
    /// equals ran A11).
    pub admits: bool,
    /// Operator norm of A11^{[-3/4]} A12.
    pub factor_norm: f64,
}

pub fn lifting_criterion(a: &PsdOperator, m: &Subspace) -> Result<LiftingCriterion> {
    if a.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: m.ambient_dim(),
        });
    }
    let ctx = a.ctx();
    let split = block_split(a, m)?;
    let a11 = PsdOperator::new_with_scale(split.b11.clone(), ctx, a.norm())?;
    lifting_criterion_blocks(&a11, &split.b12)
}

/// Block-level form of the criterion, for corner and coupling blocks given
/// directly. A PSD ambient operator always places its coupling inside
/// ran A11 at finite scale, so the failing branch only shows up for blocks
/// that do not assemble to a PSD matrix.
pub fn lifting_criterion_blocks(a11: &PsdOperator, a12: &CMatrix) -> Result<LiftingCriterion> {
    if a11.dim() != a12.nrows() {
        return Err(Error::DimensionMismatch {
            left: a11.dim(),
            right: a12.nrows(),
        });
    }
    let ctx = a11.ctx();
    let scale = a11.norm().max(op_norm(a12)?);
    let coupling = Subspace::from_spanning_scaled(a12, ctx, scale)?;
    let admits = coupling.is_subspace_of(&a11.range())?;
    let factor = a11.spectral_pow(-0.75) * a12;
    let factor_norm = op_norm(&factor)?;
    Ok(LiftingCriterion {
        admits,
        factor_norm,
    })
}

/// Factors read off a lifting witness T for the subspace M.
#[derive(Debug, Clone)]
pub struct RecoveredFactors {
    /// Corner block of T^{1/2} on M.
    pub w: CMatrix,
    /// Coupling block of T^{1/2}.
    pub u: CMatrix,
    /// Corner block of T^{1/2} on the complement.
    pub x22: CMatrix,
    /// Contraction with U = W^{1/2} G X22^{1/2}.
    pub g: CMatrix,
    pub g_norm: f64,
    /// || A11 - W^2 ||_F for A = T^{1/2} P_M T^{1/2}.
    pub a11_residual: f64,
    /// || A12 - W U ||_F.
    pub a12_residual: f64,
}

/// Given T and M, form A = T^{1/2} P_M T^{1/2}, read W and U off the blocks
/// of T^{1/2}, verify the block identities, and extract the contraction G by
/// two Douglas solves. A failing Douglas step signals that T is not a
/// lifting witness for M.
pub fn recover_factors(t: &PsdOperator, m: &Subspace) -> Result<RecoveredFactors> {
    if t.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: m.ambient_dim(),
        });
    }
    let ctx = t.ctx();
    let t_sqrt = t.sqrt();
    let split_t_sqrt = block_split(&t_sqrt, m)?;
    let w = split_t_sqrt.b11.clone();
    let u = split_t_sqrt.b12.clone();
    let x22 = split_t_sqrt.b22.clone();

    let a_raw = t_sqrt.matrix() * m.projection() * t_sqrt.matrix();
    let a = PsdOperator::new_with_scale(a_raw, ctx, t.norm())?;
    let split_a = block_split(&a, m)?;
    let a11_residual = fro_dist(&split_a.b11, &(&w * &w));
    let a12_residual = fro_dist(&split_a.b12, &(&w * &u));

    let w_op = PsdOperator::new_with_scale(w.clone(), ctx, t_sqrt.norm())?;
    let x22_op = PsdOperator::new_with_scale(x22.clone(), ctx, t_sqrt.norm())?;
    // U = W^{1/2} G X22^{1/2}: peel W^{1/2} on the left, then X22^{1/2} on
    // the right through the adjoint problem.
    let y = douglas_solve(&u, w_op.sqrt().matrix(), ctx)?.c;
    let g_adj = douglas_solve(&y.adjoint(), x22_op.sqrt().matrix(), ctx)?.c;
    let g = g_adj.adjoint();
    let g_norm = op_norm(&g)?;
    if g_norm > 1.0 + ctx.cmp_tol {
        return Err(Error::NotContraction { norm: g_norm });
    }
    Ok(RecoveredFactors {
        w,
        u,
        x22,
        g,
        g_norm,
        a11_residual,
        a12_residual,
    })
}

/// Range conditions classifying which lifting forms the assembled block
/// operator admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionFlags {
    /// ran V and ran W intersect trivially.
    pub intersection_trivial: bool,
    /// ran V inside ran W^{1/2} (finite reading: ran W).
    pub v_in_sqrt_w: bool,
    /// ran W inside ran V^{1/2} (finite reading: ran V).
    pub w_in_sqrt_v: bool,
    /// Primary-form lifting conditions hold.
    pub admits_primary: bool,
    /// Complement-form lifting conditions hold.
    pub admits_complement: bool,
    /// Both forms.
    pub admits_both: bool,
}

/// Evaluate the three range conditions by rank. The flags are scale
/// invariant: ranges do not change under positive scaling.
pub fn classify_conditions(w: &PsdOperator, v: &PsdOperator) -> Result<ConditionFlags> {
    if w.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: v.dim(),
        });
    }
    let rw = w.range();
    let rv = v.range();
    let intersection_trivial = rw.intersection_dim(&rv)? == 0;
    let v_in_sqrt_w = rv.is_subspace_of(&rw)?;
    let w_in_sqrt_v = rw.is_subspace_of(&rv)?;
    let admits_primary = intersection_trivial && v_in_sqrt_w;
    let admits_complement = intersection_trivial && w_in_sqrt_v;
    Ok(ConditionFlags {
        intersection_trivial,
        v_in_sqrt_w,
        w_in_sqrt_v,
        admits_primary,
        admits_complement,
        admits_both: admits_primary && admits_complement,
    })
}

/// Report for the compression-style example V = W^{1/2} P_L W^{1/2}.
#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub v: PsdOperator,
    /// ran V inside ran W^{1/2} by rank.
    pub range_in_sqrt_w: bool,
    /// dim(ran V^{1/2} intersect ran W).
    pub intersect_dim: usize,
    /// Set when the finite identity ran W^{1/2} = ran W makes the ideal
    /// trivial-intersection conclusion unwitnessable at this scale.
    pub finite_collapse: bool,
}

pub fn example_v1(w: &PsdOperator, l: &Subspace) -> Result<ExampleReport> {
    if w.dim() != l.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: l.ambient_dim(),
        });
    }
    let ctx = w.ctx();
    let w_sqrt = w.sqrt();
    let v_raw = w_sqrt.matrix() * l.projection() * w_sqrt.matrix();
    let v = PsdOperator::new_with_scale(v_raw, ctx, w.norm())?;
    let range_in_sqrt_w = v.range().is_subspace_of(&w.range())?;
    let intersect_dim = v.range().intersection_dim(&w.range())?;
    Ok(ExampleReport {
        finite_collapse: intersect_dim > 0,
        v,
        range_in_sqrt_w,
        intersect_dim,
    })
}

/// Report for the example V = W^{1/2} (I + P_L) W^{1/2}, whose square-root
/// range provably equals ran W^{1/2} even at finite scale.
#[derive(Debug, Clone)]
pub struct ExampleV2Report {
    pub v: PsdOperator,
    /// Largest principal angle between ran V^{1/2} and ran W^{1/2}.
    pub range_equality_angle: f64,
    pub range_equal: bool,
    /// dim(ran V intersect ran W).
    pub intersect_dim: usize,
    pub finite_collapse: bool,
}

pub fn example_v2(w: &PsdOperator, l: &Subspace) -> Result<ExampleV2Report> {
    if w.dim() != l.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: l.ambient_dim(),
        });
    }
    let ctx = w.ctx();
    let n = w.dim();
    let w_sqrt = w.sqrt();
    let middle = CMatrix::identity(n, n) + l.projection();
    let v_raw = w_sqrt.matrix() * middle * w_sqrt.matrix();
    let v = PsdOperator::new_with_scale(v_raw, ctx, 2.0 * w.norm())?;
    let rv = v.range();
    let rw = w.range();
    let range_equal = rv.approx_eq(&rw)?;
    let range_equality_angle = if rv.dim() == rw.dim() && !rv.is_trivial() {
        principal_angles(&rv, &rw)?.first().copied().unwrap_or(0.0)
    } else if rv.dim() == rw.dim() {
        0.0
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let intersect_dim = rv.intersection_dim(&rw)?;
    Ok(ExampleV2Report {
        v,
        range_equality_angle,
        range_equal,
        intersect_dim,
        finite_collapse: intersect_dim > 0,
    })
}

/// Graded truncation family: A11(n) = diag(i^{-a}) with a single coupling
/// column of entries i^{-b}. The lifting factor norm across truncations
/// probes how fast the factor degenerates.
#[derive(Debug, Clone)]
pub struct GradedModel {
    pub size_schedule: Vec<usize>,
    pub a_exponent: f64,
    pub b_exponent: f64,
}

impl GradedModel {
    pub fn new(size_schedule: Vec<usize>, a_exponent: f64, b_exponent: f64) -> Result<Self> {
        if !(a_exponent > 0.0) || !(b_exponent > 0.0) {
            return Err(Error::BadModel("exponents must be positive"));
        }
        if size_schedule.is_empty()
            || size_schedule.windows(2).any(|w| w[1] <= w[0])
            || size_schedule[0] == 0
        {
            return Err(Error::BadModel("schedule must be strictly increasing"));
        }
        Ok(Self {
            size_schedule,
            a_exponent,
            b_exponent,
        })
    }

    /// Default schedule for classification runs: long enough to separate
    /// logarithmic growth from convergence.
    pub fn default_schedule() -> Vec<usize> {
        vec![64, 256, 1024, 4096, 16384, 65536]
    }

    /// Diagonal corner block at truncation n.
    pub fn a11(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|i| (i as f64).powf(-self.a_exponent)).collect()
    }

    /// Coupling column at truncation n.
    pub fn a12(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|i| (i as f64).powf(-self.b_exponent)).collect()
    }

    /// Lifting factor norm at truncation n. For the diagonal model the
    /// squared norm is the partial sum of i^{3a/2 - 2b}.
    pub fn factor_norm(&self, n: usize) -> f64 {
        let e = 1.5 * self.a_exponent - 2.0 * self.b_exponent;
        (1..=n)
            .map(|i| (i as f64).powf(e))
            .sum::<f64>()
            .sqrt()
    }

    /// Analytic p-series test: the factor stays bounded iff 2b - 3a/2 > 1.
    pub fn exponent_test_bounded(&self) -> bool {
        2.0 * self.b_exponent - 1.5 * self.a_exponent > 1.0
    }
}

/// One row of the truncation sweep.
#[derive(Debug, Clone, Copy)]
pub struct TruncationRow {
    pub n: usize,
    pub factor_norm: f64,
}

/// Sweep of the lifting factor norm across the truncation schedule, with the
/// numeric growth classification checked against the exponent test.
#[derive(Debug, Clone)]
pub struct TruncationDiagnostic {
    pub rows: Vec<TruncationRow>,
    /// Log-log tail slope of the factor norm over the last schedule step.
    pub tail_slope: f64,
    /// Numeric verdict: tail slope above the divergence threshold.
    pub numeric_divergent: bool,
    /// Analytic verdict from the exponent test.
    pub exponent_divergent: bool,
    pub agree: bool,
}

/// Tail slope above this value classifies the series as divergent. The
/// hardest divergent case grows like sqrt(log n) whose tail slope at the
/// default schedule stays near 0.05; convergent tails fall well below 0.01.
pub const DIVERGENCE_SLOPE_THRESHOLD: f64 = 0.02;

pub fn truncation_diagnostic(model: &GradedModel) -> TruncationDiagnostic {
    let rows: Vec<TruncationRow> = par_map(model.size_schedule.clone(), |n| TruncationRow {
        n,
        factor_norm: model.factor_norm(n),
    });
    let tail_slope = match rows.len() {
        0 | 1 => 0.0,
        len => {
            let a = &rows[len - 2];
            let b = &rows[len - 1];
            if a.factor_norm <= 0.0 || b.factor_norm <= 0.0 {
                0.0
            } else {
                (b.factor_norm / a.factor_norm).ln() / (b.n as f64 / a.n as f64).ln()
            }
        }
    };
    let numeric_divergent = tail_slope > DIVERGENCE_SLOPE_THRESHOLD;
    let exponent_divergent = !model.exponent_test_bounded();
    TruncationDiagnostic {
        rows,
        tail_slope,
        numeric_divergent,
        exponent_divergent,
        agree: numeric_divergent == exponent_divergent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::cr;
    use crate::sampling::{random_psd, random_subspace, rng_from_seed};
    use crate::tol::ToleranceContext;
    use approx::assert_relative_eq;

    fn ctx() -> ToleranceContext {
        ToleranceContext::default()
    }

    #[test]
    fn criterion_block_diagonal_and_range_miss() {
        // Block diagonal: criterion holds with zero factor.
        let a = PsdOperator::from_diagonal(&[1.0, 2.0, 3.0], ctx()).unwrap();
        let m = Subspace::coordinate(3, &[0, 1], ctx());
        let rep = lifting_criterion(&a, &m).unwrap();
        assert!(rep.admits);
        assert!(rep.factor_norm < 1e-12);

        // Coupling escaping ran A11 = diag(1,0): only expressible at the
        // block level, since a PSD ambient matrix forces the inclusion.
        let a11 = PsdOperator::from_diagonal(&[1.0, 0.0], ctx()).unwrap();
        let a12 = CMatrix::from_row_slice(2, 1, &[cr(0.0), cr(1.0)]);
        let rep = lifting_criterion_blocks(&a11, &a12).unwrap();
        assert!(!rep.admits);
    }

    #[test]
    fn criterion_scalar_powers() {
        // A11 = diag(1, 1/16), A12 = (1, 1/4): factor norm sqrt(5).
        let mut raw = CMatrix::zeros(3, 3);
        raw[(0, 0)] = cr(1.0);
        raw[(1, 1)] = cr(1.0 / 16.0);
        raw[(0, 2)] = cr(1.0);
        raw[(2, 0)] = cr(1.0);
        raw[(1, 2)] = cr(0.25);
        raw[(2, 1)] = cr(0.25);
        raw[(2, 2)] = cr(2.0);
        // The assembled matrix need not be PSD for this block computation;
        // bypass validation by computing the factor directly.
        let a11 = PsdOperator::from_diagonal(&[1.0, 1.0 / 16.0], ctx()).unwrap();
        let a12 = CMatrix::from_row_slice(2, 1, &[cr(1.0), cr(0.25)]);
        let factor = a11.spectral_pow(-0.75) * &a12;
        assert_relative_eq!(crate::cmat::op_norm(&factor).unwrap(), 5f64.sqrt(), epsilon = 1e-12);
        let _ = raw;
    }

    #[test]
    fn recover_factors_identity_and_diagonal() {
        let m = Subspace::coordinate(2, &[0], ctx());
        let t = PsdOperator::identity(2, ctx());
        let rep = recover_factors(&t, &m).unwrap();
        assert_relative_eq!(rep.w[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert!(rep.u.norm() < 1e-12);
        assert!(rep.g.norm() < 1e-12);

        let t = PsdOperator::from_diagonal(&[1.0, 4.0], ctx()).unwrap();
        let rep = recover_factors(&t, &m).unwrap();
        assert_relative_eq!(rep.w[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert!(rep.u.norm() < 1e-12);
    }

    #[test]
    fn recover_factors_coupled_root() {
        // T^{1/2} = [[1, .3], [.3, 1]]: W = 1, U = .3, G with norm <= 1.
        let root = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.3), cr(0.3), cr(1.0)]);
        let t = PsdOperator::new(&root * &root, ctx()).unwrap();
        let m = Subspace::coordinate(2, &[0], ctx());
        let rep = recover_factors(&t, &m).unwrap();
        assert_relative_eq!(rep.w[(0, 0)].re, 1.0, epsilon = 1e-10);
        assert_relative_eq!(rep.u[(0, 0)].re, 0.3, epsilon = 1e-10);
        assert!(rep.g_norm <= 1.0 + 1e-9);
        assert!(rep.a11_residual < 1e-10);
        assert!(rep.a12_residual < 1e-10);
    }

    #[test]
    fn recover_factors_random_round_trip() {
        let mut rng = rng_from_seed(17);
        for _ in 0..20 {
            let t = random_psd(&mut rng, 6, 0.2, 2.0, ctx());
            let m = random_subspace(&mut rng, 6, 3, ctx());
            let rep = recover_factors(&t, &m).unwrap();
            assert!(rep.a11_residual < 1e-8);
            assert!(rep.a12_residual < 1e-8);
            assert!(rep.g_norm <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn classify_conditions_examples() {
        let w = PsdOperator::from_diagonal(&[1.0, 0.0], ctx()).unwrap();
        // V = W: the intersection condition fails, so no form is admitted.
        let flags = classify_conditions(&w, &w).unwrap();
        assert!(!flags.intersection_trivial);
        assert!(!flags.admits_primary && !flags.admits_complement);

        // Complementary diagonals: trivial intersection, inclusions fail
        // both ways, no lifting admitted.
        let v = PsdOperator::from_diagonal(&[0.0, 1.0], ctx()).unwrap();
        let flags = classify_conditions(&w, &v).unwrap();
        assert!(flags.intersection_trivial);
        assert!(!flags.v_in_sqrt_w && !flags.w_in_sqrt_v);
        assert!(!flags.admits_primary && !flags.admits_complement);

        // Against the identity the inclusion into ran W'^{1/2} holds.
        let w_full = PsdOperator::identity(2, ctx());
        let flags = classify_conditions(&w_full, &v).unwrap();
        assert!(flags.v_in_sqrt_w);
        assert!(!flags.intersection_trivial);
    }

    #[test]
    fn classify_conditions_scale_invariance() {
        let mut rng = rng_from_seed(23);
        for _ in 0..20 {
            let w = random_psd(&mut rng, 5, 0.5, 2.0, ctx());
            let v = random_psd(&mut rng, 5, 0.5, 2.0, ctx());
            let base = classify_conditions(&w, &v).unwrap();
            for c in [1e-3, 7.0, 1e3] {
                let ws = PsdOperator::new(w.matrix().scale(c), ctx()).unwrap();
                let vs = PsdOperator::new(v.matrix().scale(c), ctx()).unwrap();
                assert_eq!(classify_conditions(&ws, &vs).unwrap(), base);
            }
        }
    }

    #[test]
    fn example_v1_cases() {
        let w = PsdOperator::from_diagonal(&[1.0, 4.0], ctx()).unwrap();
        // L = M gives back W.
        let full = Subspace::full(2, ctx());
        let rep = example_v1(&w, &full).unwrap();
        assert!(crate::cmat::fro_dist(rep.v.matrix(), w.matrix()) < 1e-12);

        // Trivial L gives zero.
        let rep = example_v1(&w, &Subspace::trivial(2, ctx())).unwrap();
        assert_eq!(rep.v.rank(), 0);
        assert!(!rep.finite_collapse);

        // The compression arithmetic from the diagonal fixture.
        let l = Subspace::line(&[cr(1.0), cr(1.0)], ctx());
        let rep = example_v1(&w, &l).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(1.0), cr(1.0), cr(2.0)]);
        assert!(crate::cmat::fro_dist(rep.v.matrix(), &expect) < 1e-12);
        assert!(rep.range_in_sqrt_w);
        assert!(rep.finite_collapse);
    }

    #[test]
    fn example_v2_cases() {
        let w = PsdOperator::from_diagonal(&[1.0, 4.0], ctx()).unwrap();
        let rep = example_v2(&w, &Subspace::trivial(2, ctx())).unwrap();
        assert!(crate::cmat::fro_dist(rep.v.matrix(), w.matrix()) < 1e-12);
        assert!(rep.range_equal);

        let rep = example_v2(&w, &Subspace::full(2, ctx())).unwrap();
        assert!(crate::cmat::fro_dist(rep.v.matrix(), &w.matrix().scale(2.0)) < 1e-12);

        let l = Subspace::line(&[cr(1.0), cr(1.0)], ctx());
        let rep = example_v2(&w, &l).unwrap();
        let v1 = example_v1(&w, &l).unwrap();
        assert!(
            crate::cmat::fro_dist(rep.v.matrix(), &(w.matrix() + v1.v.matrix())) < 1e-12
        );
        assert!(rep.range_equal);
        assert!(rep.range_equality_angle < 1e-7);
    }

    #[test]
    fn graded_model_validation() {
        assert!(GradedModel::new(vec![8, 16], 1.0, 2.0).is_ok());
        assert!(GradedModel::new(vec![16, 8], 1.0, 2.0).is_err());
        assert!(GradedModel::new(vec![8, 16], -1.0, 2.0).is_err());
        assert!(GradedModel::new(vec![], 1.0, 2.0).is_err());
    }

    #[test]
    fn factor_norm_matches_dense_route() {
        // Cross-check the closed-form partial sums against the dense block
        // machinery at a small truncation.
        let model = GradedModel::new(vec![24], 1.5, 1.0).unwrap();
        let n = 24;
        let a11 = PsdOperator::from_diagonal(&model.a11(n), ctx()).unwrap();
        let a12 = CMatrix::from_fn(n, 1, |i, _| cr(model.a12(n)[i]));
        let dense = crate::cmat::op_norm(&(a11.spectral_pow(-0.75) * &a12)).unwrap();
        assert_relative_eq!(dense, model.factor_norm(n), max_relative = 1e-10);
    }

    #[test]
    fn truncation_diagnostic_examples() {
        // a = 1, b = 2: bounded (2b - 3a/2 = 2.5 > 1).
        let model = GradedModel::new(GradedModel::default_schedule(), 1.0, 2.0).unwrap();
        let d = truncation_diagnostic(&model);
        assert!(!d.exponent_divergent);
        assert!(!d.numeric_divergent);
        assert!(d.agree);

        // a = 2, b = 1: divergent (2 - 3 = -1 < 1).
        let model = GradedModel::new(GradedModel::default_schedule(), 2.0, 1.0).unwrap();
        let d = truncation_diagnostic(&model);
        assert!(d.exponent_divergent);
        assert!(d.numeric_divergent);
        assert!(d.agree);

        // Huge b: factor norms stay flat.
        let model = GradedModel::new(vec![8, 16, 32], 1.0, 40.0).unwrap();
        let d = truncation_diagnostic(&model);
        assert!(!d.numeric_divergent);
        assert!(d.rows.iter().all(|r| r.factor_norm <= 1.0 + 1e-12));
    }

    #[test]
    fn truncation_grid_matches_exponent_test() {
        let grid = [0.5, 1.0, 1.5, 2.0, 3.0];
        for &a in &grid {
            for &b in &grid {
                let model = GradedModel::new(GradedModel::default_schedule(), a, b).unwrap();
                let d = truncation_diagnostic(&model);
                assert!(
                    d.agree,
                    "mismatch at a={a} b={b}: slope {}",
                    d.tail_slope
                );
            }
        }
    }
}
