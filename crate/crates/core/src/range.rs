//! Douglas factorization and the operator-range identities built on it:
//! solving A = BC with the minimal-range factor, range-inclusion decisions
//! with the least majorization constant, and the finite-dimensional range
//! identities for sums and sandwiches of PSD operators.

use crate::cmat::{fro_norm, op_norm, pinv, rank_at, CMatrix};
use crate::error::{Error, Result};
use crate::psd::{principal_angles, PsdOperator, Subspace};
use crate::tol::ToleranceContext;

/// Relative residual tolerance for declaring a factorization failed, with an
/// absolute floor so A = 0 never false-fails.
pub const DOUGLAS_RESIDUAL_TOL: f64 = 1e-8;

/// Result of a successful Douglas solve A = B C.
#[derive(Debug, Clone)]
pub struct DouglasFactor {
    /// The unique factor with range inside ran B*.
    pub c: CMatrix,
    /// Frobenius residual of A - B C.
    pub residual: f64,
    /// Whether ran C is inside ran B* at the rank cutoff.
    pub range_in_b_adjoint: bool,
    /// Whether ker C = ker A, decided by rank (ker A is always inside ker C).
    pub kernel_matches: bool,
}

/// Solve A = B C for the unique C with ran C inside ran B*, via C = B^+ A.
///
/// Fails with `NoFactorization` when ran A is not inside ran B, signalled by
/// a residual above `1e-8 * max(1, ||A||_F)`.
pub fn douglas_solve(a: &CMatrix, b: &CMatrix, ctx: ToleranceContext) -> Result<DouglasFactor> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    let b_pinv = pinv(b, ctx.rank_rel_tol)?;
    let c = &b_pinv * a;
    let residual = fro_norm(&(a - b * &c));
    let tolerance = DOUGLAS_RESIDUAL_TOL * fro_norm(a).max(1.0);
    if residual > tolerance {
        return Err(Error::NoFactorization {
            residual,
            tolerance,
        });
    }
    let (range_in_b_adjoint, kernel_matches) = if fro_norm(&c) <= 1e-12 * fro_norm(a).max(1.0) {
        // A zero factor sits in every range; it can only arise from A = 0.
        (true, rank_at(a, ctx.rank_rel_tol)? == 0)
    } else {
        let b_adj_range = Subspace::from_spanning(&b.adjoint(), ctx)?;
        let c_range = Subspace::from_spanning(&c, ctx)?;
        (
            c_range.is_subspace_of(&b_adj_range)?,
            rank_at(&c, ctx.rank_rel_tol)? == rank_at(a, ctx.rank_rel_tol)?,
        )
    };
    Ok(DouglasFactor {
        c,
        residual,
        range_in_b_adjoint,
        kernel_matches,
    })
}

/// Decide ran A within ran B for PSD operators by frame ranks, and when the
/// inclusion holds report the least lambda with A A* <= lambda B B*
/// (the squared norm of the minimal Douglas factor). The boolean decision is
/// rank-based, decoupled from the conditioning of lambda.
pub fn range_inclusion(a: &PsdOperator, b: &PsdOperator) -> Result<(bool, Option<f64>)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ra = a.range();
    let rb = b.range();
    let included = ra.is_subspace_of(&rb)? && ra.sum_dim(&rb)? == rb.dim();
    if !included {
        return Ok((false, None));
    }
    let factor = pinv(b.matrix(), a.ctx().rank_rel_tol)? * a.matrix();
    let lambda = op_norm(&factor)?.powi(2);
    Ok((true, Some(lambda)))
}

/// Report for the finite reading of the range-sum identity:
/// rank of the sum equals the dimension of the span of the summand ranges.
#[derive(Debug, Clone)]
pub struct RangeSumReport {
    pub rank_of_sum: usize,
    pub dim_of_range_span: usize,
    pub pass: bool,
}

pub fn range_sum_identity_check(ops: &[PsdOperator]) -> Result<RangeSumReport> {
    let first = ops.first().ok_or(Error::EmptyList)?;
    let n = first.dim();
    let ctx = first.ctx();
    let mut sum = CMatrix::zeros(n, n);
    let mut frames: Vec<CMatrix> = Vec::new();
    let mut total_cols = 0;
    for op in ops {
        if op.dim() != n {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: n,
            });
        }
        sum += op.matrix();
        let f = op.range().frame().clone();
        total_cols += f.ncols();
        frames.push(f);
    }
    let sum_op = PsdOperator::new(sum, ctx)?;
    let rank_of_sum = sum_op.rank();
    let mut cat = CMatrix::zeros(n, total_cols);
    let mut col = 0;
    for f in &frames {
        for j in 0..f.ncols() {
            cat.set_column(col, &f.column(j));
            col += 1;
        }
    }
    let dim_of_range_span = rank_at(&cat, ctx.rank_rel_tol)?;
    Ok(RangeSumReport {
        rank_of_sum,
        dim_of_range_span,
        pass: rank_of_sum == dim_of_range_span,
    })
}

/// Report for ran (F^{1/2} M F^{1/2})^{1/2} = F^{1/2} ran M^{1/2}.
#[derive(Debug, Clone)]
pub struct SandwichRangeReport {
    pub left: Subspace,
    pub right: Subspace,
    pub max_angle: f64,
    pub pass: bool,
}

pub fn sandwich_range_check(f: &PsdOperator, m: &PsdOperator) -> Result<SandwichRangeReport> {
    if f.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: m.dim(),
        });
    }
    let ctx = f.ctx();
    let f_sqrt = f.sqrt();
    let sandwich = PsdOperator::new(f_sqrt.matrix() * m.matrix() * f_sqrt.matrix(), ctx)?;
    let left = sandwich.range();
    let right = Subspace::from_spanning(&(f_sqrt.matrix() * m.range().frame()), ctx)?;
    let angles = if left.dim() == right.dim() {
        principal_angles(&left, &right)?
    } else {
        vec![std::f64::consts::FRAC_PI_2]
    };
    let max_angle = angles.first().copied().unwrap_or(0.0);
    let pass = left.dim() == right.dim() && max_angle < ctx.angle_tol();
    Ok(SandwichRangeReport {
        left,
        right,
        max_angle,
        pass,
    })
}
