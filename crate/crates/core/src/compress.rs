//! The square-root compression calculus A -> A^{1/2} P A^{1/2}: diagnostics,
//! composition and monotone-factor recovery, the pathological block
//! construction, extreme-point splittings, iterated chains, the one-parameter
//! projection family P(x) with its intertwiners, and the unitary-group family.
//!
//! Compressions by projections are exactly the extreme points of the operator
//! interval [0, A], which is why the splitting A = A_1 + A_2 below decomposes
//! A into a pair of extreme points.

use num_complex::Complex64;

use crate::cmat::{fro_dist, herm_eig, op_norm, svd_parts, CMatrix};
use crate::error::{Error, Result};
use crate::psd::{principal_angles, PsdOperator, Subspace};
use crate::range::douglas_solve;
use crate::shorting::{block_split, shorted};

/// Diagnostics for a single compression A1 = A^{1/2} P_M A^{1/2}.
#[derive(Debug, Clone)]
pub struct CompressionReport {
    pub compressed: PsdOperator,
    /// ker A1 = {0}, decided by rank.
    pub kernel_trivial: bool,
    /// Dimension of ran A1^{1/2} intersected with ran A.
    pub range_intersect_dim: usize,
    /// Largest principal angle between ran A1^{1/2} and the A^{1/2}-image of M.
    pub range_image_angle: f64,
    /// Max over range probes h of | ||A1^{-1/2} h|| - ||A^{-1/2} h|| |.
    pub isometry_deviation: f64,
}

fn check_dims(a: &PsdOperator, m: &Subspace) -> Result<()> {
    if a.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: m.ambient_dim(),
        });
    }
    Ok(())
}

/// Compress A by the projection onto M and report the kernel, range, and
/// norm-isometry diagnostics that make the compression useful as a witness.
pub fn compress(a: &PsdOperator, m: &Subspace) -> Result<CompressionReport> {
    check_dims(a, m)?;
    let ctx = a.ctx();
    let a_sqrt = a.sqrt();
    let raw = a_sqrt.matrix() * m.projection() * a_sqrt.matrix();
    let compressed = PsdOperator::new_with_scale(raw, ctx, a.norm())?;
    let kernel_trivial = compressed.rank() == a.dim();
    let range_a1 = compressed.range();
    let range_intersect_dim = range_a1.intersection_dim(&a.range())?;
    let image = Subspace::from_spanning_scaled(&(a_sqrt.matrix() * m.frame()), ctx, a_sqrt.norm())?;
    let range_image_angle = if range_a1.dim() == image.dim() {
        principal_angles(&range_a1, &image)?
            .first()
            .copied()
            .unwrap_or(0.0)
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let a1_inv_sqrt = compressed.partial_inverse_sqrt();
    let a_inv_sqrt = a.partial_inverse_sqrt();
    let mut isometry_deviation = 0.0f64;
    for j in 0..range_a1.dim() {
        let h = range_a1.frame().column(j).into_owned();
        let lhs = (&a1_inv_sqrt * &h).norm();
        let rhs = (&a_inv_sqrt * &h).norm();
        isometry_deviation = isometry_deviation.max((lhs - rhs).abs());
    }
    Ok(CompressionReport {
        compressed,
        kernel_trivial,
        range_intersect_dim,
        range_image_angle,
        isometry_deviation,
    })
}

/// The operator recovered when a compressed operator is written back as
/// A^{1/2} (.) A^{1/2}: the unique representer supported on ran A. In the
/// ideal (infinite-dimensional) setting it is an orthogonal projection; at
/// finite scale it is a PSD contraction whose projection defect is reported.
#[derive(Debug, Clone)]
pub struct RecoveredProjection {
    pub mat: CMatrix,
    /// Range of the representer.
    pub range: Subspace,
    /// || P^2 - P ||_F.
    pub projection_defect: f64,
    /// || target - A^{1/2} P A^{1/2} ||_F.
    pub reconstruction_residual: f64,
}

fn recover_representer(
    base: &PsdOperator,
    target: &PsdOperator,
) -> Result<RecoveredProjection> {
    let ctx = base.ctx();
    let inv_sqrt = base.partial_inverse_sqrt();
    let mat = &inv_sqrt * target.matrix() * &inv_sqrt;
    let range = Subspace::from_spanning_scaled(&mat, ctx, 1.0)?;
    let projection_defect = fro_dist(&(&mat * &mat), &mat);
    let base_sqrt = base.sqrt();
    let rebuilt = base_sqrt.matrix() * &mat * base_sqrt.matrix();
    let reconstruction_residual = fro_dist(&rebuilt, target.matrix());
    Ok(RecoveredProjection {
        mat,
        range,
        projection_defect,
        reconstruction_residual,
    })
}

/// Result of composing two compressions.
#[derive(Debug, Clone)]
pub struct ComposeReport {
    pub a1: PsdOperator,
    pub a2: PsdOperator,
    /// Representer of the composite against the original A.
    pub p12: RecoveredProjection,
}

/// Compose A -> A1 (by P1) -> A2 (by P2) and recover the single representer
/// that writes A2 directly against A.
pub fn compose_compressions(
    a: &PsdOperator,
    p1: &Subspace,
    p2: &Subspace,
) -> Result<ComposeReport> {
    check_dims(a, p1)?;
    check_dims(a, p2)?;
    let a1 = compress(a, p1)?.compressed;
    let a2 = compress(&a1, p2)?.compressed;
    let p12 = recover_representer(a, &a2)?;
    Ok(ComposeReport { a1, a2, p12 })
}

/// Result of the monotone-factor recovery for nested projections.
#[derive(Debug, Clone)]
pub struct MonotoneFactorReport {
    pub a1: PsdOperator,
    pub a2: PsdOperator,
    /// Representer P with A1 = A2^{1/2} P A2^{1/2}.
    pub factor: RecoveredProjection,
    /// Dimension of ran(I - P) intersected with ran A2^{1/2} (rank reading).
    pub complement_intersect_dim: usize,
}

/// For nested subspaces M1 within M2, write the smaller compression against
/// the larger one. Fails with `NotNested` when M1 is not inside M2.
pub fn monotone_factor(
    a: &PsdOperator,
    m1: &Subspace,
    m2: &Subspace,
) -> Result<MonotoneFactorReport> {
    check_dims(a, m1)?;
    check_dims(a, m2)?;
    if !m1.is_subspace_of(m2)? {
        return Err(Error::NotNested);
    }
    let ctx = a.ctx();
    let a1 = compress(a, m1)?.compressed;
    let a2 = compress(a, m2)?.compressed;
    let factor = recover_representer(&a2, &a1)?;
    let n = a.dim();
    let complement = CMatrix::identity(n, n) - &factor.mat;
    let comp_range = Subspace::from_spanning_scaled(&complement, ctx, 1.0)?;
    let complement_intersect_dim = comp_range.intersection_dim(&a2.range())?;
    Ok(MonotoneFactorReport {
        a1,
        a2,
        factor,
        complement_intersect_dim,
    })
}

/// The assembled block witness [[W^2, WU], [U*W, U*U]] and its diagnostics.
#[derive(Debug, Clone)]
pub struct BlockWitness {
    /// Assembled operator on the coordinate split (M = first block).
    pub x: PsdOperator,
    pub m: Subspace,
    pub short_m_vanishes: bool,
    pub short_m_perp_vanishes: bool,
    /// ran W within ran U (the finite criterion for the M-short to vanish).
    pub ran_w_in_ran_u: bool,
    /// ran U within ran W (the finite criterion for the other short).
    pub ran_u_in_ran_w: bool,
    pub kernel_dim: usize,
    pub m_intersect_dim: usize,
    pub m_perp_intersect_dim: usize,
}

/// Assemble X = [[W^2, WU], [U*W, U*U]] on the coordinate split and report
/// which shorts vanish. (Xf, f) = ||W f1 + U f2||^2, so X is PSD by
/// construction and its kernel is exactly the joint kernel of the row map.
pub fn pathological_block(w: &PsdOperator, u: &CMatrix) -> Result<BlockWitness> {
    let k = w.dim();
    if u.nrows() != k {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: k,
        });
    }
    let md = u.ncols();
    let n = k + md;
    let ctx = w.ctx();
    let w2 = w.matrix() * w.matrix();
    let wu = w.matrix() * u;
    let mut x = CMatrix::zeros(n, n);
    x.view_mut((0, 0), (k, k)).copy_from(&w2);
    x.view_mut((0, k), (k, md)).copy_from(&wu);
    x.view_mut((k, 0), (md, k)).copy_from(&wu.adjoint());
    x.view_mut((k, k), (md, md)).copy_from(&(u.adjoint() * u));
    let x = PsdOperator::new(x, ctx)?;
    let m = Subspace::coordinate(n, &(0..k).collect::<Vec<_>>(), ctx);
    let m_perp = m.complement()?;
    let short_m = shorted(&x, &m)?;
    let short_m_perp = shorted(&x, &m_perp)?;
    let ran_w = w.range();
    let ran_u = Subspace::from_spanning(u, ctx)?;
    let ran_x_sqrt = x.range();
    Ok(BlockWitness {
        m_intersect_dim: m.intersection_dim(&ran_x_sqrt)?,
        m_perp_intersect_dim: m_perp.intersection_dim(&ran_x_sqrt)?,
        kernel_dim: n - x.rank(),
        short_m_vanishes: short_m.vanishes,
        short_m_perp_vanishes: short_m_perp.vanishes,
        ran_w_in_ran_u: ran_w.is_subspace_of(&ran_u)?,
        ran_u_in_ran_w: ran_u.is_subspace_of(&ran_w)?,
        x,
        m,
    })
}

/// Evaluation of the block criterion for trivial range intersections against
/// the direct shorted-operator test.
#[derive(Debug, Clone)]
pub struct GeneralCriterionReport {
    pub ker_x11_trivial: bool,
    pub ker_x22_trivial: bool,
    /// Nonzero coupling block whose range misses ran X11.
    pub coupling_disjoint: bool,
    /// Conjunction of the three block conditions.
    pub criterion_holds: bool,
    /// Both shorts vanish and ker X is trivial.
    pub direct_holds: bool,
    /// Whether the two evaluations agree (they must at finite dimension,
    /// where both are unsatisfiable).
    pub agree: bool,
}

/// Evaluate the three block conditions by rank in the (M, M-perp) frame and
/// compare with the direct test.
pub fn general_criterion(x: &PsdOperator, m: &Subspace) -> Result<GeneralCriterionReport> {
    check_dims(x, m)?;
    let ctx = x.ctx();
    let split = block_split(x, m)?;
    let scale = x.norm();
    let x11 = PsdOperator::new_with_scale(split.b11.clone(), ctx, scale)?;
    let x22 = PsdOperator::new_with_scale(split.b22.clone(), ctx, scale)?;
    let ker_x11_trivial = x11.rank() == split.k_dim;
    let ker_x22_trivial = x22.rank() == x.dim() - split.k_dim;
    let coupling_rank = crate::cmat::rank_at_scaled(&split.b12, ctx.rank_rel_tol, x.norm())?;
    let coupling_range = Subspace::from_spanning_scaled(&split.b12, ctx, x.norm())?;
    let coupling_disjoint =
        coupling_rank > 0 && coupling_range.intersection_dim(&x11.range())? == 0;
    let criterion_holds = ker_x11_trivial && ker_x22_trivial && coupling_disjoint;
    let short_m = shorted(x, m)?;
    let short_m_perp = shorted(x, &m.complement()?)?;
    let direct_holds = short_m.vanishes && short_m_perp.vanishes && x.rank() == x.dim();
    Ok(GeneralCriterionReport {
        ker_x11_trivial,
        ker_x22_trivial,
        coupling_disjoint,
        criterion_holds,
        direct_holds,
        agree: criterion_holds == direct_holds,
    })
}

/// Splitting of A into the pair of compressions by M and its complement.
#[derive(Debug, Clone)]
pub struct SplitExtremeReport {
    pub a1: PsdOperator,
    pub a2: PsdOperator,
    /// || A1 + A2 - A ||_F (pure projection algebra, rounding-level).
    pub sum_residual: f64,
    pub rank_a1: usize,
    pub rank_a2: usize,
    pub rank_a: usize,
    /// dim(ran A1^{1/2} + ran A2^{1/2}) as frames.
    pub range_sum_dim: usize,
    /// dim(ran A1^{1/2} intersect ran A2^{1/2}) as frames.
    pub range_intersect_dim: usize,
    /// Whether the direct sum of the two square-root ranges equals ran A^{1/2}.
    pub direct_sum_ok: bool,
}

/// Split A = A^{1/2} P_M A^{1/2} + A^{1/2} P_{M-perp} A^{1/2} and test the
/// direct-sum decomposition of the square-root ranges.
pub fn split_extreme(a: &PsdOperator, m: &Subspace) -> Result<SplitExtremeReport> {
    check_dims(a, m)?;
    let a1 = compress(a, m)?.compressed;
    let a2 = compress(a, &m.complement()?)?.compressed;
    let sum_residual = fro_dist(&(a1.matrix() + a2.matrix()), a.matrix());
    let r1 = a1.range();
    let r2 = a2.range();
    let range_sum_dim = r1.sum_dim(&r2)?;
    let range_intersect_dim = r1.intersection_dim(&r2)?;
    let direct_sum_ok = range_intersect_dim == 0 && range_sum_dim == a.rank();
    Ok(SplitExtremeReport {
        rank_a1: a1.rank(),
        rank_a2: a2.rank(),
        rank_a: a.rank(),
        a1,
        a2,
        sum_residual,
        range_sum_dim,
        range_intersect_dim,
        direct_sum_ok,
    })
}

/// One step of the iterated compression chain.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub a_k: PsdOperator,
    /// Representer of A_k against the original A.
    pub p_k: RecoveredProjection,
}

/// The iterated chain A_k = A_{k-1}^{1/2} P_M A_{k-1}^{1/2} with the
/// recovered representers and the monotonicity diagnostics.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// Operator norms of A_1 .. A_k.
    pub norms: Vec<f64>,
    /// A >= A_1 >= A_2 >= ... within tolerance.
    pub monotone_a: bool,
    /// P_1 >= P_2 >= ... within tolerance.
    pub monotone_p: bool,
    /// || A_last - A_last^{1/2} P_M A_last^{1/2} ||_F.
    pub fixed_point_residual: f64,
}

pub fn chain(a: &PsdOperator, m: &Subspace, k_max: usize) -> Result<ChainReport> {
    check_dims(a, m)?;
    let tol = 1e-9 * a.norm().max(1.0);
    let mut steps: Vec<ChainStep> = Vec::with_capacity(k_max);
    let mut norms = Vec::with_capacity(k_max);
    let mut monotone_a = true;
    let mut monotone_p = true;
    let mut current = a.clone();
    for _ in 0..k_max.max(1) {
        let next = compress(&current, m)?.compressed;
        if crate::cmat::psd_order_defect(next.matrix(), current.matrix())? > tol {
            monotone_a = false;
        }
        let p_k = recover_representer(a, &next)?;
        if let Some(prev) = steps.last() {
            if crate::cmat::psd_order_defect(&p_k.mat, &prev.p_k.mat)? > tol {
                monotone_p = false;
            }
        }
        norms.push(next.norm());
        steps.push(ChainStep {
            a_k: next.clone(),
            p_k,
        });
        current = next;
    }
    let last = &steps.last().expect("k_max >= 1").a_k;
    let fixed_point_residual = fro_dist(
        compress(last, m)?.compressed.matrix(),
        last.matrix(),
    );
    Ok(ChainReport {
        steps,
        norms,
        monotone_a,
        monotone_p,
        fixed_point_residual,
    })
}

fn sqrt_ranges_disjoint(a: &PsdOperator, b: &PsdOperator) -> Result<bool> {
    Ok(a.range().intersection_dim(&b.range())? == 0)
}

/// One sample of the projection family.
#[derive(Debug, Clone)]
pub struct FamilySample {
    pub x: f64,
    pub projection: CMatrix,
    /// || P(x)^2 - P(x) ||_F.
    pub projection_defect: f64,
    /// || A - (A+xB)^{1/2} P(x) (A+xB)^{1/2} ||_F.
    pub reconstruction_residual: f64,
}

/// The family x -> P(x) with A = (A+xB)^{1/2} P(x) (A+xB)^{1/2}, defined when
/// ran A^{1/2} and ran B^{1/2} intersect trivially (checked by rank).
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    /// The generating pair with trivial square-root-range intersection.
    pub a: PsdOperator,
    pub b: PsdOperator,
    pub samples: Vec<FamilySample>,
}

fn family_projection(a: &PsdOperator, b: &PsdOperator, x: f64) -> Result<CMatrix> {
    let ctx = a.ctx();
    let scale = a.norm() + x * b.norm();
    let h = PsdOperator::new_with_scale(a.matrix() + b.matrix().scale(x), ctx, scale)?;
    let s = h.partial_inverse_sqrt() * a.sqrt().matrix();
    Ok(&s * s.adjoint())
}

pub fn projection_family(
    a: &PsdOperator,
    b: &PsdOperator,
    xs: &[f64],
) -> Result<ProjectionFamily> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if !sqrt_ranges_disjoint(a, b)? {
        return Err(Error::HypothesisViolated {
            reason: "square-root ranges intersect nontrivially".into(),
        });
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::HypothesisViolated {
            reason: "family parameters must be positive".into(),
        });
    }
    let ctx = a.ctx();
    let jobs: Vec<f64> = xs.to_vec();
    let a_cl = a.clone();
    let b_cl = b.clone();
    let results = crate::par::par_map(jobs, move |x| -> Result<FamilySample> {
        let p = family_projection(&a_cl, &b_cl, x)?;
        let projection_defect = fro_dist(&(&p * &p), &p);
        let scale = a_cl.norm() + x * b_cl.norm();
        let h = PsdOperator::new_with_scale(
            a_cl.matrix() + b_cl.matrix().scale(x),
            ctx,
            scale,
        )?;
        let h_sqrt = h.sqrt();
        let rebuilt = h_sqrt.matrix() * &p * h_sqrt.matrix();
        let reconstruction_residual = fro_dist(&rebuilt, a_cl.matrix());
        Ok(FamilySample {
            x,
            projection: p,
            projection_defect,
            reconstruction_residual,
        })
    });
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ProjectionFamily {
        a: a.clone(),
        b: b.clone(),
        samples,
    })
}

/// Continuity probe: || P(x0 + delta) - P(x0) ||_F for each delta.
pub fn continuity_modulus(
    a: &PsdOperator,
    b: &PsdOperator,
    x0: f64,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let p0 = family_projection(a, b, x0)?;
    deltas
        .iter()
        .map(|&d| {
            let p = family_projection(a, b, x0 + d)?;
            Ok((d, fro_dist(&p, &p0)))
        })
        .collect()
}

/// The Douglas factor linking two members of the family, with its checks.
#[derive(Debug, Clone)]
pub struct IntertwinerReport {
    /// Z with (A+xB)^{1/2} = Z (A+yB)^{1/2}.
    pub z: CMatrix,
    pub z_norm: f64,
    /// || P(y) - Z* P(x) Z ||_F.
    pub conjugation_residual: f64,
    /// Singular values of Z restricted to the common-range complement of
    /// ran P(y); all equal sqrt(x/y) in exact arithmetic.
    pub restricted_singular_values: Vec<f64>,
}

/// Solve (A+xB)^{1/2} = Z (A+yB)^{1/2} for 0 < x <= y and verify the
/// conjugation law P(y) = Z* P(x) Z together with the scaling law on the
/// complement part.
pub fn intertwiner(a: &PsdOperator, b: &PsdOperator, x: f64, y: f64) -> Result<IntertwinerReport> {
    if !(x > 0.0 && y >= x) {
        return Err(Error::HypothesisViolated {
            reason: "need 0 < x <= y".into(),
        });
    }
    if !sqrt_ranges_disjoint(a, b)? {
        return Err(Error::HypothesisViolated {
            reason: "square-root ranges intersect nontrivially".into(),
        });
    }
    let ctx = a.ctx();
    let hx = PsdOperator::new_with_scale(a.matrix() + b.matrix().scale(x), ctx, a.norm() + x * b.norm())?;
    let hy = PsdOperator::new_with_scale(a.matrix() + b.matrix().scale(y), ctx, a.norm() + y * b.norm())?;
    // Adjoint form of the left-factor problem: H_x^{1/2} = H_y^{1/2} Z*.
    let factor = douglas_solve(hx.sqrt().matrix(), hy.sqrt().matrix(), ctx)?;
    let z = factor.c.adjoint();
    let z_norm = op_norm(&z)?;
    if z_norm > 1.0 + ctx.cmp_tol {
        return Err(Error::NotContraction { norm: z_norm });
    }
    let px = family_projection(a, b, x)?;
    let py = family_projection(a, b, y)?;
    let conjugated = z.adjoint() * &px * &z;
    let conjugation_residual = fro_dist(&py, &conjugated);
    // Complement of ran P(y) inside the common range ran(A+yB).
    let common = hy.range_projection();
    let q = &common - &py;
    let q_frame = Subspace::from_spanning_scaled(&q, ctx, 1.0)?;
    let restricted = &z * q_frame.frame();
    let mut restricted_singular_values = if q_frame.dim() == 0 {
        Vec::new()
    } else {
        svd_parts(&restricted)?.singular_values
    };
    restricted_singular_values.sort_by(|p, q2| q2.partial_cmp(p).unwrap());
    Ok(IntertwinerReport {
        z,
        z_norm,
        conjugation_residual,
        restricted_singular_values,
    })
}

/// Outcome of the unitary-group family check at one group parameter.
#[derive(Debug, Clone)]
pub enum GroupFamilyOutcome {
    /// Parameter skipped: the range hypothesis failed there (or t = 0).
    Skipped { t: f64, reason: String },
    /// Hypotheses held at t and -t; the conjugation identity was checked.
    Verified { t: f64, conjugation_residual: f64 },
}

/// Unitary exp(i t H) for Hermitian H, through the spectral decomposition.
pub fn unitary_from_generator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = herm_eig(h)?;
    let n = eig.dim();
    let mut scaled = eig.vectors.clone();
    for (j, lam) in eig.values.iter().enumerate() {
        let phase = (Complex64::new(0.0, t * lam)).exp();
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(scaled * eig.vectors.adjoint())
}

/// For each t, build B_t = U_t A U_{-t}, derive the family projection at
/// parameter 1 for the pair (A, B_t), and verify the conjugation identity
/// relating the families at t and -t. The orthogonal complement is taken
/// inside the common range ran(A + B_{-t}), which is where the finite
/// representer lives. Parameters whose range hypothesis fails are skipped
/// with a notice rather than an error.
pub fn group_family(
    a: &PsdOperator,
    h: &CMatrix,
    ts: &[f64],
) -> Result<Vec<GroupFamilyOutcome>> {
    if h.nrows() != a.dim() || h.ncols() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: h.nrows(),
            right: a.dim(),
        });
    }
    let ctx = a.ctx();
    let a = a.clone();
    let h = h.clone();
    let jobs: Vec<f64> = ts.to_vec();
    let outcomes = crate::par::par_map(jobs, move |t| -> Result<GroupFamilyOutcome> {
        if t == 0.0 {
            return Ok(GroupFamilyOutcome::Skipped {
                t,
                reason: "parameter zero excluded by the family definition".into(),
            });
        }
        let u_t = unitary_from_generator(&h, t)?;
        let u_mt = u_t.adjoint();
        let b_t = PsdOperator::new_with_scale(&u_t * a.matrix() * &u_mt, ctx, a.norm())?;
        let b_mt = PsdOperator::new_with_scale(&u_mt * a.matrix() * &u_t, ctx, a.norm())?;
        if !sqrt_ranges_disjoint(&a, &b_t)? || !sqrt_ranges_disjoint(&a, &b_mt)? {
            return Ok(GroupFamilyOutcome::Skipped {
                t,
                reason: "conjugated range meets ran A^{1/2} nontrivially".into(),
            });
        }
        let p_t = family_projection(&a, &b_t, 1.0)?;
        let p_mt = family_projection(&a, &b_mt, 1.0)?;
        let common = PsdOperator::new_with_scale(
            a.matrix() + b_mt.matrix(),
            ctx,
            2.0 * a.norm(),
        )?
        .range_projection();
        let lhs = &common - &p_mt;
        let rhs = &u_mt * &p_t * &u_t;
        Ok(GroupFamilyOutcome::Verified {
            t,
            conjugation_residual: fro_dist(&lhs, &rhs),
        })
    });
    outcomes.into_iter().collect()
}
