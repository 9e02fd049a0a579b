//! Parallel addition of PSD operators by three independent routes and the
//! Kreĭn shorted operator by three routes, plus the exact trivial-intersection
//! detector that a vanishing short provides.
//!
//! The block route is the canonical output everywhere; the variational and
//! projection routes exist to disagree loudly when something is wrong.

use num_complex::Complex64;

use crate::cmat::{cr, fro_dist, pinv, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::psd::{PsdOperator, Subspace};

/// Default geometric epsilon schedule 1e-1 .. 1e-8 for the limit route.
/// The floor sits at the square root of machine epsilon: below it the
/// computed resolvent of a singular sum is dominated by inversion noise
/// growing like eps/epsilon, so later iterates move away from the limit.
pub fn default_eps_schedule() -> Vec<f64> {
    (1..=8).map(|k| 10f64.powi(-k)).collect()
}

fn check_same_dim(f: &PsdOperator, g: &PsdOperator) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    Ok(())
}

/// The nonnegative contraction M with F = (F+G)^{1/2} M (F+G)^{1/2},
/// supported on ran(F+G). The parallel sum vanishes exactly when M is an
/// orthogonal projection there.
pub fn contraction_witness(f: &PsdOperator, g: &PsdOperator) -> Result<CMatrix> {
    check_same_dim(f, g)?;
    let sum = PsdOperator::new_with_scale(
        f.matrix() + g.matrix(),
        f.ctx(),
        f.norm() + g.norm(),
    )?;
    let hinv = sum.partial_inverse_sqrt();
    Ok(&hinv * f.matrix() * &hinv)
}

/// Parallel sum F : G = (F+G)^{1/2} (M - M^2) (F+G)^{1/2} with M the
/// contraction witness. PSD, below F and below G in PSD order.
pub fn parallel_sum(f: &PsdOperator, g: &PsdOperator) -> Result<PsdOperator> {
    check_same_dim(f, g)?;
    let scale = f.norm() + g.norm();
    let sum = PsdOperator::new_with_scale(f.matrix() + g.matrix(), f.ctx(), scale)?;
    let m = contraction_witness(f, g)?;
    let m_minus_m2 = &m - &m * &m;
    let h_sqrt = sum.sqrt();
    let res = h_sqrt.matrix() * m_minus_m2 * h_sqrt.matrix();
    PsdOperator::new_with_scale(res, f.ctx(), scale)
}

/// Value of the variational definition at one vector: the infimum of
/// (Ff, f) + (Gg, g) over splittings h = f + g, computed by solving the
/// stationarity equation (F+G) g = F h with an SVD pseudoinverse.
pub fn variational_value(f: &PsdOperator, g: &PsdOperator, h: &CVector) -> Result<f64> {
    check_same_dim(f, g)?;
    if h.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            left: h.len(),
            right: f.dim(),
        });
    }
    let sum = f.matrix() + g.matrix();
    let sum_pinv = pinv(&sum, f.ctx().rank_rel_tol)?;
    Ok(variational_value_with(f, g, &sum_pinv, h))
}

fn variational_value_with(
    f: &PsdOperator,
    g: &PsdOperator,
    sum_pinv: &CMatrix,
    h: &CVector,
) -> f64 {
    let fh = f.matrix() * h;
    let g_opt = sum_pinv * fh;
    let f_part = h - &g_opt;
    let vf = (f.matrix() * &f_part).dotc(&f_part).re;
    let vg = (g.matrix() * &g_opt).dotc(&g_opt).re;
    vf + vg
}

/// Assemble the parallel sum from the variational values by polarization
/// over the standard basis. Serves as an oracle route for `parallel_sum`.
pub fn parallel_sum_variational(f: &PsdOperator, g: &PsdOperator) -> Result<PsdOperator> {
    let basis = CMatrix::identity(f.dim(), f.dim());
    parallel_sum_variational_in_basis(f, g, &basis)
}

/// Variational assembly over a caller-chosen orthonormal probe basis (one
/// probe per column). Any orthonormal basis reproduces the same operator.
pub fn parallel_sum_variational_in_basis(
    f: &PsdOperator,
    g: &PsdOperator,
    basis_probes: &CMatrix,
) -> Result<PsdOperator> {
    check_same_dim(f, g)?;
    let n = f.dim();
    if basis_probes.nrows() != n || basis_probes.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: basis_probes.nrows(),
            right: n,
        });
    }
    let sum = f.matrix() + g.matrix();
    let sum_pinv = pinv(&sum, f.ctx().rank_rel_tol)?;
    let q = |v: &CVector| variational_value_with(f, g, &sum_pinv, v);
    let probe = |i: usize| basis_probes.column(i).into_owned();
    let im = Complex64::new(0.0, 1.0);
    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = cr(q(&probe(i)));
        for j in (i + 1)..n {
            let (ei, ej) = (probe(i), probe(j));
            let re_part = (q(&(&ei + &ej)) - q(&(&ei - &ej))) / 4.0;
            let im_part = (q(&(&ei - &ej.map(|x| x * im))) - q(&(&ei + &ej.map(|x| x * im)))) / 4.0;
            let val = Complex64::new(re_part, im_part);
            k[(i, j)] = val;
            k[(j, i)] = val.conj();
        }
    }
    // The polarization coefficients live in the probe coordinates.
    let ambient = basis_probes * k * basis_probes.adjoint();
    PsdOperator::new_with_scale(ambient, f.ctx(), f.norm() + g.norm())
}

/// Outcome of the strong-limit route F (F + G + eps I)^{-1} G.
#[derive(Debug, Clone)]
pub struct LimitRoute {
    pub result: PsdOperator,
    /// Frobenius Cauchy increments between consecutive schedule points.
    pub increments: Vec<f64>,
}

/// Evaluate the limit route along a strictly decreasing epsilon schedule.
/// Fails with `NotConverged` when the Cauchy increments do not decrease
/// monotonically below 1e-6 relative to ||F|| + ||G||.
pub fn parallel_sum_limit(
    f: &PsdOperator,
    g: &PsdOperator,
    eps_schedule: &[f64],
) -> Result<LimitRoute> {
    check_same_dim(f, g)?;
    if eps_schedule.is_empty()
        || eps_schedule.iter().any(|&e| !(e > 0.0))
        || eps_schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::BadSchedule);
    }
    let n = f.dim();
    let scale = f.norm() + g.norm();
    let mut prev: Option<CMatrix> = None;
    let mut increments = Vec::new();
    let mut last = CMatrix::zeros(n, n);
    for &eps in eps_schedule {
        let shifted = f.matrix() + g.matrix() + CMatrix::identity(n, n).scale(eps);
        let inv = crate::cmat::hpd_inverse(&shifted)?;
        let iterate = f.matrix() * inv * g.matrix();
        if let Some(p) = &prev {
            increments.push(fro_dist(&iterate, p));
        }
        prev = Some(iterate.clone());
        last = iterate;
    }
    // Convergence: the increments must decrease monotonically until they
    // fall below 1e-6 relative to the inputs. Past that point the sequence
    // sits at the floating-point floor and may wobble.
    let slack = 1e-12 * scale;
    let target = 1e-6 * scale;
    let crossing = increments.iter().position(|&d| d <= target);
    let monotone_prefix = match crossing {
        Some(idx) => increments[..=idx].windows(2).all(|w| w[1] <= w[0] + slack),
        None => false,
    };
    if !monotone_prefix {
        return Err(Error::NotConverged {
            increment: increments.last().copied().unwrap_or(f64::NAN),
        });
    }
    // The iterate approximates the PSD limit to the convergence target, so
    // negative eigenvalues up to that size are approximation debris.
    let eig = crate::cmat::herm_eig(&last)?;
    if let Some(&worst) = eig.values.last() {
        if worst < -target {
            return Err(Error::NotConverged { increment: -worst });
        }
    }
    let cleaned = eig.apply_fn(|v| v.max(0.0));
    let result = PsdOperator::new_with_scale(cleaned, f.ctx(), scale)?;
    Ok(LimitRoute { result, increments })
}

/// Kreĭn shorted operator of B to the subspace K, with the diagnostics the
/// three routes provide.
#[derive(Debug, Clone)]
pub struct ShortReport {
    /// Block-route result (generalized Schur complement), in ambient coordinates.
    pub shorted: PsdOperator,
    /// Max pairwise Frobenius distance between the three routes.
    pub route_disagreement: f64,
    /// Whether the short vanishes: ||B_K|| <= cmp_tol * ||B||.
    pub vanishes: bool,
    /// ran B12* within ran B22^{1/2} (always true for PSD B).
    pub coupling_condition_ok: bool,
}

/// Coordinate split of B against (K, K-perp): unitary Q = [K | K-perp] and
/// the blocks of Q* B Q.
pub(crate) struct BlockSplit {
    pub(crate) q: CMatrix,
    pub(crate) k_dim: usize,
    pub(crate) b11: CMatrix,
    pub(crate) b12: CMatrix,
    pub(crate) b22: CMatrix,
}

pub(crate) fn block_split(b: &PsdOperator, k: &Subspace) -> Result<BlockSplit> {
    if b.dim() != k.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: b.dim(),
            right: k.ambient_dim(),
        });
    }
    let n = b.dim();
    let k_dim = k.dim();
    let comp = k.complement()?;
    let mut q = CMatrix::zeros(n, n);
    for j in 0..k_dim {
        q.set_column(j, &k.frame().column(j));
    }
    for j in 0..(n - k_dim) {
        q.set_column(k_dim + j, &comp.frame().column(j));
    }
    let bb = q.adjoint() * b.matrix() * &q;
    let b11 = bb.view((0, 0), (k_dim, k_dim)).into_owned();
    let b12 = bb.view((0, k_dim), (k_dim, n - k_dim)).into_owned();
    let b22 = bb.view((k_dim, k_dim), (n - k_dim, n - k_dim)).into_owned();
    Ok(BlockSplit {
        q,
        k_dim,
        b11,
        b12,
        b22,
    })
}

pub(crate) fn embed_k_block(split: &BlockSplit, s11: &CMatrix, n: usize) -> CMatrix {
    let mut padded = CMatrix::zeros(n, n);
    padded.view_mut((0, 0), (split.k_dim, split.k_dim)).copy_from(s11);
    &split.q * padded * split.q.adjoint()
}

/// Orthogonal complement of W inside ran B, as the eigenvalue-1 space of
/// P_{ran B} - P_W (W is contained in ran B, so the spectrum sits at 0 and 1).
pub(crate) fn omega_subspace(b: &PsdOperator, w: &Subspace) -> Result<Subspace> {
    let diff = b.range_projection() - w.projection();
    let eig = crate::cmat::herm_eig(&diff)?;
    let frame = eig.select_vectors(|v| v > 0.5);
    Ok(Subspace::from_orthonormal_frame(frame, b.ctx()))
}

/// Shorted operator by all three routes, returned in ambient coordinates.
pub fn shorted(b: &PsdOperator, k: &Subspace) -> Result<ShortReport> {
    let ctx = b.ctx();
    let n = b.dim();
    let scale = b.norm();
    let split = block_split(b, k)?;

    // Route 1, block formula: B11 - (B22^{[-1/2]} B12*)* (B22^{[-1/2]} B12*).
    let b22_op = PsdOperator::new_with_scale(split.b22.clone(), ctx, scale)?;
    let d = b22_op.partial_inverse_sqrt() * split.b12.adjoint();
    let s11_block = &split.b11 - d.adjoint() * &d;
    let route1 = embed_k_block(&split, &s11_block, n);

    // Route 2, variational: per-probe stationarity solves assembled by
    // polarization over the K-coordinate basis, with an SVD pseudoinverse.
    let b22_pinv = pinv(&split.b22, ctx.rank_rel_tol)?;
    let kd = split.k_dim;
    let q_val = |f1: &CVector| -> f64 {
        let coupling = split.b12.adjoint() * f1;
        let x = &b22_pinv * &coupling;
        let direct = (&split.b11 * f1).dotc(f1).re;
        let corr = coupling.dotc(&x).re;
        direct - corr
    };
    let im = Complex64::new(0.0, 1.0);
    let basis = |i: usize| {
        let mut v = CVector::zeros(kd);
        v[i] = cr(1.0);
        v
    };
    let mut s11_var = CMatrix::zeros(kd, kd);
    for i in 0..kd {
        s11_var[(i, i)] = cr(q_val(&basis(i)));
        for j in (i + 1)..kd {
            let (ei, ej) = (basis(i), basis(j));
            let re_part = (q_val(&(&ei + &ej)) - q_val(&(&ei - &ej))) / 4.0;
            let im_part =
                (q_val(&(&ei - &ej.map(|x| x * im))) - q_val(&(&ei + &ej.map(|x| x * im)))) / 4.0;
            let val = Complex64::new(re_part, im_part);
            s11_var[(i, j)] = val;
            s11_var[(j, i)] = val.conj();
        }
    }
    let route2 = embed_k_block(&split, &s11_var, n);

    // Route 3, Omega projection: B^{1/2} P_Omega B^{1/2} with
    // Omega = ran B minus the closure of B^{1/2} K-perp. The subtraction is
    // done on projections, whose spectra sit at 0 and 1 regardless of how
    // small the short is.
    let b_sqrt = b.sqrt();
    let comp = k.complement()?;
    let w = Subspace::from_spanning_scaled(
        &(b_sqrt.matrix() * comp.frame()),
        ctx,
        b_sqrt.norm(),
    )?;
    let omega = omega_subspace(b, &w)?;
    let route3 = b_sqrt.matrix() * omega.projection() * b_sqrt.matrix();

    let route_disagreement = fro_dist(&route1, &route2)
        .max(fro_dist(&route1, &route3))
        .max(fro_dist(&route2, &route3));

    // PSD block structure forces the coupling range inside ran B22^{1/2}.
    let coupling = Subspace::from_spanning(&split.b12.adjoint(), ctx)?;
    let coupling_condition_ok = coupling.is_subspace_of(&b22_op.range())?;

    let shorted = PsdOperator::new_with_scale(route1, ctx, scale)?;
    let vanishes = shorted.norm() <= ctx.cmp_tol * scale;
    Ok(ShortReport {
        shorted,
        route_disagreement,
        vanishes,
        coupling_condition_ok,
    })
}

/// The contraction Gamma linking the blocks of a PSD operator, and both
/// shorts recomputed through it.
#[derive(Debug, Clone)]
pub struct GammaReport {
    /// Gamma = B11^{[-1/2]} B12 B22^{[-1/2]}, a contraction ran B22 -> ran B11.
    pub gamma: CMatrix,
    pub gamma_norm: f64,
    /// Distance of the Gamma-route short to the block-route short, for K.
    pub cross_check_k: f64,
    /// Same for the complement of K.
    pub cross_check_k_perp: f64,
}

/// Extract Gamma and recompute both shorts as B11^{1/2}(I - Gamma Gamma*)B11^{1/2}
/// and B22^{1/2}(I - Gamma* Gamma)B22^{1/2}, cross-checking against `shorted`.
pub fn gamma_form(b: &PsdOperator, k: &Subspace) -> Result<GammaReport> {
    let ctx = b.ctx();
    let n = b.dim();
    let scale = b.norm();
    let split = block_split(b, k)?;
    let b11_op = PsdOperator::new_with_scale(split.b11.clone(), ctx, scale)?;
    let b22_op = PsdOperator::new_with_scale(split.b22.clone(), ctx, scale)?;
    let gamma = b11_op.partial_inverse_sqrt() * &split.b12 * b22_op.partial_inverse_sqrt();
    let gamma_norm = crate::cmat::op_norm(&gamma)?;
    if gamma_norm > 1.0 + ctx.cmp_tol {
        return Err(Error::NotContraction { norm: gamma_norm });
    }
    let kd = split.k_dim;
    let b11_sqrt = b11_op.sqrt();
    let b22_sqrt = b22_op.sqrt();
    let short_k =
        b11_sqrt.matrix() * (CMatrix::identity(kd, kd) - &gamma * gamma.adjoint()) * b11_sqrt.matrix();
    let md = n - kd;
    let short_kp =
        b22_sqrt.matrix() * (CMatrix::identity(md, md) - gamma.adjoint() * &gamma) * b22_sqrt.matrix();

    let short_k_ambient = embed_k_block(&split, &short_k, n);
    let mut padded = CMatrix::zeros(n, n);
    padded.view_mut((kd, kd), (md, md)).copy_from(&short_kp);
    let short_kp_ambient = &split.q * padded * split.q.adjoint();

    let block_k = shorted(b, k)?;
    let block_kp = shorted(b, &k.complement()?)?;
    Ok(GammaReport {
        gamma,
        gamma_norm,
        cross_check_k: fro_dist(&short_k_ambient, block_k.shorted.matrix()),
        cross_check_k_perp: fro_dist(&short_kp_ambient, block_kp.shorted.matrix()),
    })
}

/// Exact trivial-intersection detector: the short vanishes if and only if
/// K meets ran B^{1/2} only at zero. The norm test is cross-validated against
/// the frame-rank intersection; both must agree for a `true`.
pub fn trivial_intersection(b: &PsdOperator, k: &Subspace) -> Result<bool> {
    let report = shorted(b, k)?;
    let rank_trivial = k.intersection_dim(&b.range())? == 0;
    Ok(report.vanishes && rank_trivial)
}
