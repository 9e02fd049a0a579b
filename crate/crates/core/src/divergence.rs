//! Divergence-form operators L2* L1 with L1 = L2 restricted to a subspace,
//! their Friedrichs and Kreĭn extension relations, resolvent-sandwich
//! sampling over admissible extensions, and the product constructions for an
//! invertible Hermitian factor and its polar-decomposed generalization.

use rand::Rng;

use crate::cmat::{fro_dist, fro_norm, herm_eig, rank_at, CMatrix};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::psd::{PsdOperator, Subspace};
use crate::relation::{split_pair, FormData, NonnegRelation};
use crate::sampling::{random_hermitian, rng_from_seed, SeededRng};

/// Symmetric operator given by a domain subspace and its ambient-valued
/// action on the domain frame (column j is the image of frame column j).
#[derive(Debug, Clone)]
pub struct PartialOperator {
    domain: Subspace,
    action_on_frame: CMatrix,
    /// || G - G* ||_F / || G ||_F for the compressed form G = F* A F.
    pub symmetry_defect: f64,
    /// Most negative eigenvalue of the compressed form (0 when nonnegative).
    pub negativity: f64,
}

impl PartialOperator {
    pub fn new(domain: Subspace, action_on_frame: CMatrix) -> Result<Self> {
        if action_on_frame.nrows() != domain.ambient_dim()
            || action_on_frame.ncols() != domain.dim()
        {
            return Err(Error::DimensionMismatch {
                left: action_on_frame.ncols(),
                right: domain.dim(),
            });
        }
        let gram = domain.frame().adjoint() * &action_on_frame;
        let herm = (&gram + gram.adjoint()).scale(0.5);
        let scale = fro_norm(&gram).max(1e-300);
        let symmetry_defect = fro_norm(&(&gram - &herm)) / scale;
        if symmetry_defect > 1e-6 {
            return Err(Error::NotHermitian {
                asymmetry: symmetry_defect,
            });
        }
        let eig = herm_eig(&herm)?;
        let negativity = (-eig.values.last().copied().unwrap_or(0.0)).max(0.0);
        if negativity > 1e-8 * eig.values.first().copied().unwrap_or(0.0).max(1.0) {
            return Err(Error::NotPsd {
                eigenvalue: -negativity,
                clamp: 0.0,
            });
        }
        Ok(Self {
            domain,
            action_on_frame,
            symmetry_defect,
            negativity,
        })
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    /// Image of the j-th domain frame column.
    pub fn action_on_frame(&self) -> &CMatrix {
        &self.action_on_frame
    }
}

/// The divergence-form restriction f -> L2* L2 f on the domain D.
pub fn divergence_form(l2: &CMatrix, d: &Subspace) -> Result<PartialOperator> {
    if l2.ncols() != d.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: l2.ncols(),
            right: d.ambient_dim(),
        });
    }
    let action = l2.adjoint() * l2 * d.frame();
    PartialOperator::new(d.clone(), action)
}

/// Friedrichs extension relation: the form u -> ||L2 u||^2 with form domain
/// exactly D, realized by the resolvent J (J* (L2* L2 + I) J)^{-1} J* for the
/// domain frame J.
pub fn friedrichs(l2: &CMatrix, d: &Subspace) -> Result<NonnegRelation> {
    if l2.ncols() != d.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: l2.ncols(),
            right: d.ambient_dim(),
        });
    }
    let ctx = d.ctx();
    let n = d.ambient_dim();
    if d.is_trivial() {
        return NonnegRelation::from_resolvent(PsdOperator::zero(n, ctx));
    }
    let j = d.frame();
    let shifted = l2.adjoint() * l2 + CMatrix::identity(n, n);
    let gram = j.adjoint() * shifted * j;
    let gram_inv = crate::cmat::hpd_inverse(&gram)?;
    let resolvent = j * gram_inv * j.adjoint();
    NonnegRelation::from_resolvent(PsdOperator::new_with_scale(resolvent, ctx, 1.0)?)
}

/// Kreĭn extension: the operator L2* P L2 with P the projection onto L2 D.
/// Its form domain is the full source space.
pub fn krein(l2: &CMatrix, d: &Subspace) -> Result<NonnegRelation> {
    if l2.ncols() != d.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: l2.ncols(),
            right: d.ambient_dim(),
        });
    }
    let ctx = d.ctx();
    let image = Subspace::from_spanning_scaled(&(l2 * d.frame()), ctx, crate::cmat::op_norm(l2)?)?;
    let a_k = l2.adjoint() * image.projection() * l2;
    Ok(NonnegRelation::from_operator(&PsdOperator::new_with_scale(
        a_k,
        ctx,
        crate::cmat::op_norm(l2)?.powi(2),
    )?))
}

/// Sandwich test over sampled admissible extensions.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub samples_checked: usize,
    /// Worst failure of resolvent(Friedrichs) <= resolvent(sample).
    pub worst_left_defect: f64,
    /// Worst failure of resolvent(sample) <= resolvent(Krein).
    pub worst_right_defect: f64,
    pub pass: bool,
}

/// Sample nonnegative self-adjoint extensions of the divergence form and
/// assert the resolvent sandwich between the Friedrichs and Kreĭn extremes.
/// Samples are convex combinations of the two extreme resolvents plus random
/// Hermitian bumps supported off (L2* L2 + I) D, which preserves the
/// restriction to the original domain; bumps are halved until the sample
/// stays a valid resolvent.
pub fn extension_sandwich_check(
    l2: &CMatrix,
    d: &Subspace,
    samples: usize,
    seed: u64,
) -> Result<SandwichReport> {
    let ctx = d.ctx();
    let n = d.ambient_dim();
    let r_f = friedrichs(l2, d)?.resolvent().clone();
    let r_k = krein(l2, d)?.resolvent().clone();
    let shifted = l2.adjoint() * l2 + CMatrix::identity(n, n);
    let constrained = Subspace::from_spanning(&(shifted * d.frame()), ctx)?;
    let free = CMatrix::identity(n, n) - constrained.projection();

    let mut rng = rng_from_seed(seed);
    let jobs: Vec<(f64, CMatrix)> = (0..samples.max(1))
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..1.0);
            let bump = random_hermitian(&mut rng, n, 0.3);
            (theta, bump)
        })
        .collect();
    let tol = 1e-8;
    let results = par_map(jobs, |(theta, bump)| -> Result<(f64, f64)> {
        let base = r_f.matrix().scale(theta) + r_k.matrix().scale(1.0 - theta);
        let mut scaled = &free * &bump * &free;
        let mut sample = None;
        for _ in 0..60 {
            let candidate = &base + &scaled;
            let eig = herm_eig(&candidate)?;
            let lo = eig.values.last().copied().unwrap_or(0.0);
            let hi = eig.values.first().copied().unwrap_or(0.0);
            if lo >= -1e-12 && hi <= 1.0 + 1e-12 {
                sample = Some(candidate);
                break;
            }
            scaled = scaled.scale(0.5);
        }
        let sample = sample.unwrap_or(base);
        let left = crate::cmat::psd_order_defect(r_f.matrix(), &sample)?;
        let right = crate::cmat::psd_order_defect(&sample, r_k.matrix())?;
        Ok((left, right))
    });
    let mut worst_left_defect = 0.0f64;
    let mut worst_right_defect = 0.0f64;
    let mut samples_checked = 0usize;
    for r in results {
        let (l, rr) = r?;
        worst_left_defect = worst_left_defect.max(l);
        worst_right_defect = worst_right_defect.max(rr);
        samples_checked += 1;
    }
    Ok(SandwichReport {
        samples_checked,
        worst_left_defect,
        worst_right_defect,
        pass: worst_left_defect <= tol && worst_right_defect <= tol,
    })
}

/// Report for the product constructions over an invertible Hermitian factor.
#[derive(Debug, Clone)]
pub struct ProductPairReport {
    pub d1: Subspace,
    pub d2: Subspace,
    /// Trivial intersection and full span of the pair.
    pub direct_sum_ok: bool,
    /// Resolvent-sum identity residual from the underlying split.
    pub resolvent_sum_residual: f64,
    /// Defects of resolvent(Friedrichs_k) <= resolvent(B^2) in PSD order.
    pub friedrichs_order_defects: [f64; 2],
    /// Max over form-domain probes of |Friedrichs_k[u,u] - ||B u||^2|.
    pub form_match_max: f64,
    /// || resolvent(krein(B, B^{-1} D_k)) - resolvent(B P_{D_k} B) ||_F.
    pub krein_residuals: [f64; 2],
}

/// Derive the pair (D1, D2) from the split of B^2 along M, restrict B to
/// each, and verify the Friedrichs and Kreĭn identities for the products at
/// matrix level. Requires B Hermitian and invertible.
pub fn product_pair(b: &CMatrix, m: &Subspace) -> Result<ProductPairReport> {
    let n = b.nrows();
    if b.ncols() != n || m.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            left: b.ncols(),
            right: m.ambient_dim(),
        });
    }
    let ctx = m.ctx();
    let herm_defect = fro_norm(&(b - b.adjoint()));
    if herm_defect > 1e-6 * fro_norm(b).max(1e-300) {
        return Err(Error::NotHermitian {
            asymmetry: herm_defect / fro_norm(b),
        });
    }
    if rank_at(b, ctx.rank_rel_tol)? != n {
        return Err(Error::NotInvertible);
    }
    let b_eig = herm_eig(b)?;
    let b_inv = b_eig.apply_fn(|lam| 1.0 / lam);

    let t = PsdOperator::new(b * b, ctx)?;
    let split = split_pair(&t, m)?;
    let d1 = split.rel1.dom_closure();
    let d2 = split.rel2.dom_closure();
    let direct_sum_ok = d1.intersection_dim(&d2)? == 0 && d1.sum_dim(&d2)? == n;

    let rel_t = NonnegRelation::from_operator(&t);
    let r_t = rel_t.resolvent();

    let mut friedrichs_order_defects = [0.0f64; 2];
    let mut krein_residuals = [0.0f64; 2];
    let mut form_match_max = 0.0f64;
    for (idx, dk) in [&d1, &d2].into_iter().enumerate() {
        let pre = Subspace::from_spanning(&(&b_inv * dk.frame()), ctx)?;
        let fr = friedrichs(b, &pre)?;
        friedrichs_order_defects[idx] =
            crate::cmat::psd_order_defect(fr.resolvent().matrix(), r_t.matrix())?;
        let form = FormData::of(&fr);
        for j in 0..pre.dim() {
            let u = pre.frame().column(j).into_owned();
            let lhs = form.value(&u, &u)?.re;
            let rhs = (b * &u).norm_squared();
            form_match_max = form_match_max.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        }
        let kr = krein(b, &pre)?;
        let model = NonnegRelation::from_operator(&PsdOperator::new_with_scale(
            b * dk.projection() * b,
            ctx,
            crate::cmat::op_norm(b)?.powi(2),
        )?);
        krein_residuals[idx] = fro_dist(kr.resolvent().matrix(), model.resolvent().matrix());
    }
    Ok(ProductPairReport {
        d1,
        d2,
        direct_sum_ok,
        resolvent_sum_residual: split.resolvent_sum_residual,
        friedrichs_order_defects,
        form_match_max,
        krein_residuals,
    })
}

/// Report for the polar-decomposed restriction construction.
#[derive(Debug, Clone)]
pub struct PolarReport {
    /// || B - U |B| ||_F.
    pub polar_residual: f64,
    /// || U* U - I || on the source space.
    pub isometry_defect: f64,
    /// || B* (U B_k-frame) - |B| (|B| frame) || per side: the adjoint-product
    /// identity at frame level.
    pub adjoint_product_residuals: [f64; 2],
    /// dim of the intersection of the two product-domain subspaces.
    pub domain_intersection_dim: usize,
    /// dim ker B* (the cokernel of the source map).
    pub kernel_dim: usize,
    /// The intersection equals ker B*.
    pub item4_ok: bool,
}

/// Polar-decompose a full-column-rank map, push the product pair of its
/// modulus through the isometric factor, and verify the adjoint-product and
/// domain-intersection identities.
pub fn polar_restrictions(bop: &CMatrix, m: &Subspace) -> Result<PolarReport> {
    let (rows, cols) = (bop.nrows(), bop.ncols());
    if m.ambient_dim() != cols {
        return Err(Error::DimensionMismatch {
            left: m.ambient_dim(),
            right: cols,
        });
    }
    let ctx = m.ctx();
    let rank = rank_at(bop, ctx.rank_rel_tol)?;
    if rank != cols {
        return Err(Error::RankDeficientSource { rank, cols });
    }
    let modulus = PsdOperator::new(bop.adjoint() * bop, ctx)?.sqrt();
    let modulus_inv = modulus.pinv();
    let u = bop * &modulus_inv;
    let polar_residual = fro_dist(bop, &(&u * modulus.matrix()));
    let isometry_defect = fro_dist(&(u.adjoint() * &u), &CMatrix::identity(cols, cols));

    let pair = product_pair(modulus.matrix(), m)?;

    // B* B_k = |B| U* U |B| restricted: compare against |B| |B| on each frame.
    let b_adj = bop.adjoint();
    let mut adjoint_product_residuals = [0.0f64; 2];
    for (idx, dk) in [&pair.d1, &pair.d2].into_iter().enumerate() {
        let lifted = &u * modulus.matrix() * dk.frame();
        let lhs = &b_adj * lifted;
        let rhs = modulus.matrix() * modulus.matrix() * dk.frame();
        adjoint_product_residuals[idx] = fro_dist(&lhs, &rhs);
    }

    // dom(B_k B*) = U (|B|^{-1} D_k) + ker B*, as subspaces of the target.
    let ran_u = Subspace::from_spanning(&u, ctx)?;
    let kernel = ran_u.complement()?;
    let kernel_dim = rows - rank;
    let mut domains = Vec::with_capacity(2);
    for dk in [&pair.d1, &pair.d2] {
        let pre = &modulus_inv * dk.frame();
        let mut cat = CMatrix::zeros(rows, pre.ncols() + kernel.dim());
        let image = &u * pre;
        for j in 0..image.ncols() {
            cat.set_column(j, &image.column(j));
        }
        for j in 0..kernel.dim() {
            cat.set_column(image.ncols() + j, &kernel.frame().column(j));
        }
        domains.push(Subspace::from_spanning(&cat, ctx)?);
    }
    let domain_intersection_dim = domains[0].intersection_dim(&domains[1])?;
    let item4_ok = domain_intersection_dim == kernel.dim()
        && kernel.is_subspace_of(&domains[0])?
        && kernel.is_subspace_of(&domains[1])?;
    Ok(PolarReport {
        polar_residual,
        isometry_defect,
        adjoint_product_residuals,
        domain_intersection_dim,
        kernel_dim,
        item4_ok,
    })
}

/// Deterministic helper for tests and sweeps: a random invertible Hermitian
/// matrix with spectrum bounded away from zero (possibly indefinite).
pub fn random_invertible_hermitian(rng: &mut SeededRng, n: usize) -> CMatrix {
    loop {
        let h = random_hermitian(rng, n, 1.0);
        let eig = herm_eig(&h).expect("eigen of random Hermitian");
        let min_abs = eig
            .values
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min);
        let max_abs = eig.values.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        if min_abs > 0.05 * max_abs.max(1.0) {
            return h;
        }
    }
}
