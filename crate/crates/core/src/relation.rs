//! Nonnegative self-adjoint relations represented by their resolvents.
//!
//! A relation T is stored as the PSD contraction R = (I + T)^{-1}; the kernel
//! of R encodes the multivalued part and the eigenpairs of R above the rank
//! cutoff carry the operator part through t = 1/mu - 1. Every statement about
//! unbounded operators is translated into this bounded algebra before
//! evaluation: pair splittings, n-way splits, completion of a given summand,
//! exhaustion chains with resolvent and semigroup limits, the Euler
//! resolvent-power approximation, and alternating Trotter products.

use num_complex::Complex64;

use crate::cmat::{cr, fro_dist, fro_norm, op_norm, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::psd::{PsdOperator, Subspace};
use crate::tol::ToleranceContext;

/// Inner product linear in the first argument.
fn ip(u: &CVector, v: &CVector) -> Complex64 {
    v.dotc(u)
}

/// Nonnegative self-adjoint relation, resolvent-backed.
#[derive(Debug, Clone)]
pub struct NonnegRelation {
    resolvent: PsdOperator,
}

impl NonnegRelation {
    /// Wrap a resolvent candidate: a PSD contraction with spectrum in [0, 1].
    pub fn from_resolvent(resolvent: PsdOperator) -> Result<Self> {
        let top = resolvent.lambda_max();
        if top > 1.0 + resolvent.ctx().cmp_tol {
            return Err(Error::NotContraction { norm: top });
        }
        Ok(Self { resolvent })
    }

    /// Cayley route from a genuine bounded nonnegative operator:
    /// R = (I + T)^{-1}, computed spectrally.
    pub fn from_operator(t: &PsdOperator) -> Self {
        let m = t.spectral_fn(|lam| 1.0 / (1.0 + lam));
        let resolvent =
            PsdOperator::new_with_scale(m, t.ctx(), 1.0).expect("resolvent of a PSD operator");
        Self { resolvent }
    }

    pub fn dim(&self) -> usize {
        self.resolvent.dim()
    }

    pub fn ctx(&self) -> ToleranceContext {
        self.resolvent.ctx()
    }

    pub fn resolvent(&self) -> &PsdOperator {
        &self.resolvent
    }

    /// Closure of the domain: ran R.
    pub fn dom_closure(&self) -> Subspace {
        self.resolvent.range()
    }

    /// Multivalued part: ker R.
    pub fn mul_part(&self) -> Result<Subspace> {
        self.dom_closure().complement()
    }

    /// Whether the relation is a genuine operator (trivial multivalued part).
    pub fn is_operator(&self) -> bool {
        self.resolvent.rank() == self.dim()
    }

    /// Operator-part eigenvalues t = 1/mu - 1 paired with the eigenvector
    /// column indices of the resolvent, for mu above the rank cutoff.
    fn op_pairs(&self) -> Vec<(usize, f64)> {
        let cut = self
            .ctx()
            .rank_cutoff(self.resolvent.lambda_max());
        self.resolvent
            .eigenvalues()
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu > cut)
            .map(|(j, &mu)| (j, (1.0 / mu - 1.0).max(0.0)))
            .collect()
    }

    /// Operator part as a dense matrix supported on the domain closure.
    pub fn operator_part(&self) -> CMatrix {
        let n = self.dim();
        let vecs = self.resolvent.eigenvectors();
        let mut out = CMatrix::zeros(n, n);
        for (j, t) in self.op_pairs() {
            let col = vecs.column(j);
            for i in 0..n {
                for k in 0..n {
                    out[(i, k)] += col[i] * col[k].conj() * t;
                }
            }
        }
        out
    }

    /// Recover the bounded operator when the relation is one.
    pub fn to_operator(&self) -> Result<PsdOperator> {
        if !self.is_operator() {
            return Err(Error::HypothesisViolated {
                reason: "relation has a nontrivial multivalued part".into(),
            });
        }
        let m = self.resolvent.spectral_pow(-1.0) - CMatrix::identity(self.dim(), self.dim());
        PsdOperator::new_with_scale(m, self.ctx(), 1.0 / self.resolvent.eigenvalues().last().copied().unwrap_or(1.0))
    }

    /// Spectral function of the operator part, conjugated by the domain
    /// frame: multivalued-complement directions are annihilated.
    fn spectral_on_domain(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.dim();
        let vecs = self.resolvent.eigenvectors();
        let mut out = CMatrix::zeros(n, n);
        for (j, t) in self.op_pairs() {
            let w = f(t);
            let col = vecs.column(j);
            for i in 0..n {
                for k in 0..n {
                    out[(i, k)] += col[i] * col[k].conj() * w;
                }
            }
        }
        out
    }

    /// Quadratic-form value T[u, v] on the form domain ran R^{1/2},
    /// evaluated through the partial inverse of (2R)^{1/2}.
    pub fn form_value(&self, u: &CVector, v: &CVector) -> Result<Complex64> {
        FormData::of(self).value(u, v)
    }
}

/// Closed quadratic form of a relation: its domain and the displayed value
/// -(u, v) + 2((2R)^{-1/2} u, (2R)^{-1/2} v).
#[derive(Debug, Clone)]
pub struct FormData {
    domain: Subspace,
    half_inverse: CMatrix,
    angle_tol: f64,
}

impl FormData {
    pub fn of(rel: &NonnegRelation) -> Self {
        let half_inverse = rel
            .resolvent
            .spectral_fn(|mu| {
                let cut = rel.ctx().rank_cutoff(rel.resolvent.lambda_max());
                if mu > cut {
                    (2.0 * mu).powf(-0.5)
                } else {
                    0.0
                }
            });
        Self {
            domain: rel.dom_closure(),
            half_inverse,
            angle_tol: rel.ctx().angle_tol(),
        }
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    fn check_membership(&self, u: &CVector) -> Result<()> {
        let norm = u.norm();
        if norm == 0.0 {
            return Ok(());
        }
        let residual = (u - self.domain.projection() * u).norm() / norm;
        if residual > self.angle_tol {
            return Err(Error::OutOfFormDomain { residual });
        }
        Ok(())
    }

    pub fn value(&self, u: &CVector, v: &CVector) -> Result<Complex64> {
        self.check_membership(u)?;
        self.check_membership(v)?;
        let wu = &self.half_inverse * u;
        let wv = &self.half_inverse * v;
        Ok(-ip(u, v) + ip(&wu, &wv) * 2.0)
    }

    /// Graph inner product (u, v) + T[u, v].
    pub fn graph_ip(&self, u: &CVector, v: &CVector) -> Result<Complex64> {
        Ok(self.value(u, v)? + ip(u, v))
    }
}

/// Splitting of a relation into a pair along a subspace, with the checks
/// that make the pair a faithful witness.
#[derive(Debug, Clone)]
pub struct SplitPairReport {
    pub rel1: NonnegRelation,
    pub rel2: NonnegRelation,
    /// || R1 + R2 - R ||_F (pure projection algebra).
    pub resolvent_sum_residual: f64,
    /// Form-domain frames match the resolvent-root images of M and its
    /// complement.
    pub form_domains_match: bool,
    /// Max over domain-frame probes of the relative form-preservation defect.
    pub form_preservation_max: f64,
    /// Max |T[u, v] + (u, v)| over cross pairs of domain frames.
    pub graph_orthogonality_max: f64,
    /// Max over probes of || f_{T1} + f_{T2} - f ||.
    pub decomposition_residual: f64,
}

/// Resolvent-level split: R -> (R^{1/2} P_M R^{1/2}, R^{1/2} P_Mperp R^{1/2}).
pub fn split_resolvent(
    resolvent: &PsdOperator,
    m: &Subspace,
) -> Result<(NonnegRelation, NonnegRelation, f64)> {
    if resolvent.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: resolvent.dim(),
            right: m.ambient_dim(),
        });
    }
    let ctx = resolvent.ctx();
    let root = resolvent.sqrt();
    let n = resolvent.dim();
    let p = m.projection();
    let r1 = root.matrix() * &p * root.matrix();
    let r2 = root.matrix() * (CMatrix::identity(n, n) - &p) * root.matrix();
    let sum_residual = fro_dist(&(&r1 + &r2), resolvent.matrix());
    let rel1 = NonnegRelation::from_resolvent(PsdOperator::new_with_scale(r1, ctx, 1.0)?)?;
    let rel2 = NonnegRelation::from_resolvent(PsdOperator::new_with_scale(r2, ctx, 1.0)?)?;
    Ok((rel1, rel2, sum_residual))
}

/// Split a bounded nonnegative operator into the canonical pair along M and
/// run the full battery of checks: resolvent-sum identity, form-domain
/// frames, form preservation, graph orthogonality, and the unique domain
/// decomposition of vectors.
pub fn split_pair(t: &PsdOperator, m: &Subspace) -> Result<SplitPairReport> {
    let rel_t = NonnegRelation::from_operator(t);
    let r = rel_t.resolvent().clone();
    let (rel1, rel2, resolvent_sum_residual) = split_resolvent(&r, m)?;

    let ctx = t.ctx();
    let root = r.sqrt();
    let image1 = Subspace::from_spanning(&(root.matrix() * m.frame()), ctx)?;
    let image2 = Subspace::from_spanning(&(root.matrix() * m.complement()?.frame()), ctx)?;
    let form_domains_match = rel1.dom_closure().approx_eq(&image1)?
        && rel2.dom_closure().approx_eq(&image2)?;

    let form_t = FormData::of(&rel_t);
    let form_1 = FormData::of(&rel1);
    let d1 = rel1.dom_closure();
    let d2 = rel2.dom_closure();
    let mut form_preservation_max = 0.0f64;
    for j in 0..d1.dim() {
        let g = d1.frame().column(j).into_owned();
        let lhs = form_1.value(&g, &g)?.re;
        let rhs = form_t.value(&g, &g)?.re;
        form_preservation_max =
            form_preservation_max.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    let mut graph_orthogonality_max = 0.0f64;
    for i in 0..d1.dim() {
        let u = d1.frame().column(i).into_owned();
        for j in 0..d2.dim() {
            let v = d2.frame().column(j).into_owned();
            graph_orthogonality_max =
                graph_orthogonality_max.max(form_t.graph_ip(&u, &v)?.norm());
        }
    }

    // Unique decomposition of dom T vectors: f = R1 (I+T) f + R2 (I+T) f.
    let n = t.dim();
    let shifted = t.matrix() + CMatrix::identity(n, n);
    let mut decomposition_residual = 0.0f64;
    for j in 0..n {
        let mut f = CVector::zeros(n);
        f[j] = cr(1.0);
        let g = &shifted * &f;
        let f1 = rel1.resolvent().matrix() * &g;
        let f2 = rel2.resolvent().matrix() * &g;
        decomposition_residual = decomposition_residual.max((f1 + f2 - f).norm());
    }

    Ok(SplitPairReport {
        rel1,
        rel2,
        resolvent_sum_residual,
        form_domains_match,
        form_preservation_max,
        graph_orthogonality_max,
        decomposition_residual,
    })
}

/// N-way split along a pairwise orthogonal spanning decomposition.
#[derive(Debug, Clone)]
pub struct SplitNReport {
    pub relations: Vec<NonnegRelation>,
    pub resolvent_sum_residual: f64,
    /// Largest pairwise form-domain intersection dimension (0 expected).
    pub max_pairwise_intersection: usize,
    pub graph_orthogonality_max: f64,
}

pub fn split_n(t: &PsdOperator, parts: &[Subspace]) -> Result<SplitNReport> {
    if parts.is_empty() {
        return Err(Error::EmptyList);
    }
    let n = t.dim();
    let mut total = 0usize;
    for (i, p) in parts.iter().enumerate() {
        if p.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                left: p.ambient_dim(),
                right: n,
            });
        }
        total += p.dim();
        for q in parts.iter().skip(i + 1) {
            let gram = p.frame().adjoint() * q.frame();
            if fro_norm(&gram) > 1e-8 * ((p.dim() * q.dim()).max(1) as f64).sqrt() {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    if total != n {
        return Err(Error::NotSpanning);
    }
    let rel_t = NonnegRelation::from_operator(t);
    let r = rel_t.resolvent();
    let root = r.sqrt();
    let ctx = t.ctx();
    let mut relations = Vec::with_capacity(parts.len());
    let mut sum = CMatrix::zeros(n, n);
    for p in parts {
        let rk = root.matrix() * p.projection() * root.matrix();
        sum += &rk;
        relations.push(NonnegRelation::from_resolvent(PsdOperator::new_with_scale(
            rk, ctx, 1.0,
        )?)?);
    }
    let resolvent_sum_residual = fro_dist(&sum, r.matrix());
    let mut max_pairwise_intersection = 0usize;
    let mut graph_orthogonality_max = 0.0f64;
    let form_t = FormData::of(&rel_t);
    for i in 0..relations.len() {
        let di = relations[i].dom_closure();
        for j in (i + 1)..relations.len() {
            let dj = relations[j].dom_closure();
            max_pairwise_intersection =
                max_pairwise_intersection.max(di.intersection_dim(&dj)?);
            for a in 0..di.dim() {
                let u = di.frame().column(a).into_owned();
                for b in 0..dj.dim() {
                    let v = dj.frame().column(b).into_owned();
                    graph_orthogonality_max =
                        graph_orthogonality_max.max(form_t.graph_ip(&u, &v)?.norm());
                }
            }
        }
    }
    Ok(SplitNReport {
        relations,
        resolvent_sum_residual,
        max_pairwise_intersection,
        graph_orthogonality_max,
    })
}

/// Completion of a given relation to a split pair, from a caller-supplied
/// complement seed X.
#[derive(Debug, Clone)]
pub struct CompletePairReport {
    /// The completed relation T with resolvent A1 + B.
    pub total: NonnegRelation,
    /// The complementary summand T2 with resolvent B.
    pub complement: NonnegRelation,
    /// || P^2 - P ||_F for the recovered representer.
    pub projection_defect: f64,
    /// || A1 - A^{1/2} P A^{1/2} ||_F.
    pub reconstruction_residual: f64,
    /// || (split of total along ran P).rel1 - given || on resolvents.
    pub split_reproduction_residual: f64,
}

pub fn complete_pair(rel1: &NonnegRelation, x: &PsdOperator) -> Result<CompletePairReport> {
    let n = rel1.dim();
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: n,
        });
    }
    let ctx = rel1.ctx();
    if x.lambda_max() > 1.0 + ctx.cmp_tol {
        return Err(Error::NotContraction {
            norm: x.lambda_max(),
        });
    }
    let a1 = rel1.resolvent();
    if x.range().intersection_dim(&a1.range())? != 0 {
        return Err(Error::HypothesisViolated {
            reason: "ran X^{1/2} meets ran A1^{1/2} nontrivially".into(),
        });
    }
    let complement_root = PsdOperator::new_with_scale(
        CMatrix::identity(n, n) - a1.matrix(),
        ctx,
        1.0,
    )?
    .sqrt();
    let b = complement_root.matrix() * x.matrix() * complement_root.matrix();
    let b_op = PsdOperator::new_with_scale(b, ctx, 1.0)?;
    let a = PsdOperator::new_with_scale(a1.matrix() + b_op.matrix(), ctx, 1.0)?;
    let total = NonnegRelation::from_resolvent(a.clone())?;
    let complement = NonnegRelation::from_resolvent(b_op)?;

    let inv_sqrt = a.partial_inverse_sqrt();
    let p = &inv_sqrt * a1.matrix() * &inv_sqrt;
    let projection_defect = fro_dist(&(&p * &p), &p);
    let a_sqrt = a.sqrt();
    let reconstruction_residual = fro_dist(&(a_sqrt.matrix() * &p * a_sqrt.matrix()), a1.matrix());

    let p_range = Subspace::from_spanning_scaled(&p, ctx, 1.0)?;
    let (split1, _, _) = split_resolvent(&a, &p_range)?;
    let split_reproduction_residual = fro_dist(split1.resolvent().matrix(), a1.matrix());

    Ok(CompletePairReport {
        total,
        complement,
        projection_defect,
        reconstruction_residual,
        split_reproduction_residual,
    })
}

/// Increasing-exhaustion chain of split pairs.
#[derive(Debug, Clone)]
pub struct ChainFamiliesReport {
    pub shrinking: Vec<NonnegRelation>,
    pub growing: Vec<NonnegRelation>,
    /// || R_{1,j} || along the chain (nonincreasing, 0 at the last index).
    pub shrinking_norms: Vec<f64>,
    /// || R_{2,j} - R || along the chain (nonincreasing, 0 at the last index).
    pub growing_gaps: Vec<f64>,
    pub monotone: bool,
    pub domains_nested: bool,
    /// Per-index direct-sum check of the two form domains.
    pub decompositions_ok: bool,
    pub graph_orthogonality_max: f64,
}

pub fn chain_families(t: &PsdOperator, ns: &[Subspace]) -> Result<ChainFamiliesReport> {
    if ns.is_empty() {
        return Err(Error::EmptyList);
    }
    let n = t.dim();
    for w in ns.windows(2) {
        if !(w[0].is_subspace_of(&w[1])? && w[0].dim() < w[1].dim()) {
            return Err(Error::NotNested);
        }
    }
    if ns.last().unwrap().dim() != n {
        return Err(Error::NotNested);
    }
    let rel_t = NonnegRelation::from_operator(t);
    let r = rel_t.resolvent().clone();
    let form_t = FormData::of(&rel_t);
    let tol = 1e-9;
    let mut shrinking = Vec::new();
    let mut growing = Vec::new();
    let mut shrinking_norms = Vec::new();
    let mut growing_gaps = Vec::new();
    let mut monotone = true;
    let mut domains_nested = true;
    let mut decompositions_ok = true;
    let mut graph_orthogonality_max = 0.0f64;
    for sub in ns {
        // The growing family follows the subspace, the shrinking one its
        // complement.
        let (rel2, rel1, _) = split_resolvent(&r, sub)?;
        if let Some(prev) = shrinking.last() {
            let prev: &NonnegRelation = prev;
            if crate::cmat::psd_order_defect(rel1.resolvent().matrix(), prev.resolvent().matrix())?
                > tol
            {
                monotone = false;
            }
            if !rel1.dom_closure().is_subspace_of(&prev.dom_closure())? {
                domains_nested = false;
            }
        }
        if let Some(prev) = growing.last() {
            let prev: &NonnegRelation = prev;
            if crate::cmat::psd_order_defect(prev.resolvent().matrix(), rel2.resolvent().matrix())?
                > tol
            {
                monotone = false;
            }
            if !prev.dom_closure().is_subspace_of(&rel2.dom_closure())? {
                domains_nested = false;
            }
        }
        let d1 = rel1.dom_closure();
        let d2 = rel2.dom_closure();
        if d1.intersection_dim(&d2)? != 0 || d1.sum_dim(&d2)? != r.rank() {
            decompositions_ok = false;
        }
        for a in 0..d1.dim() {
            let u = d1.frame().column(a).into_owned();
            for b in 0..d2.dim() {
                let v = d2.frame().column(b).into_owned();
                graph_orthogonality_max =
                    graph_orthogonality_max.max(form_t.graph_ip(&u, &v)?.norm());
            }
        }
        shrinking_norms.push(rel1.resolvent().norm());
        growing_gaps.push(fro_dist(rel2.resolvent().matrix(), r.matrix()));
        shrinking.push(rel1);
        growing.push(rel2);
    }
    Ok(ChainFamiliesReport {
        shrinking,
        growing,
        shrinking_norms,
        growing_gaps,
        monotone,
        domains_nested,
        decompositions_ok,
        graph_orthogonality_max,
    })
}

fn check_z(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || z.re < 0.0 {
        return Err(Error::InvalidZ {
            re: z.re,
            im: z.im,
            reason: "need Re z >= 0",
        });
    }
    Ok(())
}

/// Degenerate semigroup of the relation: the operator-part semigroup
/// conjugated by the domain-closure frame, annihilating the multivalued
/// complement. For a genuine operator this is the matrix exponential of -zT.
pub fn semigroup(rel: &NonnegRelation, z: Complex64) -> Result<CMatrix> {
    check_z(z)?;
    Ok(rel.spectral_on_domain(|t| (-z * t).exp()))
}

/// Euler resolvent-power approximation ((I + (z/n) T)^{-1})^n through the
/// operator-part spectrum, with the operator-norm error against the
/// semigroup.
pub fn euler_approx(rel: &NonnegRelation, z: Complex64, n: usize) -> Result<(CMatrix, f64)> {
    check_z(z)?;
    if z.norm() > 0.0 && z.re / z.norm() <= 1e-12 {
        return Err(Error::InvalidZ {
            re: z.re,
            im: z.im,
            reason: "need |arg z| < pi/2",
        });
    }
    let n = n.max(1);
    let approx = rel.spectral_on_domain(|t| {
        let base = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) + z * t / (n as f64));
        base.powu(n as u32)
    });
    let exact = semigroup(rel, z)?;
    let err = op_norm(&(&approx - &exact))?;
    Ok((approx, err))
}

/// Euler errors across a sweep of n.
pub fn euler_sweep(rel: &NonnegRelation, z: Complex64, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    check_z(z)?;
    let rel = rel.clone();
    let jobs: Vec<usize> = ns.to_vec();
    let results = par_map(jobs, move |n| euler_approx(&rel, z, n).map(|(_, e)| (n, e)));
    results.into_iter().collect()
}

/// Least-squares slope of ln(err) against ln(n); entries at the rounding
/// floor are dropped.
pub fn fit_loglog_slope(points: &[(usize, f64)]) -> Option<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, e)| *e > 1e-300)
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    if data.len() < 2 {
        return None;
    }
    let count = data.len() as f64;
    let sx: f64 = data.iter().map(|p| p.0).sum();
    let sy: f64 = data.iter().map(|p| p.1).sum();
    let sxx: f64 = data.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = data.iter().map(|p| p.0 * p.1).sum();
    let denom = count * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((count * sxy - sx * sy) / denom)
}

/// Which limit the alternating product is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrotterRegime {
    /// Form domains intersect trivially: the product collapses to zero.
    DisjointDomains,
    /// Otherwise: compared against the doubled semigroup of the second factor.
    Nested,
}

#[derive(Debug, Clone)]
pub struct TrotterDiagnostics {
    pub regime: TrotterRegime,
    /// Operator-norm distance of the n-fold product to the predicted limit.
    pub distance: f64,
}

/// n-fold alternating product of the two semigroups at step t/n, with the
/// distance to the predicted limit.
pub fn trotter_product(
    rel1: &NonnegRelation,
    rel2: &NonnegRelation,
    t: f64,
    n: usize,
) -> Result<(CMatrix, TrotterDiagnostics)> {
    if rel1.dim() != rel2.dim() {
        return Err(Error::DimensionMismatch {
            left: rel1.dim(),
            right: rel2.dim(),
        });
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidZ {
            re: t,
            im: 0.0,
            reason: "need t >= 0",
        });
    }
    let n = n.max(1);
    let step = cr(t / n as f64);
    let factor = semigroup(rel1, step)? * semigroup(rel2, step)?;
    let dim = rel1.dim();
    let mut product = CMatrix::identity(dim, dim);
    for _ in 0..n {
        product = &product * &factor;
    }
    let disjoint = rel1
        .dom_closure()
        .intersection_dim(&rel2.dom_closure())?
        == 0;
    let (regime, predicted) = if disjoint {
        (TrotterRegime::DisjointDomains, CMatrix::zeros(dim, dim))
    } else {
        (TrotterRegime::Nested, semigroup(rel2, cr(2.0 * t))?)
    };
    let distance = op_norm(&(&product - &predicted))?;
    Ok((product, TrotterDiagnostics { regime, distance }))
}

/// Distances to the predicted limit across a sweep of n.
pub fn trotter_sweep(
    rel1: &NonnegRelation,
    rel2: &NonnegRelation,
    t: f64,
    ns: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let (r1, r2) = (rel1.clone(), rel2.clone());
    let jobs: Vec<usize> = ns.to_vec();
    let results = par_map(jobs, move |n| {
        trotter_product(&r1, &r2, t, n).map(|(_, d)| (n, d.distance))
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_psd, random_subspace, rng_from_seed};
    use approx::assert_relative_eq;

    fn ctx() -> ToleranceContext {
        ToleranceContext::default()
    }

    #[test]
    fn resolvent_of_zero_is_identity() {
        let rel = NonnegRelation::from_operator(&PsdOperator::zero(2, ctx()));
        assert!(fro_dist(rel.resolvent().matrix(), &CMatrix::identity(2, 2)) < 1e-12);
        assert!(rel.is_operator());
    }

    #[test]
    fn resolvent_of_diagonal() {
        let t = PsdOperator::from_diagonal(&[1.0, 3.0], ctx()).unwrap();
        let rel = NonnegRelation::from_operator(&t);
        let expect = CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.0), cr(0.0), cr(0.25)]);
        assert!(fro_dist(rel.resolvent().matrix(), &expect) < 1e-12);
    }

    #[test]
    fn cayley_round_trip_random() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let t = random_psd(&mut rng, 6, 0.0, 5.0, ctx());
            let back = NonnegRelation::from_operator(&t).to_operator().unwrap();
            assert!(fro_dist(back.matrix(), t.matrix()) < 1e-9 * t.fro_norm().max(1.0));
        }
    }

    #[test]
    fn from_resolvent_rejects_expansive() {
        let r = PsdOperator::from_diagonal(&[1.5, 0.5], ctx()).unwrap();
        assert!(matches!(
            NonnegRelation::from_resolvent(r),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn form_value_examples() {
        // T = diag(2): T[e1, e1] = 2.
        let t = PsdOperator::from_diagonal(&[2.0], ctx()).unwrap();
        let rel = NonnegRelation::from_operator(&t);
        let e1 = CVector::from_vec(vec![cr(1.0)]);
        assert_relative_eq!(rel.form_value(&e1, &e1).unwrap().re, 2.0, epsilon = 1e-12);

        // Zero operator: zero form.
        let rel = NonnegRelation::from_operator(&PsdOperator::zero(2, ctx()));
        let u = CVector::from_vec(vec![cr(0.3), cr(0.4)]);
        assert!(rel.form_value(&u, &u).unwrap().norm() < 1e-12);

        // Resolvent P_M / 2: operator part is 1 on M, multivalued on M-perp.
        let r = PsdOperator::new(
            CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.0), cr(0.0), cr(0.0)]),
            ctx(),
        )
        .unwrap();
        let rel = NonnegRelation::from_resolvent(r).unwrap();
        assert!(!rel.is_operator());
        let u = CVector::from_vec(vec![cr(2.0), cr(0.0)]);
        assert_relative_eq!(rel.form_value(&u, &u).unwrap().re, 4.0, epsilon = 1e-12);
        // Vectors off the domain are rejected.
        let bad = CVector::from_vec(vec![cr(0.0), cr(1.0)]);
        assert!(matches!(
            rel.form_value(&bad, &bad),
            Err(Error::OutOfFormDomain { .. })
        ));
        // For genuine operators the form matches (T^{1/2}u, T^{1/2}v).
        let t = PsdOperator::new(
            CMatrix::from_row_slice(2, 2, &[cr(2.0), cr(1.0), cr(1.0), cr(1.0)]),
            ctx(),
        )
        .unwrap();
        let rel = NonnegRelation::from_operator(&t);
        let u = CVector::from_vec(vec![cr(1.0), cr(-0.5)]);
        let tu = t.sqrt().matrix() * &u;
        assert_relative_eq!(
            rel.form_value(&u, &u).unwrap().re,
            tu.norm_squared(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn split_pair_zero_operator() {
        let t = PsdOperator::zero(2, ctx());
        let m = Subspace::coordinate(2, &[0], ctx());
        let rep = split_pair(&t, &m).unwrap();
        assert!(fro_dist(rep.rel1.resolvent().matrix(), &m.projection()) < 1e-12);
        assert!(!rep.rel1.is_operator());
        assert_eq!(rep.rel1.mul_part().unwrap().dim(), 1);
        assert!(rep.resolvent_sum_residual < 1e-14);
    }

    #[test]
    fn split_pair_diagonal_fixture() {
        let t = PsdOperator::from_diagonal(&[1.0, 3.0], ctx()).unwrap();
        let m = Subspace::line(&[cr(1.0), cr(1.0)], ctx());
        let rep = split_pair(&t, &m).unwrap();
        assert!(rep.resolvent_sum_residual < 1e-13);
        assert!(rep.form_domains_match);
        assert!(rep.form_preservation_max < 1e-8);
        assert!(rep.graph_orthogonality_max < 1e-8);
        assert!(rep.decomposition_residual < 1e-10);
        // R1 = R^{1/2} P_M R^{1/2} with R^{1/2} = diag(1/sqrt(2), 1/2).
        let root = CMatrix::from_row_slice(
            2,
            2,
            &[cr(std::f64::consts::FRAC_1_SQRT_2), cr(0.0), cr(0.0), cr(0.5)],
        );
        let expect = &root * m.projection() * &root;
        assert!(fro_dist(rep.rel1.resolvent().matrix(), &expect) < 1e-12);
    }

    #[test]
    fn split_n_examples() {
        let t = PsdOperator::from_diagonal(&[1.0, 2.0, 3.0], ctx()).unwrap();
        // Single part: the relation is T itself.
        let rep = split_n(&t, &[Subspace::full(3, ctx())]).unwrap();
        assert!(rep.resolvent_sum_residual < 1e-13);
        let back = rep.relations[0].to_operator().unwrap();
        assert!(fro_dist(back.matrix(), t.matrix()) < 1e-9);

        // Coordinate split of a diagonal operator: rank-1 resolvents.
        let parts: Vec<Subspace> = (0..3)
            .map(|i| Subspace::coordinate(3, &[i], ctx()))
            .collect();
        let rep = split_n(&t, &parts).unwrap();
        assert!(rep.resolvent_sum_residual < 1e-13);
        for rel in &rep.relations {
            assert_eq!(rel.resolvent().rank(), 1);
        }
        assert_eq!(rep.max_pairwise_intersection, 0);

        // Error paths.
        let overlapping = vec![
            Subspace::coordinate(3, &[0, 1], ctx()),
            Subspace::coordinate(3, &[1, 2], ctx()),
        ];
        assert!(matches!(
            split_n(&t, &overlapping),
            Err(Error::NotOrthogonal)
        ));
        let short = vec![Subspace::coordinate(3, &[0], ctx())];
        assert!(matches!(split_n(&t, &short), Err(Error::NotSpanning)));
    }

    #[test]
    fn split_n_random_orthogonal() {
        let mut rng = rng_from_seed(29);
        let t = random_psd(&mut rng, 6, 0.0, 4.0, ctx());
        let u = crate::sampling::random_unitary(&mut rng, 6);
        let parts: Vec<Subspace> = [(0usize..2), (2..4), (4..6)]
            .into_iter()
            .map(|range| {
                let cols: Vec<usize> = range.collect();
                let mut frame = CMatrix::zeros(6, cols.len());
                for (k, &j) in cols.iter().enumerate() {
                    frame.set_column(k, &u.column(j));
                }
                Subspace::from_orthonormal_frame(frame, ctx())
            })
            .collect();
        let rep = split_n(&t, &parts).unwrap();
        assert!(rep.resolvent_sum_residual < 1e-9);
        assert_eq!(rep.max_pairwise_intersection, 0);
        assert!(rep.graph_orthogonality_max < 1e-9);
    }

    #[test]
    fn complete_pair_round_trip() {
        // R1 = e1 e1* / 2 in C^2, X = e2 e2*.
        let r1 = PsdOperator::new(
            CMatrix::from_row_slice(2, 2, &[cr(0.5), cr(0.0), cr(0.0), cr(0.0)]),
            ctx(),
        )
        .unwrap();
        let rel1 = NonnegRelation::from_resolvent(r1).unwrap();
        let x = PsdOperator::from_diagonal(&[0.0, 1.0], ctx()).unwrap();
        let rep = complete_pair(&rel1, &x).unwrap();
        assert!(rep.projection_defect < 1e-10);
        assert!(rep.reconstruction_residual < 1e-10);
        assert!(rep.split_reproduction_residual < 1e-8);

        // X = 0 degenerates: total = given relation.
        let rel1 = NonnegRelation::from_resolvent(
            PsdOperator::from_diagonal(&[0.5, 0.0], ctx()).unwrap(),
        )
        .unwrap();
        let rep = complete_pair(&rel1, &PsdOperator::zero(2, ctx())).unwrap();
        assert!(fro_dist(
            rep.total.resolvent().matrix(),
            rel1.resolvent().matrix()
        ) < 1e-12);

        // Overlapping ranges violate the hypothesis.
        let x = PsdOperator::from_diagonal(&[1.0, 0.0], ctx()).unwrap();
        assert!(matches!(
            complete_pair(&rel1, &x),
            Err(Error::HypothesisViolated { .. })
        ));
        // X beyond the unit interval is rejected.
        let x = PsdOperator::from_diagonal(&[0.0, 2.0], ctx()).unwrap();
        assert!(matches!(
            complete_pair(&rel1, &x),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn complete_pair_random_singular_seeds() {
        let mut rng = rng_from_seed(31);
        for _ in 0..10 {
            let u = crate::sampling::random_unitary(&mut rng, 4);
            // A1 supported on the first two directions, X on the last two.
            let mut a1 = CMatrix::zeros(4, 4);
            let mut x = CMatrix::zeros(4, 4);
            for j in 0..2 {
                let col = u.column(j);
                let lam = 0.3 + 0.4 * (j as f64);
                for i in 0..4 {
                    for k in 0..4 {
                        a1[(i, k)] += col[i] * col[k].conj() * lam;
                    }
                }
            }
            for j in 2..4 {
                let col = u.column(j);
                let lam = 0.5 + 0.2 * (j as f64 - 2.0);
                for i in 0..4 {
                    for k in 0..4 {
                        x[(i, k)] += col[i] * col[k].conj() * lam;
                    }
                }
            }
            let rel1 = NonnegRelation::from_resolvent(PsdOperator::new(a1, ctx()).unwrap()).unwrap();
            let x = PsdOperator::new(x, ctx()).unwrap();
            let rep = complete_pair(&rel1, &x).unwrap();
            assert!(rep.projection_defect < 1e-9);
            assert!(rep.split_reproduction_residual < 1e-8);
        }
    }

    #[test]
    fn chain_families_exhaustion() {
        let t = PsdOperator::from_diagonal(&[1.0, 3.0], ctx()).unwrap();
        let ns = vec![
            Subspace::coordinate(2, &[0], ctx()),
            Subspace::full(2, ctx()),
        ];
        let rep = chain_families(&t, &ns).unwrap();
        assert!(rep.monotone);
        assert!(rep.domains_nested);
        assert!(rep.decompositions_ok);
        // Exhaustion endpoint: R_{2,last} = R exactly, R_{1,last} = 0.
        assert!(rep.growing_gaps.last().unwrap() < &1e-12);
        assert!(rep.shrinking_norms.last().unwrap() < &1e-12);

        let bad = vec![
            Subspace::coordinate(2, &[0], ctx()),
            Subspace::coordinate(2, &[1], ctx()),
        ];
        assert!(matches!(chain_families(&t, &bad), Err(Error::NotNested)));
    }

    #[test]
    fn chain_families_random_flags() {
        let mut rng = rng_from_seed(37);
        let t = random_psd(&mut rng, 4, 0.0, 6.0, ctx());
        let u = crate::sampling::random_unitary(&mut rng, 4);
        let take = |k: usize| {
            let mut frame = CMatrix::zeros(4, k);
            for j in 0..k {
                frame.set_column(j, &u.column(j));
            }
            Subspace::from_orthonormal_frame(frame, ctx())
        };
        let ns = vec![take(1), take(2), take(3), take(4)];
        let rep = chain_families(&t, &ns).unwrap();
        assert!(rep.monotone);
        assert!(rep.domains_nested);
        assert!(rep.decompositions_ok);
        assert!(rep.graph_orthogonality_max < 1e-8);
        for w in rep.shrinking_norms.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        for w in rep.growing_gaps.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(rep.shrinking_norms.last().unwrap() < &1e-10);
    }

    #[test]
    fn semigroup_examples() {
        // T = 0: identity for all z.
        let rel = NonnegRelation::from_operator(&PsdOperator::zero(2, ctx()));
        let e = semigroup(&rel, Complex64::new(3.0, 1.0)).unwrap();
        assert!(fro_dist(&e, &CMatrix::identity(2, 2)) < 1e-12);

        // Zero resolvent: everything is multivalued, the semigroup vanishes.
        let rel = NonnegRelation::from_resolvent(PsdOperator::zero(2, ctx())).unwrap();
        let e = semigroup(&rel, cr(1.0)).unwrap();
        assert!(fro_norm(&e) < 1e-14);

        // Diagonal operator.
        let t = PsdOperator::from_diagonal(&[1.0, 3.0], ctx()).unwrap();
        let rel = NonnegRelation::from_operator(&t);
        let e = semigroup(&rel, cr(1.0)).unwrap();
        assert_relative_eq!(e[(0, 0)].re, (-1.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(e[(1, 1)].re, (-3.0f64).exp(), epsilon = 1e-12);

        assert!(matches!(
            semigroup(&rel, Complex64::new(-0.1, 0.0)),
            Err(Error::InvalidZ { .. })
        ));
    }

    /// Scaling-and-squaring Taylor exponential, independent of the spectral
    /// route the semigroup uses.
    fn expm_taylor(m: &CMatrix) -> CMatrix {
        let n = m.nrows();
        let norm = fro_norm(m);
        let squarings = norm.log2().ceil().max(0.0) as usize + 4;
        let scaled = m.scale(1.0 / (1u64 << squarings) as f64);
        let mut term = CMatrix::identity(n, n);
        let mut sum = CMatrix::identity(n, n);
        for k in 1..30 {
            term = &term * &scaled;
            term.unscale_mut(k as f64);
            sum += &term;
        }
        let mut out = sum;
        for _ in 0..squarings {
            out = &out * &out;
        }
        out
    }

    #[test]
    fn semigroup_matches_taylor_exponential() {
        let mut rng = rng_from_seed(59);
        for _ in 0..10 {
            let t = random_psd(&mut rng, 4, 0.0, 3.0, ctx());
            let rel = NonnegRelation::from_operator(&t);
            for z in [cr(1.0), Complex64::new(0.5, 1.5), Complex64::new(0.0, 2.0)] {
                let direct = semigroup(&rel, z).unwrap();
                let oracle = expm_taylor(&(t.matrix().map(|x| -z * x)));
                assert!(
                    fro_dist(&direct, &oracle) <= 1e-9,
                    "distance {}",
                    fro_dist(&direct, &oracle)
                );
            }
        }
    }

    #[test]
    fn euler_scalar_error_matches_expansion() {
        let t = PsdOperator::from_diagonal(&[1.0], ctx()).unwrap();
        let rel = NonnegRelation::from_operator(&t);
        for n in [8usize, 64, 512] {
            let (_, err) = euler_approx(&rel, cr(1.0), n).unwrap();
            let exact = (-1.0f64).exp() - (1.0 + 1.0 / n as f64).powi(-(n as i32));
            assert_relative_eq!(err, exact.abs(), max_relative = 1e-10);
            // Leading term of the classical expansion: e^{-1} / (2n).
            assert_relative_eq!(err, (-1.0f64).exp() / (2.0 * n as f64), max_relative = 0.1);
        }
    }

    #[test]
    fn euler_zero_operator_is_exact() {
        let rel = NonnegRelation::from_operator(&PsdOperator::zero(3, ctx()));
        let (_, err) = euler_approx(&rel, cr(1.0), 4).unwrap();
        assert!(err < 1e-14);
    }

    #[test]
    fn euler_slope_is_one_over_n() {
        let t = PsdOperator::from_diagonal(&[1.0, 2.0], ctx()).unwrap();
        let rel = NonnegRelation::from_operator(&t);
        let ns: Vec<usize> = (3..=10).map(|k| 1usize << k).collect();
        // Real z and a pi/4 ray.
        for z in [cr(1.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)] {
            let sweep = euler_sweep(&rel, z, &ns).unwrap();
            let slope = fit_loglog_slope(&sweep).unwrap();
            assert!((-1.2..=-0.8).contains(&slope), "slope {slope} for z themselves {z}");
        }
        assert!(matches!(
            euler_approx(&rel, Complex64::new(0.0, 1.0), 4),
            Err(Error::InvalidZ { .. })
        ));
    }

    fn rank_one_relation(dir: &[Complex64], mu: f64) -> NonnegRelation {
        let n = dir.len();
        let v = CVector::from_iterator(n, dir.iter().copied());
        let v = &v / cr(v.norm());
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                m[(i, k)] = v[i] * v[k].conj() * mu;
            }
        }
        NonnegRelation::from_resolvent(PsdOperator::new(m, ctx()).unwrap()).unwrap()
    }

    #[test]
    fn trotter_orthogonal_domains_vanish_immediately() {
        let rel1 = rank_one_relation(&[cr(1.0), cr(0.0)], 0.5);
        let rel2 = rank_one_relation(&[cr(0.0), cr(1.0)], 0.5);
        let (product, diag) = trotter_product(&rel1, &rel2, 1.0, 1).unwrap();
        assert_eq!(diag.regime, TrotterRegime::DisjointDomains);
        assert!(fro_norm(&product) < 1e-14);
    }

    #[test]
    fn trotter_angled_domains_decay_geometrically() {
        let rel1 = rank_one_relation(&[cr(1.0), cr(0.0)], 0.5);
        let rel2 = rank_one_relation(&[cr(1.0), cr(1.0)], 0.5);
        let sweep = trotter_sweep(&rel1, &rel2, 1.0, &[1, 2, 4, 8, 16, 32]).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].1 < w[0].1);
        }
        // cos^2(pi/4) = 1/2 per extra power.
        assert!(sweep.last().unwrap().1 < 1e-3);
    }

    #[test]
    fn trotter_nested_split_converges_to_doubled_semigroup() {
        let mut rng = rng_from_seed(43);
        let t = random_psd(&mut rng, 4, 0.2, 3.0, ctx());
        let m = random_subspace(&mut rng, 4, 2, ctx());
        let split = split_pair(&t, &m).unwrap();
        let rel_t = NonnegRelation::from_operator(&t);
        let ns: Vec<usize> = (1..=8).map(|k| 1usize << k).collect();
        let sweep = trotter_sweep(&rel_t, &split.rel1, 1.0, &ns).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12, "not monotone: {sweep:?}");
        }
        assert!(sweep.last().unwrap().1 < sweep.first().unwrap().1 * 0.1);
    }
}
