//! The acceptance battery: twelve property checks at desk scale, each
//! returning a pass/fail verdict with a one-line detail. The same battery
//! backs the `acceptance` integration test target and the CLI self test,
//! and is deterministic for a fixed seed regardless of thread count.

use num_complex::Complex64;

use crate::cmat::{cr, fro_dist, fro_norm, psd_order_defect, CMatrix, CVector};
use crate::compress;
use crate::divergence;
use crate::error::Result;
use crate::fixtures;
use crate::lifting;
use crate::par::par_map;
use crate::psd::{PsdOperator, Subspace};
use crate::range;
use crate::relation::{self, NonnegRelation};
use crate::sampling::{
    random_complex_matrix, random_psd, random_psd_pair_with_intersection, random_subspace,
    rng_from_seed, SeededRng,
};
use crate::shorting;
use crate::tol::ToleranceContext;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    fn from_parts(index: usize, name: &'static str, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((pass, detail)) => Self {
                index,
                name,
                pass,
                detail,
            },
            Err(e) => Self {
                index,
                name,
                pass: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

fn item_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Random PSD pair with a known square-root-range intersection dimension.
fn draw_pair(
    rng: &mut SeededRng,
    n_max: usize,
    singular_only: bool,
    ctx: ToleranceContext,
) -> (PsdOperator, PsdOperator, usize) {
    let n = rng.gen_range(3..=n_max);
    let top = if singular_only { n - 1 } else { n };
    let rf = rng.gen_range(1..=top);
    let rg = rng.gen_range(1..=top);
    let lo = (rf + rg).saturating_sub(n);
    let hi = rf.min(rg);
    let shared = rng.gen_range(lo..=hi);
    let (f, g) = random_psd_pair_with_intersection(rng, n, rf, rg, shared, ctx);
    (f, g, shared)
}

/// 1. Parallel-sum three-route agreement on 300 random pairs.
pub fn criterion_1(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..300).map(|i| item_seed(seed, i)).collect();
        let worst = par_map(jobs, |s| -> Result<f64> {
            let mut rng = rng_from_seed(s);
            let (f, g, _) = draw_pair(&mut rng, 24, false, ctx);
            let scale = f.norm() + g.norm();
            let p1 = shorting::parallel_sum(&f, &g)?;
            let p2 = shorting::parallel_sum_variational(&f, &g)?;
            let p3 = shorting::parallel_sum_limit(&f, &g, &shorting::default_eps_schedule())?;
            let d = fro_dist(p1.matrix(), p2.matrix())
                .max(fro_dist(p1.matrix(), p3.result.matrix()))
                .max(fro_dist(p2.matrix(), p3.result.matrix()));
            Ok(d / scale.max(1e-300))
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
        Ok((worst <= 1e-6, format!("max relative route spread {worst:.3e} (limit 1e-6)")))
    };
    CriterionResult::from_parts(1, "parallel-sum three-route agreement", run())
}

/// 2. Parallel-sum rank identity and the vanishing equivalence.
pub fn criterion_2(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..200).map(|i| item_seed(seed.wrapping_add(1), i)).collect();
        let results = par_map(jobs, |s| -> Result<(bool, bool)> {
            let mut rng = rng_from_seed(s);
            let (f, g, shared) = draw_pair(&mut rng, 20, true, ctx);
            let scale = f.norm() + g.norm();
            let p = shorting::parallel_sum(&f, &g)?;
            // Rank of the parallel sum at a cutoff carried by the inputs.
            let cut = ctx.rank_rel_tol * scale;
            let rank = p.eigenvalues().iter().filter(|&&v| v > cut).count();
            let frame_dim = f.range().intersection_dim(&g.range())?;
            let rank_ok = rank == shared && frame_dim == shared;
            // Vanishing equivalence: F:G = 0 iff the contraction witness is
            // idempotent iff the ranges intersect trivially.
            let vanishes = p.norm() <= 1e-7 * scale;
            let m = shorting::contraction_witness(&f, &g)?;
            let idempotent = fro_dist(&(&m * &m), &m) <= 1e-7;
            let equiv_ok = (vanishes == (shared == 0)) && (idempotent == (shared == 0));
            Ok((rank_ok, equiv_ok))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let rank_fail = results.iter().filter(|r| !r.0).count();
        let equiv_fail = results.iter().filter(|r| !r.1).count();
        Ok((
            rank_fail == 0 && equiv_fail == 0,
            format!("rank mismatches {rank_fail}/200, equivalence mismatches {equiv_fail}/200"),
        ))
    };
    CriterionResult::from_parts(2, "parallel-sum rank identity and vanishing equivalence", run())
}

/// 3. Shorted-operator route agreement and Kreĭn maximality.
pub fn criterion_3(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..200).map(|i| item_seed(seed.wrapping_add(2), i)).collect();
        let spreads = par_map(jobs, |s| -> Result<f64> {
            let mut rng = rng_from_seed(s);
            let n = rng.gen_range(3..=16);
            let rank = rng.gen_range(1..=n);
            let b = crate::sampling::random_psd_with_rank(&mut rng, n, rank, 0.3, 2.0, ctx);
            let k_dim = rng.gen_range(1..n);
            let k = random_subspace(&mut rng, n, k_dim, ctx);
            let rep = shorting::shorted(&b, &k)?;
            Ok(rep.route_disagreement / b.norm().max(1e-300))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let worst_spread = spreads.into_iter().fold(0.0f64, f64::max);

        // Maximality: every feasible B^{1/2} Q B^{1/2} with Q a
        // sub-projection of Omega stays below the short.
        let mut worst_defect = 0.0f64;
        for fixture in 0..5u64 {
            let mut rng = rng_from_seed(item_seed(seed.wrapping_add(3), fixture));
            let n = 8;
            let b = random_psd(&mut rng, n, 0.2, 2.0, ctx);
            let k = random_subspace(&mut rng, n, 3, ctx);
            let rep = shorting::shorted(&b, &k)?;
            let b_sqrt = b.sqrt();
            let w = Subspace::from_spanning_scaled(
                &(b_sqrt.matrix() * k.complement()?.frame()),
                ctx,
                b_sqrt.norm(),
            )?;
            let omega = shorting::omega_subspace(&b, &w)?;
            for _ in 0..100 {
                if omega.dim() == 0 {
                    break;
                }
                let keep = rng.gen_range(1..=omega.dim());
                let omega_dim = omega.dim();
                let mix = random_complex_matrix(&mut rng, omega_dim, keep);
                let sub = Subspace::from_spanning(&(omega.frame() * mix), ctx)?;
                let z = b_sqrt.matrix() * sub.projection() * b_sqrt.matrix();
                worst_defect = worst_defect
                    .max(psd_order_defect(&z, rep.shorted.matrix())? / b.norm());
            }
        }
        let pass = worst_spread <= 1e-7 && worst_defect <= 1e-7;
        Ok((
            pass,
            format!("route spread {worst_spread:.3e} (limit 1e-7), maximality defect {worst_defect:.3e}"),
        ))
    };
    CriterionResult::from_parts(3, "shorted-operator routes and maximality", run())
}

/// 4. The bundled rank-1 block witness is singular on both sides.
pub fn criterion_4(_seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let w = PsdOperator::from_diagonal(&[1.0, 0.0], ctx)?;
        let u = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        let wit = compress::pathological_block(&w, &u)?;
        let block_ok = wit.short_m_vanishes
            && wit.short_m_perp_vanishes
            && wit.m_intersect_dim == 0
            && wit.m_perp_intersect_dim == 0;
        let (x, m) = fixtures::rank1_witness(ctx);
        let bundled_ok = shorting::trivial_intersection(&x, &m)?
            && shorting::trivial_intersection(&x, &m.complement()?)?;
        Ok((
            block_ok && bundled_ok,
            format!("block witness {block_ok}, bundled fixture {bundled_ok}"),
        ))
    };
    CriterionResult::from_parts(4, "finite singular witness on both coordinate halves", run())
}

/// 5. Projection family: reconstruction, projection property, distinctness,
/// constancy, and the intertwiner law.
pub fn criterion_5(_seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let (a, b) = fixtures::pxfamily_noncommuting(ctx);
        let fam = compress::projection_family(&a, &b, &[0.5, 1.0, 2.0, 4.0])?;
        let worst_recon = fam
            .samples
            .iter()
            .map(|s| s.reconstruction_residual)
            .fold(0.0f64, f64::max);
        let worst_proj = fam
            .samples
            .iter()
            .map(|s| s.projection_defect)
            .fold(0.0f64, f64::max);
        let p1 = &fam.samples[1].projection;
        let p2 = &fam.samples[2].projection;
        let distinct = fro_dist(p1, p2) > 1e-3;

        let (ac, bc) = fixtures::pxfamily_commuting(ctx);
        let fam_c = compress::projection_family(&ac, &bc, &[0.5, 1.0, 2.0, 4.0])?;
        let constancy = fam_c
            .samples
            .windows(2)
            .map(|w| fro_dist(&w[0].projection, &w[1].projection))
            .fold(0.0f64, f64::max);

        let inter = compress::intertwiner(&a, &b, 1.0, 2.0)?;
        let sv_dev = inter
            .restricted_singular_values
            .iter()
            .map(|s| (s - 0.5f64.sqrt()).abs())
            .fold(0.0f64, f64::max);
        let pass = worst_recon <= 1e-9
            && worst_proj <= 1e-8
            && distinct
            && constancy <= 1e-12
            && inter.conjugation_residual <= 1e-8
            && sv_dev <= 1e-6;
        Ok((
            pass,
            format!(
                "reconstruction {worst_recon:.2e}, projection defect {worst_proj:.2e}, distinct {distinct}, constancy {constancy:.2e}, intertwiner {:.2e}, scaling dev {sv_dev:.2e}",
                inter.conjugation_residual
            ),
        ))
    };
    CriterionResult::from_parts(5, "projection family and intertwiner laws", run())
}

/// 6. Geometric chain decay on the bundled fixture.
pub fn criterion_6(_seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let (a, m) = fixtures::chain_geometric(ctx);
        let rep = compress::chain(&a, &m, 20)?;
        let first = rep.norms[0];
        let mut worst_rel = 0.0f64;
        for (k, norm) in rep.norms.iter().enumerate() {
            let expect = first * 0.9f64.powi(k as i32);
            worst_rel = worst_rel.max((norm - expect).abs() / expect);
        }
        let pass = worst_rel <= 1e-6 && rep.monotone_p && rep.monotone_a;
        Ok((
            pass,
            format!(
                "max relative decay error {worst_rel:.3e} (limit 1e-6), monotone {}",
                rep.monotone_p && rep.monotone_a
            ),
        ))
    };
    CriterionResult::from_parts(6, "compression chain geometric decay", run())
}

/// 7. Resolvent-sum identity, graph orthogonality, form preservation.
pub fn criterion_7(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..200).map(|i| item_seed(seed.wrapping_add(4), i)).collect();
        let results = par_map(jobs, |s| -> Result<(f64, f64)> {
            let mut rng = rng_from_seed(s);
            let n = rng.gen_range(2..=16);
            // Large eigenvalues model the unbounded regime.
            let t = random_psd(&mut rng, n, 0.0, 50.0, ctx);
            let m_dim = rng.gen_range(1..n);
            let m = random_subspace(&mut rng, n, m_dim, ctx);
            let rep = relation::split_pair(&t, &m)?;
            let r_norm = fro_norm(NonnegRelation::from_operator(&t).resolvent().matrix());
            Ok((
                rep.resolvent_sum_residual / r_norm,
                rep.graph_orthogonality_max,
            ))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let worst_sum = results.iter().map(|r| r.0).fold(0.0f64, f64::max);
        let worst_graph = results.iter().map(|r| r.1).fold(0.0f64, f64::max);

        // Form preservation on 20 random probes per designated fixture.
        let mut worst_form = 0.0f64;
        for fixture in 0..10u64 {
            let mut rng = rng_from_seed(item_seed(seed.wrapping_add(5), fixture));
            let n = 8;
            let t = random_psd(&mut rng, n, 0.0, 20.0, ctx);
            let m = random_subspace(&mut rng, n, 4, ctx);
            let rep = relation::split_pair(&t, &m)?;
            let rel_t = NonnegRelation::from_operator(&t);
            let d1 = rep.rel1.dom_closure();
            for _ in 0..20 {
                let coeffs = random_complex_matrix(&mut rng, d1.dim(), 1);
                let g = d1.frame() * coeffs;
                let g = CVector::from_iterator(n, g.iter().copied());
                let lhs = rep.rel1.form_value(&g, &g)?.re;
                let rhs = rel_t.form_value(&g, &g)?.re;
                worst_form = worst_form.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
            }
        }
        let pass = worst_sum <= 1e-12 && worst_graph <= 1e-8 && worst_form <= 1e-8;
        Ok((
            pass,
            format!(
                "resolvent sum {worst_sum:.3e} (limit 1e-12), graph orthogonality {worst_graph:.3e}, form preservation {worst_form:.3e}"
            ),
        ))
    };
    CriterionResult::from_parts(7, "resolvent-sum identity and form preservation", run())
}

/// 8. Euler approximation rate across fixtures.
pub fn criterion_8(_seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let ns: Vec<usize> = (3..=10).map(|k| 1usize << k).collect();
        let pi4 = std::f64::consts::FRAC_PI_4;
        let fixtures: Vec<(NonnegRelation, Complex64)> = vec![
            (
                NonnegRelation::from_operator(&PsdOperator::from_diagonal(&[1.0], ctx)?),
                cr(1.0),
            ),
            (
                NonnegRelation::from_operator(&PsdOperator::from_diagonal(&[1.0, 2.0], ctx)?),
                cr(1.0),
            ),
            (
                NonnegRelation::from_operator(&PsdOperator::from_diagonal(&[1.0, 2.0], ctx)?),
                Complex64::from_polar(1.0, pi4),
            ),
        ];
        let mut slopes = Vec::new();
        for (rel, z) in &fixtures {
            let sweep = relation::euler_sweep(rel, *z, &ns)?;
            let slope = relation::fit_loglog_slope(&sweep).unwrap_or(0.0);
            slopes.push(slope);
        }
        let pass = slopes.iter().all(|s| (-1.2..=-0.8).contains(s));
        Ok((pass, format!("fitted slopes {slopes:.3?} (window [-1.2, -0.8])")))
    };
    CriterionResult::from_parts(8, "Euler approximation rate 1/n", run())
}

/// 9. Trotter products: vanishing for disjoint form domains, monotone
/// convergence in the nested case.
pub fn criterion_9(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let pi = std::f64::consts::PI;
        let mut worst_final = 0.0f64;
        for theta in [pi / 8.0, pi / 4.0, 3.0 * pi / 8.0, pi / 2.0] {
            let rel1 = fixtures::rank_one_relation(&[1.0, 0.0], 0.5, ctx);
            let rel2 = fixtures::rank_one_relation(&[theta.cos(), theta.sin()], 0.5, ctx);
            let (_, diag) = relation::trotter_product(&rel1, &rel2, 1.0, 256)?;
            worst_final = worst_final.max(diag.distance);
        }

        let mut rng = rng_from_seed(item_seed(seed.wrapping_add(6), 0));
        let t = random_psd(&mut rng, 4, 0.2, 3.0, ctx);
        let m = random_subspace(&mut rng, 4, 2, ctx);
        let split = relation::split_pair(&t, &m)?;
        let rel_t = NonnegRelation::from_operator(&t);
        let ns: Vec<usize> = (1..=8).map(|k| 1usize << k).collect();
        let sweep = relation::trotter_sweep(&rel_t, &split.rel1, 1.0, &ns)?;
        let monotone = sweep.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
        let pass = worst_final <= 1e-3 && monotone;
        Ok((
            pass,
            format!(
                "vanishing-product norm at n=256 {worst_final:.3e} (limit 1e-3), nested sweep monotone {monotone}"
            ),
        ))
    };
    CriterionResult::from_parts(9, "Trotter vanishing and nested convergence", run())
}

/// 10. Extension sandwich and the Kreĭn product identity.
pub fn criterion_10(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut worst_defect = 0.0f64;
        // Bundled diagonal fixture.
        let l2 = PsdOperator::from_diagonal(&[1.0, 2.0], ctx)?.matrix().clone();
        let d = Subspace::coordinate(2, &[0], ctx);
        let rep = divergence::extension_sandwich_check(&l2, &d, 100, item_seed(seed, 7))?;
        worst_defect = worst_defect.max(rep.worst_left_defect.max(rep.worst_right_defect));
        // Random fixture.
        let mut rng = rng_from_seed(item_seed(seed.wrapping_add(7), 1));
        let l2 = random_complex_matrix(&mut rng, 4, 4);
        let d = random_subspace(&mut rng, 4, 2, ctx);
        let rep = divergence::extension_sandwich_check(&l2, &d, 100, item_seed(seed, 8))?;
        worst_defect = worst_defect.max(rep.worst_left_defect.max(rep.worst_right_defect));

        let jobs: Vec<u64> = (0..50).map(|i| item_seed(seed.wrapping_add(8), i)).collect();
        let residuals = par_map(jobs, |s| -> Result<f64> {
            let mut rng = rng_from_seed(s);
            let n = rng.gen_range(3..=8);
            let b = divergence::random_invertible_hermitian(&mut rng, n);
            let m_dim = rng.gen_range(1..n);
            let m = random_subspace(&mut rng, n, m_dim, ctx);
            let rep = divergence::product_pair(&b, &m)?;
            Ok(rep.krein_residuals[0].max(rep.krein_residuals[1]))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let worst_krein = residuals.into_iter().fold(0.0f64, f64::max);
        let pass = worst_defect <= 1e-8 && worst_krein <= 1e-8;
        Ok((
            pass,
            format!(
                "sandwich defect {worst_defect:.3e} (limit 1e-8), Krein product residual {worst_krein:.3e}"
            ),
        ))
    };
    CriterionResult::from_parts(10, "extension sandwich and Krein product identity", run())
}

/// 11. Lifting classification scale invariance and the truncation grid.
pub fn criterion_11(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..100).map(|i| item_seed(seed.wrapping_add(9), i)).collect();
        let invariant = par_map(jobs, |s| -> Result<bool> {
            let mut rng = rng_from_seed(s);
            let n = rng.gen_range(2..=8);
            let rank_w = rng.gen_range(1..=n);
            let w = crate::sampling::random_psd_with_rank(&mut rng, n, rank_w, 0.5, 2.0, ctx);
            let rank_v = rng.gen_range(1..=n);
            let v = crate::sampling::random_psd_with_rank(&mut rng, n, rank_v, 0.5, 2.0, ctx);
            let base = lifting::classify_conditions(&w, &v)?;
            for c in [1e-3, 7.0, 1e3] {
                let ws = PsdOperator::new(w.matrix().scale(c), ctx)?;
                let vs = PsdOperator::new(v.matrix().scale(c), ctx)?;
                if lifting::classify_conditions(&ws, &vs)? != base {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let invariant_fail = invariant.iter().filter(|ok| !**ok).count();

        let grid = [0.5, 1.0, 1.5, 2.0, 3.0];
        let mut grid_fail = 0usize;
        for &a in &grid {
            for &b in &grid {
                let model =
                    lifting::GradedModel::new(lifting::GradedModel::default_schedule(), a, b)?;
                if !lifting::truncation_diagnostic(&model).agree {
                    grid_fail += 1;
                }
            }
        }
        Ok((
            invariant_fail == 0 && grid_fail == 0,
            format!("scale-invariance failures {invariant_fail}/100, grid mismatches {grid_fail}/25"),
        ))
    };
    CriterionResult::from_parts(11, "lifting classification and truncation grid", run())
}

/// 12. Douglas equivalence and the factorization round trip.
pub fn criterion_12(seed: u64, ctx: ToleranceContext) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let jobs: Vec<u64> = (0..200).map(|i| item_seed(seed.wrapping_add(10), i)).collect();
        let results = par_map(jobs, |s| -> Result<(bool, f64)> {
            let mut rng = rng_from_seed(s);
            let n = rng.gen_range(2..=12);
            let rank_b = rng.gen_range(1..=n);
            let b = crate::sampling::random_psd_with_rank(&mut rng, n, rank_b, 0.3, 2.0, ctx);
            // Half of the draws force the inclusion through a sandwich.
            let a = if rng.gen_bool(0.5) {
                let w = random_psd(&mut rng, n, 0.2, 1.5, ctx);
                let b_sqrt = b.sqrt();
                PsdOperator::new_with_scale(
                    b_sqrt.matrix() * w.matrix() * b_sqrt.matrix(),
                    ctx,
                    b.norm() * w.norm(),
                )?
            } else {
                let rank_a = rng.gen_range(1..=n);
                crate::sampling::random_psd_with_rank(&mut rng, n, rank_a, 0.3, 2.0, ctx)
            };
            let (included, lambda) = range::range_inclusion(&a, &b)?;
            let solve = range::douglas_solve(a.matrix(), b.matrix(), ctx);
            let mut consistent = included == solve.is_ok();
            if let Some(lam) = lambda {
                // Majorization leg: A A* <= lambda B B*.
                let lhs = a.matrix() * a.matrix();
                let rhs = (b.matrix() * b.matrix()).scale(lam);
                let defect = psd_order_defect(&lhs, &rhs)?;
                let scale = lam * b.norm().powi(2) + a.norm().powi(2);
                consistent = consistent && defect <= 1e-7 * scale.max(1.0);
            }
            // Round trip through a random right factor.
            let c0 = random_complex_matrix(&mut rng, n, n);
            let product = b.matrix() * &c0;
            let factor = range::douglas_solve(&product, b.matrix(), ctx)?;
            let round = fro_dist(&(b.matrix() * &factor.c), &product)
                / fro_norm(&product).max(1.0);
            let round = if factor.range_in_b_adjoint { round } else { 1.0 };
            Ok((consistent, round))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let inconsistent = results.iter().filter(|r| !r.0).count();
        let worst_round = results.iter().map(|r| r.1).fold(0.0f64, f64::max);
        let pass = inconsistent == 0 && worst_round <= 1e-8;
        Ok((
            pass,
            format!("equivalence failures {inconsistent}/200, round-trip residual {worst_round:.3e} (limit 1e-8)"),
        ))
    };
    CriterionResult::from_parts(12, "Douglas equivalence and round trip", run())
}

/// Run the full battery in order.
pub fn run_all(seed: u64, ctx: ToleranceContext) -> Vec<CriterionResult> {
    vec![
        criterion_1(seed, ctx),
        criterion_2(seed, ctx),
        criterion_3(seed, ctx),
        criterion_4(seed, ctx),
        criterion_5(seed, ctx),
        criterion_6(seed, ctx),
        criterion_7(seed, ctx),
        criterion_8(seed, ctx),
        criterion_9(seed, ctx),
        criterion_10(seed, ctx),
        criterion_11(seed, ctx),
        criterion_12(seed, ctx),
    ]
}
