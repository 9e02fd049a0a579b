//! Module-level property sweeps: randomized invariants that complement the
//! acceptance battery.

use opran::cmat::{cr, fro_dist, fro_norm, psd_order_defect, CVector};
use opran::compress;
use opran::divergence;
use opran::lifting;
use opran::psd::{principal_angles, PsdOperator};
use opran::range;
use opran::relation::NonnegRelation;
use opran::sampling::{
    random_complex_matrix, random_psd, random_psd_with_rank, random_subspace, rng_from_seed,
};
use opran::shorting;
use opran::tol::ToleranceContext;
use rand::Rng;

fn ctx() -> ToleranceContext {
    ToleranceContext::default()
}

#[test]
fn sqrt_square_round_trip_on_random_psd() {
    let mut rng = rng_from_seed(101);
    for _ in 0..200 {
        let n = rng.gen_range(1..=32);
        let rank = rng.gen_range(0..=n);
        let a = random_psd_with_rank(&mut rng, n, rank, 0.1, 3.0, ctx());
        let s = a.sqrt();
        let err = fro_dist(&(s.matrix() * s.matrix()), a.matrix());
        assert!(err <= 1e-9 * a.fro_norm().max(1e-300), "err {err}");
    }
}

#[test]
fn partial_inverse_sqrt_projects_onto_range() {
    let mut rng = rng_from_seed(102);
    for _ in 0..100 {
        let n = rng.gen_range(1..=24);
        let rank = rng.gen_range(0..=n);
        let a = random_psd_with_rank(&mut rng, n, rank, 0.1, 3.0, ctx());
        let prod = a.partial_inverse_sqrt() * a.sqrt().matrix();
        assert!(fro_dist(&prod, &a.range_projection()) <= 1e-9);
    }
}

#[test]
fn principal_angles_are_symmetric() {
    let mut rng = rng_from_seed(103);
    for _ in 0..100 {
        let n = rng.gen_range(2..=16);
        let k1 = rng.gen_range(1..=n);
        let k2 = rng.gen_range(1..=n);
        let s1 = random_subspace(&mut rng, n, k1, ctx());
        let s2 = random_subspace(&mut rng, n, k2, ctx());
        let a12 = principal_angles(&s1, &s2).unwrap();
        let a21 = principal_angles(&s2, &s1).unwrap();
        assert_eq!(a12.len(), a21.len());
        for (x, y) in a12.iter().zip(&a21) {
            assert!((x - y).abs() <= 1e-10, "asymmetry {}", (x - y).abs());
        }
    }
}

#[test]
fn range_sum_and_sandwich_identities_on_random_instances() {
    let mut rng = rng_from_seed(104);
    for _ in 0..100 {
        let n = rng.gen_range(2..=16);
        let count = rng.gen_range(1..=4);
        let ops: Vec<PsdOperator> = (0..count)
            .map(|_| {
                let rank = rng.gen_range(0..=n);
                random_psd_with_rank(&mut rng, n, rank, 0.2, 2.0, ctx())
            })
            .collect();
        let rep = range::range_sum_identity_check(&ops).unwrap();
        assert!(rep.pass, "ranks {} vs {}", rep.rank_of_sum, rep.dim_of_range_span);
    }
    for _ in 0..100 {
        let n = rng.gen_range(2..=16);
        let rank_f = rng.gen_range(0..=n);
        let rank_m = rng.gen_range(0..=n);
        let f = random_psd_with_rank(&mut rng, n, rank_f, 0.2, 2.0, ctx());
        let m = random_psd_with_rank(&mut rng, n, rank_m, 0.2, 2.0, ctx());
        let rep = range::sandwich_range_check(&f, &m).unwrap();
        assert!(rep.pass, "angle {}", rep.max_angle);
    }
}

#[test]
fn shorted_stays_below_b() {
    let mut rng = rng_from_seed(105);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let rank = rng.gen_range(1..=n);
        let b = random_psd_with_rank(&mut rng, n, rank, 0.2, 2.0, ctx());
        let k_dim = rng.gen_range(1..n);
        let k = random_subspace(&mut rng, n, k_dim, ctx());
        let rep = shorting::shorted(&b, &k).unwrap();
        assert!(rep.shorted.psd_defect_vs(&b).unwrap() <= 1e-9 * b.norm());
        // A vanishing short is rounding noise around zero; its own-scale
        // range has no meaning, so the inclusion only applies otherwise.
        if !rep.vanishes {
            assert!(rep.shorted.range().is_subspace_of(&k).unwrap());
        }
        assert!(rep.coupling_condition_ok);
    }
}

#[test]
fn compress_is_dominated_and_matches_image_frames() {
    let mut rng = rng_from_seed(106);
    for _ in 0..200 {
        let n = rng.gen_range(2..=16);
        let rank = rng.gen_range(1..=n);
        let a = random_psd_with_rank(&mut rng, n, rank, 0.2, 2.0, ctx());
        let m_dim = rng.gen_range(1..=n);
        let m = random_subspace(&mut rng, n, m_dim, ctx());
        let rep = compress::compress(&a, &m).unwrap();
        assert!(rep.compressed.psd_defect_vs(&a).unwrap() <= 1e-9 * a.norm());
        assert!(rep.range_image_angle < 1e-7);
    }
}

#[test]
fn chain_on_singular_witness_decays_to_zero() {
    // On a both-sides-vanishing witness the chain contracts geometrically.
    let (x, m) = opran::fixtures::rank1_witness(ctx());
    assert!(shorting::trivial_intersection(&x, &m).unwrap());
    let rep = compress::chain(&x, &m, 24).unwrap();
    assert!(rep.monotone_a && rep.monotone_p);
    for w in rep.norms.windows(2) {
        assert!(w[1] < w[0]);
    }
    assert!(rep.norms.last().unwrap() < &1e-6);
}

#[test]
fn lifting_necessity_round_trip_on_random_witnesses() {
    let mut rng = rng_from_seed(107);
    for _ in 0..100 {
        let n = rng.gen_range(2..=10);
        let t = random_psd(&mut rng, n, 0.2, 2.0, ctx());
        let m_dim = rng.gen_range(1..n);
        let m = random_subspace(&mut rng, n, m_dim, ctx());
        let rep = lifting::recover_factors(&t, &m).unwrap();
        assert!(rep.a11_residual <= 1e-8);
        assert!(rep.a12_residual <= 1e-8);
        assert!(rep.g_norm <= 1.0 + 1e-8);
    }
}

#[test]
fn example_v2_square_root_ranges_match() {
    let mut rng = rng_from_seed(108);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let rank = rng.gen_range(1..=n);
        let w = random_psd_with_rank(&mut rng, n, rank, 0.2, 2.0, ctx());
        let l_dim = rng.gen_range(0..=n);
        let l = random_subspace(&mut rng, n, l_dim, ctx());
        let rep = lifting::example_v2(&w, &l).unwrap();
        assert!(rep.range_equal);
        assert!(rep.range_equality_angle < 1e-7);
    }
}

#[test]
fn cayley_round_trip_on_random_operators() {
    let mut rng = rng_from_seed(109);
    for _ in 0..200 {
        let n = rng.gen_range(1..=32);
        let t = random_psd(&mut rng, n, 0.0, 10.0, ctx());
        let rel = NonnegRelation::from_operator(&t);
        let back = rel.to_operator().unwrap();
        assert!(
            fro_dist(back.matrix(), t.matrix()) <= 1e-9 * t.fro_norm().max(1.0),
            "round trip failed at n={n}"
        );
    }
}

#[test]
fn split_outputs_have_positive_operator_parts() {
    // Kernels of the split operator parts are trivial on their domains when
    // the source operator is positive definite: vanishing form values only
    // at zero.
    let mut rng = rng_from_seed(110);
    for _ in 0..50 {
        let n = rng.gen_range(2..=10);
        let t = random_psd(&mut rng, n, 0.5, 5.0, ctx());
        let m_dim = rng.gen_range(1..n);
        let m = random_subspace(&mut rng, n, m_dim, ctx());
        let rep = opran::relation::split_pair(&t, &m).unwrap();
        for rel in [&rep.rel1, &rep.rel2] {
            let d = rel.dom_closure();
            for j in 0..d.dim() {
                let g = d.frame().column(j).into_owned();
                let val = rel.form_value(&g, &g).unwrap().re;
                assert!(val > 1e-10, "flat form direction: {val}");
            }
        }
    }
}

#[test]
fn friedrichs_below_krein_on_random_fixtures() {
    let mut rng = rng_from_seed(111);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let rows = rng.gen_range(n..=n + 2);
        let l2 = random_complex_matrix(&mut rng, rows, n);
        let d_dim = rng.gen_range(0..=n);
        let d = random_subspace(&mut rng, n, d_dim, ctx());
        let fr = divergence::friedrichs(&l2, &d).unwrap();
        let kr = divergence::krein(&l2, &d).unwrap();
        let defect =
            psd_order_defect(fr.resolvent().matrix(), kr.resolvent().matrix()).unwrap();
        assert!(defect <= 1e-9, "extremes out of order: {defect}");
    }
}

#[test]
fn polar_factors_are_consistent() {
    let mut rng = rng_from_seed(112);
    for _ in 0..50 {
        let cols = rng.gen_range(2..=6);
        let rows = cols + rng.gen_range(0..=3);
        let b = random_complex_matrix(&mut rng, rows, cols);
        let m_dim = rng.gen_range(1..cols.max(2));
        let m = random_subspace(&mut rng, cols, m_dim.min(cols - 1).max(1), ctx());
        match divergence::polar_restrictions(&b, &m) {
            Ok(rep) => {
                assert!(rep.polar_residual <= 1e-10 * fro_norm(&b).max(1.0));
                assert!(rep.isometry_defect <= 1e-10);
                assert!(rep.item4_ok);
            }
            Err(opran::Error::RankDeficientSource { .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}

#[test]
fn graph_orthogonal_probe_vectors_decompose() {
    // Vectors of the full space split uniquely across the split pair's
    // resolvent decomposition.
    let mut rng = rng_from_seed(113);
    let n = 8;
    let t = random_psd(&mut rng, n, 0.0, 20.0, ctx());
    let m = random_subspace(&mut rng, n, 3, ctx());
    let rep = opran::relation::split_pair(&t, &m).unwrap();
    assert!(rep.decomposition_residual <= 1e-10);
    for _ in 0..20 {
        let coeffs = random_complex_matrix(&mut rng, n, 1);
        let f = CVector::from_iterator(n, coeffs.iter().copied());
        let shifted = t.matrix() * &f + &f;
        let f1 = rep.rel1.resolvent().matrix() * &shifted;
        let f2 = rep.rel2.resolvent().matrix() * &shifted;
        assert!((f1 + f2 - &f).norm() <= 1e-10 * f.norm());
    }
    let _ = cr(0.0);
}
