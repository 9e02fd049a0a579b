//! Seeded random generators for matrices, frames, and PSD operators.
//!
//! All randomness flows from one 64-bit seed through ChaCha8, so every
//! sweep, test, and CLI run reproduces the same stream byte for byte.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmat::{c, CMatrix};
use crate::psd::{PsdOperator, Subspace};
use crate::tol::ToleranceContext;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entries (Ginibre ensemble).
pub fn random_complex_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix {
    use rand_distr_normal::normal_pair;
    CMatrix::from_fn(rows, cols, |_, _| {
        let (re, im) = normal_pair(rng);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

mod rand_distr_normal {
    use super::SeededRng;
    use rand::Rng;

    /// Box-Muller pair of independent standard normals.
    pub fn normal_pair(rng: &mut SeededRng) -> (f64, f64) {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        (r * t.cos(), r * t.sin())
    }
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase-fixed R.
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> CMatrix {
    let g = random_complex_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the phases so the distribution is Haar and the result deterministic.
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random orthonormal frame spanning a k-dimensional subspace.
pub fn random_subspace(rng: &mut SeededRng, n: usize, k: usize, ctx: ToleranceContext) -> Subspace {
    let u = random_unitary(rng, n);
    let mut frame = CMatrix::zeros(n, k);
    for j in 0..k {
        frame.set_column(j, &u.column(j));
    }
    Subspace::from_orthonormal_frame(frame, ctx)
}

/// PSD operator with exact rank `rank` and eigenvalues drawn from
/// [lo, hi], conjugated by a random unitary.
pub fn random_psd_with_rank(
    rng: &mut SeededRng,
    n: usize,
    rank: usize,
    lo: f64,
    hi: f64,
    ctx: ToleranceContext,
) -> PsdOperator {
    assert!(rank <= n);
    let u = random_unitary(rng, n);
    let mut m = CMatrix::zeros(n, n);
    for j in 0..rank {
        let lam = rng.gen_range(lo..hi);
        let col = u.column(j);
        for i in 0..n {
            for k2 in 0..n {
                m[(i, k2)] += col[i] * col[k2].conj() * lam;
            }
        }
    }
    PsdOperator::new(m, ctx).expect("constructed PSD")
}

/// Full-rank PSD operator with spectrum in [lo, hi].
pub fn random_psd(rng: &mut SeededRng, n: usize, lo: f64, hi: f64, ctx: ToleranceContext) -> PsdOperator {
    random_psd_with_rank(rng, n, n, lo, hi, ctx)
}

/// Random Hermitian matrix with entries of the given scale.
pub fn random_hermitian(rng: &mut SeededRng, n: usize, scale: f64) -> CMatrix {
    let g = random_complex_matrix(rng, n, n);
    (&g + g.adjoint()).scale(0.5 * scale)
}

/// Pair of PSD operators whose square-root ranges intersect in exactly
/// `shared` dimensions: both ranges contain a common random `shared`-frame,
/// and the remaining directions are drawn from disjoint blocks of one random
/// unitary, so the intersection is exact by construction.
pub fn random_psd_pair_with_intersection(
    rng: &mut SeededRng,
    n: usize,
    rank_f: usize,
    rank_g: usize,
    shared: usize,
    ctx: ToleranceContext,
) -> (PsdOperator, PsdOperator) {
    assert!(shared <= rank_f && shared <= rank_g);
    assert!(rank_f + rank_g - shared <= n);
    let u = random_unitary(rng, n);
    let build = |rng: &mut SeededRng, cols: &[usize]| {
        let mut m = CMatrix::zeros(n, n);
        for &j in cols {
            let lam = rng.gen_range(0.5..2.0);
            let col = u.column(j);
            for i in 0..n {
                for k2 in 0..n {
                    m[(i, k2)] += col[i] * col[k2].conj() * lam;
                }
            }
        }
        PsdOperator::new(m, ctx).expect("constructed PSD")
    };
    let f_cols: Vec<usize> = (0..rank_f).collect();
    let g_cols: Vec<usize> = (0..shared).chain(rank_f..rank_f + rank_g - shared).collect();
    let f = build(rng, &f_cols);
    let g = build(rng, &g_cols);
    (f, g)
}
