//! Tolerance context governing all spectral decisions.

use crate::error::{Error, Result};

/// Relative asymmetry above which an input is rejected instead of symmetrized.
pub const MAX_ASYMMETRY_REL: f64 = 1e-6;

/// Rank cutoffs, symmetrization policy, and comparison tolerances.
///
/// Rank decisions are deterministic given the same input bytes and context:
/// an eigenvalue (or singular value) is treated as zero when it is at most
/// `rank_rel_tol` times the largest one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceContext {
    /// Relative cutoff for treating eigenvalues/singular values as zero.
    pub rank_rel_tol: f64,
    /// Maximum admissible negative eigenvalue magnitude, relative to the
    /// largest eigenvalue, before a matrix is rejected as not PSD. Values
    /// in `[-clamp, 0)` are clamped to zero.
    pub psd_clamp_tol: f64,
    /// Tolerance for matrix-equality assertions (relative Frobenius).
    pub cmp_tol: f64,
}

impl ToleranceContext {
    /// Standard numerical-rank convention scaled for dimensions up to ~128.
    pub fn new(rank_rel_tol: f64, psd_clamp_tol: f64, cmp_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("rank_rel_tol", rank_rel_tol),
            ("psd_clamp_tol", psd_clamp_tol),
            ("cmp_tol", cmp_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance {
                    name,
                    value: v,
                });
            }
        }
        Ok(Self {
            rank_rel_tol,
            psd_clamp_tol,
            cmp_tol,
        })
    }

    /// Angle below which two principal directions count as an exact
    /// intersection. Square root of the rank cutoff: an angle theta maps to
    /// a cosine defect of order theta^2.
    pub fn angle_tol(&self) -> f64 {
        self.rank_rel_tol.sqrt()
    }

    /// Absolute rank cutoff for a spectrum with the given largest value.
    pub fn rank_cutoff(&self, largest: f64) -> f64 {
        self.rank_rel_tol * largest.max(0.0)
    }
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self {
            rank_rel_tol: 64.0 * f64::EPSILON,
            psd_clamp_tol: 1e-10,
            cmp_tol: 1e-9,
        }
    }
}
