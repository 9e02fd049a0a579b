//! Bundled witness fixtures: the singular trivial-intersection models, the
//! noncommuting and commuting projection-family pairs, chain and splitting
//! models, graded lifting truncations, and the divergence/product fixtures.

use num_complex::Complex64;

use crate::cmat::{cr, CMatrix};
use crate::error::{Error, Result};
use crate::io;
use crate::lifting::GradedModel;
use crate::psd::{PsdOperator, Subspace};
use crate::relation::NonnegRelation;
use crate::tol::ToleranceContext;

/// One file a fixture emits.
#[derive(Debug, Clone)]
pub enum FixtureFile {
    Matrix(CMatrix),
    Frame(CMatrix),
    Relation(CMatrix),
}

impl FixtureFile {
    pub fn extension(&self) -> &'static str {
        match self {
            FixtureFile::Matrix(_) => "mat",
            FixtureFile::Frame(_) => "sub",
            FixtureFile::Relation(_) => "rel",
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            FixtureFile::Matrix(m) | FixtureFile::Frame(m) => io::matrix_to_string(m),
            FixtureFile::Relation(r) => {
                format!("{}\n{}", io::RELATION_HEADER, io::matrix_to_string(r))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    /// (suffix, file) pairs; the emitted name is `<name>-<suffix>.<ext>`.
    pub files: Vec<(&'static str, FixtureFile)>,
}

fn diag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { cr(entries[i]) } else { cr(0.0) })
}

fn line_frame(v: &[f64]) -> CMatrix {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    CMatrix::from_fn(v.len(), 1, |i, _| cr(v[i] / norm))
}

fn rank_one(v: &[f64], scale: f64) -> CMatrix {
    let f = line_frame(v);
    (&f * f.adjoint()).scale(scale)
}

fn rank1_witness_matrix() -> CMatrix {
    // W = U = diag(1, 0) on the split C^4 = span{e1,e2} + span{e3,e4}:
    // a rank-1 operator whose square-root range avoids both halves.
    let mut x = CMatrix::zeros(4, 4);
    for (i, j) in [(0usize, 0usize), (0, 2), (2, 0), (2, 2)] {
        x[(i, j)] = cr(0.5);
    }
    x.scale(2.0)
}

pub fn all() -> Vec<Fixture> {
    let pi4 = std::f64::consts::FRAC_PI_4;
    vec![
        Fixture {
            name: "rank1-witness",
            description: "rank-1 block witness with vanishing shorts on both coordinate halves of C^4",
            files: vec![
                ("X", FixtureFile::Matrix(rank1_witness_matrix())),
                (
                    "M",
                    FixtureFile::Frame(CMatrix::from_fn(4, 2, |i, j| {
                        if i == j {
                            cr(1.0)
                        } else {
                            cr(0.0)
                        }
                    })),
                ),
            ],
        },
        Fixture {
            name: "pxfamily-noncommuting",
            description: "singular pair with distinct projections P(x): A = e1 e1*, B on the diagonal line",
            files: vec![
                ("A", FixtureFile::Matrix(diag(&[1.0, 0.0]))),
                ("B", FixtureFile::Matrix(rank_one(&[1.0, 1.0], 1.0))),
            ],
        },
        Fixture {
            name: "pxfamily-commuting",
            description: "commuting block-diagonal pair with a constant projection family",
            files: vec![
                ("A", FixtureFile::Matrix(diag(&[1.0, 0.0]))),
                ("B", FixtureFile::Matrix(diag(&[0.0, 1.0]))),
            ],
        },
        Fixture {
            name: "chain-geometric",
            description: "diag(1,4) against the diagonal line: compression chain decays by 9/10 per step",
            files: vec![
                ("A", FixtureFile::Matrix(diag(&[1.0, 4.0]))),
                ("M", FixtureFile::Frame(line_frame(&[1.0, 1.0]))),
            ],
        },
        Fixture {
            name: "splitpair-diagonal",
            description: "T = diag(1,3) split along the diagonal line",
            files: vec![
                ("T", FixtureFile::Matrix(diag(&[1.0, 3.0]))),
                ("M", FixtureFile::Frame(line_frame(&[1.0, 1.0]))),
            ],
        },
        Fixture {
            name: "trotter-angled",
            description: "rank-1 relations with form domains at angle pi/4: products vanish geometrically",
            files: vec![
                ("T1", FixtureFile::Relation(rank_one(&[1.0, 0.0], 0.5))),
                ("T2", FixtureFile::Relation(rank_one(&[pi4.cos(), pi4.sin()], 0.5))),
            ],
        },
        Fixture {
            name: "trotter-orthogonal",
            description: "rank-1 relations with orthogonal form domains: products vanish at one step",
            files: vec![
                ("T1", FixtureFile::Relation(rank_one(&[1.0, 0.0], 0.5))),
                ("T2", FixtureFile::Relation(rank_one(&[0.0, 1.0], 0.5))),
            ],
        },
        Fixture {
            name: "divergence-diagonal",
            description: "L2 = diag(1,2) restricted to span{e1}: Friedrichs and Krein extremes",
            files: vec![
                ("L2", FixtureFile::Matrix(diag(&[1.0, 2.0]))),
                ("D", FixtureFile::Frame(line_frame(&[1.0, 0.0]))),
            ],
        },
        Fixture {
            name: "douglas-nested",
            description: "nested diagonal ranges: A = diag(4,0) factored through B = diag(2,0)",
            files: vec![
                ("A", FixtureFile::Matrix(diag(&[4.0, 0.0]))),
                ("B", FixtureFile::Matrix(diag(&[2.0, 0.0]))),
            ],
        },
        Fixture {
            name: "lifting-graded-bounded",
            description: "graded truncation blocks (a=1, b=2) at n=16: bounded lifting factor",
            files: graded_files(1.0, 2.0),
        },
        Fixture {
            name: "lifting-graded-divergent",
            description: "graded truncation blocks (a=2, b=1) at n=16: divergent lifting factor",
            files: graded_files(2.0, 1.0),
        },
        Fixture {
            name: "prodpair-diagonal",
            description: "invertible B = diag(1,2) with the diagonal-line split for the product pair",
            files: vec![
                ("B", FixtureFile::Matrix(diag(&[1.0, 2.0]))),
                ("M", FixtureFile::Frame(line_frame(&[1.0, 1.0]))),
            ],
        },
    ]
}

fn graded_files(a: f64, b: f64) -> Vec<(&'static str, FixtureFile)> {
    let model = GradedModel::new(vec![16], a, b).expect("valid graded model");
    let a11 = diag(&model.a11(16));
    let col = model.a12(16);
    let a12 = CMatrix::from_fn(16, 1, |i, _| cr(col[i]));
    vec![
        ("A11", FixtureFile::Matrix(a11)),
        ("A12", FixtureFile::Matrix(a12)),
    ]
}

pub fn find(name: &str) -> Result<Fixture> {
    all()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// Convenience loaders used by tests and the self test.
pub fn rank1_witness(ctx: ToleranceContext) -> (PsdOperator, Subspace) {
    let x = PsdOperator::new(rank1_witness_matrix(), ctx).expect("witness is PSD");
    let m = Subspace::coordinate(4, &[0, 1], ctx);
    (x, m)
}

pub fn pxfamily_noncommuting(ctx: ToleranceContext) -> (PsdOperator, PsdOperator) {
    let a = PsdOperator::from_diagonal(&[1.0, 0.0], ctx).expect("diag PSD");
    let b = PsdOperator::new(rank_one(&[1.0, 1.0], 1.0), ctx).expect("rank-1 PSD");
    (a, b)
}

pub fn pxfamily_commuting(ctx: ToleranceContext) -> (PsdOperator, PsdOperator) {
    let a = PsdOperator::from_diagonal(&[1.0, 0.0], ctx).expect("diag PSD");
    let b = PsdOperator::from_diagonal(&[0.0, 1.0], ctx).expect("diag PSD");
    (a, b)
}

pub fn chain_geometric(ctx: ToleranceContext) -> (PsdOperator, Subspace) {
    let a = PsdOperator::from_diagonal(&[1.0, 4.0], ctx).expect("diag PSD");
    let m = Subspace::line(&[cr(1.0), cr(1.0)], ctx);
    (a, m)
}

/// Rank-1 relation with resolvent mu on the line through the given real
/// direction.
pub fn rank_one_relation(v: &[f64], mu: f64, ctx: ToleranceContext) -> NonnegRelation {
    let r = PsdOperator::new(rank_one(v, mu), ctx).expect("rank-1 resolvent");
    NonnegRelation::from_resolvent(r).expect("contraction resolvent")
}

/// Rank-1 relation along a complex direction.
pub fn rank_one_relation_c(v: &[Complex64], mu: f64, ctx: ToleranceContext) -> NonnegRelation {
    let f = CMatrix::from_fn(v.len(), 1, |i, _| v[i]);
    let norm = f.norm();
    let f = f.scale(1.0 / norm);
    let r = PsdOperator::new((&f * f.adjoint()).scale(mu), ctx).expect("rank-1 resolvent");
    NonnegRelation::from_resolvent(r).expect("contraction resolvent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shorting::trivial_intersection;

    #[test]
    fn catalog_has_enough_fixtures_and_unique_names() {
        let fixtures = all();
        assert!(fixtures.len() >= 8);
        let mut names: Vec<&str> = fixtures.iter().map(|f| f.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), fixtures.len());
        assert!(find("rank1-witness").is_ok());
        assert!(matches!(
            find("no-such-fixture"),
            Err(Error::UnknownFixture(_))
        ));
    }

    #[test]
    fn fixture_files_serialize_and_parse() {
        for fixture in all() {
            for (suffix, file) in &fixture.files {
                let text = file.to_text();
                assert!(!text.is_empty(), "{}-{suffix} is empty", fixture.name);
                match file {
                    FixtureFile::Matrix(m) | FixtureFile::Frame(m) => {
                        let back = io::matrix_from_str(&text).unwrap();
                        assert_eq!(back.nrows(), m.nrows());
                    }
                    FixtureFile::Relation(_) => {
                        let ctx = ToleranceContext::default();
                        io::relation_from_str(&text, ctx).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn witness_fixture_is_singular_on_both_sides() {
        let ctx = ToleranceContext::default();
        let (x, m) = rank1_witness(ctx);
        assert!(trivial_intersection(&x, &m).unwrap());
        assert!(trivial_intersection(&x, &m.complement().unwrap()).unwrap());
    }
}
