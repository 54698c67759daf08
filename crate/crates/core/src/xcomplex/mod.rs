//! The complex X_•(A²) of tuples of lines in A² that are pairwise bases, with its boundary maps,
//! an exactness audit, and orbit canonicalization under SL₂(A).

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{AbInvariants, Echelon, IntMatrix};
use crate::ring::{Ring, RingElem};

mod orbit;

pub use orbit::{
    canonical_orbit, dbar4_relator, dbar4_rows, dbar4_terms, lambda1_composite_check, stabilizer_check, standard_tuple, Dbar4Report,
    Lambda1Report, OrbitForm, OrbitParams, StabilizerReport,
};

/// Default cap on the number of tuples enumerated in one dimension.
pub const DEFAULT_X_BUDGET: u64 = 1_000_000;

/// A line ⟨v⟩ = vA, stored by its canonical generator: the first unit coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    pub x: RingElem,
    pub y: RingElem,
}

impl Line {
    /// Canonical generator of ⟨v⟩, or `None` if v is not unimodular. Assumes a local ring.
    pub fn of(ring: &Ring, v: (RingElem, RingElem)) -> Option<Line> {
        if let Some(i) = ring.inv(v.0) {
            Some(Line { x: ring.one(), y: ring.mul(i, v.1) })
        } else {
            let i = ring.inv(v.1)?;
            Some(Line { x: ring.mul(i, v.0), y: ring.one() })
        }
    }

    pub fn vector(&self) -> (RingElem, RingElem) {
        (self.x, self.y)
    }
}

/// 2×2 determinant of two column vectors.
pub fn det2(ring: &Ring, u: (RingElem, RingElem), v: (RingElem, RingElem)) -> RingElem {
    ring.sub(ring.mul(u.0, v.1), ring.mul(u.1, v.0))
}

/// P¹(A): lines (1, y) for y ∈ A, then (x, 1) for non-units x, in encoding order.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    lines: Vec<Line>,
    index: HashMap<Line, u32>,
    basis: Vec<bool>,
}

impl ProjectiveLine {
    pub fn new(ring: &Ring) -> Result<ProjectiveLine> {
        if !ring.is_local() {
            return Err(Error::NotLocal(ring.spec().to_string()));
        }
        let mut lines: Vec<Line> = ring.elements().map(|y| Line { x: ring.one(), y }).collect();
        lines.extend(ring.elements().filter(|&x| !ring.is_unit(x)).map(|x| Line { x, y: ring.one() }));
        let index = lines.iter().enumerate().map(|(i, l)| (*l, i as u32)).collect();
        let n = lines.len();
        let mut basis = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                basis[i * n + j] = ring.is_unit(det2(ring, lines[i].vector(), lines[j].vector()));
            }
        }
        Ok(ProjectiveLine { lines, index, basis })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line(&self, i: u32) -> Line {
        self.lines[i as usize]
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn index_of(&self, l: &Line) -> u32 {
        self.index[l]
    }

    /// Index of ⟨v⟩; `None` if v is not unimodular.
    pub fn index_of_vector(&self, ring: &Ring, v: (RingElem, RingElem)) -> Option<u32> {
        Line::of(ring, v).map(|l| self.index[&l])
    }

    pub fn is_basis(&self, i: u32, j: u32) -> bool {
        self.basis[i as usize * self.lines.len() + j as usize]
    }

    /// ∞ = ⟨e₁⟩.
    pub fn infinity(&self) -> u32 {
        0
    }

    /// 0 = ⟨e₂⟩.
    pub fn zero_line(&self, ring: &Ring) -> u32 {
        self.index[&Line { x: ring.zero(), y: ring.one() }]
    }

    /// ⟨e₁ + a e₂⟩.
    pub fn affine(&self, a: RingElem) -> u32 {
        a.0
    }

    pub fn is_valid_tuple(&self, t: &[u32]) -> bool {
        t.iter().all(|&i| (i as usize) < self.len())
            && (0..t.len()).all(|i| (i + 1..t.len()).all(|j| self.is_basis(t[i], t[j])))
    }
}

/// Generators of X_n, in lexicographic order of line indices, with a lookup table.
#[derive(Debug, Clone)]
pub struct XLevel {
    pub dim: usize,
    pub tuples: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl XLevel {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, t: &[u32]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

fn extend_tuples(p1: &ProjectiveLine, prev: &[Vec<u32>], budget: u64) -> Result<Vec<Vec<u32>>> {
    let n = p1.len() as u32;
    let chunks: Vec<Vec<Vec<u32>>> = prev
        .par_iter()
        .map(|t| {
            (0..n)
                .filter(|&l| t.iter().all(|&m| p1.is_basis(m, l)))
                .map(|l| {
                    let mut u = t.clone();
                    u.push(l);
                    u
                })
                .collect()
        })
        .collect();
    let total: u64 = chunks.iter().map(|c| c.len() as u64).sum();
    if total > budget {
        let dim = prev.first().map_or(0, |t| t.len());
        return Err(Error::Budget { what: format!("X_{dim} generators"), needed: total, budget });
    }
    Ok(chunks.into_iter().flatten().collect())
}

fn level(dim: usize, tuples: Vec<Vec<u32>>) -> XLevel {
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    XLevel { dim, tuples, index }
}

/// X_0, …, X_top over a local ring.
#[derive(Debug, Clone)]
pub struct XComplex {
    pub p1: ProjectiveLine,
    pub levels: Vec<XLevel>,
}

impl XComplex {
    pub fn build(ring: &Ring, top: usize, budget: u64) -> Result<XComplex> {
        let p1 = ProjectiveLine::new(ring)?;
        if p1.len() as u64 > budget {
            return Err(Error::Budget { what: "P1 lines".into(), needed: p1.len() as u64, budget });
        }
        let mut cx = XComplex { levels: vec![level(0, (0..p1.len() as u32).map(|i| vec![i]).collect())], p1 };
        for _ in 0..top {
            cx.extend(budget)?;
        }
        Ok(cx)
    }

    /// Adds the next dimension.
    pub fn extend(&mut self, budget: u64) -> Result<()> {
        let last = self.levels.last().expect("X_0 present");
        let tuples = extend_tuples(&self.p1, &last.tuples, budget)?;
        let dim = last.dim + 1;
        self.levels.push(level(dim, tuples));
        Ok(())
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn generators(&self, n: usize) -> &[Vec<u32>] {
        &self.levels[n].tuples
    }

    /// ∂_n : X_n → X_{n−1} as rows indexed by X_n; for n = 0 the augmentation ε : X_0 → Z.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n == 0 {
            let mut m = IntMatrix::empty(1);
            for _ in 0..self.levels[0].len() {
                m.push_terms([(0, 1)]);
            }
            return m;
        }
        let lower = &self.levels[n - 1];
        let rows: Vec<_> = self.levels[n]
            .tuples
            .par_iter()
            .map(|t| {
                crate::fgab::sparse_from_terms((0..t.len()).map(|i| {
                    let mut face = t.clone();
                    face.remove(i);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    (lower.index_of(&face).expect("faces of valid tuples are valid"), sign)
                }))
            })
            .collect();
        IntMatrix::from_sparse_rows(lower.len(), rows)
    }
}

/// Generators and boundary of X_n (ε for n = 0).
pub fn enumerate_x(ring: &Ring, n: usize, budget: u64) -> Result<(Vec<Vec<Line>>, IntMatrix)> {
    let cx = XComplex::build(ring, n, budget)?;
    let gens = cx.generators(n).iter().map(|t| t.iter().map(|&i| cx.p1.line(i)).collect()).collect();
    Ok((gens, cx.boundary(n)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim: usize,
    pub generators: usize,
    /// Rank of ∂_dim (ε at dimension 0).
    pub boundary_rank: usize,
    /// ker ∂_dim / im ∂_{dim+1} of the augmented complex.
    pub homology: AbInvariants,
    pub exact: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub ring: String,
    pub dmax: usize,
    pub lines: usize,
    /// ε is onto Z.
    pub augmentation_surjective: bool,
    pub dims: Vec<DimensionReport>,
    /// Size k of the residue field; exactness is guaranteed below k.
    pub residue_field_size: Option<u32>,
    /// Set when the budget stopped the audit early.
    pub truncated: Option<String>,
}

impl ExactnessReport {
    /// Exact at every audited dimension d < bound.
    pub fn exact_below(&self, bound: usize) -> bool {
        self.augmentation_surjective && self.dims.iter().filter(|d| d.dim < bound).all(|d| d.exact)
    }
}

/// Homology of the augmented complex X_• → Z in dimensions 0..=dmax.
pub fn exactness_audit(ring: &Ring, dmax: usize, budget: u64) -> Result<ExactnessReport> {
    let mut cx = XComplex::build(ring, 0, budget)?;
    let mut report = ExactnessReport {
        ring: ring.spec().to_string(),
        dmax,
        lines: cx.p1.len(),
        augmentation_surjective: false,
        dims: Vec::new(),
        residue_field_size: ring.residue_field_size(),
        truncated: None,
    };
    let eps = Echelon::new(&cx.boundary(0), false);
    report.augmentation_surjective = eps.invariant_factors().iter().all(|f| f.is_one()) && eps.rank() == 1;
    let mut rank_below = eps.rank();
    for d in 0..=dmax {
        let start = Instant::now();
        if let Err(e) = cx.extend(budget) {
            report.truncated = Some(e.to_string());
            break;
        }
        let ech = Echelon::new(&cx.boundary(d + 1), false);
        let torsion: Vec<BigInt> = ech.invariant_factors().into_iter().filter(|f| !f.is_one()).collect();
        let generators = cx.levels[d].len();
        let free_rank = generators - rank_below - ech.rank();
        let homology = AbInvariants { torsion, free_rank };
        let exact = homology.torsion.is_empty() && free_rank == 0;
        let seconds = start.elapsed().as_secs_f64();
        log::info!("X audit {} d={d}: {generators} generators, {seconds:.3}s", report.ring);
        report.dims.push(DimensionReport { dim: d, generators, boundary_rank: rank_below, homology, exact, seconds });
        rank_below = ech.rank();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts_over_fields() {
        for (spec, q) in [("gf(2,1)", 2u64), ("gf(3,1)", 3), ("gf(2,2)", 4), ("gf(5,1)", 5)] {
            let r = Ring::parse(spec).unwrap();
            let top = 3.min(q as usize + 1);
            let cx = XComplex::build(&r, top, DEFAULT_X_BUDGET).unwrap();
            for n in 0..=top {
                let expected: u64 = (0..=n as u64).map(|i| q + 1 - i).product();
                assert_eq!(cx.generators(n).len() as u64, expected, "{spec} n={n}");
            }
        }
        assert_eq!(enumerate_x(&Ring::parse("gf(2,2)").unwrap(), 1, DEFAULT_X_BUDGET).unwrap().0.len(), 20);
        assert_eq!(enumerate_x(&Ring::parse("gf(2,1)").unwrap(), 2, DEFAULT_X_BUDGET).unwrap().0.len(), 6);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let cx = XComplex::build(&r, 3, DEFAULT_X_BUDGET).unwrap();
        for n in 1..=3 {
            assert!(cx.boundary(n).mul(&cx.boundary(n - 1)).is_zero(), "n={n}");
        }
        let r = Ring::parse("z/9").unwrap();
        let cx = XComplex::build(&r, 3, DEFAULT_X_BUDGET).unwrap();
        for n in 1..=3 {
            assert!(cx.boundary(n).mul(&cx.boundary(n - 1)).is_zero(), "n={n}");
        }
    }

    #[test]
    fn lines_over_local_rings() {
        let r = Ring::parse("z/9").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        assert_eq!(p1.len(), 12);
        assert_eq!(p1.line(p1.zero_line(&r)), Line { x: r.zero(), y: r.one() });
        // (3, 6) is not unimodular; (3, 2) is.
        assert!(Line::of(&r, (RingElem(3), RingElem(6))).is_none());
        let l = Line::of(&r, (RingElem(3), RingElem(2))).unwrap();
        assert_eq!(l.y, r.one());
        assert!(ProjectiveLine::new(&Ring::parse("z/6").unwrap()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let r = Ring::parse("gf(2,3)").unwrap();
        assert!(matches!(XComplex::build(&r, 3, 1000), Err(Error::Budget { .. })));
        let rep = exactness_audit(&r, 3, 1000).unwrap();
        assert!(rep.truncated.is_some());
        assert!(rep.dims.len() < 4);
    }

    #[test]
    fn exactness_over_small_fields() {
        let r = Ring::parse("gf(2,2)").unwrap();
        let rep = exactness_audit(&r, 3, DEFAULT_X_BUDGET).unwrap();
        assert!(rep.exact_below(4), "{rep:?}");
        let r = Ring::parse("gf(2,1)").unwrap();
        let rep = exactness_audit(&r, 2, DEFAULT_X_BUDGET).unwrap();
        assert!(rep.exact_below(2));
        assert_eq!(rep.dims.len(), 3);
    }
}
