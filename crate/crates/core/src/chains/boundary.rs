//! Deciding whether a cycle in B_•(A^×) ⊗ Z is a boundary, with an explicit witness.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{bar_d, bar_faces, BarChain, ChainRecord, Group, Units};
use crate::error::{Error, Result};
use crate::fgab::{sparse_from_terms, Echelon, IntMatrix};
use crate::ring::{Ring, RingElem};

/// Default cap on the number of degree-(n+1) tuples used as the search basis.
pub const DEFAULT_BOUNDARY_BUDGET: u64 = 200_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum BoundarySearch {
    /// β with d(β) = input.
    Witness(ChainRecord<RingElem>),
    NotFound { basis_size: usize },
}

impl BoundarySearch {
    pub fn found(&self) -> bool {
        matches!(self, BoundarySearch::Witness(_))
    }
}

/// The subgroup generated by `gens`.
fn generated(ring: &Ring, gens: &BTreeSet<RingElem>) -> Vec<RingElem> {
    let u = Units(ring);
    let mut set: BTreeSet<RingElem> = [u.identity()].into_iter().collect();
    let mut frontier: Vec<RingElem> = set.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = u.mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn tuples(elems: &[RingElem], n: usize) -> Vec<Vec<RingElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |&e| {
                    let mut s = t.clone();
                    s.push(e);
                    s
                })
            })
            .collect();
    }
    out
}

/// d_{n+1}: B_{n+1}(H) ⊗ Z → B_n(H) ⊗ Z over a subgroup H ⊆ A^×, row-reduced with tracking.
pub struct BoundarySolver<'r> {
    ring: &'r Ring,
    degree: usize,
    subgroup: BTreeSet<RingElem>,
    rows: Vec<Vec<RingElem>>,
    cols: HashMap<Vec<RingElem>, usize>,
    echelon: Echelon,
}

impl<'r> BoundarySolver<'r> {
    /// Solver for cycles of degree `degree` supported on the subgroup generated by `gens`.
    pub fn new(ring: &'r Ring, gens: &BTreeSet<RingElem>, degree: usize, budget: u64) -> Result<BoundarySolver<'r>> {
        let u = Units(ring);
        let subgroup = generated(ring, gens);
        let nonid: Vec<RingElem> = subgroup.iter().copied().filter(|&e| e != u.identity()).collect();
        let size = (nonid.len() as u64).saturating_pow(degree as u32 + 1);
        if size > budget {
            return Err(Error::Budget { what: format!("boundary basis in degree {}", degree + 1), needed: size, budget });
        }
        let cols: HashMap<Vec<RingElem>, usize> =
            tuples(&nonid, degree).into_iter().enumerate().map(|(i, t)| (t, i)).collect();
        let rows = tuples(&nonid, degree + 1);
        let mut m = IntMatrix::empty(cols.len());
        for t in &rows {
            let mut terms = Vec::new();
            for (f, s) in bar_faces(&u, t) {
                if f.iter().all(|&e| e != u.identity()) {
                    terms.push((cols[&f], s));
                }
            }
            m.push_sparse(sparse_from_terms(terms));
        }
        let echelon = Echelon::new(&m, true);
        Ok(BoundarySolver { ring, degree, subgroup: subgroup.into_iter().collect(), rows, cols, echelon })
    }

    pub fn basis_size(&self) -> usize {
        self.rows.len()
    }

    /// Whether the solver's subgroup contains every entry of `c`.
    pub fn covers(&self, c: &BarChain<RingElem>) -> bool {
        c.degree == self.degree && c.terms().all(|(t, _)| t.iter().all(|e| self.subgroup.contains(e)))
    }

    pub fn solve(&self, c: &BarChain<RingElem>) -> Result<BoundarySearch> {
        let u = Units(self.ring);
        if c.degree >= 1 && !bar_d(&u, c).is_zero() {
            return Err(Error::NotACycle);
        }
        assert!(self.covers(c), "chain outside the solver's subgroup");
        let v = sparse_from_terms(c.terms().map(|(t, k)| (self.cols[t], k)));
        match self.echelon.solve(&v) {
            None => Ok(BoundarySearch::NotFound { basis_size: self.rows.len() }),
            Some(x) => {
                let mut beta = BarChain::zero(self.degree + 1);
                for (i, k) in x {
                    let k = k.to_i64().ok_or_else(|| Error::Consistency("witness coefficient overflow".into()))?;
                    beta.bar_term(&u, self.rows[i].clone(), k);
                }
                if bar_d(&u, &beta) != *c {
                    return Err(Error::Consistency("boundary witness does not reproduce the chain".into()));
                }
                Ok(BoundarySearch::Witness(beta.record()))
            }
        }
    }
}

/// β with d(β) = c over the subgroup generated by the entries of c, or not-found.
pub fn is_boundary(ring: &Ring, c: &BarChain<RingElem>, budget: u64) -> Result<BoundarySearch> {
    if c.is_zero() {
        return Ok(BoundarySearch::Witness(BarChain::zero(c.degree + 1).record()));
    }
    if c.degree >= 1 && !bar_d(&Units(ring), c).is_zero() {
        return Err(Error::NotACycle);
    }
    let gens: BTreeSet<RingElem> = c.terms().flat_map(|(t, _)| t.iter().copied()).collect();
    BoundarySolver::new(ring, &gens, c.degree, budget)?.solve(c)
}

/// The chain recorded in a witness.
pub fn witness_chain(ring: &Ring, w: &ChainRecord<RingElem>) -> BarChain<RingElem> {
    BarChain::bar_from(&Units(ring), w.degree, w.terms.iter().map(|(k, t)| (t.clone(), *k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_is_a_boundary_over_odd_cyclic_group() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let u = Units(&r);
        let (a, b) = (RingElem(2), RingElem(5));
        let c = BarChain::bar_from(&u, 2, [(vec![a, b], 1), (vec![b, a], -1)]);
        let res = is_boundary(&r, &c, DEFAULT_BOUNDARY_BUDGET).unwrap();
        let BoundarySearch::Witness(w) = res else { panic!("expected witness") };
        assert_eq!(bar_d(&u, &witness_chain(&r, &w)), c);
    }

    #[test]
    fn zero_and_nontrivial_classes() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let u = Units(&r);
        assert!(is_boundary(&r, &BarChain::zero(2), DEFAULT_BOUNDARY_BUDGET).unwrap().found());
        let gen = BarChain::bar_from(&u, 1, [(vec![RingElem(2)], 1)]);
        assert!(matches!(is_boundary(&r, &gen, DEFAULT_BOUNDARY_BUDGET).unwrap(), BoundarySearch::NotFound { .. }));
        let not_cycle = BarChain::bar_from(&u, 2, [(vec![RingElem(2), RingElem(3)], 1)]);
        assert!(matches!(is_boundary(&r, &not_cycle, DEFAULT_BOUNDARY_BUDGET), Err(Error::NotACycle)));
    }
}
