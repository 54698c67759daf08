//! Tor₁(B, B) for finitely generated B, with the swap involution and the Σ₂′-action.
//!
//! With B ≅ ⊕ Z/d_i ⊕ Z^r, Tor₁(B, B) = ⊕_{i,j} Z/gcd(d_i, d_j) on generators t_ij. The involution
//! induced by interchanging the two copies of B is σ₁(t_ij) = −t_ji (the sign is the Koszul sign of
//! the swap on the two-term resolutions). The Σ₂′-action is x ↦ −σ₁(x), i.e. t_ij ↦ t_ji.

use num_bigint::BigInt;
use num_integer::Integer;

use super::matrix::IntMatrix;
use super::presentation::{AbInvariants, AbMap, AbPresentation, SubquotientResult};

#[derive(Clone, Debug)]
pub struct TorData {
    /// Torsion orders d_1 | d_2 | … of B.
    pub factors: Vec<BigInt>,
    pub group: AbPresentation,
    pub sigma1: AbMap,
    pub action: AbMap,
}

impl TorData {
    pub fn new(b: &AbInvariants) -> TorData {
        let factors = b.torsion.clone();
        let m = factors.len();
        let idx = |i: usize, j: usize| i * m + j;
        let mut rels = IntMatrix::empty(m * m);
        for i in 0..m {
            for j in 0..m {
                let g = factors[i].gcd(&factors[j]);
                rels.push_sparse(vec![(idx(i, j), g)]);
            }
        }
        let group = AbPresentation::new(m * m, rels);
        let mut sigma = IntMatrix::empty(m * m);
        let mut swap = IntMatrix::empty(m * m);
        for i in 0..m {
            for j in 0..m {
                sigma.push_terms([(idx(j, i), -1)]);
                swap.push_terms([(idx(j, i), 1)]);
            }
        }
        let sigma1 = AbMap::new(group.clone(), group.clone(), sigma).expect("swap respects gcd orders");
        let action = AbMap::new(group.clone(), group.clone(), swap).expect("swap respects gcd orders");
        TorData { factors, group, sigma1, action }
    }

    pub fn from_presentation(b: &AbPresentation) -> TorData {
        TorData::new(&b.invariants())
    }

    /// Generator index of t_ij.
    pub fn generator(&self, i: usize, j: usize) -> usize {
        i * self.factors.len() + j
    }

    /// Fixed points of the Σ₂′-action, as the kernel of (action − id) over Z.
    pub fn fixed(&self) -> SubquotientResult {
        let n = self.group.ngens();
        let m = self.action.matrix.sub(&IntMatrix::identity(n));
        AbMap::new_unchecked(self.group.clone(), self.group.clone(), m).kernel()
    }
}

pub fn tor1(b: &AbPresentation) -> TorData {
    TorData::from_presentation(b)
}
