use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::echelon::Echelon;
use super::matrix::{IntMatrix, SparseVec};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated abelian group: `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r`,
/// `1 < d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbInvariants {
    #[serde(with = "big_list")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

pub(crate) mod big_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl AbInvariants {
    pub fn trivial() -> AbInvariants {
        AbInvariants { torsion: Vec::new(), free_rank: 0 }
    }

    /// From the nonzero Smith diagonal of a relation matrix on `ngens` generators.
    pub fn from_diagonal(ngens: usize, diag: &[BigInt]) -> AbInvariants {
        let torsion = diag.iter().filter(|d| !d.is_one()).cloned().collect();
        AbInvariants { torsion, free_rank: ngens - diag.len() }
    }

    pub fn cyclic(orders: &[u64]) -> AbInvariants {
        // Normalize through the Smith form of the diagonal.
        let n = orders.len();
        let mut rel = IntMatrix::zeros(0, n);
        for (i, o) in orders.iter().enumerate() {
            rel.push_terms([(i, *o as i64)]);
        }
        AbInvariants::from_diagonal(n, &Echelon::new(&rel, false).invariant_factors())
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Primary part of the torsion at the prime `p`, as invariant factors.
    pub fn p_part(&self, p: u64) -> AbInvariants {
        let p = BigInt::from(p);
        let orders: Vec<BigInt> = self
            .torsion
            .iter()
            .map(|d| {
                let mut q = BigInt::one();
                let mut d = d.clone();
                while (&d % &p).is_zero() {
                    d /= &p;
                    q *= &p;
                }
                q
            })
            .filter(|q| !q.is_one())
            .collect();
        AbInvariants { torsion: orders, free_rank: 0 }
    }
}

impl fmt::Display for AbInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^n / rowspace(R)`.
#[derive(Clone, Serialize, Deserialize)]
pub struct AbPresentation {
    ngens: usize,
    relations: IntMatrix,
    #[serde(skip)]
    reduced: OnceLock<Echelon>,
}

impl fmt::Debug for AbPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbPresentation({} gens, {} relations)", self.ngens, self.relations.nrows())
    }
}

impl AbPresentation {
    pub fn new(ngens: usize, relations: IntMatrix) -> AbPresentation {
        assert_eq!(relations.ncols(), ngens, "relation width must equal the generator count");
        AbPresentation { ngens, relations, reduced: OnceLock::new() }
    }

    pub fn free(n: usize) -> AbPresentation {
        AbPresentation::new(n, IntMatrix::empty(n))
    }

    pub fn zero() -> AbPresentation {
        AbPresentation::free(0)
    }

    /// `Z/d_1 ⊕ … ⊕ Z/d_k` on the standard generators (an order 0 gives a free summand).
    pub fn cyclic(orders: &[u64]) -> AbPresentation {
        let n = orders.len();
        let mut rel = IntMatrix::empty(n);
        for (i, &d) in orders.iter().enumerate() {
            if d != 0 {
                rel.push_terms([(i, d as i64)]);
            }
        }
        AbPresentation::new(n, rel)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    fn reduced(&self) -> &Echelon {
        self.reduced.get_or_init(|| Echelon::new(&self.relations, false))
    }

    /// Relations replaced by a basis of their lattice (same group, at most `n` rows).
    pub fn simplified(&self) -> AbPresentation {
        AbPresentation::new(self.ngens, self.reduced().basis_matrix())
    }

    pub fn invariants(&self) -> AbInvariants {
        AbInvariants::from_diagonal(self.ngens, &self.reduced().invariant_factors())
    }

    pub fn order(&self) -> Option<BigInt> {
        self.invariants().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }

    /// Whether the element with generator coordinates `v` is zero.
    pub fn is_zero_elem(&self, v: &[(usize, BigInt)]) -> bool {
        self.reduced().contains(v)
    }

    pub fn is_zero_dense(&self, v: &[i64]) -> bool {
        self.is_zero_elem(&dense_to_sparse(v))
    }

    /// Whether `v` lies in the subgroup generated by the rows of `gens`.
    pub fn subgroup_contains(&self, gens: &IntMatrix, v: &[(usize, BigInt)]) -> bool {
        Echelon::new(&gens.vstack(&self.relations), false).contains(v)
    }

    pub fn direct_sum(&self, other: &AbPresentation) -> AbPresentation {
        AbPresentation::new(self.ngens + other.ngens, self.relations.direct_sum(&other.relations))
    }

    /// Quotient by extra relations.
    pub fn quotient(&self, extra: &IntMatrix) -> AbPresentation {
        AbPresentation::new(self.ngens, self.relations.vstack(extra))
    }
}

pub fn dense_to_sparse(v: &[i64]) -> SparseVec<BigInt> {
    v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, BigInt::from(*x))).collect()
}

/// Homomorphism given on generators: row `i` of `matrix` is the image of generator `i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbMap {
    pub source: AbPresentation,
    pub target: AbPresentation,
    pub matrix: IntMatrix,
}

pub enum Subquotient {
    Kernel,
    Image,
    Cokernel,
}

/// A subquotient with the maps witnessing it.
#[derive(Clone, Debug)]
pub struct SubquotientResult {
    pub group: AbPresentation,
    /// Kernel: inclusion into the source. Image: inclusion into the target. Cokernel: projection
    /// from the target.
    pub map: AbMap,
}

impl AbMap {
    /// Checks that relations of the source land in the relation lattice of the target.
    pub fn new(source: AbPresentation, target: AbPresentation, matrix: IntMatrix) -> Result<AbMap> {
        if matrix.nrows() != source.ngens() || matrix.ncols() != target.ngens() {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                source.ngens(),
                target.ngens()
            )));
        }
        let images = source.relations().mul(&matrix);
        for (i, row) in images.rows().iter().enumerate() {
            if !target.is_zero_elem(row) {
                return Err(Error::InvalidMap(format!("relation {i} does not map to zero")));
            }
        }
        Ok(AbMap { source, target, matrix })
    }

    pub fn new_unchecked(source: AbPresentation, target: AbPresentation, matrix: IntMatrix) -> AbMap {
        AbMap { source, target, matrix }
    }

    pub fn identity(p: &AbPresentation) -> AbMap {
        AbMap::new_unchecked(p.clone(), p.clone(), IntMatrix::identity(p.ngens()))
    }

    pub fn apply(&self, v: &[(usize, BigInt)]) -> SparseVec<BigInt> {
        self.matrix.left_mul(v)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AbMap) -> AbMap {
        AbMap::new_unchecked(self.source.clone(), other.target.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.rows().iter().all(|r| self.target.is_zero_elem(r))
    }

    /// Lattice `L ⊆ Z^n` of source coordinate vectors mapping to zero, as basis rows.
    fn preimage_of_zero(&self) -> IntMatrix {
        let n = self.source.ngens();
        let stacked = self.matrix.vstack(&self.target.simplified().relations);
        let kernel = Echelon::new(&stacked, true).kernel().expect("tracked");
        let l = kernel.column_range(0, n);
        Echelon::new(&l, false).basis_matrix()
    }

    pub fn subquotient(&self, kind: Subquotient) -> SubquotientResult {
        match kind {
            Subquotient::Kernel => {
                let l = self.preimage_of_zero();
                let ell = l.nrows();
                // Relations among the kernel generators: c with c·L in rowspace(R_S).
                let rs = self.source.simplified();
                let k = Echelon::new(&l.vstack(rs.relations()), true).kernel().expect("tracked").column_range(0, ell);
                let group = AbPresentation::new(ell, Echelon::new(&k, false).basis_matrix());
                let map = AbMap::new_unchecked(group.clone(), self.source.clone(), l);
                SubquotientResult { group, map }
            }
            Subquotient::Image => {
                let n = self.source.ngens();
                let group = AbPresentation::new(n, self.preimage_of_zero());
                let map = AbMap::new_unchecked(group.clone(), self.target.clone(), self.matrix.clone());
                SubquotientResult { group, map }
            }
            Subquotient::Cokernel => {
                let rel = self.target.relations().vstack(&self.matrix);
                let group = AbPresentation::new(self.target.ngens(), rel).simplified();
                let map = AbMap::new_unchecked(self.target.clone(), group.clone(), IntMatrix::identity(self.target.ngens()));
                SubquotientResult { group, map }
            }
        }
    }

    pub fn kernel(&self) -> SubquotientResult {
        self.subquotient(Subquotient::Kernel)
    }

    pub fn image(&self) -> SubquotientResult {
        self.subquotient(Subquotient::Image)
    }

    pub fn cokernel(&self) -> SubquotientResult {
        self.subquotient(Subquotient::Cokernel)
    }

    /// Injective on the presented groups.
    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(t: &[u64], r: usize) -> AbInvariants {
        AbInvariants { torsion: t.iter().map(|x| BigInt::from(*x)).collect(), free_rank: r }
    }

    #[test]
    fn multiplication_maps_on_z() {
        let z = AbPresentation::free(1);
        let two = AbMap::new(z.clone(), z.clone(), IntMatrix::from_dense_i64(1, &[vec![2]])).unwrap();
        assert_eq!(two.kernel().group.invariants(), inv(&[], 0));
        let six = AbMap::new(z.clone(), z.clone(), IntMatrix::from_dense_i64(1, &[vec![6]])).unwrap();
        assert_eq!(six.cokernel().group.invariants(), inv(&[6], 0));
        assert_eq!(six.image().group.invariants(), inv(&[], 1));
    }

    #[test]
    fn kernel_of_times_four_on_z12() {
        let z12 = AbPresentation::cyclic(&[12]);
        let f = AbMap::new(z12.clone(), z12.clone(), IntMatrix::from_dense_i64(1, &[vec![4]])).unwrap();
        let k = f.kernel();
        assert_eq!(k.group.invariants(), inv(&[4], 0));
        // Oracle: enumerate Z/12.
        let kernel_elems: Vec<i64> = (0..12).filter(|x| (4 * x) % 12 == 0).collect();
        assert_eq!(kernel_elems, vec![0, 3, 6, 9]);
        // The inclusion sends the kernel generator to an element of order 4, i.e. ±3 mod 12.
        let g = k.map.matrix.get(0, 0);
        let g = ((g % 12) + 12) % 12;
        assert!(g == BigInt::from(3) || g == BigInt::from(9));
    }

    #[test]
    fn invalid_map_rejected() {
        let z2 = AbPresentation::cyclic(&[2]);
        let z3 = AbPresentation::cyclic(&[3]);
        assert!(AbMap::new(z2, z3, IntMatrix::from_dense_i64(1, &[vec![1]])).is_err());
    }

    #[test]
    fn display_and_order() {
        let g = AbPresentation::cyclic(&[4, 6, 0]);
        let i = g.invariants();
        assert_eq!(i, inv(&[2, 12], 1));
        assert_eq!(i.to_string(), "Z/2 + Z/12 + Z");
        assert_eq!(i.order(), None);
        assert_eq!(AbInvariants::cyclic(&[4, 6]).order(), Some(BigInt::from(24)));
        assert_eq!(AbInvariants::cyclic(&[12, 18]).p_part(2), inv(&[2, 4], 0));
        assert_eq!(AbInvariants::trivial().to_string(), "0");
    }

    #[test]
    fn projection_onto_quotient_is_surjective() {
        let z2z4 = AbPresentation::cyclic(&[2, 4]);
        let f = AbMap::new(z2z4.clone(), z2z4.clone(), IntMatrix::from_dense_i64(2, &[vec![0, 2], vec![0, 2]])).unwrap();
        let c = f.cokernel();
        assert_eq!(c.group.invariants(), inv(&[2, 2], 0));
        assert!(c.map.is_surjective());
        // Kernel {(a, b) : a + b even} contains (1, 1) of order 4.
        assert_eq!(f.kernel().group.invariants(), inv(&[4], 0));
        assert_eq!(f.image().group.invariants(), inv(&[2], 0));
    }
}
