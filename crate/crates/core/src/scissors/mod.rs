//! Scissors congruence groups P(A) and RP(A), the maps λ, λ₁, λ₂, and the Bloch groups
//! B(A) = ker λ, RP₁(A) = ker λ₁, RB(A) = ker(λ₂ restricted to RP₁(A)).
//!
//! P(A) is generated by [a], a ∈ W_A, modulo
//! [a] − [b] + [b/a] − [(1−a⁻¹)/(1−b⁻¹)] + [(1−a)/(1−b)] for ordered pairs with a, b, a/b ∈ W_A.
//! RP(A) is the R_A-module on the same symbols modulo the refined relator, in which the last three
//! terms carry the coefficients ⟨a⟩, −⟨a⁻¹−1⟩ and +⟨1−a⟩. As an abelian group RP(A) has Z-basis
//! ⟨g⟩[a] indexed by G_A × W_A (class major, symbol minor).

pub mod group_ring;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{sym2z, wedge2, AbInvariants, AbMap, AbPresentation, Echelon, IntMatrix, Multilinear, SubquotientResult};
use crate::ring::{Ring, RingElem};
pub use group_ring::{augmentation_square_generators, GroupRingElem};

/// One term c·⟨class⟩[symbol] of a relator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorTerm {
    pub coeff: i64,
    pub class: usize,
    pub symbol: RingElem,
}

/// Ordered pairs (a, b) with a, b, a/b ∈ W_A, a-major in W_A order.
pub fn relator_pairs(ring: &Ring) -> Vec<(RingElem, RingElem)> {
    let ud = ring.units();
    let mut out = Vec::new();
    for &a in &ud.wset {
        for &b in &ud.wset {
            let q = ring.div(b, a).expect("W_A consists of units");
            if ud.w_index(q).is_some() {
                out.push((a, b));
            }
        }
    }
    out
}

fn in_w(ring: &Ring, x: RingElem) -> bool {
    ring.units().w_index(x).is_some()
}

/// The five symbols a, b, b/a, (1−a⁻¹)/(1−b⁻¹), (1−a)/(1−b), or `None` unless a, b, a/b ∈ W_A.
pub fn relator_symbols(ring: &Ring, a: RingElem, b: RingElem) -> Option<[RingElem; 5]> {
    if !(in_w(ring, a) && in_w(ring, b) && in_w(ring, ring.div(a, b)?)) {
        return None;
    }
    let one = ring.one();
    let ainv = ring.inv(a)?;
    let binv = ring.inv(b)?;
    let s3 = ring.div(b, a)?;
    let s4 = ring.div(ring.sub(one, ainv), ring.sub(one, binv))?;
    let s5 = ring.div(ring.sub(one, a), ring.sub(one, b))?;
    Some([a, b, s3, s4, s5])
}

/// The refined relator for (a, b) with last coefficient `last_sign`·⟨1−a⟩ (the published form has +1).
pub fn refined_relator(ring: &Ring, a: RingElem, b: RingElem, last_sign: i64) -> Option<[RelatorTerm; 5]> {
    let [s1, s2, s3, s4, s5] = relator_symbols(ring, a, b)?;
    let sc = &ring.units().square_classes;
    let one = ring.one();
    let ainv_minus_1 = ring.sub(ring.inv(a)?, one);
    let one_minus_a = ring.sub(one, a);
    Some([
        RelatorTerm { coeff: 1, class: 0, symbol: s1 },
        RelatorTerm { coeff: -1, class: 0, symbol: s2 },
        RelatorTerm { coeff: 1, class: sc.class_of(a), symbol: s3 },
        RelatorTerm { coeff: -1, class: sc.class_of(ainv_minus_1), symbol: s4 },
        RelatorTerm { coeff: last_sign, class: sc.class_of(one_minus_a), symbol: s5 },
    ])
}

/// A^× on the generators of its unit-group presentation.
pub fn units_presentation(ring: &Ring) -> AbPresentation {
    let g = &ring.units().group;
    let n = g.rank();
    let mut rel = IntMatrix::empty(n);
    for r in &g.relations {
        rel.push_dense_i64(r);
    }
    AbPresentation::new(n, rel)
}

pub fn p_presentation(ring: &Ring) -> AbPresentation {
    let ud = ring.units();
    let n = ud.wset.len();
    let mut rel = IntMatrix::empty(n);
    for (a, b) in relator_pairs(ring) {
        let syms = relator_symbols(ring, a, b).expect("pair qualifies");
        let signs = [1, -1, 1, -1, 1];
        rel.push_terms(syms.iter().zip(signs).map(|(s, c)| (ud.w_index(*s).expect("symbol in W_A"), c)));
    }
    AbPresentation::new(n, rel)
}

pub fn rp_index(ring: &Ring, class: usize, symbol: RingElem) -> usize {
    let ud = ring.units();
    class * ud.wset.len() + ud.w_index(symbol).expect("symbol in W_A")
}

/// RP(A) with the refined relator using `last_sign` on the final term.
pub fn rp_presentation_with_sign(ring: &Ring, last_sign: i64) -> AbPresentation {
    let ud = ring.units();
    let sc = &ud.square_classes;
    let n = sc.len() * ud.wset.len();
    let pairs = relator_pairs(ring);
    let mut rel = IntMatrix::empty(n);
    for g in 0..sc.len() {
        for &(a, b) in &pairs {
            let terms = refined_relator(ring, a, b, last_sign).expect("pair qualifies");
            rel.push_terms(terms.iter().map(|t| (rp_index(ring, sc.mul(g, t.class), t.symbol), t.coeff)));
        }
    }
    AbPresentation::new(n, rel)
}

pub fn rp_presentation(ring: &Ring) -> AbPresentation {
    rp_presentation_with_sign(ring, 1)
}

/// Multiplication by ⟨g⟩ on RP(A), one map per square class.
pub fn rp_actions(ring: &Ring, rp: &AbPresentation) -> Result<Vec<AbMap>> {
    let ud = ring.units();
    let sc = &ud.square_classes;
    let w = ud.wset.len();
    (0..sc.len())
        .map(|g| {
            let mut m = IntMatrix::empty(rp.ngens());
            for c in 0..sc.len() {
                for i in 0..w {
                    m.push_terms([(sc.mul(g, c) * w + i, 1)]);
                }
            }
            AbMap::new(rp.clone(), rp.clone(), m)
        })
        .collect()
}

fn consistency(what: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Consistency(format!("{what}: {e}"))
}

/// Everything built from one ring.
#[derive(Clone, Debug)]
pub struct ScissorsResult {
    pub p: AbPresentation,
    pub rp: AbPresentation,
    pub rp_actions: Vec<AbMap>,
    /// RP(A) → P(A), ⟨g⟩[a] ↦ [a].
    pub collapse: AbMap,
    pub units: AbPresentation,
    pub sym2: Multilinear,
    pub lambda: AbMap,
    /// λ₁ with target R_A (free on the square classes); its image lies in I²_A.
    pub lambda1: AbMap,
    pub lambda2: AbMap,
    pub b: SubquotientResult,
    pub rp1: SubquotientResult,
    pub rb: SubquotientResult,
}

/// Builds P, RP, the three maps (checking every relator maps to zero) and the kernels.
pub fn bloch_groups(ring: &Ring) -> Result<ScissorsResult> {
    let ud = ring.units();
    let sc = &ud.square_classes;
    let w = ud.wset.len();
    let one = ring.one();
    let p = p_presentation(ring);
    let rp = rp_presentation(ring);
    let rp_actions = rp_actions(ring, &rp).map_err(consistency("G_A-action on RP"))?;

    let mut collapse = IntMatrix::empty(w);
    for _ in 0..sc.len() {
        for i in 0..w {
            collapse.push_terms([(i, 1)]);
        }
    }
    let collapse = AbMap::new(rp.clone(), p.clone(), collapse).map_err(consistency("RP → P"))?;

    let units = units_presentation(ring);
    let sym2 = sym2z(&units);
    let symbol = |a: RingElem| sym2.pair(ud.group.coords(a), ud.group.coords(ring.sub(one, a)));
    let mut lam = IntMatrix::empty(sym2.group.ngens());
    for &a in &ud.wset {
        lam.push_dense_i64(&symbol(a));
    }
    let lambda = AbMap::new(p.clone(), sym2.group.clone(), lam).map_err(consistency("λ"))?;

    let mut l1 = IntMatrix::empty(sc.len());
    let mut l2 = IntMatrix::empty(sym2.group.ngens());
    for c in 0..sc.len() {
        for &a in &ud.wset {
            let v = GroupRingElem::basis(ring, c)
                .mul(ring, &GroupRingElem::dd(ring, a))
                .mul(ring, &GroupRingElem::dd(ring, ring.sub(one, a)));
            l1.push_dense_i64(&v.0);
            l2.push_dense_i64(&symbol(a));
        }
    }
    let lambda1 = AbMap::new(rp.clone(), AbPresentation::free(sc.len()), l1).map_err(consistency("λ₁"))?;
    let lambda2 = AbMap::new(rp.clone(), sym2.group.clone(), l2).map_err(consistency("λ₂"))?;

    let b = lambda.kernel();
    let rp1 = lambda1.kernel();
    let rb = rp1.map.then(&lambda2).kernel();
    Ok(ScissorsResult { p, rp, rp_actions, collapse, units, sym2, lambda, lambda1, lambda2, b, rp1, rb })
}

impl ScissorsResult {
    /// λ₂ equals λ ∘ (RP → P) as matrices.
    pub fn lambda2_factors(&self) -> bool {
        self.collapse.matrix.mul(&self.lambda.matrix) == self.lambda2.matrix
    }

    /// Every λ₁(⟨g⟩[a]) lies in the sublattice I²_A of R_A.
    pub fn lambda1_in_i2(&self, ring: &Ring) -> bool {
        let i2 = Echelon::new(&augmentation_square_generators(ring), false);
        self.lambda1.matrix.rows().iter().all(|r| i2.contains(r))
    }

    /// RB(A) as ker(RP → R_A ⊕ S²_Z) agrees with the kernel of the restriction.
    pub fn rb_two_ways(&self) -> bool {
        let target = self.lambda1.target.direct_sum(&self.lambda2.target);
        let both = AbMap::new_unchecked(self.rp.clone(), target, self.lambda1.matrix.hstack(&self.lambda2.matrix));
        both.kernel().group.invariants() == self.rb.group.invariants()
    }

    /// RP(A)_{G_A} ≅ P(A): equal invariant factors and the collapsing map is an isomorphism.
    pub fn coinvariants_check(&self) -> bool {
        let n = self.rp.ngens();
        let mut moved = IntMatrix::empty(n);
        for a in &self.rp_actions {
            moved = moved.vstack(&a.matrix.sub(&IntMatrix::identity(n)));
        }
        let coinv = self.rp.quotient(&moved);
        if coinv.invariants() != self.p.invariants() {
            return false;
        }
        match AbMap::new(coinv, self.p.clone(), self.collapse.matrix.clone()) {
            Ok(m) => m.is_isomorphism(),
            Err(_) => false,
        }
    }

    /// Inclusions RB ⊆ RP₁ ⊆ RP compose as expected and the kernels are killed by the maps.
    pub fn chain_checks(&self) -> bool {
        let rb_in_rp = self.rb.map.then(&self.rp1.map);
        self.rp1.map.then(&self.lambda1).is_zero()
            && rb_in_rp.then(&self.lambda2).is_zero()
            && self.rp1.map.is_injective()
            && self.rb.map.is_injective()
    }

    pub fn report(&self, ring: &Ring) -> ScissorsReport {
        let ud = ring.units();
        ScissorsReport {
            ring: ring.spec().to_string(),
            w_set: ud.wset.iter().map(|&a| ring.format(a)).collect(),
            square_classes: ud.square_classes.reps.iter().map(|&a| ring.format(a)).collect(),
            p: GroupSummary::of(&self.p),
            rp: GroupSummary::of(&self.rp),
            rp1: self.rp1.group.invariants(),
            b: self.b.group.invariants(),
            rb: self.rb.group.invariants(),
            s2_units: self.sym2.group.invariants(),
        }
    }
}

/// Generator count, relation count, invariants and SHA-256 of a relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub generators: usize,
    pub relations: usize,
    pub invariants: AbInvariants,
    pub relations_sha256: String,
}

impl GroupSummary {
    pub fn of(p: &AbPresentation) -> GroupSummary {
        GroupSummary {
            generators: p.ngens(),
            relations: p.relations().nrows(),
            invariants: p.invariants(),
            relations_sha256: p.relations().sha256(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScissorsReport {
    pub ring: String,
    pub w_set: Vec<String>,
    pub square_classes: Vec<String>,
    pub p: GroupSummary,
    pub rp: GroupSummary,
    pub rp1: AbInvariants,
    pub b: AbInvariants,
    pub rb: AbInvariants,
    pub s2_units: AbInvariants,
}

/// Whether [a] ↦ (a∧(1−a), −a⊗(1−a)) into ∧²A^× ⊕ S²_Z(A^×) kills every five-term relator, and
/// whether a∧b ↦ (2(a∧b), 2(a⊗b)) is a homomorphism from ∧²A^× into the same target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCheck {
    pub relators_vanish: bool,
    pub companion_is_homomorphism: bool,
}

pub fn gl2_delta_check(ring: &Ring) -> DeltaCheck {
    let ud = ring.units();
    let one = ring.one();
    let units = units_presentation(ring);
    let w2 = wedge2(&units);
    let s2 = sym2z(&units);
    let target = w2.group.direct_sum(&s2.group);
    let mut m = IntMatrix::empty(target.ngens());
    for &a in &ud.wset {
        let (x, y) = (ud.group.coords(a), ud.group.coords(ring.sub(one, a)));
        let mut row = w2.pair(x, y);
        row.extend(s2.pair(x, y).iter().map(|v| -v));
        m.push_dense_i64(&row);
    }
    let relators_vanish = AbMap::new(p_presentation(ring), target.clone(), m).is_ok();

    let n = units.ngens();
    let mut c = IntMatrix::empty(target.ngens());
    let basis = |i: usize| (0..n).map(|k| (k == i) as i64).collect::<Vec<i64>>();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (basis(i), basis(j));
            let mut row: Vec<i64> = w2.pair(&x, &y).iter().map(|v| 2 * v).collect();
            row.extend(s2.pair(&x, &y).iter().map(|v| 2 * v));
            c.push_dense_i64(&row);
        }
    }
    let companion_is_homomorphism = AbMap::new(w2.group.clone(), target, c).is_ok();
    DeltaCheck { relators_vanish, companion_is_homomorphism }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::snf::dense_invariant_factors;
    use num_bigint::BigInt;

    fn ring(s: &str) -> Ring {
        Ring::parse(s).unwrap()
    }

    #[test]
    fn gf2_is_empty() {
        let r = ring("gf(2,1)");
        let s = bloch_groups(&r).unwrap();
        assert_eq!(s.p.ngens(), 0);
        for g in [&s.p, &s.rp, &s.b.group, &s.rp1.group, &s.rb.group] {
            assert!(g.invariants().is_trivial());
        }
    }

    #[test]
    fn gf4_counts() {
        let r = ring("gf(2,2)");
        let p = p_presentation(&r);
        assert_eq!((p.ngens(), p.relations().nrows()), (2, 2));
    }

    #[test]
    fn gf8_relators_by_enumeration_and_dense_oracle() {
        let r = ring("gf(2,3)");
        let ud = r.units();
        // Brute-force count of ordered pairs with a, b, a/b all in W_A.
        let w: Vec<RingElem> = r.elements().filter(|&a| r.is_unit(a) && r.is_unit(r.sub(r.one(), a))).collect();
        let mut count = 0;
        for &a in &w {
            for &b in &w {
                let q = r.div(a, b).unwrap();
                count += w.contains(&q) as usize;
            }
        }
        let p = p_presentation(&r);
        assert_eq!((p.ngens(), p.relations().nrows()), (ud.wset.len(), count));
        let s = bloch_groups(&r).unwrap();
        // S²_Z of a cyclic group of odd order vanishes, so B = P; compare against dense SNF of the relators.
        let diag = dense_invariant_factors(p.relations());
        let torsion: Vec<BigInt> = diag.iter().filter(|d| **d != BigInt::from(1)).cloned().collect();
        assert_eq!(s.b.group.invariants(), AbInvariants { torsion, free_rank: p.ngens() - diag.len() });
    }

    #[test]
    fn trivial_square_classes_collapse() {
        for s in ["gf(2,3)", "gf(2,4)"] {
            let r = ring(s);
            assert_eq!(r.units().square_classes.len(), 1);
            let sr = bloch_groups(&r).unwrap();
            assert_eq!(sr.rp.relations(), sr.p.relations());
            assert!(sr.lambda1.matrix.rows().iter().all(|row| row.is_empty()));
            assert_eq!(sr.rp1.group.invariants(), sr.rp.invariants());
            assert_eq!(sr.rb.group.invariants(), sr.b.group.invariants());
        }
    }

    #[test]
    fn refined_relator_shape() {
        // Z/9 has no qualifying pairs: W = {2, 5, 8} and every quotient b/a is 1 mod 3.
        assert!(relator_pairs(&ring("z/9")).is_empty());
        let r = ring("z/25");
        let (a, b) = relator_pairs(&r)[0];
        let t = refined_relator(&r, a, b, 1).unwrap();
        let sc = &r.units().square_classes;
        let one = r.one();
        assert_eq!(t.map(|x| x.coeff), [1, -1, 1, -1, 1]);
        assert_eq!(t[2].class, sc.class_of(a));
        assert_eq!(t[3].class, sc.class_of(r.sub(r.inv(a).unwrap(), one)));
        assert_eq!(t[4].class, sc.class_of(r.sub(one, a)));
    }

    #[test]
    fn structural_checks() {
        for s in ["gf(2,2)", "gf(2,3)", "z/9", "z/25", "gf(2,1)[t]/t^3", "gf(2,2)[t]/t^2"] {
            let r = ring(s);
            let sr = bloch_groups(&r).unwrap();
            let ud = r.units();
            assert_eq!(sr.rp.ngens(), ud.square_classes.len() * ud.wset.len(), "{s}");
            assert!(sr.lambda2_factors(), "{s}");
            assert!(sr.lambda1_in_i2(&r), "{s}");
            assert!(sr.rb_two_ways(), "{s}");
            assert!(sr.coinvariants_check(), "{s}");
            assert!(sr.chain_checks(), "{s}");
            let d = gl2_delta_check(&r);
            assert!(d.relators_vanish && d.companion_is_homomorphism, "{s}");
        }
    }

    #[test]
    fn wrong_last_sign_changes_rp_when_classes_are_nontrivial() {
        // Over Z/25 the ⟨1−a⟩ coefficient is a nontrivial class for some pairs, so the sign matters.
        let r = ring("z/25");
        let plus = rp_presentation_with_sign(&r, 1);
        let minus = rp_presentation_with_sign(&r, -1);
        assert_ne!(plus.relations(), minus.relations());
    }
}
