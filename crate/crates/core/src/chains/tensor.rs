//! Chains in B_n(SL₂(A)) ⊗_{SL₂(A)} X_p(A²).
//!
//! B_n is free on the bar tuples, so the tensor product is free abelian on pairs ([g₁|…|g_n], x) with
//! x a generator of X_p; g[τ] ⊗ x is stored as [τ] ⊗ g⁻¹x. This is the normal form used throughout.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{bar_faces, Group, Sl2};
use crate::error::Result;
use crate::ring::{Mat2, Ring};
use crate::xcomplex::{canonical_orbit, ProjectiveLine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorChain {
    pub degree: usize,
    pub level: usize,
    terms: BTreeMap<(Vec<Mat2>, Vec<u32>), i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTerm {
    pub coeff: i64,
    pub tuple: Vec<Mat2>,
    /// Line indices of the X_p generator.
    pub lines: Vec<u32>,
}

pub(crate) fn act_line(ring: &Ring, p1: &ProjectiveLine, g: &Mat2, i: u32) -> u32 {
    p1.index_of_vector(ring, ring.apply(g, p1.line(i).vector())).expect("SL2 preserves unimodular vectors")
}

fn act(ring: &Ring, p1: &ProjectiveLine, g: &Mat2, x: &[u32]) -> Vec<u32> {
    x.iter().map(|&i| act_line(ring, p1, g, i)).collect()
}

impl TensorChain {
    pub fn zero(degree: usize, level: usize) -> TensorChain {
        TensorChain { degree, level, terms: BTreeMap::new() }
    }

    /// Adds k·[τ] ⊗ x; tuples containing the identity are dropped.
    pub fn add_term(&mut self, ring: &Ring, tuple: Vec<Mat2>, x: Vec<u32>, k: i64) {
        assert_eq!(tuple.len(), self.degree, "bar tuple length");
        assert_eq!(x.len(), self.level + 1, "X_p generator length");
        if k == 0 || tuple.iter().any(|g| *g == ring.mat_identity()) {
            return;
        }
        match self.terms.entry((tuple, x)) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += k;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(k);
            }
        }
    }

    /// Adds k·g[τ] ⊗ x = k·[τ] ⊗ g⁻¹x.
    pub fn add_gterm(&mut self, ring: &Ring, p1: &ProjectiveLine, g: &Mat2, tuple: Vec<Mat2>, x: &[u32], k: i64) {
        let gi = ring.mat_inv(g).expect("SL2 element");
        self.add_term(ring, tuple, act(ring, p1, &gi, x), k);
    }

    /// k·([τ] ⊗ x) for every x in an X_p chain given as (generator, coefficient) pairs.
    pub fn add_tensor(&mut self, ring: &Ring, tuple: &[Mat2], x: &[(Vec<u32>, i64)], k: i64) {
        for (gen, c) in x {
            self.add_term(ring, tuple.to_vec(), gen.clone(), k * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mat2>, &Vec<u32>, i64)> {
        self.terms.iter().map(|((t, x), k)| (t, x, *k))
    }

    pub fn records(&self) -> Vec<TensorTerm> {
        self.terms().map(|(t, x, k)| TensorTerm { coeff: k, tuple: t.clone(), lines: x.clone() }).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, ring: &Ring, other: &TensorChain) -> TensorChain {
        assert_eq!((self.degree, self.level), (other.degree, other.level), "shape mismatch");
        let mut out = self.clone();
        for (t, x, k) in other.terms() {
            out.add_term(ring, t.clone(), x.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> TensorChain {
        if k == 0 {
            return TensorChain::zero(self.degree, self.level);
        }
        TensorChain { degree: self.degree, level: self.level, terms: self.terms.iter().map(|(key, v)| (key.clone(), v * k)).collect() }
    }

    pub fn sub(&self, ring: &Ring, other: &TensorChain) -> TensorChain {
        self.add(ring, &other.scale(-1))
    }
}

/// (d ⊗ id): [g₁|…|g_n] ⊗ x ↦ [g₂|…] ⊗ g₁⁻¹x + Σ(−1)^i […|g_ig_{i+1}|…] ⊗ x + (−1)ⁿ[…|g_{n−1}] ⊗ x.
pub fn tensor_d(ring: &Ring, p1: &ProjectiveLine, c: &TensorChain) -> TensorChain {
    assert!(c.degree >= 1, "tensor_d needs degree ≥ 1");
    let g = Sl2(ring);
    let mut out = TensorChain::zero(c.degree - 1, c.level);
    for (t, x, k) in c.terms() {
        for (i, (f, s)) in bar_faces(&g, t).into_iter().enumerate() {
            let y = if i == 0 { act(ring, p1, &g.inv(t[0]), x) } else { x.clone() };
            out.add_term(ring, f, y, s * k);
        }
    }
    out
}

/// (id ⊗ ∂_p), p = level ≥ 1.
pub fn tensor_dx(ring: &Ring, c: &TensorChain) -> TensorChain {
    assert!(c.level >= 1, "tensor_dx needs level ≥ 1");
    let mut out = TensorChain::zero(c.degree, c.level - 1);
    for (t, x, k) in c.terms() {
        for i in 0..x.len() {
            let mut f = x.clone();
            f.remove(i);
            out.add_term(ring, t.clone(), f, if i % 2 == 0 { k } else { -k });
        }
    }
    out
}

/// Rewrites each [τ] ⊗ x as g[τ] ⊗ x. This is bookkeeping on the normal form, not a chain map.
pub fn translate(ring: &Ring, p1: &ProjectiveLine, g: &Mat2, c: &TensorChain) -> TensorChain {
    let mut out = TensorChain::zero(c.degree, c.level);
    for (t, x, k) in c.terms() {
        out.add_gterm(ring, p1, g, t.clone(), x, k);
    }
    out
}

/// [τ] ⊗ x written as h⁻¹[τ] ⊗ (standard representative), with h·(standard) = x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalTerm {
    pub coeff: i64,
    pub coset: Mat2,
    pub tuple: Vec<Mat2>,
}

/// Canonical form at levels 0 and 1, where SL₂(A) is transitive; the coset factor is determined up
/// to right multiplication by the stabilizer of the standard representative.
pub fn tensor_canonicalize(ring: &Ring, p1: &ProjectiveLine, c: &TensorChain) -> Result<Vec<CanonicalTerm>> {
    assert!(c.level <= 1, "canonical form is defined for X_0 and X_1");
    c.terms()
        .map(|(t, x, k)| {
            let h = canonical_orbit(ring, p1, x)?.witness;
            Ok(CanonicalTerm { coeff: k, coset: ring.mat_inv(&h).expect("SL2"), tuple: t.clone() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_SL2_BOUND;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d_squares_to_zero_and_commutes_with_dx() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (inf, zero) = (p1.infinity(), p1.zero_line(&r));
        for _ in 0..50 {
            let t: Vec<Mat2> = (0..3).map(|_| group[rng.gen_range(0..group.len())]).collect();
            let h = group[rng.gen_range(0..group.len())];
            let mut c = TensorChain::zero(3, 1);
            c.add_term(&r, t, act(&r, &p1, &h, &[inf, zero]), 1);
            assert!(tensor_d(&r, &p1, &tensor_d(&r, &p1, &c)).is_zero());
            assert_eq!(tensor_dx(&r, &tensor_d(&r, &p1, &c)), tensor_d(&r, &p1, &tensor_dx(&r, &c)));
        }
    }

    #[test]
    fn canonical_form_reads_back() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let std = vec![p1.infinity(), p1.zero_line(&r)];
        let g = group[17];
        let mut c = TensorChain::zero(1, 1);
        c.add_term(&r, vec![g], std.clone(), 1);
        let canon = tensor_canonicalize(&r, &p1, &c).unwrap();
        assert_eq!(canon[0].coset, r.mat_identity());
        for &h in group.iter().step_by(37) {
            let mut moved = TensorChain::zero(1, 1);
            moved.add_term(&r, vec![g], act(&r, &p1, &h, &std), 1);
            let ct = &tensor_canonicalize(&r, &p1, &moved).unwrap()[0];
            // The recorded coset is h'⁻¹ with h' ∈ hT(A).
            let diff = r.mat_mul(&r.mat_inv(&h).unwrap(), &r.mat_inv(&ct.coset).unwrap());
            assert!(r.is_in_torus(&diff));
            let mut back = TensorChain::zero(1, 1);
            back.add_gterm(&r, &p1, &ct.coset, ct.tuple.clone(), &std, ct.coeff);
            assert_eq!(back, moved);
        }
    }
}
