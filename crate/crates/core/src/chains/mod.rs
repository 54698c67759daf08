//! Formal chains in the normalized bar resolution and the homogeneous resolution of a finite group,
//! chains in B_•(SL₂(A)) ⊗_{SL₂(A)} X_p(A²), and the maps that push them down to the torus.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::ring::{Mat2, Ring, RingElem};

mod boundary;
mod pushdown;
mod tensor;

pub use boundary::{is_boundary, witness_chain, BoundarySearch, BoundarySolver, DEFAULT_BOUNDARY_BUDGET};
pub use pushdown::{alpha, bar_b, bar_t, push_x0_to_t, push_x1_to_t, section_b, section_t};
pub use tensor::{tensor_canonicalize, tensor_d, tensor_dx, translate, CanonicalTerm, TensorChain};

pub trait Group: Sync {
    type Elem: Copy + Ord + Eq + Hash + Debug + Send + Sync;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    fn identity(&self) -> Self::Elem;
}

/// SL₂(A) under matrix multiplication.
#[derive(Clone, Copy)]
pub struct Sl2<'r>(pub &'r Ring);

impl Group for Sl2<'_> {
    type Elem = Mat2;
    fn mul(&self, a: Mat2, b: Mat2) -> Mat2 {
        self.0.mat_mul(&a, &b)
    }
    fn inv(&self, a: Mat2) -> Mat2 {
        self.0.mat_inv(&a).expect("SL2 element")
    }
    fn identity(&self) -> Mat2 {
        self.0.mat_identity()
    }
}

/// A^×, identified with T(A) by u ↦ diag(u, u⁻¹).
#[derive(Clone, Copy)]
pub struct Units<'r>(pub &'r Ring);

impl Group for Units<'_> {
    type Elem = RingElem;
    fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        self.0.mul(a, b)
    }
    fn inv(&self, a: RingElem) -> RingElem {
        self.0.inv(a).expect("unit")
    }
    fn identity(&self) -> RingElem {
        self.0.one()
    }
}

/// Integer combination of tuples of a fixed length, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<E: Ord> {
    pub degree: usize,
    terms: BTreeMap<Vec<E>, i64>,
}

impl<E: Copy + Ord> Chain<E> {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    fn add_raw(&mut self, t: Vec<E>, k: i64) {
        if k == 0 {
            return;
        }
        match self.terms.entry(t) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<E>, i64)> {
        self.terms.iter().map(|(t, k)| (t, *k))
    }

    pub fn coeff(&self, t: &[E]) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (t, k) in other.terms() {
            out.add_raw(t.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Chain::zero(self.degree);
        }
        Chain { degree: self.degree, terms: self.terms.iter().map(|(t, v)| (t.clone(), v * k)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Serializable list of (coefficient, tuple).
    pub fn record(&self) -> ChainRecord<E> {
        ChainRecord { degree: self.degree, terms: self.terms().map(|(t, k)| (k, t.clone())).collect() }
    }

    pub fn map_entries<F: Copy + Ord>(&self, f: impl Fn(E) -> F) -> Chain<F> {
        let mut out = Chain::zero(self.degree);
        for (t, k) in self.terms() {
            out.add_raw(t.iter().map(|&e| f(e)).collect(), k);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord<E> {
    pub degree: usize,
    pub terms: Vec<(i64, Vec<E>)>,
}

/// [g₁|…|g_n] in the normalized bar resolution, read in B_n ⊗_G Z: tuples containing the identity are
/// dropped on insertion.
pub type BarChain<E> = Chain<E>;

/// (g₀, …, g_n) in the homogeneous resolution.
pub type HomogChain<E> = Chain<E>;

impl<E: Copy + Ord> Chain<E> {
    pub fn bar_term<G: Group<Elem = E>>(&mut self, g: &G, t: Vec<E>, k: i64) {
        assert_eq!(t.len(), self.degree, "bar tuple length");
        if t.iter().any(|&e| e == g.identity()) {
            return;
        }
        self.add_raw(t, k);
    }

    pub fn homog_term(&mut self, t: Vec<E>, k: i64) {
        assert_eq!(t.len(), self.degree + 1, "homogeneous tuple length");
        self.add_raw(t, k);
    }

    pub fn bar_from<G: Group<Elem = E>>(g: &G, degree: usize, terms: impl IntoIterator<Item = (Vec<E>, i64)>) -> Self {
        let mut c = Chain::zero(degree);
        for (t, k) in terms {
            c.bar_term(g, t, k);
        }
        c
    }
}

impl<E: Copy + Ord> Chain<E> {
    pub fn from_homog(terms: impl IntoIterator<Item = (Vec<E>, i64)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let degree = terms.first().map_or(0, |(t, _)| t.len() - 1);
        let mut c = Chain::zero(degree);
        for (t, k) in terms {
            c.homog_term(t, k);
        }
        c
    }
}

/// Faces of [g₁|…|g_n] with trivial coefficients: [g₂|…] − [g₁g₂|…] + … + (−1)ⁿ[…|g_{n−1}].
pub fn bar_faces<G: Group>(g: &G, t: &[G::Elem]) -> Vec<(Vec<G::Elem>, i64)> {
    let n = t.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push((t[1..].to_vec(), 1));
    for i in 0..n.saturating_sub(1) {
        let mut f = t[..i].to_vec();
        f.push(g.mul(t[i], t[i + 1]));
        f.extend_from_slice(&t[i + 2..]);
        out.push((f, if i % 2 == 0 { -1 } else { 1 }));
    }
    out.push((t[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 }));
    out
}

/// Bar differential in B_• ⊗_G Z.
pub fn bar_d<G: Group>(g: &G, c: &BarChain<G::Elem>) -> BarChain<G::Elem> {
    assert!(c.degree >= 1, "bar_d needs degree ≥ 1");
    let mut out = Chain::zero(c.degree - 1);
    for (t, k) in c.terms() {
        for (f, s) in bar_faces(g, t) {
            out.bar_term(g, f, s * k);
        }
    }
    out
}

/// Σ(−1)^i (g₀, …, ĝ_i, …, g_n).
pub fn homog_d<E: Copy + Ord>(c: &HomogChain<E>) -> HomogChain<E> {
    assert!(c.degree >= 1, "homog_d needs degree ≥ 1");
    let mut out = Chain::zero(c.degree - 1);
    for (t, k) in c.terms() {
        for i in 0..t.len() {
            let mut f = t.clone();
            f.remove(i);
            out.homog_term(f, if i % 2 == 0 { k } else { -k });
        }
    }
    out
}

/// [h₁|…|h_n] ↦ (1, h₁, h₁h₂, …, h₁⋯h_n).
pub fn bar_to_homog<G: Group>(g: &G, c: &BarChain<G::Elem>) -> HomogChain<G::Elem> {
    let mut out = Chain::zero(c.degree);
    for (t, k) in c.terms() {
        out.homog_term(prefix_products(g, g.identity(), t), k);
    }
    out
}

/// (x, x g₁, x g₁g₂, …).
pub fn prefix_products<G: Group>(g: &G, start: G::Elem, t: &[G::Elem]) -> Vec<G::Elem> {
    let mut acc = start;
    let mut out = vec![acc];
    for &h in t {
        acc = g.mul(acc, h);
        out.push(acc);
    }
    out
}

/// (g₀, …, g_n) ↦ g₀[g₀⁻¹g₁|…|g_{n−1}⁻¹g_n], returned as (g₀, bar tuple) pairs.
pub fn homog_to_bar_free<G: Group>(g: &G, c: &HomogChain<G::Elem>) -> BTreeMap<(G::Elem, Vec<G::Elem>), i64> {
    let mut out: BTreeMap<(G::Elem, Vec<G::Elem>), i64> = BTreeMap::new();
    for (t, k) in c.terms() {
        let bar: Vec<_> = t.windows(2).map(|w| g.mul(g.inv(w[0]), w[1])).collect();
        if bar.iter().any(|&e| e == g.identity()) {
            continue;
        }
        *out.entry((t[0], bar)).or_insert(0) += k;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// The same conversion read in ⊗_G Z, where the leading coefficient g₀ is forgotten.
pub fn homog_to_bar<G: Group>(g: &G, c: &HomogChain<G::Elem>) -> BarChain<G::Elem> {
    let mut out = Chain::zero(c.degree);
    for ((_, bar), k) in homog_to_bar_free(g, c) {
        out.bar_term(g, bar, k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_SL2_BOUND;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bar_boundary_over_units() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let u = Units(&r);
        let (a, b) = (RingElem(2), RingElem(3));
        let c = BarChain::bar_from(&u, 2, [(vec![a, b], 1)]);
        let expected = BarChain::bar_from(&u, 1, [(vec![b], 1), (vec![r.mul(a, b)], -1), (vec![a], 1)]);
        assert_eq!(bar_d(&u, &c), expected);
        // d[g] = 0 in B_0 ⊗ Z.
        assert!(bar_d(&u, &BarChain::bar_from(&u, 1, [(vec![a], 1)])).is_zero());
    }

    #[test]
    fn bar_d_squares_to_zero_on_sl2() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let g = Sl2(&r);
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t: Vec<Mat2> = (0..3).map(|_| group[rng.gen_range(0..group.len())]).collect();
            let c = BarChain::bar_from(&g, 3, [(t, 1)]);
            assert!(bar_d(&g, &bar_d(&g, &c)).is_zero());
            let h = bar_to_homog(&g, &c);
            assert!(homog_d(&homog_d(&h)).is_zero());
        }
    }

    #[test]
    fn conversions_round_trip() {
        let r = Ring::parse("gf(2,2)").unwrap();
        let g = Sl2(&r);
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut c = BarChain::zero(3);
        for _ in 0..20 {
            let t: Vec<Mat2> = (0..3).map(|_| group[rng.gen_range(0..group.len())]).collect();
            c.bar_term(&g, t, rng.gen_range(-3..=3));
        }
        assert_eq!(homog_to_bar(&g, &bar_to_homog(&g, &c)), c);
        let (x, y) = (group[7], group[20]);
        let h = HomogChain::from_homog([(vec![x, y], 1)]);
        let free = homog_to_bar_free(&g, &h);
        assert_eq!(free.into_iter().collect::<Vec<_>>(), vec![((x, vec![g.mul(g.inv(x), y)]), 1)]);
    }

    #[test]
    fn conversions_commute_with_boundaries() {
        // In ⊗_G Z: the bar boundary of a chain equals the homogeneous boundary read back as bar chains.
        let r = Ring::parse("gf(2,2)").unwrap();
        let g = Sl2(&r);
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let t: Vec<Mat2> = (0..3).map(|_| group[rng.gen_range(0..group.len())]).collect();
            let c = BarChain::bar_from(&g, 3, [(t, 1)]);
            assert_eq!(homog_to_bar(&g, &homog_d(&bar_to_homog(&g, &c))), bar_d(&g, &c));
        }
    }

    #[test]
    fn normalization_drops_identity_tuples() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let u = Units(&r);
        let c = BarChain::bar_from(&u, 2, [(vec![r.one(), RingElem(3)], 5)]);
        assert!(c.is_zero());
        // The faces of a degenerate tuple are degenerate or cancel in pairs.
        for t in [vec![RingElem(3), r.one(), RingElem(4)], vec![r.one(), RingElem(5), RingElem(4)]] {
            let faces = BarChain::bar_from(&u, 2, bar_faces(&u, &t));
            assert!(faces.is_zero(), "{t:?}");
        }
    }
}

