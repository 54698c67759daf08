//! Coset sections and the maps B_• ⊗_{SL₂} X_p → B_•(A^×) ⊗ Z through Shapiro's lemma.

use super::tensor::TensorChain;
use super::{prefix_products, BarChain, Group, Sl2, Units};
use crate::error::{Error, Result};
use crate::ring::{Mat2, Ring, RingElem};
use crate::xcomplex::{canonical_orbit, ProjectiveLine};

/// s(T g): the representative of T(A)·g with top-left entry 1, or with top-right entry 1 when the
/// top-left entry is not a unit. Over a field the second case is [[0, 1], [bc, bd]] = [[0, 1], [−1, bd]].
pub fn section_t(ring: &Ring, g: &Mat2) -> Result<Mat2> {
    if let Some(ai) = ring.inv(g.a) {
        Ok(Mat2::new(ring.one(), ring.mul(ai, g.b), ring.mul(g.a, g.c), ring.mul(g.a, g.d)))
    } else if let Some(bi) = ring.inv(g.b) {
        Ok(Mat2::new(ring.mul(bi, g.a), ring.one(), ring.mul(g.b, g.c), ring.mul(g.b, g.d)))
    } else {
        Err(Error::Section(format!("{:?}", g.codes())))
    }
}

/// ḡ = g·s(Tg)⁻¹ ∈ T(A), returned as its top-left entry.
pub fn bar_t(ring: &Ring, g: &Mat2) -> Result<RingElem> {
    let s = section_t(ring, g)?;
    let t = ring.mat_mul(g, &ring.mat_inv(&s).expect("SL2"));
    if !ring.is_in_torus(&t) {
        return Err(Error::Consistency(format!("T-section left {:?} outside T(A)", t.codes())));
    }
    Ok(t.a)
}

/// s_B(B g): the representative of B(A)·g with normalized bottom row, [[0, −1], [1, d/c]] when c is a
/// unit and [[1, 0], [c/d, 1]] otherwise.
pub fn section_b(ring: &Ring, g: &Mat2) -> Result<Mat2> {
    if let Some(ci) = ring.inv(g.c) {
        Ok(Mat2::new(ring.zero(), ring.neg(ring.one()), ring.one(), ring.mul(ci, g.d)))
    } else if let Some(di) = ring.inv(g.d) {
        Ok(Mat2::new(ring.one(), ring.zero(), ring.mul(di, g.c), ring.one()))
    } else {
        Err(Error::Section(format!("{:?}", g.codes())))
    }
}

/// g·s_B(Bg)⁻¹ ∈ B(A).
pub fn bar_b(ring: &Ring, g: &Mat2) -> Result<Mat2> {
    let s = section_b(ring, g)?;
    let b = ring.mat_mul(g, &ring.mat_inv(&s).expect("SL2"));
    if !ring.is_in_borel(&b) {
        return Err(Error::Consistency(format!("B-section left {:?} outside B(A)", b.codes())));
    }
    Ok(b)
}

/// The retraction α: B(A) → T(A) ≅ A^×, [[u, b], [0, u⁻¹]] ↦ u.
pub fn alpha(b: &Mat2) -> RingElem {
    b.a
}

fn homog_units_to_bar(ring: &Ring, units: &[RingElem], k: i64, out: &mut BarChain<RingElem>) {
    let u = Units(ring);
    let bar: Vec<RingElem> = units.windows(2).map(|w| u.mul(u.inv(w[0]), w[1])).collect();
    out.bar_term(&u, bar, k);
}

fn push(
    ring: &Ring,
    p1: &ProjectiveLine,
    c: &TensorChain,
    to_unit: impl Fn(&Mat2) -> Result<RingElem>,
) -> Result<BarChain<RingElem>> {
    let g = Sl2(ring);
    let mut out = BarChain::zero(c.degree);
    for (t, x, k) in c.terms() {
        let h = canonical_orbit(ring, p1, x)?.witness;
        let homog = prefix_products(&g, g.inv(h), t);
        let units = homog.iter().map(&to_unit).collect::<Result<Vec<_>>>()?;
        homog_units_to_bar(ring, &units, k, &mut out);
    }
    Ok(out)
}

/// [τ] ⊗ h(∞, 0) ↦ h⁻¹[τ] ⊗_T 1 ↦ (h⁻¹, h⁻¹g₁, …) ↦ (overline entries) ↦ bar chain over A^×.
pub fn push_x1_to_t(ring: &Ring, p1: &ProjectiveLine, c: &TensorChain) -> Result<BarChain<RingElem>> {
    assert_eq!(c.level, 1, "push_x1_to_t takes X_1 chains");
    push(ring, p1, c, |m| bar_t(ring, m))
}

/// [τ] ⊗ h(∞) ↦ h⁻¹[τ] ⊗_B 1 ↦ homogeneous chain over SL₂ ↦ (s_B-reduced entries in B(A)) ↦ α ↦ bar
/// chain over A^×.
pub fn push_x0_to_t(ring: &Ring, p1: &ProjectiveLine, c: &TensorChain) -> Result<BarChain<RingElem>> {
    assert_eq!(c.level, 0, "push_x0_to_t takes X_0 chains");
    push(ring, p1, c, |m| bar_b(ring, m).map(|b| alpha(&b)))
}
