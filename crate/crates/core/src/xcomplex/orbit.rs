//! SL₂(A)-orbits on X_n for n ≤ 4: the standard representatives (∞, 0, a), ⟨a⟩[x], ⟨a⟩[x, y],
//! a constructed canonicalization witness, and the maps read off from them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{det2, ProjectiveLine, XComplex, DEFAULT_X_BUDGET};
use crate::error::{Error, Result};
use crate::fgab::{Echelon, IntMatrix};
use crate::ring::{Mat2, Ring, RingElem};
use crate::scissors::{self, GroupRingElem, RelatorTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitParams {
    None,
    X(RingElem),
    XY(RingElem, RingElem),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitForm {
    pub dim: usize,
    /// Square class ⟨a⟩ (dimensions ≥ 2).
    pub class: Option<usize>,
    pub params: OrbitParams,
    /// g ∈ SL₂(A) with g·(standard representative) = input.
    pub witness: Mat2,
}

impl OrbitForm {
    /// The orbit invariants, without the witness.
    pub fn key(&self) -> (usize, Option<usize>, OrbitParams) {
        (self.dim, self.class, self.params)
    }
}

/// Standard representative: ∞, 0, ⟨e₁+a e₂⟩, ⟨e₁+ax e₂⟩, ⟨e₁+ay e₂⟩ truncated to dim + 1 lines,
/// with a the chosen representative of the class.
pub fn standard_tuple(ring: &Ring, p1: &ProjectiveLine, dim: usize, class: usize, params: OrbitParams) -> Vec<u32> {
    let a = ring.units().square_classes.reps[class];
    let mut t = vec![p1.infinity(), p1.zero_line(ring)];
    if dim >= 2 {
        t.push(p1.affine(a));
    }
    match params {
        OrbitParams::None => {}
        OrbitParams::X(x) => t.push(p1.affine(ring.mul(a, x))),
        OrbitParams::XY(x, y) => {
            t.push(p1.affine(ring.mul(a, x)));
            t.push(p1.affine(ring.mul(a, y)));
        }
    }
    t.truncate(dim + 1);
    t
}

fn apply_to_tuple(ring: &Ring, p1: &ProjectiveLine, g: &Mat2, t: &[u32]) -> Vec<u32> {
    t.iter()
        .map(|&i| p1.index_of_vector(ring, ring.apply(g, p1.line(i).vector())).expect("SL2 preserves lines"))
        .collect()
}

/// Orbit representative and witness for a tuple of at most five lines.
pub fn canonical_orbit(ring: &Ring, p1: &ProjectiveLine, t: &[u32]) -> Result<OrbitForm> {
    if t.is_empty() || t.len() > 5 || !p1.is_valid_tuple(t) {
        return Err(Error::InvalidTuple(format!("{t:?}")));
    }
    let one = ring.one();
    let u = p1.line(t[0]).vector();
    let v = if t.len() >= 2 {
        p1.line(t[1]).vector()
    } else if ring.is_unit(u.0) {
        (ring.zero(), one)
    } else {
        (ring.neg(one), ring.zero())
    };
    let d = det2(ring, u, v);
    let delta = ring.inv(d).expect("basis");
    let dim = t.len() - 1;
    // w = s·u + r·v.
    let coords = |w: (RingElem, RingElem)| (ring.mul(det2(ring, w, v), delta), ring.mul(det2(ring, u, w), delta));
    let (class, alpha, params) = if dim < 2 {
        (None, one, OrbitParams::None)
    } else {
        let (s, r) = coords(p1.line(t[2]).vector());
        let a_raw = ring.div(r, ring.mul(s, delta)).expect("basis");
        let sc = &ring.units().square_classes;
        let class = sc.class_of(a_raw);
        let a = sc.reps[class];
        let alpha = ring.units().sqrt(ring.div(a, a_raw).expect("unit")).expect("same square class");
        let beta = ring.div(delta, alpha).expect("unit");
        let param = |i: usize| {
            let (s, r) = coords(p1.line(t[i]).vector());
            let c = ring.div(ring.mul(r, alpha), ring.mul(s, beta)).expect("basis");
            ring.div(c, a).expect("unit")
        };
        let params = match dim {
            2 => OrbitParams::None,
            3 => OrbitParams::X(param(3)),
            _ => OrbitParams::XY(param(3), param(4)),
        };
        (Some(class), alpha, params)
    };
    let beta = ring.div(delta, alpha).expect("unit");
    let witness = Mat2::new(ring.mul(alpha, u.0), ring.mul(beta, v.0), ring.mul(alpha, u.1), ring.mul(beta, v.1));
    let form = OrbitForm { dim, class, params, witness };
    let std = standard_tuple(ring, p1, dim, class.unwrap_or(0), params);
    if !ring.is_sl2(&witness) || apply_to_tuple(ring, p1, &witness, &std) != t {
        return Err(Error::Consistency(format!("orbit witness fails for {t:?}")));
    }
    Ok(form)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dbar4Report {
    pub ring: String,
    pub pairs: usize,
    /// ∂̄₄ on ⟨1⟩[x, y] for the first pair, if any.
    pub sample: Option<(RingElem, RingElem, Vec<RelatorTerm>)>,
    /// Every row equals the refined relator with last coefficient +⟨1−x⟩.
    pub matches_plus: bool,
    /// Every row equals the refined relator with last coefficient −⟨1−x⟩.
    pub matches_minus: bool,
    /// Sign of the last term, when exactly one convention matches.
    pub last_sign: Option<i64>,
    /// Computed rows and the matching scissors presentation span the same lattice.
    pub same_span_as_rp: bool,
}

/// ∂̄₄ on ⟨1⟩[x, y]: the five faces of the standard representative, canonicalized to ±⟨c⟩[z].
pub fn dbar4_terms(ring: &Ring, p1: &ProjectiveLine, x: RingElem, y: RingElem) -> Result<Vec<RelatorTerm>> {
    let std = standard_tuple(ring, p1, 4, 0, OrbitParams::XY(x, y));
    face_forms(ring, p1, &std)?
        .into_iter()
        .map(|(sign, f)| match f.params {
            OrbitParams::X(z) => Ok(RelatorTerm { coeff: sign, class: f.class.expect("dim 3"), symbol: z }),
            _ => Err(Error::Consistency("face of a 4-tuple is not a 3-tuple".into())),
        })
        .collect()
}

fn face_forms(ring: &Ring, p1: &ProjectiveLine, t: &[u32]) -> Result<Vec<(i64, OrbitForm)>> {
    (0..t.len())
        .map(|i| {
            let mut face = t.to_vec();
            face.remove(i);
            Ok((if i % 2 == 0 { 1 } else { -1 }, canonical_orbit(ring, p1, &face)?))
        })
        .collect()
}

/// Rows of ∂̄₄ over the basis G_A × W_A of X_3 coinvariants, ordered as the scissors RP relators.
pub fn dbar4_rows(ring: &Ring, p1: &ProjectiveLine) -> Result<IntMatrix> {
    let ud = ring.units();
    let sc = &ud.square_classes;
    let pairs = scissors::relator_pairs(ring);
    let base: Vec<Vec<RelatorTerm>> = pairs.iter().map(|&(x, y)| dbar4_terms(ring, p1, x, y)).collect::<Result<_>>()?;
    let mut m = IntMatrix::empty(sc.len() * ud.wset.len());
    for g in 0..sc.len() {
        for terms in &base {
            m.push_terms(terms.iter().map(|t| (scissors::rp_index(ring, sc.mul(g, t.class), t.symbol), t.coeff)));
        }
    }
    Ok(m)
}

fn same_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    let (ea, eb) = (Echelon::new(a, false), Echelon::new(b, false));
    a.rows().iter().all(|r| eb.contains(r)) && b.rows().iter().all(|r| ea.contains(r))
}

pub fn dbar4_relator(ring: &Ring) -> Result<Dbar4Report> {
    let p1 = ProjectiveLine::new(ring)?;
    let pairs = scissors::relator_pairs(ring);
    let rows = dbar4_rows(ring, &p1)?;
    let plus = scissors::rp_presentation_with_sign(ring, 1);
    let minus = scissors::rp_presentation_with_sign(ring, -1);
    let matches_plus = rows.rows() == plus.relations().rows();
    let matches_minus = rows.rows() == minus.relations().rows();
    let last_sign = match (matches_plus, matches_minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    };
    let reference = if matches_minus && !matches_plus { &minus } else { &plus };
    let sample = match pairs.first() {
        Some(&(x, y)) => Some((x, y, dbar4_terms(ring, &p1, x, y)?)),
        None => None,
    };
    Ok(Dbar4Report {
        ring: ring.spec().to_string(),
        pairs: pairs.len(),
        sample,
        matches_plus,
        matches_minus,
        last_sign,
        same_span_as_rp: same_span(&rows, reference.relations()),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lambda1Report {
    pub ring: String,
    /// (x, image of ∂₃(⟨1⟩[x]) in R_A, ⟨⟨x⟩⟩⟨⟨1−x⟩⟩).
    pub images: Vec<(RingElem, GroupRingElem, GroupRingElem)>,
    /// s with image = s·⟨⟨x⟩⟩⟨⟨1−x⟩⟩ for every x; `None` if no single sign works.
    pub sign: Option<i64>,
    /// The composite is the zero map.
    pub is_zero: bool,
}

impl Lambda1Report {
    /// Agrees with [x] ↦ ⟨⟨x⟩⟩⟨⟨1−x⟩⟩ up to one global sign.
    pub fn holds(&self) -> bool {
        self.sign.is_some()
    }
}

/// The composite RP(A) → H₀(X₂) ≅ R_A obtained by canonicalizing ∂₃ of each ⟨1⟩[x].
pub fn lambda1_composite_check(ring: &Ring) -> Result<Lambda1Report> {
    let p1 = ProjectiveLine::new(ring)?;
    let ud = ring.units();
    let mut images = Vec::new();
    for &x in &ud.wset {
        let std = standard_tuple(ring, &p1, 3, 0, OrbitParams::X(x));
        let mut img = GroupRingElem::zero(ring);
        for (sign, f) in face_forms(ring, &p1, &std)? {
            img.0[f.class.expect("dim 2")] += sign;
        }
        let expected = GroupRingElem::dd(ring, x).mul(ring, &GroupRingElem::dd(ring, ring.sub(ring.one(), x)));
        images.push((x, img, expected));
    }
    let sign = [1i64, -1].into_iter().find(|&s| images.iter().all(|(_, img, e)| *img == e.scale(s)));
    let is_zero = images.iter().all(|(_, img, _)| img.0.iter().all(|&c| c == 0));
    Ok(Lambda1Report { ring: ring.spec().to_string(), images, sign, is_zero })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitCount {
    pub dim: usize,
    pub orbits: usize,
    pub forms: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub ring: String,
    pub sl2_order: usize,
    pub stab_infinity: usize,
    pub stab_infinity_zero: usize,
    pub stab_triple: usize,
    /// Stabilizers equal B(A), T(A) and {diag(b, b) : b² = 1} as sets.
    pub stabilizers_match: bool,
    /// |SL₂| = |orbit| · |stabilizer| for ∞ and (∞, 0).
    pub orbit_stabilizer: bool,
    pub square_classes: usize,
    /// Orbits of SL₂ on X_2, X_3, X_4 against the number of distinct canonical forms.
    pub orbit_counts: Vec<OrbitCount>,
    /// Canonical forms are constant on orbits and separate them.
    pub transversal: bool,
}

impl StabilizerReport {
    pub fn ok(&self) -> bool {
        self.stabilizers_match
            && self.orbit_stabilizer
            && self.transversal
            && self.orbit_counts.first().is_some_and(|c| c.orbits == self.square_classes)
    }
}

/// Exhaustive stabilizer and orbit enumeration; `max_dim` caps the orbit audit (at most 4).
pub fn stabilizer_check(ring: &Ring, sl2_bound: u64, max_dim: usize) -> Result<StabilizerReport> {
    let p1 = ProjectiveLine::new(ring)?;
    let group = ring.enumerate_sl2(sl2_bound)?;
    let perms: Vec<Vec<u32>> = group
        .iter()
        .map(|g| p1.lines().iter().map(|l| p1.index_of_vector(ring, ring.apply(g, l.vector())).expect("line")).collect())
        .collect();
    let inf = p1.infinity();
    let zero = p1.zero_line(ring);
    let a = ring.units().square_classes.reps[0];
    let aff = p1.affine(a);
    let stab = |pts: &[u32]| -> HashSet<Mat2> {
        group.iter().zip(&perms).filter(|(_, p)| pts.iter().all(|&i| p[i as usize] == i)).map(|(g, _)| *g).collect()
    };
    let s1 = stab(&[inf]);
    let s2 = stab(&[inf, zero]);
    let s3 = stab(&[inf, zero, aff]);
    let ud = ring.units();
    let borel: HashSet<Mat2> = ud
        .units
        .iter()
        .flat_map(|&u| ring.elements().map(move |b| (u, b)))
        .map(|(u, b)| ring.mat_borel(u, b))
        .collect::<Result<_>>()?;
    let torus: HashSet<Mat2> = ud.units.iter().map(|&u| ring.mat_diag(u)).collect::<Result<_>>()?;
    let scalars: HashSet<Mat2> =
        ud.mu2.iter().map(|&b| Mat2::new(b, ring.zero(), ring.zero(), b)).collect();
    let stabilizers_match = s1 == borel && s2 == torus && s3 == scalars;

    let orbit_size = |pts: &[u32]| perms.iter().map(|p| pts.iter().map(|&i| p[i as usize]).collect::<Vec<_>>()).collect::<HashSet<_>>().len();
    let orbit_stabilizer = orbit_size(&[inf]) * s1.len() == group.len()
        && orbit_size(&[inf, zero]) * s2.len() == group.len();

    let top = max_dim.clamp(2, 4);
    let cx = XComplex::build(ring, top, DEFAULT_X_BUDGET)?;
    let mut orbit_counts = Vec::new();
    let mut transversal = true;
    for dim in 2..=top {
        let gens = cx.generators(dim);
        let mut seen = vec![false; gens.len()];
        let mut forms = HashSet::new();
        let mut orbits = 0;
        for start in 0..gens.len() {
            if seen[start] {
                continue;
            }
            orbits += 1;
            let key = canonical_orbit(ring, &cx.p1, &gens[start])?.key();
            transversal &= forms.insert(key);
            for p in &perms {
                let img: Vec<u32> = gens[start].iter().map(|&i| p[i as usize]).collect();
                let j = cx.levels[dim].index_of(&img).expect("SL2 preserves X_n");
                if !seen[j] {
                    seen[j] = true;
                    transversal &= canonical_orbit(ring, &cx.p1, &img)?.key() == key;
                }
            }
        }
        orbit_counts.push(OrbitCount { dim, orbits, forms: forms.len() });
    }
    Ok(StabilizerReport {
        ring: ring.spec().to_string(),
        sl2_order: group.len(),
        stab_infinity: s1.len(),
        stab_infinity_zero: s2.len(),
        stab_triple: s3.len(),
        stabilizers_match,
        orbit_stabilizer,
        square_classes: ud.square_classes.len(),
        orbit_counts,
        transversal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_SL2_BOUND;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_triple_has_identity_witness() {
        let r = Ring::parse("z/25").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        for c in 0..r.units().square_classes.len() {
            let t = standard_tuple(&r, &p1, 2, c, OrbitParams::None);
            let f = canonical_orbit(&r, &p1, &t).unwrap();
            assert_eq!(f.class, Some(c));
            assert_eq!(f.witness, r.mat_identity());
        }
    }

    #[test]
    fn representatives_read_back() {
        let r = Ring::parse("z/25").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        let ud = r.units();
        for c in 0..ud.square_classes.len() {
            for &x in &ud.wset {
                let t = standard_tuple(&r, &p1, 3, c, OrbitParams::X(x));
                assert_eq!(canonical_orbit(&r, &p1, &t).unwrap().key(), (3, Some(c), OrbitParams::X(x)));
            }
        }
    }

    #[test]
    fn canonical_forms_are_sl2_invariant() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        let group = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        let pairs = scissors::relator_pairs(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..100 {
            let (x, y) = pairs[k % pairs.len()];
            let t = standard_tuple(&r, &p1, 4, 0, OrbitParams::XY(x, y));
            let h = group[rng.gen_range(0..group.len())];
            let moved = apply_to_tuple(&r, &p1, &h, &t);
            let f = canonical_orbit(&r, &p1, &moved).unwrap();
            assert_eq!(f.key(), (4, Some(0), OrbitParams::XY(x, y)));
            assert!(r.is_sl2(&f.witness));
        }
    }

    #[test]
    fn invalid_tuples_are_rejected() {
        let r = Ring::parse("z/9").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        // ⟨(1,0)⟩ and ⟨(1,3)⟩ agree mod 3.
        assert!(matches!(canonical_orbit(&r, &p1, &[0, 3]), Err(Error::InvalidTuple(_))));
        assert!(canonical_orbit(&r, &p1, &[0, 0]).is_err());
    }

    #[test]
    fn dbar4_matches_refined_relator() {
        for spec in ["gf(2,3)", "z/25", "gf(2,2)[t]/t^2", "gf(5,1)"] {
            let r = Ring::parse(spec).unwrap();
            let rep = dbar4_relator(&r).unwrap();
            assert!(rep.pairs > 0, "{spec}");
            assert_eq!(rep.last_sign, Some(1), "{spec}");
            assert!(rep.same_span_as_rp, "{spec}");
        }
    }

    #[test]
    fn dbar4_collapses_to_five_term_relator_when_all_units_are_squares() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let p1 = ProjectiveLine::new(&r).unwrap();
        for (x, y) in scissors::relator_pairs(&r) {
            let terms = dbar4_terms(&r, &p1, x, y).unwrap();
            let syms = scissors::relator_symbols(&r, x, y).unwrap();
            let mut got: Vec<_> = terms.iter().map(|t| (t.symbol, t.coeff)).collect();
            let mut want: Vec<_> = syms.iter().copied().zip([1, -1, 1, -1, 1]).collect();
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn lambda1_composite() {
        let r = Ring::parse("gf(2,2)").unwrap();
        assert!(lambda1_composite_check(&r).unwrap().is_zero);
        for spec in ["z/25", "gf(2,2)[t]/t^2", "gf(5,1)"] {
            let r = Ring::parse(spec).unwrap();
            let rep = lambda1_composite_check(&r).unwrap();
            assert!(rep.holds(), "{spec}");
            assert!(!rep.is_zero, "{spec}");
        }
    }

    #[test]
    fn stabilizers_and_orbits() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let rep = stabilizer_check(&r, DEFAULT_SL2_BOUND, 4).unwrap();
        assert_eq!((rep.stab_infinity, rep.stab_infinity_zero, rep.stab_triple), (56, 7, 1));
        assert!(rep.ok(), "{rep:?}");
        // 6·7 orbits on X_3 (W has 6 elements), and one per ordered pair on X_4.
        assert_eq!(rep.orbit_counts[1].orbits, 6);
        assert_eq!(rep.orbit_counts[2].orbits, scissors::relator_pairs(&r).len());
        let r = Ring::parse("gf(2,2)").unwrap();
        assert_eq!(stabilizer_check(&r, DEFAULT_SL2_BOUND, 2).unwrap().orbit_counts[0].orbits, 1);
        let r = Ring::parse("z/9").unwrap();
        let rep = stabilizer_check(&r, DEFAULT_SL2_BOUND, 4).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.orbit_counts[0].orbits, 2);
    }
}
