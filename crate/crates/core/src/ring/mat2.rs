use serde::{Deserialize, Serialize};

use super::{Ring, RingElem};
use crate::error::{Error, Result};

/// Default cap on |SL₂(A)| for exhaustive enumeration.
pub const DEFAULT_SL2_BOUND: u64 = 1_000_000;

/// A 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub d: RingElem,
}

impl Mat2 {
    pub fn new(a: RingElem, b: RingElem, c: RingElem, d: RingElem) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn codes(&self) -> [u32; 4] {
        [self.a.0, self.b.0, self.c.0, self.d.0]
    }
}

impl Ring {
    pub fn mat_identity(&self) -> Mat2 {
        Mat2::new(self.one(), self.zero(), self.zero(), self.one())
    }

    pub fn det(&self, m: &Mat2) -> RingElem {
        self.sub(self.mul(m.a, m.d), self.mul(m.b, m.c))
    }

    pub fn mat_mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2::new(
            self.add(self.mul(x.a, y.a), self.mul(x.b, y.c)),
            self.add(self.mul(x.a, y.b), self.mul(x.b, y.d)),
            self.add(self.mul(x.c, y.a), self.mul(x.d, y.c)),
            self.add(self.mul(x.c, y.b), self.mul(x.d, y.d)),
        )
    }

    pub fn mat_inv(&self, m: &Mat2) -> Option<Mat2> {
        let di = self.inv(self.det(m))?;
        Some(Mat2::new(
            self.mul(di, m.d),
            self.neg(self.mul(di, m.b)),
            self.neg(self.mul(di, m.c)),
            self.mul(di, m.a),
        ))
    }

    pub fn is_sl2(&self, m: &Mat2) -> bool {
        self.det(m) == self.one()
    }

    pub fn apply(&self, m: &Mat2, v: (RingElem, RingElem)) -> (RingElem, RingElem) {
        (
            self.add(self.mul(m.a, v.0), self.mul(m.b, v.1)),
            self.add(self.mul(m.c, v.0), self.mul(m.d, v.1)),
        )
    }

    /// w = [[0, 1], [-1, 0]].
    pub fn mat_w(&self) -> Mat2 {
        Mat2::new(self.zero(), self.one(), self.neg(self.one()), self.zero())
    }

    /// diag(u, u⁻¹), the image of u under A^× ≅ T(A).
    pub fn mat_diag(&self, u: RingElem) -> Result<Mat2> {
        let ui = self.inv(u).ok_or_else(|| Error::NotUnit(self.format(u)))?;
        Ok(Mat2::new(u, self.zero(), self.zero(), ui))
    }

    /// g_x = [[0, 1], [1, x]] (det −1; in SL₂ exactly in characteristic 2).
    pub fn mat_g(&self, x: RingElem) -> Mat2 {
        Mat2::new(self.zero(), self.one(), self.one(), x)
    }

    /// h_x = [[1, x⁻¹], [0, 1]].
    pub fn mat_h(&self, x: RingElem) -> Result<Mat2> {
        let xi = self.inv(x).ok_or_else(|| Error::NotUnit(self.format(x)))?;
        Ok(Mat2::new(self.one(), xi, self.zero(), self.one()))
    }

    /// [[u, b], [0, u⁻¹]] ∈ B(A).
    pub fn mat_borel(&self, u: RingElem, b: RingElem) -> Result<Mat2> {
        let ui = self.inv(u).ok_or_else(|| Error::NotUnit(self.format(u)))?;
        Ok(Mat2::new(u, b, self.zero(), ui))
    }

    /// [[1, b], [0, 1]] ∈ N(A).
    pub fn mat_unipotent(&self, b: RingElem) -> Mat2 {
        Mat2::new(self.one(), b, self.zero(), self.one())
    }

    pub fn is_in_borel(&self, m: &Mat2) -> bool {
        m.c == self.zero() && self.is_sl2(m)
    }

    pub fn is_in_torus(&self, m: &Mat2) -> bool {
        m.b == self.zero() && m.c == self.zero() && self.is_sl2(m)
    }

    pub fn sl2_order(&self) -> u64 {
        // Unimodular first rows times |A| completions.
        let unimodular_rows = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| self.is_unit(a) || self.is_unit(b))
            .count() as u64;
        unimodular_rows * self.size() as u64
    }

    /// Every element of SL₂(A), ordered by entry encodings.
    pub fn enumerate_sl2(&self, bound: u64) -> Result<Vec<Mat2>> {
        // Over a local ring a row is unimodular iff one entry is a unit.
        if !self.is_local() {
            return Err(Error::NotLocal(self.spec().to_string()));
        }
        let order = self.sl2_order();
        if order > bound {
            return Err(Error::Budget { what: "SL2 enumeration".into(), needed: order, budget: bound });
        }
        let mut out = Vec::with_capacity(order as usize);
        for a in self.elements() {
            for b in self.elements() {
                let (c0, d0) = if let Some(ai) = self.inv(a) {
                    (self.zero(), ai)
                } else if let Some(bi) = self.inv(b) {
                    (self.neg(bi), self.zero())
                } else {
                    continue;
                };
                for t in self.elements() {
                    out.push(Mat2::new(a, b, self.add(c0, self.mul(t, a)), self.add(d0, self.mul(t, b))));
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_squared_in_char2() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let w = r.mat_w();
        assert_eq!(r.mat_mul(&w, &w), r.mat_identity());
        let r5 = Ring::parse("z/5").unwrap();
        let w5 = r5.mat_w();
        let minus = r5.neg(r5.one());
        assert_eq!(r5.mat_mul(&w5, &w5), Mat2::new(minus, r5.zero(), r5.zero(), minus));
    }

    #[test]
    fn sl2_gf8_order() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let all = r.enumerate_sl2(DEFAULT_SL2_BOUND).unwrap();
        assert_eq!(all.len(), 504);
        assert_eq!(8 * (64 - 1), 504);
        assert!(all.iter().all(|m| r.is_sl2(m)));
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn sl2_enumeration_budget() {
        let r = Ring::parse("gf(2,7)").unwrap();
        assert!(matches!(r.enumerate_sl2(1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn h_is_an_involution_over_gf16() {
        let r = Ring::parse("gf(2,4)").unwrap();
        for &x in &r.units().units {
            let h = r.mat_h(x).unwrap();
            assert_eq!(r.mat_mul(&h, &h), r.mat_identity());
        }
    }

    #[test]
    fn g_x_in_sl2_exactly_in_char2() {
        for (spec, char2) in [("gf(2,3)", true), ("gf(2,1)[t]/t^3", true), ("z/9", false), ("gf(3,2)", false)] {
            let r = Ring::parse(spec).unwrap();
            for x in r.elements() {
                let g = r.mat_g(x);
                assert_eq!(r.det(&g), r.neg(r.one()));
                assert_eq!(r.is_sl2(&g), char2);
            }
        }
    }

    #[test]
    fn char2_matrix_identities() {
        for spec in ["gf(2,3)", "gf(2,4)", "gf(2,5)", "gf(2,1)[t]/t^3", "gf(2,2)[t]/t^2"] {
            let r = Ring::parse(spec).unwrap();
            let w = r.mat_w();
            for &z in &r.units().units {
                let zi = r.inv(z).unwrap();
                let dz = r.mat_diag(z).unwrap();
                let dzi = r.mat_diag(zi).unwrap();
                let gz = r.mat_g(z);
                let hz = r.mat_h(z).unwrap();
                let hzi = r.mat_h(zi).unwrap();
                // z⁻¹ g_{z⁻¹} = g_z z
                assert_eq!(r.mat_mul(&dzi, &r.mat_g(zi)), r.mat_mul(&gz, &dz));
                // z h_z = h_{z⁻¹} z
                assert_eq!(r.mat_mul(&dz, &hz), r.mat_mul(&hzi, &dz));
                // g_z⁻¹ w = h_{z⁻¹}
                assert_eq!(r.mat_mul(&r.mat_inv(&gz).unwrap(), &w), hzi);
                // h_z⁻¹ = h_z
                assert_eq!(r.mat_inv(&hz).unwrap(), hz);
            }
        }
    }

    #[test]
    fn inverse_exists_iff_det_unit() {
        let r = Ring::parse("z/9").unwrap();
        let els: Vec<_> = r.elements().collect();
        for &a in &els {
            for &d in &els {
                let m = Mat2::new(a, r.from_int(3), r.from_int(1), d);
                match r.mat_inv(&m) {
                    Some(mi) => assert_eq!(r.mat_mul(&m, &mi), r.mat_identity()),
                    None => assert!(!r.is_unit(r.det(&m))),
                }
            }
        }
    }
}
