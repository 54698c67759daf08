//! The group ring R_A = Z[G_A] on the ordered square classes, and its augmentation ideal.

use serde::{Deserialize, Serialize};

use crate::fgab::IntMatrix;
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingElem(pub Vec<i64>);

impl GroupRingElem {
    pub fn zero(ring: &Ring) -> GroupRingElem {
        GroupRingElem(vec![0; ring.units().square_classes.len()])
    }

    pub fn one(ring: &Ring) -> GroupRingElem {
        GroupRingElem::basis(ring, 0)
    }

    pub fn basis(ring: &Ring, class: usize) -> GroupRingElem {
        let mut v = GroupRingElem::zero(ring);
        v.0[class] = 1;
        v
    }

    /// ⟨u⟩.
    pub fn class(ring: &Ring, u: RingElem) -> GroupRingElem {
        GroupRingElem::basis(ring, ring.units().square_classes.class_of(u))
    }

    /// ⟨⟨u⟩⟩ = ⟨u⟩ − 1.
    pub fn dd(ring: &Ring, u: RingElem) -> GroupRingElem {
        let mut v = GroupRingElem::class(ring, u);
        v.0[0] -= 1;
        v
    }

    pub fn add(&self, other: &GroupRingElem) -> GroupRingElem {
        GroupRingElem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> GroupRingElem {
        GroupRingElem(self.0.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, ring: &Ring, other: &GroupRingElem) -> GroupRingElem {
        let sc = &ring.units().square_classes;
        let mut out = vec![0; sc.len()];
        for (i, a) in self.0.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, b) in other.0.iter().enumerate().filter(|(_, b)| **b != 0) {
                out[sc.mul(i, j)] += a * b;
            }
        }
        GroupRingElem(out)
    }

    pub fn augmentation(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Rows ⟨⟨g⟩⟩⟨⟨h⟩⟩ for all pairs of classes; their span is I²_A.
pub fn augmentation_square_generators(ring: &Ring) -> IntMatrix {
    let sc = &ring.units().square_classes;
    let mut m = IntMatrix::empty(sc.len());
    for &g in &sc.reps {
        for &h in &sc.reps {
            let p = GroupRingElem::dd(ring, g).mul(ring, &GroupRingElem::dd(ring, h));
            m.push_dense_i64(&p.0);
        }
    }
    m
}
