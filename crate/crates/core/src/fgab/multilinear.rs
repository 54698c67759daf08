//! B ⊗ B, ∧²B, ∧³B and S²_Z(B) = (B ⊗ B)/⟨a⊗b + b⊗a⟩ for a presented group B.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::presentation::{AbMap, AbPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiOp {
    TensorSelf,
    Wedge2,
    Wedge3,
    Sym2Z,
}

/// The presented group together with the multilinear symbol map on coordinate vectors of B.
#[derive(Clone, Debug)]
pub struct Multilinear {
    pub op: MultiOp,
    n: usize,
    pub group: AbPresentation,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Pairs (i, j), i < j, in lexicographic order.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn triple_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    let mut idx = 0;
    for a in 0..i {
        let m = n - a - 1;
        idx += m * (m - 1) / 2;
    }
    // Pairs (j, k) with i < j < k among the n - i - 1 indices above i.
    idx + pair_index(n - i - 1, j - i - 1, k - i - 1)
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Sign and sorted positions of e_a ∧ e_b; `None` when a = b.
fn wedge2_term(n: usize, a: usize, b: usize) -> Option<(usize, i64)> {
    use std::cmp::Ordering::*;
    match a.cmp(&b) {
        Less => Some((pair_index(n, a, b), 1)),
        Greater => Some((pair_index(n, b, a), -1)),
        Equal => None,
    }
}

fn wedge3_term(n: usize, a: usize, b: usize, c: usize) -> Option<(usize, i64)> {
    if a == b || b == c || a == c {
        return None;
    }
    let mut v = [a, b, c];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((triple_index(n, v[0], v[1], v[2]), sign))
}

impl Multilinear {
    pub fn new(b: &AbPresentation, op: MultiOp) -> Multilinear {
        let b = b.simplified();
        let n = b.ngens();
        let rels = b.relations();
        let group = match op {
            MultiOp::TensorSelf | MultiOp::Sym2Z => {
                let mut m = IntMatrix::empty(n * n);
                for r in rels.rows() {
                    for j in 0..n {
                        m.push_terms(r.iter().map(|(i, v)| (i * n + j, small(v))));
                        m.push_terms(r.iter().map(|(i, v)| (j * n + i, small(v))));
                    }
                }
                if op == MultiOp::Sym2Z {
                    for i in 0..n {
                        for j in i..n {
                            m.push_terms([(i * n + j, 1), (j * n + i, 1)]);
                        }
                    }
                }
                AbPresentation::new(n * n, m)
            }
            MultiOp::Wedge2 => {
                let mut m = IntMatrix::empty(choose2(n));
                for r in rels.rows() {
                    for j in 0..n {
                        m.push_terms(r.iter().filter_map(|(i, v)| wedge2_term(n, *i, j).map(|(k, s)| (k, s * small(v)))));
                    }
                }
                AbPresentation::new(choose2(n), m)
            }
            MultiOp::Wedge3 => {
                let mut m = IntMatrix::empty(choose3(n));
                for r in rels.rows() {
                    for j in 0..n {
                        for k in j + 1..n {
                            m.push_terms(
                                r.iter().filter_map(|(i, v)| wedge3_term(n, *i, j, k).map(|(x, s)| (x, s * small(v)))),
                            );
                        }
                    }
                }
                AbPresentation::new(choose3(n), m)
            }
        };
        Multilinear { op, n, group }
    }

    /// Coordinates of a⊗b, a∧b or the class of a⊗b in S²_Z, from coordinates of a and b.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.n;
        assert_eq!((a.len(), b.len()), (n, n));
        match self.op {
            MultiOp::TensorSelf | MultiOp::Sym2Z => {
                let mut out = vec![0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = a[i] * b[j];
                    }
                }
                out
            }
            MultiOp::Wedge2 => {
                let mut out = vec![0; choose2(n)];
                for i in 0..n {
                    for j in i + 1..n {
                        out[pair_index(n, i, j)] = a[i] * b[j] - a[j] * b[i];
                    }
                }
                out
            }
            MultiOp::Wedge3 => panic!("∧³ takes three arguments"),
        }
    }

    /// Coordinates of a∧b∧c.
    pub fn triple(&self, a: &[i64], b: &[i64], c: &[i64]) -> Vec<i64> {
        assert_eq!(self.op, MultiOp::Wedge3);
        let n = self.n;
        let mut out = vec![0; choose3(n)];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let det = a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
                        + a[k] * (b[i] * c[j] - b[j] * c[i]);
                    out[triple_index(n, i, j, k)] = det;
                }
            }
        }
        out
    }

    /// The defining quotient map from B ⊗ B (for ∧² and S²_Z).
    pub fn from_tensor(&self, tensor: &Multilinear) -> AbMap {
        assert_eq!(tensor.op, MultiOp::TensorSelf);
        let n = self.n;
        let mut m = IntMatrix::empty(self.group.ngens());
        for i in 0..n {
            for j in 0..n {
                match self.op {
                    MultiOp::Sym2Z => m.push_terms([(i * n + j, 1)]),
                    MultiOp::Wedge2 => m.push_terms(wedge2_term(n, i, j)),
                    _ => panic!("no quotient map from the tensor square"),
                }
            }
        }
        AbMap::new(tensor.group.clone(), self.group.clone(), m).expect("quotient map respects relations")
    }
}

fn small(v: &BigInt) -> i64 {
    i64::try_from(v).expect("relation entries of simplified presentations of small groups fit in i64")
}

pub fn tensor_self(b: &AbPresentation) -> Multilinear {
    Multilinear::new(b, MultiOp::TensorSelf)
}

pub fn wedge2(b: &AbPresentation) -> Multilinear {
    Multilinear::new(b, MultiOp::Wedge2)
}

pub fn wedge3(b: &AbPresentation) -> Multilinear {
    Multilinear::new(b, MultiOp::Wedge3)
}

pub fn sym2z(b: &AbPresentation) -> Multilinear {
    Multilinear::new(b, MultiOp::Sym2Z)
}
