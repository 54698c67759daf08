use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::coeff::{Checked, Coeff};

/// Sparse vector as (index, value) pairs, strictly increasing indices, no stored zeros.
pub type SparseVec<T> = Vec<(usize, T)>;

/// `a·x + b·y` for sparse vectors.
pub fn lin_comb<T: Coeff>(a: &T, x: &[(usize, T)], b: &T, y: &[(usize, T)]) -> Checked<SparseVec<T>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let a_one = *a == T::one();
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, v) = if take_x {
            let v = if a_one { x[i].1.clone() } else { a.checked_mul(&x[i].1)? };
            i += 1;
            (x[i - 1].0, v)
        } else if take_y {
            j += 1;
            (y[j - 1].0, b.checked_mul(&y[j - 1].1)?)
        } else {
            let v = if a_one { x[i].1.clone() } else { a.checked_mul(&x[i].1)? };
            let v = v.checked_add(&b.checked_mul(&y[j].1)?)?;
            i += 1;
            j += 1;
            (x[i - 1].0, v)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    Ok(out)
}

/// `x - c·y`.
pub fn sub_multiple<T: Coeff>(x: &[(usize, T)], c: &T, y: &[(usize, T)]) -> Checked<SparseVec<T>> {
    lin_comb(&T::one(), x, &c.checked_neg()?, y)
}

/// Sorted sparse vector from (index, coefficient) pairs in any order; repeated indices are summed.
pub fn sparse_from_terms(terms: impl IntoIterator<Item = (usize, i64)>) -> SparseVec<BigInt> {
    let mut acc: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
    for (c, v) in terms {
        *acc.entry(c).or_insert(0) += v;
    }
    acc.into_iter().filter(|(_, v)| *v != 0).map(|(c, v)| (c, BigInt::from(v))).collect()
}

pub fn sparse_get<T: Coeff>(x: &[(usize, T)], col: usize) -> Option<&T> {
    x.binary_search_by_key(&col, |e| e.0).ok().map(|k| &x[k].1)
}

pub fn convert_vec<T: Coeff>(x: &[(usize, BigInt)]) -> Option<SparseVec<T>> {
    x.iter().map(|(c, v)| T::from_big(v).map(|t| (*c, t))).collect()
}

pub fn to_big_vec<T: Coeff>(x: &[(usize, T)]) -> SparseVec<BigInt> {
    x.iter().map(|(c, v)| (*c, v.to_big())).collect()
}

/// Integer matrix with arbitrary-precision entries, stored as sparse rows.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<SparseVec<BigInt>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.nrows(), self.ncols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> IntMatrix {
        IntMatrix { ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn empty(ncols: usize) -> IntMatrix {
        IntMatrix { ncols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix { ncols: n, rows: (0..n).map(|i| vec![(i, BigInt::from(1))]).collect() }
    }

    pub fn from_dense_i64(ncols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        let mut m = IntMatrix::empty(ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
            m.push_dense_i64(r);
        }
        m
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<BigInt>]) -> IntMatrix {
        let mut m = IntMatrix::empty(ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
            m.rows.push(r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect());
        }
        m
    }

    pub fn from_sparse_rows(ncols: usize, rows: Vec<SparseVec<BigInt>>) -> IntMatrix {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(c, v)| *c < ncols && !v.is_zero()));
        }
        IntMatrix { ncols, rows }
    }

    pub fn push_dense_i64(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, BigInt::from(*v))).collect());
    }

    /// Appends a row given as (column, coefficient) pairs in any order; repeated columns are summed.
    pub fn push_terms(&mut self, terms: impl IntoIterator<Item = (usize, i64)>) {
        let row = sparse_from_terms(terms);
        assert!(row.last().map_or(true, |(c, _)| *c < self.ncols), "column out of range {}", self.ncols);
        self.rows.push(row);
    }

    pub fn push_sparse(&mut self, row: SparseVec<BigInt>) {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        sparse_get(&self.rows[i], j).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.ncols];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    /// Dense `i64` copy if every entry fits.
    pub fn to_dense_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0i64; self.ncols];
                for (c, v) in r {
                    d[*c] = v.to_i64()?;
                }
                Some(d)
            })
            .collect()
    }

    pub fn to_rows<T: Coeff>(&self) -> Option<Vec<SparseVec<T>>> {
        self.rows.iter().map(|r| convert_vec(r)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut cols: Vec<SparseVec<BigInt>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                cols[*c].push((i, v.clone()));
            }
        }
        IntMatrix { ncols: self.rows.len(), rows: cols }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch in product");
        let rows = self.rows.iter().map(|r| self.combine_rows(r, other)).collect();
        IntMatrix { ncols: other.ncols, rows }
    }

    fn combine_rows(&self, coeffs: &[(usize, BigInt)], other: &IntMatrix) -> SparseVec<BigInt> {
        let mut acc: std::collections::BTreeMap<usize, BigInt> = std::collections::BTreeMap::new();
        for (k, a) in coeffs {
            for (c, b) in &other.rows[*k] {
                *acc.entry(*c).or_default() += a * b;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[(usize, BigInt)]) -> SparseVec<BigInt> {
        self.combine_rows(v, self)
    }

    pub fn left_mul_dense(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.nrows());
        let sparse: SparseVec<BigInt> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        let mut out = vec![BigInt::zero(); self.ncols];
        for (c, x) in self.left_mul(&sparse) {
            out[c] = x;
        }
        out
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.ncols, "column mismatch in vstack");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        IntMatrix { ncols: self.ncols, rows }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let shift = self.ncols;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r.iter().map(|(c, v)| (c + shift, v.clone())).collect()));
        IntMatrix { ncols: self.ncols + other.ncols, rows }
    }

    /// Side-by-side concatenation (same row count).
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.nrows(), other.nrows(), "row mismatch in hstack");
        let shift = self.ncols;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + shift, v.clone())));
                r
            })
            .collect();
        IntMatrix { ncols: self.ncols + other.ncols, rows }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix { ncols: self.ncols, rows: idx.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// Restricts to the columns `start..end`, renumbered from zero.
    pub fn column_range(&self, start: usize, end: usize) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().filter(|(c, _)| *c >= start && *c < end).map(|(c, v)| (c - start, v.clone())).collect())
            .collect();
        IntMatrix { ncols: end - start, rows }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        if k.is_zero() {
            return IntMatrix::zeros(self.nrows(), self.ncols);
        }
        IntMatrix { ncols: self.ncols, rows: self.rows.iter().map(|r| r.iter().map(|(c, v)| (*c, v * k)).collect()).collect() }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        let m1 = BigInt::from(-1);
        let one = BigInt::from(1);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| lin_comb(&one, a, &m1, b).expect("big")).collect();
        IntMatrix { ncols: self.ncols, rows }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        let one = BigInt::from(1);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| lin_comb(&one, a, &one, b).expect("big")).collect();
        IntMatrix { ncols: self.ncols, rows }
    }

    /// Triplets `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(c, v)| (i, *c, v)))
    }

    /// SHA-256 over the shape and row-major triplets; stable across runs and platforms.
    pub fn sha256(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}x{}\n", self.nrows(), self.ncols).as_bytes());
        for (i, c, v) in self.triplets() {
            h.update(format!("{i} {c} {v}\n").as_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.nrows(),
            cols: self.ncols,
            entries: self.triplets().map(|(i, c, v)| (i, c, v.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let mut m = IntMatrix::zeros(j.rows, j.cols);
        for (i, c, v) in j.entries {
            if i >= j.rows || c >= j.cols {
                return Err(serde::de::Error::custom("matrix entry out of range"));
            }
            let v: BigInt = v.parse().map_err(serde::de::Error::custom)?;
            if !v.is_zero() {
                m.rows[i].push((c, v));
            }
        }
        for r in &mut m.rows {
            r.sort_by_key(|e| e.0);
            if r.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(serde::de::Error::custom("duplicate matrix entry"));
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_dense_i64(2, &[vec![1, 2], vec![3, 4], vec![0, -1]]);
        let b = IntMatrix::from_dense_i64(3, &[vec![1, 0, 2], vec![0, 1, -1]]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense_i64().unwrap(), vec![vec![1, 2, 0], vec![3, 4, 2], vec![0, -1, 1]]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().to_dense_i64().unwrap(), vec![vec![1, 3, 0], vec![2, 4, -1]]);
    }

    #[test]
    fn lin_comb_drops_zeros() {
        let x: SparseVec<i64> = vec![(0, 1), (2, 3)];
        let y: SparseVec<i64> = vec![(1, 5), (2, 1)];
        assert_eq!(lin_comb(&1, &x, &-3, &y).unwrap(), vec![(0, 1), (1, -15)]);
    }

    #[test]
    fn json_round_trip_and_hash() {
        let mut m = IntMatrix::from_dense_i64(3, &[vec![0, 2, -7], vec![1, 0, 0]]);
        m.push_sparse(vec![(1, "123456789012345678901234567890".parse().unwrap())]);
        let s = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.sha256(), m.sha256());
        assert_ne!(IntMatrix::identity(3).sha256(), m.sha256());
    }
}
