//! Row reduction of sparse integer matrices by unimodular row operations.
//!
//! Two phases: first, unit pivots (±1) chosen by a Markowitz-style rule (fewest row entries, then
//! fewest column entries) are eliminated from every other active row; the rows left over, which
//! avoid all unit-pivot columns, are then inserted into an integer echelon form with extended-gcd
//! row combinations. Every step is unimodular, so rows that vanish span the left kernel and the
//! Smith form of the input is `1^(unit pivots) ⊕ SNF(echelon remainder)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::coeff::{with_fallback, Checked, Coeff, Overflow};
use super::matrix::{lin_comb, sparse_get, sub_multiple, to_big_vec, IntMatrix, SparseVec};
use super::snf::dense_diagonal;

/// Row-reduced form of a matrix: a basis of its row lattice with pivot structure, and optionally the
/// combinations of input rows producing each basis row and a basis of the left kernel.
#[derive(Clone, Debug)]
pub struct Echelon {
    nrows: usize,
    ncols: usize,
    basis: Vec<SparseVec<BigInt>>,
    pivots: Vec<usize>,
    unit_count: usize,
    combos: Option<Vec<SparseVec<BigInt>>>,
    kernel: Option<Vec<SparseVec<BigInt>>>,
}

struct Raw<T> {
    basis: Vec<SparseVec<T>>,
    pivots: Vec<usize>,
    unit_count: usize,
    combos: Option<Vec<SparseVec<T>>>,
    kernel: Option<Vec<SparseVec<T>>>,
}

fn unit_columns<T: Coeff>(row: &[(usize, T)]) -> bool {
    row.iter().any(|(_, v)| v.is_unit())
}

fn eliminate<T: Coeff>(mut rows: Vec<SparseVec<T>>, ncols: usize, track: bool) -> Checked<Raw<T>> {
    let n = rows.len();
    let mut combos: Vec<SparseVec<T>> = if track { (0..n).map(|i| vec![(i, T::one())]).collect() } else { Vec::new() };
    let mut kernel: Vec<SparseVec<T>> = Vec::new();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); ncols];
    let mut active: Vec<bool> = vec![false; n];
    let mut candidates: BTreeSet<(usize, usize)> = BTreeSet::new();

    for (i, r) in rows.iter().enumerate() {
        if r.is_empty() {
            if track {
                kernel.push(combos[i].clone());
            }
            continue;
        }
        active[i] = true;
        for (c, _) in r {
            col_rows[*c].insert(i);
        }
        if unit_columns(r) {
            candidates.insert((r.len(), i));
        }
    }

    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    let mut basis_combos = Vec::new();

    while let Some(&(len, p)) = candidates.iter().next() {
        candidates.remove(&(len, p));
        let (pc, pv) = rows[p]
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
            .map(|(c, v)| (*c, v.clone()))
            .expect("candidate rows hold a unit");
        active[p] = false;
        for (c, _) in &rows[p] {
            col_rows[*c].remove(&p);
        }
        let mut others: Vec<usize> = col_rows[pc].iter().copied().collect();
        others.sort_unstable();
        let prow = std::mem::take(&mut rows[p]);
        let pcombo = if track { std::mem::take(&mut combos[p]) } else { Vec::new() };
        for i in others {
            let f = sparse_get(&rows[i], pc).expect("column index is exact").checked_mul(&pv)?;
            let old_len = rows[i].len();
            let new_row = sub_multiple(&rows[i], &f, &prow)?;
            if track {
                combos[i] = sub_multiple(&combos[i], &f, &pcombo)?;
            }
            for (c, _) in &rows[i] {
                col_rows[*c].remove(&i);
            }
            candidates.remove(&(old_len, i));
            rows[i] = new_row;
            if rows[i].is_empty() {
                active[i] = false;
                if track {
                    kernel.push(std::mem::take(&mut combos[i]));
                }
                continue;
            }
            for (c, _) in &rows[i] {
                col_rows[*c].insert(i);
            }
            if unit_columns(&rows[i]) {
                candidates.insert((rows[i].len(), i));
            }
        }
        basis.push(prow);
        pivots.push(pc);
        if track {
            basis_combos.push(pcombo);
        }
    }
    let unit_count = basis.len();

    // Phase two: integer echelon insertion of the leftover rows.
    let mut ech_rows: Vec<SparseVec<T>> = Vec::new();
    let mut ech_combos: Vec<SparseVec<T>> = Vec::new();
    let mut lead_of: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        if !active[i] {
            continue;
        }
        let mut r = std::mem::take(&mut rows[i]);
        let mut rc = if track { std::mem::take(&mut combos[i]) } else { Vec::new() };
        loop {
            let Some((c, b)) = r.first().cloned() else {
                if track {
                    kernel.push(rc);
                }
                break;
            };
            let Some(&k) = lead_of.get(&c) else {
                if b.is_negative() {
                    r = lin_comb(&T::zero(), &[], &T::one().checked_neg()?, &r)?;
                    if track {
                        rc = lin_comb(&T::zero(), &[], &T::one().checked_neg()?, &rc)?;
                    }
                }
                lead_of.insert(c, ech_rows.len());
                ech_rows.push(r);
                if track {
                    ech_combos.push(rc);
                }
                break;
            };
            let a = ech_rows[k][0].1.clone();
            if b.is_divisible_by(&a) {
                let q = b.exact_div(&a)?;
                r = sub_multiple(&r, &q, &ech_rows[k])?;
                if track {
                    rc = sub_multiple(&rc, &q, &ech_combos[k])?;
                }
                continue;
            }
            let (g, s, t) = T::xgcd(&a, &b)?;
            let (ag, bg) = (a.exact_div(&g)?, b.exact_div(&g)?);
            let new_p = lin_comb(&s, &ech_rows[k], &t, &r)?;
            let new_r = lin_comb(&ag, &r, &bg.checked_neg()?, &ech_rows[k])?;
            if track {
                let new_pc = lin_comb(&s, &ech_combos[k], &t, &rc)?;
                rc = lin_comb(&ag, &rc, &bg.checked_neg()?, &ech_combos[k])?;
                ech_combos[k] = new_pc;
            }
            ech_rows[k] = new_p;
            r = new_r;
        }
    }
    for (&c, &k) in &lead_of {
        basis.push(std::mem::take(&mut ech_rows[k]));
        pivots.push(c);
        if track {
            basis_combos.push(std::mem::take(&mut ech_combos[k]));
        }
    }
    Ok(Raw {
        basis,
        pivots,
        unit_count,
        combos: track.then_some(basis_combos),
        kernel: track.then_some(kernel),
    })
}

fn raw_to_big<T: Coeff>(raw: Raw<T>) -> (Vec<SparseVec<BigInt>>, Vec<usize>, usize, Option<Vec<SparseVec<BigInt>>>, Option<Vec<SparseVec<BigInt>>>) {
    let conv = |v: Vec<SparseVec<T>>| v.iter().map(|r| to_big_vec(r)).collect::<Vec<_>>();
    (conv(raw.basis), raw.pivots, raw.unit_count, raw.combos.map(conv), raw.kernel.map(conv))
}

impl Echelon {
    pub fn new(m: &IntMatrix, track: bool) -> Echelon {
        let ncols = m.ncols();
        let (basis, pivots, unit_count, combos, kernel) = with_fallback(
            || {
                let rows = m.to_rows::<i64>().ok_or(Overflow)?;
                eliminate(rows, ncols, track).map(raw_to_big)
            },
            || eliminate(m.to_rows::<BigInt>().expect("big"), ncols, track).map(raw_to_big),
        );
        Echelon { nrows: m.nrows(), ncols, basis, pivots, unit_count, combos, kernel }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_sparse_rows(self.ncols, self.basis.clone())
    }

    pub fn basis(&self) -> &[SparseVec<BigInt>] {
        &self.basis
    }

    /// Nonzero Smith diagonal of the input matrix, ascending under divisibility.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let rest = &self.basis[self.unit_count..];
        let mut out = vec![BigInt::one(); self.unit_count];
        if rest.is_empty() {
            return out;
        }
        // Compress to the columns actually used by the remainder.
        let cols: BTreeSet<usize> = rest.iter().flat_map(|r| r.iter().map(|(c, _)| *c)).collect();
        let index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let width = cols.len();
        let dense_big: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); width];
                for (c, v) in r {
                    d[index[c]] = v.clone();
                }
                d
            })
            .collect();
        let diag = with_fallback(
            || {
                let d: Vec<Vec<i64>> = dense_big
                    .iter()
                    .map(|r| r.iter().map(|x| i64::from_big(x)).collect::<Option<Vec<_>>>())
                    .collect::<Option<_>>()
                    .ok_or(Overflow)?;
                dense_diagonal(d, width).map(|v| v.iter().map(|x| x.to_big()).collect::<Vec<_>>())
            },
            || dense_diagonal(dense_big.clone(), width),
        );
        out.extend(diag);
        out
    }

    /// Left kernel basis (rows are combinations of input rows summing to zero); needs tracking.
    pub fn kernel(&self) -> Option<IntMatrix> {
        self.kernel.as_ref().map(|k| IntMatrix::from_sparse_rows(self.nrows, k.clone()))
    }

    /// Reduces `v` by the basis. Returns the remainder and the coefficients used per basis row.
    /// The remainder is zero iff `v` lies in the row lattice.
    pub fn reduce(&self, v: &[(usize, BigInt)]) -> (SparseVec<BigInt>, Vec<BigInt>) {
        let mut r: SparseVec<BigInt> = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.basis.len()];
        for (k, (row, &pc)) in self.basis.iter().zip(&self.pivots).enumerate() {
            let Some(x) = sparse_get(&r, pc) else { continue };
            let lead = sparse_get(row, pc).expect("pivot entry");
            if !x.is_divisible_by(lead) {
                continue;
            }
            let q = x.exact_div(lead).expect("big");
            r = sub_multiple(&r, &q, row).expect("big");
            coeffs[k] = q;
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[(usize, BigInt)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// A combination `x` of input rows with `x·M = v`, if one exists; needs tracking.
    pub fn solve(&self, v: &[(usize, BigInt)]) -> Option<SparseVec<BigInt>> {
        let combos = self.combos.as_ref().expect("solve needs tracked combinations");
        let (rem, coeffs) = self.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (q, combo) in coeffs.iter().zip(combos) {
            if q.is_zero() {
                continue;
            }
            for (i, c) in combo {
                *acc.entry(*i).or_default() += q * c;
            }
        }
        Some(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }
}

/// Invariant factors by the sparse two-phase path.
pub fn sparse_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    Echelon::new(m, false).invariant_factors()
}

pub fn rank(m: &IntMatrix) -> usize {
    Echelon::new(m, false).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::snf::dense_invariant_factors;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn matches_dense_on_examples() {
        let cases = [
            IntMatrix::from_dense_i64(2, &[vec![2, 0], vec![0, 3]]),
            IntMatrix::from_dense_i64(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            IntMatrix::from_dense_i64(3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]),
            IntMatrix::zeros(3, 2),
        ];
        for m in &cases {
            assert_eq!(sparse_invariant_factors(m), dense_invariant_factors(m), "{m:?}");
        }
        assert_eq!(sparse_invariant_factors(&cases[1]), big(&[2, 6, 12]));
        assert_eq!(sparse_invariant_factors(&cases[2]), big(&[1, 1, 2]));
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_dense_i64(2, &[vec![2, 4], vec![1, 2], vec![3, 1], vec![0, 5]]);
        let e = Echelon::new(&m, true);
        let k = e.kernel().unwrap();
        assert_eq!(k.nrows(), 4 - e.rank());
        let prod = k.mul(&m);
        assert!(prod.is_zero());
        let target: SparseVec<BigInt> = vec![(0, BigInt::from(7)), (1, BigInt::from(4))];
        let x = e.solve(&target).unwrap();
        assert_eq!(m.left_mul(&x), target);
        let e2 = Echelon::new(&IntMatrix::from_dense_i64(2, &[vec![2, 0], vec![0, 2]]), true);
        assert!(e2.solve(&[(0, BigInt::from(1))]).is_none());
    }

    #[test]
    fn kernel_spans_full_left_kernel() {
        // Rows: e1, e1, 2e1. Kernel rank 2 and must contain (2, 0, -1) and (1, -1, 0) combinations.
        let m = IntMatrix::from_dense_i64(1, &[vec![1], vec![1], vec![2]]);
        let e = Echelon::new(&m, true);
        let k = e.kernel().unwrap();
        assert_eq!(k.nrows(), 2);
        let ke = Echelon::new(&k, false);
        assert!(ke.contains(&[(0, BigInt::from(2)), (2, BigInt::from(-1))]));
        assert!(ke.contains(&[(0, BigInt::from(1)), (1, BigInt::from(-1))]));
        assert_eq!(ke.invariant_factors(), big(&[1, 1]));
    }
}
