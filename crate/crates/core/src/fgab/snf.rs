//! Dense Smith normal form.
//!
//! Pivoting is row-then-column least absolute value: at every step the pivot is the first entry of
//! least nonzero absolute value in row-major order of the active submatrix. Quotients are rounded to
//! nearest so remainders shrink as fast as possible.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::coeff::{with_fallback, Checked, Coeff};
use super::matrix::IntMatrix;

/// `U·M·V = D`, with `D` diagonal (entries `diagonal`, padded with zeros to the shape of `M`).
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn d_matrix(&self) -> IntMatrix {
        let (r, c) = (self.u.nrows(), self.v.nrows());
        let mut rows = vec![vec![BigInt::zero(); c]; r];
        for (i, d) in self.diagonal.iter().enumerate() {
            rows[i][i] = d.clone();
        }
        IntMatrix::from_dense(c, &rows)
    }
}

struct Dense<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    ncols: usize,
}

fn identity<T: Coeff>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

impl<T: Coeff> Dense<T> {
    fn new(a: Vec<Vec<T>>, ncols: usize, track: bool) -> Self {
        let nrows = a.len();
        Dense {
            u: track.then(|| identity(nrows)),
            v: track.then(|| identity(ncols)),
            a,
            ncols,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for row in v.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }

    /// row_i -= q·row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &T, from: usize) -> Checked<()> {
        if q.is_zero() {
            return Ok(());
        }
        fn apply<T: Coeff>(m: &mut [Vec<T>], i: usize, j: usize, q: &T, from: usize) -> Checked<()> {
            let (src, dst) = if i < j {
                let (lo, hi) = m.split_at_mut(j);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = m.split_at_mut(i);
                (&lo[j], &mut hi[0])
            };
            for k in from..src.len() {
                if !src[k].is_zero() {
                    dst[k] = dst[k].checked_sub(&q.checked_mul(&src[k])?)?;
                }
            }
            Ok(())
        }
        apply(&mut self.a, i, j, q, from)?;
        if let Some(u) = &mut self.u {
            apply(u, i, j, q, 0)?;
        }
        Ok(())
    }

    /// col_i -= q·col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &T, from_row: usize) -> Checked<()> {
        if q.is_zero() {
            return Ok(());
        }
        for row in self.a.iter_mut().skip(from_row) {
            if !row[j].is_zero() {
                row[i] = row[i].checked_sub(&q.checked_mul(&row[j])?)?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    row[i] = row[i].checked_sub(&q.checked_mul(&row[j])?)?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Checked<()> {
        for x in self.a[i].iter_mut() {
            *x = x.checked_neg()?;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = x.checked_neg()?;
            }
        }
        Ok(())
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.cmp_abs(&self.a[bi][bj]).is_lt()) {
                    best = Some((i, j));
                    if x.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Checked<Vec<T>> {
        let nrows = self.a.len();
        let limit = nrows.min(self.ncols);
        let mut diag = Vec::with_capacity(limit);
        for t in 0..limit {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t below the pivot.
                let mut smaller: Option<usize> = None;
                for i in t + 1..nrows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].round_div(&self.a[t][t])?;
                    self.row_sub(i, t, &q, t)?;
                    if !self.a[i][t].is_zero()
                        && smaller.map_or(true, |s| self.a[i][t].cmp_abs(&self.a[s][t]).is_lt())
                    {
                        smaller = Some(i);
                    }
                }
                if let Some(s) = smaller {
                    self.swap_rows(t, s);
                    continue;
                }
                // Clear row t right of the pivot.
                let mut smaller: Option<usize> = None;
                for j in t + 1..self.ncols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].round_div(&self.a[t][t])?;
                    self.col_sub(j, t, &q, t)?;
                    if !self.a[t][j].is_zero()
                        && smaller.map_or(true, |s| self.a[t][j].cmp_abs(&self.a[t][s]).is_lt())
                    {
                        smaller = Some(j);
                    }
                }
                if let Some(s) = smaller {
                    self.swap_cols(t, s);
                    continue;
                }
                // Divisibility: the pivot must divide every remaining entry.
                let p = self.a[t][t].clone();
                let bad = (t + 1..nrows).find(|&i| self.a[i][t + 1..].iter().any(|x| !x.is_divisible_by(&p)));
                match bad {
                    Some(i) => {
                        // row_t += row_i, then the row-clearing pass produces a smaller remainder.
                        self.row_sub(t, i, &T::one().checked_neg()?, t)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            diag.push(self.a[t][t].clone());
        }
        Ok(diag)
    }
}

fn snf_generic<T: Coeff>(m: &IntMatrix, track: bool) -> Checked<(Vec<T>, Option<Vec<Vec<T>>>, Option<Vec<Vec<T>>>)> {
    let a: Vec<Vec<T>> = m
        .to_dense()
        .iter()
        .map(|r| r.iter().map(|x| T::from_big(x)).collect::<Option<Vec<T>>>())
        .collect::<Option<_>>()
        .ok_or(super::coeff::Overflow)?;
    let mut d = Dense::new(a, m.ncols(), track);
    let diag = d.run()?;
    Ok((diag, d.u, d.v))
}

fn to_matrix<T: Coeff>(rows: Vec<Vec<T>>, ncols: usize) -> IntMatrix {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect();
    IntMatrix::from_dense(ncols, &big)
}

/// Reference Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.nrows(), m.ncols());
    let pack = |(d, u, v): (Vec<BigInt>, Option<Vec<Vec<BigInt>>>, Option<Vec<Vec<BigInt>>>)| Smith {
        diagonal: d,
        u: to_matrix(u.expect("tracked"), r),
        v: to_matrix(v.expect("tracked"), c),
    };
    with_fallback(
        || {
            snf_generic::<i64>(m, true).map(|(d, u, v)| {
                pack((
                    d.iter().map(|x| x.to_big()).collect(),
                    u.map(|u| u.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect()),
                    v.map(|v| v.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect()),
                ))
            })
        },
        || snf_generic::<BigInt>(m, true).map(pack),
    )
}

/// Nonzero diagonal entries of the Smith form, computed densely without transforms.
pub fn dense_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    with_fallback(
        || snf_generic::<i64>(m, false).map(|(d, _, _)| d.iter().map(|x| x.to_big()).collect()),
        || snf_generic::<BigInt>(m, false).map(|(d, _, _)| d),
    )
}

/// Same as [`dense_invariant_factors`] for a matrix already held as dense rows of a coefficient type.
pub(crate) fn dense_diagonal<T: Coeff>(rows: Vec<Vec<T>>, ncols: usize) -> Checked<Vec<T>> {
    let mut d = Dense::new(rows, ncols, false);
    d.run()
}

pub fn is_unimodular_square(m: &IntMatrix) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let d = dense_invariant_factors(m);
    d.len() == m.nrows() && d.iter().all(|x| x.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d_matrix());
        assert!(is_unimodular_square(&s.u));
        assert!(is_unimodular_square(&s.v));
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check(&IntMatrix::from_dense_i64(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::from(1); 3]);
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.diagonal.is_empty());
    }

    #[test]
    fn textbook_example() {
        let m = IntMatrix::from_dense_i64(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(dense_invariant_factors(&m), s.diagonal);
    }

    #[test]
    fn big_entries_fall_back() {
        let big: BigInt = "340282366920938463463374607431768211457".parse().unwrap();
        let m = IntMatrix::from_dense(2, &[vec![big.clone(), BigInt::from(2)], vec![BigInt::from(4), big.clone()]]);
        let s = check(&m);
        assert_eq!(s.diagonal.len(), 2);
        let det: BigInt = &big * &big - 8;
        assert_eq!(&s.diagonal[0] * &s.diagonal[1], num_traits::Signed::abs(&det));
    }
}
