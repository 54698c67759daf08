//! Homology of finite abelian groups from the normalized bar complex, with integer coefficients.
//!
//! C_n has one generator [g_1|…|g_n] per n-tuple of non-identity elements (C_0 = Z on the empty
//! tuple) and
//!
//! d[g_1|…|g_n] = [g_2|…|g_n] + Σ_{i=1}^{n−1} (−1)^i [… |g_i g_{i+1}| …] + (−1)^n [g_1|…|g_{n−1}],
//!
//! dropping tuples that contain the identity. Tuples are indexed lexicographically. Automorphisms are
//! given as permutations of element codes and act on tuples coordinatewise.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::echelon::Echelon;
use super::matrix::{sparse_from_terms, IntMatrix};
use super::presentation::{AbInvariants, AbMap, AbPresentation};
use crate::error::{Error, Result};

pub const DEFAULT_BAR_BUDGET: u64 = 10_000_000;

/// Z/o_1 ⊕ … ⊕ Z/o_k, elements coded in mixed radix with the first digit least significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelian {
    orders: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(orders: &[u64]) -> FiniteAbelian {
        assert!(orders.iter().all(|o| *o >= 1), "cyclic factor orders must be positive");
        FiniteAbelian { orders: orders.to_vec() }
    }

    pub fn cyclic(m: u64) -> FiniteAbelian {
        FiniteAbelian::new(&[m])
    }

    /// (Z/p)^k, coded like the additive group of GF(p^k) in little-endian coefficient order.
    pub fn elementary(p: u64, k: usize) -> FiniteAbelian {
        FiniteAbelian::new(&vec![p; k])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn digits(&self, mut code: u32) -> Vec<u64> {
        self.orders
            .iter()
            .map(|o| {
                let d = code as u64 % o;
                code = (code as u64 / o) as u32;
                d
            })
            .collect()
    }

    pub fn code(&self, digits: &[u64]) -> u32 {
        let mut c = 0u64;
        for (d, o) in digits.iter().zip(&self.orders).rev() {
            c = c * o + d % o;
        }
        c as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.code(&s)
    }

    /// Row-major addition table.
    pub fn add_table(&self) -> Vec<u32> {
        let n = self.order() as u32;
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.add(a, b)).collect()
    }

    pub fn presentation(&self) -> AbPresentation {
        AbPresentation::cyclic(&self.orders)
    }

    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        let n = self.order() as usize;
        if perm.len() != n || perm[0] != 0 {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in perm {
            if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                return false;
            }
        }
        let table = self.add_table();
        (0..n).all(|a| (0..n).all(|b| perm[table[a * n + b] as usize] == table[perm[a] as usize * n + perm[b] as usize]))
    }
}

/// Lexicographic indexing of n-tuples of non-identity codes 1..=s.
#[derive(Clone, Copy, Debug)]
struct Tuples {
    s: usize,
    n: usize,
}

impl Tuples {
    fn count(&self) -> usize {
        self.s.pow(self.n as u32)
    }

    fn decode(&self, mut idx: usize, out: &mut [u32]) {
        for k in (0..self.n).rev() {
            out[k] = (idx % self.s) as u32 + 1;
            idx /= self.s;
        }
    }

    fn encode(&self, codes: &[u32]) -> usize {
        codes.iter().fold(0, |acc, &c| acc * self.s + (c as usize - 1))
    }
}

fn tuple_count(g: &FiniteAbelian, n: usize) -> u64 {
    (g.order() - 1).checked_pow(n as u32).unwrap_or(u64::MAX)
}

fn check_budget(g: &FiniteAbelian, n: usize, budget: u64) -> Result<()> {
    let needed = tuple_count(g, n + 1);
    if needed > budget {
        return Err(Error::Budget { what: format!("bar complex of order-{} group in degree {}", g.order(), n + 1), needed, budget });
    }
    Ok(())
}

fn face_terms(table: &[u32], order: usize, t: &[u32], dom: Tuples, cod: Tuples) -> Vec<(usize, i64)> {
    let n = t.len();
    let mut terms = Vec::with_capacity(n + 1);
    if n == 1 {
        return terms;
    }
    terms.push((cod.encode(&t[1..]), 1));
    let mut buf = vec![0u32; n - 1];
    for i in 0..n - 1 {
        let prod = table[t[i] as usize * order + t[i + 1] as usize];
        if prod == 0 {
            continue;
        }
        buf[..i].copy_from_slice(&t[..i]);
        buf[i] = prod;
        buf[i + 1..].copy_from_slice(&t[i + 2..]);
        terms.push((cod.encode(&buf), if i % 2 == 0 { -1 } else { 1 }));
    }
    terms.push((cod.encode(&t[..n - 1]), if n % 2 == 0 { 1 } else { -1 }));
    debug_assert_eq!(dom.n, n);
    terms
}

/// Matrix of d_n: rows are degree-n tuples, columns degree-(n−1) tuples. d_0 is 1×0.
pub fn boundary_matrix(g: &FiniteAbelian, n: usize) -> IntMatrix {
    let order = g.order() as usize;
    let s = order - 1;
    if n == 0 {
        return IntMatrix::zeros(1, 0);
    }
    let table = g.add_table();
    let dom = Tuples { s, n };
    let cod = Tuples { s, n: n - 1 };
    let rows: Vec<_> = (0..dom.count())
        .into_par_iter()
        .map_init(
            || vec![0u32; n],
            |t, idx| {
                dom.decode(idx, t);
                sparse_from_terms(face_terms(&table, order, t, dom, cod))
            },
        )
        .collect();
    IntMatrix::from_sparse_rows(cod.count(), rows)
}

fn invariants_from_ranks(cn: usize, rank_n: usize, next: &Echelon) -> AbInvariants {
    let factors = next.invariant_factors();
    let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
    AbInvariants { torsion, free_rank: cn - rank_n - next.rank() }
}

/// Invariant factors of H_n(G, Z) without building a presentation.
pub fn bar_homology_invariants(g: &FiniteAbelian, n: usize, budget: u64) -> Result<AbInvariants> {
    check_budget(g, n, budget)?;
    let dn = boundary_matrix(g, n);
    let rank_n = Echelon::new(&dn, false).rank();
    let next = Echelon::new(&boundary_matrix(g, n + 1), false);
    Ok(invariants_from_ranks(dn.nrows(), rank_n, &next))
}

/// H_n as a presentation on a basis of cycles, the induced actions, and the coinvariants.
#[derive(Clone, Debug)]
pub struct BarHomology {
    pub degree: usize,
    pub group: AbPresentation,
    pub invariants: AbInvariants,
    pub actions: Vec<AbMap>,
    pub coinvariants: AbInvariants,
}

fn act_on_tuples(perm: &[u32], tuples: Tuples, v: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let mut buf = vec![0u32; tuples.n];
    let mut out: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(idx, c)| {
            tuples.decode(*idx, &mut buf);
            for x in buf.iter_mut() {
                *x = perm[*x as usize];
            }
            (tuples.encode(&buf), c.clone())
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

fn validate_actions(g: &FiniteAbelian, actions: &[Vec<u32>]) -> Result<()> {
    for (k, a) in actions.iter().enumerate() {
        if !g.is_automorphism(a) {
            return Err(Error::InvalidMap(format!("action {k} is not an automorphism of the group")));
        }
    }
    Ok(())
}

pub fn bar_homology(g: &FiniteAbelian, n: usize, actions: &[Vec<u32>], budget: u64) -> Result<BarHomology> {
    check_budget(g, n, budget)?;
    validate_actions(g, actions)?;
    let tuples = Tuples { s: g.order() as usize - 1, n };
    let dn = boundary_matrix(g, n);
    let cycles = if n == 0 { IntMatrix::identity(1) } else { Echelon::new(&dn, true).kernel().expect("tracked") };
    let zech = Echelon::new(&cycles, true);
    let in_cycles = |v: &[(usize, BigInt)]| {
        zech.solve(v).ok_or_else(|| Error::Consistency("chain is not a combination of the cycle basis".into()))
    };
    let boundaries = Echelon::new(&boundary_matrix(g, n + 1), false);
    let mut rels = IntMatrix::empty(cycles.nrows());
    for b in boundaries.basis() {
        rels.push_sparse(in_cycles(b)?);
    }
    let group = AbPresentation::new(cycles.nrows(), rels);
    let mut maps = Vec::with_capacity(actions.len());
    let mut moved = IntMatrix::empty(cycles.nrows());
    for perm in actions {
        let mut m = IntMatrix::empty(cycles.nrows());
        for z in cycles.rows() {
            let image = if n == 0 { z.clone() } else { act_on_tuples(perm, tuples, z) };
            m.push_sparse(in_cycles(&image)?);
        }
        moved = moved.vstack(&m.sub(&IntMatrix::identity(cycles.nrows())));
        maps.push(AbMap::new(group.clone(), group.clone(), m)?);
    }
    let coinvariants = group.quotient(&moved).invariants();
    Ok(BarHomology { degree: n, invariants: group.invariants(), group, actions: maps, coinvariants })
}

/// Order of the group of automorphisms generated by `actions`.
pub fn generated_order(actions: &[Vec<u32>]) -> u64 {
    let Some(first) = actions.first() else { return 1 };
    let id: Vec<u32> = (0..first.len() as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for a in actions {
            let q: Vec<u32> = p.iter().map(|&x| a[x as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len() as u64
}

/// Removes from `inv` every prime dividing `m`.
pub fn prime_to(inv: &AbInvariants, m: u64) -> AbInvariants {
    let m = BigInt::from(m);
    let mut torsion = Vec::new();
    for d in &inv.torsion {
        let mut d = d.clone();
        loop {
            let g = d.gcd(&m);
            if g.is_one() {
                break;
            }
            d /= g;
        }
        if !d.is_one() {
            torsion.push(d);
        }
    }
    AbInvariants { torsion, free_rank: inv.free_rank }
}

fn orbit_ids(tuples: Tuples, actions: &[Vec<u32>]) -> (Vec<u32>, Vec<usize>) {
    let count = tuples.count();
    let mut id = vec![u32::MAX; count];
    let mut reps = Vec::new();
    let mut buf = vec![0u32; tuples.n];
    let mut stack = Vec::new();
    for start in 0..count {
        if id[start] != u32::MAX {
            continue;
        }
        let o = reps.len() as u32;
        reps.push(start);
        id[start] = o;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for a in actions {
                tuples.decode(x, &mut buf);
                for c in buf.iter_mut() {
                    *c = a[*c as usize];
                }
                let y = tuples.encode(&buf);
                if id[y] == u32::MAX {
                    id[y] = o;
                    stack.push(y);
                }
            }
        }
    }
    (id, reps)
}

/// H_n of the orbit complex C_•(G)_T for the group T generated by `actions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitHomology {
    pub degree: usize,
    pub acting_order: u64,
    pub orbit_counts: Vec<usize>,
    pub invariants: AbInvariants,
    /// The part prime to |T|. When |G| and |T| are coprime and n ≥ 1 this is H_n(G)_T, because
    /// taking coinvariants is exact after inverting |T| and H_n(G) is |G|-torsion.
    pub prime_to_acting: AbInvariants,
}

pub fn orbit_homology(g: &FiniteAbelian, n: usize, actions: &[Vec<u32>], budget: u64) -> Result<OrbitHomology> {
    check_budget(g, n, budget)?;
    validate_actions(g, actions)?;
    let order = g.order() as usize;
    let s = order - 1;
    let table = g.add_table();
    let degrees: Vec<usize> = (n.saturating_sub(1)..=n + 1).collect();
    let orbits: Vec<(Vec<u32>, Vec<usize>)> = degrees.iter().map(|&k| orbit_ids(Tuples { s, n: k }, actions)).collect();
    let matrix = |k: usize| -> IntMatrix {
        // d_k on orbit representatives, columns mapped to orbit ids in degree k − 1.
        let pos = degrees.iter().position(|&d| d == k).expect("degree in range");
        let (_, reps) = &orbits[pos];
        if k == 0 {
            return IntMatrix::zeros(reps.len(), 0);
        }
        let (cod_ids, cod_reps) = &orbits[pos - 1];
        let dom = Tuples { s, n: k };
        let cod = Tuples { s, n: k - 1 };
        let rows: Vec<_> = reps
            .par_iter()
            .map_init(
                || vec![0u32; k],
                |t, &idx| {
                    dom.decode(idx, t);
                    let terms = face_terms(&table, order, t, dom, cod);
                    sparse_from_terms(terms.into_iter().map(|(c, v)| (cod_ids[c] as usize, v)))
                },
            )
            .collect();
        IntMatrix::from_sparse_rows(cod_reps.len(), rows)
    };
    let dn = matrix(n);
    let rank_n = Echelon::new(&dn, false).rank();
    let next = Echelon::new(&matrix(n + 1), false);
    let invariants = invariants_from_ranks(dn.nrows(), rank_n, &next);
    let acting_order = generated_order(actions);
    let prime_to_acting = prime_to(&invariants, acting_order);
    let orbit_counts = orbits.iter().map(|(_, r)| r.len()).collect();
    Ok(OrbitHomology { degree: n, acting_order, orbit_counts, invariants, prime_to_acting })
}

/// Distinct primes dividing m.
pub fn prime_divisors(mut m: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= m {
        while m % p == 0 {
            out.insert(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.insert(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(i: &AbInvariants) -> Vec<u64> {
        i.torsion.iter().map(|x| u64::try_from(x).unwrap()).collect()
    }

    /// H_n(Z/m) from the 2-periodic free resolution: Z, then Z/m in odd degrees and 0 in even ones.
    fn periodic(m: u64, n: usize) -> AbInvariants {
        match n {
            0 => AbInvariants { torsion: vec![], free_rank: 1 },
            _ if n % 2 == 1 => AbInvariants::cyclic(&[m]),
            _ => AbInvariants::trivial(),
        }
    }

    #[test]
    fn degree_zero_is_z() {
        for g in [FiniteAbelian::cyclic(4), FiniteAbelian::new(&[2, 2])] {
            let h = bar_homology_invariants(&g, 0, DEFAULT_BAR_BUDGET).unwrap();
            assert_eq!((h.torsion.len(), h.free_rank), (0, 1));
        }
    }

    #[test]
    fn cyclic_groups_match_periodic_resolution() {
        for (m, n) in [(5, 3), (3, 2), (2, 3), (4, 3), (6, 2), (3, 4)] {
            let h = bar_homology_invariants(&FiniteAbelian::cyclic(m), n, DEFAULT_BAR_BUDGET).unwrap();
            assert_eq!(h, periodic(m, n), "Z/{m} degree {n}");
        }
    }

    #[test]
    fn low_degrees_for_small_cyclic_groups() {
        for m in 2..=16 {
            let g = FiniteAbelian::cyclic(m);
            assert_eq!(orders(&bar_homology_invariants(&g, 1, DEFAULT_BAR_BUDGET).unwrap()), vec![m]);
            assert!(bar_homology_invariants(&g, 2, DEFAULT_BAR_BUDGET).unwrap().is_trivial());
        }
    }

    #[test]
    fn klein_four() {
        // Künneth: H_2 = Z/2, H_3 = Z/2 ⊕ Z/2 ⊕ Z/2.
        let g = FiniteAbelian::new(&[2, 2]);
        assert_eq!(orders(&bar_homology_invariants(&g, 2, DEFAULT_BAR_BUDGET).unwrap()), vec![2]);
        assert_eq!(orders(&bar_homology_invariants(&g, 3, DEFAULT_BAR_BUDGET).unwrap()), vec![2, 2, 2]);
    }

    #[test]
    fn budget_is_enforced() {
        let err = bar_homology_invariants(&FiniteAbelian::cyclic(11), 3, 1000).unwrap_err();
        assert!(matches!(err, Error::Budget { needed: 10000, budget: 1000, .. }));
    }

    #[test]
    fn presentation_matches_fast_path() {
        let g = FiniteAbelian::new(&[2, 2]);
        let h = bar_homology(&g, 2, &[], DEFAULT_BAR_BUDGET).unwrap();
        assert_eq!(h.invariants, bar_homology_invariants(&g, 2, DEFAULT_BAR_BUDGET).unwrap());
        assert_eq!(h.coinvariants, h.invariants);
    }

    #[test]
    fn negation_acts_by_sign_on_cyclic_homology() {
        // On H_n(Z/m), multiplication by u acts by u^k in degree 2k−1; negation on H_3(Z/5) is
        // +1 and on H_1 it is −1, so the coinvariants are Z/5 and Z/gcd(5, 2) = 0.
        let g = FiniteAbelian::cyclic(5);
        let neg: Vec<u32> = (0..5).map(|x| (5 - x) % 5).collect();
        let h1 = bar_homology(&g, 1, &[neg.clone()], DEFAULT_BAR_BUDGET).unwrap();
        assert!(h1.coinvariants.is_trivial());
        let h3 = bar_homology(&g, 3, &[neg], DEFAULT_BAR_BUDGET).unwrap();
        assert_eq!(orders(&h3.coinvariants), vec![5]);
        // Doubling acts on H_3 by 4, so (4 − 1) = 3 is invertible and the coinvariants vanish.
        let dbl: Vec<u32> = (0..5).map(|x| (2 * x) % 5).collect();
        assert!(bar_homology(&g, 3, &[dbl], DEFAULT_BAR_BUDGET).unwrap().coinvariants.is_trivial());
    }

    #[test]
    fn rejects_non_automorphisms() {
        let g = FiniteAbelian::cyclic(4);
        assert!(bar_homology(&g, 1, &[vec![0, 2, 1, 3]], DEFAULT_BAR_BUDGET).is_err());
    }

    #[test]
    fn orbit_complex_agrees_with_direct_coinvariants() {
        // (Z/2)^2 = GF(4) additively, with multiplication by a generator of GF(4)^× (order 3).
        let g = FiniteAbelian::elementary(2, 2);
        // x ↦ t·x in GF(2)[t]/(t²+t+1): 1 ↦ t, t ↦ t+1, t+1 ↦ 1.
        let mul_t = vec![0, 2, 3, 1];
        for n in 1..=3 {
            let direct = bar_homology(&g, n, &[mul_t.clone()], DEFAULT_BAR_BUDGET).unwrap();
            let orbit = orbit_homology(&g, n, &[mul_t.clone()], DEFAULT_BAR_BUDGET).unwrap();
            assert_eq!(orbit.acting_order, 3);
            assert_eq!(orbit.prime_to_acting, direct.coinvariants, "degree {n}");
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_divisors(360).into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(orders(&prime_to(&AbInvariants::cyclic(&[6, 12, 9]), 3)), vec![2, 4]);
        let g = FiniteAbelian::new(&[3, 4]);
        for c in 0..12 {
            assert_eq!(g.code(&g.digits(c)), c);
        }
        assert_eq!(g.add(g.code(&[2, 3]), g.code(&[2, 2])), g.code(&[1, 1]));
    }
}
