use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Ring, RingElem};
use crate::error::Result;

pub const UNIT_CACHE_SCHEMA: u32 = 1;

const NONE: u32 = u32::MAX;

/// The square class group G_A = A^× / (A^×)^2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClasses {
    /// Least element (by encoding) of each class; class 0 is the class of squares.
    pub reps: Vec<RingElem>,
    pub squares: Vec<RingElem>,
    class_of: Vec<u32>,
    mul_table: Vec<Vec<usize>>,
}

impl SquareClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class index of a unit.
    pub fn class_of(&self, u: RingElem) -> usize {
        let c = self.class_of[u.0 as usize];
        assert!(c != NONE, "class_of called on a non-unit");
        c as usize
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul_table[i][j]
    }
}

/// Finite abelian presentation of A^×: generators with a triangular relation matrix and an
/// exponent-vector coordinate table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroup {
    pub generators: Vec<RingElem>,
    pub relations: Vec<Vec<i64>>,
    coords: Vec<Vec<i64>>,
}

impl UnitGroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exponent vector e with `u = Π g_i^{e_i}`.
    pub fn coords(&self, u: RingElem) -> &[i64] {
        &self.coords[u.0 as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteLog {
    pub generator: RingElem,
    log: Vec<u32>,
}

impl DiscreteLog {
    pub fn log(&self, u: RingElem) -> u32 {
        self.log[u.0 as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitData {
    pub units: Vec<RingElem>,
    /// W_A = { a : a and 1 - a are units }.
    pub wset: Vec<RingElem>,
    pub square_classes: SquareClasses,
    pub mu2: Vec<RingElem>,
    /// Torsion units; every unit of a finite ring.
    pub mu: Vec<RingElem>,
    pub dlog: Option<DiscreteLog>,
    pub group: UnitGroup,
    sqrt: Vec<u32>,
    w_index: Vec<u32>,
}

impl UnitData {
    pub fn compute(ring: &Ring) -> UnitData {
        let size = ring.size() as usize;
        let one = ring.one();
        let units: Vec<RingElem> = ring.elements().filter(|&a| ring.is_unit(a)).collect();
        let wset: Vec<RingElem> = units
            .iter()
            .copied()
            .filter(|&a| ring.is_unit(ring.sub(one, a)))
            .collect();
        let mut w_index = vec![NONE; size];
        for (i, a) in wset.iter().enumerate() {
            w_index[a.0 as usize] = i as u32;
        }

        let mut sqrt = vec![NONE; size];
        for &u in &units {
            let s = ring.mul(u, u);
            if sqrt[s.0 as usize] == NONE {
                sqrt[s.0 as usize] = u.0;
            }
        }
        let squares: Vec<RingElem> = units.iter().copied().filter(|s| sqrt[s.0 as usize] != NONE).collect();

        let mut class_of = vec![NONE; size];
        let mut reps = Vec::new();
        for &u in &units {
            if class_of[u.0 as usize] != NONE {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(u);
            for &s in &squares {
                class_of[ring.mul(u, s).0 as usize] = idx;
            }
        }
        let mul_table: Vec<Vec<usize>> = reps
            .iter()
            .map(|&x| reps.iter().map(|&y| class_of[ring.mul(x, y).0 as usize] as usize).collect())
            .collect();

        let mu2: Vec<RingElem> = units.iter().copied().filter(|&b| ring.mul(b, b) == one).collect();

        let order_of = |u: RingElem| -> usize {
            let mut x = u;
            let mut n = 1;
            while x != one {
                x = ring.mul(x, u);
                n += 1;
            }
            n
        };
        let cyclic_generator = units.iter().copied().find(|&u| order_of(u) == units.len());
        let dlog = cyclic_generator.map(|g| {
            let mut log = vec![NONE; size];
            let mut x = one;
            for e in 0..units.len() {
                log[x.0 as usize] = e as u32;
                x = ring.mul(x, g);
            }
            DiscreteLog { generator: g, log }
        });

        let group = match &dlog {
            Some(d) => {
                let mut coords = vec![Vec::new(); size];
                for &u in &units {
                    coords[u.0 as usize] = vec![d.log(u) as i64];
                }
                UnitGroup { generators: vec![d.generator], relations: vec![vec![units.len() as i64]], coords }
            }
            None => greedy_unit_group(ring, &units),
        };

        UnitData {
            mu: units.clone(),
            units,
            wset,
            square_classes: SquareClasses { reps, squares, class_of, mul_table },
            mu2,
            dlog,
            group,
            sqrt,
            w_index,
        }
    }

    /// A square root of `u` when `u` is the square of a unit.
    pub fn sqrt(&self, u: RingElem) -> Option<RingElem> {
        let s = self.sqrt[u.0 as usize];
        (s != NONE).then_some(RingElem(s))
    }

    /// Position of `a` in `wset`.
    pub fn w_index(&self, a: RingElem) -> Option<usize> {
        let i = self.w_index[a.0 as usize];
        (i != NONE).then_some(i as usize)
    }

    pub fn is_cyclic(&self) -> bool {
        self.dlog.is_some()
    }

    fn cache_path(dir: &Path, ring: &Ring) -> PathBuf {
        let key: String = ring
            .spec()
            .to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        dir.join(format!("{key}.units.v{UNIT_CACHE_SCHEMA}.json"))
    }

    pub fn save(&self, dir: &Path, ring: &Ring) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let entry = CacheEntry { schema_version: UNIT_CACHE_SCHEMA, spec: ring.spec().to_string(), data: self.clone() };
        std::fs::write(Self::cache_path(dir, ring), serde_json::to_vec(&entry)?)?;
        Ok(())
    }

    /// Loads cached tables if present and written for the same spec and schema.
    pub fn load(dir: &Path, ring: &Ring) -> Result<Option<UnitData>> {
        let path = Self::cache_path(dir, ring);
        if !path.exists() {
            return Ok(None);
        }
        let entry: CacheEntry = serde_json::from_slice(&std::fs::read(path)?)?;
        if entry.schema_version != UNIT_CACHE_SCHEMA || entry.spec != ring.spec().to_string() {
            return Ok(None);
        }
        Ok(Some(entry.data))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    schema_version: u32,
    spec: String,
    data: UnitData,
}

fn greedy_unit_group(ring: &Ring, units: &[RingElem]) -> UnitGroup {
    let one = ring.one();
    let mut members: BTreeMap<RingElem, Vec<i64>> = BTreeMap::new();
    members.insert(one, Vec::new());
    let mut generators = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for &u in units {
        if members.len() == units.len() {
            break;
        }
        if members.contains_key(&u) {
            continue;
        }
        let k = generators.len();
        let mut m = 1i64;
        let mut x = u;
        while !members.contains_key(&x) {
            x = ring.mul(x, u);
            m += 1;
        }
        let mut rel: Vec<i64> = members[&x].iter().map(|c| -c).collect();
        rel.resize(k, 0);
        rel.push(m);
        for r in relations.iter_mut() {
            r.push(0);
        }
        relations.push(rel);
        let old: Vec<(RingElem, Vec<i64>)> = members.iter().map(|(a, c)| (*a, c.clone())).collect();
        for (h, c) in old.iter() {
            let mut c0 = c.clone();
            c0.resize(k + 1, 0);
            members.insert(*h, c0);
        }
        let mut power = one;
        for i in 1..m {
            power = ring.mul(power, u);
            for (h, c) in old.iter() {
                let mut ci = c.clone();
                ci.resize(k, 0);
                ci.push(i);
                members.insert(ring.mul(power, *h), ci);
            }
        }
        generators.push(u);
    }
    let k = generators.len();
    let mut coords = vec![Vec::new(); ring.size() as usize];
    for (a, mut c) in members {
        c.resize(k, 0);
        coords[a.0 as usize] = c;
    }
    UnitGroup { generators, relations, coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(r: &Ring, xs: &[RingElem]) -> Vec<String> {
        xs.iter().map(|&x| r.format(x)).collect()
    }

    #[test]
    fn gf8_unit_data() {
        let r = Ring::parse("gf(2,3)").unwrap();
        let u = r.units();
        assert_eq!(u.units.len(), 7);
        assert_eq!(u.wset.len(), 6);
        assert_eq!(u.square_classes.len(), 1);
        assert_eq!(u.mu2, vec![r.one()]);
        assert!(u.is_cyclic());
    }

    #[test]
    fn char2_fields_have_trivial_square_classes() {
        for k in 1..=8 {
            let r = Ring::parse(&format!("gf(2,{k})")).unwrap();
            let u = r.units();
            assert_eq!(u.square_classes.len(), 1, "k = {k}");
            assert_eq!(u.mu2, vec![r.one()]);
        }
    }

    #[test]
    fn truncated_gf2_t3() {
        let r = Ring::parse("gf(2,1)[t]/t^3").unwrap();
        let u = r.units();
        assert_eq!(codes(&r, &u.units), ["1", "1+t", "1+t^2", "1+t+t^2"]);
        assert_eq!(codes(&r, &u.square_classes.squares), ["1", "1+t^2"]);
        assert_eq!(u.square_classes.len(), 2);
        assert_eq!(codes(&r, &u.mu2), ["1", "1+t^2"]);
        // 1 - a is a non-unit for every unit a here (both have constant term 1).
        assert!(u.wset.is_empty());
    }

    #[test]
    fn z9_unit_data() {
        let r = Ring::parse("z/9").unwrap();
        let u = r.units();
        assert_eq!(u.units.len(), 6);
        assert_eq!(codes(&r, &u.square_classes.squares), ["1", "4", "7"]);
        assert_eq!(u.square_classes.len(), 2);
        assert_eq!(codes(&r, &u.mu2), ["1", "8"]);
    }

    #[test]
    fn class_of_is_a_homomorphism() {
        for spec in ["z/9", "z/25", "gf(2,1)[t]/t^3", "gf(3,2)", "gf(2,2)[t]/t^2", "z/8"] {
            let r = Ring::parse(spec).unwrap();
            let u = r.units();
            let sc = &u.square_classes;
            for &a in &u.units {
                for &b in &u.units {
                    assert_eq!(sc.class_of(r.mul(a, b)), sc.mul(sc.class_of(a), sc.class_of(b)));
                }
            }
            // kernel is exactly the squares
            let kernel: Vec<_> = u.units.iter().copied().filter(|&a| sc.class_of(a) == 0).collect();
            assert_eq!(kernel, sc.squares);
        }
    }

    #[test]
    fn unit_group_coordinates_multiply() {
        for spec in ["z/8", "z/9", "gf(2,1)[t]/t^4", "gf(3,1)[t]/t^2", "z/25"] {
            let r = Ring::parse(spec).unwrap();
            let u = r.units();
            let g = &u.group;
            let order: i64 = (0..g.rank()).map(|i| g.relations[i][i]).product();
            assert_eq!(order as usize, u.units.len(), "{spec}");
            for &a in &u.units {
                let mut x = r.one();
                for (gen, &e) in g.generators.iter().zip(g.coords(a)) {
                    x = r.mul(x, r.pow(*gen, e as u64));
                }
                assert_eq!(x, a);
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = Ring::parse("z/25").unwrap();
        r.units().save(dir.path(), &r).unwrap();
        let loaded = UnitData::load(dir.path(), &r).unwrap().unwrap();
        assert_eq!(&loaded, r.units());
        let other = Ring::parse("z/9").unwrap();
        assert!(UnitData::load(dir.path(), &other).unwrap().is_none());
    }
}
