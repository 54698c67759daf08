//! Finite commutative rings small enough to enumerate.
//!
//! Elements are encoded as integers in `0..size`. The encoding packs the coefficient vector of the
//! polynomial representative little-endian: an element of GF(p^k) with coefficients
//! `c_0 + c_1 x + …` is `Σ c_i p^i`; an element `a_0 + a_1 t + …` of GF(q)[t]/(t^n) is
//! `Σ code(a_j) q^j`; an element of Z/m is its least non-negative residue.

pub mod mat2;
pub mod poly;
pub mod units;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use mat2::{Mat2, DEFAULT_SL2_BOUND};
pub use units::UnitData;

/// Largest ring accepted unless a bound is passed explicitly.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 14;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElem(pub u32);

impl RingElem {
    pub fn code(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    PrimeField { p: u32 },
    GaloisField { p: u32, k: u32, modulus: Vec<u32> },
    Residue { m: u32 },
    Truncated { p: u32, k: u32, modulus: Vec<u32>, n: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub kind: RingKind,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns (p, e) if `n = p^e` for a prime p.
fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

impl RingSpec {
    /// Parses `gf(2,7)`, `gf(2,3;x^3+x+1)`, `z/9`, `gf(2,1)[t]/t^3` (also `[t]/(t^3)`).
    pub fn parse(text: &str) -> Result<RingSpec> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let err = |msg: &str| Error::RingSpec(text.to_string(), msg.to_string());
        if let Some(m) = s.strip_prefix("z/") {
            let m: u32 = m.parse().map_err(|_| err("modulus is not an integer"))?;
            if m < 2 {
                return Err(err("modulus must be at least 2"));
            }
            let kind = if is_prime(m) { RingKind::PrimeField { p: m } } else { RingKind::Residue { m } };
            return Ok(RingSpec { kind });
        }
        let rest = s.strip_prefix("gf(").ok_or_else(|| err("expected `gf(` or `z/`"))?;
        let close = rest.find(')').ok_or_else(|| err("missing `)`"))?;
        let inner = &rest[..close];
        let tail = &rest[close + 1..];
        let (params, modulus_text) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (inner, None),
        };
        let (p, k) = params.split_once(',').ok_or_else(|| err("expected gf(p,k)"))?;
        let p: u32 = p.parse().map_err(|_| err("p is not an integer"))?;
        let k: u32 = k.parse().map_err(|_| err("k is not an integer"))?;
        if !is_prime(p) {
            return Err(err("p must be prime"));
        }
        if k == 0 {
            return Err(err("k must be positive"));
        }
        let modulus = match modulus_text {
            Some(m) => poly::parse(m, p).map_err(|e| err(&e))?,
            None => poly::default_modulus(p, k),
        };
        if poly::degree(&modulus) != Some(k as usize) || modulus[k as usize] != 1 {
            return Err(err("modulus must be monic of degree k"));
        }
        if tail.is_empty() {
            return Ok(RingSpec { kind: RingKind::GaloisField { p, k, modulus } });
        }
        let t = tail.strip_prefix("[t]/").ok_or_else(|| err("expected `[t]/t^n`"))?;
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let n = match t.strip_prefix("t^") {
            Some(n) => n.parse::<u32>().map_err(|_| err("bad truncation degree"))?,
            None if t == "t" => 1,
            None => return Err(err("expected `t^n`")),
        };
        if n == 0 {
            return Err(err("truncation degree must be positive"));
        }
        Ok(RingSpec { kind: RingKind::Truncated { p, k, modulus, n } })
    }

    pub fn size(&self) -> u64 {
        match &self.kind {
            RingKind::PrimeField { p } => *p as u64,
            RingKind::Residue { m } => *m as u64,
            RingKind::GaloisField { p, k, .. } => (*p as u64).saturating_pow(*k),
            RingKind::Truncated { p, k, n, .. } => (*p as u64).saturating_pow(k.saturating_mul(*n)),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gf = |f: &mut fmt::Formatter<'_>, p: u32, k: u32, modulus: &[u32]| {
            if modulus == poly::default_modulus(p, k).as_slice() {
                write!(f, "gf({p},{k})")
            } else {
                write!(f, "gf({p},{k};{})", poly::to_string(modulus))
            }
        };
        match &self.kind {
            RingKind::PrimeField { p } => write!(f, "z/{p}"),
            RingKind::Residue { m } => write!(f, "z/{m}"),
            RingKind::GaloisField { p, k, modulus } => gf(f, *p, *k, modulus),
            RingKind::Truncated { p, k, modulus, n } => {
                gf(f, *p, *k, modulus)?;
                write!(f, "[t]/t^{n}")
            }
        }
    }
}

/// Log/antilog tables for GF(p^k).
#[derive(Debug)]
struct FieldTables {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldTables {
    fn build(p: u32, k: u32, modulus: &[u32]) -> Result<FieldTables> {
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus(poly::to_string(modulus), p));
        }
        let q = p.pow(k);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = decode(a, p, k as usize);
            let db = decode(b, p, k as usize);
            let mut prod = vec![0u32; 2 * k as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            encode(&poly::rem(&prod, modulus, p), p)
        };
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        // The first element whose powers exhaust the nonzero elements is the primitive element.
        for g in 2..q.max(3) {
            let g = if q == 2 { 1 } else { g };
            let mut x = 1u32;
            let mut ok = true;
            log.iter_mut().for_each(|l| *l = u32::MAX);
            for e in 0..(q - 1) {
                if log[x as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                exp[e as usize] = x;
                log[x as usize] = e;
                x = slow_mul(x, g);
            }
            if ok && x == 1 {
                return Ok(FieldTables { p, k, q, exp, log });
            }
        }
        Err(Error::ReducibleModulus(poly::to_string(modulus), p))
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }
}

fn decode(mut code: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % base);
        code /= base;
    }
    out
}

fn encode(digits: &[u32], base: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * base + d)
}

#[derive(Debug)]
enum Arith {
    Mod(u32),
    Field(FieldTables),
    Truncated(FieldTables, usize),
}

/// An immutable finite commutative ring with cached inverse and unit tables.
pub struct Ring {
    spec: RingSpec,
    size: u32,
    characteristic: u32,
    arith: Arith,
    negs: Vec<u32>,
    invs: Vec<u32>,
    units: OnceLock<Arc<UnitData>>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.spec)
    }
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        Self::with_bound(spec, DEFAULT_SIZE_BOUND)
    }

    pub fn parse(text: &str) -> Result<Ring> {
        Self::new(RingSpec::parse(text)?)
    }

    pub fn with_bound(spec: RingSpec, bound: u64) -> Result<Ring> {
        let size = spec.size();
        if size > bound || size > u32::MAX as u64 / 2 {
            return Err(Error::SizeBound { size, bound });
        }
        let size = size as u32;
        let (arith, characteristic) = match &spec.kind {
            RingKind::PrimeField { p } => (Arith::Mod(*p), *p),
            RingKind::Residue { m } => (Arith::Mod(*m), *m),
            RingKind::GaloisField { p, k, modulus } => (Arith::Field(FieldTables::build(*p, *k, modulus)?), *p),
            RingKind::Truncated { p, k, modulus, n } => {
                (Arith::Truncated(FieldTables::build(*p, *k, modulus)?, *n as usize), *p)
            }
        };
        let mut ring = Ring {
            spec,
            size,
            characteristic,
            arith,
            negs: Vec::new(),
            invs: Vec::new(),
            units: OnceLock::new(),
        };
        ring.negs = (0..size).map(|a| ring.neg_slow(a)).collect();
        ring.invs = (0..size).map(|a| ring.inv_slow(a).unwrap_or(u32::MAX)).collect();
        Ok(ring)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size).map(RingElem)
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        RingElem(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let c = self.characteristic as i64;
        let r = n.rem_euclid(c) as u32;
        // In every supported encoding the prime-subring element r has code r.
        RingElem(r)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        match &self.arith {
            Arith::Mod(m) => (m - a % m) % m,
            Arith::Field(f) => f.neg(a),
            Arith::Truncated(f, n) => {
                let d: Vec<u32> = decode(a, f.q, *n).into_iter().map(|c| f.neg(c)).collect();
                encode(&d, f.q)
            }
        }
    }

    fn inv_slow(&self, a: u32) -> Option<u32> {
        match &self.arith {
            Arith::Mod(m) => {
                let (mut r0, mut r1) = (*m as i64, a as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                (r0 == 1).then(|| t0.rem_euclid(*m as i64) as u32)
            }
            Arith::Field(f) => f.inv(a),
            Arith::Truncated(f, n) => {
                let c = decode(a, f.q, *n);
                let c0_inv = f.inv(c[0])?;
                let mut b = vec![0u32; *n];
                b[0] = c0_inv;
                for j in 1..*n {
                    let mut s = 0u32;
                    for i in 1..=j {
                        s = f.add(s, f.mul(c[i], b[j - i]));
                    }
                    b[j] = f.neg(f.mul(c0_inv, s));
                }
                Some(encode(&b, f.q))
            }
        }
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(match &self.arith {
            Arith::Mod(m) => ((a.0 as u64 + b.0 as u64) % *m as u64) as u32,
            Arith::Field(f) => f.add(a.0, b.0),
            Arith::Truncated(f, n) => {
                if f.p == 2 {
                    a.0 ^ b.0
                } else {
                    let da = decode(a.0, f.q, *n);
                    let db = decode(b.0, f.q, *n);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| f.add(x, y)).collect();
                    encode(&s, f.q)
                }
            }
        })
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        RingElem(self.negs[a.0 as usize])
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(match &self.arith {
            Arith::Mod(m) => ((a.0 as u64 * b.0 as u64) % *m as u64) as u32,
            Arith::Field(f) => f.mul(a.0, b.0),
            Arith::Truncated(f, n) => {
                let da = decode(a.0, f.q, *n);
                let db = decode(b.0, f.q, *n);
                let mut prod = vec![0u32; *n];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate().take(*n - i) {
                        prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                    }
                }
                encode(&prod, f.q)
            }
        })
    }

    pub fn inv(&self, a: RingElem) -> Option<RingElem> {
        let i = self.invs[a.0 as usize];
        (i != u32::MAX).then_some(RingElem(i))
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.invs[a.0 as usize] != u32::MAX
    }

    /// `a / b`, defined when `b` is a unit.
    pub fn div(&self, a: RingElem, b: RingElem) -> Option<RingElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut result = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn is_field(&self) -> bool {
        matches!(self.spec.kind, RingKind::PrimeField { .. } | RingKind::GaloisField { .. })
            || matches!(self.spec.kind, RingKind::Truncated { n: 1, .. })
    }

    pub fn is_domain(&self) -> bool {
        self.is_field()
    }

    pub fn is_local(&self) -> bool {
        match &self.spec.kind {
            RingKind::Residue { m } => prime_power(*m).is_some(),
            _ => true,
        }
    }

    /// Size of A/m for local rings.
    pub fn residue_field_size(&self) -> Option<u32> {
        match &self.spec.kind {
            RingKind::PrimeField { p } => Some(*p),
            RingKind::Residue { m } => prime_power(*m).map(|(p, _)| p),
            RingKind::GaloisField { p, k, .. } | RingKind::Truncated { p, k, .. } => Some(p.pow(*k)),
        }
    }

    /// (p, d) with |A/m| = p^d.
    pub fn residue_field_params(&self) -> Option<(u32, u32)> {
        match &self.spec.kind {
            RingKind::PrimeField { p } => Some((*p, 1)),
            RingKind::Residue { m } => prime_power(*m).map(|(p, _)| (p, 1)),
            RingKind::GaloisField { p, k, .. } | RingKind::Truncated { p, k, .. } => Some((*p, *k)),
        }
    }

    pub fn units(&self) -> &UnitData {
        self.units.get_or_init(|| Arc::new(UnitData::compute(self)))
    }

    /// Installs unit tables loaded from a cache; ignored if tables are already present.
    pub fn install_units(&self, data: UnitData) {
        let _ = self.units.set(Arc::new(data));
    }

    /// Human-readable form: `x^2+1` in GF(p^k), `1+t^2` in truncated rings, residues in Z/m.
    pub fn format(&self, a: RingElem) -> String {
        match &self.arith {
            Arith::Mod(_) => a.0.to_string(),
            Arith::Field(f) => poly::to_string(&decode(a.0, f.p, f.k as usize)),
            Arith::Truncated(f, n) => {
                let coeffs = decode(a.0, f.q, *n);
                let mut parts = Vec::new();
                for (j, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let cs = poly::to_string(&decode(c, f.p, f.k as usize));
                    let cs = if f.k > 1 && cs.contains('+') { format!("({cs})") } else { cs };
                    parts.push(match (j, cs.as_str()) {
                        (0, _) => cs,
                        (1, "1") => "t".into(),
                        (_, "1") => format!("t^{j}"),
                        (1, _) => format!("{cs}t"),
                        _ => format!("{cs}t^{j}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
        }
    }

    /// Element with the given little-endian coefficients in t (truncated rings) or x (fields).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> RingElem {
        match &self.arith {
            Arith::Mod(m) => RingElem(coeffs.first().copied().unwrap_or(0) % m),
            Arith::Field(f) => RingElem(encode(coeffs, f.p) % f.q),
            Arith::Truncated(f, n) => {
                let mut c = coeffs.to_vec();
                c.resize(*n, 0);
                RingElem(encode(&c, f.q))
            }
        }
    }
}
