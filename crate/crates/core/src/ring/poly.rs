//! Dense polynomials over the prime field GF(p), coefficients little-endian.

/// Default moduli for GF(2^k), k = 1..=8, as little-endian coefficient vectors.
///
/// | k | modulus |
/// |---|---------|
/// | 1 | x |
/// | 2 | x^2+x+1 |
/// | 3 | x^3+x+1 |
/// | 4 | x^4+x+1 |
/// | 5 | x^5+x^2+1 |
/// | 6 | x^6+x+1 |
/// | 7 | x^7+x+1 |
/// | 8 | x^8+x^4+x^3+x+1 |
///
/// Any other (p, k) falls back to the first monic irreducible polynomial of degree k in
/// ascending order of its little-endian base-p encoding.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    if p == 2 {
        let table: Option<&[u32]> = match k {
            1 => Some(&[0, 1]),
            2 => Some(&[1, 1, 1]),
            3 => Some(&[1, 1, 0, 1]),
            4 => Some(&[1, 1, 0, 0, 1]),
            5 => Some(&[1, 0, 1, 0, 0, 1]),
            6 => Some(&[1, 1, 0, 0, 0, 0, 1]),
            7 => Some(&[1, 1, 0, 0, 0, 0, 0, 1]),
            8 => Some(&[1, 1, 0, 1, 1, 0, 0, 0, 1]),
            _ => None,
        };
        if let Some(t) = table {
            return t.to_vec();
        }
    }
    first_irreducible(p, k)
}

pub fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f = digits(code, p, k as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo `f` over GF(p).
pub fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let q = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - df;
        for (i, &c) in f.iter().enumerate() {
            let sub = q * c as u64 % p as u64;
            r[i + shift] = ((r[i + shift] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    for dg in 1..=d / 2 {
        let count = (p as u64).pow(dg as u32);
        for code in 0..count {
            let mut g = digits(code, p, dg);
            g.push(1);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Parses `x^3+x+1`, `2x^2+1`, `2*x^2 - x + 1` and similar sums of monomials in `x`.
pub fn parse(s: &str, p: u32) -> Result<Vec<u32>, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push((negative, std::mem::take(&mut current)));
            negative = ch == '-';
        } else if ch == '-' {
            negative = true;
        } else if ch != '+' {
            current.push(ch);
        }
    }
    terms.push((negative, current));

    let mut coeffs: Vec<u64> = Vec::new();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(format!("empty term in `{s}`"));
        }
        let (coef, exp) = match term.find('x') {
            None => (term.parse::<u64>().map_err(|e| e.to_string())?, 0usize),
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<u64>().map_err(|e| e.to_string())? };
                let rest = &term[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else if let Some(num) = rest.strip_prefix('^') {
                    num.parse::<usize>().map_err(|e| e.to_string())?
                } else {
                    return Err(format!("bad monomial `{term}`"));
                };
                (c, e)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        let c = coef % p as u64;
        coeffs[exp] = if neg {
            (coeffs[exp] + p as u64 - c) % p as u64
        } else {
            (coeffs[exp] + c) % p as u64
        };
    }
    Ok(trim(coeffs.into_iter().map(|c| c as u32).collect()))
}

pub fn to_string(f: &[u32]) -> String {
    let mut parts = Vec::new();
    for (e, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match e {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{e}"),
        };
        parts.push(match (c, e) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}
