//! A small reader for bar and homogeneous chain expressions written the way they are displayed in
//! the literature, e.g. `[a^{-1}|b^{-1}|ab]-[b^{-1}|b|a]`, `(1,a,ab)`, `[g^{-1}_z|wz|wz]`.
//!
//! Letters other than `w`, `g`, `h` are parameters; `w` is the Weyl element; `g_S`, `h_S` are the
//! matrices g_x, h_x at the product x of the subscript letters; `1` is the identity.

use crate::chains::{BarChain, Chain, Group, HomogChain};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Letter(char),
    W,
    G(Vec<char>),
    H(Vec<char>),
    One,
    Paren(Vec<(Factor, bool)>),
}

/// A product of factors, each possibly inverted.
pub type Entry = Vec<(Factor, bool)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    /// `[..|..]` (true) or `(..,..)` (false).
    pub bar: bool,
    pub entries: Vec<Entry>,
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.i..].starts_with(lit.as_bytes()) {
            self.i += lit.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, what: &str) -> Result<T, String> {
        Err(format!("{what} at byte {} of `{}`", self.i, String::from_utf8_lossy(self.s)))
    }

    fn inverse(&mut self) -> bool {
        self.eat("^{-1}")
    }

    fn subscript(&mut self) -> Result<Vec<char>, String> {
        if !self.eat("_") {
            return self.err("expected subscript");
        }
        if self.eat("{") {
            let mut out = Vec::new();
            while let Some(c) = self.peek() {
                self.i += 1;
                if c == b'}' {
                    return Ok(out);
                }
                out.push(c as char);
            }
            self.err("unterminated subscript")
        } else {
            match self.peek() {
                Some(c) => {
                    self.i += 1;
                    Ok(vec![c as char])
                }
                None => self.err("missing subscript"),
            }
        }
    }

    fn factor(&mut self) -> Result<(Factor, bool), String> {
        let Some(c) = self.peek() else { return self.err("expected factor") };
        self.i += 1;
        let f = match c {
            b'(' => {
                let inner = self.entry()?;
                if !self.eat(")") {
                    return self.err("expected `)`");
                }
                Factor::Paren(inner)
            }
            b'1' => Factor::One,
            b'w' => Factor::W,
            b'g' | b'h' => {
                let pre = self.inverse();
                let sub = self.subscript()?;
                let post = self.inverse();
                let f = if c == b'g' { Factor::G(sub) } else { Factor::H(sub) };
                return Ok((f, pre ^ post));
            }
            c if c.is_ascii_lowercase() => Factor::Letter(c as char),
            _ => {
                self.i -= 1;
                return self.err("unexpected character");
            }
        };
        let inv = self.inverse();
        Ok((f, inv))
    }

    fn entry(&mut self) -> Result<Entry, String> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, b'|' | b']' | b',' | b')') {
                break;
            }
            out.push(self.factor()?);
        }
        if out.is_empty() {
            return self.err("empty entry");
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, String> {
        let mut coeff = 1i64;
        if self.eat("-") {
            coeff = -1;
        } else {
            self.eat("+");
        }
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if self.i > start {
            let n: i64 = std::str::from_utf8(&self.s[start..self.i]).expect("ascii").parse().expect("digits");
            coeff *= n;
        }
        let (bar, sep, close) = if self.eat("[") {
            (true, b'|', "]")
        } else if self.eat("(") {
            (false, b',', ")")
        } else {
            return self.err("expected `[` or `(`");
        };
        let mut entries = vec![self.entry()?];
        while self.peek() == Some(sep) {
            self.i += 1;
            entries.push(self.entry()?);
        }
        if !self.eat(close) {
            return self.err("unterminated tuple");
        }
        Ok(Term { coeff, bar, entries })
    }
}

pub fn parse(text: &str) -> Result<Vec<Term>, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { s: cleaned.as_bytes(), i: 0 };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.term()?);
    }
    Ok(out)
}

/// Value of an entry, given the values of the leaf factors (letters, `w`, `g_S`, `h_S`, `1`).
pub fn eval_entry<G: Group>(g: &G, e: &Entry, leaf: &dyn Fn(&Factor) -> G::Elem) -> G::Elem {
    let mut acc = g.identity();
    for (f, inv) in e {
        let v = match f {
            Factor::Paren(inner) => eval_entry(g, inner, leaf),
            Factor::One => g.identity(),
            other => leaf(other),
        };
        acc = g.mul(acc, if *inv { g.inv(v) } else { v });
    }
    acc
}

/// Evaluates bar terms into a normalized bar chain of the given degree.
pub fn eval_bar<G: Group>(g: &G, terms: &[Term], leaf: &dyn Fn(&Factor) -> G::Elem) -> BarChain<G::Elem> {
    let degree = terms.first().map_or(0, |t| t.entries.len());
    let mut out = BarChain::zero(degree);
    for t in terms {
        assert!(t.bar, "expected bar terms");
        out.bar_term(g, t.entries.iter().map(|e| eval_entry(g, e, leaf)).collect(), t.coeff);
    }
    out
}

pub fn eval_homog<G: Group>(g: &G, terms: &[Term], leaf: &dyn Fn(&Factor) -> G::Elem) -> HomogChain<G::Elem> {
    let degree = terms.first().map_or(0, |t| t.entries.len() - 1);
    let mut out = Chain::zero(degree);
    for t in terms {
        assert!(!t.bar, "expected homogeneous terms");
        out.homog_term(t.entries.iter().map(|e| eval_entry(g, e, leaf)).collect(), t.coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_displayed_forms() {
        let t = parse("[a^{-1}b^{-1}|ab] - 2[(abc)^{-1}|c]").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].entries[0], vec![(Factor::Letter('a'), true), (Factor::Letter('b'), true)]);
        assert_eq!(t[1].coeff, -2);
        assert!(matches!(&t[1].entries[0][0], (Factor::Paren(_), true)));
        let t = parse("[g^{-1}_{ab}|h_z|g_1]+(1,wa,wab)").unwrap();
        assert_eq!(t[0].entries[0], vec![(Factor::G(vec!['a', 'b']), true)]);
        assert_eq!(t[0].entries[1], vec![(Factor::H(vec!['z']), false)]);
        assert_eq!(t[0].entries[2], vec![(Factor::G(vec!['1']), false)]);
        assert!(!t[1].bar);
        assert_eq!(t[1].entries[2], vec![(Factor::W, false), (Factor::Letter('a'), false), (Factor::Letter('b'), false)]);
        assert!(parse("[a|").is_err());
        assert!(parse("[a|?]").is_err());
    }
}
