//! Text syntax for words.
//!
//! ```text
//! word := term ('*' term)*
//! term := atom ('^' int)?
//! atom := 'y' int | 'x' int | 'x[' dyadic ',' dyadic ']_' int
//!       | 'comm(' word ',' word ')' | 'conj(' word ',' word ')' | '(' word ')'
//! ```
//!
//! `comm(A,B)` is `A^-1 B^-1 A B` and `conj(A,B)` is `B^-1 A B`. As small
//! extensions, a bare `y` means `y1` and `1` is the empty word.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::DyadicInterval;
use crate::plmap::PLMap;
use crate::words::{Constant, Letter, Word};

/// Parses and reduces a word.
pub fn parse(text: &str) -> Result<Word> {
    let (letters, arity) = parse_letters(text)?;
    Ok(Word::new(letters, arity))
}

/// Parses without reducing; returns the letters and the largest variable index.
pub fn parse_letters(text: &str) -> Result<(Vec<Letter>, u32)> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, max_var: 0 };
    p.skip_ws();
    if p.at_end() {
        return Ok((Vec::new(), 1));
    }
    let letters = p.word()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok((letters, p.max_var.max(1)))
}

/// Parses a word that must be constant and returns its value.
pub fn parse_element(text: &str) -> Result<PLMap> {
    let w = parse(text)?;
    if !w.is_constant() {
        return Err(Error::Precondition(format!("{text:?} contains variables; expected an element of F")));
    }
    Ok(w.constants_product().0)
}

/// Prints a word in the DSL; `parse(format(w)) == w` for reduced words.
pub fn format(w: &Word) -> String {
    if w.is_trivial() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (i, l) in w.letters().iter().enumerate() {
        if i > 0 {
            out.push_str(" * ");
        }
        match l {
            Letter::Var { index, power } => {
                out.push_str(&format!("y{index}"));
                if *power != 1 {
                    out.push_str(&format!("^{power}"));
                }
            }
            Letter::Const(c) => out.push_str(&c.text()),
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_var: u32,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { position: self.pos, message: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<Vec<Letter>> {
        let mut letters = self.term()?;
        while self.eat(b'*') {
            letters.extend(self.term()?);
        }
        Ok(letters)
    }

    fn term(&mut self) -> Result<Vec<Letter>> {
        let atom = self.atom()?;
        if !self.eat(b'^') {
            return Ok(atom);
        }
        let p = self.int()?;
        Ok(power(atom, p))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Parse { position: start, message: "expected an integer".to_string() })
    }

    fn index(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Parse { position: start, message: "expected an index".to_string() })
    }

    fn dyadic(&mut self, stop: u8) -> Result<Dyadic> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c != stop) {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| Error::Parse { position: start, message: format!("bad dyadic {text:?}") })
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        self.skip_ws();
        let start = self.pos;
        if self.keyword("comm(") || self.keyword("conj(") {
            let is_comm = &self.src[start..start + 4] == b"comm";
            let a = self.word()?;
            self.expect(b',')?;
            let b = self.word()?;
            self.expect(b')')?;
            let (ai, bi) = (invert(&a), invert(&b));
            let mut out = Vec::new();
            if is_comm {
                out.extend(ai);
                out.extend(bi);
                out.extend(a);
                out.extend(b);
            } else {
                out.extend(bi);
                out.extend(a);
                out.extend(b);
            }
            return Ok(out);
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(b'y') => {
                self.pos += 1;
                let index = if self.peek().is_some_and(|c| c.is_ascii_digit()) { self.index()? } else { 1 };
                if index == 0 {
                    return Err(Error::Parse { position: start, message: "variables are numbered from 1".to_string() });
                }
                self.max_var = self.max_var.max(index);
                Ok(alloc::vec![Letter::var(index, 1)])
            }
            Some(b'x') => {
                self.pos += 1;
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let a = self.dyadic(b',')?;
                    self.expect(b',')?;
                    let b = self.dyadic(b']')?;
                    self.expect(b']')?;
                    self.expect(b'_')?;
                    self.skip_ws();
                    let n = self.index()?;
                    let iv = DyadicInterval::closed(a, b).map_err(|e| Error::Parse { position: start, message: e.to_string() })?;
                    let map = PLMap::subgroup_generator(&iv, n)
                        .map_err(|e| Error::Parse { position: start, message: e.to_string() })?;
                    let label = format!("x[{},{}]_{n}", iv.lo, iv.hi);
                    return Ok(alloc::vec![Letter::Const(Constant::labelled(map, label))]);
                }
                let n = self.index()?;
                Ok(alloc::vec![Letter::Const(Constant::labelled(PLMap::generator(n), format!("x{n}")))])
            }
            _ => Err(self.error("expected `x`, `y`, `comm(`, `conj(` or `(`")),
        }
    }
}

fn invert(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(Letter::inverse).collect()
}

fn power(letters: Vec<Letter>, p: i64) -> Vec<Letter> {
    if let [single] = letters.as_slice() {
        return match single {
            Letter::Var { index, power } => alloc::vec![Letter::var(*index, power * p)],
            Letter::Const(c) => alloc::vec![Letter::Const(c.pow(p))],
        };
    }
    let base = if p < 0 { invert(&letters) } else { letters };
    let mut out = Vec::with_capacity(base.len() * p.unsigned_abs() as usize);
    for _ in 0..p.unsigned_abs() {
        out.extend(base.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_words() {
        let w1 = parse("y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1").unwrap();
        assert_eq!(w1.letters().len(), 6);
        assert_eq!(format(&w1), "y1 * x1 * y1^-1 * x2 * y1^2 * x1^-1");
        let c = parse("x[0,1/2]_0").unwrap();
        let half: DyadicInterval = "[0,1/2]".parse().unwrap();
        assert_eq!(c.constants_product().0, PLMap::subgroup_generator(&half, 0).unwrap());
        assert!(parse("").unwrap().is_trivial());
        assert!(parse("   ").unwrap().is_trivial());
    }

    #[test]
    fn sugar() {
        assert_eq!(parse("comm(y1, x1)").unwrap(), parse("y1^-1 * x1^-1 * y1 * x1").unwrap());
        assert_eq!(parse("conj(x1, y2)").unwrap(), parse("y2^-1 * x1 * y2").unwrap());
        assert_eq!(parse("(y1 * x0)^-2").unwrap(), parse("x0^-1 * y1^-1 * x0^-1 * y1^-1").unwrap());
        assert_eq!(parse("y^3").unwrap(), parse("y1^3").unwrap());
        assert_eq!(parse("x0^-1*x1*x0").unwrap(), parse("x2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("y1 * z2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("y1 *").is_err());
        assert!(parse("x[1/2,1/4]_0").is_err());
        assert!(parse("y0").is_err());
        assert!(parse("comm(y1, x1").is_err());
    }

    #[test]
    fn round_trip_with_unlabelled_constants() {
        let f = PLMap::generator(0).compose(&PLMap::generator(3).invert());
        let w = Word::new(alloc::vec![Letter::var(1, 2), Letter::constant(f), Letter::var(2, -1)], 2);
        assert_eq!(parse(&format(&w)).unwrap(), w);
        let merged = parse("y1 * x0 * x1 * x0^-1 * y2").unwrap();
        assert_eq!(format(&merged), "y1 * x0 * x1 * x0^-1 * y2");
        assert_eq!(parse(&format(&merged)).unwrap(), merged);
    }

    #[test]
    fn elements() {
        assert_eq!(parse_element("x0^-1 * x1 * x0").unwrap(), PLMap::generator(2));
        assert!(parse_element("y1").is_err());
    }
}
