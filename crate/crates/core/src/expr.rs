//! Element expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := coeff ['*' atom] | atom
//! coeff  := int ['/' int]
//! atom   := 'a[' name '](' int ')' | 'a1[' name '](' int ')' | name '(' int ')'
//!         | 'k+' | 'k-'                        (g_p)
//!         | 'd(' int ')' | 'e(' int ')' | 'c'  (Witt / L_p)
//! ```
//! A bare `name(n)` is the plain symbol `a[name](n)`.

use crate::error::{Error, Result};
use crate::lie::StructureConstants;
use crate::scalar::Scalar;
use crate::threepoint::{GpElement, GpSymbol, WittElement, WittSymbol};

enum Atom {
    Gp(GpSymbol),
    KPlus,
    KMinus,
    Witt(WittSymbol),
    Central,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::ParseExpr(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn unsigned(&mut self) -> Result<Option<Scalar>> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let mut text = self.src[start..self.pos].to_string();
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            let d0 = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if d0 == self.pos {
                self.pos = save;
            } else {
                text.push('/');
                text.push_str(&self.src[d0..self.pos]);
            }
        }
        text.parse::<Scalar>().map(Some).map_err(|e| self.err(&e.to_string()))
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| !c.is_whitespace() && !"()[]*".contains(c))
        {
            self.pos += self.peek().map_or(1, char::len_utf8);
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn bracketed_name(&mut self) -> Result<String> {
        self.expect('[')?;
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c != ']') {
            self.pos += self.peek().map_or(1, char::len_utf8);
        }
        let name = self.src[start..self.pos].trim().to_string();
        self.expect(']')?;
        Ok(name)
    }

    fn degree(&mut self) -> Result<i64> {
        self.expect('(')?;
        let n = self.int()?;
        self.expect(')')?;
        Ok(n)
    }

    fn atom(&mut self, alg: Option<&StructureConstants>) -> Result<Atom> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let lookup = |name: &str, p: &Parser| -> Result<usize> {
            let alg = alg.ok_or_else(|| p.err("algebra symbols need an algebra"))?;
            alg.index_of(name)
                .ok_or_else(|| p.err(&format!("unknown basis element {name:?}")))
        };
        if rest.starts_with("a1[") {
            self.pos += 2;
            let name = self.bracketed_name()?;
            let base = lookup(&name, self)?;
            return Ok(Atom::Gp(GpSymbol::bar(base, self.degree()?)));
        }
        if rest.starts_with("a[") {
            self.pos += 1;
            let name = self.bracketed_name()?;
            let base = lookup(&name, self)?;
            return Ok(Atom::Gp(GpSymbol::plain(base, self.degree()?)));
        }
        if rest.starts_with("k+") {
            self.pos += 2;
            return Ok(Atom::KPlus);
        }
        if rest.starts_with("k-") {
            self.pos += 2;
            return Ok(Atom::KMinus);
        }
        let name = self.name()?;
        if name == "c" && !self.src[self.pos..].trim_start().starts_with('(') {
            return Ok(Atom::Central);
        }
        let n = self.degree()?;
        match (alg, name.as_str()) {
            (None, "d") => Ok(Atom::Witt(WittSymbol::d(n))),
            (None, "e") => Ok(Atom::Witt(WittSymbol::e(n))),
            (Some(_), _) => Ok(Atom::Gp(GpSymbol::plain(lookup(&name, self)?, n))),
            (None, other) => Err(self.err(&format!("unknown symbol {other:?}"))),
        }
    }

    fn terms(&mut self, alg: Option<&StructureConstants>) -> Result<Vec<(Scalar, Option<Atom>)>> {
        let mut out = Vec::new();
        let mut sign = Scalar::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        loop {
            let coeff = self.unsigned()?;
            let atom = match coeff {
                Some(_) if self.eat('*') => Some(self.atom(alg)?),
                Some(_) => None,
                None => Some(self.atom(alg)?),
            };
            let c = coeff.unwrap_or_else(Scalar::one) * &sign;
            out.push((c, atom));
            self.skip_ws();
            if self.pos == self.src.len() {
                return Ok(out);
            }
            sign = if self.eat('+') {
                Scalar::one()
            } else if self.eat('-') {
                -Scalar::one()
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
        }
    }
}

/// Parse an element of `g_p` over `alg`.
pub fn parse_gp(src: &str, alg: &StructureConstants) -> Result<GpElement> {
    let mut p = Parser::new(src);
    let mut out = GpElement::zero();
    for (c, atom) in p.terms(Some(alg))? {
        let term = match atom {
            Some(Atom::Gp(s)) => GpElement::symbol(s),
            Some(Atom::KPlus) => GpElement::k_plus(),
            Some(Atom::KMinus) => GpElement::k_minus(),
            Some(_) => return Err(Error::ParseExpr(format!("Witt symbol in g_p expression {src:?}"))),
            None => {
                return Err(Error::ParseExpr(format!(
                    "bare scalar in g_p expression {src:?}; write it as a multiple of k+ or k-"
                )))
            }
        };
        out = &out + &term.scale(&c);
    }
    Ok(out)
}

/// Parse an element of `W_p` / `L_p`.
pub fn parse_witt(src: &str) -> Result<WittElement> {
    let mut p = Parser::new(src);
    let mut out = WittElement::zero();
    for (c, atom) in p.terms(None)? {
        let term = match atom {
            Some(Atom::Witt(s)) => WittElement::symbol(s),
            Some(Atom::Central) => WittElement::from_terms([], Scalar::one()),
            _ => return Err(Error::ParseExpr(format!("not a Witt expression: {src:?}"))),
        };
        out = &out + &term.scale(&c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gp_forms() {
        let g = StructureConstants::sl2();
        let x = parse_gp("h(2)", &g).unwrap();
        assert_eq!(x, GpElement::symbol(GpSymbol::plain(2, 2)));
        let y = parse_gp("a1[h](-3)", &g).unwrap();
        assert_eq!(y, GpElement::symbol(GpSymbol::bar(2, -3)));
        let z = parse_gp("-3/2*a[x+](1) + k+ - 2*k-", &g).unwrap();
        assert_eq!(z.display(&g), "-3/2*a[x+](1) + k+ - 2*k-");
        let w = parse_gp("x-(0) - a1[x+](-1)", &g).unwrap();
        assert_eq!(w.display(&g), "a[x-](0) - a1[x+](-1)");
    }

    #[test]
    fn parses_witt_forms() {
        let w = parse_witt("d(1) - 4*e(-2) + 1/2*c").unwrap();
        assert_eq!(w.to_string(), "d(1) - 4*e(-2) + 1/2*c");
    }

    #[test]
    fn rejects_garbage() {
        let g = StructureConstants::sl2();
        assert!(matches!(parse_gp("q(1)", &g), Err(Error::ParseExpr(_))));
        assert!(parse_gp("h(2", &g).is_err());
        assert!(parse_gp("h(2) h(3)", &g).is_err());
        assert!(parse_gp("3", &g).is_err());
        assert!(parse_witt("d(1) + k+").is_err());
        assert!(parse_witt("f(2)").is_err());
    }
}
