use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, MultiPoly, Vars};
use crate::error::{ParseError, PolyError};
use crate::scalar::Rational;

/// Parses a sum of terms such as `x0^2 - 3/2*x0*x1 + 7` over `vars`.
///
/// A term is an optional rational coefficient followed by `*`-joined factors
/// `name` or `name^k`. A variable may appear in several factors of a term.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly<Rational>, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    p.poly()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse(ParseError::new(self.pos, msg))
    }

    fn poly(&mut self) -> Result<MultiPoly<Rational>, PolyError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return Err(self.err("empty polynomial")),
            _ => 1,
        };
        loop {
            let (m, mut c) = self.term()?;
            if sign < 0 {
                c = -c;
            }
            terms.push((m, c));
            match self.peek() {
                None => return Ok(MultiPoly::from_terms(self.vars.clone(), terms)),
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return Err(self.err(format!("unexpected {:?}", ch as char))),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational), PolyError> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.vars.len()];
        let mut first = true;
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let n = self.integer()?;
                    let mut q = Rational::from_integer(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.err("expected denominator"));
                        }
                        let d = self.integer()?;
                        if d.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        q /= Rational::from_integer(d);
                    }
                    coeff *= q;
                }
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let name = self.ident();
                    let idx = self
                        .vars
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.err("expected exponent"));
                        }
                        let k = self.integer()?;
                        e = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx] += e;
                }
                Some(ch) => {
                    let what = if first { "term" } else { "factor" };
                    return Err(self.err(format!("expected {what}, found {:?}", ch as char)));
                }
                None => return Err(self.err("unexpected end of input")),
            }
            first = false;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((Monomial(exps), coeff));
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>()
            .map_err(|_| PolyError::Parse(ParseError::new(start, "bad integer")))
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let src: &'a [u8] = self.src;
        std::str::from_utf8(&src[start..self.pos]).expect("ascii identifier")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::var_names;
    use crate::scalar::rat;

    #[test]
    fn parses_examples() {
        let v = var_names("x", 4);
        assert_eq!(parse_poly("x0*x3 - x1*x2", &v).unwrap().num_terms(), 2);
        assert!(parse_poly("0", &v).unwrap().is_zero());
        let p = parse_poly("x0^2 + 2*x0*x1", &v).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &v).unwrap(), p);
        let r = parse_poly("-1/2*x0*x0 + 3", &v).unwrap();
        assert_eq!(r.coeff(&[2, 0, 0, 0]), rat(-1, 2));
        assert_eq!(r.coeff(&[0, 0, 0, 0]), rat(3, 1));
    }

    #[test]
    fn errors_carry_position() {
        let v = var_names("x", 2);
        match parse_poly("x0 + * x1", &v) {
            Err(PolyError::Parse(e)) => assert_eq!(e.position, 5),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_poly("x0 + y", &v),
            Err(PolyError::UnknownVariable("y".into()))
        );
        assert!(matches!(parse_poly("", &v), Err(PolyError::Parse(_))));
        assert!(matches!(parse_poly("1/0*x0", &v), Err(PolyError::Parse(_))));
        assert!(matches!(parse_poly("x0 x1", &v), Err(PolyError::Parse(_))));
    }
}
