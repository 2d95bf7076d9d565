use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{BiPoly, UniPoly};

/// Recursive-descent parser for
///
/// ```text
/// sum    := ('+'|'-')? term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := atom ('^' nat)?
/// atom   := nat ('/' nat)? 'i'? | 'i' | 's' | 't' | 'L0' | 'W0'
///         | '(' sum ')' | '-' factor
/// ```
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.nat()?;
        u32::try_from(n).map_err(|_| Error::syntax(at, "exponent too large"))
    }

    fn sum(&mut self) -> Result<BiPoly> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.exponent()?;
            let mut acc = BiPoly::one();
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        let at = self.pos;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(Error::syntax(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let mut value = BigRational::from_integer(num);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den_at = self.pos;
                    let den = self.nat()?;
                    if den.is_zero() {
                        return Err(Error::syntax(den_at, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                if self.src.get(self.pos) == Some(&b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    return Ok(BiPoly::constant(Scalar::new(BigRational::zero(), value)));
                }
                Ok(BiPoly::constant(Scalar::from(value)))
            }
            Some(_) => {
                let rest = &self.src[self.pos..];
                let (len, poly) = if rest.starts_with(b"L0") {
                    (2, BiPoly::s())
                } else if rest.starts_with(b"W0") {
                    (2, BiPoly::t())
                } else {
                    match rest[0] {
                        b's' => (1, BiPoly::s()),
                        b't' => (1, BiPoly::t()),
                        b'i' => (1, BiPoly::constant(Scalar::i())),
                        _ => return Err(Error::syntax(at, "unexpected character")),
                    }
                };
                if self.ident_continues(self.pos + len) {
                    return Err(Error::syntax(self.pos, "unknown identifier"));
                }
                self.pos += len;
                Ok(poly)
            }
            None => Err(Error::syntax(self.pos, "unexpected end of input")),
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        matches!(self.src.get(at), Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
    }
}

/// Parses a polynomial in `s, t` (aliases `L0, W0`).
pub fn parse_poly(text: &str) -> Result<BiPoly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = parser.sum()?;
    if parser.peek().is_some() {
        return Err(Error::syntax(parser.pos, "unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses a polynomial in `t` (alias `W0`); `s` is rejected.
pub fn parse_unipoly(text: &str) -> Result<UniPoly> {
    let poly = parse_poly(text)?;
    poly.as_t_poly().ok_or_else(|| {
        let pos = text.find(['s', 'L']).unwrap_or(0);
        Error::syntax(pos, "expected a polynomial in t alone")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f = parse_poly("2*s^2*t - 1/2").unwrap();
        assert_eq!(
            f,
            BiPoly::from_terms([((2, 1), Scalar::int(2)), ((0, 0), Scalar::ratio(-1, 2))])
        );
        assert_eq!(parse_poly("t").unwrap(), BiPoly::t());
        assert_eq!(parse_poly("s + s").unwrap().to_string(), "2*s");
        assert_eq!(parse_poly("L0*W0^2").unwrap(), parse_poly("s*t^2").unwrap());
        assert_eq!(parse_poly("3/4i*t").unwrap().to_string(), "3/4i*t");
        assert_eq!(parse_poly("(s-1)^2").unwrap().to_string(), "s^2 - 2*s + 1");
        assert_eq!(parse_poly("-i*s").unwrap().to_string(), "-i*s");
        assert_eq!(parse_poly("2*-t").unwrap().to_string(), "-2*t");
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn unipoly_rejects_s() {
        assert_eq!(parse_unipoly("W0^2 - 2").unwrap().to_string(), "t^2 - 2");
        assert!(matches!(parse_unipoly("s + t"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse_poly("2*x"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("s +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(s"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("s t"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("sin"), Err(Error::Syntax { pos: 0, .. })));
    }
}
