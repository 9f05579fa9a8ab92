//! Plain-text polynomials such as `z^2 - 3/2*x*y + (x - 1)^2`.

use super::mpoly::MPoly;
use super::ratfunc::QPoly;
use super::rational::Rational;
use crate::error::AlgebraError;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn err(&self, what: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{what} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && f(self.s[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn expr(&mut self) -> Result<QPoly, AlgebraError> {
        let n = self.vars.len();
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division by a nonconstant or zero"));
                    }
                    acc = acc.scale(&(Rational::from_int(1) / d.constant_term()));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.take_while(|c| c.is_ascii_digit());
            let e: u32 = e.parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly, AlgebraError> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let v: Rational = digits.parse()?;
                Ok(QPoly::constant(n, v))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_').to_string();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MPoly::var(n, i)),
                    None => Err(AlgebraError::Parse(format!("unknown variable {name:?}"))),
                }
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

/// Parses `text` as a polynomial in `vars` (in that variable order).
pub fn parse_qpoly(text: &str, vars: &[&str]) -> Result<QPoly, AlgebraError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_arithmetic() {
        let v = ["x", "z"];
        let p = parse_qpoly("z^2 - 3/2*x*z + (x - 1)^2", &v).unwrap();
        let pt = [Rational::from_int(2), Rational::from_int(3)];
        // 9 - 9 + 1
        assert_eq!(p.eval(&pt), Rational::from_int(1));
        assert_eq!(parse_qpoly("-x", &v).unwrap().eval(&pt), Rational::from_int(-2));
        assert!(parse_qpoly("x + w", &v).is_err());
        assert!(parse_qpoly("x / z", &v).is_err());
        assert!(parse_qpoly("x +", &v).is_err());
    }
}
