//! Numeric arguments: plain numbers, fractions and small expressions such as
//! `ln2`, `1.5*ln(3)`, `2^-1`, `pi/4`.

use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let r = self.term()?;
            v = if op == b'+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == b'*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.s.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.s.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.s.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("bad number"))
    }

    fn primary(&mut self) -> Result<f64> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected )"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let f: fn(f64) -> f64 = match name {
                    "pi" => return Ok(std::f64::consts::PI),
                    "e" => return Ok(std::f64::consts::E),
                    "ln" | "log" => f64::ln,
                    "exp" => f64::exp,
                    "sqrt" => f64::sqrt,
                    _ => return Err(self.err(&format!("unknown name {name:?}"))),
                };
                // `ln2` applies to the number that follows; `ln(…)` to the group.
                Ok(f(self.primary()?))
            }
            _ => Err(self.err("expected a number")),
        }
    }
}

pub fn eval(src: &str) -> Result<f64> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
        src,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    if !v.is_finite() {
        return Err(Error::Parse(format!("{src:?} is not finite")));
    }
    Ok(v)
}

pub fn eval_list(src: &str) -> Result<Vec<f64>> {
    src.split(',').map(eval).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        assert_eq!(eval("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(eval("ln2").unwrap(), 2f64.ln());
        assert_eq!(eval("1.5*ln(3)").unwrap(), 1.5 * 3f64.ln());
        assert_eq!(eval("2^-1").unwrap(), 0.5);
        assert_eq!(eval("-2^2").unwrap(), -4.0);
        assert_eq!(eval("1e-3").unwrap(), 1e-3);
        assert_eq!(eval("2 * e").unwrap(), 2.0 * std::f64::consts::E);
        assert_eq!(eval_list("ln2, ln3").unwrap(), vec![2f64.ln(), 3f64.ln()]);
        assert!(eval("ln").is_err());
        assert!(eval("1/0").is_err());
        assert!(eval("2 3").is_err());
        assert!(eval("foo").is_err());
    }
}
