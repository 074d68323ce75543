//! Text syntax for ring elements.
//!
//! Sums and products of integers, `x`, `y`, `z+`, `z-`, `w_{m,eta}`,
//! bracketed module labels `[P(1,0)]`, and parentheses. `^k` raises a
//! factor to a power; `x` also accepts negative exponents. Juxtaposition
//! is multiplication.

use num_bigint::BigInt;

use crate::cyclo::CycField;
use crate::modcat::{EtaParam, IndecLabel};

use super::element::RingElement;
use super::RingError;

struct Parser<'a, F> {
    s: &'a [u8],
    pos: usize,
    field: &'static CycField,
    label: F,
}

fn err(msg: impl Into<String>) -> RingError {
    RingError::Parse(msg.into())
}

impl<F: FnMut(&IndecLabel) -> Result<RingElement, RingError>> Parser<'_, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(format!("expected integer at offset {start}")));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(t.parse().unwrap())
    }

    fn small(&mut self) -> Result<i64, RingError> {
        let neg = self.eat(b'-');
        let v: i64 = self.int()?.try_into().map_err(|_| err("exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    /// Text up to the bracket matching the one just consumed.
    fn balanced(&mut self, open: u8, close: u8) -> Result<&str, RingError> {
        let start = self.pos;
        let mut depth = 1;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    let t = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| err("utf-8"))?;
                    self.pos += 1;
                    return Ok(t);
                }
            }
            self.pos += 1;
        }
        Err(err(format!("unbalanced {:?}", open as char)))
    }

    fn expr(&mut self) -> Result<RingElement, RingError> {
        let mut acc = RingElement::zero();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<RingElement, RingError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'[' => {}
                _ => return Ok(acc),
            }
            acc = acc.mul(&self.power()?);
        }
    }

    fn power(&mut self) -> Result<RingElement, RingError> {
        let (base, is_x) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let k = self.small()?;
        if k >= 0 {
            return Ok(base.pow(k as u32));
        }
        if is_x {
            let n = self.field.n() as i64;
            return Ok(RingElement::xy(k.rem_euclid(n) as u32, 0));
        }
        Err(err("negative exponents are only allowed on x"))
    }

    fn atom(&mut self) -> Result<(RingElement, bool), RingError> {
        let c = self.peek().ok_or_else(|| err("unexpected end of input"))?;
        match c {
            b'0'..=b'9' => Ok((RingElement::monomial(Default::default(), self.int()?), false)),
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(format!("expected ')' at offset {}", self.pos)));
                }
                Ok((e, false))
            }
            b'[' => {
                self.pos += 1;
                let text = self.balanced(b'[', b']')?.to_string();
                let lab = IndecLabel::parse(self.field, &text).map_err(|e| err(e.to_string()))?;
                Ok(((self.label)(&lab)?, false))
            }
            b'x' => {
                self.pos += 1;
                Ok((RingElement::x(), true))
            }
            b'y' => {
                self.pos += 1;
                Ok((RingElement::y(), false))
            }
            b'z' => {
                self.pos += 1;
                match self.s.get(self.pos) {
                    Some(b'+') => {
                        self.pos += 1;
                        Ok((RingElement::z_plus(), false))
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        Ok((RingElement::z_minus(), false))
                    }
                    _ => Err(err("z must be followed by + or -")),
                }
            }
            b'w' => {
                self.pos += 1;
                if !(self.eat(b'_') && self.eat(b'{')) {
                    return Err(err("expected w_{m,eta}"));
                }
                let inner = self.balanced(b'{', b'}')?.to_string();
                let (m, eta) = split_top_comma(&inner).ok_or_else(|| err(format!("bad w index {inner:?}")))?;
                let m: u32 = m.trim().parse().map_err(|_| err(format!("bad band size {m:?}")))?;
                if m == 0 {
                    return Err(err("band size must be positive"));
                }
                let eta = EtaParam::parse(self.field, eta.trim()).map_err(|e| err(e.to_string()))?;
                Ok((RingElement::w(m, eta), false))
            }
            _ => Err(err(format!("unexpected {:?} at offset {}", c as char, self.pos))),
        }
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '{' | '[' | '(' => depth += 1,
            '}' | ']' | ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Parse a raw (unreduced) element. Bracketed labels are resolved by `label`.
pub fn parse_element(
    field: &'static CycField,
    text: &str,
    label: impl FnMut(&IndecLabel) -> Result<RingElement, RingError>,
) -> Result<RingElement, RingError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        field,
        label,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(e)
}
