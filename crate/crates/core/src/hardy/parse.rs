//! Text syntax for expressions: sums of `c*t^a*log(t)^b` with `a` a decimal
//! or rational literal (`3/2`, optionally braced as `{3/2}`) and `b` an
//! integer. Examples: `t^{3/2} + 2*t + 1`, `t*log(t)`, `t/log(t)`,
//! `log(t)^2 - 4`.

use super::{HardyError, HardyExpr, HardyTerm};
use crate::scalar::Scalar;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

pub fn parse_expr(input: &str) -> Result<HardyExpr, HardyError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(HardyError::Parse(format!(
            "unexpected input at position {}",
            p.pos
        )));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HardyError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(HardyError::Parse(format!("expected '{c}' at {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<HardyExpr, HardyError> {
        self.skip_ws();
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            let _ = self.eat('+');
        }
        let mut acc = {
            let t = self.term()?;
            if neg {
                t.neg()
            } else {
                t
            }
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<HardyExpr, HardyError> {
        let mut coeff = Scalar::one();
        let mut alpha = Scalar::zero();
        let mut beta: i64 = 0;
        self.factor(&mut coeff, &mut alpha, &mut beta, false)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut alpha, &mut beta, false)?;
                }
                Some('/') => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut alpha, &mut beta, true)?;
                }
                _ => break,
            }
        }
        if beta.unsigned_abs() > i32::MAX as u64 {
            return Err(HardyError::Parse("log power out of range".to_string()));
        }
        Ok(HardyExpr::from_terms(alloc::vec![HardyTerm::new(
            coeff,
            alpha,
            beta as i32
        )]))
    }

    fn factor(
        &mut self,
        coeff: &mut Scalar,
        alpha: &mut Scalar,
        beta: &mut i64,
        invert: bool,
    ) -> Result<(), HardyError> {
        self.skip_ws();
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                let e = if self.eat('^') {
                    self.exponent()?
                } else {
                    Scalar::one()
                };
                *alpha = if invert { alpha.sub(e) } else { alpha.add(e) };
                Ok(())
            }
            Some('l') => {
                let rest: alloc::string::String = self.chars[self.pos..].iter().take(6).collect();
                if rest != "log(t)" {
                    return Err(HardyError::Parse(format!(
                        "expected log(t) at {}",
                        self.pos
                    )));
                }
                self.pos += 6;
                let e = if self.eat('^') {
                    let braced = self.eat('{');
                    let s = self.signed_rational()?;
                    if braced {
                        self.expect('}')?;
                    }
                    s.as_integer().ok_or_else(|| {
                        HardyError::Parse("log power must be an integer".to_string())
                    })?
                } else {
                    1
                };
                *beta += if invert { -e } else { e };
                Ok(())
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                *coeff = if invert { coeff.div(v) } else { coeff.mul(v) };
                Ok(())
            }
            _ => Err(HardyError::Parse(format!("expected factor at {}", self.pos))),
        }
    }

    /// exponent := '{' rational '}' | signed decimal. Rationals need the
    /// braces: an unbraced `t^2/2` reads as `(t^2)/2`.
    fn exponent(&mut self) -> Result<Scalar, HardyError> {
        self.skip_ws();
        if self.eat('{') {
            let v = self.signed_rational()?;
            self.expect('}')?;
            Ok(v)
        } else {
            let neg = self.eat('-');
            let n = self.number()?;
            Ok(if neg { n.neg() } else { n })
        }
    }

    fn signed_rational(&mut self) -> Result<Scalar, HardyError> {
        self.skip_ws();
        let neg = self.eat('-');
        let n = self.number()?;
        let v = if self.eat('/') {
            let d = self.number()?;
            if d.is_zero() {
                return Err(HardyError::Parse("division by zero".to_string()));
            }
            n.div(d)
        } else {
            n
        };
        Ok(if neg { v.neg() } else { v })
    }

    /// Unsigned decimal literal, kept exact as a rational d/10^k.
    fn number(&mut self) -> Result<Scalar, HardyError> {
        self.skip_ws();
        let start = self.pos;
        let mut int_part: i64 = 0;
        let mut frac_num: i64 = 0;
        let mut frac_den: i64 = 1;
        let mut seen_digit = false;
        while let Some(c) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                seen_digit = true;
                int_part = int_part
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as i64))
                    .ok_or_else(|| HardyError::Parse("integer literal overflow".to_string()))?;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            while let Some(c) = self.peek() {
                if let Some(d) = c.to_digit(10) {
                    seen_digit = true;
                    match (frac_num.checked_mul(10), frac_den.checked_mul(10)) {
                        (Some(n), Some(dd)) => {
                            frac_num = n + d as i64;
                            frac_den = dd;
                        }
                        _ => {
                            return Err(HardyError::Parse("decimal literal too long".to_string()))
                        }
                    }
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        if !seen_digit {
            return Err(HardyError::Parse(format!("expected number at {start}")));
        }
        Ok(Scalar::from_int(int_part).add(Scalar::from_ratio(frac_num, frac_den)))
    }
}
