//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := unary ("^" int)?
//! unary  := "-" unary | atom
//! atom   := number | "i" | ident | func "(" expr ")" | "(" expr ")"
//! func   := "conj" | "exp" | "log" | "abs2"
//! ident  := ("z"|"u") digits
//! ```
//!
//! `abs2(e)` is sugar for `e*conj(e)`. The exponent after `^` is an integer
//! literal with an optional sign, optionally parenthesized.

use alloc::string::{String, ToString};
use num_complex::Complex64;
use thiserror::Error;

use super::ast::Expr;
use super::slot::{SlotContext, SlotKind, VarSlot};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("variable `{name}` at offset {position} is out of range: {reason}")]
    OutOfRangeVariable { name: String, position: usize, reason: String },
    #[error("antiholomorphic term at offset {position} is not allowed in a holomorphic expression")]
    AntiholomorphicNotAllowed { position: usize },
}

/// Parse `text` under `ctx` into a normalized expression.
pub fn parse(text: &str, ctx: SlotContext) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("operator or end of input"));
    }
    Ok(e.normalize())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: SlotContext,
}

impl Parser<'_> {
    fn syntax(&self, expected: &str) -> ParseError {
        ParseError::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
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

    fn expect(&mut self, c: u8, what: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(what))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.factor()?);
            } else if self.eat(b'/') {
                lhs = Expr::div(lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.eat(b'^') {
            let k = self.int_exponent()?;
            return Ok(Expr::pow_int(base, k));
        }
        Ok(base)
    }

    fn int_exponent(&mut self) -> Result<i32, ParseError> {
        let parenthesized = self.eat(b'(');
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("integer exponent"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let magnitude: i32 = digits.parse().map_err(|_| ParseError::Syntax {
            position: start,
            expected: "integer exponent that fits in 32 bits".to_string(),
        })?;
        if parenthesized {
            self.expect(b')', "`)` closing the exponent")?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')', "`)`")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            _ => Err(self.syntax("number, variable, function or `(`")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        // optional exponent: e[+-]digits
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = core::str::from_utf8(&bytes[start..end]).expect("ascii literal");
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            position: start,
            expected: "decimal literal".to_string(),
        })?;
        self.pos = end;
        Ok(Expr::real(value))
    }

    fn word(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut end = start;
        while end < self.src.len() && self.src[end].is_ascii_alphanumeric() {
            end += 1;
        }
        let word = core::str::from_utf8(&self.src[start..end]).expect("ascii word");
        self.pos = end;
        match word {
            "i" => Ok(Expr::constant(Complex64::new(0.0, 1.0))),
            "conj" | "abs2" => {
                if !self.ctx.allow_antiholomorphic {
                    return Err(ParseError::AntiholomorphicNotAllowed { position: start });
                }
                let arg = self.call_argument()?;
                let conj = arg.conjugate();
                Ok(if word == "conj" { conj } else { Expr::mul(arg, conj) })
            }
            "exp" => Ok(Expr::exp(self.call_argument()?)),
            "log" => Ok(Expr::log(self.call_argument()?)),
            _ => self.variable(word, start),
        }
    }

    fn call_argument(&mut self) -> Result<Expr, ParseError> {
        self.expect(b'(', "`(` after function name")?;
        let e = self.expr()?;
        self.expect(b')', "`)` closing the function call")?;
        Ok(e)
    }

    fn variable(&mut self, word: &str, start: usize) -> Result<Expr, ParseError> {
        let (kind, digits) = match word.as_bytes()[0] {
            b'z' => (SlotKind::Z, &word[1..]),
            b'u' => (SlotKind::U, &word[1..]),
            _ => {
                self.pos = start;
                return Err(self.syntax("variable z<k> or u<a>, a function, or `i`"));
            }
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            self.pos = start;
            return Err(self.syntax("variable z<k> or u<a>, a function, or `i`"));
        }
        let out_of_range = |reason: String| ParseError::OutOfRangeVariable {
            name: word.to_string(),
            position: start,
            reason,
        };
        let index: usize = digits
            .parse()
            .map_err(|_| out_of_range("index does not fit".to_string()))?;
        let bound = match kind {
            SlotKind::Z => self.ctx.n,
            _ => {
                if !self.ctx.allow_antiholomorphic {
                    return Err(out_of_range(
                        "only base variables z<k> may appear in anchor and structure functions"
                            .to_string(),
                    ));
                }
                self.ctx.m
            }
        };
        if index == 0 || index > bound {
            return Err(out_of_range(alloc::format!("index must lie in 1..={bound}")));
        }
        Ok(Expr::var(VarSlot::new(kind, index)))
    }
}
