use num_complex::Complex64;
use thiserror::Error;

use super::ast::{Expr, Node};
use super::slot::{SlotKind, VarSlot};
use crate::calculus::Point;
use crate::fmath::ComplexMath;

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("variable {0} is outside the point's dimensions")]
    SlotOutOfRange(VarSlot),
}

impl EvalError {
    /// Domain errors are the mathematical failures (as opposed to a point of
    /// the wrong dimension).
    pub fn is_domain(&self) -> bool {
        !matches!(self, EvalError::SlotOutOfRange(_))
    }
}

impl Expr {
    /// Evaluate at `p`; barred slots read the conjugates of `p`'s entries.
    pub fn evaluate(&self, p: &Point) -> Result<Complex64, EvalError> {
        self.eval_with(&|s: VarSlot| {
            let i = s.index.checked_sub(1)?;
            match s.kind {
                SlotKind::Z => p.z.get(i).copied(),
                SlotKind::ZBar => p.z.get(i).map(|c| c.conj()),
                SlotKind::U => p.u.get(i).copied(),
                SlotKind::UBar => p.u.get(i).map(|c| c.conj()),
            }
        })
    }

    /// Evaluate with an arbitrary slot valuation (slots need not be
    /// conjugate-consistent).
    pub fn eval_with<F>(&self, lookup: &F) -> Result<Complex64, EvalError>
    where
        F: Fn(VarSlot) -> Option<Complex64>,
    {
        let zero = Complex64::new(0.0, 0.0);
        Ok(match self.node() {
            Node::Const(c) => *c,
            Node::Var(s) => lookup(*s).ok_or(EvalError::SlotOutOfRange(*s))?,
            Node::Add(a, b) => a.eval_with(lookup)? + b.eval_with(lookup)?,
            Node::Sub(a, b) => a.eval_with(lookup)? - b.eval_with(lookup)?,
            Node::Mul(a, b) => a.eval_with(lookup)? * b.eval_with(lookup)?,
            Node::Div(a, b) => {
                let num = a.eval_with(lookup)?;
                let den = b.eval_with(lookup)?;
                if den == zero {
                    return Err(EvalError::DivisionByZero);
                }
                num / den
            }
            Node::Neg(a) => -a.eval_with(lookup)?,
            Node::PowInt(a, k) => {
                let base = a.eval_with(lookup)?;
                if base == zero && *k < 0 {
                    return Err(EvalError::ZeroToNegativePower);
                }
                base.powi(*k)
            }
            Node::Exp(a) => a.eval_with(lookup)?.cexp(),
            Node::Log(a) => {
                let v = a.eval_with(lookup)?;
                if v == zero {
                    return Err(EvalError::LogOfZero);
                }
                v.cln()
            }
            Node::Conj(a) => a.eval_with(lookup)?.conj(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn modulus_squared() {
        let e = Expr::mul(Expr::var(VarSlot::u(1)), Expr::var(VarSlot::ubar(1)));
        let p = Point::new(vec![], vec![c(3.0, 4.0)]);
        assert_eq!(e.evaluate(&p).unwrap(), c(25.0, 0.0));
    }

    #[test]
    fn exponential_of_modulus() {
        let e = Expr::exp(Expr::mul(Expr::var(VarSlot::z(1)), Expr::var(VarSlot::zbar(1))));
        let p = Point::new(vec![c(0.3, 0.4)], vec![]);
        let v = e.evaluate(&p).unwrap();
        assert!((v - c(1.2840254166877414, 0.0)).modulus() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = Point::new(vec![], vec![c(0.0, 0.0)]);
        let div = Expr::div(Expr::one(), Expr::var(VarSlot::u(1)));
        assert_eq!(div.evaluate(&p), Err(EvalError::DivisionByZero));
        let log = Expr::log(Expr::var(VarSlot::u(1)));
        assert_eq!(log.evaluate(&p), Err(EvalError::LogOfZero));
        let pow = Expr::pow_int(Expr::var(VarSlot::u(1)), -2);
        assert_eq!(pow.evaluate(&p), Err(EvalError::ZeroToNegativePower));
        let missing = Expr::var(VarSlot::z(2));
        assert_eq!(missing.evaluate(&p), Err(EvalError::SlotOutOfRange(VarSlot::z(2))));
    }
}
