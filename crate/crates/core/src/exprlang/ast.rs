use alloc::sync::Arc;
use core::fmt;

use num_complex::Complex64;

use super::slot::VarSlot;
use crate::fmath::ComplexMath;

/// Expression node. Children are shared [`Expr`] handles.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    Var(VarSlot),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    PowInt(Expr, i32),
    Exp(Expr),
    Log(Expr),
    Conj(Expr),
}

/// Immutable, cheaply clonable expression tree.
///
/// The constructors below apply light simplification only: constant
/// folding and the 0/1 identities. No canonical form is attempted.
#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Expr {
    pub fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn var(slot: VarSlot) -> Self {
        Self::from_node(Node::Var(slot))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(ZERO)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(ONE)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x + y),
            (Some(x), _) if x == ZERO => b,
            (_, Some(y)) if y == ZERO => a,
            _ => Expr::from_node(Node::Add(a, b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x - y),
            (_, Some(y)) if y == ZERO => a,
            (Some(x), _) if x == ZERO => Expr::neg(b),
            _ => Expr::from_node(Node::Sub(a, b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x * y),
            (Some(x), _) if x == ZERO => Expr::zero(),
            (_, Some(y)) if y == ZERO => Expr::zero(),
            (Some(x), _) if x == ONE => b,
            (_, Some(y)) if y == ONE => a,
            _ => Expr::from_node(Node::Mul(a, b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != ZERO => Expr::constant(x / y),
            (Some(x), _) if x == ZERO => Expr::zero(),
            (_, Some(y)) if y == ONE => a,
            _ => Expr::from_node(Node::Div(a, b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a.node() {
            Node::Const(c) => Expr::constant(-*c),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::from_node(Node::Neg(a)),
        }
    }

    pub fn pow_int(base: Expr, exponent: i32) -> Expr {
        if exponent == 0 {
            return Expr::one();
        }
        if exponent == 1 {
            return base;
        }
        match base.as_const() {
            Some(c) if c != ZERO || exponent > 0 => Expr::constant(c.powi(exponent)),
            _ => Expr::from_node(Node::PowInt(base, exponent)),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        match a.as_const() {
            Some(c) => Expr::constant(c.cexp()),
            None => Expr::from_node(Node::Exp(a)),
        }
    }

    pub fn log(a: Expr) -> Expr {
        match a.as_const() {
            Some(c) if c != ZERO => Expr::constant(c.cln()),
            _ => Expr::from_node(Node::Log(a)),
        }
    }

    /// Raw conjugation node, as produced before normalization.
    pub fn conj_node(a: Expr) -> Expr {
        Expr::from_node(Node::Conj(a))
    }

    /// Sum of an iterator of expressions.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), Expr::add)
    }

    /// Conjugate with the conjugation pushed to the leaves.
    ///
    /// Variables swap `z <-> z̄` and `u <-> ū`; constants are conjugated.
    /// The input may itself contain `Conj` nodes.
    pub fn conjugate(&self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(c.conj()),
            Node::Var(s) => Expr::var(s.conjugate()),
            Node::Add(a, b) => Expr::add(a.conjugate(), b.conjugate()),
            Node::Sub(a, b) => Expr::sub(a.conjugate(), b.conjugate()),
            Node::Mul(a, b) => Expr::mul(a.conjugate(), b.conjugate()),
            Node::Div(a, b) => Expr::div(a.conjugate(), b.conjugate()),
            Node::Neg(a) => Expr::neg(a.conjugate()),
            Node::PowInt(a, k) => Expr::pow_int(a.conjugate(), *k),
            Node::Exp(a) => Expr::exp(a.conjugate()),
            Node::Log(a) => Expr::log(a.conjugate()),
            Node::Conj(a) => a.normalize(),
        }
    }

    /// Remove every `Conj` node by pushing conjugation to the leaves.
    pub fn normalize(&self) -> Expr {
        if self.is_normalized() {
            return self.clone();
        }
        match self.node() {
            Node::Const(_) | Node::Var(_) => self.clone(),
            Node::Add(a, b) => Expr::add(a.normalize(), b.normalize()),
            Node::Sub(a, b) => Expr::sub(a.normalize(), b.normalize()),
            Node::Mul(a, b) => Expr::mul(a.normalize(), b.normalize()),
            Node::Div(a, b) => Expr::div(a.normalize(), b.normalize()),
            Node::Neg(a) => Expr::neg(a.normalize()),
            Node::PowInt(a, k) => Expr::pow_int(a.normalize(), *k),
            Node::Exp(a) => Expr::exp(a.normalize()),
            Node::Log(a) => Expr::log(a.normalize()),
            Node::Conj(a) => a.conjugate(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |e| {
            if matches!(e.node(), Node::Conj(_)) {
                ok = false;
            }
        });
        ok
    }

    pub fn contains_slot(&self, slot: VarSlot) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Node::Var(s) = e.node() {
                if *s == slot {
                    found = true;
                }
            }
        });
        found
    }

    /// Calls `f` on every node, parents before children.
    pub fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self.node() {
            Node::Const(_) | Node::Var(_) => {}
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Node::Neg(a) | Node::PowInt(a, _) | Node::Exp(a) | Node::Log(a) | Node::Conj(a) => {
                a.visit(f)
            }
        }
    }

    /// Replace variables. `f` returns `Some(replacement)` for slots to swap.
    pub fn substitute<F: Fn(VarSlot) -> Option<Expr>>(&self, f: &F) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(s) => f(*s).unwrap_or_else(|| self.clone()),
            Node::Add(a, b) => Expr::add(a.substitute(f), b.substitute(f)),
            Node::Sub(a, b) => Expr::sub(a.substitute(f), b.substitute(f)),
            Node::Mul(a, b) => Expr::mul(a.substitute(f), b.substitute(f)),
            Node::Div(a, b) => Expr::div(a.substitute(f), b.substitute(f)),
            Node::Neg(a) => Expr::neg(a.substitute(f)),
            Node::PowInt(a, k) => Expr::pow_int(a.substitute(f), *k),
            Node::Exp(a) => Expr::exp(a.substitute(f)),
            Node::Log(a) => Expr::log(a.substitute(f)),
            Node::Conj(a) => Expr::conj_node(a.substitute(f)),
        }
    }

    pub fn node_count(&self) -> usize {
        let mut count = 0;
        self.visit(&mut |_| count += 1);
        count
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self.node(), f)
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 {
        write!(f, "{}*i", c.im)
    } else {
        write!(f, "({}+{}*i)", c.re, c.im)
    }
}

/// Prints in the input grammar, fully parenthesized.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write_const(f, *c),
            Node::Var(s) => write!(f, "{s}"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::PowInt(a, k) => write!(f, "({a}^{k})"),
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::Log(a) => write!(f, "log({a})"),
            Node::Conj(a) => write!(f, "conj({a})"),
        }
    }
}
