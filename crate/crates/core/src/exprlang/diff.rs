use super::ast::{Expr, Node};
use super::slot::VarSlot;

impl Expr {
    /// Exact partial derivative with respect to `slot`.
    ///
    /// `z_k`, `z̄_k`, `u_a` and `ū_a` are independent variables here, which is
    /// exactly the Wirtinger calculus. Input with `Conj` nodes is normalized
    /// first; the result never contains them.
    pub fn differentiate(&self, slot: VarSlot) -> Expr {
        if !self.is_normalized() {
            return self.normalize().differentiate(slot);
        }
        self.diff_normalized(slot)
    }

    fn diff_normalized(&self, slot: VarSlot) -> Expr {
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Var(s) => {
                if *s == slot {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(a, b) => Expr::add(a.diff_normalized(slot), b.diff_normalized(slot)),
            Node::Sub(a, b) => Expr::sub(a.diff_normalized(slot), b.diff_normalized(slot)),
            Node::Mul(a, b) => Expr::add(
                Expr::mul(a.diff_normalized(slot), b.clone()),
                Expr::mul(a.clone(), b.diff_normalized(slot)),
            ),
            Node::Div(a, b) => {
                let da = a.diff_normalized(slot);
                let db = b.diff_normalized(slot);
                if db.is_zero() {
                    return Expr::div(da, b.clone());
                }
                // (a/b)' = a'/b - a b' / b^2
                Expr::sub(
                    Expr::div(da, b.clone()),
                    Expr::div(Expr::mul(a.clone(), db), Expr::pow_int(b.clone(), 2)),
                )
            }
            Node::Neg(a) => Expr::neg(a.diff_normalized(slot)),
            Node::PowInt(a, k) => {
                let da = a.diff_normalized(slot);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(
                    Expr::mul(Expr::real(f64::from(*k)), Expr::pow_int(a.clone(), k - 1)),
                    da,
                )
            }
            Node::Exp(a) => Expr::mul(a.diff_normalized(slot), self.clone()),
            Node::Log(a) => Expr::div(a.diff_normalized(slot), a.clone()),
            Node::Conj(_) => unreachable!("differentiation requires a normalized tree"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_with_independent_slots() {
        let e = Expr::mul(Expr::var(VarSlot::u(1)), Expr::var(VarSlot::ubar(1)));
        assert_eq!(e.differentiate(VarSlot::u(1)), Expr::var(VarSlot::ubar(1)));
    }

    #[test]
    fn chain_rule_through_exp() {
        let zz = Expr::mul(Expr::var(VarSlot::z(1)), Expr::var(VarSlot::zbar(1)));
        let e = Expr::exp(zz);
        let d = e.differentiate(VarSlot::z(1));
        assert_eq!(d, Expr::mul(Expr::var(VarSlot::zbar(1)), e));
    }

    #[test]
    fn slots_are_independent() {
        assert!(Expr::var(VarSlot::z(1)).differentiate(VarSlot::zbar(1)).is_zero());
        assert!(Expr::var(VarSlot::u(2)).differentiate(VarSlot::u(1)).is_zero());
    }
}
