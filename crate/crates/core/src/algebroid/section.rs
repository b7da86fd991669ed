use alloc::vec::Vec;

use num_complex::Complex64;

use super::AlgebroidModel;
use crate::calculus::Point;
use crate::exprlang::{EvalError, Expr, VarSlot};

/// A holomorphic local section `s = s^α e_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub coeffs: Vec<Expr>,
}

impl Section {
    pub fn new(coeffs: Vec<Expr>) -> Self {
        Self { coeffs }
    }

    /// The frame section `e_alpha` (0-based).
    pub fn basis(m: usize, alpha: usize) -> Self {
        Self::new((0..m).map(|b| if b == alpha { Expr::one() } else { Expr::zero() }).collect())
    }

    pub fn scaled(&self, f: &Expr) -> Self {
        Self::new(self.coeffs.iter().map(|c| Expr::mul(f.clone(), c.clone())).collect())
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        let p = Point::new(z.to_vec(), Vec::new());
        self.coeffs.iter().map(|c| c.evaluate(&p)).collect()
    }
}

impl AlgebroidModel {
    /// `[s1, s2]^γ = s1^α s2^β C^γ_{αβ} + ρ^k_α s1^α ∂_k s2^γ − ρ^k_β s2^β ∂_k s1^γ`.
    pub fn bracket_sections(&self, s1: &Section, s2: &Section) -> Section {
        let (n, m) = (self.n(), self.m());
        let mut out = Vec::with_capacity(m);
        for g in 0..m {
            let mut terms = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    terms.push(Expr::mul(
                        Expr::mul(s1.coeffs[a].clone(), s2.coeffs[b].clone()),
                        self.structure(a, b, g).clone(),
                    ));
                }
            }
            for k in 0..n {
                let dk = VarSlot::z(k + 1);
                let d2 = s2.coeffs[g].differentiate(dk);
                let d1 = s1.coeffs[g].differentiate(dk);
                for a in 0..m {
                    let r = self.rho(a, k).clone();
                    terms.push(Expr::mul(Expr::mul(r.clone(), s1.coeffs[a].clone()), d2.clone()));
                    terms.push(Expr::neg(Expr::mul(Expr::mul(r, s2.coeffs[a].clone()), d1.clone())));
                }
            }
            out.push(Expr::sum(terms));
        }
        Section::new(out)
    }

    /// `ρ(s)^k = ρ^k_α s^α` at `z`.
    pub fn anchor_of(&self, s: &Section, z: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        let rho = self.rho_at(z)?;
        let sv = s.evaluate(z)?;
        Ok((0..self.n()).map(|k| (0..self.m()).map(|a| rho[a][k] * sv[a]).sum()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{ModelSource, StructureEntry};
    use crate::exprlang::{parse, SlotContext};
    use alloc::string::ToString;
    use alloc::vec;

    fn m2() -> AlgebroidModel {
        AlgebroidModel::from_source(&ModelSource {
            n: 1,
            m: 2,
            rho: vec![vec!["1".to_string()], vec!["z1".to_string()]],
            structure: vec![StructureEntry { alpha: 1, beta: 2, gamma: 1, expr: "1".to_string() }],
            finsler: "abs2(u1)+abs2(u2)".to_string(),
            z_box: None,
            u_annulus: None,
        })
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_bracket_is_the_structure_function() {
        let model = m2();
        let b = model.bracket_sections(&Section::basis(2, 0), &Section::basis(2, 1));
        assert_eq!(b.evaluate(&[c(0.3, 0.1)]).unwrap(), vec![c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn leibniz_example() {
        let model = m2();
        let z1 = parse("z1", SlotContext::holomorphic(1, 2)).unwrap();
        let s2 = Section::basis(2, 1).scaled(&z1);
        let b = model.bracket_sections(&Section::basis(2, 0), &s2);
        let z = c(0.4, -0.7);
        assert_eq!(b.evaluate(&[z]).unwrap(), vec![z, c(1.0, 0.0)]);
    }

    #[test]
    fn self_bracket_vanishes() {
        let model = m2();
        let e1 = Section::basis(2, 0);
        let b = model.bracket_sections(&e1, &e1);
        assert!(b.coeffs.iter().all(Expr::is_zero));
    }
}
