//! Expression trees over atoms and rational constants.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::atom::{Atom, Jet};
use super::error::SymError;
use super::nf::NormalForm;
use super::poly::Poly;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(Rational),
    Atom(Atom),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(Rational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Expr {
        Expr::Num(Rational::new(p.into(), q.into()))
    }

    pub fn coord(i: u8) -> Expr {
        Expr::Atom(Atom::coord(i))
    }

    pub fn jet(j: Jet) -> Expr {
        Expr::Atom(Atom::Jet(j))
    }

    pub fn pow(self, e: i64) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn normalize(&self) -> Result<NormalForm, SymError> {
        Ok(match self {
            Expr::Num(q) => NormalForm::constant(q.clone()),
            Expr::Atom(a) => NormalForm::atom(a.clone()),
            Expr::Add(xs) => {
                let mut acc = NormalForm::zero();
                for x in xs {
                    acc = &acc + &x.normalize()?;
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = NormalForm::one();
                for x in xs {
                    acc = &acc * &x.normalize()?;
                }
                acc
            }
            Expr::Neg(x) => -x.normalize()?,
            Expr::Div(n, d) => n.normalize()?.checked_div(&d.normalize()?)?,
            Expr::Pow(b, e) => b.normalize()?.powi(*e)?,
        })
    }

    pub fn is_zero(&self) -> Result<bool, SymError> {
        Ok(self.normalize()?.is_zero())
    }

    /// Partial derivative with respect to `x_i`, by the tree rules.
    pub fn diff(&self, i: u8) -> Expr {
        match self {
            Expr::Num(_) => Expr::zero(),
            Expr::Atom(Atom::Coord(j)) => Expr::int((*j == i) as i64),
            Expr::Atom(Atom::Jet(jet)) => match jet.prolong(i) {
                Some(p) => Expr::jet(p),
                None => Expr::zero(),
            },
            Expr::Atom(Atom::Param(_)) => Expr::zero(),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.diff(i)).collect()),
            Expr::Mul(xs) => {
                let mut terms = Vec::with_capacity(xs.len());
                for k in 0..xs.len() {
                    let mut factors = xs.clone();
                    factors[k] = xs[k].diff(i);
                    terms.push(Expr::Mul(factors));
                }
                Expr::Add(terms)
            }
            Expr::Neg(x) => Expr::Neg(Box::new(x.diff(i))),
            Expr::Div(n, d) => {
                let num = Expr::Add(vec![
                    Expr::Mul(vec![n.diff(i), (**d).clone()]),
                    Expr::Neg(Box::new(Expr::Mul(vec![(**n).clone(), d.diff(i)]))),
                ]);
                Expr::Div(Box::new(num), Box::new((**d).clone().pow(2)))
            }
            Expr::Pow(b, e) => match *e {
                0 => Expr::zero(),
                1 => b.diff(i),
                e => Expr::Mul(vec![Expr::int(e), (**b).clone().pow(e - 1), b.diff(i)]),
            },
        }
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut out = std::collections::BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert(a.clone());
        });
        out
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Expr::Num(_) => {}
            Expr::Atom(a) => f(a),
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.visit_atoms(f)),
            Expr::Neg(x) | Expr::Pow(x, _) => x.visit_atoms(f),
            Expr::Div(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Replaces atoms bottom-up.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Expr) -> Expr {
        match self {
            Expr::Num(q) => Expr::Num(q.clone()),
            Expr::Atom(a) => f(a),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Expr::Neg(x) => Expr::Neg(Box::new(x.map_atoms(f))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Expr::Pow(x, e) => Expr::Pow(Box::new(x.map_atoms(f)), *e),
        }
    }
}

fn monomial_expr(c: &Rational, m: &super::poly::Monomial) -> Expr {
    let mut factors: Vec<Expr> = Vec::new();
    let abs = c.abs();
    if !abs.is_one() || m.is_one() {
        factors.push(Expr::Num(abs));
    }
    for (a, e) in m.factors() {
        let base = Expr::Atom(a.clone());
        factors.push(if *e == 1 { base } else { base.pow(*e as i64) });
    }
    let body = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) };
    if c.is_negative() {
        Expr::Neg(Box::new(body))
    } else {
        body
    }
}

/// Expanded sum of terms in descending monomial order.
pub fn poly_to_expr(p: &Poly) -> Expr {
    let mut terms: Vec<Expr> = p.terms().map(|(m, c)| monomial_expr(c, m)).collect();
    match terms.len() {
        0 => Expr::zero(),
        1 => terms.pop().unwrap(),
        _ => Expr::Add(terms),
    }
}

impl NormalForm {
    pub fn to_expr(&self) -> Expr {
        let n = poly_to_expr(self.num());
        if self.is_polynomial() {
            n
        } else {
            Expr::Div(Box::new(n), Box::new(poly_to_expr(self.den())))
        }
    }
}

impl From<&NormalForm> for Expr {
    fn from(nf: &NormalForm) -> Self {
        nf.to_expr()
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, Expr::Neg(Box::new(rhs))])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::int(0)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::atom::ArgSet;

    fn a(dmi: &[u8]) -> Expr {
        Expr::jet(Jet::new("a", ArgSet::ALL, dmi).unwrap())
    }

    #[test]
    fn expansion_identity() {
        let (x1, x2) = (Expr::coord(1), Expr::coord(2));
        let e = (x1.clone() + x2.clone()).pow(2)
            - x1.clone().pow(2)
            - Expr::int(2) * x1.clone() * x2.clone()
            - x2.clone().pow(2);
        let nf = e.normalize().unwrap();
        assert!(nf.is_zero());
        assert!(nf.den().is_one());
    }

    #[test]
    fn commutativity_and_distinct_atoms() {
        assert!((a(&[1]) * a(&[2]) - a(&[2]) * a(&[1])).is_zero().unwrap());
        assert!((a(&[1, 2]) - a(&[2, 1])).is_zero().unwrap());
        assert!(!(a(&[1, 1]) - a(&[2, 2])).is_zero().unwrap());
    }

    #[test]
    fn tree_diff_rules() {
        assert_eq!(a(&[1]).diff(3), a(&[1, 3]));
        let b = Expr::jet(Jet::base("b", ArgSet::from_coords(&[3, 4])));
        assert!(b.diff(1).is_zero().unwrap());
        let d = (a(&[]) * a(&[1])).diff(3);
        let expected = a(&[3]) * a(&[1]) + a(&[]) * a(&[1, 3]);
        assert!((d - expected).is_zero().unwrap());
    }

    #[test]
    fn quotient_and_power_rules_agree_with_normal_form() {
        let e = (Expr::coord(1) * a(&[2])) / (Expr::coord(3).pow(2) + a(&[])).pow(3);
        for i in 1..=4 {
            let tree = e.diff(i).normalize().unwrap();
            let direct = e.normalize().unwrap().diff(i);
            assert_eq!(tree, direct);
        }
    }

    #[test]
    fn zero_denominator() {
        let e = Expr::int(1) / (Expr::coord(1) - Expr::coord(1));
        assert_eq!(e.normalize(), Err(SymError::DivisionByZero));
    }
}
