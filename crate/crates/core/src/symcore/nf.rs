//! Canonical rational functions in atoms.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::atom::{Atom, Jet};
use super::error::SymError;
use super::gcd::gcd;
use super::poly::Poly;
use super::Rational;

/// Reduced quotient `num / den`.
///
/// `gcd(num, den) = 1` and `den` has leading coefficient one in the graded
/// lexicographic order, so two rational functions are equal exactly when
/// their normal forms are structurally equal. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    num: Poly,
    den: Poly,
}

impl Default for NormalForm {
    fn default() -> Self {
        NormalForm::zero()
    }
}

impl NormalForm {
    pub fn zero() -> NormalForm {
        NormalForm { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> NormalForm {
        NormalForm::poly(Poly::one())
    }

    pub fn poly(num: Poly) -> NormalForm {
        NormalForm { num, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> NormalForm {
        NormalForm::poly(Poly::constant(c))
    }

    pub fn integer(n: i64) -> NormalForm {
        NormalForm::poly(Poly::integer(n))
    }

    pub fn ratio(p: i64, q: i64) -> NormalForm {
        NormalForm::constant(Rational::new(p.into(), q.into()))
    }

    pub fn atom(a: Atom) -> NormalForm {
        NormalForm::poly(Poly::atom(a))
    }

    pub fn coord(i: u8) -> NormalForm {
        NormalForm::poly(Poly::coord(i))
    }

    pub fn jet(j: Jet) -> NormalForm {
        NormalForm::poly(Poly::jet(j))
    }

    pub fn param(name: &str) -> NormalForm {
        NormalForm::atom(Atom::param(name))
    }

    /// Reduces `num / den` to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<NormalForm, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(NormalForm::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(NormalForm::poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (lc, den) = den.monic();
        let num = if lc.is_one() { num } else { num.scale(&lc.recip()) };
        Ok(NormalForm { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.num.atoms();
        s.extend(self.den.atoms());
        s
    }

    pub fn recip(&self) -> Result<NormalForm, SymError> {
        NormalForm::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &NormalForm) -> Result<NormalForm, SymError> {
        if rhs.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> NormalForm {
        if c.is_zero() {
            return NormalForm::zero();
        }
        NormalForm { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<NormalForm, SymError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let n = e.unsigned_abs() as u32;
        Ok(NormalForm { num: base.num.pow(n), den: base.den.pow(n) })
    }

    /// Partial derivative with respect to `x_i`.
    pub fn diff(&self, i: u8) -> NormalForm {
        let dn = self.num.diff(i);
        if self.is_polynomial() {
            return NormalForm::poly(dn);
        }
        let dd = self.den.diff(i);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        NormalForm::from_parts(num, self.den.pow(2)).expect("nonzero denominator")
    }

    /// Evaluates at exact values of the atoms.
    pub fn eval<F>(&self, mut value: F) -> Result<Rational, SymError>
    where
        F: FnMut(&Atom) -> Rational,
    {
        let d = self.den.eval(&mut value);
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.num.eval(&mut value) / d)
    }

    /// Applies `f` to every atom and recombines, e.g. for substitution.
    pub fn map_atoms<F>(&self, mut f: F) -> Result<NormalForm, SymError>
    where
        F: FnMut(&Atom) -> Result<NormalForm, SymError>,
    {
        let n = eval_poly(&self.num, &mut f)?;
        if self.is_polynomial() {
            return Ok(n);
        }
        let d = eval_poly(&self.den, &mut f)?;
        n.checked_div(&d)
    }
}

fn eval_poly<F>(p: &Poly, f: &mut F) -> Result<NormalForm, SymError>
where
    F: FnMut(&Atom) -> Result<NormalForm, SymError>,
{
    let mut cache: std::collections::BTreeMap<Atom, NormalForm> = std::collections::BTreeMap::new();
    for a in p.atoms() {
        let v = f(&a)?;
        cache.insert(a, v);
    }
    if cache.values().all(NormalForm::is_polynomial) {
        let mut acc = Poly::zero();
        for (m, c) in p.terms() {
            let mut t = Poly::constant(c.clone());
            for (a, e) in m.factors() {
                t = &t * &cache[a].num.pow(*e);
            }
            acc = &acc + &t;
        }
        return Ok(NormalForm::poly(acc));
    }
    // rational replacements: accumulate term by term
    let mut acc = NormalForm::zero();
    for (m, c) in p.terms() {
        let mut t = NormalForm::constant(c.clone());
        for (a, e) in m.factors() {
            t = &t * &cache[a].powi(*e as i64)?;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Add for &NormalForm {
    type Output = NormalForm;
    fn add(self, rhs: &NormalForm) -> NormalForm {
        if self.is_polynomial() && rhs.is_polynomial() {
            return NormalForm::poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return NormalForm::from_parts(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let g = gcd(&self.den, &rhs.den);
        let l = self.den.div_exact(&g).expect("gcd divides");
        let r = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &r) + &(&rhs.num * &l);
        NormalForm::from_parts(num, &self.den * &r).expect("nonzero denominator")
    }
}

impl Sub for &NormalForm {
    type Output = NormalForm;
    fn sub(self, rhs: &NormalForm) -> NormalForm {
        self + &(-rhs)
    }
}

impl Mul for &NormalForm {
    type Output = NormalForm;
    fn mul(self, rhs: &NormalForm) -> NormalForm {
        if self.is_zero() || rhs.is_zero() {
            return NormalForm::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return NormalForm::poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let (lc, den) = den.monic();
        NormalForm { num: num.scale(&lc.recip()), den }
    }
}

impl Neg for &NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        NormalForm { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for NormalForm {
            type Output = NormalForm;
            fn $f(self, rhs: NormalForm) -> NormalForm { (&self).$f(&rhs) }
        }
        impl $tr<&NormalForm> for NormalForm {
            type Output = NormalForm;
            fn $f(self, rhs: &NormalForm) -> NormalForm { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        -&self
    }
}

impl std::iter::Sum for NormalForm {
    fn sum<I: Iterator<Item = NormalForm>>(iter: I) -> NormalForm {
        iter.fold(NormalForm::zero(), |acc, x| &acc + &x)
    }
}

impl From<Poly> for NormalForm {
    fn from(p: Poly) -> Self {
        NormalForm::poly(p)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
