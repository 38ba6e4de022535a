//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::atom::{Atom, Jet};
use super::Rational;

/// Power product of atoms; pairs sorted by atom, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Atom, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn atom(atom: Atom, exp: u32) -> Monomial {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(atom, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn exponent(&self, atom: &Atom) -> u32 {
        self.0
            .binary_search_by(|(a, _)| a.cmp(atom))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for (atom, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 == *atom {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *atom {
                return None;
            }
            if e > 0 {
                out.push((atom.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Exponent-wise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for (atom, e) in &self.0 {
            let f = other.exponent(atom);
            if f > 0 {
                out.push((atom.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes `atom` entirely, returning its exponent and the rest.
    pub fn split(&self, atom: &Atom) -> (u32, Monomial) {
        let mut rest = self.0.clone();
        match rest.binary_search_by(|(a, _)| a.cmp(atom)) {
            Ok(i) => {
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (0, Monomial(rest)),
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// smallest atom in the atom order decides.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (x, y) in self.0.iter().zip(other.0.iter()) {
                match x.0.cmp(&y.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match x.1.cmp(&y.1) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in [`Atom`]s with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn integer(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn atom(atom: Atom) -> Poly {
        Poly::term(Rational::one(), Monomial::atom(atom, 1))
    }

    pub fn coord(i: u8) -> Poly {
        Poly::atom(Atom::coord(i))
    }

    pub fn jet(jet: Jet) -> Poly {
        Poly::atom(Atom::Jet(jet))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| a.clone()))
            .collect()
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exponent(atom)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `atom`: `self = Σ_k out[k]·atom^k`.
    pub fn coeffs_in(&self, atom: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(atom);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Partial derivative with respect to coordinate `x_i`.
    pub fn diff(&self, i: u8) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (idx, (atom, e)) in m.factors().iter().enumerate() {
                let d = match atom {
                    Atom::Coord(j) if *j == i => None,
                    Atom::Jet(jet) => match jet.prolong(i) {
                        Some(p) => Some(Atom::Jet(p)),
                        None => continue,
                    },
                    _ => continue,
                };
                let mut rest: SmallVec<[(Atom, u32); 4]> = m.factors().into();
                if *e == 1 {
                    rest.remove(idx);
                } else {
                    rest[idx].1 -= 1;
                }
                let mut mono = Monomial(rest);
                if let Some(d) = d {
                    mono = mono.mul(&Monomial::atom(d, 1));
                }
                out.add_term(mono, c * Rational::from_integer(BigInt::from(*e)));
            }
        }
        out
    }

    /// Rescales so that the leading coefficient is one; returns the old leading coefficient.
    pub fn monic(&self) -> (Rational, Poly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (if lc.is_zero() { Rational::one() } else { lc }, self.clone());
        }
        let inv = lc.recip();
        (lc, self.scale(&inv))
    }

    /// Rescales to integer coefficients with unit content and positive leading coefficient.
    pub fn primitive_integer(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::one(), Poly::zero());
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            let v = (c * Rational::from_integer(den.clone())).to_integer();
            num = num_integer::gcd(num, v);
        }
        if self.leading_coeff().is_negative() {
            num = -num;
        }
        let factor = Rational::new(num, den);
        (factor.clone(), self.scale(&factor.recip()))
    }

    /// Monomial dividing every term, with unit coefficient.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_monomial(&qc, &qm);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Multivariate division by an ordered list of divisors.
    ///
    /// Returns quotients `q_k` and remainder `r` with `self = Σ q_k·divisors[k] + r`,
    /// where no term of `r` is divisible by any divisor's leading monomial.
    pub fn div_rem_multi(&self, divisors: &[Poly]) -> (Vec<Poly>, Poly) {
        let mut quots = vec![Poly::zero(); divisors.len()];
        let mut rem = Poly::zero();
        let mut p = self.clone();
        let leads: Vec<Option<(Monomial, Rational)>> = divisors
            .iter()
            .map(|d| d.leading().map(|(m, c)| (m.clone(), c.clone())))
            .collect();
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let mut divided = false;
            for (k, lead) in leads.iter().enumerate() {
                let Some((lm, lc)) = lead else { continue };
                if let Some(qm) = m.div(lm) {
                    let qc = &c / lc;
                    p = &p - &divisors[k].mul_monomial(&qc, &qm);
                    quots[k].add_term(qm, qc);
                    divided = true;
                    break;
                }
            }
            if !divided {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        (quots, rem)
    }

    /// Evaluates with every atom mapped through `value`.
    pub fn eval<F>(&self, mut value: F) -> Rational
    where
        F: FnMut(&Atom) -> Rational,
    {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (a, e) in m.factors() {
                t *= num_traits::pow(value(a), *e as usize);
            }
            total += t;
        }
        total
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for (a, e) in m.factors() {
                if *e == 1 {
                    parts.push(a.to_string());
                } else {
                    parts.push(format!("{a}^{e}"));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
