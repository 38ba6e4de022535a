//! Multivariate polynomial gcd over Q by recursive primitive remainder sequences.

use std::collections::{BTreeMap, BTreeSet};

use super::atom::Atom;
use super::poly::{Monomial, Poly};
use super::Rational;
use num_traits::One;

/// Greatest common divisor, normalized to leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic().1;
    }
    if b.is_zero() {
        return a.monic().1;
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    let g = gcd_stripped(&a, &b);
    g.mul_monomial(&Rational::one(), &mg).monic().1
}

fn strip_monomial(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        return p.clone();
    }
    Poly::from_terms(p.terms().map(|(n, c)| (n.div(m).expect("monomial content divides"), c.clone())))
}

fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        // a monomial-free polynomial with a single term is a constant
        return Poly::one();
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    let shared: BTreeSet<&Atom> = atoms_a.intersection(&atoms_b).collect();
    if shared.is_empty() {
        return Poly::one();
    }
    // A common factor only involves shared variables, so it divides every
    // coefficient of `a` taken as a polynomial in the variables `b` lacks.
    for (p, q, own, other) in [(a, b, &atoms_a, &atoms_b), (b, a, &atoms_b, &atoms_a)] {
        let private: BTreeSet<&Atom> = own.iter().filter(|v| !other.contains(*v)).collect();
        if !private.is_empty() {
            let mut acc = q.clone();
            for c in coeffs_in_set(p, &private) {
                acc = gcd(&acc, &c);
                if acc.is_one() {
                    break;
                }
            }
            return acc.monic().1;
        }
    }
    // main variable: shared by both, smallest combined degree
    let v = shared
        .iter()
        .map(|v| (a.degree_in(v) + b.degree_in(v), (*v).clone()))
        .min()
        .map(|(_, v)| v)
        .unwrap();
    // variables present in only one argument can only contribute through content
    let ca = content(a, &v);
    let cb = content(b, &v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(&pa, &pb, &v);
    (&c * &g).monic().1
}

/// Coefficients of `p` viewed as a polynomial in the variables `vars`,
/// smallest first.
fn coeffs_in_set(p: &Poly, vars: &BTreeSet<&Atom>) -> Vec<Poly> {
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (mut key, mut rest) = (Monomial::one(), Monomial::one());
        for (a, e) in m.factors() {
            let f = Monomial::atom(a.clone(), *e);
            if vars.contains(a) {
                key = key.mul(&f);
            } else {
                rest = rest.mul(&f);
            }
        }
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    let mut out: Vec<Poly> = groups.into_values().map(Poly::from_terms).collect();
    out.sort_by_key(|c| (c.len(), c.total_degree()));
    out
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &Poly, v: &Atom) -> Poly {
    let mut acc = Poly::zero();
    for coeff in p.coeffs_in(v).into_values() {
        acc = gcd(&acc, &coeff);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part(p: &Poly, v: &Atom) -> Poly {
    let c = content(p, v);
    let pp = p.div_exact(&c).expect("content divides");
    pp.primitive_integer().1
}

fn lead_in(p: &Poly, v: &Atom) -> (u32, Poly) {
    p.coeffs_in(v).into_iter().next_back().unwrap_or((0, Poly::zero()))
}

fn pseudo_rem(p: &Poly, q: &Poly, v: &Atom) -> Poly {
    let (dq, lq) = lead_in(q, v);
    let mut r = p.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let (dr, lr) = lead_in(&r, v);
        if dr < dq {
            return r;
        }
        let shift = Monomial::atom(v.clone(), dr - dq);
        let t = (&lr * q).mul_monomial(&Rational::one(), &shift);
        r = &(&lq * &r) - &t;
        r = r.primitive_integer().1;
    }
}

fn primitive_prs(a: &Poly, b: &Poly, v: &Atom) -> Poly {
    let (mut p, mut q) = if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    p = primitive_part(&p, v);
    q = primitive_part(&q, v);
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            return q;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        p = q;
        q = primitive_part(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::atom::{ArgSet, Jet};

    fn x(i: u8) -> Poly {
        Poly::coord(i)
    }
    fn k(n: i64) -> Poly {
        Poly::integer(n)
    }

    #[test]
    fn shared_linear_factor() {
        let f = &x(1) + &x(2);
        let a = &f * &(&x(3) - &k(1));
        let b = &f * &(&x(3) + &k(2));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn coprime() {
        let a = &x(1).pow(2) + &k(1);
        let b = &x(1) + &x(2);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_and_rational_coefficients() {
        let h = &(&x(3) * &k(2)) + &x(4);
        let a = (&h * &x(1)).scale(&Rational::new(3.into(), 7.into()));
        let b = &h.pow(2) * &x(1).pow(3);
        assert_eq!(gcd(&a, &b), (&h * &x(1)).monic().1);
    }

    #[test]
    fn jets_as_variables() {
        let b = Poly::jet(Jet::base("b", ArgSet::from_coords(&[3, 4])));
        let b3 = b.diff(3);
        let f = &(&b * &b) - &(&k(2) * &b3);
        let a = &f * &(&b + &x(3));
        let c = &f * &(&b3 - &x(4));
        assert_eq!(gcd(&a, &c), f.monic().1);
    }

    #[test]
    fn variables_missing_from_one_side() {
        let f = &x(1) + &x(2);
        let a = &f * &(&(&x(3) * &x(4)) + &x(1));
        let b = &f.pow(2) * &(&x(1) - &k(1));
        assert_eq!(gcd(&a, &b), f);
        assert_eq!(gcd(&b, &a), f);
        let c = &(&x(3) * &x(4)) + &x(1);
        assert!(gcd(&c, &b).is_one());
    }

    #[test]
    fn multivariate_power() {
        let f = &(&x(1) * &x(2)) + &(&x(3) * &x(4)) + k(1);
        let g = &x(1) - &x(4);
        let a = &f.pow(3) * &g;
        let b = &f.pow(2) * &g.pow(2);
        assert_eq!(gcd(&a, &b), (&f.pow(2) * &g).monic().1);
    }
}
