#![allow(dead_code)]

use rand::Rng;
use walker::exprparse::Scope;
use walker::symcore::{ArgSet, Atom, Expr, Jet, NormalForm, Poly, Rational};

pub fn r34() -> ArgSet {
    ArgSet::from_coords(&[3, 4])
}

/// Scope with `a(x1..x4)`, `b(x3,x4)` and a parameter `k`.
pub fn scope() -> Scope {
    let mut s = Scope::with_funcs([("a", ArgSet::ALL), ("b", r34())]);
    s.params.insert("k".to_string());
    s
}

/// Random polynomial in `x1..x4` of total degree at most `deg`, small
/// integer coefficients, never constant.
pub fn random_poly<R: Rng>(rng: &mut R, deg: u32) -> NormalForm {
    loop {
        let mut p = Poly::zero();
        for _ in 0..rng.random_range(1..=5) {
            let mut m = Poly::integer(rng.random_range(-3..=3));
            let d = rng.random_range(0..=deg);
            for _ in 0..d {
                m = &m * &Poly::coord(rng.random_range(1..=4));
            }
            p = &p + &m;
        }
        if p.total_degree() > 0 {
            return NormalForm::poly(p);
        }
    }
}

fn random_atom<R: Rng>(rng: &mut R) -> Expr {
    match rng.random_range(0..4) {
        0 | 1 => Expr::coord(rng.random_range(1..=4)),
        2 => {
            let n = rng.random_range(0..3);
            let dmi: Vec<u8> = (0..n).map(|_| rng.random_range(1..=4)).collect();
            Expr::jet(Jet::new("a", ArgSet::ALL, &dmi).unwrap())
        }
        _ => {
            if rng.random_bool(0.5) {
                Expr::Atom(Atom::param("k"))
            } else {
                let dmi: Vec<u8> = (0..rng.random_range(0..3)).map(|_| rng.random_range(3..=4)).collect();
                Expr::jet(Jet::new("b", r34(), &dmi).unwrap())
            }
        }
    }
}

/// Random expression tree of bounded depth over the atoms of [`scope`].
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.3) {
            let q = Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=4).into());
            Expr::Num(q)
        } else {
            random_atom(rng)
        };
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    match rng.random_range(0..6) {
        0 => Expr::Add((0..rng.random_range(2..4)).map(|_| sub(rng)).collect()),
        1 => Expr::Mul((0..rng.random_range(2..4)).map(|_| sub(rng)).collect()),
        2 => Expr::Neg(Box::new(sub(rng))),
        3 => Expr::Div(Box::new(sub(rng)), Box::new(sub(rng))),
        4 => Expr::Pow(Box::new(sub(rng)), rng.random_range(-2..=3)),
        _ => sub(rng) - sub(rng),
    }
}
