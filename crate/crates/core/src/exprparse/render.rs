use num_traits::{One, Signed};

use crate::symcore::{Expr, NormalForm};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const PRIMARY: u8 = 5;

/// Text that parses back to an expression with the same normal form.
pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write(e, SUM, &mut out);
    out
}

pub fn render_nf(nf: &NormalForm) -> String {
    render(&nf.to_expr())
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Num(q) if q.is_negative() => UNARY,
        Expr::Num(q) if !q.denom().is_one() => PRODUCT,
        Expr::Num(_) | Expr::Atom(_) => PRIMARY,
        Expr::Add(xs) if xs.len() > 1 => SUM,
        Expr::Add(xs) => xs.first().map(precedence).unwrap_or(PRIMARY),
        Expr::Mul(xs) if xs.len() > 1 => PRODUCT,
        Expr::Mul(xs) => xs.first().map(precedence).unwrap_or(PRIMARY),
        Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => 4,
    }
}

fn write(e: &Expr, min: u8, out: &mut String) {
    if precedence(e) < min {
        out.push('(');
        write(e, SUM, out);
        out.push(')');
        return;
    }
    match e {
        Expr::Num(q) => {
            if q.is_negative() {
                out.push('-');
                write(&Expr::Num(-q.clone()), UNARY, out);
            } else if q.denom().is_one() {
                out.push_str(&q.numer().to_string());
            } else {
                out.push_str(&format!("{}/{}", q.numer(), q.denom()));
            }
        }
        Expr::Atom(a) => out.push_str(&a.to_string()),
        Expr::Add(xs) => {
            if xs.is_empty() {
                out.push('0');
            }
            for (k, x) in xs.iter().enumerate() {
                if k == 0 {
                    write(x, SUM, out);
                } else if let Expr::Neg(inner) = x {
                    out.push_str(" - ");
                    write(inner, PRODUCT, out);
                } else {
                    out.push_str(" + ");
                    write(x, PRODUCT, out);
                }
            }
        }
        Expr::Mul(xs) => {
            if xs.is_empty() {
                out.push('1');
            }
            for (k, x) in xs.iter().enumerate() {
                if k == 0 {
                    write(x, PRODUCT, out);
                } else {
                    out.push('*');
                    write(x, UNARY, out);
                }
            }
        }
        Expr::Div(a, b) => {
            write(a, PRODUCT, out);
            out.push('/');
            write(b, UNARY, out);
        }
        Expr::Neg(x) => {
            out.push('-');
            write(x, UNARY, out);
        }
        Expr::Pow(b, n) => {
            write(b, PRIMARY, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
    }
}
