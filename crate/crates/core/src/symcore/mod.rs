//! Exact computer-algebra kernel.
//!
//! Expressions are trees over [`Atom`]s (coordinates `x1..x4`, jets of unknown
//! functions, and parameters) with rational constants. Every tree normalizes to
//! a [`NormalForm`], a reduced quotient of polynomials, on which equality and
//! the zero test are decidable. Jets of distinct unknowns are algebraically
//! independent; the only identification is the symmetry of mixed partials.

mod atom;
mod error;
mod expr;
mod gcd;
mod linear;
mod nf;
mod poly;
mod subst;

pub use atom::{ArgSet, Atom, FuncId, Jet, DIM};
pub use error::SymError;
pub use expr::{poly_to_expr, Expr};
pub use gcd::gcd;
pub use linear::{linear_membership, solve_rational, CoefficientMode, Coefficients};
pub use nf::NormalForm;
pub use poly::{Monomial, Poly};
pub use subst::{substitute, Substitution};

pub type Rational = num_rational::BigRational;

pub fn normalize(e: &Expr) -> Result<NormalForm, SymError> {
    e.normalize()
}

pub fn is_zero(e: &Expr) -> Result<bool, SymError> {
    e.is_zero()
}

pub fn diff(e: &Expr, i: u8) -> Expr {
    e.diff(i)
}
