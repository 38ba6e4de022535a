//! Deciding whether a polynomial is a combination of given polynomials.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::error::SymError;
use super::nf::NormalForm;
use super::poly::{Monomial, Poly};
use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Exact linear algebra over Q on monomial coefficient vectors (complete).
    RationalConstant,
    /// Polynomial multipliers from multivariate division, retried against an
    /// interreduced basis (sound, incomplete).
    Expression,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Rational(Vec<Rational>),
    Expression(Vec<NormalForm>),
}

impl Coefficients {
    /// `Σ c_k · basis_k`.
    pub fn combine(&self, basis: &[NormalForm]) -> NormalForm {
        match self {
            Coefficients::Rational(cs) => cs.iter().zip(basis).map(|(c, b)| b.scale(c)).sum(),
            Coefficients::Expression(cs) => cs.iter().zip(basis).map(|(c, b)| c * b).sum(),
        }
    }
}

pub fn linear_membership(
    target: &NormalForm,
    basis: &[NormalForm],
    mode: CoefficientMode,
) -> Result<Option<Coefficients>, SymError> {
    match mode {
        CoefficientMode::RationalConstant => {
            if !target.is_polynomial() || basis.iter().any(|b| !b.is_polynomial()) {
                return Err(SymError::ModeViolation);
            }
            let polys: Vec<&Poly> = basis.iter().map(|b| b.num()).collect();
            Ok(solve_rational(target.num(), &polys).map(Coefficients::Rational))
        }
        CoefficientMode::Expression => {
            // clear denominators: membership of the numerator in the ideal
            // generated by the basis numerators, multipliers carried back
            let divisors: Vec<Poly> = basis.iter().map(|b| b.num().clone()).collect();
            let Some(quots) = divide_interreduced(target.num(), &divisors) else { return Ok(None) };
            let mut out = Vec::with_capacity(basis.len());
            for (q, b) in quots.into_iter().zip(basis) {
                // target = Σ q_k·num_k / den_t = Σ (q_k·den_k/den_t)·basis_k
                let c = NormalForm::from_parts(&q * b.den(), target.den().clone())?;
                out.push(c);
            }
            Ok(Some(Coefficients::Expression(out)))
        }
    }
}

/// Multipliers `q` with `target = Σ q_k·divisors_k`, found by division by the
/// divisors and, failing that, by an interreduced copy of them.
fn divide_interreduced(target: &Poly, divisors: &[Poly]) -> Option<Vec<Poly>> {
    let (quots, rem) = target.div_rem_multi(divisors);
    if rem.is_zero() {
        return Some(quots);
    }
    let (reduced, reps) = interreduce(divisors);
    let (quots, rem) = target.div_rem_multi(&reduced);
    if !rem.is_zero() {
        return None;
    }
    let mut out = vec![Poly::zero(); divisors.len()];
    for (q, rep) in quots.iter().zip(&reps) {
        if q.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(rep) {
            *o = &*o + &(q * c);
        }
    }
    Some(out)
}

/// Reduces each divisor by the others until stable. Returns the reduced
/// polynomials and, for each, its multipliers over the original divisors.
fn interreduce(divisors: &[Poly]) -> (Vec<Poly>, Vec<Vec<Poly>>) {
    let n = divisors.len();
    let mut polys = divisors.to_vec();
    let mut reps: Vec<Vec<Poly>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
    for _ in 0..2 * n + 2 {
        let mut changed = false;
        for i in 0..n {
            if polys[i].is_zero() {
                continue;
            }
            let others: Vec<Poly> =
                (0..n).map(|j| if j == i { Poly::zero() } else { polys[j].clone() }).collect();
            let (q, rem) = polys[i].div_rem_multi(&others);
            if rem == polys[i] {
                continue;
            }
            let mut rep = reps[i].clone();
            for (j, qj) in q.iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                for (r, c) in rep.iter_mut().zip(&reps[j]) {
                    *r = &*r - &(qj * c);
                }
            }
            polys[i] = rem;
            reps[i] = rep;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    (polys, reps)
}

/// Solves `target = Σ c_k·basis_k` over Q; free unknowns are set to zero.
pub fn solve_rational(target: &Poly, basis: &[&Poly]) -> Option<Vec<Rational>> {
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in basis.iter().copied().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let n = rows.len();
            rows.entry(m.clone()).or_insert(n);
        }
    }
    let ncols = basis.len();
    // augmented matrix, one row per monomial
    let mut mat = vec![vec![Rational::zero(); ncols + 1]; rows.len()];
    for (k, p) in basis.iter().enumerate() {
        for (m, c) in p.terms() {
            mat[rows[m]][k] = c.clone();
        }
    }
    for (m, c) in target.terms() {
        mat[rows[m]][ncols] = c.clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][col].recip();
        for v in mat[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for j in col..=ncols {
                    let d = &f * &mat[r][j];
                    mat[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); ncols];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = mat[i][ncols].clone();
    }
    debug_assert!(pivots.iter().all(|&c| mat[pivots.iter().position(|&p| p == c).unwrap()][c].is_one()));
    Some(sol)
}
