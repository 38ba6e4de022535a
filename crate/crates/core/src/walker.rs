//! The Walker metric, its inverse, the Levi-Civita connection and the
//! symbolic geodesic equations.
//!
//! ```text
//! g = 2 (dx1∘dx3 + dx2∘dx4) + a dx3∘dx3 + a dx4∘dx4
//! ```
//!
//! Indices are 0-based in code (`0` is `x1`); reports print them 1-based.

use thiserror::Error;

use crate::exec::Exec;
use crate::exprparse::ProblemSpec;
use crate::symcore::{Atom, NormalForm, SymError};

pub type Matrix4 = [[NormalForm; 4]; 4];

pub fn zero_matrix() -> Matrix4 {
    std::array::from_fn(|_| std::array::from_fn(|_| NormalForm::zero()))
}

/// `∂/∂x_{i+1}`.
pub(crate) fn d(e: &NormalForm, i: usize) -> NormalForm {
    e.diff(i as u8 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkerError {
    #[error("metric determinant vanishes identically")]
    DegenerateMetric,
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Debug)]
pub struct MetricComponents {
    /// Defining function.
    pub a: NormalForm,
    pub g: Matrix4,
    pub ginv: Matrix4,
}

pub fn metric(spec: &ProblemSpec) -> Result<MetricComponents, WalkerError> {
    metric_from_function(spec.defining_function()?)
}

/// Builds `g` for the given defining function and inverts it exactly.
pub fn metric_from_function(a: NormalForm) -> Result<MetricComponents, WalkerError> {
    let mut g = zero_matrix();
    for (i, j) in [(0, 2), (1, 3)] {
        g[i][j] = NormalForm::one();
        g[j][i] = NormalForm::one();
    }
    g[2][2] = a.clone();
    g[3][3] = a.clone();
    let ginv = inverse(&g)?;
    Ok(MetricComponents { a, g, ginv })
}

fn minor(m: &Matrix4, row: usize, col: usize) -> [[NormalForm; 3]; 3] {
    std::array::from_fn(|r| {
        let rr = if r < row { r } else { r + 1 };
        std::array::from_fn(|c| {
            let cc = if c < col { c } else { c + 1 };
            m[rr][cc].clone()
        })
    })
}

fn det3(m: &[[NormalForm; 3]; 3]) -> NormalForm {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    t(0, 1, 2) + t(1, 2, 0) + t(2, 0, 1) - t(2, 1, 0) - t(0, 2, 1) - t(1, 0, 2)
}

fn cofactor(m: &Matrix4, i: usize, j: usize) -> NormalForm {
    let c = det3(&minor(m, i, j));
    if (i + j) % 2 == 0 {
        c
    } else {
        -c
    }
}

pub fn det(m: &Matrix4) -> NormalForm {
    (0..4).map(|j| &m[0][j] * &cofactor(m, 0, j)).sum()
}

/// Adjugate over determinant.
pub fn inverse(m: &Matrix4) -> Result<Matrix4, WalkerError> {
    let dt = det(m);
    if dt.is_zero() {
        return Err(WalkerError::DegenerateMetric);
    }
    let inv_det = dt.recip()?;
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| &cofactor(m, j, i) * &inv_det)))
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| &a[i][k] * &b[k][j]).sum()))
}

/// Christoffel symbols `Γ^k_ij`, stored densely and symmetric in `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    gamma: Vec<NormalForm>,
}

impl Connection {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> NormalForm) -> Connection {
        let mut gamma = vec![NormalForm::zero(); 64];
        for k in 0..4 {
            for i in 0..4 {
                for j in i..4 {
                    let v = f(k, i, j);
                    gamma[16 * k + 4 * j + i] = v.clone();
                    gamma[16 * k + 4 * i + j] = v;
                }
            }
        }
        Connection { gamma }
    }

    /// `Γ^k_ij`, the `∂_k` component of `∇_{∂_i} ∂_j`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> &NormalForm {
        &self.gamma[16 * k + 4 * i + j]
    }

    /// Independent components `(k, i, j)` with `i <= j`, in index order.
    pub fn independent() -> impl Iterator<Item = (usize, usize, usize)> {
        (0..4).flat_map(|k| (0..4).flat_map(move |i| (i..4).map(move |j| (k, i, j))))
    }

    pub fn nonzero(&self) -> Vec<((usize, usize, usize), &NormalForm)> {
        Connection::independent()
            .map(|(k, i, j)| ((k, i, j), self.get(k, i, j)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
pub fn christoffel(m: &MetricComponents) -> Connection {
    christoffel_with(m, Exec::default())
}

pub fn christoffel_with(m: &MetricComponents, exec: Exec) -> Connection {
    // dg[l][i][j] = ∂_l g_ij
    let dg: Vec<Matrix4> = (0..4)
        .map(|l| std::array::from_fn(|i| std::array::from_fn(|j| d(&m.g[i][j], l))))
        .collect();
    let idx: Vec<(usize, usize, usize)> = Connection::independent().collect();
    let half = NormalForm::ratio(1, 2);
    let values = exec.map(&idx, |&(k, i, j)| {
        let s: NormalForm = (0..4)
            .filter(|&l| !m.ginv[k][l].is_zero())
            .map(|l| &m.ginv[k][l] * &(&(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j]))
            .sum();
        &half * &s
    });
    let table: std::collections::HashMap<(usize, usize, usize), NormalForm> = idx.into_iter().zip(values).collect();
    Connection::from_fn(|k, i, j| table[&(k, i, j)].clone())
}

/// Velocity parameter `v_{i+1}`; never produced by problem-file parsing.
pub fn velocity(i: usize) -> NormalForm {
    NormalForm::atom(velocity_atom(i))
}

pub fn velocity_atom(i: usize) -> Atom {
    Atom::param(VELOCITY_NAMES[i])
}

pub const VELOCITY_NAMES: [&str; 4] = ["v1", "v2", "v3", "v4"];

/// Accelerations `ẍ_k = −Γ^k_ij v_i v_j`, expanded.
pub fn geodesic_rhs_symbolic(conn: &Connection) -> [NormalForm; 4] {
    std::array::from_fn(|k| {
        let mut acc = NormalForm::zero();
        for i in 0..4 {
            for j in 0..4 {
                let gk = conn.get(k, i, j);
                if !gk.is_zero() {
                    acc = &acc - &(&(gk * &velocity(i)) * &velocity(j));
                }
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{ArgSet, Jet, Substitution};

    fn a(dmi: &[u8]) -> NormalForm {
        NormalForm::jet(Jet::new("a", ArgSet::ALL, dmi).unwrap())
    }

    fn general() -> MetricComponents {
        metric_from_function(a(&[])).unwrap()
    }

    #[test]
    fn flat_metric_is_self_inverse() {
        let m = metric_from_function(NormalForm::zero()).unwrap();
        assert_eq!(m.g, m.ginv);
        assert!(christoffel(&m).nonzero().is_empty());
    }

    #[test]
    fn inverse_pattern_and_determinant() {
        let m = general();
        assert_eq!(det(&m.g), NormalForm::one());
        assert_eq!(m.ginv[0][0], -a(&[]));
        assert_eq!(m.ginv[1][1], -a(&[]));
        assert_eq!(m.ginv[0][2], NormalForm::one());
        assert_eq!(m.ginv[1][3], NormalForm::one());
        assert!(m.ginv[2][2].is_zero() && m.ginv[3][3].is_zero());
        let id = mat_mul(&m.g, &m.ginv);
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, NormalForm::integer((i == j) as i64));
            }
        }
    }

    #[test]
    fn selected_christoffel_symbols() {
        let c = christoffel(&general());
        let half = NormalForm::ratio(1, 2);
        assert_eq!(*c.get(0, 0, 2), &half * &a(&[1]));
        assert_eq!(*c.get(0, 2, 2), &half * &(&(&a(&[]) * &a(&[1])) + &a(&[3])));
        assert_eq!(c.nonzero().len(), 14);
        let constant = metric_from_function(NormalForm::integer(7)).unwrap();
        assert!(christoffel(&constant).nonzero().is_empty());
    }

    #[test]
    fn metric_compatibility() {
        let m = general();
        let c = christoffel(&m);
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut e = d(&m.g[i][j], k);
                    for l in 0..4 {
                        e = &e - &(c.get(l, k, i) * &m.g[l][j]);
                        e = &e - &(c.get(l, k, j) * &m.g[i][l]);
                    }
                    assert!(e.is_zero(), "∇g ≠ 0 at ({k},{i},{j})");
                }
            }
        }
    }

    #[test]
    fn geodesic_equations() {
        let rhs = geodesic_rhs_symbolic(&christoffel(&general()));
        let vv = &(&velocity(2) * &velocity(2)) + &(&velocity(3) * &velocity(3));
        assert_eq!(rhs[2], &(&NormalForm::ratio(1, 2) * &a(&[1])) * &vv);
        let flat = geodesic_rhs_symbolic(&christoffel(&metric_from_function(NormalForm::zero()).unwrap()));
        assert!(flat.iter().all(NormalForm::is_zero));
        // restricted family: a_2 = c
        let r34 = ArgSet::from_coords(&[3, 4]);
        let f = |n: &str| NormalForm::jet(Jet::base(n, r34));
        let family = &(&(&NormalForm::coord(1) * &f("b")) + &(&NormalForm::coord(2) * &f("c"))) + &f("d");
        let mut sub = Substitution::new().bind("a", ArgSet::ALL, family).unwrap();
        let x4 = sub.apply(&rhs[3]).unwrap();
        assert_eq!(x4, &(&NormalForm::ratio(1, 2) * &f("c")) * &vv);
    }
}
