//! Curvature, Ricci data, spectral data of the Ricci operator and the
//! covariant derivative of the Ricci tensor.
//!
//! Conventions:
//! ```text
//! R(∂i,∂j)∂k = ∇i∇j∂k − ∇j∇i∂k = R^p_ijk ∂p
//! R_ijkl     = g(R(∂i,∂j)∂k, ∂l)
//! ρ_jk       = R^p_pjk = g^{pl} R_pjkl
//! ```

use std::collections::BTreeMap;

use crate::classify::{ClassTag, Context, PdeSystem};
use crate::exec::Exec;
use crate::symcore::{ArgSet, Atom, Jet, NormalForm, Substitution};
use crate::walker::{d, det, zero_matrix, Connection, Matrix4, MetricComponents};

/// All 256 lowered components `R_ijkl`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Riemann {
    r: Vec<NormalForm>,
}

fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    64 * i + 16 * j + 4 * k + l
}

impl Riemann {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &NormalForm {
        &self.r[idx4(i, j, k, l)]
    }

    /// Canonical representatives `i < j`, `k < l`, `(i,j) <= (k,l)`; 21 tuples.
    pub fn representatives() -> Vec<[usize; 4]> {
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in &pairs[a..] {
                out.push([i, j, k, l]);
            }
        }
        out
    }

    pub fn nonzero(&self) -> Vec<([usize; 4], &NormalForm)> {
        Riemann::representatives()
            .into_iter()
            .map(|[i, j, k, l]| ([i, j, k, l], self.get(i, j, k, l)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Tuples violating `R_ijkl = −R_jikl = −R_ijlk = R_klij` or the first
    /// Bianchi identity, with the offending residual.
    pub fn symmetry_violations(&self) -> Vec<(&'static str, [usize; 4], NormalForm)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let r = self.get(i, j, k, l);
                        let checks = [
                            ("antisymmetry in the first pair", r + self.get(j, i, k, l)),
                            ("antisymmetry in the second pair", r + self.get(i, j, l, k)),
                            ("pair symmetry", r - self.get(k, l, i, j)),
                            ("first Bianchi", &(r + self.get(i, k, l, j)) + self.get(i, l, j, k)),
                        ];
                        for (name, res) in checks {
                            if !res.is_zero() {
                                out.push((name, [i, j, k, l], res));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `(∇_m R)_ijkl`.
    pub fn covariant_derivative(&self, conn: &Connection, m: usize, ijkl: [usize; 4]) -> NormalForm {
        let mut acc = d(self.get(ijkl[0], ijkl[1], ijkl[2], ijkl[3]), m);
        for slot in 0..4 {
            for p in 0..4 {
                let g = conn.get(p, m, ijkl[slot]);
                if g.is_zero() {
                    continue;
                }
                let mut t = ijkl;
                t[slot] = p;
                acc = &acc - &(g * self.get(t[0], t[1], t[2], t[3]));
            }
        }
        acc
    }

    /// Tuples `(m,i,j,k,l)` where `(∇_m R)_ijkl + (∇_i R)_jmkl + (∇_j R)_mikl`
    /// fails to vanish.
    pub fn second_bianchi_violations(&self, conn: &Connection, exec: Exec) -> Vec<([usize; 5], NormalForm)> {
        let mut tuples = Vec::new();
        for m in 0..4 {
            for i in m + 1..4 {
                for j in i + 1..4 {
                    for k in 0..4 {
                        for l in k + 1..4 {
                            tuples.push([m, i, j, k, l]);
                        }
                    }
                }
            }
        }
        let sums = exec.map(&tuples, |&[m, i, j, k, l]| {
            &(&self.covariant_derivative(conn, m, [i, j, k, l]) + &self.covariant_derivative(conn, i, [j, m, k, l]))
                + &self.covariant_derivative(conn, j, [m, i, k, l])
        });
        tuples.into_iter().zip(sums).filter(|(_, s)| !s.is_zero()).collect()
    }
}

pub fn riemann(m: &MetricComponents, conn: &Connection) -> Riemann {
    riemann_with(m, conn, Exec::default())
}

pub fn riemann_with(m: &MetricComponents, conn: &Connection, exec: Exec) -> Riemann {
    let tasks: Vec<(usize, usize, usize)> =
        (0..4).flat_map(|i| (i + 1..4).flat_map(move |j| (0..4).map(move |k| (i, j, k)))).collect();
    let lowered = exec.map(&tasks, |&(i, j, k)| {
        let up: Vec<NormalForm> = (0..4)
            .map(|p| {
                let mut e = &d(conn.get(p, j, k), i) - &d(conn.get(p, i, k), j);
                for q in 0..4 {
                    e = &e + &(conn.get(q, j, k) * conn.get(p, i, q));
                    e = &e - &(conn.get(q, i, k) * conn.get(p, j, q));
                }
                e
            })
            .collect();
        let row: [NormalForm; 4] = std::array::from_fn(|l| {
            (0..4).filter(|&p| !m.g[p][l].is_zero()).map(|p| &up[p] * &m.g[p][l]).sum()
        });
        row
    });
    let mut r = vec![NormalForm::zero(); 256];
    for (&(i, j, k), row) in tasks.iter().zip(lowered) {
        for (l, v) in row.into_iter().enumerate() {
            r[idx4(j, i, k, l)] = -&v;
            r[idx4(i, j, k, l)] = v;
        }
    }
    Riemann { r }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciData {
    pub rho: Matrix4,
    pub tau: NormalForm,
    /// Einstein tensor `ρ − (τ/4) g`.
    pub f: Matrix4,
    /// Ricci operator `Q^i_j = g^{ik} ρ_kj`, row `i`, column `j`.
    pub q: Matrix4,
}

pub fn ricci(r: &Riemann, m: &MetricComponents) -> RicciData {
    let rho: Matrix4 = std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            let mut acc = NormalForm::zero();
            for p in 0..4 {
                for l in 0..4 {
                    if !m.ginv[p][l].is_zero() {
                        acc = &acc + &(&m.ginv[p][l] * r.get(p, j, k, l));
                    }
                }
            }
            acc
        })
    });
    ricci_from_tensor(rho, m)
}

/// Scalar curvature, Einstein tensor and operator of a given symmetric `ρ`.
pub fn ricci_from_tensor(rho: Matrix4, m: &MetricComponents) -> RicciData {
    let q = raise(&rho, m);
    let tau: NormalForm = (0..4).map(|i| q[i][i].clone()).sum();
    let quarter = tau.scale(&crate::symcore::Rational::new(1.into(), 4.into()));
    let f = std::array::from_fn(|j| std::array::from_fn(|k| &rho[j][k] - &(&quarter * &m.g[j][k])));
    RicciData { rho, tau, f, q }
}

fn raise(t: &Matrix4, m: &MetricComponents) -> Matrix4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).filter(|&k| !m.ginv[i][k].is_zero()).map(|k| &m.ginv[i][k] * &t[k][j]).sum())
    })
}

/// Nonzero entries `(j, k)` with `j <= k` of a symmetric matrix.
pub fn upper_nonzero(t: &Matrix4) -> Vec<([usize; 2], &NormalForm)> {
    (0..4)
        .flat_map(|j| (j..4).map(move |k| [j, k]))
        .map(|[j, k]| ([j, k], &t[j][k]))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

pub fn einstein_system(rd: &RicciData, context: Context) -> PdeSystem {
    PdeSystem::new(ClassTag::E, context, upper_nonzero(&rd.f).into_iter().map(|(_, v)| v.clone()))
}

pub const LAMBDA: &str = "lambda";

pub fn lambda() -> NormalForm {
    NormalForm::param(LAMBDA)
}

fn shift(q: &Matrix4, n: usize) -> Vec<Vec<NormalForm>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { &q[i][j] - &lambda() } else { q[i][j].clone() }).collect())
        .collect()
}

/// `det(Q − λI)`.
pub fn char_poly(rd: &RicciData) -> NormalForm {
    let s = shift(&rd.q, 4);
    let mut m = zero_matrix();
    for (i, row) in s.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            m[i][j] = v;
        }
    }
    det(&m)
}

/// Ricci tensor with each independent nonzero entry replaced by a placeholder
/// parameter `r_jk`; entries equal to an earlier entry reuse its placeholder.
pub fn placeholder_ricci(rd: &RicciData) -> Matrix4 {
    let mut out = zero_matrix();
    let mut seen: Vec<(NormalForm, NormalForm)> = Vec::new();
    for ([j, k], v) in upper_nonzero(&rd.rho) {
        let p = match seen.iter().find(|(val, _)| val == v) {
            Some((_, p)) => p.clone(),
            None => {
                let p = NormalForm::param(&format!("r{}{}", j + 1, k + 1));
                seen.push((v.clone(), p.clone()));
                p
            }
        };
        out[j][k] = p.clone();
        out[k][j] = p;
    }
    out
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// `det(Q − λI)` with placeholder Ricci entries.
    pub char_poly: NormalForm,
    /// `det` of the upper-left 2×2 block of `Q − λI`.
    pub block_factor: NormalForm,
    /// Whether `char_poly` equals the square of `block_factor`.
    pub is_square_of_block: bool,
    /// Placeholders appearing in the coefficients of `char_poly`.
    pub coefficient_symbols: Vec<String>,
    /// Discriminant in `λ` of `block_factor`.
    pub discriminant: NormalForm,
}

pub fn spectrum(rd: &RicciData, m: &MetricComponents) -> Spectrum {
    let abs = ricci_from_tensor(placeholder_ricci(rd), m);
    let char_poly = char_poly(&abs);
    let s = shift(&abs.q, 2);
    let block_factor = &(&s[0][0] * &s[1][1]) - &(&s[0][1] * &s[1][0]);
    let is_square_of_block = (&char_poly - &(&block_factor * &block_factor)).is_zero();
    let lam = Atom::param(LAMBDA);
    let coefficient_symbols = char_poly
        .atoms()
        .into_iter()
        .filter(|a| *a != lam)
        .map(|a| a.to_string())
        .collect();
    let c = block_factor.num().coeffs_in(&lam);
    let coeff = |k: u32| NormalForm::poly(c.get(&k).cloned().unwrap_or_default());
    let discriminant = &(&coeff(1) * &coeff(1)) - &(&NormalForm::integer(4) * &(&coeff(2) * &coeff(0)));
    Spectrum { char_poly, block_factor, is_square_of_block, coefficient_symbols, discriminant }
}

/// Conditions for `Q` to be diagonalizable.
#[derive(Clone, Debug)]
pub struct Diagonalizability {
    /// `Q − (τ/4)I = 0`, single eigenvalue.
    pub single: PdeSystem,
    /// Placeholder-level conditions for two distinct eigenvalues: with
    /// `Q = [[A, B], [0, A]]` in 2×2 blocks and `A` non-scalar, `Q` is
    /// diagonalizable iff `tr B = 0` and `tr(AB) = 0`.
    pub two_placeholder: Vec<NormalForm>,
    /// `two_placeholder` with the Ricci placeholders filled in.
    pub two: PdeSystem,
}

pub fn diagonalizability(rd: &RicciData, m: &MetricComponents) -> Diagonalizability {
    let quarter = rd.tau.scale(&crate::symcore::Rational::new(1.into(), 4.into()));
    let single = PdeSystem::new(
        ClassTag::Diagonal,
        Context::General,
        (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| {
            if i == j {
                &rd.q[i][j] - &quarter
            } else {
                rd.q[i][j].clone()
            }
        }),
    );
    let ph = placeholder_ricci(rd);
    let q = ricci_from_tensor(ph.clone(), m).q;
    let tr_b = &q[0][2] + &q[1][3];
    let tr_ab: NormalForm =
        (0..2).flat_map(|i| (0..2).map(move |k| (i, k))).map(|(i, k)| &q[i][k] * &q[k][i + 2]).sum();
    let two_placeholder = vec![tr_ab, tr_b];
    let two = PdeSystem::new(
        ClassTag::Diagonal,
        Context::General,
        two_placeholder.iter().map(|g| fill_placeholders(g, &ph, &rd.rho)),
    );
    Diagonalizability { single, two_placeholder, two }
}

/// Replaces the placeholders of `ph` by the matching entries of `rho`.
pub fn fill_placeholders(e: &NormalForm, ph: &Matrix4, rho: &Matrix4) -> NormalForm {
    let mut map = BTreeMap::new();
    for j in 0..4 {
        for k in 0..4 {
            if let Some(p) = ph[j][k].atoms().into_iter().next() {
                map.entry(p).or_insert_with(|| rho[j][k].clone());
            }
        }
    }
    e.map_atoms(|atom| Ok(map.get(atom).cloned().unwrap_or_else(|| NormalForm::atom(atom.clone()))))
        .expect("polynomial substitution")
}

/// Components `(∇_i ρ)_jk`, symmetric in `(j, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaRicci {
    c: Vec<NormalForm>,
}

impl NablaRicci {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &NormalForm {
        &self.c[16 * i + 4 * j + k]
    }

    /// `(i, j, k)` with `j <= k`; 40 tuples.
    pub fn independent() -> impl Iterator<Item = (usize, usize, usize)> {
        (0..4).flat_map(|i| (0..4).flat_map(move |j| (j..4).map(move |k| (i, j, k))))
    }

    pub fn nonzero(&self) -> Vec<((usize, usize, usize), &NormalForm)> {
        NablaRicci::independent()
            .map(|(i, j, k)| ((i, j, k), self.get(i, j, k)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    pub fn map(&self, mut f: impl FnMut(&NormalForm) -> NormalForm) -> NablaRicci {
        NablaRicci { c: self.c.iter().map(&mut f).collect() }
    }
}

/// `(∇_i ρ)_jk = ∂_i ρ_jk − Γ^m_ij ρ_mk − Γ^m_ik ρ_jm`.
pub fn nabla_ricci(rho: &Matrix4, conn: &Connection) -> NablaRicci {
    nabla_ricci_with(rho, conn, Exec::default())
}

pub fn nabla_ricci_with(rho: &Matrix4, conn: &Connection, exec: Exec) -> NablaRicci {
    let idx: Vec<(usize, usize, usize)> = NablaRicci::independent().collect();
    let vals = exec.map(&idx, |&(i, j, k)| {
        let mut e = d(&rho[j][k], i);
        for m in 0..4 {
            e = &e - &(conn.get(m, i, j) * &rho[m][k]);
            e = &e - &(conn.get(m, i, k) * &rho[j][m]);
        }
        e
    });
    let mut c = vec![NormalForm::zero(); 64];
    for ((i, j, k), v) in idx.into_iter().zip(vals) {
        c[16 * i + 4 * k + j] = v.clone();
        c[16 * i + 4 * j + k] = v;
    }
    NablaRicci { c }
}

/// Name of the opaque function standing for `ρ_jk` (0-based indices).
pub fn abstract_ricci_name(j: usize, k: usize) -> String {
    let (j, k) = if j <= k { (j, k) } else { (k, j) };
    format!("rho{}{}", j + 1, k + 1)
}

/// A symmetric tensor of opaque functions `rho_jk(x1..x4)`.
pub fn abstract_ricci() -> Matrix4 {
    std::array::from_fn(|j| std::array::from_fn(|k| NormalForm::jet(Jet::base(abstract_ricci_name(j, k), ArgSet::ALL))))
}

/// `∇ρ` for an opaque symmetric `ρ`.
pub fn nabla_ricci_abstract(conn: &Connection) -> NablaRicci {
    nabla_ricci(&abstract_ricci(), conn)
}

/// Substitutes `ρ ≡ 0` into an abstract `∇ρ`; linear homogeneity means the
/// result vanishes identically.
pub fn abstract_at_zero(nr: &NablaRicci) -> NablaRicci {
    let mut sub = Substitution::new();
    for j in 0..4 {
        for k in j..4 {
            sub = sub.bind(abstract_ricci_name(j, k), ArgSet::ALL, NormalForm::zero()).expect("zero binding");
        }
    }
    nr.map(|v| sub.apply(v).expect("zero substitution"))
}
