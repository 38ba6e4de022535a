//! Published closed forms for the Walker family, transcribed as written.
//!
//! These are test fixtures, not inputs to any computation: every derived
//! quantity is computed from first principles and then compared against the
//! matching table here. Entries are kept verbatim, including visible typos
//! (mixed-partial index orders such as `a_121` are harmless since jets are
//! symmetric). Indices are 1-based.
//!
//! General-family tables are written in jets of `a(x1,x2,x3,x4)`; Ricci
//! operator and spectral entries use the placeholders `r13, r14, ...` for
//! Ricci components and `lambda` for the spectral variable. Restricted-family
//! tables are written in jets of `b(x3,x4)` and `c(x3,x4)`.

use crate::exprparse::{parse_expr, Scope};
use crate::symcore::{ArgSet, Atom, NormalForm};

pub struct Entry {
    pub index: &'static [usize],
    pub text: &'static str,
}

macro_rules! entries {
    ($( [$($i:expr),*] => $t:expr ),* $(,)?) => {
        &[$( Entry { index: &[$($i),*], text: $t } ),*]
    };
}

/// Nonzero `Γ^k_ij` with `i <= j`, index `[k, i, j]`.
pub const CONNECTION: &[Entry] = entries![
    [1, 1, 3] => "1/2*a_1",
    [2, 1, 4] => "1/2*a_1",
    [1, 2, 3] => "1/2*a_2",
    [2, 2, 4] => "1/2*a_2",
    [1, 3, 3] => "1/2*(a*a_1 + a_3)",
    [2, 3, 3] => "1/2*(a*a_2 - a_4)",
    [3, 3, 3] => "-1/2*a_1",
    [4, 3, 3] => "-1/2*a_2",
    [1, 3, 4] => "1/2*a_4",
    [2, 3, 4] => "1/2*a_3",
    [1, 4, 4] => "1/2*(a*a_1 - a_3)",
    [2, 4, 4] => "1/2*(a*a_2 + a_4)",
    [3, 4, 4] => "-1/2*a_1",
    [4, 4, 4] => "-1/2*a_2",
];

/// Geodesic equations solved for `ẍ_k`, velocities `v1..v4`. The second
/// equation's last factor is printed with a stray variable name; it is read
/// as `v4*v4`.
pub const GEODESIC: &[Entry] = entries![
    [1] => "-(a_1*v1*v3 + a_2*v2*v3 + 1/2*(a*a_1 + a_3)*v3*v3 + a_4*v3*v4 + 1/2*(a*a_1 - a_3)*v4*v4)",
    [2] => "-(a_1*v1*v4 + a_2*v2*v4 + 1/2*(a*a_2 - a_4)*v3*v3 + a_3*v3*v4 + 1/2*(a*a_2 + a_4)*v4*v4)",
    [3] => "a_1/2*v3*v3 + a_1/2*v4*v4",
    [4] => "a_2/2*v3*v3 + a_2/2*v4*v4",
];

/// Nonzero `R_ijkl` on canonical representatives.
pub const CURVATURE: &[Entry] = entries![
    [1, 3, 1, 3] => "1/2*a_11",
    [1, 3, 2, 3] => "1/2*a_12",
    [1, 4, 2, 4] => "1/2*a_12",
    [1, 3, 3, 4] => "1/4*(a_1*a_2 - 2*a_14)",
    [1, 4, 1, 4] => "1/2*a_11",
    [1, 4, 3, 4] => "1/4*(2*a_13 - a_1^2)",
    [2, 3, 2, 3] => "1/2*a_22",
    [2, 3, 3, 4] => "1/4*(a_2^2 - 2*a_24)",
    [2, 4, 2, 4] => "1/2*a_22",
    [2, 4, 3, 4] => "1/4*(2*a_23 - a_1*a_2)",
    [3, 4, 3, 4] => "1/4*(2*a_33 + 2*a_44 - a*a_1^2 - a*a_2^2)",
];

/// Nonzero `ρ_jk` with `j <= k`.
pub const RICCI: &[Entry] = entries![
    [1, 3] => "1/2*a_11",
    [1, 4] => "1/2*a_12",
    [2, 3] => "1/2*a_12",
    [2, 4] => "1/2*a_22",
    [3, 3] => "1/2*(a_2^2 + a*a_11 + a*a_22 - 2*a_24)",
    [3, 4] => "1/2*(-a_1*a_2 + a_14 + a_23)",
    [4, 4] => "1/2*(a_1^2 + a*a_11 - 2*a_13 + a*a_22)",
];

pub const SCALAR_CURVATURE: &str = "a_11 + a_22";

/// Nonzero entries of `ρ − (τ/4) g` with `j <= k`.
pub const EINSTEIN_TENSOR: &[Entry] = entries![
    [1, 3] => "1/4*(a_11 - a_22)",
    [2, 4] => "-1/4*(a_11 - a_22)",
    [1, 4] => "1/2*a_12",
    [2, 3] => "1/2*a_12",
    [3, 3] => "1/4*(2*a_2^2 + a*a_11 + a*a_22 - 4*a_24)",
    [3, 4] => "1/2*(-a_1*a_2 + a_14 + a_23)",
    [4, 4] => "1/4*(2*a_1^2 + a*a_11 - 4*a_13 + a*a_22)",
];

pub const EINSTEIN_SYSTEM: &[&str] = &[
    "a_11 - a_22",
    "a_12",
    "2*a_2^2 + a*a_11 + a*a_22 - 4*a_24",
    "a_1*a_2 - a_14 - a_23",
    "2*a_1^2 + a*a_11 + a*a_22 - 4*a_13",
];

/// Nonzero `Q^i_j` (row `i`, column `j`) in terms of Ricci placeholders.
pub const RICCI_OPERATOR: &[Entry] = entries![
    [1, 1] => "r13",
    [1, 2] => "r14",
    [1, 3] => "r33 - a*r13",
    [1, 4] => "r34 - a*r14",
    [2, 1] => "r14",
    [2, 2] => "r24",
    [2, 3] => "r34 - a*r14",
    [2, 4] => "r44 - a*r24",
    [3, 3] => "r13",
    [3, 4] => "r14",
    [4, 3] => "r14",
    [4, 4] => "r24",
];

pub const CHARACTERISTIC_POLYNOMIAL: &str = "((r13 - lambda)*(r24 - lambda) - r14^2)^2";

/// Radicand printed in the closed-form eigenvalues `λ_± = (r13 + r24 ± √D)/2`.
pub const EIGENVALUE_RADICAND: &str = "(r13 - r24)^2 + r14^2";

/// Conditions for a diagonalizable operator with a single eigenvalue.
pub const SINGLE_EIGENVALUE_SYSTEM: &[&str] = &[
    "a_11 - a_22",
    "a_12",
    "a_2^2 + a*a_11 - 2*a_24",
    "a_1*a_2 - a_14 - a_23",
    "a_1^2 + a*a_11 - 2*a_13",
];

/// The same conditions at the Ricci level.
pub const SINGLE_EIGENVALUE_RICCI: &[&str] = &["r13 - r24", "r14", "r33 - a*r13", "r34", "r44 - a*r13"];

/// Conditions for two distinct eigenvalues, at the Ricci level.
pub const TWO_EIGENVALUE_RICCI: &[&str] = &[
    "2*r14*r34 - 2*a*r14^2 - r13*r44 + 2*a*r13*r24 - r24*r33",
    "r44 - a*r24 + r33 - a*r13",
];

/// The same conditions as printed in terms of `a`.
pub const TWO_EIGENVALUE_SYSTEM: &[&str] = &[
    "a_1^2 - 2*a_13 + a*a_22 + a_2^2 + a*a_11 - 2*a_24",
    "a_12*(-a_1*a_2 + a_14 + a_23 - a*a_12) - 1/2*a_11*(a_1^2 + a*a_11 - 2*a_13) - 1/2*a_22*(a_2^2 + a*a_22 - 2*a_24)",
];

/// Nonzero `(∇_i ρ)_jk`, index `[i, j, k]`.
pub const NABLA_RICCI: &[Entry] = entries![
    [1, 1, 3] => "1/2*a_111",
    [3, 1, 3] => "1/4*(2*a_113 + a_2*a_12)",
    [1, 1, 4] => "1/2*a_121",
    [4, 1, 3] => "1/4*(2*a_114 - a_1*a_12)",
    [3, 1, 4] => "1/4*(2*a_123 - a_1*a_12)",
    [4, 1, 4] => "1/4*(2*a_124 - a_1*a_22 + a_1*a_11 + a_2*a_12)",
    [3, 2, 3] => "1/4*(2*a_123 - a_2*a_11 + a_1*a_12 + a_2*a_22)",
    [1, 2, 4] => "1/2*a_122",
    [2, 2, 4] => "1/2*a_222",
    [3, 2, 4] => "1/4*(2*a_223 - a_2*a_12)",
    [4, 2, 4] => "1/4*(2*a_224 + a_1*a_12)",
    [4, 2, 3] => "1/4*(2*a_124 - a_2*a_12)",
    [1, 3, 3] => "1/2*(2*a_2*a_12 + a*a_111 + a_1*a_22 + a*a_221 - 2*a_241)",
    [2, 3, 3] => "1/2*(2*a_2*a_22 + a*a_112 + a_2*a_22 + a*a_222 - 2*a_242)",
    [3, 3, 3] => "1/2*(3*a_2*a_23 + a*a_113 + a_3*a_22 + a*a_223 - 2*a_243 - a*a_2*a_12 + a_4*a_12 + a*a_1*a_22 - 2*a_1*a_24 + a_2*a_14)",
    [4, 3, 3] => "1/2*(2*a_2*a_24 + a*a_114 + a_4*a_22 + a*a_224 - 2*a_244 - a_3*a_12)",
    [1, 3, 4] => "1/2*(a_141 + a_231 - 2*a_1*a_12 - a_2*a_11)",
    [2, 3, 4] => "1/2*(-2*a_2*a_12 - a_1*a_22 + a_142 + a_232)",
    [3, 3, 4] => "1/4*(-4*a_2*a_13 - a_1*a_23 + 2*a_143 + 2*a_233 - 2*a_3*a_12 - a*a_1*a_12 + a_4*a_22 + a_1*a_14 + a*a_2*a_11 - a_4*a_11)",
    [4, 3, 4] => "1/4*(-a_2*a_14 - 4*a_1*a_24 + 2*a_144 + 2*a_234 - 2*a_4*a_12 - a_3*a_22 + a_3*a_11 - a*a_2*a_12 + a*a_1*a_22 + a_2*a_23)",
    [1, 4, 4] => "1/2*(3*a_1*a_11 + a*a_111 - 2*a_131 + a*a_122)",
    [2, 4, 4] => "1/2*(2*a_1*a_12 + a_2*a_11 + a*a_112 - 2*a_132 + a*a_222)",
    [3, 4, 4] => "1/2*(2*a_1*a_13 + a_3*a_11 + a*a_113 - 2*a_133 + a*a_223 - a_4*a_12)",
    [4, 4, 4] => "1/2*(3*a_1*a_14 + a_4*a_11 + a*a_114 - 2*a_134 + a*a_224 - a*a_1*a_12 + a_3*a_12 + a_1*a_23 + a*a_2*a_11 - 2*a_2*a_13)",
];

/// A stated condition on the restricted family.
#[derive(Clone, Copy, Debug)]
pub enum Condition {
    /// The expression vanishes.
    Vanishes(&'static str),
    /// The expression is a function of the single coordinate `x_coord` only
    /// (an integrated condition with an unknown function of that coordinate).
    DependsOnlyOn(&'static str, u8),
}

impl Condition {
    pub fn text(&self) -> &'static str {
        match self {
            Condition::Vanishes(t) | Condition::DependsOnlyOn(t, _) => t,
        }
    }
}

pub const EINSTEIN_RESTRICTED: &[Condition] = &[
    Condition::Vanishes("b_3 - 1/2*b^2"),
    Condition::Vanishes("c_4 - 1/2*c^2"),
    Condition::Vanishes("b_4 + c_3 - b*c"),
];

/// Parallel Ricci: the theorem statement, with two integrated conditions.
pub const PARALLEL_STATEMENT: &[Condition] = &[
    Condition::DependsOnlyOn("b^2 - 2*b_3", 4),
    Condition::DependsOnlyOn("c^2 - 2*c_4", 3),
    Condition::Vanishes("3*c*c_3 - 2*c_34 - 2*b*c_4 + b_4*c"),
    Condition::Vanishes("4*c*b_3 + b*c_3 - 2*b_34 - 2*c_33 - b*b_4"),
    Condition::Vanishes("c*b_4 + 4*b*c_4 - 2*b_44 - 2*c_34 - c*c_3"),
    Condition::Vanishes("3*b*b_4 - 2*b_34 + b*c_3 - 2*c*b_3"),
];

/// Parallel Ricci: the list closing the proof.
pub const PARALLEL_PROOF: &[Condition] = &[
    Condition::Vanishes("3*c*c_3 - 2*c_34 - 2*b*c_4 + b_4*c"),
    Condition::Vanishes("4*c*b_3 + b*c_3 - 2*b_34 - 2*c_33 - b*b_4"),
    Condition::Vanishes("b*b_3 - b_33"),
    Condition::Vanishes("c*c_4 - c_44"),
    Condition::Vanishes("c*b_4 + 4*b*c_4 - 2*b_44 - 2*c_34 - c*c_3"),
    Condition::Vanishes("3*b*b_4 - 2*b_34 + b*c_3 - 2*c*b_3"),
];

pub const CYCLIC_PARALLEL: &[Condition] = &[
    Condition::Vanishes("3*c*c_3 - 2*c_34 - 2*b*c_4 + c*b_4"),
    Condition::Vanishes("3*b*b_4 - 2*b_34 + b*c_3 - 2*c*b_3"),
];

pub const CODAZZI: &[Condition] = &[
    Condition::Vanishes("4*c*b_3 + b*c_3 - 2*b_34 - 2*c_33 - b*b_4 + 2*c*c_4 - 2*c_44"),
    Condition::Vanishes("c*b_4 + 4*b*c_4 - 2*b_44 - 2*c_34 - c*c_3 + 2*b*b_3 - 2*b_33"),
];

/// The Einstein example: `b = c` below, `d` arbitrary (taken as `0`).
pub const EINSTEIN_EXAMPLE_B: &str = "1/(-1/2*x3 - 1/2*x4 + 2)";

pub const RICCI_PLACEHOLDERS: [(&str, [usize; 2]); 10] = [
    ("r11", [1, 1]),
    ("r12", [1, 2]),
    ("r13", [1, 3]),
    ("r14", [1, 4]),
    ("r22", [2, 2]),
    ("r23", [2, 3]),
    ("r24", [2, 4]),
    ("r33", [3, 3]),
    ("r34", [3, 4]),
    ("r44", [4, 4]),
];

pub fn general_scope() -> Scope {
    let mut s = Scope::with_funcs([("a", ArgSet::ALL)]);
    s.params.extend(["lambda", "v1", "v2", "v3", "v4"].map(String::from));
    s.params.extend(RICCI_PLACEHOLDERS.iter().map(|(n, _)| n.to_string()));
    s
}

pub fn restricted_scope() -> Scope {
    let r34 = ArgSet::from_coords(&[3, 4]);
    Scope::with_funcs([("b", r34), ("c", r34), ("d", r34)])
}

/// Parses a fixture; fixtures are static text, so failure is a bug.
pub fn load(text: &str, scope: &Scope) -> NormalForm {
    parse_expr(text, scope)
        .unwrap_or_else(|e| panic!("fixture `{text}`: {e}"))
        .normalize()
        .unwrap_or_else(|e| panic!("fixture `{text}`: {e}"))
}

/// Replaces the Ricci placeholders `r_jk` by `rho[j][k]` (0-based).
pub fn fill_ricci(nf: &NormalForm, rho: &[[NormalForm; 4]; 4]) -> NormalForm {
    nf.map_atoms(|atom| {
        if let Atom::Param(p) = atom {
            if let Some((_, [j, k])) = RICCI_PLACEHOLDERS.iter().find(|(n, _)| **n == **p) {
                return Ok(rho[j - 1][k - 1].clone());
            }
        }
        Ok(NormalForm::atom(atom.clone()))
    })
    .expect("polynomial substitution")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        let g = general_scope();
        let r = restricted_scope();
        for table in [CONNECTION, GEODESIC, CURVATURE, RICCI, EINSTEIN_TENSOR, RICCI_OPERATOR, NABLA_RICCI] {
            for e in table {
                load(e.text, &g);
            }
        }
        for t in EINSTEIN_SYSTEM
            .iter()
            .chain(SINGLE_EIGENVALUE_SYSTEM)
            .chain(SINGLE_EIGENVALUE_RICCI)
            .chain(TWO_EIGENVALUE_RICCI)
            .chain(TWO_EIGENVALUE_SYSTEM)
            .chain([&SCALAR_CURVATURE, &CHARACTERISTIC_POLYNOMIAL, &EIGENVALUE_RADICAND])
        {
            load(t, &g);
        }
        for c in [EINSTEIN_RESTRICTED, PARALLEL_STATEMENT, PARALLEL_PROOF, CYCLIC_PARALLEL, CODAZZI] {
            for cond in c {
                load(cond.text(), &r);
            }
        }
        assert!(load(EINSTEIN_EXAMPLE_B, &r).atoms().len() == 2);
        assert_eq!(CONNECTION.len(), 14);
        assert_eq!(CURVATURE.len(), 11);
        assert_eq!(NABLA_RICCI.len(), 24);
    }
}
