//! Replacing unknown functions by expressions, jets by iterated derivatives.

use std::collections::{BTreeMap, HashMap};

use super::atom::{ArgSet, Atom, FuncId};
use super::error::SymError;
use super::expr::Expr;
use super::nf::NormalForm;

fn check_arguments(func: &FuncId, args: ArgSet, atoms: impl IntoIterator<Item = Atom>) -> Result<(), SymError> {
    for atom in atoms {
        match &atom {
            Atom::Coord(c) if !args.contains(*c) => {
                return Err(SymError::ArgumentViolation { func: func.clone(), symbol: atom.to_string() })
            }
            Atom::Jet(j) if !j.args().is_subset_of(args) => {
                return Err(SymError::ArgumentViolation { func: func.clone(), symbol: atom.to_string() })
            }
            _ => {}
        }
    }
    Ok(())
}

/// A set of bindings `f ↦ expression`, applied to normal forms.
///
/// Derivatives of each binding are computed once and cached per jet.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    bindings: BTreeMap<FuncId, (ArgSet, NormalForm)>,
    cache: HashMap<(FuncId, [u8; 4]), NormalForm>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Binds `func(args)` to `value`; fails if `value` depends on a coordinate outside `args`.
    pub fn bind(mut self, func: impl Into<FuncId>, args: ArgSet, value: NormalForm) -> Result<Substitution, SymError> {
        let func = func.into();
        check_arguments(&func, args, value.atoms())?;
        self.cache.clear();
        self.bindings.insert(func, (args, value));
        Ok(self)
    }

    pub fn is_bound(&self, func: &str) -> bool {
        self.bindings.contains_key(func)
    }

    fn jet_value(&mut self, func: &FuncId, counts: [u8; 4]) -> NormalForm {
        if let Some(v) = self.cache.get(&(func.clone(), counts)) {
            return v.clone();
        }
        let value = if counts == [0; 4] {
            self.bindings[func].1.clone()
        } else {
            // peel the last nonzero index and recurse
            let k = (0..4).rev().find(|&k| counts[k] > 0).unwrap();
            let mut lower = counts;
            lower[k] -= 1;
            self.jet_value(func, lower).diff(k as u8 + 1)
        };
        self.cache.insert((func.clone(), counts), value.clone());
        value
    }

    pub fn apply(&mut self, nf: &NormalForm) -> Result<NormalForm, SymError> {
        if !nf.atoms().iter().any(|a| matches!(a, Atom::Jet(j) if self.bindings.contains_key(j.func()))) {
            return Ok(nf.clone());
        }
        nf.map_atoms(|atom| match atom {
            Atom::Jet(j) if self.bindings.contains_key(j.func()) => Ok(self.jet_value(j.func(), j.counts())),
            other => Ok(NormalForm::atom(other.clone())),
        })
    }
}

/// Tree-level substitution: every jet of a bound function becomes the
/// matching iterated derivative of its binding; unbound atoms pass through.
pub fn substitute(e: &Expr, bindings: &BTreeMap<FuncId, (ArgSet, Expr)>) -> Result<Expr, SymError> {
    for (func, (args, value)) in bindings {
        check_arguments(func, *args, value.atoms())?;
    }
    Ok(e.map_atoms(&mut |atom| match atom {
        Atom::Jet(j) => match bindings.get(j.func()) {
            Some((_, value)) => {
                let mut v = value.clone();
                for i in j.dmi() {
                    v = v.diff(i);
                }
                v
            }
            None => Expr::Atom(atom.clone()),
        },
        other => Expr::Atom(other.clone()),
    }))
}
