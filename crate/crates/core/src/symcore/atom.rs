//! Atoms: coordinates, jets of unknown functions, and module-local parameters.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Number of coordinates of the underlying manifold.
pub const DIM: usize = 4;

/// Bit mask over coordinates `x1..x4`; bit `i - 1` is set when `x_i` is an argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgSet(u8);

impl ArgSet {
    pub const ALL: ArgSet = ArgSet(0b1111);
    pub const EMPTY: ArgSet = ArgSet(0);

    /// Builds a set from 1-based coordinate indices.
    pub fn from_coords(coords: &[u8]) -> ArgSet {
        let mut bits = 0;
        for &c in coords {
            debug_assert!((1..=4).contains(&c));
            bits |= 1 << (c - 1);
        }
        ArgSet(bits)
    }

    pub fn contains(self, coord: u8) -> bool {
        (1..=4).contains(&coord) && self.0 & (1 << (coord - 1)) != 0
    }

    pub fn is_subset_of(self, other: ArgSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn coords(self) -> impl Iterator<Item = u8> {
        (1..=4u8).filter(move |&c| self.contains(c))
    }
}

/// Function identifier, e.g. `a`, `b`, `rho13`.
pub type FuncId = Arc<str>;

/// Formal partial derivative `∂^dmi f` of an unknown function.
///
/// The derivative multi-index is stored as a count per coordinate, so the
/// sorted multiset `{1, 2}` and `{2, 1}` are the same jet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jet {
    func: FuncId,
    args: ArgSet,
    counts: [u8; DIM],
}

impl Jet {
    /// The underived function itself.
    pub fn base(func: impl Into<FuncId>, args: ArgSet) -> Jet {
        Jet { func: func.into(), args, counts: [0; DIM] }
    }

    /// Jet with the given derivative indices (any order); `None` if an index
    /// is outside the function's argument set.
    pub fn new(func: impl Into<FuncId>, args: ArgSet, dmi: &[u8]) -> Option<Jet> {
        let mut jet = Jet::base(func, args);
        for &i in dmi {
            jet = jet.prolong(i)?;
        }
        Some(jet)
    }

    pub fn func(&self) -> &FuncId {
        &self.func
    }

    pub fn args(&self) -> ArgSet {
        self.args
    }

    pub fn counts(&self) -> [u8; DIM] {
        self.counts
    }

    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Sorted derivative multi-index, e.g. `[1, 1, 3]`.
    pub fn dmi(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(i as u8 + 1, c as usize));
        }
        out
    }

    /// `∂_coord` of this jet, or `None` when the function does not depend on `coord`.
    pub fn prolong(&self, coord: u8) -> Option<Jet> {
        if !self.args.contains(coord) {
            return None;
        }
        let mut counts = self.counts;
        counts[coord as usize - 1] += 1;
        Some(Jet { func: self.func.clone(), args: self.args, counts })
    }
}

impl Ord for Jet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.func
            .cmp(&other.func)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| self.dmi().cmp(&other.dmi()))
            .then_with(|| self.args.cmp(&other.args))
    }
}

impl PartialOrd for Jet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.func)?;
        if self.order() > 0 {
            f.write_str("_")?;
            for i in self.dmi() {
                write!(f, "{i}")?;
            }
        }
        Ok(())
    }
}

/// Leaf of every expression and polynomial.
///
/// The derived order puts coordinates first, then jets, then parameters.
/// Parameters (velocities, the spectral variable, polarization weights) are
/// constants with respect to every coordinate derivative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Coord(u8),
    Jet(Jet),
    Param(Arc<str>),
}

impl Atom {
    pub fn coord(i: u8) -> Atom {
        assert!((1..=4).contains(&i), "coordinate index {i} out of range");
        Atom::Coord(i)
    }

    pub fn param(name: &str) -> Atom {
        Atom::Param(Arc::from(name))
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Coord(i) => write!(f, "x{i}"),
            Atom::Jet(j) => j.fmt(f),
            Atom::Param(p) => f.write_str(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_partials_share_one_jet() {
        let a12 = Jet::new("a", ArgSet::ALL, &[1, 2]).unwrap();
        let a21 = Jet::new("a", ArgSet::ALL, &[2, 1]).unwrap();
        assert_eq!(a12, a21);
        assert_eq!(a12.to_string(), "a_12");
    }

    #[test]
    fn prolongation_respects_arguments() {
        let b = Jet::base("b", ArgSet::from_coords(&[3, 4]));
        assert!(b.prolong(1).is_none());
        assert_eq!(b.prolong(4).unwrap().to_string(), "b_4");
    }

    #[test]
    fn atom_order() {
        let a = Atom::Jet(Jet::base("a", ArgSet::ALL));
        let a1 = Atom::Jet(Jet::new("a", ArgSet::ALL, &[1]).unwrap());
        let a11 = Atom::Jet(Jet::new("a", ArgSet::ALL, &[1, 1]).unwrap());
        let a2 = Atom::Jet(Jet::new("a", ArgSet::ALL, &[2]).unwrap());
        let b = Atom::Jet(Jet::base("b", ArgSet::from_coords(&[3, 4])));
        let mut v = vec![b.clone(), a11.clone(), Atom::coord(4), a2.clone(), a.clone(), Atom::coord(1), a1.clone()];
        v.sort();
        assert_eq!(v, vec![Atom::coord(1), Atom::coord(4), a, a1, a2, a11, b]);
    }
}
