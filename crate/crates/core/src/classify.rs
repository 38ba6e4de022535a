//! PDE systems for the Einstein-like classes, membership of concrete inputs,
//! inclusion checks between classes and comparison with stated conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::curvature::{upper_nonzero, NablaRicci, RicciData};
use crate::exprparse::{Mode, ProblemSpec};
use crate::symcore::{
    gcd, linear_membership, ArgSet, CoefficientMode, Coefficients, NormalForm, Poly, Rational, SymError, Substitution,
};
use crate::walker::d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
    /// Einstein.
    E,
    /// Parallel Ricci tensor.
    P,
    /// Cyclic parallel Ricci tensor.
    A,
    /// Ricci tensor of Codazzi type.
    B,
    /// Constant scalar curvature.
    C,
    /// Diagonalizable Ricci operator.
    Diagonal,
}

impl ClassTag {
    pub const CLASSES: [ClassTag; 5] = [ClassTag::E, ClassTag::P, ClassTag::A, ClassTag::B, ClassTag::C];

    pub fn parse(s: &str) -> Option<ClassTag> {
        Some(match s {
            "E" => ClassTag::E,
            "P" => ClassTag::P,
            "A" => ClassTag::A,
            "B" => ClassTag::B,
            "C" => ClassTag::C,
            _ => return None,
        })
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::E => "E",
            ClassTag::P => "P",
            ClassTag::A => "A",
            ClassTag::B => "B",
            ClassTag::C => "C",
            ClassTag::Diagonal => "diagonal",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Context {
    General,
    Restricted,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::General => "general",
            Context::Restricted => "restricted",
        })
    }
}

/// A finite list of expressions required to vanish identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem {
    pub label: ClassTag,
    pub context: Context,
    pub generators: Vec<NormalForm>,
}

/// Numerator with integer coefficients and positive leading coefficient.
/// Vanishing is unchanged away from the poles of the input.
pub fn canonical_generator(g: &NormalForm) -> NormalForm {
    NormalForm::poly(g.num().primitive_integer().1)
}

impl PdeSystem {
    /// Drops zero generators and generators that are rational multiples of
    /// earlier ones.
    pub fn new(label: ClassTag, context: Context, raw: impl IntoIterator<Item = NormalForm>) -> PdeSystem {
        let mut seen = BTreeSet::new();
        let mut generators = Vec::new();
        for g in raw {
            if g.is_zero() {
                continue;
            }
            let c = canonical_generator(&g);
            if seen.insert(crate::exprparse::render_nf(&c)) {
                generators.push(c);
            }
        }
        PdeSystem { label, context, generators }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }
}

/// All components `(∇_i ρ)_jk`.
pub fn parallel_system(nr: &NablaRicci, context: Context) -> PdeSystem {
    PdeSystem::new(ClassTag::P, context, NablaRicci::independent().map(|(i, j, k)| nr.get(i, j, k).clone()))
}

/// Index triples `i <= j <= k`.
fn triples() -> impl Iterator<Item = [usize; 3]> {
    (0..4).flat_map(|i| (i..4).flat_map(move |j| (j..4).map(move |k| [i, j, k])))
}

/// `(∇_i ρ)_jk + (∇_j ρ)_ik + (∇_k ρ)_ji`.
pub fn cyclic_sum(nr: &NablaRicci, [i, j, k]: [usize; 3]) -> NormalForm {
    &(nr.get(i, j, k) + nr.get(j, i, k)) + nr.get(k, j, i)
}

/// Full polarization of the cyclic condition.
pub fn cyclic_system(nr: &NablaRicci, context: Context) -> PdeSystem {
    PdeSystem::new(ClassTag::A, context, triples().map(|t| cyclic_sum(nr, t)))
}

/// Names of the direction parameters in the Killing cubic form.
pub const XI: [&str; 4] = ["xi1", "xi2", "xi3", "xi4"];

/// `(∇_ξ ρ)(ξ, ξ)` as a cubic in the parameters `xi1..xi4`.
pub fn killing_form(nr: &NablaRicci) -> NormalForm {
    let xi: Vec<NormalForm> = XI.iter().map(|n| NormalForm::param(n)).collect();
    let mut acc = NormalForm::zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let c = nr.get(i, j, k);
                if !c.is_zero() {
                    acc = &acc + &(&(&(c * &xi[i]) * &xi[j]) * &xi[k]);
                }
            }
        }
    }
    acc
}

/// Checks that each coefficient of the Killing form is a rational multiple
/// of the matching cyclic sum, so that the form vanishes for all `ξ` exactly
/// when the fully polarized system does. Returns the offending triples.
pub fn killing_consistency(nr: &NablaRicci) -> Vec<[usize; 3]> {
    let form = killing_form(nr);
    let xi_atoms: Vec<_> = XI.iter().map(|n| crate::symcore::Atom::param(n)).collect();
    let mut bad = Vec::new();
    for t in triples() {
        let mut coeff = form.num().clone();
        for (slot, atom) in xi_atoms.iter().enumerate() {
            let e = t.iter().filter(|&&v| v == slot).count() as u32;
            coeff = coeff.coeffs_in(atom).remove(&e).unwrap_or_default();
        }
        let cyc = cyclic_sum(nr, t);
        // the coefficient of ξ_iξ_jξ_k is (multiplicity / 3) times the cyclic sum
        let distinct = t.iter().collect::<BTreeSet<_>>().len();
        let mult = match distinct {
            1 => 1,
            2 => 3,
            _ => 6,
        };
        let expected = cyc.scale(&Rational::new(mult.into(), 3.into()));
        if NormalForm::poly(coeff) != expected {
            bad.push(t);
        }
    }
    bad
}

/// `(∇_i ρ)_jk − (∇_j ρ)_ik` for `i < j` and all `k`.
pub fn codazzi_system(nr: &NablaRicci, context: Context) -> PdeSystem {
    let raw = (0..4).flat_map(|i| (i + 1..4).flat_map(move |j| (0..4).map(move |k| (i, j, k))));
    PdeSystem::new(ClassTag::B, context, raw.map(|(i, j, k)| nr.get(i, j, k) - nr.get(j, i, k)))
}

pub fn constant_scalar_system(rd: &RicciData, context: Context) -> PdeSystem {
    PdeSystem::new(ClassTag::C, context, (0..4).map(|i| d(&rd.tau, i)))
}

/// Derived systems for all five classes.
pub fn class_systems(rd: &RicciData, nr: &NablaRicci, context: Context) -> BTreeMap<ClassTag, PdeSystem> {
    BTreeMap::from([
        (ClassTag::E, crate::curvature::einstein_system(rd, context)),
        (ClassTag::P, parallel_system(nr, context)),
        (ClassTag::A, cyclic_system(nr, context)),
        (ClassTag::B, codazzi_system(nr, context)),
        (ClassTag::C, constant_scalar_system(rd, context)),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Every generator vanishes wherever the input is defined; `locus` lists
    /// the irreducible factors of the input's denominators.
    HoldsOffSingularSet { locus: Vec<NormalForm> },
    /// Generators (by position) that do not vanish, with their values.
    Fails { residuals: Vec<(usize, NormalForm)> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("problem is not fully concrete; undefined functions: {0}")]
    NotConcrete(String),
    #[error("no rational-constant combination found for {0}")]
    InclusionUndecided(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Substitutes the definitions of a concrete problem into a class system.
pub fn membership(spec: &ProblemSpec, system: &PdeSystem) -> Result<Verdict, ClassifyError> {
    if !spec.is_concrete() {
        let open: Vec<String> = spec
            .declarations
            .iter()
            .filter(|d| !spec.definitions.contains_key(d.name.as_ref()))
            .map(|d| d.name.to_string())
            .collect();
        return Err(ClassifyError::NotConcrete(open.join(", ")));
    }
    let resolved = spec.resolved()?;
    let mut sub = Substitution::new();
    let r34 = ArgSet::from_coords(&[3, 4]);
    let family = match spec.mode {
        Mode::General => vec![("a", ArgSet::ALL)],
        Mode::Restricted => vec![("b", r34), ("c", r34), ("d", r34)],
    };
    for (name, args) in family {
        sub = sub.bind(name, args, resolved[name].clone())?;
    }
    let mut residuals = Vec::new();
    for (k, g) in system.generators.iter().enumerate() {
        let v = sub.apply(g)?;
        if !v.is_zero() {
            residuals.push((k, v));
        }
    }
    if !residuals.is_empty() {
        return Ok(Verdict::Fails { residuals });
    }
    let locus = singular_locus(spec)?;
    Ok(if locus.is_empty() { Verdict::Holds } else { Verdict::HoldsOffSingularSet { locus } })
}

/// Squarefree, pairwise coprime factors of the definitions' denominators.
pub fn singular_locus(spec: &ProblemSpec) -> Result<Vec<NormalForm>, SymError> {
    let mut factors: Vec<Poly> = Vec::new();
    for nf in spec.resolved()?.values() {
        let mut rest = nf.den().clone();
        for f in &factors {
            loop {
                let g = gcd(&rest, f);
                if g.as_constant().is_some() {
                    break;
                }
                rest = rest.div_exact(&g).expect("gcd divides");
            }
        }
        if rest.as_constant().is_none() {
            factors.push(squarefree(&rest).primitive_integer().1);
        }
    }
    Ok(factors.into_iter().map(NormalForm::poly).collect())
}

fn squarefree(p: &Poly) -> Poly {
    let mut sq = p.clone();
    for i in 1..=4u8 {
        let dp = sq.diff(i);
        if dp.is_zero() {
            continue;
        }
        let g = gcd(&sq, &dp);
        if g.as_constant().is_none() {
            sq = sq.div_exact(&g).expect("gcd divides");
        }
    }
    sq
}

/// How a generator relates to a list of other generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchKind {
    /// Equal to generator `index` after normalization.
    Exact { index: usize },
    /// `factor` times generator `index`.
    RationalMultiple { index: usize, factor: Rational },
    /// A combination of the listed generators.
    LinearCombination(Coefficients),
    /// The derivative in `x_coord` matches; used for integrated conditions
    /// carrying an unknown function of the remaining coordinate.
    DerivativeMatch { coord: u8, inner: Box<MatchKind> },
    Unmatched,
}

impl MatchKind {
    pub fn is_match(&self) -> bool {
        !matches!(self, MatchKind::Unmatched)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MatchKind::Exact { .. } => "exact",
            MatchKind::RationalMultiple { .. } => "rational multiple",
            MatchKind::LinearCombination(_) => "linear combination",
            MatchKind::DerivativeMatch { .. } => "derivative match",
            MatchKind::Unmatched => "unmatched",
        }
    }
}

/// Classifies `target` against `basis`, trying the cheapest relation first.
pub fn match_generator(target: &NormalForm, basis: &[NormalForm]) -> MatchKind {
    let t = canonical_generator(target);
    for (index, b) in basis.iter().enumerate() {
        if t == canonical_generator(b) && target.num().leading_coeff() == b.num().leading_coeff() {
            return MatchKind::Exact { index };
        }
    }
    for (index, b) in basis.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        if let Ok(q) = target.checked_div(b) {
            if let Some(factor) = q.as_constant() {
                return MatchKind::RationalMultiple { index, factor };
            }
        }
    }
    if target.is_polynomial() && basis.iter().all(NormalForm::is_polynomial) {
        if let Ok(Some(c)) = linear_membership(target, basis, CoefficientMode::RationalConstant) {
            return MatchKind::LinearCombination(c);
        }
    }
    match linear_membership(target, basis, CoefficientMode::Expression) {
        Ok(Some(c)) => MatchKind::LinearCombination(c),
        _ => MatchKind::Unmatched,
    }
}

/// A stated condition, as text in the context's symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stated {
    Vanishes(NormalForm),
    /// Depends only on `x_coord`.
    DependsOnlyOn(NormalForm, u8),
}

impl Stated {
    pub fn expr(&self) -> &NormalForm {
        match self {
            Stated::Vanishes(e) | Stated::DependsOnlyOn(e, _) => e,
        }
    }

    /// Coordinates the condition is differentiated in before matching.
    fn eliminate(&self) -> Vec<u8> {
        match self {
            Stated::Vanishes(_) => Vec::new(),
            Stated::DependsOnlyOn(_, keep) => (1..=4).filter(|c| c != keep).collect(),
        }
    }

    /// Vanishing forms: the expression itself, or its derivatives in the
    /// coordinates it must not depend on.
    pub fn vanishing_forms(&self) -> Vec<NormalForm> {
        match self {
            Stated::Vanishes(e) => vec![e.clone()],
            Stated::DependsOnlyOn(e, _) => {
                self.eliminate().into_iter().map(|c| e.diff(c)).filter(|v| !v.is_zero()).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatch {
    pub generator: NormalForm,
    pub kind: MatchKind,
}

/// Two-way comparison of a derived system with a stated one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub stated: Vec<GeneratorMatch>,
    pub derived: Vec<GeneratorMatch>,
}

impl Comparison {
    pub fn stated_covered(&self) -> usize {
        self.stated.iter().filter(|m| m.kind.is_match()).count()
    }

    pub fn derived_covered(&self) -> usize {
        self.derived.iter().filter(|m| m.kind.is_match()).count()
    }

    /// Each side lies in the span of the other.
    pub fn equivalent(&self) -> bool {
        self.stated_covered() == self.stated.len() && self.derived_covered() == self.derived.len()
    }
}

pub fn compare_with_paper(derived: &PdeSystem, stated: &[Stated]) -> Comparison {
    let stated_basis: Vec<NormalForm> = stated.iter().flat_map(Stated::vanishing_forms).collect();
    let stated_matches = stated
        .iter()
        .map(|s| {
            let kind = match s {
                Stated::Vanishes(e) => match_generator(e, &derived.generators),
                Stated::DependsOnlyOn(_, _) => {
                    let forms = s.vanishing_forms();
                    let coord = s.eliminate().into_iter().find(|&c| !s.expr().diff(c).is_zero()).unwrap_or(0);
                    let inner: Vec<MatchKind> = forms.iter().map(|f| match_generator(f, &derived.generators)).collect();
                    match inner.into_iter().find(|k| k.is_match()) {
                        Some(k) if forms.len() == 1 => MatchKind::DerivativeMatch { coord, inner: Box::new(k) },
                        _ => MatchKind::Unmatched,
                    }
                }
            };
            GeneratorMatch { generator: s.expr().clone(), kind }
        })
        .collect();
    let derived_matches = derived
        .generators
        .iter()
        .map(|g| GeneratorMatch { generator: g.clone(), kind: match_generator(g, &stated_basis) })
        .collect();
    Comparison { stated: stated_matches, derived: derived_matches }
}

/// One inclusion claim checked generator by generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionItem {
    pub claim: String,
    pub label: ClassTag,
    pub index: usize,
    /// Rational coefficients over the claim's basis, or `None` if undecided.
    pub coefficients: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionReport {
    pub items: Vec<InclusionItem>,
    /// The constant scalar curvature system is empty.
    pub c_is_empty: bool,
    /// Each Einstein generator is a rational multiple of a Ricci component.
    pub e_generators_are_ricci_components: bool,
    /// `∇ρ` of an opaque `ρ` vanishes at `ρ = 0`.
    pub nabla_linear_homogeneous: bool,
}

impl InclusionReport {
    pub fn p_equals_a_cap_b(&self) -> bool {
        self.items.iter().all(|i| i.coefficients.is_some())
    }

    pub fn all_hold(&self) -> bool {
        self.p_equals_a_cap_b() && self.c_is_empty && self.e_generators_are_ricci_components && self.nabla_linear_homogeneous
    }

    pub fn undecided(&self) -> Vec<ClassifyError> {
        self.items
            .iter()
            .filter(|i| i.coefficients.is_none())
            .map(|i| ClassifyError::InclusionUndecided(format!("{} generator {} ({})", i.label, i.index + 1, i.claim)))
            .collect()
    }
}

fn rational_span(claim: &str, label: ClassTag, targets: &[NormalForm], basis: &[NormalForm]) -> Vec<InclusionItem> {
    targets
        .iter()
        .enumerate()
        .map(|(index, t)| {
            let coefficients = match linear_membership(t, basis, CoefficientMode::RationalConstant) {
                Ok(Some(Coefficients::Rational(c))) => Some(c),
                _ => None,
            };
            InclusionItem { claim: claim.to_string(), label, index, coefficients }
        })
        .collect()
}

/// Inclusion checks among the derived class systems.
pub fn inclusion_checks(
    systems: &BTreeMap<ClassTag, PdeSystem>,
    rd: &RicciData,
    nabla_linear_homogeneous: bool,
) -> InclusionReport {
    let get = |t: ClassTag| systems.get(&t).map(|s| s.generators.clone()).unwrap_or_default();
    let (p, a, b) = (get(ClassTag::P), get(ClassTag::A), get(ClassTag::B));
    let ab: Vec<NormalForm> = a.iter().chain(&b).cloned().collect();
    let mut items = rational_span("P ⊆ A", ClassTag::A, &a, &p);
    items.extend(rational_span("P ⊆ B", ClassTag::B, &b, &p));
    items.extend(rational_span("A ∩ B ⊆ P", ClassTag::P, &p, &ab));
    let ricci: Vec<NormalForm> = upper_nonzero(&rd.rho).into_iter().map(|(_, v)| v.clone()).collect();
    let e_generators_are_ricci_components = get(ClassTag::E).iter().all(|g| {
        ricci.iter().any(|r| matches!(match_generator(g, std::slice::from_ref(r)), MatchKind::Exact { .. } | MatchKind::RationalMultiple { .. }))
    });
    InclusionReport {
        items,
        c_is_empty: get(ClassTag::C).is_empty(),
        e_generators_are_ricci_components,
        nabla_linear_homogeneous,
    }
}
