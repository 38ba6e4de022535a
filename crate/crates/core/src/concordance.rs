//! Cross-checks of computed quantities against the published closed forms.
//!
//! The computation is the reference; a published entry that disagrees, or a
//! computed component missing from a table, is reported as a discrepancy.

use std::collections::BTreeMap;

use crate::analysis::{restricted_function, Analysis};
use crate::classify::{
    class_systems, compare_with_paper, inclusion_checks, killing_consistency, ClassTag, Comparison, Context,
    InclusionReport, PdeSystem, Stated,
};
use crate::curvature::{
    abstract_at_zero, char_poly, diagonalizability, einstein_system, nabla_ricci_abstract, placeholder_ricci, spectrum,
    upper_nonzero, Spectrum,
};
use crate::exprparse::Scope;
use crate::symcore::{ArgSet, Atom, NormalForm, Substitution};
use crate::tables::{self, load, Condition, Entry};
use crate::walker::geodesic_rhs_symbolic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    /// 1-based index.
    pub index: Vec<usize>,
    pub computed: NormalForm,
    /// `None` when the component is absent from the table.
    pub published: Option<NormalForm>,
    /// `computed − published`.
    pub residual: NormalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableReport {
    pub name: &'static str,
    /// Independent components compared.
    pub checked: usize,
    /// Entries in the published table.
    pub listed: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl TableReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares `computed` on every 0-based index of `indices` against `entries`.
pub fn compare_table(
    name: &'static str,
    entries: &[Entry],
    scope: &Scope,
    indices: &[Vec<usize>],
    computed: impl Fn(&[usize]) -> NormalForm,
    transform: impl Fn(NormalForm) -> NormalForm,
) -> TableReport {
    let mut published: BTreeMap<Vec<usize>, NormalForm> = BTreeMap::new();
    let mut discrepancies = Vec::new();
    for e in entries {
        let value = transform(load(e.text, scope));
        let idx: Vec<usize> = e.index.to_vec();
        if !indices.iter().any(|i| i.iter().map(|v| v + 1).eq(idx.iter().copied())) {
            // index outside the independent set
            discrepancies.push(Discrepancy {
                index: idx.clone(),
                computed: NormalForm::zero(),
                residual: -&value,
                published: Some(value.clone()),
            });
        }
        published.insert(idx, value);
    }
    for i in indices {
        let one_based: Vec<usize> = i.iter().map(|v| v + 1).collect();
        let c = computed(i);
        let p = published.get(&one_based);
        let residual = match p {
            Some(p) => &c - p,
            None => c.clone(),
        };
        if !residual.is_zero() {
            discrepancies.push(Discrepancy { index: one_based, computed: c, published: p.cloned(), residual });
        }
    }
    TableReport { name, checked: indices.len(), listed: entries.len(), discrepancies }
}

fn symmetric_pairs() -> Vec<Vec<usize>> {
    (0..4).flat_map(|j| (j..4).map(move |k| vec![j, k])).collect()
}

fn same(v: NormalForm) -> NormalForm {
    v
}

pub fn connection_report(an: &Analysis) -> TableReport {
    let idx: Vec<Vec<usize>> = crate::walker::Connection::independent().map(|(k, i, j)| vec![k, i, j]).collect();
    compare_table("connection", tables::CONNECTION, &tables::general_scope(), &idx, |i| an.connection.get(i[0], i[1], i[2]).clone(), same)
}

pub fn geodesic_report(an: &Analysis) -> TableReport {
    let rhs = geodesic_rhs_symbolic(&an.connection);
    let idx: Vec<Vec<usize>> = (0..4).map(|k| vec![k]).collect();
    compare_table("geodesic equations", tables::GEODESIC, &tables::general_scope(), &idx, |i| rhs[i[0]].clone(), same)
}

pub fn curvature_report(an: &Analysis) -> TableReport {
    let idx: Vec<Vec<usize>> = crate::curvature::Riemann::representatives().into_iter().map(|r| r.to_vec()).collect();
    compare_table("curvature", tables::CURVATURE, &tables::general_scope(), &idx, |i| an.riemann.get(i[0], i[1], i[2], i[3]).clone(), same)
}

pub fn ricci_report(an: &Analysis) -> TableReport {
    compare_table("Ricci tensor", tables::RICCI, &tables::general_scope(), &symmetric_pairs(), |i| an.ricci.rho[i[0]][i[1]].clone(), same)
}

pub fn einstein_tensor_report(an: &Analysis) -> TableReport {
    compare_table("Einstein tensor", tables::EINSTEIN_TENSOR, &tables::general_scope(), &symmetric_pairs(), |i| an.ricci.f[i[0]][i[1]].clone(), same)
}

pub fn operator_report(an: &Analysis) -> TableReport {
    let idx: Vec<Vec<usize>> = (0..4).flat_map(|i| (0..4).map(move |j| vec![i, j])).collect();
    let rho = &an.ricci.rho;
    compare_table("Ricci operator", tables::RICCI_OPERATOR, &tables::general_scope(), &idx, |i| an.ricci.q[i[0]][i[1]].clone(), |v| {
        tables::fill_ricci(&v, rho)
    })
}

pub fn nabla_report(an: &Analysis) -> TableReport {
    let idx: Vec<Vec<usize>> = crate::curvature::NablaRicci::independent().map(|(i, j, k)| vec![i, j, k]).collect();
    compare_table("covariant derivative of Ricci", tables::NABLA_RICCI, &tables::general_scope(), &idx, |i| an.nabla.get(i[0], i[1], i[2]).clone(), same)
}

fn stated(texts: &[&str], scope: &Scope) -> Vec<Stated> {
    texts.iter().map(|t| Stated::Vanishes(load(t, scope))).collect()
}

fn stated_conditions(conds: &[Condition], scope: &Scope) -> Vec<Stated> {
    conds
        .iter()
        .map(|c| match c {
            Condition::Vanishes(t) => Stated::Vanishes(load(t, scope)),
            Condition::DependsOnlyOn(t, coord) => Stated::DependsOnlyOn(load(t, scope), *coord),
        })
        .collect()
}

/// Spectral identities of the Ricci operator.
#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub spectrum: Spectrum,
    /// `det(Q − λI)` minus the published factored form, in the components of `a`.
    pub char_poly_residual: NormalForm,
    pub printed_discriminant: NormalForm,
    /// Derived minus printed discriminant.
    pub discriminant_residual: NormalForm,
}

pub fn spectral_report(an: &Analysis) -> SpectralReport {
    let g = tables::general_scope();
    let published = tables::fill_ricci(&load(tables::CHARACTERISTIC_POLYNOMIAL, &g), &an.ricci.rho);
    let char_poly_residual = &char_poly(&an.ricci) - &published;
    let spectrum = spectrum(&an.ricci, &an.metric);
    let printed_discriminant = load(tables::EIGENVALUE_RADICAND, &g);
    let discriminant_residual = &spectrum.discriminant - &printed_discriminant;
    SpectralReport { spectrum, char_poly_residual, printed_discriminant, discriminant_residual }
}

/// Derived diagonalizability conditions against the published ones.
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub single: PdeSystem,
    /// Single eigenvalue, against the published list in the components of `a`.
    pub single_vs_published: Comparison,
    /// Single eigenvalue, against the published Ricci-level list.
    pub single_vs_ricci_level: Comparison,
    /// Two eigenvalues: derived placeholder conditions against the published
    /// Ricci-level pair.
    pub two_ricci_level: Comparison,
    /// The published Ricci-level pair with the Ricci components substituted.
    pub two_from_ricci_level: PdeSystem,
    /// `two_from_ricci_level` against the published pair in the components of `a`.
    pub two_vs_published: Comparison,
}

pub fn diagonal_report(an: &Analysis) -> DiagonalReport {
    let g = tables::general_scope();
    let dz = diagonalizability(&an.ricci, &an.metric);
    let rho = &an.ricci.rho;
    let single_vs_published = compare_with_paper(&dz.single, &stated(tables::SINGLE_EIGENVALUE_SYSTEM, &g));
    let single_ricci: Vec<Stated> = tables::SINGLE_EIGENVALUE_RICCI
        .iter()
        .map(|t| Stated::Vanishes(tables::fill_ricci(&load(t, &g), rho)))
        .collect();
    let single_vs_ricci_level = compare_with_paper(&dz.single, &single_ricci);
    let placeholder_system = PdeSystem::new(ClassTag::Diagonal, Context::General, dz.two_placeholder.clone());
    let two_ricci_level = compare_with_paper(&placeholder_system, &stated(tables::TWO_EIGENVALUE_RICCI, &g));
    let filled: Vec<NormalForm> =
        tables::TWO_EIGENVALUE_RICCI.iter().map(|t| tables::fill_ricci(&load(t, &g), rho)).collect();
    let two_from_ricci_level = PdeSystem::new(ClassTag::Diagonal, Context::General, filled);
    let two_vs_published = compare_with_paper(&two_from_ricci_level, &stated(tables::TWO_EIGENVALUE_SYSTEM, &g));
    DiagonalReport {
        single: dz.single,
        single_vs_published,
        single_vs_ricci_level,
        two_ricci_level,
        two_from_ricci_level,
        two_vs_published,
    }
}

/// Every check of the general family.
#[derive(Clone, Debug)]
pub struct GeneralReport {
    pub tables: Vec<TableReport>,
    pub scalar_curvature_residual: NormalForm,
    pub einstein: Comparison,
    pub spectral: SpectralReport,
    pub diagonal: DiagonalReport,
    /// `∇ρ` of an opaque `ρ` has no `ρ`-free part.
    pub nabla_linear_homogeneous: bool,
}

impl GeneralReport {
    pub fn table(&self, name: &str) -> Option<&TableReport> {
        self.tables.iter().find(|t| t.name == name)
    }
}

pub fn general_report(an: &Analysis) -> GeneralReport {
    let g = tables::general_scope();
    let tables = vec![
        connection_report(an),
        geodesic_report(an),
        curvature_report(an),
        ricci_report(an),
        einstein_tensor_report(an),
        operator_report(an),
        nabla_report(an),
    ];
    let scalar_curvature_residual = &an.ricci.tau - &load(tables::SCALAR_CURVATURE, &g);
    let einstein = compare_with_paper(&einstein_system(&an.ricci, Context::General), &stated(tables::EINSTEIN_SYSTEM, &g));
    let nabla_linear_homogeneous = abstract_at_zero(&nabla_ricci_abstract(&an.connection)).nonzero().is_empty();
    GeneralReport {
        tables,
        scalar_curvature_residual,
        einstein,
        spectral: spectral_report(an),
        diagonal: diagonal_report(an),
        nabla_linear_homogeneous,
    }
}

/// Every check of the restricted family.
#[derive(Clone, Debug)]
pub struct RestrictedReport {
    pub systems: BTreeMap<ClassTag, PdeSystem>,
    pub comparisons: Vec<(&'static str, ClassTag, Comparison)>,
    pub inclusions: InclusionReport,
    /// Cyclic triples whose Killing-form coefficient is not the expected
    /// multiple of the cyclic sum.
    pub killing_mismatches: Vec<[usize; 3]>,
    /// No generator involves `d`.
    pub free_of_d: bool,
    /// `∇ρ` computed directly agrees with the general `∇ρ` after substitution.
    pub substitution_route_agrees: bool,
}

pub fn restricted_report(an: &Analysis, general: Option<&Analysis>) -> RestrictedReport {
    let r = tables::restricted_scope();
    let systems = class_systems(&an.ricci, &an.nabla, Context::Restricted);
    let sys = |t: ClassTag| &systems[&t];
    let comparisons = vec![
        ("Einstein", ClassTag::E, compare_with_paper(sys(ClassTag::E), &stated_conditions(tables::EINSTEIN_RESTRICTED, &r))),
        ("parallel Ricci, statement", ClassTag::P, compare_with_paper(sys(ClassTag::P), &stated_conditions(tables::PARALLEL_STATEMENT, &r))),
        ("parallel Ricci, proof", ClassTag::P, compare_with_paper(sys(ClassTag::P), &stated_conditions(tables::PARALLEL_PROOF, &r))),
        ("cyclic parallel Ricci", ClassTag::A, compare_with_paper(sys(ClassTag::A), &stated_conditions(tables::CYCLIC_PARALLEL, &r))),
        ("Ricci-Codazzi", ClassTag::B, compare_with_paper(sys(ClassTag::B), &stated_conditions(tables::CODAZZI, &r))),
    ];
    let abstract_nabla = match general {
        Some(g) => nabla_ricci_abstract(&g.connection),
        None => nabla_ricci_abstract(&an.connection),
    };
    let inclusions = inclusion_checks(&systems, &an.ricci, abstract_at_zero(&abstract_nabla).nonzero().is_empty());
    let free_of_d = systems.values().flat_map(|s| &s.generators).all(|g| {
        g.atoms().iter().all(|a| a.as_jet().map(|j| &**j.func() != "d").unwrap_or(true))
    });
    let substitution_route_agrees = general.map(|g| substitution_route(g, an)).unwrap_or(true);
    RestrictedReport {
        killing_mismatches: killing_consistency(&an.nabla),
        systems,
        comparisons,
        inclusions,
        free_of_d,
        substitution_route_agrees,
    }
}

/// Substitutes the restricted family into the general `∇ρ` and compares.
pub fn substitution_route(general: &Analysis, restricted: &Analysis) -> bool {
    let mut sub = Substitution::new().bind("a", ArgSet::ALL, restricted_function()).expect("family binding");
    crate::curvature::NablaRicci::independent().all(|(i, j, k)| {
        sub.apply(general.nabla.get(i, j, k)).expect("polynomial substitution") == *restricted.nabla.get(i, j, k)
    })
}

/// Ricci placeholders that appear in a general-position analysis.
pub fn placeholder_names(an: &Analysis) -> Vec<String> {
    placeholder_ricci(&an.ricci)
        .iter()
        .flatten()
        .flat_map(|v| v.atoms())
        .filter_map(|a| match a {
            Atom::Param(p) => Some(p.to_string()),
            _ => None,
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Restricted Ricci components that do not vanish, 1-based.
pub fn restricted_ricci(an: &Analysis) -> Vec<([usize; 2], NormalForm)> {
    upper_nonzero(&an.ricci.rho).into_iter().map(|([j, k], v)| ([j + 1, k + 1], v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;

    #[test]
    fn general_tables_agree_where_expected() {
        let an = Analysis::general(Exec::default());
        let rep = general_report(&an);
        for name in ["connection", "geodesic equations", "curvature", "Ricci tensor", "Einstein tensor", "Ricci operator"] {
            let t = rep.table(name).unwrap();
            assert!(t.is_clean(), "{name}: {:?}", t.discrepancies);
        }
        assert!(rep.scalar_curvature_residual.is_zero());
        assert!(rep.einstein.equivalent());
        assert!(rep.spectral.char_poly_residual.is_zero());
        assert!(!rep.spectral.discriminant_residual.is_zero());
        assert!(rep.nabla_linear_homogeneous);
    }

    #[test]
    fn restricted_family() {
        let an = Analysis::restricted(Exec::default());
        assert!(an.ricci.tau.is_zero());
        let rep = restricted_report(&an, None);
        assert!(rep.free_of_d);
        assert!(rep.killing_mismatches.is_empty());
        assert_eq!(rep.systems[&ClassTag::P].len(), 6);
        assert!(rep.systems[&ClassTag::C].is_empty());
        assert!(rep.inclusions.all_hold(), "{:?}", rep.inclusions);
    }
}
