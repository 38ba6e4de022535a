use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use walker::analysis::Analysis;
use walker::classify::{
    class_systems, compare_with_paper, membership, singular_locus, ClassTag, ClassifyError, Comparison, Context,
    GeneratorMatch, MatchKind, PdeSystem, Stated, Verdict,
};
use walker::concordance::{general_report, restricted_report, TableReport};
use walker::curvature::{char_poly, upper_nonzero, NablaRicci, Riemann};
use walker::exec::Exec;
use walker::exprparse::{parse, render_nf, Mode, ParseError, ProblemSpec};
use walker::geodesic::{GeodesicError, GeodesicState, GeodesicSystem};
use walker::symcore::{Coefficients, NormalForm};
use walker::tables;
use walker::walker::{mat_mul, Connection, Matrix4};

use crate::report::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: input is not UTF-8")]
    Encoding { path: String },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub struct Input {
    pub spec: ProblemSpec,
    pub info: InputInfo,
}

pub fn load(path: &Path) -> Result<Input, CliError> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Encoding { path: shown.clone() })?;
    let spec = parse(text).map_err(|source| CliError::Parse { path: shown.clone(), source })?;
    // Surface unresolvable definitions (for example a division by zero) as input errors.
    spec.resolved().map_err(|e| CliError::Invalid { path: shown.clone(), message: e.to_string() })?;
    let info = InputInfo {
        path: shown,
        sha256: hex::encode(Sha256::digest(&bytes)),
        mode: match spec.mode {
            Mode::General => "general",
            Mode::Restricted => "restricted",
        },
        concrete: spec.is_concrete(),
        defaulted: spec.defaulted.iter().map(|f| f.to_string()).collect(),
    };
    Ok(Input { spec, info })
}

fn context(spec: &ProblemSpec) -> Context {
    match spec.mode {
        Mode::General => Context::General,
        Mode::Restricted => Context::Restricted,
    }
}

fn analysis(input: &Input) -> Result<Analysis, CliError> {
    Analysis::from_spec(&input.spec, Exec::default())
        .map_err(|e| CliError::Invalid { path: input.info.path.clone(), message: e.to_string() })
}

fn section<'a>(
    name: &'static str,
    notation: &'static str,
    items: impl IntoIterator<Item = (Vec<usize>, &'a NormalForm)>,
) -> Section {
    let components: Vec<Component> = items
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(idx, v)| Component { index: idx.into_iter().map(|i| i + 1).collect(), value: render_nf(v) })
        .collect();
    Section { name, notation, count: components.len(), components }
}

fn symmetric(name: &'static str, notation: &'static str, m: &Matrix4) -> Section {
    section(name, notation, upper_nonzero(m).into_iter().map(|(i, v)| (i.to_vec(), v)))
}

fn full(name: &'static str, notation: &'static str, m: &Matrix4) -> Section {
    section(name, notation, (0..4).flat_map(|i| (0..4).map(move |j| (vec![i, j], &m[i][j]))))
}

/// Scalars always show their value; `count` is still the number of nonzero entries.
fn scalar(name: &'static str, notation: &'static str, v: &NormalForm) -> Section {
    let components = vec![Component { index: Vec::new(), value: render_nf(v) }];
    Section { name, notation, count: usize::from(!v.is_zero()), components }
}

fn tensor_sections(an: &Analysis) -> Vec<Section> {
    vec![
        symmetric("g", "g_##", &an.metric.g),
        symmetric("g_inv", "g^##", &an.metric.ginv),
        section("Gamma", "Gamma^#_##", Connection::independent().map(|(k, i, j)| (vec![k, i, j], an.connection.get(k, i, j)))),
        section("R", "R_####", Riemann::representatives().into_iter().map(|r| (r.to_vec(), an.riemann.get(r[0], r[1], r[2], r[3])))),
        symmetric("rho", "rho_##", &an.ricci.rho),
        scalar("tau", "tau", &an.ricci.tau),
        symmetric("F", "F_##", &an.ricci.f),
        full("Q", "Q^#_#", &an.ricci.q),
        scalar("char_poly", "det(Q - lambda*I)", &char_poly(&an.ricci)),
        section("nabla_rho", "(nabla_# rho)_##", NablaRicci::independent().map(|(i, j, k)| (vec![i, j, k], an.nabla.get(i, j, k)))),
    ]
}

/// Consistency checks every analysis must pass.
fn internal_checks(an: &Analysis) -> Vec<String> {
    let mut failures = Vec::new();
    let prod = mat_mul(&an.metric.g, &an.metric.ginv);
    let identity = (0..4).all(|i| (0..4).all(|j| (&prod[i][j] - &NormalForm::integer((i == j) as i64)).is_zero()));
    if !identity {
        failures.push("g * g_inv is not the identity".to_string());
    }
    for (kind, idx, _) in an.riemann.symmetry_violations() {
        let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        failures.push(format!("curvature {kind} fails at [{}]", idx.join(",")));
    }
    if !trace_f(an).is_zero() {
        failures.push("trace of the Einstein tensor is not 0".to_string());
    }
    failures
}

fn trace_f(an: &Analysis) -> NormalForm {
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| &an.metric.ginv[i][j] * &an.ricci.f[i][j]).sum()
}

fn status(failures: Vec<String>, code: i32) -> Status {
    Status { exit_code: if failures.is_empty() { 0 } else { code }, failures }
}

fn empty(command: &'static str, input: Option<InputInfo>, st: Status) -> Report {
    Report {
        tool: Tool::current(),
        command,
        input,
        tensors: None,
        classification: None,
        concordance: None,
        geodesic: None,
        status: st,
    }
}

pub fn analyze(input: Input) -> Result<Report, CliError> {
    let an = analysis(&input)?;
    let failures = internal_checks(&an);
    let mut report = empty("analyze", Some(input.info), status(failures, 3));
    report.tensors = Some(tensor_sections(&an));
    Ok(report)
}

fn class_name(t: ClassTag) -> &'static str {
    match t {
        ClassTag::E => "Einstein",
        ClassTag::P => "parallel Ricci",
        ClassTag::A => "cyclic parallel Ricci",
        ClassTag::B => "Ricci-Codazzi",
        ClassTag::C => "constant scalar curvature",
        ClassTag::Diagonal => "diagonalizable Ricci operator",
    }
}

fn verdict(input: &Input, system: &PdeSystem) -> Result<Option<VerdictOut>, CliError> {
    let invalid = |e: ClassifyError| CliError::Invalid { path: input.info.path.clone(), message: e.to_string() };
    let v = match membership(&input.spec, system) {
        Ok(v) => v,
        Err(ClassifyError::NotConcrete(_)) => return Ok(None),
        Err(e) => return Err(invalid(e)),
    };
    Ok(Some(match v {
        Verdict::Holds => VerdictOut { status: "holds", locus: Vec::new(), residuals: Vec::new() },
        Verdict::HoldsOffSingularSet { locus } => VerdictOut {
            status: "holds_off_singular_set",
            locus: locus.iter().map(render_nf).collect(),
            residuals: Vec::new(),
        },
        Verdict::Fails { residuals } => VerdictOut {
            status: "fails",
            locus: Vec::new(),
            residuals: residuals
                .into_iter()
                .map(|(k, value)| Residual {
                    generator: k + 1,
                    expr: render_nf(&system.generators[k]),
                    value: render_nf(&value),
                })
                .collect(),
        },
    }))
}

fn relation(kind: &MatchKind) -> String {
    match kind {
        MatchKind::Exact { index } => format!(": equals #{}", index + 1),
        MatchKind::RationalMultiple { index, factor } => format!(": {factor} times #{}", index + 1),
        MatchKind::LinearCombination(Coefficients::Rational(cs)) => {
            let terms: Vec<String> =
                cs.iter().enumerate().filter(|(_, c)| *c != &Default::default()).map(|(k, c)| format!("{c}*#{}", k + 1)).collect();
            format!(": {}", terms.join(" + "))
        }
        MatchKind::LinearCombination(Coefficients::Expression(cs)) => {
            let terms: Vec<String> = cs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("({})*#{}", render_nf(c), k + 1))
                .collect();
            format!(": {}", terms.join(" + "))
        }
        MatchKind::DerivativeMatch { coord, inner } => format!(" in x{coord}{}", relation(inner)),
        MatchKind::Unmatched => String::new(),
    }
}

fn matches(ms: &[GeneratorMatch]) -> Vec<MatchOut> {
    ms.iter()
        .map(|m| MatchOut { generator: render_nf(&m.generator), relation: m.kind.name(), detail: relation(&m.kind) })
        .collect()
}

fn diff(statement: &str, tag: ClassTag, c: &Comparison) -> Diff {
    Diff {
        statement: statement.to_string(),
        class: tag.to_string(),
        equivalent: c.equivalent(),
        stated: matches(&c.stated),
        derived: matches(&c.derived),
    }
}

fn general_einstein_diff(systems: &std::collections::BTreeMap<ClassTag, PdeSystem>) -> Diff {
    let scope = tables::general_scope();
    let stated: Vec<Stated> = tables::EINSTEIN_SYSTEM.iter().map(|t| Stated::Vanishes(tables::load(t, &scope))).collect();
    diff("Einstein", ClassTag::E, &compare_with_paper(&systems[&ClassTag::E], &stated))
}

pub fn classify(input: Input, classes: &[ClassTag], paper_diff: bool) -> Result<Report, CliError> {
    let family = Analysis::of_family(context(&input.spec), Exec::default());
    let systems = class_systems(&family.ricci, &family.nabla, family.context);
    let mut results = Vec::new();
    for &t in classes {
        let sys = &systems[&t];
        results.push(ClassResult {
            class: t.to_string(),
            name: class_name(t),
            generators: sys.generators.iter().map(render_nf).collect(),
            verdict: verdict(&input, sys)?,
        });
    }
    let paper_diff = paper_diff.then(|| match input.spec.mode {
        Mode::General => vec![general_einstein_diff(&systems)].into_iter().filter(|_| classes.contains(&ClassTag::E)).collect(),
        Mode::Restricted => restricted_report(&family, None)
            .comparisons
            .iter()
            .filter(|(_, t, _)| classes.contains(t))
            .map(|(s, t, c)| diff(s, *t, c))
            .collect(),
    });
    let mut report = empty("classify", Some(input.info), status(Vec::new(), 3));
    report.classification = Some(Classification { classes: results, paper_diff });
    Ok(report)
}

fn table(t: &TableReport) -> Table {
    Table {
        name: t.name,
        checked: t.checked,
        listed: t.listed,
        clean: t.is_clean(),
        discrepancies: t
            .discrepancies
            .iter()
            .map(|d| Discrepancy {
                index: d.index.clone(),
                computed: render_nf(&d.computed),
                published: d.published.as_ref().map(render_nf),
                residual: render_nf(&d.residual),
            })
            .collect(),
    }
}

fn check(name: &str, ok: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), ok, detail: detail.into() }
}

fn table_check(name: &str, t: &TableReport) -> Check {
    check(name, t.is_clean(), format!("{} components, {} published entries, {} discrepancies", t.checked, t.listed, t.discrepancies.len()))
}

fn comparison_check(name: &str, c: &Comparison) -> Check {
    check(
        name,
        c.equivalent(),
        format!(
            "stated {}/{} covered, derived {}/{} covered",
            c.stated_covered(),
            c.stated.len(),
            c.derived_covered(),
            c.derived.len()
        ),
    )
}

pub fn verify(strict: bool) -> Report {
    let general = Analysis::general(Exec::default());
    let restricted = Analysis::restricted(Exec::default());
    let gr = general_report(&general);
    let rr = restricted_report(&restricted, Some(&general));
    let t = |name: &str| gr.table(name).expect("table is always produced");

    let symmetry = general.riemann.symmetry_violations();
    let bianchi2 = general.riemann.second_bianchi_violations(&general.connection, Exec::default());
    let must_match = vec![
        table_check("Levi-Civita connection", t("connection")),
        table_check("curvature tensor", t("curvature")),
        table_check("Ricci tensor", t("Ricci tensor")),
        table_check("Ricci operator", t("Ricci operator")),
        check("trace of the Einstein tensor", trace_f(&general).is_zero(), format!("trace = {}", render_nf(&trace_f(&general)))),
        check("curvature symmetries and first Bianchi identity", symmetry.is_empty(), format!("{} violations", symmetry.len())),
        check("second Bianchi identity", bianchi2.is_empty(), format!("{} violations", bianchi2.len())),
    ];
    let strict_checks = vec![table_check("covariant derivative of Ricci", t("covariant derivative of Ricci"))];

    let sp = &gr.spectral;
    let dg = &gr.diagonal;
    let inc = &rr.inclusions;
    let mut reported = vec![
        table_check("geodesic equations", t("geodesic equations")),
        table_check("Einstein tensor", t("Einstein tensor")),
        check(
            "scalar curvature",
            gr.scalar_curvature_residual.is_zero(),
            format!("tau = {}", render_nf(&general.ricci.tau)),
        ),
        comparison_check("Einstein system", &gr.einstein),
        check(
            "characteristic polynomial",
            sp.char_poly_residual.is_zero() && sp.spectrum.is_square_of_block,
            format!("square of {}", render_nf(&sp.spectrum.block_factor)),
        ),
        check(
            "eigenvalue discriminant",
            sp.discriminant_residual.is_zero(),
            format!(
                "derived {}, printed {}",
                render_nf(&sp.spectrum.discriminant),
                render_nf(&sp.printed_discriminant)
            ),
        ),
        comparison_check("single eigenvalue, components of a", &dg.single_vs_published),
        comparison_check("single eigenvalue, Ricci level", &dg.single_vs_ricci_level),
        comparison_check("two eigenvalues, Ricci level", &dg.two_ricci_level),
        comparison_check("two eigenvalues, components of a", &dg.two_vs_published),
        check("nabla rho is linear homogeneous in rho", gr.nabla_linear_homogeneous, ""),
        check(
            "restricted family has zero scalar curvature",
            restricted.ricci.tau.is_zero(),
            format!("tau = {}", render_nf(&restricted.ricci.tau)),
        ),
        check("P = A and B", inc.p_equals_a_cap_b(), format!("{} rational certificates", inc.items.len())),
        check("C is empty in the restricted family", inc.c_is_empty, ""),
        check("Killing form coefficients", rr.killing_mismatches.is_empty(), format!("{} mismatches", rr.killing_mismatches.len())),
        check("restricted systems do not involve d", rr.free_of_d, ""),
        check("restricted nabla rho agrees with substitution", rr.substitution_route_agrees, ""),
    ];
    for (name, _, c) in &rr.comparisons {
        reported.push(comparison_check(name, c));
    }

    let mut diffs = vec![
        diff("Einstein system", ClassTag::E, &gr.einstein),
        diff("single eigenvalue, components of a", ClassTag::Diagonal, &dg.single_vs_published),
        diff("two eigenvalues, components of a", ClassTag::Diagonal, &dg.two_vs_published),
    ];
    diffs.extend(rr.comparisons.iter().map(|(s, t, c)| diff(s, *t, c)));

    let mut failures: Vec<String> = must_match.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect();
    if strict {
        failures.extend(strict_checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()));
    }
    let mut report = empty("verify", None, status(failures, 3));
    report.concordance = Some(Concordance {
        strict,
        must_match,
        strict_checks,
        reported,
        tables: gr.tables.iter().map(table).collect(),
        diffs,
    });
    report
}

pub struct GeodesicParams {
    pub x0: [f64; 4],
    pub v0: [f64; 4],
    pub t_end: f64,
    pub dt: f64,
    pub csv: Option<PathBuf>,
}

fn state(s: &GeodesicState) -> State {
    State { t: s.t, x: s.x, v: s.v }
}

pub fn geodesic(input: Input, p: GeodesicParams) -> Result<Report, CliError> {
    let path = input.info.path.clone();
    let invalid = |message: String| CliError::Invalid { path: path.clone(), message };
    let sys = GeodesicSystem::from_spec(&input.spec).map_err(|e| invalid(e.to_string()))?;
    let mut summary = GeodesicSummary {
        x0: p.x0,
        v0: p.v0,
        t_end: p.t_end,
        dt: p.dt,
        steps: None,
        end: None,
        initial_energy: sys.energy(&GeodesicState { t: 0.0, x: p.x0, v: p.v0 }),
        max_energy_drift: None,
        csv: None,
        failure: None,
    };
    let mut failures = Vec::new();
    match sys.integrate(p.x0, p.v0, p.t_end, p.dt) {
        Ok(tr) => {
            summary.steps = Some(tr.steps);
            summary.end = Some(state(tr.last()));
            summary.max_energy_drift = Some(tr.max_energy_drift());
            if let Some(out) = &p.csv {
                let shown = out.display().to_string();
                let write_err = |source| CliError::Write { path: shown.clone(), source };
                let f = fs::File::create(out).map_err(write_err)?;
                let mut w = std::io::BufWriter::new(f);
                tr.write_csv(&mut w).map_err(write_err)?;
                std::io::Write::flush(&mut w).map_err(write_err)?;
                summary.csv = Some(shown);
            }
        }
        Err(e @ (GeodesicError::PoleEvaluation { .. } | GeodesicError::Divergence { .. })) => {
            let (kind, last) = match &e {
                GeodesicError::PoleEvaluation { last } => ("pole", last),
                GeodesicError::Divergence { last } => ("divergence", last),
                _ => unreachable!(),
            };
            let locus = singular_locus(&input.spec).map_err(|e| invalid(e.to_string()))?;
            failures.push(format!("geodesic integration stopped: {e}"));
            summary.failure = Some(GeodesicFailure {
                kind,
                message: e.to_string(),
                last: state(last),
                locus: locus.iter().map(render_nf).collect(),
            });
        }
        Err(e) => return Err(invalid(e.to_string())),
    }
    let mut report = empty("geodesic", Some(input.info), status(failures, 4));
    report.geodesic = Some(summary);
    Ok(report)
}
