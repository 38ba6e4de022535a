//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use walker::analysis::Analysis;
use walker::classify::{membership, ClassTag, MatchKind, Verdict};
use walker::concordance::{
    connection_report, curvature_report, einstein_tensor_report, general_report, nabla_report, operator_report,
    restricted_report, ricci_report, spectral_report,
};
use walker::curvature::{abstract_at_zero, nabla_ricci_abstract};
use walker::exec::Exec;
use walker::exprparse::{parse, parse_expr, render, render_nf};
use walker::geodesic::GeodesicSystem;
use walker::symcore::NormalForm;
use walker::tables;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit, format!("{s:.2}s, limit {limit}s"))
}

fn connection() -> Outcome {
    let t0 = Instant::now();
    let an = Analysis::general(Exec::default());
    let rep = connection_report(&an);
    let nonzero = an.connection.nonzero().len();
    let (fast, time) = within(t0.elapsed(), 5.0);
    outcome(
        rep.is_clean() && rep.checked == 40 && nonzero == 14 && fast,
        format!("{} components compared, {} nonzero, {} discrepancies, {time}", rep.checked, nonzero, rep.discrepancies.len()),
    )
}

fn curvature() -> Outcome {
    let t0 = Instant::now();
    let an = Analysis::general(Exec::default());
    let rep = curvature_report(&an);
    let listed_ok = rep.is_clean() && an.riemann.nonzero().len() == tables::CURVATURE.len();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for n in 0..10 {
        let a = common::random_poly(&mut rng, 3);
        let m = Analysis::new(a.clone(), walker::classify::Context::General, Exec::default()).unwrap();
        let sym = m.riemann.symmetry_violations();
        let bianchi = m.riemann.second_bianchi_violations(&m.connection, Exec::default());
        if !sym.is_empty() || !bianchi.is_empty() {
            failures.push(format!("sample {n} a = {}", render_nf(&a)));
        }
    }
    let (fast, time) = within(t0.elapsed(), 30.0);
    outcome(
        listed_ok && failures.is_empty() && fast,
        format!(
            "{} representatives, {} discrepancies; symmetry and Bianchi failures on random cubics: {}; {time}",
            rep.checked,
            rep.discrepancies.len(),
            if failures.is_empty() { "none".to_string() } else { failures.join(", ") }
        ),
    )
}

fn ricci() -> Outcome {
    let t0 = Instant::now();
    let an = Analysis::general(Exec::default());
    let rho = ricci_report(&an);
    let f = einstein_tensor_report(&an);
    let q = operator_report(&an);
    let tau = (&an.ricci.tau - &tables::load(tables::SCALAR_CURVATURE, &tables::general_scope())).is_zero();
    let trace: NormalForm = (0..4)
        .flat_map(|j| (0..4).map(move |k| (j, k)))
        .map(|(j, k)| &an.metric.ginv[j][k] * &an.ricci.f[j][k])
        .sum();
    let spectral = spectral_report(&an);
    let (fast, time) = within(t0.elapsed(), 10.0);
    let ok = rho.is_clean() && f.is_clean() && q.is_clean() && tau && trace.is_zero() && spectral.char_poly_residual.is_zero();
    outcome(
        ok && fast,
        format!(
            "Ricci {} / Einstein tensor {} / operator {} discrepancies; tau {}; trace F {}; char poly {}; {time}",
            rho.discrepancies.len(),
            f.discrepancies.len(),
            q.discrepancies.len(),
            if tau { "ok" } else { "differs" },
            if trace.is_zero() { "0" } else { "nonzero" },
            if spectral.char_poly_residual.is_zero() { "matches" } else { "differs" },
        ),
    )
}

fn nabla() -> Outcome {
    let an = Analysis::general(Exec::default());
    let rep = nabla_report(&an);
    let abs = nabla_ricci_abstract(&an.connection);
    let homogeneous = abstract_at_zero(&abs).nonzero().is_empty();
    let mismatched = rep.discrepancies.iter().filter(|d| d.published.is_some()).count();
    let unlisted: Vec<String> = rep
        .discrepancies
        .iter()
        .filter(|d| d.published.is_none())
        .map(|d| format!("({}){}{}", d.index[0], d.index[1], d.index[2]))
        .collect();
    outcome(
        rep.checked == 40 && homogeneous,
        format!(
            "{} components computed; {} of {} published entries differ; nonzero but unlisted: {}; abstract variant vanishes at rho = 0: {}",
            rep.checked,
            mismatched,
            rep.listed,
            if unlisted.is_empty() { "none".to_string() } else { unlisted.join(" ") },
            homogeneous
        ),
    )
}

const EXAMPLE: &str = "func b(x3,x4) = 1/(2 - x3/2 - x4/2)\nfunc c(x3,x4) = 1/(2 - x3/2 - x4/2)\nfunc d(x3,x4) = 0\n";

fn restricted() -> Outcome {
    let an = Analysis::restricted(Exec::default());
    let rep = restricted_report(&an, None);
    let einstein = &rep.comparisons[0].2;
    let spec = parse(EXAMPLE).unwrap();
    let locus_expected = parse_expr("x3 + x4 - 4", &walker::exprparse::Scope::default()).unwrap().normalize().unwrap();
    let mut verdicts = Vec::new();
    let mut all_hold = true;
    for tag in ClassTag::CLASSES {
        let v = membership(&spec, &rep.systems[&tag]).unwrap();
        let ok = match &v {
            Verdict::HoldsOffSingularSet { locus } => *locus == vec![locus_expected.clone()],
            _ => false,
        };
        all_hold &= ok;
        verdicts.push(format!("{tag}:{}", if ok { "holds off x3 + x4 - 4 = 0" } else { "unexpected" }));
    }
    outcome(
        an.ricci.tau.is_zero() && einstein.equivalent() && all_hold,
        format!(
            "tau = {}; Einstein conditions equivalent: {}; example {}",
            render_nf(&an.ricci.tau),
            einstein.equivalent(),
            verdicts.join(", ")
        ),
    )
}

fn class_algebra() -> Outcome {
    let an = Analysis::restricted(Exec::default());
    let general = Analysis::general(Exec::default());
    let rep = restricted_report(&an, Some(&general));
    let inc = &rep.inclusions;
    let summary: Vec<String> = rep
        .comparisons
        .iter()
        .map(|(name, _, c)| format!("{name}: stated {}/{} covered, derived {}/{} covered", c.stated_covered(), c.stated.len(), c.derived_covered(), c.derived.len()))
        .collect();
    for (name, _, c) in &rep.comparisons {
        for m in c.stated.iter().filter(|m| m.kind == MatchKind::Unmatched) {
            println!("    {name}: stated generator not in the derived span: {}", render_nf(&m.generator));
        }
    }
    outcome(
        inc.p_equals_a_cap_b() && inc.c_is_empty && inc.e_generators_are_ricci_components && inc.nabla_linear_homogeneous,
        format!(
            "P ⊆ A∩B and A∩B ⊆ P certified over {} generators; C empty: {}; E generators are Ricci components: {}; {}",
            inc.items.len(),
            inc.c_is_empty,
            inc.e_generators_are_ricci_components,
            summary.join("; ")
        ),
    )
}

fn geodesics() -> Outcome {
    let t0 = Instant::now();
    let flat = GeodesicSystem::new(&NormalForm::zero()).unwrap();
    let tr = flat.integrate([0.0; 4], [1.0, 2.0, 3.0, 4.0], 1.0, 1e-3).unwrap();
    let flat_err = tr.last().x.iter().zip([1.0, 2.0, 3.0, 4.0]).map(|(x, w)| (x - w).abs()).fold(0.0, f64::max);
    let flat_ok = flat_err <= 1e-12 && tr.max_energy_drift() == 0.0;

    let sq = parse_expr("x1^2", &walker::exprparse::Scope::default()).unwrap().normalize().unwrap();
    let sys = GeodesicSystem::new(&sq).unwrap();
    let tr = sys.integrate([0.0; 4], [1.0, 0.0, 1.0, 0.0], 1.0, 1e-3).unwrap();
    let drift = tr.max_energy_drift();

    let ratio = order_ratio();
    let (fast, time) = within(t0.elapsed(), 5.0);
    outcome(
        flat_ok && drift <= 1e-8 && (12.0..=20.0).contains(&ratio) && fast,
        format!("flat endpoint error {flat_err:.1e}; energy drift {drift:.2e}; RK4 order factor {ratio:.2}; {time}"),
    )
}

/// Endpoint error ratio e(h)/e(h/2) against an h/8 reference.
fn order_ratio() -> f64 {
    let a = parse_expr("x1^2 + x2*x3", &walker::exprparse::Scope::default()).unwrap().normalize().unwrap();
    let sys = GeodesicSystem::new(&a).unwrap();
    let x0 = [0.1, 0.2, 0.0, 0.3];
    let v0 = [0.5, 0.2, 0.5, 0.3];
    let h = 0.1;
    let end = |dt: f64| {
        let s = *sys.integrate(x0, v0, 1.0, dt).unwrap().last();
        [s.x, s.v].concat()
    };
    let reference = end(h / 8.0);
    let err = |y: Vec<f64>| y.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    err(end(h)) / err(end(h / 2.0))
}

fn parser() -> Outcome {
    let scope = common::scope();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut round_trips = 0;
    let mut failures = 0;
    while round_trips < 1000 {
        let e = common::random_expr(&mut rng, 4);
        let Ok(nf) = e.normalize() else { continue };
        let text = render(&e);
        match parse_expr(&text, &scope).map(|p| p.normalize()) {
            Ok(Ok(back)) if back == nf => {}
            _ => failures += 1,
        }
        let text = render_nf(&nf);
        match parse_expr(&text, &scope).map(|p| p.normalize()) {
            Ok(Ok(back)) if back == nf => {}
            _ => failures += 1,
        }
        round_trips += 1;
    }
    let crashes = fuzz(100_000);
    outcome(
        failures == 0 && crashes == 0,
        format!("{round_trips} expressions round-tripped with {failures} failures; fuzz: 100000 inputs, {crashes} crashes"),
    )
}

const ALPHABET: &[u8] = b"x1234abcd_+-*/^()=, \n#funcset.0123456789k";

fn fuzz(n: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let seeds = [EXAMPLE, "func a(x1,x2,x3,x4) = x1^2 + a", "set mode = restricted\nfunc b(x3,x4)\nfunc c(x3,x4)\n"];
    let scope = common::scope();
    let mut crashes = 0;
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for i in 0..n {
        let input: Vec<u8> = match i % 3 {
            0 => (0..rng.random_range(0..40)).map(|_| rng.random::<u8>()).collect(),
            1 => (0..rng.random_range(0..40)).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())]).collect(),
            _ => {
                let mut s = seeds[rng.random_range(0..seeds.len())].as_bytes().to_vec();
                for _ in 0..rng.random_range(1..4) {
                    let pos = rng.random_range(0..=s.len());
                    match rng.random_range(0..3) {
                        0 if pos < s.len() => {
                            s.remove(pos);
                        }
                        1 => s.insert(pos, ALPHABET[rng.random_range(0..ALPHABET.len())]),
                        _ if pos < s.len() => s[pos] = rng.random(),
                        _ => {}
                    }
                }
                s
            }
        };
        let text = String::from_utf8_lossy(&input).into_owned();
        let result = catch_unwind(AssertUnwindSafe(|| {
            let _ = parse(&text);
            let _ = parse_expr(&text, &scope);
        }));
        if result.is_err() {
            crashes += 1;
        }
    }
    std::panic::set_hook(hook);
    crashes
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("connection concordance", connection),
        ("curvature concordance and identities", curvature),
        ("Ricci suite", ricci),
        ("covariant derivative of Ricci", nabla),
        ("restricted family", restricted),
        ("class algebra", class_algebra),
        ("geodesics", geodesics),
        ("parser", parser),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, n + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    let report = general_report(&Analysis::general(Exec::default()));
    println!(
        "note: derived eigenvalue discriminant {}, printed {}",
        render_nf(&report.spectral.spectrum.discriminant),
        render_nf(&report.spectral.printed_discriminant)
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
