//! Report model shared by every command, with JSON and text renderings.
//!
//! Field order is fixed by the struct definitions and every list is built in
//! canonical index order, so identical input gives byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: Tool,
    pub command: &'static str,
    pub input: Option<InputInfo>,
    pub tensors: Option<Vec<Section>>,
    pub classification: Option<Classification>,
    pub concordance: Option<Concordance>,
    pub geodesic: Option<GeodesicSummary>,
    pub status: Status,
}

#[derive(Serialize, Debug)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Tool {
        Tool { name: "walker", version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Serialize, Debug)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub mode: &'static str,
    pub concrete: bool,
    /// Functions set to 0 because the file leaves them out.
    pub defaulted: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct Component {
    /// 1-based.
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Serialize, Debug)]
pub struct Section {
    pub name: &'static str,
    pub notation: &'static str,
    pub count: usize,
    pub components: Vec<Component>,
}

#[derive(Serialize, Debug)]
pub struct Classification {
    pub classes: Vec<ClassResult>,
    pub paper_diff: Option<Vec<Diff>>,
}

#[derive(Serialize, Debug)]
pub struct ClassResult {
    pub class: String,
    pub name: &'static str,
    pub generators: Vec<String>,
    /// Absent when the input leaves a family function undefined.
    pub verdict: Option<VerdictOut>,
}

#[derive(Serialize, Debug)]
pub struct VerdictOut {
    /// `holds`, `holds_off_singular_set` or `fails`.
    pub status: &'static str,
    pub locus: Vec<String>,
    pub residuals: Vec<Residual>,
}

#[derive(Serialize, Debug)]
pub struct Residual {
    /// 1-based generator number.
    pub generator: usize,
    pub expr: String,
    pub value: String,
}

#[derive(Serialize, Debug)]
pub struct Diff {
    pub statement: String,
    pub class: String,
    pub equivalent: bool,
    pub stated: Vec<MatchOut>,
    pub derived: Vec<MatchOut>,
}

#[derive(Serialize, Debug)]
pub struct MatchOut {
    pub generator: String,
    pub relation: &'static str,
    pub detail: String,
}

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Serialize, Debug)]
pub struct Discrepancy {
    pub index: Vec<usize>,
    pub computed: String,
    pub published: Option<String>,
    pub residual: String,
}

#[derive(Serialize, Debug)]
pub struct Table {
    pub name: &'static str,
    pub checked: usize,
    pub listed: usize,
    pub clean: bool,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Serialize, Debug)]
pub struct Concordance {
    pub strict: bool,
    pub must_match: Vec<Check>,
    pub strict_checks: Vec<Check>,
    pub reported: Vec<Check>,
    pub tables: Vec<Table>,
    pub diffs: Vec<Diff>,
}

#[derive(Serialize, Debug)]
pub struct State {
    pub t: f64,
    pub x: [f64; 4],
    pub v: [f64; 4],
}

#[derive(Serialize, Debug)]
pub struct GeodesicFailure {
    /// `pole` or `divergence`.
    pub kind: &'static str,
    pub message: String,
    pub last: State,
    pub locus: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct GeodesicSummary {
    pub x0: [f64; 4],
    pub v0: [f64; 4],
    pub t_end: f64,
    pub dt: f64,
    pub steps: Option<usize>,
    pub end: Option<State>,
    pub initial_energy: Option<f64>,
    pub max_energy_drift: Option<f64>,
    pub csv: Option<String>,
    pub failure: Option<GeodesicFailure>,
}

#[derive(Serialize, Debug)]
pub struct Status {
    pub exit_code: i32,
    pub failures: Vec<String>,
}

fn label(notation: &str, index: &[usize]) -> String {
    let mut digits = index.iter().map(|d| char::from(b'0' + *d as u8));
    let mut out = String::new();
    for c in notation.chars() {
        match c {
            '#' => out.push(digits.next().unwrap_or('?')),
            c => out.push(c),
        }
    }
    out
}

fn yes(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn write_check(out: &mut String, ch: &Check) {
    let _ = write!(out, "  {:4} {}", yes(ch.ok), ch.name);
    let _ = if ch.detail.is_empty() { writeln!(out) } else { writeln!(out, ": {}", ch.detail) };
}

fn write_diff(out: &mut String, d: &Diff) {
    let covered = |ms: &[MatchOut]| ms.iter().filter(|m| m.relation != "unmatched").count();
    let _ = writeln!(
        out,
        "  {} [{}]: stated {}/{} covered, derived {}/{} covered{}",
        d.statement,
        d.class,
        covered(&d.stated),
        d.stated.len(),
        covered(&d.derived),
        d.derived.len(),
        if d.equivalent { ", equivalent" } else { "" }
    );
    for (side, ms) in [("stated", &d.stated), ("derived", &d.derived)] {
        for (k, m) in ms.iter().enumerate() {
            let _ = writeln!(out, "    {side} {}: {} = 0  ({}{})", k + 1, m.generator, m.relation, m.detail);
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.tool.name, self.tool.version, self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {} (sha256 {})", i.path, i.sha256);
            let _ = writeln!(out, "mode: {}{}", i.mode, if i.concrete { ", concrete" } else { ", symbolic" });
            if !i.defaulted.is_empty() {
                let _ = writeln!(out, "defaulted to 0: {}", i.defaulted.join(", "));
            }
        }
        if let Some(sections) = &self.tensors {
            for s in sections {
                let noun = if s.count == 1 { "component" } else { "components" };
                let _ = writeln!(out, "\n[{}] {} {noun}", s.name, s.count);
                for c in &s.components {
                    let _ = writeln!(out, "  {} = {}", label(s.notation, &c.index), c.value);
                }
            }
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(out);
            for r in &c.classes {
                let _ = writeln!(out, "[{}] {}: {} generators", r.class, r.name, r.generators.len());
                match &r.verdict {
                    None => {
                        for (k, g) in r.generators.iter().enumerate() {
                            let _ = writeln!(out, "  {}: {g} = 0", k + 1);
                        }
                    }
                    Some(v) => {
                        let _ = writeln!(out, "  verdict: {}", v.status);
                        for l in &v.locus {
                            let _ = writeln!(out, "  note: defined off the pole locus {l} = 0");
                        }
                        for res in &v.residuals {
                            let _ = writeln!(out, "  residual {}: {} -> {}", res.generator, res.expr, res.value);
                        }
                    }
                }
            }
            if let Some(diffs) = &c.paper_diff {
                let _ = writeln!(out, "\npublished statements:");
                diffs.iter().for_each(|d| write_diff(&mut out, d));
            }
        }
        if let Some(c) = &self.concordance {
            let _ = writeln!(out, "\nmust match:");
            c.must_match.iter().for_each(|ch| write_check(&mut out, ch));
            let _ = writeln!(out, "\nstrict{}:", if c.strict { "" } else { " (not enforced)" });
            c.strict_checks.iter().for_each(|ch| write_check(&mut out, ch));
            let _ = writeln!(out, "\nreported:");
            c.reported.iter().for_each(|ch| write_check(&mut out, ch));
            let _ = writeln!(out, "\ntables:");
            for t in &c.tables {
                let _ = writeln!(out, "  {}: {} checked, {} listed, {} discrepancies", t.name, t.checked, t.listed, t.discrepancies.len());
                for d in &t.discrepancies {
                    let idx: Vec<String> = d.index.iter().map(ToString::to_string).collect();
                    let published = d.published.as_deref().unwrap_or("(not listed)");
                    let _ = writeln!(out, "    [{}] computed {}, published {}", idx.join(","), d.computed, published);
                }
            }
            let _ = writeln!(out, "\ndiffs:");
            c.diffs.iter().for_each(|d| write_diff(&mut out, d));
        }
        if let Some(g) = &self.geodesic {
            let _ = writeln!(out, "\ngeodesic: x0 = {:?}, v0 = {:?}, t = {}, dt = {}", g.x0, g.v0, g.t_end, g.dt);
            if let (Some(steps), Some(end)) = (g.steps, &g.end) {
                let _ = writeln!(out, "  steps: {steps}");
                let _ = writeln!(out, "  end: t = {}, x = {:?}, v = {:?}", end.t, end.x, end.v);
            }
            if let Some(e) = g.initial_energy {
                let _ = writeln!(out, "  initial energy: {e}");
            }
            if let Some(d) = g.max_energy_drift {
                let _ = writeln!(out, "  max energy drift: {d}");
            }
            if let Some(p) = &g.csv {
                let _ = writeln!(out, "  trajectory written to {p}");
            }
            if let Some(f) = &g.failure {
                let _ = writeln!(out, "  failed ({}): {}", f.kind, f.message);
                let _ = writeln!(out, "  last good state: t = {}, x = {:?}, v = {:?}", f.last.t, f.last.x, f.last.v);
                for l in &f.locus {
                    let _ = writeln!(out, "  note: the metric has a pole on {l} = 0");
                }
            }
        }
        if !self.status.failures.is_empty() {
            let _ = writeln!(out, "\nfailures:");
            for f in &self.status.failures {
                let _ = writeln!(out, "  {f}");
            }
        }
        out
    }
}
