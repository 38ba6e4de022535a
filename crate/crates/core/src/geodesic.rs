//! Numeric geodesics: compiled evaluators and fixed-step RK4.

use std::collections::HashMap;
use std::io::{self, Write};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exec::Exec;
use crate::exprparse::ProblemSpec;
use crate::symcore::{Atom, NormalForm, Poly, SymError};
use crate::walker::{christoffel, geodesic_rhs_symbolic, metric_from_function, velocity_atom, WalkerError};

/// Magnitude beyond which a state component counts as divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;
/// Denominators smaller than this in magnitude are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub x: [f64; 4],
    pub v: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error("symbol `{0}` has no numeric value; the problem must be fully concrete")]
    UnresolvedSymbol(String),
    #[error("a pole of the geodesic equations lies within the step after t = {}", last.t)]
    PoleEvaluation { last: GeodesicState },
    #[error("solution diverges after t = {}", last.t)]
    Divergence { last: GeodesicState },
    #[error("step size and end time must be positive and finite")]
    InvalidStep,
    #[error(transparent)]
    Walker(#[from] WalkerError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Const(u64),
    Var(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

/// A straight-line program evaluating several normal forms at once, with
/// shared subexpressions computed once.
#[derive(Clone, Debug)]
pub struct Program {
    ops: Vec<Op>,
    outputs: Vec<(usize, usize)>,
    nvars: usize,
}

struct Builder {
    ops: Vec<Op>,
    memo: HashMap<Op, usize>,
}

impl Builder {
    fn push(&mut self, op: Op) -> usize {
        if let Some(&r) = self.memo.get(&op) {
            return r;
        }
        self.ops.push(op);
        self.memo.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn constant(&mut self, c: f64) -> usize {
        self.push(Op::Const(c.to_bits()))
    }

    fn mul(&mut self, a: usize, b: usize) -> usize {
        self.push(Op::Mul(a.min(b), a.max(b)))
    }

    fn pow(&mut self, base: usize, e: u32) -> usize {
        match e {
            1 => base,
            _ if e % 2 == 0 => {
                let h = self.pow(base, e / 2);
                self.mul(h, h)
            }
            _ => {
                let h = self.pow(base, e - 1);
                self.mul(h, base)
            }
        }
    }

    fn poly(&mut self, p: &Poly, vars: &[Atom]) -> Result<usize, GeodesicError> {
        let mut acc: Option<usize> = None;
        for (m, c) in p.terms() {
            let mut term = None;
            for (atom, e) in m.factors() {
                let i = vars
                    .iter()
                    .position(|v| v == atom)
                    .ok_or_else(|| GeodesicError::UnresolvedSymbol(atom.to_string()))?;
                let v = self.push(Op::Var(i));
                let f = self.pow(v, *e);
                term = Some(match term {
                    None => f,
                    Some(t) => self.mul(t, f),
                });
            }
            let coeff = c.to_f64().unwrap_or(f64::NAN);
            let t = match term {
                None => self.constant(coeff),
                Some(t) if coeff == 1.0 => t,
                Some(t) => {
                    let k = self.constant(coeff);
                    self.mul(k, t)
                }
            };
            acc = Some(match acc {
                None => t,
                Some(a) => self.push(Op::Add(a, t)),
            });
        }
        Ok(match acc {
            Some(a) => a,
            None => self.constant(0.0),
        })
    }
}

impl Program {
    /// Compiles `exprs` over the variables `vars` (in that order).
    pub fn compile(exprs: &[NormalForm], vars: &[Atom]) -> Result<Program, GeodesicError> {
        let mut b = Builder { ops: Vec::new(), memo: HashMap::new() };
        let mut outputs = Vec::with_capacity(exprs.len());
        for e in exprs {
            let num = b.poly(e.num(), vars)?;
            let den = b.poly(e.den(), vars)?;
            outputs.push((num, den));
        }
        Ok(Program { ops: b.ops, outputs, nvars: vars.len() })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Evaluates every output; `Err(())` signals a pole.
    pub fn eval(&self, vars: &[f64], scratch: &mut Vec<f64>, out: &mut [f64]) -> Result<(), ()> {
        debug_assert_eq!(vars.len(), self.nvars);
        scratch.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Const(bits) => f64::from_bits(bits),
                Op::Var(i) => vars[i],
                Op::Add(a, b) => scratch[a] + scratch[b],
                Op::Mul(a, b) => scratch[a] * scratch[b],
            };
            scratch.push(v);
        }
        for (o, &(n, d)) in out.iter_mut().zip(&self.outputs) {
            let den = scratch[d];
            if den.abs() < POLE_THRESHOLD {
                return Err(());
            }
            *o = scratch[n] / den;
        }
        Ok(())
    }

    /// Sign bits of the output denominators from the last [`Program::eval`].
    fn denominator_signs(&self, scratch: &[f64]) -> u64 {
        self.outputs.iter().enumerate().fold(0, |acc, (k, &(_, d))| acc | (u64::from(scratch[d] < 0.0) << (k % 64)))
    }
}

/// A single compiled expression in `x1..x4`.
#[derive(Clone, Debug)]
pub struct Evaluator {
    program: Program,
}

impl Evaluator {
    pub fn compile(e: &NormalForm) -> Result<Evaluator, GeodesicError> {
        let vars: Vec<Atom> = (1..=4).map(Atom::coord).collect();
        Ok(Evaluator { program: Program::compile(std::slice::from_ref(e), &vars)? })
    }

    /// `None` at a pole.
    pub fn eval(&self, x: [f64; 4]) -> Option<f64> {
        let mut out = [0.0];
        self.program.eval(&x, &mut Vec::new(), &mut out).ok()?;
        Some(out[0])
    }
}

/// The compiled geodesic system of one defining function.
#[derive(Clone, Debug)]
pub struct GeodesicSystem {
    /// Outputs: the four accelerations, then `a`.
    program: Program,
}

impl GeodesicSystem {
    pub fn new(a: &NormalForm) -> Result<GeodesicSystem, GeodesicError> {
        let m = metric_from_function(a.clone())?;
        let rhs = geodesic_rhs_symbolic(&christoffel(&m));
        let mut exprs: Vec<NormalForm> = rhs.to_vec();
        exprs.push(a.clone());
        let vars: Vec<Atom> = (1..=4).map(Atom::coord).chain((0..4).map(velocity_atom)).collect();
        Ok(GeodesicSystem { program: Program::compile(&exprs, &vars)? })
    }

    pub fn from_spec(spec: &ProblemSpec) -> Result<GeodesicSystem, GeodesicError> {
        GeodesicSystem::new(&spec.defining_function()?)
    }

    /// Accelerations, the value of `a` and the denominator signs at a state.
    fn eval(&self, x: &[f64; 4], v: &[f64; 4], scratch: &mut Vec<f64>) -> Option<([f64; 4], f64, u64)> {
        let vars = [x[0], x[1], x[2], x[3], v[0], v[1], v[2], v[3]];
        let mut out = [0.0; 5];
        self.program.eval(&vars, scratch, &mut out).ok()?;
        Some(([out[0], out[1], out[2], out[3]], out[4], self.program.denominator_signs(scratch)))
    }

    /// `g(γ̇, γ̇) = 2(v1·v3 + v2·v4) + a·(v3² + v4²)`.
    pub fn energy(&self, s: &GeodesicState) -> Option<f64> {
        let (_, a, _) = self.eval(&s.x, &s.v, &mut Vec::new())?;
        Some(energy(a, &s.v))
    }

    /// Classic RK4 with fixed step `dt`; the last step is shortened to land
    /// on `t_end` exactly.
    ///
    /// A step whose stages see a denominator change sign has jumped over a
    /// pole and is reported as [`GeodesicError::PoleEvaluation`].
    pub fn integrate(&self, x0: [f64; 4], v0: [f64; 4], t_end: f64, dt: f64) -> Result<Trajectory, GeodesicError> {
        if !(dt > 0.0 && t_end > 0.0 && dt.is_finite() && t_end.is_finite()) {
            return Err(GeodesicError::InvalidStep);
        }
        let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
        let mut scratch = Vec::with_capacity(self.program.len());
        let mut state = GeodesicState { t: 0.0, x: x0, v: v0 };
        let pole = |last| GeodesicError::PoleEvaluation { last };
        let (_, a0, mut signs) = self.eval(&x0, &v0, &mut scratch).ok_or(pole(state))?;
        let mut samples = Vec::with_capacity(steps + 1);
        let mut energies = Vec::with_capacity(steps + 1);
        samples.push(state);
        energies.push(energy(a0, &v0));
        // Kahan compensation for the running position and velocity sums.
        let mut comp = [0.0f64; 8];
        for n in 1..=steps {
            let t_next = if n == steps { t_end } else { n as f64 * dt };
            let h = t_next - state.t;
            let (dx, dv) = self.rk4_increment(&state, h, signs, &mut scratch).ok_or(pole(state))?;
            let mut next = GeodesicState { t: t_next, ..state };
            for i in 0..4 {
                compensated_add(&mut next.x[i], &mut comp[i], dx[i]);
                compensated_add(&mut next.v[i], &mut comp[4 + i], dv[i]);
            }
            if next.x.iter().chain(&next.v).any(|c| !c.is_finite() || c.abs() > DIVERGENCE_BOUND) {
                return Err(GeodesicError::Divergence { last: state });
            }
            let (_, a, next_signs) = self.eval(&next.x, &next.v, &mut scratch).ok_or(pole(state))?;
            if next_signs != signs {
                return Err(pole(state));
            }
            signs = next_signs;
            state = next;
            samples.push(state);
            energies.push(energy(a, &state.v));
        }
        Ok(Trajectory { samples, energy: energies, dt, steps })
    }

    /// Position and velocity increments of one RK4 step.
    fn rk4_increment(&self, s: &GeodesicState, h: f64, signs: u64, scratch: &mut Vec<f64>) -> Option<([f64; 4], [f64; 4])> {
        let deriv = |x: &[f64; 4], v: &[f64; 4], scratch: &mut Vec<f64>| {
            self.eval(x, v, scratch).filter(|&(_, _, sg)| sg == signs).map(|(acc, _, _)| acc)
        };
        let along = |base: &[f64; 4], d: &[f64; 4], f: f64| -> [f64; 4] { std::array::from_fn(|i| base[i] + f * d[i]) };
        let k1x = s.v;
        let k1v = deriv(&s.x, &s.v, scratch)?;
        let k2x = along(&s.v, &k1v, h / 2.0);
        let k2v = deriv(&along(&s.x, &k1x, h / 2.0), &k2x, scratch)?;
        let k3x = along(&s.v, &k2v, h / 2.0);
        let k3v = deriv(&along(&s.x, &k2x, h / 2.0), &k3x, scratch)?;
        let k4x = along(&s.v, &k3v, h);
        let k4v = deriv(&along(&s.x, &k3x, h), &k4x, scratch)?;
        let combine = |k1: &[f64; 4], k2: &[f64; 4], k3: &[f64; 4], k4: &[f64; 4]| -> [f64; 4] {
            std::array::from_fn(|i| h * ((k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0))
        };
        Some((combine(&k1x, &k2x, &k3x, &k4x), combine(&k1v, &k2v, &k3v, &k4v)))
    }

    /// Integrates independent initial conditions, possibly concurrently.
    pub fn integrate_many(
        &self,
        initial: &[([f64; 4], [f64; 4])],
        t_end: f64,
        dt: f64,
        exec: Exec,
    ) -> Vec<Result<Trajectory, GeodesicError>> {
        exec.map(initial, |(x0, v0)| self.integrate(*x0, *v0, t_end, dt))
    }
}

fn compensated_add(sum: &mut f64, comp: &mut f64, term: f64) {
    let y = term - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

fn energy(a: f64, v: &[f64; 4]) -> f64 {
    2.0 * (v[0] * v[2] + v[1] * v[3]) + a * (v[2] * v[2] + v[3] * v[3])
}

/// Integrates the geodesic through `(x0, v0)` of a concrete problem.
pub fn integrate(spec: &ProblemSpec, x0: [f64; 4], v0: [f64; 4], t_end: f64, dt: f64) -> Result<Trajectory, GeodesicError> {
    GeodesicSystem::from_spec(spec)?.integrate(x0, v0, t_end, dt)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<GeodesicState>,
    /// `g(γ̇, γ̇)` at each sample.
    pub energy: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &GeodesicState {
        self.samples.last().expect("trajectory has the initial sample")
    }

    /// `max |E(t) − E(0)|`.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }

    /// Columns `t, x1..x4, v1..v4, energy`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x1,x2,x3,x4,v1,v2,v3,v4,energy")?;
        for (s, e) in self.samples.iter().zip(&self.energy) {
            write!(w, "{}", s.t)?;
            for c in s.x.iter().chain(&s.v) {
                write!(w, ",{c}")?;
            }
            writeln!(w, ",{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprparse::{parse_expr, Scope};

    fn nf(s: &str) -> NormalForm {
        parse_expr(s, &Scope::default()).unwrap().normalize().unwrap()
    }

    #[test]
    fn evaluator_basics() {
        assert_eq!(Evaluator::compile(&nf("x1 + x3^2")).unwrap().eval([1.0, 0.0, 2.0, 0.0]), Some(5.0));
        let b = Evaluator::compile(&nf("1/(2 - x3/2 - x4/2)")).unwrap();
        assert_eq!(b.eval([0.0; 4]), Some(0.5));
        assert_eq!(Evaluator::compile(&nf("1/x3")).unwrap().eval([1.0, 1.0, 0.0, 1.0]), None);
    }

    #[test]
    fn jets_are_rejected() {
        let scope = Scope::with_funcs([("a", crate::symcore::ArgSet::ALL)]);
        let a = parse_expr("a_1", &scope).unwrap().normalize().unwrap();
        assert!(matches!(Evaluator::compile(&a), Err(GeodesicError::UnresolvedSymbol(s)) if s == "a_1"));
    }

    #[test]
    fn shared_subexpressions() {
        let p = Program::compile(&[nf("x1^2*x2"), nf("x1^2*x2 + 3")], &[Atom::coord(1), Atom::coord(2)]).unwrap();
        // x1, x1^2, x2, x1^2·x2, 1, 3, sum
        assert!(p.len() <= 7, "{}", p.len());
    }

    #[test]
    fn flat_lines() {
        let sys = GeodesicSystem::new(&NormalForm::zero()).unwrap();
        let tr = sys.integrate([0.0; 4], [1.0, 2.0, 3.0, 4.0], 1.0, 0.1).unwrap();
        for (x, want) in tr.last().x.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((x - want).abs() <= 4.0 * f64::EPSILON * want, "{x}");
        }
        let long = sys.integrate([-1.0, -2.0, 0.5, 0.0], [-1.0, 0.25, 3.0, -4.0], 1.0, 1e-3).unwrap();
        for (x, want) in long.last().x.iter().zip([-2.0, -1.75, 3.5, -4.0]) {
            assert!((x - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "{x}");
        }
        assert_eq!(tr.last().t, 1.0);
        assert!(tr.energy.iter().all(|&e| e == 22.0));
    }

    #[test]
    fn energy_is_conserved() {
        let sys = GeodesicSystem::new(&nf("x1^2")).unwrap();
        let tr = sys.integrate([0.0; 4], [1.0, 0.0, 1.0, 0.0], 1.0, 1e-3).unwrap();
        assert_eq!(tr.energy[0], 2.0);
        assert!(tr.max_energy_drift() <= 1e-8, "{}", tr.max_energy_drift());
        // a_2 = 0: x4 stays linear
        assert!(tr.samples.iter().all(|s| (s.x[3] - 0.0).abs() < 1e-15 && s.v[3] == 0.0));
    }

    #[test]
    fn pole_and_divergence() {
        let b = "1/(2 - x3/2 - x4/2)";
        let a = nf(&format!("x1*{b} + x2*{b}"));
        let sys = GeodesicSystem::new(&a).unwrap();
        let err = sys.integrate([0.0, 0.0, 4.0, 0.0], [0.0; 4], 1.0, 0.1).unwrap_err();
        assert!(matches!(err, GeodesicError::PoleEvaluation { .. }));
        let blowup = GeodesicSystem::new(&nf("x1^3")).unwrap();
        let err = blowup.integrate([1.0, 0.0, 0.0, 0.0], [10.0, 0.0, 10.0, 0.0], 50.0, 0.01).unwrap_err();
        assert!(matches!(err, GeodesicError::Divergence { .. } | GeodesicError::PoleEvaluation { .. }), "{err:?}");
        assert_eq!(sys.integrate([0.0; 4], [0.0; 4], 1.0, 0.0).unwrap_err(), GeodesicError::InvalidStep);
    }

    #[test]
    fn stepping_over_a_pole_is_caught() {
        let b = "1/(2 - x3/2 - x4/2)";
        let sys = GeodesicSystem::new(&nf(&format!("x1*{b} + x2*{b}"))).unwrap();
        match sys.integrate([0.0, 0.0, 1.9, 1.9], [0.0, 0.0, 1.0, 1.0], 3.0, 0.01).unwrap_err() {
            GeodesicError::PoleEvaluation { last } => assert!(last.x[2] + last.x[3] < 4.0, "{last:?}"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let sys = GeodesicSystem::new(&NormalForm::zero()).unwrap();
        let tr = sys.integrate([0.0; 4], [1.0, 0.0, 0.0, 0.0], 1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2,x3,x4,v1,v2,v3,v4,energy");
        assert_eq!(lines[2], "0.5,0.5,0,0,0,1,0,0,0,0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn batch_matches_single() {
        let sys = GeodesicSystem::new(&nf("x1^2 + x2*x3")).unwrap();
        let inits = [([0.0; 4], [1.0, 0.0, 1.0, 0.0]), ([0.1, 0.2, 0.3, 0.4], [0.0, 1.0, 0.5, 0.5])];
        let seq = sys.integrate_many(&inits, 0.5, 0.01, Exec::Sequential);
        let par = sys.integrate_many(&inits, 0.5, 0.01, Exec::default());
        assert_eq!(seq, par);
    }
}
