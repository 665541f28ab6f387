//! The identity registry and the machinery to check one identity at one
//! parameter point.

pub mod bilateral;
pub mod classical;
pub mod hyper;
pub mod integral_cases;
pub mod params;
pub mod quintuple;
pub mod reciprocity;
pub mod reductions;

use std::ops::RangeInclusive;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use params::{indexed, Param, ParamMap};

use crate::context::QContext;
use crate::error::QError;
use crate::report::{Verdict, VerificationReport};
use crate::tracked::Tracked;
use crate::Result;

pub type Evaluator = Arc<dyn Fn(&ParamMap, &QContext) -> Result<Tracked> + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&ParamMap, &QContext) -> Result<Vec<Bound>> + Send + Sync>;
/// Derived pair member from `(params, free member, exponent, ctx)`.
pub type PairRule = Arc<dyn Fn(&ParamMap, Complex64, usize, &QContext) -> Result<Complex64> + Send + Sync>;

/// Default ceiling a sampled point puts on each domain quantity.
pub const SAMPLE_MARGIN: f64 = 0.9;
/// Pole guard used for the trial evaluation of a sampled point.
pub const SAMPLE_POLE_GUARD: f64 = 1e-3;
pub const MAX_SAMPLE_ATTEMPTS: usize = 1000;
/// Both sides below this in modulus count as the degenerate 0 = 0 case.
pub const ZERO_FLOOR: f64 = 1e-12;
const RESIDUAL_FLOOR: f64 = 1e-300;
const DERIVED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Series,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Real,
    #[default]
    Complex,
}

/// One convergence or validity quantity, required to be below 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub label: &'static str,
    pub value: f64,
    pub margin: f64,
}

impl Bound {
    pub fn new(label: &'static str, value: f64) -> Self {
        Bound { label, value, margin: SAMPLE_MARGIN }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn holds(&self) -> bool {
        self.value < 1.0
    }
}

/// An indexed family of parameter pairs: free members `free_i`, integer
/// exponents `exponent_i`, and members `derived_i` fixed by `rule`. The pair
/// count is the integer parameter `n`.
#[derive(Clone)]
pub struct PairSchema {
    pub free: &'static str,
    pub derived: &'static str,
    pub exponent: &'static str,
    pub exponents: RangeInclusive<i64>,
    pub counts: RangeInclusive<i64>,
    pub rule: PairRule,
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: &'static str,
    pub title: &'static str,
    pub family: Family,
    /// Left side antisymmetric under `a ↔ b`, right side vanishing at `a = b`.
    pub reciprocity: bool,
    pub free: Vec<&'static str>,
    pub ints: Vec<(&'static str, Vec<i64>)>,
    pub pairs: Option<PairSchema>,
    pub domain: DomainFn,
    pub lhs: Evaluator,
    pub rhs: Evaluator,
}

impl std::fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityCase").field("id", &self.id).field("family", &self.family).finish_non_exhaustive()
    }
}

impl IdentityCase {
    pub fn default_mode(&self) -> Mode {
        match self.family {
            Family::Integral => Mode::Real,
            Family::Series => Mode::Complex,
        }
    }

    /// Fills in derived pair members, or checks them if already present.
    pub fn complete(&self, params: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
        for name in &self.free {
            params.c(name)?;
        }
        for (name, _) in &self.ints {
            params.int(name)?;
        }
        let mut out = params.clone();
        if let Some(ps) = &self.pairs {
            let n = params.count("n")?;
            for i in 1..=n {
                let x = params.c(&indexed(ps.free, i))?;
                let e = params.count(&indexed(ps.exponent, i))?;
                let y = (ps.rule)(params, x, e, ctx)?;
                let name = indexed(ps.derived, i);
                match params.get(&name) {
                    Some(Param::Complex(given)) => {
                        if (given - y).norm() > DERIVED_TOL * y.norm().max(1e-300) {
                            return Err(QError::ConstraintViolation(format!("{name} = {given} but the constraint gives {y}")));
                        }
                    }
                    Some(Param::Int(_)) => return Err(QError::InvalidSpec(format!("`{name}` must be complex"))),
                    None => out.set(name, y),
                }
            }
        }
        Ok(out)
    }

    /// Every name this case reads.
    pub fn param_names(&self, n: usize) -> Vec<String> {
        let mut v: Vec<String> = self.free.iter().map(|s| s.to_string()).collect();
        v.extend(self.ints.iter().map(|(s, _)| s.to_string()));
        if let Some(ps) = &self.pairs {
            v.push("n".into());
            for i in 1..=n {
                v.push(indexed(ps.free, i));
                v.push(indexed(ps.exponent, i));
                v.push(indexed(ps.derived, i));
            }
        }
        v
    }
}

pub fn evaluator(f: fn(&ParamMap, &QContext) -> Result<Tracked>) -> Evaluator {
    Arc::new(f)
}

/// `f(p) - f(p with x ↔ y)`, the "expr − idem(x;y)" pattern.
pub fn idem_minus(f: Evaluator, x: &'static str, y: &'static str) -> Evaluator {
    Arc::new(move |p, ctx| Ok(f(p, ctx)? - f(&p.swapped(x, y)?, ctx)?))
}

/// `f(p) + f(p with x ↔ y)`, the "expr + idem(x;y)" pattern.
pub fn idem_plus(f: Evaluator, x: &'static str, y: &'static str) -> Evaluator {
    Arc::new(move |p, ctx| Ok(f(p, ctx)? + f(&p.swapped(x, y)?, ctx)?))
}

/// `f(p with x ↔ y)` alone.
pub fn swapped(f: Evaluator, x: &'static str, y: &'static str) -> Evaluator {
    Arc::new(move |p, ctx| f(&p.swapped(x, y)?, ctx))
}

pub fn registry() -> &'static [IdentityCase] {
    static REG: OnceLock<Vec<IdentityCase>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut v = classical::cases();
        v.extend(reciprocity::cases());
        v.extend(quintuple::cases());
        v.extend(bilateral::cases());
        v.extend(integral_cases::cases());
        v
    })
}

pub fn find(id: &str) -> Result<&'static IdentityCase> {
    registry().iter().find(|c| c.id == id).ok_or_else(|| QError::UnknownIdentity(id.to_string()))
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

fn guarded(f: &Evaluator, p: &ParamMap, ctx: &QContext) -> std::result::Result<Tracked, Verdict> {
    match catch_unwind(AssertUnwindSafe(|| f(p, ctx))) {
        Ok(Ok(t)) => Ok(t),
        Ok(Err(e)) if e.is_point_condition() => Err(Verdict::Skipped(e.to_string())),
        Ok(Err(e)) => Err(Verdict::Fail(e.to_string())),
        Err(panic) => Err(Verdict::Fail(format!("evaluator panicked: {}", panic_message(panic)))),
    }
}

/// First violated domain bound, if any.
fn domain_violation(case: &IdentityCase, p: &ParamMap, ctx: &QContext) -> Result<Option<String>> {
    for b in (case.domain)(p, ctx)? {
        if !b.holds() {
            return Ok(Some(format!("outside domain: {} = {:.6}", b.label, b.value)));
        }
    }
    Ok(None)
}

/// Verdict from the two sides. Failing points whose cancellation or
/// truncation budget already exceeds the tolerance are skipped, since a
/// double-precision residual there carries no information.
pub fn judge(lhs: &Tracked, rhs: &Tracked, tol: f64) -> (f64, f64, Verdict) {
    let (l, r) = (lhs.value, rhs.value);
    let abs = (l - r).norm();
    let rel = abs / (l.norm() + r.norm()).max(RESIDUAL_FLOOR);
    let finite = l.re.is_finite() && l.im.is_finite() && r.re.is_finite() && r.im.is_finite();
    let verdict = if !finite {
        Verdict::Fail("non-finite side".into())
    } else if rel < tol || (l.norm() < ZERO_FLOOR && r.norm() < ZERO_FLOOR && abs < ZERO_FLOOR) {
        Verdict::Pass
    } else {
        let cond = lhs.condition().max(rhs.condition());
        let bound = (lhs.err + rhs.err) / (l.norm() + r.norm()).max(RESIDUAL_FLOOR);
        if cond * 1000.0 * f64::EPSILON > tol {
            Verdict::Skipped(format!("ill-conditioned: cancellation amplification {cond:.3e}"))
        } else if bound > tol {
            Verdict::Skipped(format!("truncation: error bound {bound:.3e}"))
        } else {
            Verdict::Fail(format!("relative residual {rel:.3e} exceeds {tol:.1e}"))
        }
    };
    (rel, abs, verdict)
}

/// Checks one case at one point. Domain and pole conditions become a
/// skipped verdict; evaluator failures and panics become fail. Errors are
/// returned only for malformed input (missing or mistyped parameters).
pub fn check_case(case: &IdentityCase, params: &ParamMap, ctx: &QContext, sample_seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(case.id, sample_seed, ctx.q(), params.clone());
    let full = match case.complete(params, ctx) {
        Ok(p) => p,
        Err(e) if e.is_point_condition() => {
            report.verdict = Verdict::Skipped(e.to_string());
            report.elapsed = start.elapsed();
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.params = full.clone();
    if let Some(why) = domain_violation(case, &full, ctx)? {
        report.verdict = Verdict::Skipped(why);
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    let sides = guarded(&case.lhs, &full, ctx).and_then(|l| Ok((l, guarded(&case.rhs, &full, ctx)?)));
    match sides {
        Err(v) => report.verdict = v,
        Ok((l, r)) => {
            let (rel, abs, verdict) = judge(&l, &r, ctx.identity_tol());
            report.lhs = Some(l.value);
            report.rhs = Some(r.value);
            report.rel_residual = Some(rel);
            report.abs_residual = Some(abs);
            report.condition = Some(l.condition().max(r.condition()));
            report.error_bound = Some(l.err + r.err);
            report.verdict = verdict;
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn check(id: &str, params: &ParamMap, ctx: &QContext) -> Result<VerificationReport> {
    check_case(find(id)?, params, ctx, 0)
}

pub(crate) fn draw(rng: &mut ChaCha8Rng, mode: Mode) -> Complex64 {
    let r: f64 = rng.gen_range(0.1..=0.9);
    match mode {
        Mode::Real => Complex64::new(if rng.gen::<bool>() { r } else { -r }, 0.0),
        Mode::Complex => Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)),
    }
}

fn pick(rng: &mut ChaCha8Rng, values: &[i64]) -> i64 {
    values[rng.gen_range(0..values.len())]
}

/// One candidate draw; entries already present in `fixed` are kept.
fn candidate(case: &IdentityCase, rng: &mut ChaCha8Rng, mode: Mode, fixed: &ParamMap) -> ParamMap {
    let mut p = fixed.clone();
    for (name, values) in &case.ints {
        if !fixed.contains(name) {
            p.set_int(*name, pick(rng, values));
        }
    }
    for name in &case.free {
        if !fixed.contains(name) {
            p.set(*name, draw(rng, mode));
        }
    }
    if let Some(ps) = &case.pairs {
        if !fixed.contains("n") {
            let counts: Vec<i64> = ps.counts.clone().collect();
            p.set_int("n", pick(rng, &counts));
        }
        let n = p.count("n").unwrap_or(0);
        let exps: Vec<i64> = ps.exponents.clone().collect();
        for i in 1..=n {
            let (fx, fe) = (indexed(ps.free, i), indexed(ps.exponent, i));
            if !fixed.contains(&fx) {
                p.set(fx, draw(rng, mode));
            }
            if !fixed.contains(&fe) {
                p.set_int(fe, pick(rng, &exps));
            }
        }
    }
    p
}

fn admissible(case: &IdentityCase, p: &ParamMap, ctx: &QContext, trial: &QContext) -> bool {
    let Ok(full) = case.complete(p, ctx) else { return false };
    let Ok(bounds) = (case.domain)(&full, ctx) else { return false };
    if !bounds.iter().all(|b| b.value <= b.margin) {
        return false;
    }
    let ok = |f: &Evaluator| matches!(catch_unwind(AssertUnwindSafe(|| f(&full, trial))), Ok(Ok(t)) if t.value.norm().is_finite());
    ok(&case.lhs) && ok(&case.rhs)
}

/// Deterministic admissible draw for `case`. Integral cases always draw
/// real parameters. Returns the completed map (derived members included).
pub fn sample_case(case: &IdentityCase, seed: u64, mode: Mode, fixed: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
    let mode = if case.family == Family::Integral { Mode::Real } else { mode };
    let trial = ctx.clone().with_pole_guard(SAMPLE_POLE_GUARD.max(ctx.pole_guard()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let p = candidate(case, &mut rng, mode, fixed);
        if admissible(case, &p, ctx, &trial) {
            return case.complete(&p, ctx);
        }
    }
    Err(QError::SamplingExhausted { id: case.id.to_string(), attempts: MAX_SAMPLE_ATTEMPTS })
}

pub fn sample(id: &str, seed: u64, ctx: &QContext) -> Result<ParamMap> {
    let case = find(id)?;
    sample_case(case, seed, case.default_mode(), &ParamMap::new(), ctx)
}
