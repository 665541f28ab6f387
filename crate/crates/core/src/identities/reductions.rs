//! Specializations under which one registered identity collapses onto
//! another, as pairs of code paths that must agree numerically.
//!
//! Each [`Reduction`] draws points from a base case's sampler, maps them to
//! the more general case and compares one side of each. A reduction whose
//! specialization is a limit (parameters tending to zero) is checked at small
//! stand-in values with the looser [`LIMIT_TOL`].
//!
//! As with skipped samples in a sweep, points where cancellation in either
//! side leaves too few digits for the tolerance are redrawn, not counted.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::quintuple::triple_product;
use super::{draw, find, sample_case, ParamMap, MAX_SAMPLE_ATTEMPTS, SAMPLE_POLE_GUARD};
use crate::context::QContext;
use crate::error::QError;
use crate::integrals::aw_closed_form;
use crate::tracked::Tracked;
use crate::Result;

pub const REDUCTION_TOL: f64 = 1e-10;
pub const LIMIT_TOL: f64 = 1e-4;
/// Multiple of machine epsilon per unit of condition number, as in `judge`.
pub const ROUNDOFF_SLACK: f64 = 1000.0;
/// Stand-in for parameters that tend to zero in a limit reduction.
pub const LIMIT_STAND_IN: f64 = 1e-6;

pub type SideFn = Arc<dyn Fn(&ParamMap, &QContext) -> Result<Tracked> + Send + Sync>;
type MapFn = fn(&ParamMap, &QContext) -> Result<ParamMap>;
type FactorFn = fn(&ParamMap, &QContext) -> Result<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

#[derive(Clone)]
pub struct Reduction {
    pub name: String,
    /// Case whose sampler supplies the points.
    pub base: &'static str,
    /// Integer parameters pinned while sampling the base case.
    pub pinned: &'static [(&'static str, i64)],
    /// Additional free parameters drawn next to the base point.
    pub extra: &'static [&'static str],
    /// Case whose domain must also hold at the mapped point.
    pub general: &'static str,
    pub map: MapFn,
    pub left: SideFn,
    pub right: SideFn,
    pub tol: f64,
}

impl std::fmt::Debug for Reduction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Reduction").field("name", &self.name).field("base", &self.base).finish_non_exhaustive()
    }
}

/// Outcome of one comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub left: Complex64,
    pub right: Complex64,
    pub rel: f64,
    /// Larger cancellation amplification of the two sides.
    pub cond: f64,
}

impl Agreement {
    pub fn holds(&self, tol: f64) -> bool {
        self.rel < tol
    }

    /// Whether roundoff amplified by cancellation stays below `tol`.
    pub fn resolves(&self, tol: f64) -> bool {
        self.cond * ROUNDOFF_SLACK * f64::EPSILON <= tol
    }
}

fn side_of(id: &'static str, side: Side, p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let case = find(id)?;
    let f = match side {
        Side::Lhs => &case.lhs,
        Side::Rhs => &case.rhs,
    };
    f(p, ctx)
}

impl Reduction {
    /// Deterministic point, admissible for the base case, the mapped general
    /// case and both code paths, and conditioned well enough to resolve the
    /// tolerance.
    pub fn point(&self, seed: u64, ctx: &QContext) -> Result<ParamMap> {
        let base = find(self.base)?;
        let general = find(self.general)?;
        let trial = ctx.clone().with_pole_guard(SAMPLE_POLE_GUARD.max(ctx.pole_guard()))?;
        let mut fixed = ParamMap::new();
        for &(name, v) in self.pinned {
            fixed.set_int(name, v);
        }
        for attempt in 0..MAX_SAMPLE_ATTEMPTS as u64 {
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt);
            let Ok(mut p) = sample_case(base, s, base.default_mode(), &fixed, ctx) else { continue };
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5A5A_5A5A);
            for name in self.extra {
                p.set(*name, draw(&mut rng, base.default_mode()));
            }
            let Ok(mapped) = (self.map)(&p, ctx) else { continue };
            let in_domain = (general.domain)(&mapped, ctx).is_ok_and(|bs| bs.iter().all(|b| b.value <= b.margin));
            let finite = |f: &SideFn| f(&p, &trial).is_ok_and(|v| v.value.re.is_finite() && v.value.im.is_finite());
            if in_domain
                && finite(&self.left)
                && finite(&self.right)
                && self.compare(&p, ctx).is_ok_and(|a| a.resolves(self.tol))
            {
                return Ok(p);
            }
        }
        Err(QError::SamplingExhausted { id: self.name.clone(), attempts: MAX_SAMPLE_ATTEMPTS })
    }

    pub fn compare(&self, p: &ParamMap, ctx: &QContext) -> Result<Agreement> {
        let left = (self.left)(p, ctx)?;
        let right = (self.right)(p, ctx)?;
        let cond = left.condition().max(right.condition());
        let (left, right) = (left.value, right.value);
        let rel = (left - right).norm() / (left.norm() + right.norm()).max(1e-300);
        Ok(Agreement { left, right, rel, cond })
    }
}

fn one(_: &ParamMap, _: &QContext) -> Result<Complex64> {
    Ok(Complex64::new(1.0, 0.0))
}

/// Both sides of `general` at the mapped point against `factor` times the
/// same side of `base`.
#[allow(clippy::too_many_arguments)]
fn both_sides(
    title: &str,
    base: &'static str,
    pinned: &'static [(&'static str, i64)],
    extra: &'static [&'static str],
    general: &'static str,
    map: MapFn,
    factor: FactorFn,
) -> Vec<Reduction> {
    [(Side::Lhs, "left sides"), (Side::Rhs, "right sides")]
        .into_iter()
        .map(|(side, label)| Reduction {
            name: format!("{title} ({label})"),
            base,
            pinned,
            extra,
            general,
            map,
            left: Arc::new(move |p, ctx| side_of(general, side, &map(p, ctx)?, ctx)),
            right: Arc::new(move |p, ctx| Ok(side_of(base, side, p, ctx)? * factor(p, ctx)?)),
            tol: REDUCTION_TOL,
        })
        .collect()
}

fn lemma_at_bailey(p: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
    let [a, b, c, d, e, s] = p.cs(["a", "b", "c", "d", "e", "s"])?;
    Ok(ParamMap::new()
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with("e", s)
        .with("f", e)
        .with("g", ctx.q() * a / s))
}

fn thm_a_at_ma(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    let [a, b, c, d, e, s] = p.cs(["a", "b", "c", "d", "e", "s"])?;
    Ok(ParamMap::new().with("a", a).with("b", b).with("c", c).with("d", d).with("e", s).with("f", e).with("g", a * b / s))
}

fn thm_a_factor(p: &ParamMap, _: &QContext) -> Result<Complex64> {
    let [a, b, s] = p.cs(["a", "b", "s"])?;
    Ok(s / ((s + a) * (s + b)))
}

fn corl_a_at_ma(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    Ok(p.clone().with_int("n", 0))
}

fn corl_a_factor(p: &ParamMap, _: &QContext) -> Result<Complex64> {
    let [a, b, f] = p.cs(["a", "b", "f"])?;
    Ok(f / ((a + f) * (b + f)))
}

fn thm_c_at_ma(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    Ok(p.clone().with_int("n", 0))
}

fn thm_c_at_corl_a(p: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
    let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
    let n = p.int("n")?;
    let raw = ParamMap::new()
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with("e", e)
        .with_int("n", 1)
        .with("x_1", f)
        .with_int("N_1", n);
    find("thm-c-multivar")?.complete(&raw, ctx)
}

fn thm_d_at_corl_b(p: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
    let [x, y, b, c, d, e] = p.cs(["x", "y", "b", "c", "d", "e"])?;
    let n = p.int("n")?;
    let raw = ParamMap::new()
        .with("x", x)
        .with("y", y)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with_int("n", 1)
        .with("x_1", e)
        .with_int("N_1", n);
    find("thm-d-multivar")?.complete(&raw, ctx)
}

fn thm_b_at_triple(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
    Ok(ParamMap::new().with("x", x).with("y", y).with("b", b).with("c", c).with("d", d).with("e", d).with("f", x * y * y / d))
}

fn thm_b_factor(p: &ParamMap, _: &QContext) -> Result<Complex64> {
    let [x, y, d] = p.cs(["x", "y", "d"])?;
    Ok(x * y * d / ((d - x * y) * (y - d)))
}

fn berndt_at(p: &ParamMap, z: f64) -> Result<ParamMap> {
    let [x, y, d] = p.cs(["x", "y", "d"])?;
    let z = Complex64::new(z, 0.0);
    Ok(ParamMap::new().with("x", x).with("y", y).with("b", z).with("c", z).with("d", d).with("e", z).with("f", x * y * y / d))
}

fn berndt_point(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    berndt_at(p, LIMIT_STAND_IN)
}

fn thm_e_at_corl_c(p: &ParamMap, ctx: &QContext) -> Result<ParamMap> {
    let [a, b, c, d, u] = p.cs(["a", "b", "c", "d", "u"])?;
    let n = p.int("n")?;
    let raw = ParamMap::new()
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("d", d)
        .with_int("n", 1)
        .with("v_1", u)
        .with_int("N_1", n);
    find("thm-e-integral")?.complete(&raw, ctx)
}

fn identity_map(p: &ParamMap, _: &QContext) -> Result<ParamMap> {
    Ok(p.clone())
}

const N0: &[(&str, i64)] = &[("n", 0)];

/// The reduction web, two comparisons (one per side) for most entries.
pub fn reductions() -> Vec<Reduction> {
    let mut v = Vec::new();
    v.extend(both_sides("lemma-8psi8 at g = qa/e is bailey-6psi6", "bailey-6psi6", &[], &["s"], "lemma-8psi8", lemma_at_bailey, one));
    v.extend(both_sides("thm-a-7var at g = ab/e is ma-5var", "ma-5var", &[], &["s"], "thm-a-7var", thm_a_at_ma, thm_a_factor));
    v.extend(both_sides("corl-a at n = 0 is ma-5var", "ma-5var", &[], &["f"], "corl-a", corl_a_at_ma, corl_a_factor));
    v.extend(both_sides("thm-c-multivar at n = 0 is ma-5var", "ma-5var", &[], &[], "thm-c-multivar", thm_c_at_ma, one));
    v.extend(both_sides("thm-c-multivar at n = 1 is corl-a", "corl-a", &[], &[], "thm-c-multivar", thm_c_at_corl_a, one));
    v.extend(both_sides("thm-d-multivar at n = 1 is corl-b", "corl-b", &[], &[], "thm-d-multivar", thm_d_at_corl_b, one));
    v.extend(both_sides("thm-b at e = d, f = xy²/d is the triple product", "thm-d-multivar", N0, &[], "thm-b", thm_b_at_triple, thm_b_factor));
    v.extend(both_sides("thm-e-integral at n = 1 is corl-c-integral", "corl-c-integral", &[], &[], "thm-e-integral", thm_e_at_corl_c, one));
    v.push(Reduction {
        name: "thm-d-multivar at n = 0 is the triple product".into(),
        base: "thm-d-multivar",
        pinned: N0,
        extra: &[],
        general: "thm-d-multivar",
        map: identity_map,
        left: Arc::new(|p, ctx| side_of("thm-d-multivar", Side::Lhs, p, ctx)),
        right: Arc::new(|p, ctx| {
            let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
            triple_product(x, y, b, c, d, ctx).map(Tracked::from)
        }),
        tol: REDUCTION_TOL,
    });
    v.push(Reduction {
        name: "thm-e-integral at n = 0 is the Askey-Wilson integral".into(),
        base: "thm-e-integral",
        pinned: N0,
        extra: &[],
        general: "thm-e-integral",
        map: identity_map,
        left: Arc::new(|p, ctx| side_of("thm-e-integral", Side::Rhs, p, ctx)),
        right: Arc::new(|p, ctx| {
            let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
            aw_closed_form(a, b, c, d, ctx).map(Tracked::from)
        }),
        tol: REDUCTION_TOL,
    });
    v.push(Reduction {
        name: "thm-b as b, c, e -> 0 with f = xy²/d (limit)".into(),
        base: "thm-d-multivar",
        pinned: N0,
        extra: &[],
        general: "thm-b",
        map: berndt_point,
        left: Arc::new(|p, ctx| side_of("thm-b", Side::Rhs, &berndt_point(p, ctx)?, ctx)),
        // the series has (q/b;q)_k factors, so b = 0 itself is out of reach;
        // a stand-in ten times smaller shows the values have settled
        right: Arc::new(|p, ctx| side_of("thm-b", Side::Lhs, &berndt_at(p, LIMIT_STAND_IN / 10.0)?, ctx)),
        tol: LIMIT_TOL,
    });
    v
}
