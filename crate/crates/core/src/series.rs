//! Unilateral `1+rφs` and bilateral `rψr` basic hypergeometric series.
//!
//! Terms are produced by multiplying the previous term by the per-step
//! factor ratio `∏(1 - a q^k) / ∏(1 - b q^k)`, which is the same arithmetic
//! as forming each Pochhammer from scratch, one factor at a time. Sums whose
//! Pochhammer bases move with `k` go through [`eval_kshifted_sum`] instead.

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::QError;
use crate::qcore::EXACT_ZERO_TOL;
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
}

/// Parameters of a series. The extra `(q;q)_k` of the φ definition is
/// implicit and never stored in `lower`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub argument: Complex64,
    pub kind: SeriesKind,
}

impl SeriesSpec {
    pub fn phi(upper: Vec<Complex64>, lower: Vec<Complex64>, argument: Complex64) -> Self {
        SeriesSpec { upper, lower, argument, kind: SeriesKind::Unilateral }
    }

    pub fn psi(upper: Vec<Complex64>, lower: Vec<Complex64>, argument: Complex64) -> Self {
        SeriesSpec { upper, lower, argument, kind: SeriesKind::Bilateral }
    }

    fn check(&self, kind: SeriesKind) -> Result<()> {
        if self.kind != kind {
            return Err(QError::InvalidSpec(format!("expected a {kind:?} series")));
        }
        match kind {
            SeriesKind::Unilateral if self.upper.is_empty() => {
                Err(QError::InvalidSpec("a unilateral series needs at least one upper parameter".into()))
            }
            SeriesKind::Bilateral if self.upper.len() != self.lower.len() => Err(QError::InvalidSpec(format!(
                "bilateral series needs r = s, got {} upper and {} lower",
                self.upper.len(),
                self.lower.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// Outcome of a summation or infinite product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    /// Truncation error estimate (zero for exact finite sums).
    pub abs_error_estimate: f64,
    /// `Σ |term|`, the scale against which cancellation is measured.
    pub abs_sum: f64,
    pub terms_used: usize,
    /// Cut by an exact `q^{-n}` zero rather than by the tolerance.
    pub terminated: bool,
    /// Bilateral only: terms used on the `k ≥ 0` and `k < 0` branches.
    pub branch_terms: (usize, usize),
}

impl SeriesResult {
    pub fn exact(value: Complex64, terms: usize) -> Self {
        SeriesResult {
            value,
            abs_error_estimate: 0.0,
            abs_sum: value.norm(),
            terms_used: terms,
            terminated: false,
            branch_terms: (terms, 0),
        }
    }

    fn scaled(self, c: Complex64) -> Self {
        SeriesResult {
            value: self.value * c,
            abs_error_estimate: self.abs_error_estimate * c.norm(),
            abs_sum: self.abs_sum * c.norm(),
            ..self
        }
    }
}

enum Step {
    Ratio(Complex64),
    /// Every later term vanishes identically.
    Terminate,
}

/// Sum `t_0 = first`, `t_{k+1} = t_k · ratio(k)` under the shared policy.
fn sum_by_ratio(first: Complex64, mut next: impl FnMut(usize) -> Result<Step>, ctx: &QContext) -> Result<SeriesResult> {
    let tol = ctx.series_tol();
    let mut t = first;
    let mut sum = ZERO;
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut prev = f64::NAN;
    for k in 0..ctx.max_terms() {
        sum += t;
        abs_sum += t.norm();
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(QError::DivergentSeries { terms: k + 1 });
        }
        let tn = t.norm();
        small = if tn <= tol * sum.norm() { small + 1 } else { 0 };
        if small >= 3 {
            let rho = if prev > 0.0 { (tn / prev).clamp(0.0, 0.99) } else { 0.0 };
            return Ok(SeriesResult {
                value: sum,
                abs_error_estimate: tn * rho / (1.0 - rho),
                abs_sum,
                terms_used: k + 1,
                terminated: false,
                branch_terms: (k + 1, 0),
            });
        }
        match next(k)? {
            Step::Terminate => {
                return Ok(SeriesResult {
                    value: sum,
                    abs_error_estimate: 0.0,
                    abs_sum,
                    terms_used: k + 1,
                    terminated: true,
                    branch_terms: (k + 1, 0),
                })
            }
            Step::Ratio(r) => {
                prev = tn;
                t *= r;
                if t == ZERO {
                    return Ok(SeriesResult {
                        value: sum,
                        abs_error_estimate: 0.0,
                        abs_sum,
                        terms_used: k + 1,
                        terminated: false,
                        branch_terms: (k + 1, 0),
                    });
                }
            }
        }
    }
    Err(QError::DivergentSeries { terms: ctx.max_terms() })
}

fn pole(what: &str, b: Complex64, k: i64, size: f64) -> QError {
    QError::Pole(format!("{what} factor 1 - ({b}) q^{k} has size {size:e}"))
}

/// Forward step ratio at index `k` of `∏(a)_k / ∏(b)_k · z^k`, optionally
/// with the implicit `(q;q)_k` and the sign/exponent factor of power `e`.
fn forward_ratio(spec: &SeriesSpec, qk: Complex64, q: Complex64, k: usize, with_q: bool, e: i64, ctx: &QContext) -> Result<Step> {
    let mut num = spec.argument;
    for &a in &spec.upper {
        let f = ONE - a * qk;
        if f.norm() < EXACT_ZERO_TOL {
            return Ok(Step::Terminate);
        }
        num *= f;
    }
    let mut den = ONE;
    if with_q {
        den *= ONE - qk * q;
    }
    for &b in &spec.lower {
        let f = ONE - b * qk;
        if f.norm() < ctx.pole_guard() {
            return Err(pole("lower", b, k as i64, f.norm()));
        }
        den *= f;
    }
    if e != 0 {
        // {(-1)^k q^{k(k-1)/2}}^e steps by (-q^k)^e
        num *= crate::qcore::qpow(-qk, e);
    }
    Ok(Step::Ratio(num / den))
}

/// `1+rφs[upper; lower; q, z]`.
pub fn eval_phi(spec: &SeriesSpec, ctx: &QContext) -> Result<SeriesResult> {
    spec.check(SeriesKind::Unilateral)?;
    let e = spec.lower.len() as i64 + 1 - spec.upper.len() as i64;
    let q = ctx.q();
    let mut qk = ONE;
    sum_by_ratio(
        ONE,
        |k| {
            let s = forward_ratio(spec, qk, q, k, true, e, ctx);
            qk *= q;
            s
        },
        ctx,
    )
}

/// `k ≥ 0` branch of a bilateral series.
fn psi_positive(spec: &SeriesSpec, ctx: &QContext) -> Result<SeriesResult> {
    let q = ctx.q();
    let mut qk = ONE;
    sum_by_ratio(
        ONE,
        |k| {
            let s = forward_ratio(spec, qk, q, k, false, 0, ctx);
            qk *= q;
            s
        },
        ctx,
    )
}

/// `k ≤ -1` branch, walked downward: `t_{-j} = t_{-j+1} · ∏(1 - b q^{-j}) /
/// (∏(1 - a q^{-j}) z)`. A lower parameter on `q^j` (j ≥ 1) cuts the branch.
fn psi_negative(spec: &SeriesSpec, ctx: &QContext) -> Result<SeriesResult> {
    // Each factor 1 - b q^{-j} is carried as q^j - b, so numerator and
    // denominator stay bounded however large j gets.
    let q = ctx.q();
    let excess = spec.lower.len() as i32 - spec.upper.len() as i32;
    let mut qj = q;
    let mut step = |j: usize| -> Result<Step> {
        let mut num = ONE;
        for &b in &spec.lower {
            let f = qj - b;
            if f.norm() < EXACT_ZERO_TOL * qj.norm() {
                return Ok(Step::Terminate);
            }
            num *= f;
        }
        let mut den = spec.argument * qj.powi(excess);
        for &a in &spec.upper {
            let f = qj - a;
            if f.norm() < ctx.pole_guard() * qj.norm() {
                return Err(pole("upper", a, -(j as i64), f.norm() / qj.norm()));
            }
            den *= f;
        }
        if den == ZERO {
            return Err(QError::Pole("bilateral argument is zero".into()));
        }
        qj *= q;
        Ok(Step::Ratio(num / den))
    };
    let first = match step(1)? {
        Step::Terminate => {
            return Ok(SeriesResult { terminated: true, terms_used: 1, ..SeriesResult::exact(ZERO, 1) })
        }
        Step::Ratio(r) => r,
    };
    sum_by_ratio(first, |j| step(j + 2), ctx)
}

/// `rψr[upper; lower; q, z]` as the sum of its two branches.
pub fn eval_psi(spec: &SeriesSpec, ctx: &QContext) -> Result<SeriesResult> {
    spec.check(SeriesKind::Bilateral)?;
    let pos = psi_positive(spec, ctx)?;
    let neg = psi_negative(spec, ctx)?;
    Ok(SeriesResult {
        value: pos.value + neg.value,
        abs_error_estimate: pos.abs_error_estimate + neg.abs_error_estimate,
        abs_sum: pos.abs_sum + neg.abs_sum,
        terms_used: pos.terms_used + neg.terms_used,
        terminated: pos.terminated && neg.terminated,
        branch_terms: (pos.terms_used, neg.terms_used),
    })
}

/// Split of a bilateral series into its `k ≥ 0` sum and the `k ≤ -1` sum
/// rewritten as a unilateral series.
///
/// With `k = -1 - j`, the negative half equals
/// `∏(1 - q/b_i)/(1 - q/a_i) · w · Σ_j ∏(q²/b_i)_j/(q²/a_i)_j w^j`
/// where `w = ∏b_i / (∏a_i · z)`.
pub fn eval_bilateral_split(spec: &SeriesSpec, ctx: &QContext) -> Result<(SeriesResult, SeriesResult)> {
    spec.check(SeriesKind::Bilateral)?;
    let pos = psi_positive(spec, ctx)?;
    let q = ctx.q();
    let mut pre = ONE;
    let mut w = ONE / spec.argument;
    for &b in &spec.lower {
        let f = ONE - q / b;
        if f.norm() < EXACT_ZERO_TOL {
            let zero = SeriesResult { terminated: true, ..SeriesResult::exact(ZERO, 1) };
            return Ok((pos, zero));
        }
        pre *= f;
        w *= b;
    }
    for &a in &spec.upper {
        let f = ONE - q / a;
        if f.norm() < ctx.pole_guard() {
            return Err(pole("reflected upper", q / a, 0, f.norm()));
        }
        pre /= f;
        w /= a;
    }
    let reflected = SeriesSpec {
        upper: spec.lower.iter().map(|b| q * q / b).collect(),
        lower: spec.upper.iter().map(|a| q * q / a).collect(),
        argument: w,
        kind: SeriesKind::Bilateral,
    };
    let tail = psi_positive(&reflected, ctx)?.scaled(pre * w);
    Ok((pos, SeriesResult { branch_terms: (0, tail.terms_used), ..tail }))
}

/// Sum `Σ_{k≥0} term(k)` where each term is computed from scratch, for
/// series whose Pochhammer bases depend on `k`.
pub fn eval_kshifted_sum(mut term: impl FnMut(usize) -> Result<Complex64>, ctx: &QContext) -> Result<SeriesResult> {
    let tol = ctx.series_tol();
    let mut sum = ZERO;
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut prev = f64::NAN;
    for k in 0..ctx.max_terms() {
        let t = term(k)?;
        sum += t;
        abs_sum += t.norm();
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(QError::DivergentSeries { terms: k + 1 });
        }
        let tn = t.norm();
        small = if tn <= tol * sum.norm() { small + 1 } else { 0 };
        if small >= 3 {
            let rho = if prev > 0.0 { (tn / prev).clamp(0.0, 0.99) } else { 0.0 };
            return Ok(SeriesResult {
                value: sum,
                abs_error_estimate: tn * rho / (1.0 - rho),
                abs_sum,
                terms_used: k + 1,
                terminated: false,
                branch_terms: (k + 1, 0),
            });
        }
        prev = tn;
    }
    Err(QError::DivergentSeries { terms: ctx.max_terms() })
}

/// Very-well-poised `r+1 φ r` with base `a`: upper `a, q√a, -q√a, p…`,
/// lower `√a, -√a, qa/p…`.
pub fn very_well_poised(a: Complex64, params: &[Complex64], z: Complex64, ctx: &QContext) -> Result<SeriesResult> {
    let q = ctx.q();
    let s = a.sqrt();
    let mut upper = vec![a, q * s, -q * s];
    let mut lower = vec![s, -s];
    for &p in params {
        upper.push(p);
        lower.push(q * a / p);
    }
    eval_phi(&SeriesSpec::phi(upper, lower, z), ctx)
}
