//! h-functions, trapezoidal quadrature of Askey–Wilson type integrands on
//! `[0, π]`, and the closed forms those integrals evaluate to.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::QError;
use crate::multisum::{check_power_ratio, omega};
use crate::qcore::{qfrac_inf, qfrac_n, qpoch_inf, qpow};
use crate::series::{eval_phi, SeriesSpec};
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Node count after which quadrature gives up.
pub const MAX_NODES: usize = 1 << 18;
const INITIAL_PANELS: usize = 8;
const QUAD_TOL: f64 = 1e-12;

/// `h(x;λ) = (λe^{iθ}, λe^{-iθ};q)_∞` with `x = cos θ`.
pub fn hfun(x: f64, lambda: Complex64, ctx: &QContext) -> Result<Complex64> {
    let e = Complex64::from_polar(1.0, x.clamp(-1.0, 1.0).acos());
    Ok(qpoch_inf(lambda * e, ctx)?.value * qpoch_inf(lambda * e.conj(), ctx)?.value)
}

/// `h(x;λ)` from the real-quadratic factors `1 - 2q^kλx + q^{2k}λ²`.
/// Kept as an independent check on [`hfun`].
pub fn hfun_product_form(x: f64, lambda: Complex64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let mut lq = lambda;
    let mut p = ONE;
    let mut small = 0;
    for _ in 0..ctx.max_product_factors() {
        p *= ONE - 2.0 * x * lq + lq * lq;
        small = if lq.norm() < ctx.product_tol() { small + 1 } else { 0 };
        if small >= 3 {
            return Ok(p);
        }
        lq *= q;
    }
    Err(QError::CapExceeded { base: lambda.to_string(), cap: ctx.max_product_factors() })
}

/// `h(x;λ_1,…,λ_m)`
pub fn hfun_multi(x: f64, lambdas: &[Complex64], ctx: &QContext) -> Result<Complex64> {
    lambdas.iter().try_fold(ONE, |acc, &l| Ok(acc * hfun(x, l, ctx)?))
}

/// Integrand data `h(cos2θ;1) / h(cosθ;a,b,c,d) · ∏ h(cosθ;u_i)/h(cosθ;v_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AWIntegrandSpec {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

impl AWIntegrandSpec {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        AWIntegrandSpec { a, b, c, d, u: vec![], v: vec![] }
    }

    pub fn with_pairs(mut self, u: Vec<Complex64>, v: Vec<Complex64>) -> Self {
        self.u = u;
        self.v = v;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.u.len() != self.v.len() {
            return Err(QError::InvalidSpec("u and v must have equal length".into()));
        }
        for (name, p) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)]
            .into_iter()
            .chain(self.v.iter().map(|&v| ("v", v)))
        {
            if !(p.norm() < 1.0) {
                return Err(QError::Domain(format!("|{name}| = {} must be below 1", p.norm())));
            }
        }
        Ok(())
    }

    /// Integrand at angle `θ`.
    pub fn integrand(&self, theta: f64, ctx: &QContext) -> Result<Complex64> {
        let e = Complex64::from_polar(1.0, theta);
        let ei = e.conj();
        let mut numer = vec![e * e, ei * ei];
        let mut denom = Vec::with_capacity(8 + 2 * self.v.len());
        for p in [self.a, self.b, self.c, self.d] {
            denom.push(p * e);
            denom.push(p * ei);
        }
        for (&u, &v) in self.u.iter().zip(&self.v) {
            numer.push(u * e);
            numer.push(u * ei);
            denom.push(v * e);
            denom.push(v * ei);
        }
        qfrac_inf(&numer, &denom, ctx)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    /// `|T_{2M} - T_M|` after each doubling.
    pub history: Vec<f64>,
}

/// Trapezoidal rule on `[0, π]` with panel doubling, for integrands that
/// extend to even, 2π-periodic analytic functions (spectral convergence).
pub fn trapezoid_periodic(mut f: impl FnMut(f64) -> Result<Complex64>, tol: f64) -> Result<(Complex64, QuadratureResult)> {
    let mut panels = INITIAL_PANELS;
    let mut h = PI / panels as f64;
    let edge = (f(0.0)? + f(PI)?) * 0.5;
    let mut interior = Complex64::new(0.0, 0.0);
    for j in 1..panels {
        interior += f(j as f64 * h)?;
    }
    let mut t = (edge + interior) * h;
    let mut history = Vec::new();
    while panels < MAX_NODES {
        let hn = h / 2.0;
        for j in 0..panels {
            interior += f((2 * j + 1) as f64 * hn)?;
        }
        panels *= 2;
        h = hn;
        let tn = (edge + interior) * h;
        let diff = (tn - t).norm();
        history.push(diff);
        t = tn;
        if diff <= tol * t.norm() && panels >= 2 * INITIAL_PANELS {
            let res = QuadratureResult { value: t.re, abs_error_estimate: diff, panels_used: panels, history };
            return Ok((t, res));
        }
    }
    Err(QError::NoConvergence { nodes: panels })
}

/// `∫_0^π h(cos2θ;1)/h(cosθ;a,b,c,d) ∏ h(cosθ;u_i)/h(cosθ;v_i) dθ`.
///
/// The imaginary part of the sum, roundoff for real or conjugate-closed
/// parameter sets, is folded into the error estimate.
pub fn integrate_aw(spec: &AWIntegrandSpec, ctx: &QContext) -> Result<QuadratureResult> {
    spec.validate()?;
    let tol = QUAD_TOL.max(10.0 * ctx.product_tol());
    let (t, mut res) = trapezoid_periodic(|th| spec.integrand(th, ctx), tol)?;
    res.abs_error_estimate += t.im.abs();
    Ok(res)
}

/// `2π (abcd;q)_∞ / (q,ab,ac,ad,bc,bd,cd;q)_∞`
pub fn aw_closed_form(a: Complex64, b: Complex64, c: Complex64, d: Complex64, ctx: &QContext) -> Result<Complex64> {
    let r = qfrac_inf(&[a * b * c * d], &[ctx.q(), a * b, a * c, a * d, b * c, b * d, c * d], ctx)?;
    Ok(r * 2.0 * PI)
}

fn aw_prefactor(a: Complex64, b: Complex64, c: Complex64, d: Complex64, big_n: usize, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let abcd = a * b * c * d;
    let lead = ONE - abcd / qpow(q, big_n as i64 + 1);
    if lead.norm() < ctx.pole_guard() {
        return Err(QError::Pole(format!("1 - abcd/q^(N+1) = {lead}")));
    }
    let r = qfrac_inf(&[abcd / q], &[q, a * b, a * c, a * d, b * c, b * d, c * d], ctx)?;
    Ok(r * 2.0 * PI / lead)
}

/// Closed form of the integral with pairs `u_i = v_i q^{N_i}`:
/// `2π/(1 - abcd/q^{N+1}) · (abcd/q)_∞/(q,ab,ac,ad,bc,bd,cd)_∞`
/// `× ∏ (du_i, qu_i/d)_∞/(dv_i, qv_i/d)_∞ / Ω`.
pub fn aw_pairs_closed_form(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    u: &[Complex64],
    v: &[Complex64],
    big_n: &[usize],
    ctx: &QContext,
) -> Result<Complex64> {
    let q = ctx.q();
    let om = omega(a, b, c, d, u, v, big_n, ctx)?;
    if om.norm() < ctx.pole_guard() {
        return Err(QError::DivisionByNearZero(om.norm()));
    }
    let mut r = aw_prefactor(a, b, c, d, big_n.iter().sum(), ctx)?;
    for (&ui, &vi) in u.iter().zip(v) {
        r *= qfrac_inf(&[d * ui, q * ui / d], &[d * vi, q * vi / d], ctx)?;
    }
    Ok(r / om)
}

/// Closed form of the integral with the single extra ratio
/// `h(cosθ;uq^n)/h(cosθ;u)`, divided by a terminating balanced `4φ3`.
pub fn aw_single_pair_closed_form(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    u: Complex64,
    n: usize,
    ctx: &QContext,
) -> Result<Complex64> {
    let q = ctx.q();
    let ni = n as i64;
    let phi = eval_phi(
        &SeriesSpec::phi(
            vec![qpow(q, -ni), q / (a * d), q / (b * d), q / (c * d)],
            vec![qpow(q, 1 - ni) / (d * u), q * u / d, q * q / (a * b * c * d)],
            q,
        ),
        ctx,
    )?;
    if phi.value.norm() < ctx.pole_guard() {
        return Err(QError::DivisionByNearZero(phi.value.norm()));
    }
    let pre = aw_prefactor(a, b, c, d, n, ctx)?;
    Ok(pre * qfrac_n(&[], &[d * u, q * u / d], ni, ctx)? / phi.value)
}

/// Closed form at `d = q/a`, where the Ω divisor collapses to 1:
/// `2π/(1 - q^{-m}bc) / (q,q,ab,ac,qb/a,qc/a)_∞ · ∏ (au_i, qu_i/a)_∞/(av_i, qv_i/a)_∞`.
pub fn aw_reflected_closed_form(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    u: &[Complex64],
    v: &[Complex64],
    m: &[usize],
    ctx: &QContext,
) -> Result<Complex64> {
    let q = ctx.q();
    if u.len() != m.len() || v.len() != m.len() {
        return Err(QError::InvalidSpec("u, v and m must have equal length".into()));
    }
    for i in 0..m.len() {
        check_power_ratio(u[i], v[i], m[i], ctx)?;
    }
    let total: usize = m.iter().sum();
    let lead = ONE - b * c / qpow(q, total as i64);
    if lead.norm() < ctx.pole_guard() {
        return Err(QError::Pole(format!("1 - bc/q^m = {lead}")));
    }
    let mut r = qfrac_inf(&[], &[q, q, a * b, a * c, q * b / a, q * c / a], ctx)? * 2.0 * PI / lead;
    for (&ui, &vi) in u.iter().zip(v) {
        r *= qfrac_inf(&[a * ui, q * ui / a], &[a * vi, q * vi / a], ctx)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn r(x: f64) -> Complex64 {
        c64(x, 0.0)
    }

    #[test]
    fn h_trivial_cases() {
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(hfun(0.3, r(0.0), &ctx).unwrap(), ONE);
        let l = c64(0.4, 0.1);
        let p = qpoch_inf(l, &ctx).unwrap().value;
        assert!((hfun(1.0, l, &ctx).unwrap() - p * p).norm() < 1e-14);
        assert_eq!(hfun_multi(0.2, &[], &ctx).unwrap(), ONE);
    }

    #[test]
    fn h_dual_path() {
        let ctx = QContext::real(0.5).unwrap();
        let x = 1.0f64.cos();
        let l = c64(0.4, 0.1);
        let a = hfun(x, l, &ctx).unwrap();
        let b = hfun_product_form(x, l, &ctx).unwrap();
        assert!((a - b).norm() < 1e-13 * b.norm());
    }

    #[test]
    fn constant_integrand() {
        let (t, res) = trapezoid_periodic(|_| Ok(ONE), 1e-12).unwrap();
        assert!((t.re - PI).abs() < 1e-14);
        assert!(res.abs_error_estimate < 1e-14);
    }

    #[test]
    fn all_zero_parameters() {
        let ctx = QContext::real(0.5).unwrap();
        let z = r(0.0);
        let res = integrate_aw(&AWIntegrandSpec::new(z, z, z, z), &ctx).unwrap();
        let want = 2.0 * PI / qpoch_inf(ctx.q(), &ctx).unwrap().value.re;
        assert!((res.value - want).abs() < 1e-12 * want);
        assert!((aw_closed_form(z, z, z, z, &ctx).unwrap().re - want).abs() < 1e-13 * want);
    }

    #[test]
    fn askey_wilson_point() {
        let ctx = QContext::real(0.5).unwrap();
        let (a, b, c, d) = (r(0.3), r(0.2), r(0.1), r(0.4));
        let res = integrate_aw(&AWIntegrandSpec::new(a, b, c, d), &ctx).unwrap();
        let want = aw_closed_form(a, b, c, d, &ctx).unwrap();
        assert!((res.value - want.re).abs() < 1e-10 * want.re);
    }

    #[test]
    fn rejects_outside_unit_disk() {
        let ctx = QContext::real(0.5).unwrap();
        let spec = AWIntegrandSpec::new(r(1.2), r(0.1), r(0.1), r(0.1));
        assert!(matches!(integrate_aw(&spec, &ctx), Err(QError::Domain(_))));
    }
}
