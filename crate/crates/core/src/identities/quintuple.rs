//! Extensions of Jacobi's triple product and the quintuple product identity.

use std::sync::Arc;

use num_complex::Complex64;

use super::hyper::quintuple_lhs;
use super::{evaluator, idem_plus, Bound, Family, IdentityCase, PairSchema, ParamMap};
use crate::context::QContext;
use crate::multisum::{ChainPattern, Link};
use crate::qcore::{qfrac_inf, qfrac_n, qpow};
use crate::series::{eval_phi, very_well_poised, SeriesSpec};
use crate::tracked::Tracked;
use crate::Result;

pub fn thm_b_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [x, y, b, c, d, e, f] = p.cs(["x", "y", "b", "c", "d", "e", "f"])?;
    quintuple_lhs(x, y, &[b, c, d, e, f], 1, ctx)
}

/// `S(x,y,b,c,d;e,f)`: a product prefactor times an 8φ7 with base `df/e`
/// and argument `bc/xy²`.
pub fn big_s(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [x, y, b, c, d, e, f] = p.cs(["x", "y", "b", "c", "d", "e", "f"])?;
    let xy = x * y;
    let x2 = xy * y;
    let first = qfrac_inf(&[q, q * x, x.inv(), e, q * d / e], &[y, b / y, c / y, d / y, e / y], ctx)?;
    let second = qfrac_inf(
        &[q * y / f, q * xy / f, q * x2 / e, b * c / x2, b * e / x2, c * e / x2, d * e / x2, b * d * f / x2, c * d * f / x2],
        &[xy, b / xy, c / xy, d / xy, e / xy, e / f, q * d * f / e, q * x2 / (e * f), b * c * d * e * f / (q * x2 * x2)],
        ctx,
    )?;
    let pre = x * x * y / f * first * second;
    let w = very_well_poised(d * f / e, &[d, f, d * f / x2, q * x2 / (b * e), q * x2 / (c * e)], b * c / x2, ctx)?;
    Ok(Tracked::from(w) * pre)
}

/// `[q, x, q/x, b, c, d, bc/xy², bd/xy², cd/xy²;
///   y, xy, b/y, c/y, d/y, b/xy, c/xy, d/xy, bcd/qxy²]_∞`
pub fn triple_product(x: Complex64, y: Complex64, b: Complex64, c: Complex64, d: Complex64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let xy = x * y;
    let x2 = xy * y;
    qfrac_inf(
        &[q, x, q / x, b, c, d, b * c / x2, b * d / x2, c * d / x2],
        &[y, xy, b / y, c / y, d / y, b / xy, c / xy, d / xy, b * c * d / (q * x2)],
        ctx,
    )
}

pub fn corl_b_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [x, y, b, c, d, e] = p.cs(["x", "y", "b", "c", "d", "e"])?;
    let n = p.count("n")? as i64;
    // (q^{-k-n}xy/e)_k and (q^{-n}y/e)_{k+1} against (q^{-k-n}y/e)_k and
    // (q^{-n}xy/e)_{k+1}: a sixth base t = xy²q^{-n}/e
    let t = x * y * y / (qpow(ctx.q(), n) * e);
    quintuple_lhs(x, y, &[b, c, d, e, t], 1, ctx)
}

pub fn corl_b_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [x, y, b, c, d, e] = p.cs(["x", "y", "b", "c", "d", "e"])?;
    let n = p.count("n")? as i64;
    let x2 = x * y * y;
    let qn = qpow(q, n);
    let pre = triple_product(x, y, b, c, d, ctx)?
        * (e * qn / (-y))
        * qfrac_n(&[e, q * e / x2], &[], n, ctx)?
        * qfrac_n(&[], &[e / y, e / (x * y)], n + 1, ctx)?;
    let phi = eval_phi(
        &SeriesSpec::phi(vec![qn.inv(), q / b, q / c, q / d], vec![q / (qn * e), q * e / x2, q * q * x2 / (b * c * d)], q),
        ctx,
    )?;
    Ok(Tracked::from(phi) * pre)
}

fn pair_lists(p: &ParamMap) -> Result<(usize, Vec<Complex64>, Vec<Complex64>, Vec<usize>)> {
    let n = p.count("n")?;
    Ok((n, p.family("x", n)?, p.family("y", n)?, p.counts("N", n)?))
}

pub fn thm_d_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
    let (n, xs, ys, _) = pair_lists(p)?;
    let ts: Vec<Complex64> = [b, c, d].into_iter().chain(xs).chain(ys).collect();
    quintuple_lhs(x, y, &ts, n, ctx)
}

pub fn thm_d_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
    let (n, xs, ys, big) = pair_lists(p)?;
    let xy = x * y;
    let x2 = xy * y;
    let mut pre = (-xy).powu(n as u32) * triple_product(x, y, b, c, d, ctx)?;
    for (&xi, &yi) in xs.iter().zip(&ys) {
        pre *= qfrac_inf(&[q * y / xi, q * xy / xi, yi, q * yi / x2], &[q / xi, x2 / xi, yi / y, yi / xy], ctx)? / xi;
    }
    if n == 0 {
        return Ok(Tracked::exact(pre));
    }
    let chain = ChainPattern {
        lead: (0..n).map(|s| xs[s] * ys[s] / x2).collect(),
        links: (0..n - 1)
            .map(|s| Link {
                upper: vec![q / xs[s + 1], q / ys[s + 1]],
                lower: vec![q * xs[s] / x2, q * ys[s] / x2],
                weight: xs[s + 1] * ys[s + 1] / x2,
            })
            .collect(),
        last_upper: vec![q / b, q / c, q / d],
        last_lower: vec![q * xs[n - 1] / x2, q * ys[n - 1] / x2, q * q * x2 / (b * c * d)],
    };
    Ok(Tracked::exact(pre * chain.sum(&big, ctx)?))
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "thm-b",
            title: "Common extension of Jacobi's triple product and the quintuple product identity",
            family: Family::Series,
            reciprocity: false,
            free: vec!["x", "y", "b", "c", "d", "e", "f"],
            ints: vec![],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let [x, y, b, c, d, e, f] = p.cs(["x", "y", "b", "c", "d", "e", "f"])?;
                let x2 = x * y * y;
                Ok(vec![
                    Bound::new("|bcdef/qx²y⁴|", (b * c * d * e * f / (ctx.q() * x2 * x2)).norm()),
                    Bound::new("|bc/xy²|", (b * c / x2).norm()),
                ])
            }),
            lhs: evaluator(thm_b_lhs),
            rhs: idem_plus(evaluator(big_s), "e", "f"),
        },
        IdentityCase {
            id: "corl-b",
            title: "Terminating specialization of the quintuple product extension",
            family: Family::Series,
            reciprocity: false,
            free: vec!["x", "y", "b", "c", "d", "e"],
            ints: vec![("n", vec![0, 1, 2, 3, 4])],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
                let n = p.count("n")? as i64;
                Ok(vec![Bound::new("|bcd/xy²q^(n+1)|", (b * c * d / (x * y * y * qpow(ctx.q(), n + 1))).norm())])
            }),
            lhs: evaluator(corl_b_lhs),
            rhs: evaluator(corl_b_rhs),
        },
        IdentityCase {
            id: "thm-d-multivar",
            title: "Multi-variable generalization of Jacobi's triple product identity",
            family: Family::Series,
            reciprocity: false,
            free: vec!["x", "y", "b", "c", "d"],
            ints: vec![],
            pairs: Some(PairSchema {
                free: "x",
                derived: "y",
                exponent: "N",
                exponents: 0..=3,
                counts: 0..=3,
                rule: Arc::new(|p, xi, big, ctx| {
                    let [x, y] = p.cs(["x", "y"])?;
                    Ok(x * y * y / (qpow(ctx.q(), big as i64) * xi))
                }),
            }),
            domain: Arc::new(|p, ctx| {
                let [x, y, b, c, d] = p.cs(["x", "y", "b", "c", "d"])?;
                let n = p.count("n")?;
                let total: usize = p.counts("N", n)?.iter().sum();
                Ok(vec![Bound::new(
                    "|bcd/xy²q^(N+1)|",
                    (b * c * d / (x * y * y * qpow(ctx.q(), total as i64 + 1))).norm(),
                )])
            }),
            lhs: evaluator(thm_d_lhs),
            rhs: evaluator(thm_d_rhs),
        },
    ]
}
