//! Askey–Wilson-type integrals checked against their closed forms.

use std::sync::Arc;

use num_complex::Complex64;

use super::{evaluator, Bound, Family, IdentityCase, PairSchema, ParamMap};
use crate::context::QContext;
use crate::integrals::{
    aw_pairs_closed_form, aw_reflected_closed_form, aw_single_pair_closed_form, integrate_aw, AWIntegrandSpec,
};
use crate::qcore::qpow;
use crate::tracked::Tracked;
use crate::Result;

fn quadrature(spec: &AWIntegrandSpec, ctx: &QContext) -> Result<Tracked> {
    let r = integrate_aw(spec, ctx)?;
    Ok(Tracked { value: Complex64::new(r.value, 0.0), scale: r.value.abs(), err: r.abs_error_estimate })
}

fn pairs(p: &ParamMap, free: &str, exponent: &str) -> Result<(Vec<Complex64>, Vec<Complex64>, Vec<usize>)> {
    let n = p.count("n")?;
    Ok((p.family("u", n)?, p.family(free, n)?, p.counts(exponent, n)?))
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn thm_e_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
    let (u, v, _) = pairs(p, "v", "N")?;
    quadrature(&AWIntegrandSpec::new(a, b, c, d).with_pairs(u, v), ctx)
}

pub fn thm_e_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
    let (u, v, big) = pairs(p, "v", "N")?;
    Ok(Tracked::exact(aw_pairs_closed_form(a, b, c, d, &u, &v, &big, ctx)?))
}

pub fn corl_c_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d, u] = p.cs(["a", "b", "c", "d", "u"])?;
    let n = p.count("n")? as i64;
    quadrature(&AWIntegrandSpec::new(a, b, c, d).with_pairs(vec![u * qpow(ctx.q(), n)], vec![u]), ctx)
}

pub fn corl_c_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d, u] = p.cs(["a", "b", "c", "d", "u"])?;
    Ok(Tracked::exact(aw_single_pair_closed_form(a, b, c, d, u, p.count("n")?, ctx)?))
}

pub fn corl_e_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c] = p.cs(["a", "b", "c"])?;
    let (u, v, _) = pairs(p, "v", "m")?;
    quadrature(&AWIntegrandSpec::new(a, b, c, ctx.q() / a).with_pairs(u, v), ctx)
}

pub fn corl_e_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c] = p.cs(["a", "b", "c"])?;
    let (u, v, m) = pairs(p, "v", "m")?;
    Ok(Tracked::exact(aw_reflected_closed_form(a, b, c, &u, &v, &m, ctx)?))
}

fn power_pair(exponent: &'static str, counts: std::ops::RangeInclusive<i64>) -> PairSchema {
    PairSchema {
        free: "v",
        derived: "u",
        exponent,
        exponents: 0..=2,
        counts,
        rule: Arc::new(|_, v, big, ctx| Ok(v * qpow(ctx.q(), big as i64))),
    }
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "thm-e-integral",
            title: "Multi-variable generalization of the Askey-Wilson integral",
            family: Family::Integral,
            reciprocity: false,
            free: vec!["a", "b", "c", "d"],
            ints: vec![],
            pairs: Some(power_pair("N", 0..=2)),
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
                let (_, v, big) = pairs(p, "v", "N")?;
                let total: usize = big.iter().sum();
                Ok(vec![
                    Bound::new("|abcd/q^(N+1)|", (a * b * c * d / qpow(ctx.q(), total as i64 + 1)).norm()),
                    Bound::new("max(|a|,|b|,|c|,|d|)", max_norm(&[a, b, c, d])),
                    Bound::new("max |v_i|", max_norm(&v)),
                ])
            }),
            lhs: evaluator(thm_e_lhs),
            rhs: evaluator(thm_e_rhs),
        },
        IdentityCase {
            id: "corl-c-integral",
            title: "Askey-Wilson integral with one extra h-function ratio",
            family: Family::Integral,
            reciprocity: false,
            free: vec!["a", "b", "c", "d", "u"],
            ints: vec![("n", vec![0, 1, 2, 3])],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d, u] = p.cs(["a", "b", "c", "d", "u"])?;
                let n = p.count("n")? as i64;
                Ok(vec![
                    Bound::new("|abcd/q^(n+1)|", (a * b * c * d / qpow(ctx.q(), n + 1)).norm()),
                    Bound::new("max(|a|,|b|,|c|,|d|,|u|)", max_norm(&[a, b, c, d, u])),
                ])
            }),
            lhs: evaluator(corl_c_lhs),
            rhs: evaluator(corl_c_rhs),
        },
        IdentityCase {
            id: "corl-e-integral",
            title: "Askey-Wilson-type integral at d = q/a",
            family: Family::Integral,
            reciprocity: false,
            free: vec!["a", "b", "c"],
            ints: vec![],
            pairs: Some(power_pair("m", 0..=2)),
            domain: Arc::new(|p, ctx| {
                let q = ctx.q();
                let [a, b, c] = p.cs(["a", "b", "c"])?;
                let (_, v, m) = pairs(p, "v", "m")?;
                let total: usize = m.iter().sum();
                Ok(vec![
                    Bound::new("|bc/q^m|", (b * c / qpow(q, total as i64)).norm()),
                    Bound::new("|q/a|", (q / a).norm()).with_margin(0.95),
                    Bound::new("max(|a|,|b|,|c|)", max_norm(&[a, b, c])),
                    Bound::new("max |v_i|", max_norm(&v)),
                ])
            }),
            lhs: evaluator(corl_e_lhs),
            rhs: evaluator(corl_e_rhs),
        },
    ]
}
