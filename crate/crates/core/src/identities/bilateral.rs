//! Bilateral extensions of Bailey's 6ψ6 summation.

use std::sync::Arc;

use num_complex::Complex64;

use super::classical::{bailey_product, psi88};
use super::{evaluator, idem_plus, Bound, Family, IdentityCase, PairSchema, ParamMap};
use crate::context::QContext;
use crate::multisum::{ChainPattern, Link};
use crate::qcore::{qfrac_inf, qpow};
use crate::series::{eval_psi, very_well_poised, SeriesSpec};
use crate::tracked::Tracked;
use crate::Result;

/// One of the two terms of the 8ψ8 lemma: a product prefactor times an
/// 8φ7 with base `qaf/deg` and argument `qa/bc`.
pub fn lemma_term(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    let qa = q * a;
    let qqaa = qa * qa;
    let pre = qfrac_inf(
        &[
            q,
            qa,
            q / a,
            qa / (b * c),
            qa / (b * f),
            qa / (c * f),
            qa / (d * f),
            qa / (e * f),
            q * f / d,
            q * f / e,
            g,
            g / a,
            qqaa / (b * d * e * g),
            qqaa / (c * d * e * g),
        ],
        &[
            q / b,
            q / c,
            q / d,
            q / e,
            q / f,
            qa / b,
            qa / c,
            qa / d,
            qa / e,
            qa / f,
            g / f,
            f * g / a,
            q * qa * f / (d * e * g),
            qqaa * a / (b * c * d * e * f * g),
        ],
        ctx,
    )?;
    let lam = qa * f / (d * e * g);
    let w = very_well_poised(lam, &[qa / (d * e), qa / (d * g), qa / (e * g), b * f / a, c * f / a], qa / (b * c), ctx)?;
    Ok(Tracked::from(w) * pre)
}

fn milne_lists(p: &ParamMap) -> Result<(usize, Vec<Complex64>, Vec<Complex64>, Vec<usize>)> {
    let n = p.count("n")?;
    Ok((n, p.family("x", n)?, p.family("y", n)?, p.counts("N", n)?))
}

pub fn milne_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let (_, xs, ys, big) = milne_lists(p)?;
    let total: usize = big.iter().sum();
    let s = a.sqrt();
    let prm: Vec<Complex64> = [b, c, d, e].into_iter().chain(xs).chain(ys).collect();
    let mut upper = vec![q * s, -q * s];
    let mut lower = vec![s, -s];
    upper.extend(&prm);
    lower.extend(prm.iter().map(|x| q * a / x));
    let z = qpow(q, 1 - total as i64) * a * a / (b * c * d * e);
    Ok(eval_psi(&SeriesSpec::psi(upper, lower, z), ctx)?.into())
}

pub fn milne_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let (n, xs, ys, big) = milne_lists(p)?;
    let mut pre = bailey_product(a, b, c, d, e, ctx)?;
    for (&x, &y) in xs.iter().zip(&ys) {
        pre *= qfrac_inf(&[x, x / a, q * e / y, q * a / (e * y)], &[x / e, e * x / a, q / y, q * a / y], ctx)?;
    }
    if n == 0 {
        return Ok(Tracked::exact(pre));
    }
    let chain = ChainPattern {
        lead: (0..n).map(|s| q * a / (xs[s] * ys[s])).collect(),
        links: (0..n - 1)
            .map(|s| Link {
                upper: vec![e * xs[s + 1] / a, e * ys[s + 1] / a],
                lower: vec![q * e / xs[s], q * e / ys[s]],
                weight: q * a / (xs[s + 1] * ys[s + 1]),
            })
            .collect(),
        last_upper: vec![b * e / a, c * e / a, d * e / a],
        last_lower: vec![q * e / xs[n - 1], q * e / ys[n - 1], b * c * d * e / (a * a)],
    };
    Ok(Tracked::exact(pre * chain.sum(&big, ctx)?))
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "lemma-8psi8",
            title: "Very-well-poised 8ψ8 generalization of Bailey's 6ψ6 summation",
            family: Family::Series,
            reciprocity: false,
            free: vec!["a", "b", "c", "d", "e", "f", "g"],
            ints: vec![],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let q = ctx.q();
                let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
                Ok(vec![
                    Bound::new("|q²a³/bcdefg|", (q * q * a * a * a / (b * c * d * e * f * g)).norm()),
                    Bound::new("|qa/bc|", (q * a / (b * c)).norm()),
                ])
            }),
            lhs: evaluator(psi88),
            rhs: idem_plus(evaluator(lemma_term), "f", "g"),
        },
        IdentityCase {
            id: "lemma-milne",
            title: "Bilateral extension of Bailey's 6ψ6 summation with constrained parameter pairs",
            family: Family::Series,
            reciprocity: false,
            free: vec!["a", "b", "c", "d", "e"],
            ints: vec![],
            pairs: Some(PairSchema {
                free: "x",
                derived: "y",
                exponent: "N",
                exponents: 0..=3,
                counts: 0..=3,
                rule: Arc::new(|p, x, big, ctx| Ok(qpow(ctx.q(), 1 + big as i64) * p.c("a")? / x)),
            }),
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
                let n = p.count("n")?;
                let total: usize = p.counts("N", n)?.iter().sum();
                Ok(vec![Bound::new(
                    "|q^(1-N)a²/bcde|",
                    (qpow(ctx.q(), 1 - total as i64) * a * a / (b * c * d * e)).norm(),
                )])
            }),
            lhs: evaluator(milne_lhs),
            rhs: evaluator(milne_rhs),
        },
    ]
}
