//! Seven-variable and multi-variable extensions of the reciprocity formula.

use std::sync::Arc;

use num_complex::Complex64;

use super::classical::ma_product;
use super::hyper::HyperSum;
use super::{evaluator, idem_minus, idem_plus, Bound, Family, IdentityCase, PairSchema, ParamMap};
use crate::context::QContext;
use crate::multisum::{ChainPattern, Link};
use crate::qcore::{qfrac_inf, qfrac_n, qpow};
use crate::series::{eval_phi, very_well_poised, SeriesSpec};
use crate::tracked::Tracked;
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `ρ(a,b;c,d,e,f,g) = (1/b) Σ (1 - aq^{2k+1}/b) (-1/b)_{k+1}/(-qa)_k
///  · (-qa/c, …, -qa/g)_k / (-c/b, …, -g/b)_{k+1} · (cdefg/qa²b²)^k`
pub fn rho(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    let ps = [c, d, e, f, g];
    HyperSum::new(c * d * e * f * g / (q * a * a * b * b))
        .prefactor(ONE / b)
        .well_poised(q * a / b)
        .upper_next([-ONE / b])
        .lower([-q * a])
        .upper(ps.iter().map(|x| -q * a / x))
        .lower_next(ps.iter().map(|x| -x / b))
        .eval(ctx)
}

/// `R(a,b,c,d,e;f,g)`: a product prefactor times an 8φ7 with base
/// `deg/abf` and argument `c`.
pub fn big_r(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    let ab = a * b;
    let first = qfrac_inf(&[q, c, f, q * a / b, q * b / a], &[-q * a, -q * b, -c / a, -c / b, -d / a], ctx)?;
    let second = qfrac_inf(
        &[
            -q * a / g,
            -q * b / g,
            q * d / f,
            q * e / f,
            c * f / ab,
            d * f / ab,
            e * f / ab,
            d * e * g / ab,
            c * d * e * g / (ab * ab),
        ],
        &[
            -d / b,
            -e / a,
            -e / b,
            -f / a,
            -f / b,
            f / g,
            q * ab / (f * g),
            q * d * e * g / (ab * f),
            c * d * e * f * g / (q * ab * ab),
        ],
        ctx,
    )?;
    let pre = (ONE / g) * (ONE / b - ONE / a) * first * second;
    let lam = d * e * g / (ab * f);
    let w = very_well_poised(lam, &[d * e / ab, d * g / ab, e * g / ab, q / f, q * ab / (c * f)], c, ctx)?;
    Ok(Tracked::from(w) * pre)
}

/// `ρ'(a,b;c,d,e,f)` of the terminating specialization.
pub fn rho_prime(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
    let n = p.count("n")? as i64;
    let qn = qpow(q, n);
    HyperSum::new(c * d * e / (a * b * qn * q))
        .prefactor(ONE / b)
        .well_poised(q * a / b)
        .upper_next([-ONE / b])
        .lower([-q * a])
        .upper([-q * a / c, -q * a / d, -q * a / e, -q * a / f, -q * qn * f / b])
        .lower_next([-c / b, -d / b, -e / b, -f / b, -a / (f * qn)])
        .eval(ctx)
}

pub fn corl_a_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
    let n = p.count("n")? as i64;
    let ab = a * b;
    let qn = qpow(q, n);
    let pre = ma_product(a, b, c, d, e, ctx)?
        * (f * qn / ab)
        * qfrac_n(&[q * f / e, e * f / ab], &[], n, ctx)?
        * qfrac_n(&[], &[-f / a, -f / b], n + 1, ctx)?;
    let phi = eval_phi(
        &SeriesSpec::phi(
            vec![ONE / qn, q / e, q * ab / (c * e), q * ab / (d * e)],
            vec![q * ab / (qn * e * f), q * f / e, q * q * ab / (c * d * e)],
            q,
        ),
        ctx,
    )?;
    Ok(Tracked::from(phi) * pre)
}

fn pair_lists(p: &ParamMap) -> Result<(usize, Vec<Complex64>, Vec<Complex64>, Vec<usize>)> {
    let n = p.count("n")?;
    Ok((n, p.family("x", n)?, p.family("y", n)?, p.counts("N", n)?))
}

/// The multi-variable `ρ(a,b;c,d,e,{x_i,y_i})` with weight `(cde/abq^{N+1})^k`.
pub fn rho_multi(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let (n, xs, ys, big) = pair_lists(p)?;
    let total: usize = big.iter().sum();
    let ps: Vec<Complex64> = [c, d, e].into_iter().chain(xs).chain(ys).collect();
    HyperSum::new(c * d * e / (a * b * qpow(q, total as i64 + 1)))
        .prefactor(ONE / b.powu(n as u32))
        .well_poised(q * a / b)
        .upper_next([-ONE / b])
        .lower([-q * a])
        .upper(ps.iter().map(|x| -q * a / x))
        .lower_next(ps.iter().map(|x| -x / b))
        .eval(ctx)
}

pub fn thm_c_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let (n, xs, ys, big) = pair_lists(p)?;
    let ab = a * b;
    let mut pre = ma_product(a, b, c, d, e, ctx)?;
    for (&x, &y) in xs.iter().zip(&ys) {
        pre *= qfrac_inf(&[-q * a / x, -q * b / x, q * y / e, e * y / ab], &[e / x, q * ab / (e * x), -y / a, -y / b], ctx)? / x;
    }
    if n == 0 {
        return Ok(Tracked::exact(pre));
    }
    let chain = ChainPattern {
        lead: (0..n).map(|s| xs[s] * ys[s] / ab).collect(),
        links: (0..n - 1)
            .map(|s| Link {
                upper: vec![q * ab / (e * xs[s + 1]), q * ab / (e * ys[s + 1])],
                lower: vec![q * xs[s] / e, q * ys[s] / e],
                weight: xs[s + 1] * ys[s + 1] / ab,
            })
            .collect(),
        last_upper: vec![q / e, q * ab / (c * e), q * ab / (d * e)],
        last_lower: vec![q * xs[n - 1] / e, q * ys[n - 1] / e, q * q * ab / (c * d * e)],
    };
    Ok(Tracked::exact(pre * chain.sum(&big, ctx)?))
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "thm-a-7var",
            title: "Seven-variable generalization of Ramanujan's reciprocity formula",
            family: Family::Series,
            reciprocity: true,
            free: vec!["a", "b", "c", "d", "e", "f", "g"],
            ints: vec![],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
                Ok(vec![
                    Bound::new("|cdefg/qa²b²|", (c * d * e * f * g / (ctx.q() * a * a * b * b)).norm()),
                    Bound::new("|c|", c.norm()),
                ])
            }),
            lhs: idem_minus(evaluator(rho), "a", "b"),
            rhs: idem_plus(evaluator(big_r), "f", "g"),
        },
        IdentityCase {
            id: "corl-a",
            title: "Terminating specialization of the seven-variable reciprocity formula",
            family: Family::Series,
            reciprocity: true,
            free: vec!["a", "b", "c", "d", "e", "f"],
            ints: vec![("n", vec![0, 1, 2, 3, 4])],
            pairs: None,
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
                let n = p.count("n")? as i64;
                Ok(vec![Bound::new("|cde/abq^(n+1)|", (c * d * e / (a * b * qpow(ctx.q(), n + 1))).norm())])
            }),
            lhs: idem_minus(evaluator(rho_prime), "a", "b"),
            rhs: evaluator(corl_a_rhs),
        },
        IdentityCase {
            id: "thm-c-multivar",
            title: "Multi-variable generalization of Ramanujan's reciprocity formula",
            family: Family::Series,
            reciprocity: true,
            free: vec!["a", "b", "c", "d", "e"],
            ints: vec![],
            pairs: Some(PairSchema {
                free: "x",
                derived: "y",
                exponent: "N",
                exponents: 0..=3,
                counts: 0..=3,
                rule: Arc::new(|p, x, big, ctx| {
                    let [a, b] = p.cs(["a", "b"])?;
                    Ok(a * b / (qpow(ctx.q(), big as i64) * x))
                }),
            }),
            domain: Arc::new(|p, ctx| {
                let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
                let n = p.count("n")?;
                let total: usize = p.counts("N", n)?.iter().sum();
                Ok(vec![Bound::new("|cde/abq^(N+1)|", (c * d * e / (a * b * qpow(ctx.q(), total as i64 + 1))).norm())])
            }),
            lhs: idem_minus(evaluator(rho_multi), "a", "b"),
            rhs: evaluator(thm_c_rhs),
        },
    ]
}
