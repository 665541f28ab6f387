//! Classical identities: Watson's transformation, Bailey's 6ψ6 sum, the
//! Ramanujan reciprocity formula and its four- and five-variable
//! generalizations with their equivalent forms, and two standard
//! transformations of very-well-poised series.

use std::sync::Arc;

use num_complex::Complex64;

use super::hyper::HyperSum;
use super::{evaluator, idem_minus, idem_plus, Bound, Family, IdentityCase, ParamMap};
use crate::context::QContext;
use crate::qcore::{qfrac_inf, qfrac_n, qpow};
use crate::series::{eval_phi, eval_psi, very_well_poised, SeriesSpec};
use crate::tracked::Tracked;
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn exact(c: Complex64) -> Tracked {
    Tracked::exact(c)
}

fn series_case(
    id: &'static str,
    title: &'static str,
    free: &[&'static str],
    reciprocity: bool,
    domain: super::DomainFn,
    lhs: super::Evaluator,
    rhs: super::Evaluator,
) -> IdentityCase {
    IdentityCase {
        id,
        title,
        family: Family::Series,
        reciprocity,
        free: free.to_vec(),
        ints: vec![],
        pairs: None,
        domain,
        lhs,
        rhs,
    }
}

fn no_domain() -> super::DomainFn {
    Arc::new(|_, _| Ok(vec![]))
}

// Watson

pub fn watson_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let n = p.count("n")? as i64;
    let z = qpow(q, 2 + n) * a * a / (b * c * d * e);
    Ok(very_well_poised(a, &[b, c, d, e, qpow(q, -n)], z, ctx)?.into())
}

pub fn watson_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let n = p.count("n")? as i64;
    let pre = qfrac_n(&[q * a, q * a / (d * e)], &[q * a / d, q * a / e], n, ctx)?;
    let phi = eval_phi(
        &SeriesSpec::phi(vec![qpow(q, -n), d, e, q * a / (b * c)], vec![q * a / b, q * a / c, d * e * qpow(q, -n) / a], q),
        ctx,
    )?;
    Ok(Tracked::from(phi) * pre)
}

// Bailey's 6ψ6

pub fn bailey_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let s = a.sqrt();
    let prm = [b, c, d, e];
    let mut upper = vec![q * s, -q * s];
    let mut lower = vec![s, -s];
    upper.extend(prm);
    lower.extend(prm.iter().map(|x| q * a / x));
    Ok(eval_psi(&SeriesSpec::psi(upper, lower, q * a * a / (b * c * d * e)), ctx)?.into())
}

/// `[q, qa, q/a, qa/bc, qa/bd, qa/be, qa/cd, qa/ce, qa/de;
///   q/b, q/c, q/d, q/e, qa/b, qa/c, qa/d, qa/e, qa²/bcde]_∞`
pub fn bailey_product(a: Complex64, b: Complex64, c: Complex64, d: Complex64, e: Complex64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let qa = q * a;
    qfrac_inf(
        &[q, qa, q / a, qa / (b * c), qa / (b * d), qa / (b * e), qa / (c * d), qa / (c * e), qa / (d * e)],
        &[q / b, q / c, q / d, q / e, qa / b, qa / c, qa / d, qa / e, qa * a / (b * c * d * e)],
        ctx,
    )
}

pub fn bailey_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    Ok(exact(bailey_product(a, b, c, d, e, ctx)?))
}

// Ramanujan's reciprocity formula

fn ramanujan_part(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b] = p.cs(["a", "b"])?;
    HyperSum::new(-a / b).prefactor(ONE + ONE / b).lower([-q * a]).quadratic(1, 1).eval(ctx)
}

pub fn ramanujan_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b] = p.cs(["a", "b"])?;
    let r = qfrac_inf(&[q, q * a / b, q * b / a], &[-q * a, -q * b], ctx)?;
    Ok(exact((ONE / b - ONE / a) * r))
}

// Andrews' four-variable generalization and Kang's form

fn andrews_part(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
    HyperSum::new(-d / b)
        .prefactor(ONE + ONE / b)
        .upper([c, -q * a / d])
        .lower([-q * a])
        .lower_next([-c / b])
        .eval(ctx)
}

fn kang_part(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
    HyperSum::new(-a / b)
        .prefactor(ONE + ONE / b)
        .well_poised(-c * d / b)
        .upper([c, d, c * d / (a * b)])
        .lower([-q * a])
        .lower_next([-c / b, -d / b])
        .quadratic(1, 1)
        .eval(ctx)
}

/// `(1/b - 1/a) [q, qa/b, qb/a, c, d, cd/ab; -qa, -qb, -c/a, -c/b, -d/a, -d/b]_∞`
pub fn andrews_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d] = p.cs(["a", "b", "c", "d"])?;
    let r = qfrac_inf(
        &[q, q * a / b, q * b / a, c, d, c * d / (a * b)],
        &[-q * a, -q * b, -c / a, -c / b, -d / a, -d / b],
        ctx,
    )?;
    Ok(exact((ONE / b - ONE / a) * r))
}

// Ma's five-variable generalization and the Chu-Zhang form

/// One half of Ma's left side:
/// `Σ (1 - aq^{2k+1}/b) (-1/b)_{k+1}/(-qa)_k · (-qa/c, -qa/d, -qa/e)_k
///  / (-c/b, -d/b, -e/b)_{k+1} · (cde/qab)^k`.
pub fn ma_part(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    HyperSum::new(c * d * e / (q * a * b))
        .well_poised(q * a / b)
        .upper_next([-ONE / b])
        .lower([-q * a])
        .upper([-q * a / c, -q * a / d, -q * a / e])
        .lower_next([-c / b, -d / b, -e / b])
        .eval(ctx)
}

/// `(1/b - 1/a) [q, qa/b, qb/a, c, d, e, cd/ab, ce/ab, de/ab;
///   -qa, -qb, -c/a, -c/b, -d/a, -d/b, -e/a, -e/b, cde/qab]_∞`
pub fn ma_product(a: Complex64, b: Complex64, c: Complex64, d: Complex64, e: Complex64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    let ab = a * b;
    let r = qfrac_inf(
        &[q, q * a / b, q * b / a, c, d, e, c * d / ab, c * e / ab, d * e / ab],
        &[-q * a, -q * b, -c / a, -c / b, -d / a, -d / b, -e / a, -e / b, c * d * e / (q * ab)],
        ctx,
    )?;
    Ok((ONE / b - ONE / a) * r)
}

pub fn ma_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    Ok(exact(ma_product(a, b, c, d, e, ctx)?))
}

pub fn ma_domain(p: &ParamMap, ctx: &QContext) -> Result<Vec<Bound>> {
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    Ok(vec![Bound::new("|cde/qab|", (c * d * e / (ctx.q() * a * b)).norm())])
}

fn chu_zhang_part(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    HyperSum::new(q)
        .prefactor(ONE + ONE / b)
        .upper([c, -q * a / d, -q * a / e])
        .lower([-q * a, q * q * a * b / (d * e)])
        .lower_next([-c / b])
        .eval(ctx)
}

/// The 3φ2 correction term of the Chu-Zhang form:
/// `(de/qab)(1 + 1/b) [q, c, -qa/d, -qa/e, -de/b, -cde/ab²;
///  -qa, -c/b, -d/b, -e/b, q²ab/de, cde/qab]_∞
///  · 3φ2[-d/b, -e/b, cde/qab; -de/b, -cde/ab²; q, q]`.
pub fn chu_zhang_correction(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
    let ab = a * b;
    let pre = d * e / (q * ab)
        * (ONE + ONE / b)
        * qfrac_inf(
            &[q, c, -q * a / d, -q * a / e, -d * e / b, -c * d * e / (ab * b)],
            &[-q * a, -c / b, -d / b, -e / b, q * q * ab / (d * e), c * d * e / (q * ab)],
            ctx,
        )?;
    let phi = eval_phi(
        &SeriesSpec::phi(vec![-d / b, -e / b, c * d * e / (q * ab)], vec![-d * e / b, -c * d * e / (ab * b)], q),
        ctx,
    )?;
    Ok(Tracked::from(phi) * pre)
}

/// `(1 - de/qab) · Ma's product + X(a,b) - X(b,a)`.
pub fn chu_zhang_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let [a, b, d, e] = p.cs(["a", "b", "d", "e"])?;
    let lead = ma_rhs(p, ctx)? * (ONE - d * e / (ctx.q() * a * b));
    let x = idem_minus(evaluator(chu_zhang_correction), "a", "b");
    Ok(lead + x(p, ctx)?)
}

// Very-well-poised transformations

pub fn gr_8phi7_lhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
    let z = q * q * a * a / (b * c * d * e * f);
    Ok(very_well_poised(a, &[b, c, d, e, f], z, ctx)?.into())
}

/// `[qa, qa/ef, qλ/e, qλ/f; qa/e, qa/f, qλ, qλ/ef]_∞ · 8W7(λ; λb/a, λc/a, λd/a, e, f; qa/ef)`
/// with `λ = qa²/bcd`.
pub fn gr_8phi7_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
    let lam = q * a * a / (b * c * d);
    let pre = qfrac_inf(&[q * a, q * a / (e * f), q * lam / e, q * lam / f], &[q * a / e, q * a / f, q * lam, q * lam / (e * f)], ctx)?;
    let w = very_well_poised(lam, &[lam * b / a, lam * c / a, lam * d / a, e, f], q * a / (e * f), ctx)?;
    Ok(Tracked::from(w) * pre)
}

/// The very-well-poised `8ψ8` with parameters `b, c, d, e, f, g` and
/// argument `q²a³/bcdefg`.
pub fn psi88(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    let s = a.sqrt();
    let prm = [b, c, d, e, f, g];
    let mut upper = vec![q * s, -q * s];
    let mut lower = vec![s, -s];
    upper.extend(prm);
    lower.extend(prm.iter().map(|x| q * a / x));
    let z = q * q * a * a * a / (b * c * d * e * f * g);
    Ok(eval_psi(&SeriesSpec::psi(upper, lower, z), ctx)?.into())
}

fn gr_8psi8_term(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    let qa = q * a;
    let pre = qfrac_inf(
        &[q, qa, q / a, qa / (b * f), qa / (c * f), qa / (d * f), qa / (e * f), q * f / b, q * f / c, q * f / d, q * f / e, g, g / a],
        &[q / b, q / c, q / d, q / e, q / f, qa / b, qa / c, qa / d, qa / e, qa / f, g / f, f * g / a, q * f * f / a],
        ctx,
    )?;
    let z = q * q * a * a * a / (b * c * d * e * f * g);
    let w = very_well_poised(f * f / a, &[b * f / a, c * f / a, d * f / a, e * f / a, g * f / a], z, ctx)?;
    Ok(Tracked::from(w) * pre)
}

pub fn gr_8psi8_rhs(p: &ParamMap, ctx: &QContext) -> Result<Tracked> {
    idem_plus(evaluator(gr_8psi8_term), "f", "g")(p, ctx)
}

pub fn psi88_domain(p: &ParamMap, ctx: &QContext) -> Result<Vec<Bound>> {
    let q = ctx.q();
    let [a, b, c, d, e, f, g] = p.cs(["a", "b", "c", "d", "e", "f", "g"])?;
    Ok(vec![Bound::new("|q²a³/bcdefg|", (q * q * a * a * a / (b * c * d * e * f * g)).norm())])
}

pub fn cases() -> Vec<IdentityCase> {
    let abcde = ["a", "b", "c", "d", "e"];
    let mut watson = series_case(
        "watson",
        "Watson's transformation of a terminating very-well-poised 8φ7 into a balanced 4φ3",
        &abcde,
        false,
        no_domain(),
        evaluator(watson_lhs),
        evaluator(watson_rhs),
    );
    watson.ints = vec![("n", vec![0, 1, 2, 3, 5, 8])];
    vec![
        watson,
        series_case(
            "bailey-6psi6",
            "Bailey's very-well-poised 6ψ6 summation",
            &abcde,
            false,
            Arc::new(|p, ctx| {
                let q = ctx.q();
                let [a, b, c, d, e] = p.cs(["a", "b", "c", "d", "e"])?;
                Ok(vec![Bound::new("|qa²/bcde|", (q * a * a / (b * c * d * e)).norm())])
            }),
            evaluator(bailey_lhs),
            evaluator(bailey_rhs),
        ),
        series_case(
            "ramanujan-reciprocity",
            "Ramanujan's reciprocity formula",
            &["a", "b"],
            true,
            no_domain(),
            idem_minus(evaluator(ramanujan_part), "a", "b"),
            evaluator(ramanujan_rhs),
        ),
        series_case(
            "andrews-4var",
            "Andrews' four-variable reciprocity formula",
            &["a", "b", "c", "d"],
            true,
            Arc::new(|p, _| {
                let [a, b, d] = p.cs(["a", "b", "d"])?;
                Ok(vec![Bound::new("|d/a|", (d / a).norm()), Bound::new("|d/b|", (d / b).norm())])
            }),
            idem_minus(evaluator(andrews_part), "a", "b"),
            evaluator(andrews_rhs),
        ),
        series_case(
            "kang-equivalent",
            "Kang's equivalent form of the four-variable reciprocity formula",
            &["a", "b", "c", "d"],
            true,
            no_domain(),
            idem_minus(evaluator(kang_part), "a", "b"),
            evaluator(andrews_rhs),
        ),
        series_case(
            "ma-5var",
            "Ma's five-variable reciprocity formula",
            &abcde,
            true,
            Arc::new(ma_domain),
            idem_minus(evaluator(ma_part), "a", "b"),
            evaluator(ma_rhs),
        ),
        series_case(
            "chu-zhang-equivalent",
            "Chu-Zhang equivalent form of the five-variable reciprocity formula",
            &abcde,
            true,
            Arc::new(ma_domain),
            idem_minus(evaluator(chu_zhang_part), "a", "b"),
            evaluator(chu_zhang_rhs),
        ),
        series_case(
            "gr-2-10-1",
            "Transformation between two very-well-poised 8φ7 series",
            &["a", "b", "c", "d", "e", "f"],
            false,
            Arc::new(|p, ctx| {
                let q = ctx.q();
                let [a, b, c, d, e, f] = p.cs(["a", "b", "c", "d", "e", "f"])?;
                Ok(vec![
                    Bound::new("|qa/ef|", (q * a / (e * f)).norm()),
                    Bound::new("|q²a²/bcdef|", (q * q * a * a / (b * c * d * e * f)).norm()),
                ])
            }),
            evaluator(gr_8phi7_lhs),
            evaluator(gr_8phi7_rhs),
        ),
        series_case(
            "gr-5-6-1",
            "Very-well-poised 8ψ8 as a sum of two 8φ7 series",
            &["a", "b", "c", "d", "e", "f", "g"],
            false,
            Arc::new(psi88_domain),
            evaluator(psi88),
            evaluator(gr_8psi8_rhs),
        ),
    ]
}
