use num_complex::Complex64;
use qverify_core::identities::{check_case, find, sample_case, Mode, ParamMap};
use qverify_core::qcore::{qpoch, qpow};
use qverify_core::series::{eval_bilateral_split, eval_kshifted_sum, eval_phi, eval_psi, very_well_poised, SeriesSpec};
use qverify_core::{c64, QContext, QError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn disc(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn re(x: f64) -> Complex64 {
    c64(x, 0.0)
}

#[test]
fn geometric_and_trivial_argument() {
    let ctx = QContext::real(0.5).unwrap();
    let r = eval_phi(&SeriesSpec::phi(vec![ctx.q()], vec![], re(0.3)), &ctx).unwrap();
    assert!(rel(r.value, re(1.0 / 0.7)) < 1e-12);
    assert!(r.abs_error_estimate < 1e-11);
    let r = eval_phi(&SeriesSpec::phi(vec![re(0.4), re(0.2)], vec![re(0.7)], re(0.0)), &ctx).unwrap();
    assert_eq!(r.value, re(1.0));
}

#[test]
fn terminating_series_use_exactly_n_plus_one_terms() {
    for q in [0.3, 0.5, 0.8] {
        let ctx = QContext::real(q).unwrap();
        for n in 0..10 {
            let spec = SeriesSpec::phi(vec![re(0.4), qpow(ctx.q(), -n), re(0.6)], vec![re(0.3), re(-0.5)], re(0.9));
            let r = eval_phi(&spec, &ctx).unwrap();
            assert!(r.terminated, "q={q} n={n}");
            assert_eq!(r.terms_used, n as usize + 1, "q={q} n={n}");
            assert_eq!(r.abs_error_estimate, 0.0);
        }
    }
}

/// Naive sum with every Pochhammer recomputed from its definition.
fn brute_phi(upper: &[Complex64], lower: &[Complex64], z: Complex64, terms: i64, ctx: &QContext) -> Complex64 {
    let q = ctx.q();
    let excess = lower.len() as i64 + 1 - upper.len() as i64;
    (0..terms)
        .map(|k| {
            let mut t = z.powi(k as i32) / qpoch(q, k, ctx).unwrap();
            for &a in upper {
                t *= qpoch(a, k, ctx).unwrap();
            }
            for &b in lower {
                t /= qpoch(b, k, ctx).unwrap();
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            t * (sign * qpow(q, k * (k - 1) / 2)).powi(excess as i32)
        })
        .sum()
}

#[test]
fn very_well_poised_matches_extended_precision_oracle() {
    // 200-term sum at 30 digits
    let ctx = QContext::real(0.5).unwrap();
    let params = [re(0.4), re(-0.3), re(0.55), re(0.25), re(0.6)];
    let r = very_well_poised(re(0.35), &params, re(0.7), &ctx).unwrap();
    let want = re(4.464_901_217_249_683);
    assert!(rel(r.value, want) < 1e-12, "{}", r.value);
    // the geometric tail estimate brackets the actual truncation error
    let err = (r.value - want).norm();
    assert!(err <= 1.5 * r.abs_error_estimate && r.abs_error_estimate <= 10.0 * err.max(1e-15));
}

#[test]
fn unilateral_engine_matches_naive_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..30 {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let upper: Vec<_> = (0..4).map(|_| disc(&mut rng, 0.1, 0.9)).collect();
        let lower: Vec<_> = (0..(3 + i % 3)).map(|_| disc(&mut rng, 0.1, 0.8)).collect();
        let z = disc(&mut rng, 0.1, 0.6);
        let fast = eval_phi(&SeriesSpec::phi(upper.clone(), lower.clone(), z), &ctx).unwrap();
        let slow = brute_phi(&upper, &lower, z, 200, &ctx);
        assert!(rel(fast.value, slow) < 1e-11, "point {i}: {} vs {slow}", fast.value);
    }
}

fn random_psi(rng: &mut ChaCha8Rng, r: usize) -> (Vec<Complex64>, Vec<Complex64>, Complex64) {
    let upper: Vec<_> = (0..r).map(|_| disc(rng, 0.5, 0.9)).collect();
    let lower: Vec<_> = (0..r).map(|_| disc(rng, 0.2, 0.6)).collect();
    // |z| at the geometric middle of the annulus |∏b/∏a| < |z| < 1
    let bu: f64 = upper.iter().map(|a| a.norm()).product();
    let bl: f64 = lower.iter().map(|b| b.norm()).product();
    let z = Complex64::from_polar((bl / bu).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    (upper, lower, z)
}

#[test]
fn bilateral_with_lower_q_collapses_to_unilateral() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let upper: Vec<_> = (0..3).map(|_| disc(&mut rng, 0.1, 0.9)).collect();
        let lower: Vec<_> = (0..2).map(|_| disc(&mut rng, 0.1, 0.9)).collect();
        let z = disc(&mut rng, 0.1, 0.7);
        let phi = eval_phi(&SeriesSpec::phi(upper.clone(), lower.clone(), z), &ctx).unwrap();
        // the φ definition's (q;q)_k becomes an explicit lower q
        let spec = SeriesSpec::psi(upper, [vec![ctx.q()], lower].concat(), z);
        let psi = eval_psi(&spec, &ctx).unwrap();
        assert!(rel(psi.value, phi.value) < 1e-12, "point {i}");
        assert!(psi.branch_terms.1 <= 1);
        let (_, tail) = eval_bilateral_split(&spec, &ctx).unwrap();
        assert_eq!(tail.value, re(0.0));
    }
}

#[test]
fn split_components_recombine() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    for i in 0..40 {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let (upper, lower, z) = random_psi(&mut rng, 3 + i % 2);
        let spec = SeriesSpec::psi(upper, lower, z);
        let Ok(whole) = eval_psi(&spec, &ctx) else { continue };
        let (pos, neg) = eval_bilateral_split(&spec, &ctx).unwrap();
        let bound = whole.abs_error_estimate + pos.abs_error_estimate + neg.abs_error_estimate;
        let dev = (pos.value + neg.value - whole.value).norm();
        assert!(dev <= 1e-11 * whole.value.norm() + bound, "point {i}: {dev:e}");
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} convergent draws");
}

/// Bilateral sum over -terms..terms, every term rebuilt from the
/// definition. A negative order `k = -j` contributes
/// `z^{-j} ∏_{i=1}^{j} ∏_m (1 - b_m q^{-i}) / (1 - a_m q^{-i})`, taken factor
/// pair by factor pair so neither product leaves double range.
fn brute_psi(upper: &[Complex64], lower: &[Complex64], z: Complex64, terms: i64, ctx: &QContext) -> Complex64 {
    let q = ctx.q();
    let one = re(1.0);
    let positive: Complex64 = (0..=terms)
        .map(|k| {
            let mut t = z.powi(k as i32);
            for (&a, &b) in upper.iter().zip(lower) {
                t *= qpoch(a, k, ctx).unwrap() / qpoch(b, k, ctx).unwrap();
            }
            t
        })
        .sum();
    let negative: Complex64 = (1..=terms)
        .map(|j| {
            let mut t = z.powi(-(j as i32));
            for i in 1..=j {
                for (&a, &b) in upper.iter().zip(lower) {
                    t *= (one - b * qpow(q, -i)) / (one - a * qpow(q, -i));
                }
            }
            t
        })
        .sum();
    positive + negative
}

#[test]
fn bilateral_engine_matches_naive_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for i in 0..30 {
        let ctx = QContext::real([0.3, 0.5][i % 2]).unwrap();
        let (upper, lower, z) = random_psi(&mut rng, 2 + i % 3);
        let fast = eval_psi(&SeriesSpec::psi(upper.clone(), lower.clone(), z), &ctx);
        let slow = brute_psi(&upper, &lower, z, 120, &ctx);
        let Ok(fast) = fast else { continue };
        if !(slow.re.is_finite() && slow.im.is_finite()) {
            continue;
        }
        assert!(rel(fast.value, slow) < 1e-10, "point {i}: {} vs {slow}", fast.value);
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} convergent draws");
}

#[test]
fn bailey_sum_at_documented_point() {
    // both sides at 30 digits: 0.934133774816679498…
    let ctx = QContext::real(0.3).unwrap();
    let p = ParamMap::new().with("a", re(0.5)).with("b", re(0.9)).with("c", re(0.8)).with("d", re(0.7)).with("e", re(0.6));
    let case = find("bailey-6psi6").unwrap();
    let lhs = (case.lhs)(&p, &ctx).unwrap().value;
    let rhs = (case.rhs)(&p, &ctx).unwrap().value;
    let want = re(0.934_133_774_816_679_5);
    assert!(rel(lhs, want) < 1e-12, "{lhs}");
    assert!(rel(rhs, want) < 1e-13, "{rhs}");
}

#[test]
fn watson_at_every_listed_order() {
    let case = find("watson").unwrap();
    for n in [0, 1, 2, 3, 5, 8] {
        for (i, q) in [0.3, 0.5, 0.8].into_iter().enumerate() {
            let ctx = QContext::real(q).unwrap();
            let fixed = ParamMap::new().with_int("n", n);
            for s in 0..5 {
                let seed = 1000 * n as u64 + 10 * i as u64 + s;
                let p = sample_case(case, seed, Mode::Complex, &fixed, &ctx).unwrap();
                let r = check_case(case, &p, &ctx, seed).unwrap();
                assert!(!r.verdict.is_fail(), "n={n} q={q}: {r}");
                if r.verdict.is_pass() {
                    assert!(r.rel_residual.unwrap() < 1e-10 || r.abs_residual.unwrap() < 1e-12, "n={n} q={q}: {r}");
                }
            }
        }
    }
}

#[test]
fn kshifted_sum_basics() {
    let ctx = QContext::real(0.5).unwrap();
    let r = eval_kshifted_sum(|k| Ok(if k == 0 { re(1.0) } else { re(0.0) }), &ctx).unwrap();
    assert_eq!(r.value, re(1.0));
    // a k-dependent base: Σ (q^{-k} t;q)_k q^{k²} z^k / (q;q)_k
    let t = re(0.3);
    let z = re(0.2);
    let q = ctx.q();
    let r = eval_kshifted_sum(|k| Ok(qpoch(qpow(q, -(k as i64)) * t, k as i64, &ctx)? * qpow(q, (k * k) as i64) * z.powi(k as i32) / qpoch(q, k as i64, &ctx)?), &ctx).unwrap();
    let slow: Complex64 = (0..30).map(|k| qpoch(qpow(q, -k) * t, k, &ctx).unwrap() * qpow(q, k * k) * z.powi(k as i32) / qpoch(q, k, &ctx).unwrap()).sum();
    assert!(rel(r.value, slow) < 1e-13);
}

#[test]
fn malformed_and_divergent_specs() {
    let ctx = QContext::real(0.5).unwrap();
    assert!(matches!(eval_psi(&SeriesSpec::psi(vec![re(0.2)], vec![], re(0.5)), &ctx), Err(QError::InvalidSpec(_))));
    assert!(matches!(eval_phi(&SeriesSpec::psi(vec![re(0.2)], vec![re(0.3)], re(0.5)), &ctx), Err(QError::InvalidSpec(_))));
    let r = eval_phi(&SeriesSpec::phi(vec![re(0.5), re(0.5)], vec![re(0.2)], re(3.0)), &ctx);
    assert!(matches!(r, Err(QError::DivergentSeries { .. })));
}
