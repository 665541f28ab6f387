use num_complex::Complex64;
use qverify_core::multisum::{composition_sum, compositions, omega, Block, ChainPattern, Link, MultiIndexSpec};
use qverify_core::qcore::{qpoch, qpow};
use qverify_core::series::{eval_phi, SeriesSpec};
use qverify_core::{c64, QContext, QError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn disc(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// `a, b, c, d` and pairs `v_i` with `u_i = q^{N_i} v_i`.
fn omega_point(rng: &mut ChaCha8Rng, big_n: &[usize], q: Complex64) -> ([Complex64; 4], Vec<Complex64>, Vec<Complex64>) {
    let abcd = [0; 4].map(|_| disc(rng, 0.2, 0.8));
    let v: Vec<_> = big_n.iter().map(|_| disc(rng, 0.2, 0.8)).collect();
    let u = v.iter().zip(big_n).map(|(&v, &n)| v * qpow(q, n as i64)).collect();
    (abcd, u, v)
}

#[test]
fn composition_enumeration() {
    assert_eq!(compositions(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    assert_eq!(compositions(&[1]).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    let v: Vec<_> = compositions(&[1, 2]).collect();
    assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]);
    for limits in [vec![3, 0, 2], vec![2, 2, 2, 1], vec![0, 0]] {
        let all: Vec<_> = compositions(&limits).collect();
        assert_eq!(all.len(), limits.iter().map(|n| n + 1).product::<usize>());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn partial_sums_reach_each_block() {
    let ctx = QContext::real(0.5).unwrap();
    // the first block checks m_1 = M_1, the second contributes M_2 = m_1 + m_2
    let blocks: Vec<Block> = vec![
        Box::new(|m, big| Ok(c64(if m == big { 1.0 } else { f64::NAN }, 0.0))),
        Box::new(|_, big| Ok(c64(big as f64, 0.0))),
    ];
    let total = composition_sum(&MultiIndexSpec { limits: vec![2, 3], blocks }, &ctx).unwrap();
    // Σ_{m1≤2, m2≤3} (m1 + m2) = 4·3 + 3·6 = 30
    assert_eq!(total, c64(30.0, 0.0));
    let bad = MultiIndexSpec { limits: vec![1], blocks: vec![] };
    assert!(matches!(composition_sum(&bad, &ctx), Err(QError::InvalidSpec(_))));
}

#[test]
fn empty_and_zero_order_sums_are_one() {
    let ctx = QContext::real(0.3).unwrap();
    let z = c64(0.4, 0.1);
    assert_eq!(omega(z, z, z, z, &[], &[], &[], &ctx).unwrap(), c64(1.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ([a, b, c, d], u, v) = omega_point(&mut rng, &[0], ctx.q());
    assert_eq!(omega(a, b, c, d, &u, &v, &[0], &ctx).unwrap(), c64(1.0, 0.0));
}

#[test]
fn single_pair_omega_is_a_terminating_4phi3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..30 {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let q = ctx.q();
        let n = i % 5;
        let ([a, b, c, d], u, v) = omega_point(&mut rng, &[n], q);
        let got = omega(a, b, c, d, &u, &v, &[n], &ctx).unwrap();
        let spec = SeriesSpec::phi(
            vec![qpow(q, -(n as i64)), q / (a * d), q / (b * d), q / (c * d)],
            vec![q / (d * u[0]), q * v[0] / d, q * q / (a * b * c * d)],
            q,
        );
        let want = eval_phi(&spec, &ctx).unwrap();
        assert!(want.terminated);
        assert!(rel(got, want.value) < 1e-12, "point {i}: {got} vs {}", want.value);
    }
}

#[test]
fn two_pair_omega_matches_direct_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let poch = |x: Complex64, k: usize, ctx: &QContext| qpoch(x, k as i64, ctx).unwrap();
    for (i, big_n) in [[1, 1], [2, 1], [0, 2], [2, 2]].into_iter().enumerate() {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let q = ctx.q();
        let ([a, b, c, d], u, v) = omega_point(&mut rng, &big_n, q);
        let mut want = c64(0.0, 0.0);
        for m1 in 0..=big_n[0] {
            for m2 in 0..=big_n[1] {
                let (s1, s2) = (m1, m1 + m2);
                let heads = poch(v[0] / u[0], m1, &ctx) / poch(q, m1, &ctx) * poch(v[1] / u[1], m2, &ctx) / poch(q, m2, &ctx);
                let link = poch(q * u[1] / d, s1, &ctx) * poch(q / (d * v[1]), s1, &ctx)
                    / (poch(q / (d * u[0]), s1, &ctx) * poch(q * v[0] / d, s1, &ctx))
                    * (v[1] / u[1]).powu(s1 as u32);
                let last = poch(q / (a * d), s2, &ctx) * poch(q / (b * d), s2, &ctx) * poch(q / (c * d), s2, &ctx)
                    / (poch(q / (d * u[1]), s2, &ctx) * poch(q * v[1] / d, s2, &ctx) * poch(q * q / (a * b * c * d), s2, &ctx))
                    * qpow(q, s2 as i64);
                want += heads * link * last;
            }
        }
        let got = omega(a, b, c, d, &u, &v, &big_n, &ctx).unwrap();
        assert!(rel(got, want) < 1e-12, "N={big_n:?}: {got} vs {want}");
    }
}

#[test]
fn raising_a_limit_adds_exact_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10 {
        let ctx = QContext::real([0.3, 0.5, 0.8][i % 3]).unwrap();
        let q = ctx.q();
        let big_n = [i % 3, (i + 1) % 3];
        let lead: Vec<_> = big_n.iter().map(|&n| qpow(q, -(n as i64))).collect();
        let pattern = ChainPattern {
            lead,
            links: vec![Link { upper: vec![disc(&mut rng, 0.2, 0.8)], lower: vec![disc(&mut rng, 0.2, 0.8)], weight: disc(&mut rng, 0.2, 0.8) }],
            last_upper: vec![disc(&mut rng, 0.2, 0.8), disc(&mut rng, 0.2, 0.8)],
            last_lower: vec![disc(&mut rng, 0.2, 0.8), disc(&mut rng, 0.2, 0.8)],
        };
        let exact = pattern.sum(&big_n, &ctx).unwrap();
        let wider = pattern.sum(&[big_n[0] + 3, big_n[1] + 2], &ctx).unwrap();
        assert_eq!(exact, wider, "point {i}");
    }
}

#[test]
fn ratio_constraint_is_enforced() {
    let ctx = QContext::real(0.5).unwrap();
    let z = c64(0.3, 0.0);
    let v = c64(0.4, 0.2);
    let u = v * 0.25 * (1.0 + 1e-9);
    assert!(matches!(omega(z, z, z, z, &[u], &[v], &[2], &ctx), Err(QError::ConstraintViolation(_))));
    assert!(omega(z, z, z, z, &[v * 0.25], &[v], &[2], &ctx).is_ok());
    assert!(matches!(omega(z, z, z, z, &[u], &[v], &[2, 1], &ctx), Err(QError::InvalidSpec(_))));
}
