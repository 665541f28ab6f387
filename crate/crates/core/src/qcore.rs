//! q-shifted factorials `(x;q)_n` for every integer order and for infinite
//! order, together with the multi-base product and ratio shorthands.

use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::QError;
use crate::series::SeriesResult;
use crate::Result;

/// A factor `1 - x q^i` this close to zero is an exact zero: the base sits
/// on `q^{-i}` and the product terminates rather than merely becoming small.
pub const EXACT_ZERO_TOL: f64 = 1e-13;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Order of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl From<i64> for Order {
    fn from(n: i64) -> Self {
        Order::Finite(n)
    }
}

/// `(base;q)_order` as a value object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochhammerSpec {
    pub base: Complex64,
    pub order: Order,
}

impl PochhammerSpec {
    pub fn new(base: Complex64, order: impl Into<Order>) -> Self {
        PochhammerSpec { base, order: order.into() }
    }

    pub fn eval(&self, ctx: &QContext) -> Result<Complex64> {
        match self.order {
            Order::Finite(n) => qpoch(self.base, n, ctx),
            Order::Infinite => Ok(qpoch_inf(self.base, ctx)?.value),
        }
    }
}

/// `q^n` by repeated squaring, so integer exponents stay exact in the
/// combinatorial sense and no complex logarithm is involved.
pub fn qpow(q: Complex64, n: i64) -> Complex64 {
    let mut base = if n < 0 { ONE / q } else { q };
    let mut e = n.unsigned_abs();
    let mut acc = ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[inline]
fn is_exact_zero(f: Complex64) -> bool {
    f.norm() < EXACT_ZERO_TOL
}

/// `(x;q)_n` for any integer `n`, following the three-case definition.
pub fn qpoch(x: Complex64, n: i64, ctx: &QContext) -> Result<Complex64> {
    let q = ctx.q();
    match n {
        0 => Ok(ONE),
        n if n > 0 => {
            let mut p = ONE;
            let mut xq = x;
            for _ in 0..n {
                let f = ONE - xq;
                if is_exact_zero(f) {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                p *= f;
                xq *= q;
            }
            Ok(p)
        }
        n => {
            // factors j = n..-1, i.e. x q^{-1}, x q^{-2}, ..., x q^{n}
            let qinv = ONE / q;
            let mut p = ONE;
            let mut xq = x * qinv;
            for j in 1..=n.unsigned_abs() {
                let f = ONE - xq;
                if f.norm() < ctx.pole_guard() {
                    return Err(QError::Pole(format!(
                        "(x;q)_{n} with x = {x} has factor 1 - x q^-{j} of size {:e}",
                        f.norm()
                    )));
                }
                p *= f;
                xq *= qinv;
            }
            Ok(ONE / p)
        }
    }
}

/// `(x;q)_∞` with a tail bound taken from the geometric majorant of the
/// log-factors.
pub fn qpoch_inf(x: Complex64, ctx: &QContext) -> Result<SeriesResult> {
    Ok(qpoch_inf_scaled(x, ctx)?.1)
}

/// [`qpoch_inf`] with the product also kept in scaled form, for bases far
/// outside the unit disc whose products leave double range.
fn qpoch_inf_scaled(x: Complex64, ctx: &QContext) -> Result<(Scaled, SeriesResult)> {
    if x == Complex64::new(0.0, 0.0) {
        return Ok((Scaled::ONE, SeriesResult::exact(ONE, 1)));
    }
    let q = ctx.q();
    let qn = q.norm();
    let tol = ctx.product_tol();
    let mut p = Scaled::ONE;
    let mut xq = x;
    let mut small = 0usize;
    for k in 0..ctx.max_product_factors() {
        let f = ONE - xq;
        if is_exact_zero(f) {
            let zero = Complex64::new(0.0, 0.0);
            return Ok((Scaled::ZERO, SeriesResult { terminated: true, ..SeriesResult::exact(zero, k + 1) }));
        }
        p = p * f;
        let dev = xq.norm();
        small = if dev < tol { small + 1 } else { 0 };
        xq *= q;
        // bound on sum_{j>k} |x q^j|
        let tail = xq.norm() / (1.0 - qn);
        if small >= 3 && tail < tol * (1.0 - qn) {
            let log_tail = tail / (1.0 - tail.min(0.5));
            let value = p.to_complex();
            return Ok((
                p,
                SeriesResult {
                    value,
                    abs_error_estimate: value.norm() * log_tail.exp_m1(),
                    abs_sum: value.norm(),
                    terms_used: k + 1,
                    terminated: false,
                    branch_terms: (k + 1, 0),
                },
            ));
        }
    }
    Err(QError::CapExceeded { base: x.to_string(), cap: ctx.max_product_factors() })
}

/// Product `(x;q)_n` in scaled form, also reporting the smallest factor
/// modulus so callers can apply the pole guard to denominators.
fn guarded_product(x: Complex64, n: Order, ctx: &QContext) -> Result<(Scaled, f64)> {
    match n {
        Order::Finite(n) if n > 0 => {
            let q = ctx.q();
            let mut p = Scaled::ONE;
            let mut xq = x;
            let mut min = f64::INFINITY;
            for _ in 0..n {
                let f = ONE - xq;
                min = min.min(f.norm());
                if is_exact_zero(f) {
                    return Ok((Scaled::ZERO, 0.0));
                }
                p = p * f;
                xq *= q;
            }
            Ok((p, min))
        }
        Order::Finite(n) => Ok((Scaled::new(qpoch(x, n, ctx)?), f64::INFINITY)),
        Order::Infinite => {
            let (p, r) = qpoch_inf_scaled(x, ctx)?;
            // The smallest factor of an infinite product is among the first
            // few; it is 1 - x q^k with |x q^k| closest to one.
            let q = ctx.q();
            let mut xq = x;
            let mut min = f64::INFINITY;
            for _ in 0..r.terms_used {
                min = min.min((ONE - xq).norm());
                if xq.norm() < 0.5 {
                    break;
                }
                xq *= q;
            }
            Ok((p, min))
        }
    }
}

/// `(a,b,...,c;q)_n`
pub fn qpoch_multi(bases: &[Complex64], n: Order, ctx: &QContext) -> Result<Complex64> {
    let mut p = Scaled::ONE;
    for &b in bases {
        p = p * guarded_product(b, n, ctx)?.0;
    }
    Ok(p.to_complex())
}

/// `[numer; denom]_n`, the stacked-ratio shorthand. Numerator and
/// denominator stay in scaled form until the ratio is taken, so large
/// cancelling products do not overflow.
pub fn qfrac(numer: &[Complex64], denom: &[Complex64], n: Order, ctx: &QContext) -> Result<Complex64> {
    let mut d = Scaled::ONE;
    for &b in denom {
        let (v, min) = guarded_product(b, n, ctx)?;
        if min < ctx.pole_guard() {
            return Err(QError::Pole(format!(
                "denominator ({b};q)_{} has a factor of size {min:e}",
                order_label(n)
            )));
        }
        d = d * v;
    }
    let mut p = Scaled::ONE;
    for &b in numer {
        p = p * guarded_product(b, n, ctx)?.0;
    }
    if p.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((p / d).to_complex())
}

/// `[numer; denom]_∞`
pub fn qfrac_inf(numer: &[Complex64], denom: &[Complex64], ctx: &QContext) -> Result<Complex64> {
    qfrac(numer, denom, Order::Infinite, ctx)
}

/// `[numer; denom]_n` for finite `n`.
pub fn qfrac_n(numer: &[Complex64], denom: &[Complex64], n: i64, ctx: &QContext) -> Result<Complex64> {
    qfrac(numer, denom, Order::Finite(n), ctx)
}

fn order_label(n: Order) -> String {
    match n {
        Order::Finite(n) => n.to_string(),
        Order::Infinite => "inf".into(),
    }
}

/// Complex number with a separate binary exponent, `mant · 2^exp`.
///
/// Sums whose terms mix products like `(q^{-k} t;q)_k` with weights such as
/// `q^{k(5k+3)/2}` overflow and underflow in plain doubles long before the
/// term itself does; carrying the exponent aside keeps them exact enough.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mant: Complex64,
    exp: i64,
}

fn ldexp(c: Complex64, e: i64) -> Complex64 {
    let mut c = c;
    let mut e = e;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        c *= 2f64.powi(step as i32);
        e -= step;
    }
    c
}

impl Scaled {
    pub const ONE: Scaled = Scaled { mant: ONE, exp: 0 };
    pub const ZERO: Scaled = Scaled { mant: Complex64 { re: 0.0, im: 0.0 }, exp: 0 };

    pub fn new(c: Complex64) -> Self {
        Scaled { mant: c, exp: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        let m = self.mant.re.abs().max(self.mant.im.abs());
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        let e = m.log2().floor() as i64;
        Scaled { mant: ldexp(self.mant, -e), exp: self.exp + e }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == Complex64::new(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    /// Back to an ordinary double; overflows to infinity, underflows to zero.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return self.mant;
        }
        if self.exp > 1100 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        if self.exp < -1200 {
            return Complex64::new(0.0, 0.0);
        }
        ldexp(self.mant, self.exp)
    }

    /// log2 of the modulus.
    pub fn log2_norm(&self) -> f64 {
        self.mant.norm().log2() + self.exp as f64
    }

    pub fn powi(self, n: u64) -> Self {
        let mut base = self;
        let mut e = n;
        let mut acc = Scaled::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `1 - self`. Once `|self|` exceeds 2^60 the 1 is below double resolution.
    pub fn one_minus(self) -> Self {
        if self.exp > 60 {
            -self
        } else {
            Scaled::new(ONE - self.to_complex())
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled { mant: self.mant * o.mant, exp: self.exp + o.exp }.normalized()
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, o: Complex64) -> Scaled {
        self * Scaled::new(o)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled { mant: self.mant / o.mant, exp: self.exp - o.exp }.normalized()
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, exp: self.exp }
    }
}

/// `q^n` as a [`Scaled`].
pub fn qpow_scaled(q: Complex64, n: i64) -> Scaled {
    let base = if n < 0 { Scaled::new(ONE / q) } else { Scaled::new(q) };
    base.powi(n.unsigned_abs())
}

/// `(x q^shift; q)_n = ∏_{i<n} (1 - x q^{shift+i})` in scaled arithmetic.
///
/// With `guard` set the product is a denominator: a factor below the pole
/// guard is an error instead of an exact zero.
pub fn qpoch_shifted_scaled(x: Complex64, shift: i64, n: usize, guard: bool, ctx: &QContext) -> Result<Scaled> {
    let q = Scaled::new(ctx.q());
    let mut xq = qpow_scaled(ctx.q(), shift) * x;
    let mut p = Scaled::ONE;
    for _ in 0..n {
        let f = xq.one_minus();
        let fn_ = if f.exp > 2 { f64::INFINITY } else { f.to_complex().norm() };
        if guard && fn_ < ctx.pole_guard() {
            return Err(QError::Pole(format!(
                "denominator factor 1 - x q^j with x = {x} has size {fn_:e}"
            )));
        }
        if fn_ < EXACT_ZERO_TOL {
            return Ok(Scaled::ZERO);
        }
        p = p * f;
        xq = xq * q;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn ctx(q: f64) -> QContext {
        QContext::real(q).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn small_orders_by_hand() {
        let c = ctx(0.5);
        assert_eq!(qpoch(c64(0.7, 0.2), 0, &c).unwrap(), ONE);
        assert!(close(qpoch(c64(0.5, 0.0), 2, &c).unwrap(), c64(0.375, 0.0), 1e-15));
        assert!(close(qpoch(c64(0.25, 0.0), -1, &c).unwrap(), c64(2.0, 0.0), 1e-15));
    }

    #[test]
    fn euler_function_at_half() {
        let r = qpoch_inf(c64(0.5, 0.0), &ctx(0.5)).unwrap();
        assert!((r.value.re - 0.288_788_095_086_602_4).abs() < 1e-15);
        assert!(r.abs_error_estimate < 1e-13);
        assert!(!r.terminated);
    }

    #[test]
    fn zero_base_is_exactly_one() {
        let r = qpoch_inf(c64(0.0, 0.0), &ctx(0.9)).unwrap();
        assert_eq!(r.value, ONE);
        assert_eq!(r.abs_error_estimate, 0.0);
    }

    #[test]
    fn cap_exceeded_near_unit_base() {
        let c = ctx(0.999).with_max_product_factors(100).unwrap();
        assert!(matches!(qpoch_inf(c64(0.5, 0.0), &c), Err(QError::CapExceeded { .. })));
    }

    #[test]
    fn negative_order_pole() {
        let c = ctx(0.5);
        // x q^{-1} = 1
        assert!(matches!(qpoch(c64(0.5, 0.0), -1, &c), Err(QError::Pole(_))));
    }

    #[test]
    fn terminating_zero_is_exact() {
        let c = ctx(0.3);
        let x = qpow(c.q(), -3);
        for k in 0..=3 {
            assert_ne!(qpoch(x, k, &c).unwrap(), c64(0.0, 0.0));
        }
        for k in 4..10 {
            assert_eq!(qpoch(x, k, &c).unwrap(), c64(0.0, 0.0));
        }
    }

    #[test]
    fn qpow_matches_repeated_multiplication() {
        let q = c64(0.3, 0.4);
        let mut p = ONE;
        for n in 0..40 {
            assert!(close(qpow(q, n), p, 1e-13));
            assert!(close(qpow(q, -n), ONE / p, 1e-13));
            p *= q;
        }
    }

    #[test]
    fn multi_and_frac() {
        let c = ctx(0.5);
        let a = c64(0.2, 0.0);
        let b = c64(0.3, 0.0);
        assert_eq!(qpoch_multi(&[], Order::Finite(4), &c).unwrap(), ONE);
        let m = qpoch_multi(&[a, b], Order::Finite(2), &c).unwrap();
        assert!(close(m, qpoch(a, 2, &c).unwrap() * qpoch(b, 2, &c).unwrap(), 1e-15));
        assert!(close(qfrac(&[a], &[a], Order::Finite(3), &c).unwrap(), ONE, 1e-15));
        assert!(close(qfrac_inf(&[c.q()], &[c.q()], &c).unwrap(), ONE, 1e-15));
        let r = qfrac_inf(&[c64(0.1, 0.0)], &[c64(0.2, 0.0)], &c).unwrap();
        let o = qpoch_inf(c64(0.1, 0.0), &c).unwrap().value / qpoch_inf(c64(0.2, 0.0), &c).unwrap().value;
        assert!(close(r, o, 1e-15));
    }

    #[test]
    fn frac_guards_denominators_only() {
        let c = ctx(0.5);
        // (2;q)_2 contains 1 - 2q = 0
        let two = c64(2.0, 0.0);
        assert!(matches!(qfrac(&[ONE], &[two], Order::Finite(2), &c), Err(QError::Pole(_))));
        assert_eq!(qfrac(&[two], &[ONE * 0.1], Order::Finite(2), &c).unwrap(), c64(0.0, 0.0));
        assert!(matches!(qfrac_inf(&[ONE * 0.1], &[two], &c), Err(QError::Pole(_))));
    }

    #[test]
    fn scaled_round_trip_and_extremes() {
        let x = Scaled::new(c64(3.0, -4.0));
        assert!(close(x.to_complex(), c64(3.0, -4.0), 1e-15));
        let big = Scaled::new(c64(1e300, 0.0)) * Scaled::new(c64(1e300, 0.0));
        let tiny = Scaled::new(c64(1e-300, 0.0)) * Scaled::new(c64(1e-300, 0.0));
        assert!(close((big * tiny).to_complex(), ONE, 1e-14));
        assert!(big.to_complex().re.is_infinite());
        assert_eq!(tiny.to_complex(), c64(0.0, 0.0));
        assert!(close(qpow_scaled(c64(0.5, 0.0), -2000).log2_norm().into(), c64(2000.0, 0.0), 1e-12));
    }

    #[test]
    fn shifted_scaled_matches_plain() {
        let c = ctx(0.4);
        let x = c64(0.3, 0.2);
        for shift in -6..4 {
            for n in 0..8usize {
                let s = qpoch_shifted_scaled(x, shift, n, false, &c).unwrap().to_complex();
                let p = qpoch(x * qpow(c.q(), shift), n as i64, &c).unwrap();
                assert!(close(s, p, 1e-12), "shift {shift} n {n}");
            }
        }
    }
}
