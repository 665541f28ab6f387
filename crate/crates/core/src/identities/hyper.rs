//! Sum shapes shared by several identities.

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::QError;
use crate::qcore::{qpoch_shifted_scaled, qpow, qpow_scaled, Scaled, EXACT_ZERO_TOL};
use crate::series::eval_kshifted_sum;
use crate::tracked::Tracked;
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `prefactor · Σ_k (1 - w q^{2k}) · ∏(u)_k/∏(l)_k · ∏(u')_{k+1}/∏(l')_{k+1}
/// · z^k · q^{(A k² + B k)/2}`, summed by term ratios.
///
/// Covers the reciprocity-type sums, which mix `(·)_k` and `(·)_{k+1}`
/// symbols and sometimes carry a well-poised factor or a Gaussian weight.
#[derive(Debug, Clone)]
pub struct HyperSum {
    pub prefactor: Complex64,
    pub well_poised: Option<Complex64>,
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub upper_next: Vec<Complex64>,
    pub lower_next: Vec<Complex64>,
    pub argument: Complex64,
    pub quadratic: (i64, i64),
}

impl HyperSum {
    pub fn new(argument: Complex64) -> Self {
        HyperSum {
            prefactor: ONE,
            well_poised: None,
            upper: vec![],
            lower: vec![],
            upper_next: vec![],
            lower_next: vec![],
            argument,
            quadratic: (0, 0),
        }
    }

    pub fn prefactor(mut self, p: Complex64) -> Self {
        self.prefactor = p;
        self
    }

    pub fn well_poised(mut self, w: Complex64) -> Self {
        self.well_poised = Some(w);
        self
    }

    pub fn upper(mut self, v: impl IntoIterator<Item = Complex64>) -> Self {
        self.upper.extend(v);
        self
    }

    pub fn lower(mut self, v: impl IntoIterator<Item = Complex64>) -> Self {
        self.lower.extend(v);
        self
    }

    pub fn upper_next(mut self, v: impl IntoIterator<Item = Complex64>) -> Self {
        self.upper_next.extend(v);
        self
    }

    pub fn lower_next(mut self, v: impl IntoIterator<Item = Complex64>) -> Self {
        self.lower_next.extend(v);
        self
    }

    /// Weight `q^{(a k² + b k)/2}`; `a + b` must be even.
    pub fn quadratic(mut self, a: i64, b: i64) -> Self {
        assert!((a + b) % 2 == 0, "q^((a k^2 + b k)/2) needs a + b even");
        self.quadratic = (a, b);
        self
    }

    pub fn eval(&self, ctx: &QContext) -> Result<Tracked> {
        let q = ctx.q();
        let guard = ctx.pole_guard();
        let pole = |x: Complex64, j: usize| {
            QError::Pole(format!("denominator factor 1 - {x}·q^{j} vanishes"))
        };

        let mut base = ONE;
        let mut dead = false;
        for &u in &self.upper_next {
            let f = ONE - u;
            if f.norm() < EXACT_ZERO_TOL {
                dead = true;
            }
            base *= f;
        }
        for &l in &self.lower_next {
            let f = ONE - l;
            if f.norm() < guard && !dead {
                return Err(pole(l, 0));
            }
            base /= f;
        }

        let (qa, qb) = self.quadratic;
        let r = eval_kshifted_sum(
            |k| {
                if k > 0 && !dead {
                    // advance term k-1 to term k
                    let j = k as i64 - 1;
                    let qj = qpow(q, j);
                    let qj1 = qj * q;
                    let mut num = self.argument * qpow(q, (qa * (2 * j + 1) + qb) / 2);
                    let factors = self.upper.iter().map(|&u| ONE - u * qj);
                    for f in factors.chain(self.upper_next.iter().map(|&u| ONE - u * qj1)) {
                        if f.norm() < EXACT_ZERO_TOL {
                            dead = true;
                        }
                        num *= f;
                    }
                    if dead || num == ZERO {
                        dead = true;
                    } else {
                        let mut den = ONE;
                        for &l in &self.lower {
                            let f = ONE - l * qj;
                            if f.norm() < guard {
                                return Err(pole(l, j as usize));
                            }
                            den *= f;
                        }
                        for &l in &self.lower_next {
                            let f = ONE - l * qj1;
                            if f.norm() < guard {
                                return Err(pole(l, j as usize + 1));
                            }
                            den *= f;
                        }
                        base *= num / den;
                    }
                }
                if dead {
                    return Ok(ZERO);
                }
                let w = match self.well_poised {
                    Some(w) => ONE - w * qpow(q, 2 * k as i64),
                    None => ONE,
                };
                Ok(base * w)
            },
            ctx,
        )?;
        Ok(Tracked::from(r) * self.prefactor)
    }
}

fn scaled_pochs(bases: &[Complex64], shift: i64, n: usize, guard: bool, ctx: &QContext) -> Result<Scaled> {
    let mut p = Scaled::ONE;
    for &t in bases {
        p = p * qpoch_shifted_scaled(t, shift, n, guard, ctx)?;
    }
    Ok(p)
}

/// The two-sum left side shared by the quintuple-product family:
///
/// `Σ_k A_k - x^{n+1} Σ_k B_k`, with
/// `A_k = (1 - q^{2k+1}/x) (q/xy)_k ∏_t (q^{-k}t/y)_k / ((y)_{k+1} ∏_t (t/xy)_{k+1})
///     · q^{((2n+3)k² + (2n+1)k)/2} (-y/x^{n+1})^k`
/// and
/// `B_k = (1 - q^{2k+1}x) (q/y)_k ∏_t (q^{-k}t/xy)_k / ((xy)_{k+1} ∏_t (t/y)_{k+1})
///     · q^{…} (-x^{n+2}y)^k`.
///
/// Bases run over `t ∈ ts` (`2n+3` of them); each term is computed from
/// scratch in scaled arithmetic since the bases depend on `k`.
pub fn quintuple_lhs(x: Complex64, y: Complex64, ts: &[Complex64], n: usize, ctx: &QContext) -> Result<Tracked> {
    let q = ctx.q();
    let (wa, wb) = (2 * n as i64 + 3, 2 * n as i64 + 1);
    let p = n as u64 + 1;
    let xy = x * y;
    let ty: Vec<Complex64> = ts.iter().map(|t| t / y).collect();
    let txy: Vec<Complex64> = ts.iter().map(|t| t / xy).collect();
    let za = Scaled::new(-y) / Scaled::new(x).powi(p);
    let zb = Scaled::new(-y) * Scaled::new(x).powi(p + 1);

    let side = |k: usize, first: bool| -> Result<Complex64> {
        let ki = k as i64;
        let w = qpow_scaled(q, (wa * ki * ki + wb * ki) / 2);
        let q2k1 = qpow_scaled(q, 2 * ki + 1);
        let (lead, head, shifted, plain, first_den, z) = if first {
            ((q2k1 * x.inv()).one_minus(), q / xy, &ty, &txy, y, za)
        } else {
            ((q2k1 * x).one_minus(), q / y, &txy, &ty, xy, zb)
        };
        let num = lead * qpoch_shifted_scaled(head, 0, k, false, ctx)? * scaled_pochs(shifted, -ki, k, false, ctx)?;
        if num.is_zero() {
            return Ok(ZERO);
        }
        let den = qpoch_shifted_scaled(first_den, 0, k + 1, true, ctx)? * scaled_pochs(plain, 0, k + 1, true, ctx)?;
        Ok((num / den * w * z.powi(k as u64)).to_complex())
    };

    let a = Tracked::from(eval_kshifted_sum(|k| side(k, true), ctx)?);
    let b = Tracked::from(eval_kshifted_sum(|k| side(k, false), ctx)?);
    Ok(a - b * x.powu(p as u32))
}
