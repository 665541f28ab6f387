//! Terminating sums over bounded compositions `m = (m_1, …, m_n)` whose
//! terms factor into per-coordinate blocks that see `m_s` and the partial
//! sum `M_s = m_1 + … + m_s`.

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::QError;
use crate::qcore::{qfrac_n, qpow};
use crate::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Tolerance for recognising `u/v = q^N`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Every vector with `0 ≤ m_i ≤ limits[i]`, in lexicographic order.
pub fn compositions(limits: &[usize]) -> Compositions {
    Compositions { limits: limits.to_vec(), next: Some(vec![0; limits.len()]) }
}

#[derive(Debug, Clone)]
pub struct Compositions {
    limits: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            if succ[i] < self.limits[i] {
                succ[i] += 1;
                self.next = Some(succ);
                return Some(cur);
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Factor of coordinate `s` as a function of `(m_s, M_s)`.
pub type Block<'a> = Box<dyn Fn(usize, usize) -> Result<Complex64> + Send + Sync + 'a>;

pub struct MultiIndexSpec<'a> {
    pub limits: Vec<usize>,
    pub blocks: Vec<Block<'a>>,
}

/// Exact sum of `∏_s block_s(m_s, M_s)` over all compositions within the
/// limits. The empty composition (n = 0) contributes the empty product 1.
pub fn composition_sum(spec: &MultiIndexSpec, _ctx: &QContext) -> Result<Complex64> {
    if spec.limits.len() != spec.blocks.len() {
        return Err(QError::InvalidSpec(format!(
            "{} limits but {} blocks",
            spec.limits.len(),
            spec.blocks.len()
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for m in compositions(&spec.limits) {
        let mut term = ONE;
        let mut partial = 0;
        for (s, block) in spec.blocks.iter().enumerate() {
            partial += m[s];
            term *= block(m[s], partial)?;
            if term == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Link between coordinates `s` and `s+1`: `[upper; lower]_{M_s} · weight^{M_s}`.
#[derive(Debug, Clone)]
pub struct Link {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub weight: Complex64,
}

/// The block shape shared by every multi-sum here:
///
/// `∏_s (lead_s;q)_{m_s}/(q;q)_{m_s}`
/// `× [last_upper; last_lower]_{M_n} q^{M_n}`
/// `× ∏_{s<n} [link_s]_{M_s} weight_s^{M_s}`.
#[derive(Debug, Clone)]
pub struct ChainPattern {
    pub lead: Vec<Complex64>,
    pub links: Vec<Link>,
    pub last_upper: Vec<Complex64>,
    pub last_lower: Vec<Complex64>,
}

impl ChainPattern {
    pub fn sum(&self, limits: &[usize], ctx: &QContext) -> Result<Complex64> {
        let n = limits.len();
        if self.lead.len() != n || self.links.len() + 1 != n.max(1) {
            return Err(QError::InvalidSpec(format!(
                "chain of {n} coordinates needs {n} leads and {} links",
                n.saturating_sub(1)
            )));
        }
        let q = ctx.q();
        let mut blocks: Vec<Block> = Vec::with_capacity(n);
        for s in 0..n {
            let lead = self.lead[s];
            if s + 1 < n {
                let link = self.links[s].clone();
                blocks.push(Box::new(move |m, big_m| {
                    let head = qfrac_n(&[lead], &[q], m as i64, ctx)?;
                    let body = qfrac_n(&link.upper, &link.lower, big_m as i64, ctx)?;
                    Ok(head * body * link.weight.powu(big_m as u32))
                }));
            } else {
                let (up, lo) = (self.last_upper.clone(), self.last_lower.clone());
                blocks.push(Box::new(move |m, big_m| {
                    let head = qfrac_n(&[lead], &[q], m as i64, ctx)?;
                    let body = qfrac_n(&up, &lo, big_m as i64, ctx)?;
                    Ok(head * body * qpow(q, big_m as i64))
                }));
            }
        }
        composition_sum(&MultiIndexSpec { limits: limits.to_vec(), blocks }, ctx)
    }
}

/// Checks `u/v = q^N` to [`CONSTRAINT_TOL`].
pub fn check_power_ratio(u: Complex64, v: Complex64, n: usize, ctx: &QContext) -> Result<()> {
    let want = qpow(ctx.q(), n as i64);
    let got = u / v;
    if (got - want).norm() > CONSTRAINT_TOL * want.norm() {
        return Err(QError::ConstraintViolation(format!("u/v = {got} is not q^{n} = {want}")));
    }
    Ok(())
}

/// `Ω(a,b,c,d,n)`, the composition sum dividing the closed form of the
/// multi-pair Askey–Wilson integral.
pub fn omega(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    u: &[Complex64],
    v: &[Complex64],
    big_n: &[usize],
    ctx: &QContext,
) -> Result<Complex64> {
    let n = big_n.len();
    if u.len() != n || v.len() != n {
        return Err(QError::InvalidSpec("u, v and N must have equal length".into()));
    }
    for i in 0..n {
        check_power_ratio(u[i], v[i], big_n[i], ctx)?;
    }
    if n == 0 {
        return Ok(ONE);
    }
    let q = ctx.q();
    let links = (0..n - 1)
        .map(|s| Link {
            upper: vec![q * u[s + 1] / d, q / (d * v[s + 1])],
            lower: vec![q / (d * u[s]), q * v[s] / d],
            weight: v[s + 1] / u[s + 1],
        })
        .collect();
    let pattern = ChainPattern {
        lead: (0..n).map(|s| v[s] / u[s]).collect(),
        links,
        last_upper: vec![q / (a * d), q / (b * d), q / (c * d)],
        last_lower: vec![q / (d * u[n - 1]), q * v[n - 1] / d, q * q / (a * b * c * d)],
    };
    pattern.sum(big_n, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::qcore::qpoch;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(compositions(&[1]).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let v: Vec<_> = compositions(&[1, 2]).collect();
        assert_eq!(v.len(), 6);
        assert_eq!(v.first().unwrap(), &vec![0, 0]);
        assert_eq!(v.last().unwrap(), &vec![1, 2]);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(compositions(&[3, 0, 2]).count(), 12);
    }

    #[test]
    fn empty_sum_is_one() {
        let ctx = QContext::real(0.5).unwrap();
        let spec = MultiIndexSpec { limits: vec![], blocks: vec![] };
        assert_eq!(composition_sum(&spec, &ctx).unwrap(), ONE);
        let z = c64(0.3, 0.0);
        assert_eq!(omega(z, z, z, z, &[], &[], &[], &ctx).unwrap(), ONE);
    }

    #[test]
    fn omega_single_pair_is_balanced_4phi3() {
        let ctx = QContext::real(0.4).unwrap();
        let q = ctx.q();
        let (a, b, c, d) = (c64(0.3, 0.0), c64(-0.2, 0.0), c64(0.5, 0.0), c64(0.25, 0.0));
        let vv = c64(0.6, 0.0);
        for n in 0..4usize {
            let uu = vv * qpow(q, n as i64);
            let om = omega(a, b, c, d, &[uu], &[vv], &[n], &ctx).unwrap();
            // 4φ3[q^{-n}, q/ad, q/bd, q/cd; q/du, qv/d, q²/abcd; q, q]
            let mut want = c64(0.0, 0.0);
            for k in 0..=n as i64 {
                let num = [qpow(q, -(n as i64)), q / (a * d), q / (b * d), q / (c * d)];
                let den = [q, q / (d * uu), q * vv / d, q * q / (a * b * c * d)];
                let mut t = qpow(q, k);
                for x in num {
                    t *= qpoch(x, k, &ctx).unwrap();
                }
                for x in den {
                    t /= qpoch(x, k, &ctx).unwrap();
                }
                want += t;
            }
            assert!((om - want).norm() < 1e-13 * want.norm(), "n = {n}");
        }
    }

    #[test]
    fn constraint_checked() {
        let ctx = QContext::real(0.4).unwrap();
        let z = c64(0.3, 0.0);
        let r = omega(z, z, z, z, &[c64(0.5, 0.0)], &[c64(0.6, 0.0)], &[1], &ctx);
        assert!(matches!(r, Err(QError::ConstraintViolation(_))));
    }
}
