use num_complex::Complex64;

use crate::error::QError;
use crate::Result;

/// The base `q` together with every numerical policy knob.
///
/// Construction validates `|q| < 1`, positive tolerances and caps of at
/// least one; the setters re-validate, so a live context is always sound.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    q: Complex64,
    series_tol: f64,
    product_tol: f64,
    max_terms: usize,
    max_product_factors: usize,
    pole_guard: f64,
    identity_tol: f64,
}

impl QContext {
    pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
    pub const DEFAULT_PRODUCT_TOL: f64 = 1e-14;
    pub const DEFAULT_MAX_TERMS: usize = 10_000;
    pub const DEFAULT_MAX_PRODUCT_FACTORS: usize = 4_000;
    pub const DEFAULT_POLE_GUARD: f64 = 1e-8;
    pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;

    pub fn new(q: Complex64) -> Result<Self> {
        let ctx = QContext {
            q,
            series_tol: Self::DEFAULT_SERIES_TOL,
            product_tol: Self::DEFAULT_PRODUCT_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
            max_product_factors: Self::DEFAULT_MAX_PRODUCT_FACTORS,
            pole_guard: Self::DEFAULT_POLE_GUARD,
            identity_tol: Self::DEFAULT_IDENTITY_TOL,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Real base, the common case.
    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    fn validate(&self) -> Result<()> {
        let m = self.q.norm();
        if !(m < 1.0) {
            return Err(QError::InvalidBase(m));
        }
        for (name, v) in [
            ("series_tol", self.series_tol),
            ("product_tol", self.product_tol),
            ("pole_guard", self.pole_guard),
            ("identity_tol", self.identity_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(QError::InvalidPolicy(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_terms < 1 || self.max_product_factors < 1 {
            return Err(QError::InvalidPolicy("caps must be at least 1".into()));
        }
        Ok(())
    }

    fn with(mut self, f: impl FnOnce(&mut Self)) -> Result<Self> {
        f(&mut self);
        self.validate()?;
        Ok(self)
    }

    pub fn with_q(self, q: Complex64) -> Result<Self> {
        self.with(|c| c.q = q)
    }

    pub fn with_series_tol(self, v: f64) -> Result<Self> {
        self.with(|c| c.series_tol = v)
    }

    pub fn with_product_tol(self, v: f64) -> Result<Self> {
        self.with(|c| c.product_tol = v)
    }

    pub fn with_max_terms(self, v: usize) -> Result<Self> {
        self.with(|c| c.max_terms = v)
    }

    pub fn with_max_product_factors(self, v: usize) -> Result<Self> {
        self.with(|c| c.max_product_factors = v)
    }

    pub fn with_pole_guard(self, v: f64) -> Result<Self> {
        self.with(|c| c.pole_guard = v)
    }

    pub fn with_identity_tol(self, v: f64) -> Result<Self> {
        self.with(|c| c.identity_tol = v)
    }

    #[inline]
    pub fn q(&self) -> Complex64 {
        self.q
    }

    #[inline]
    pub fn series_tol(&self) -> f64 {
        self.series_tol
    }

    #[inline]
    pub fn product_tol(&self) -> f64 {
        self.product_tol
    }

    #[inline]
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    #[inline]
    pub fn max_product_factors(&self) -> usize {
        self.max_product_factors
    }

    #[inline]
    pub fn pole_guard(&self) -> f64 {
        self.pole_guard
    }

    #[inline]
    pub fn identity_tol(&self) -> f64 {
        self.identity_tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unit_modulus() {
        assert!(QContext::real(1.0).is_err());
        assert!(QContext::new(Complex64::new(0.6, 0.8)).is_err());
        assert!(QContext::real(f64::NAN).is_err());
        assert!(QContext::real(-0.99).is_ok());
    }

    #[test]
    fn setters_revalidate() {
        let ctx = QContext::real(0.5).unwrap();
        assert!(ctx.clone().with_series_tol(0.0).is_err());
        assert!(ctx.clone().with_max_terms(0).is_err());
        assert!(ctx.clone().with_q(Complex64::new(2.0, 0.0)).is_err());
        assert_eq!(ctx.with_pole_guard(1e-3).unwrap().pole_guard(), 1e-3);
    }
}
