//! Values that carry a cancellation scale and a truncation bound through
//! arithmetic.
//!
//! `scale` is the sum of the magnitudes of everything that was added to
//! form the value; `scale / |value|` measures how much rounding error is
//! amplified by cancellation. `err` accumulates truncation estimates.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::series::SeriesResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracked {
    pub value: Complex64,
    pub scale: f64,
    pub err: f64,
}

impl Tracked {
    pub fn exact(value: Complex64) -> Self {
        Tracked { value, scale: value.norm(), err: 0.0 }
    }

    /// Cancellation amplification `scale / |value|`; 1 for an exact zero
    /// built from zeros.
    pub fn condition(&self) -> f64 {
        let v = self.value.norm();
        if v > 0.0 {
            (self.scale / v).max(1.0)
        } else if self.scale > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    }
}

impl From<Complex64> for Tracked {
    fn from(c: Complex64) -> Self {
        Tracked::exact(c)
    }
}

impl From<SeriesResult> for Tracked {
    fn from(r: SeriesResult) -> Self {
        Tracked { value: r.value, scale: r.abs_sum.max(r.value.norm()), err: r.abs_error_estimate }
    }
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, o: Tracked) -> Tracked {
        Tracked { value: self.value + o.value, scale: self.scale + o.scale, err: self.err + o.err }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, o: Tracked) -> Tracked {
        Tracked { value: self.value - o.value, scale: self.scale + o.scale, err: self.err + o.err }
    }
}

impl Neg for Tracked {
    type Output = Tracked;
    fn neg(self) -> Tracked {
        Tracked { value: -self.value, ..self }
    }
}

impl Mul for Tracked {
    type Output = Tracked;
    fn mul(self, o: Tracked) -> Tracked {
        Tracked {
            value: self.value * o.value,
            scale: self.scale * o.scale,
            err: self.value.norm() * o.err + o.value.norm() * self.err + self.err * o.err,
        }
    }
}

impl Mul<Complex64> for Tracked {
    type Output = Tracked;
    fn mul(self, c: Complex64) -> Tracked {
        let m = c.norm();
        Tracked { value: self.value * c, scale: self.scale * m, err: self.err * m }
    }
}

impl Div<Complex64> for Tracked {
    type Output = Tracked;
    fn div(self, c: Complex64) -> Tracked {
        let m = c.norm();
        Tracked { value: self.value / c, scale: self.scale / m, err: self.err / m }
    }
}
