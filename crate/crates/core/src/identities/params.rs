use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::QError;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Complex(Complex64),
    Int(i64),
}

/// Named parameter values. Pair members are named `x_1, x_2, …`; see
/// [`indexed`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamMap {
    entries: BTreeMap<String, Param>,
}

/// `prefix_i`, the name of the `i`-th member (1-based) of an indexed family.
pub fn indexed(prefix: &str, i: usize) -> String {
    format!("{prefix}_{i}")
}

impl ParamMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, v: Complex64) {
        self.entries.insert(name.into(), Param::Complex(v));
    }

    pub fn set_int(&mut self, name: impl Into<String>, v: i64) {
        self.entries.insert(name.into(), Param::Int(v));
    }

    pub fn with(mut self, name: impl Into<String>, v: Complex64) -> Self {
        self.set(name, v);
        self
    }

    pub fn with_real(self, name: impl Into<String>, v: f64) -> Self {
        self.with(name, Complex64::new(v, 0.0))
    }

    pub fn with_int(mut self, name: impl Into<String>, v: i64) -> Self {
        self.set_int(name, v);
        self
    }

    pub fn get(&self, name: &str) -> Option<Param> {
        self.entries.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn remove(&mut self, name: &str) -> Option<Param> {
        self.entries.remove(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Param)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A complex parameter. Integers are accepted and widened.
    pub fn c(&self, name: &str) -> Result<Complex64> {
        match self.entries.get(name) {
            Some(Param::Complex(z)) => Ok(*z),
            Some(Param::Int(i)) => Ok(Complex64::new(*i as f64, 0.0)),
            None => Err(QError::UnknownParam(name.to_string())),
        }
    }

    pub fn cs<const N: usize>(&self, names: [&str; N]) -> Result<[Complex64; N]> {
        let mut out = [Complex64::new(0.0, 0.0); N];
        for (o, n) in out.iter_mut().zip(names) {
            *o = self.c(n)?;
        }
        Ok(out)
    }

    pub fn int(&self, name: &str) -> Result<i64> {
        match self.entries.get(name) {
            Some(Param::Int(i)) => Ok(*i),
            Some(Param::Complex(_)) => Err(QError::InvalidSpec(format!("`{name}` must be an integer"))),
            None => Err(QError::UnknownParam(name.to_string())),
        }
    }

    /// A non-negative integer parameter.
    pub fn count(&self, name: &str) -> Result<usize> {
        let v = self.int(name)?;
        usize::try_from(v).map_err(|_| QError::InvalidSpec(format!("`{name}` = {v} must be non-negative")))
    }

    /// `prefix_1, …, prefix_n` as complex values.
    pub fn family(&self, prefix: &str, n: usize) -> Result<Vec<Complex64>> {
        (1..=n).map(|i| self.c(&indexed(prefix, i))).collect()
    }

    /// `prefix_1, …, prefix_n` as non-negative integers.
    pub fn counts(&self, prefix: &str, n: usize) -> Result<Vec<usize>> {
        (1..=n).map(|i| self.count(&indexed(prefix, i))).collect()
    }

    /// The same map with the values of `x` and `y` exchanged.
    pub fn swapped(&self, x: &str, y: &str) -> Result<ParamMap> {
        let vx = self.get(x).ok_or_else(|| QError::UnknownParam(x.to_string()))?;
        let vy = self.get(y).ok_or_else(|| QError::UnknownParam(y.to_string()))?;
        let mut out = self.clone();
        out.entries.insert(x.to_string(), vy);
        out.entries.insert(y.to_string(), vx);
        Ok(out)
    }
}
