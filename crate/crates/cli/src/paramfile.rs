//! TOML parameter files.
//!
//! ```toml
//! q = 0.3
//! a = 0.5             # bare real
//! b = [0.4, -0.1]     # [re, im]
//! n = 2               # integer
//! ```

use num_complex::Complex64;
use qverify_core::identities::ParamMap;

#[derive(Debug, Clone, PartialEq)]
pub struct ParamFile {
    pub q: Option<Complex64>,
    pub params: ParamMap,
}

fn complex(key: &str, v: &toml::Value) -> Result<Complex64, String> {
    match v {
        toml::Value::Float(x) => Ok(Complex64::new(*x, 0.0)),
        toml::Value::Integer(i) => Ok(Complex64::new(*i as f64, 0.0)),
        toml::Value::Array(a) if a.len() == 2 => {
            let part = |x: &toml::Value| match x {
                toml::Value::Float(f) => Ok(*f),
                toml::Value::Integer(i) => Ok(*i as f64),
                _ => Err(format!("`{key}`: complex parts must be numbers")),
            };
            Ok(Complex64::new(part(&a[0])?, part(&a[1])?))
        }
        _ => Err(format!("`{key}`: expected a number or a [re, im] pair")),
    }
}

pub fn parse(text: &str) -> Result<ParamFile, String> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
    let mut out = ParamFile { q: None, params: ParamMap::new() };
    for (key, v) in &table {
        if key == "q" {
            out.q = Some(complex(key, v)?);
            continue;
        }
        match v {
            toml::Value::Integer(i) => out.params.set_int(key.clone(), *i),
            _ => out.params.set(key.clone(), complex(key, v)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qverify_core::identities::Param;

    #[test]
    fn parses_all_value_shapes() {
        let f = parse("q = 0.3\na = 0.5\nb = [0.4, -0.1]\nn = 2\nc = [1, 0]\n").unwrap();
        assert_eq!(f.q, Some(Complex64::new(0.3, 0.0)));
        assert_eq!(f.params.get("a"), Some(Param::Complex(Complex64::new(0.5, 0.0))));
        assert_eq!(f.params.get("b"), Some(Param::Complex(Complex64::new(0.4, -0.1))));
        assert_eq!(f.params.get("c"), Some(Param::Complex(Complex64::new(1.0, 0.0))));
        assert_eq!(f.params.get("n"), Some(Param::Int(2)));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse("a = \"x\"").is_err());
        assert!(parse("a = [1, 2, 3]").is_err());
        assert!(parse("a = ").is_err());
        assert!(parse("q = [0.1, \"i\"]").is_err());
    }

    #[test]
    fn q_is_optional() {
        assert_eq!(parse("a = 0.1").unwrap().q, None);
    }
}
