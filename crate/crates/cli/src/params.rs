//! Typed scenario parameters: schemas, parsing and the merged run config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use qsplit_core::qcore::Basis;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    Bool,
    /// `re,im` on the command line, `[re, im]` or `"re,im"` in a config file.
    Complex,
    /// `z`, `x`, `y` or `angles:THETA,PHI`.
    Basis,
    Text,
    IntList,
    RealList,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Int => "integer",
            Kind::Real => "real",
            Kind::Bool => "bool",
            Kind::Complex => "complex re,im",
            Kind::Basis => "basis (z|x|y|angles:θ,φ)",
            Kind::Text => "string",
            Kind::IntList => "integer list",
            Kind::RealList => "real list",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Complex([f64; 2]),
    Text(String),
    IntList(Vec<i64>),
    RealList(Vec<f64>),
}

fn list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

pub fn parse_basis(spec: &str) -> Result<Basis, String> {
    match spec {
        "z" => Ok(Basis::z()),
        "x" => Ok(Basis::x()),
        "y" => Ok(Basis::y()),
        other => {
            let angles = other.strip_prefix("angles:").ok_or_else(|| format!("unknown basis {other:?}"))?;
            match list::<f64>(angles).as_deref() {
                Some([theta, phi]) => Ok(Basis::qubit_angles(*theta, *phi)),
                _ => Err(format!("expected angles:THETA,PHI, got {other:?}")),
            }
        }
    }
}

fn parse_text(kind: Kind, raw: &str) -> Result<Value, String> {
    let raw = raw.trim();
    let bad = || format!("expected {}, got {raw:?}", kind.name());
    Ok(match kind {
        Kind::Int => Value::Int(raw.parse().map_err(|_| bad())?),
        Kind::Real => Value::Real(raw.parse().map_err(|_| bad())?),
        Kind::Bool => Value::Bool(raw.parse().map_err(|_| bad())?),
        Kind::Complex => match list::<f64>(raw).as_deref() {
            Some([re]) => Value::Complex([*re, 0.0]),
            Some([re, im]) => Value::Complex([*re, *im]),
            _ => return Err(bad()),
        },
        Kind::Basis => {
            parse_basis(raw)?;
            Value::Text(raw.to_string())
        }
        Kind::Text => Value::Text(raw.to_string()),
        Kind::IntList => Value::IntList(list(raw).ok_or_else(bad)?),
        Kind::RealList => Value::RealList(list(raw).ok_or_else(bad)?),
    })
}

fn parse_toml(kind: Kind, v: &toml::Value) -> Result<Value, String> {
    use toml::Value as T;
    let bad = || format!("expected {}, got {v}", kind.name());
    let num = |x: &T| x.as_float().or_else(|| x.as_integer().map(|i| i as f64));
    match (kind, v) {
        (_, T::String(s)) => parse_text(kind, s),
        (Kind::Int, T::Integer(i)) => Ok(Value::Int(*i)),
        (Kind::Real, x) => num(x).map(Value::Real).ok_or_else(bad),
        (Kind::Bool, T::Boolean(b)) => Ok(Value::Bool(*b)),
        (Kind::Complex, T::Array(a)) => match a.iter().map(num).collect::<Option<Vec<f64>>>().as_deref() {
            Some([re, im]) => Ok(Value::Complex([*re, *im])),
            _ => Err(bad()),
        },
        (Kind::Complex, x) => num(x).map(|re| Value::Complex([re, 0.0])).ok_or_else(bad),
        (Kind::IntList, T::Array(a)) => a.iter().map(T::as_integer).collect::<Option<_>>().map(Value::IntList).ok_or_else(bad),
        (Kind::RealList, T::Array(a)) => a.iter().map(num).collect::<Option<_>>().map(Value::RealList).ok_or_else(bad),
        _ => Err(bad()),
    }
}

/// Fully resolved parameters of one run; every schema key is present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params(BTreeMap<String, Value>);

impl Params {
    fn get(&self, key: &str) -> &Value {
        self.0.get(key).unwrap_or_else(|| panic!("parameter {key} missing from schema"))
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(i) => *i,
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        usize::try_from(self.int(key)).map_err(|_| CliError::Config(format!("parameter {key} must be non-negative")))
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(x) => *x,
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn bool(&self, key: &str) -> bool {
        match self.get(key) {
            Value::Bool(b) => *b,
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn complex(&self, key: &str) -> C64 {
        match self.get(key) {
            Value::Complex([re, im]) => C64::new(*re, *im),
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Text(s) => s,
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn basis(&self, key: &str) -> Basis {
        parse_basis(self.text(key)).expect("validated on parse")
    }

    pub fn int_list(&self, key: &str) -> &[i64] {
        match self.get(key) {
            Value::IntList(v) => v,
            v => panic!("parameter {key} is {v:?}"),
        }
    }

    pub fn real_list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::RealList(v) => v,
            v => panic!("parameter {key} is {v:?}"),
        }
    }
}

/// Top-level keys of a config file.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Defaults, then config-file values, then `key=value` overrides.
pub fn resolve(schema: &[ParamSpec], scenario: &str, file: &toml::Table, overrides: &[String]) -> Result<Params, CliError> {
    let spec_for = |key: &str| {
        schema.iter().find(|s| s.key == key).ok_or_else(|| {
            let known: Vec<&str> = schema.iter().map(|s| s.key).collect();
            CliError::Config(format!("unknown parameter {key:?} for {scenario}; known: {}", known.join(", ")))
        })
    };
    let mut values = BTreeMap::new();
    for s in schema {
        let v = parse_text(s.kind, s.default).unwrap_or_else(|e| panic!("bad default for {}: {e}", s.key));
        values.insert(s.key.to_string(), v);
    }
    for (key, raw) in file {
        let s = spec_for(key)?;
        let v = parse_toml(s.kind, raw).map_err(|e| CliError::Config(format!("parameter {key}: {e}")))?;
        values.insert(key.clone(), v);
    }
    for o in overrides {
        let (key, raw) = o
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects key=value, got {o:?}")))?;
        let s = spec_for(key.trim())?;
        let v = parse_text(s.kind, raw).map_err(|e| CliError::Config(format!("parameter {}: {e}", s.key)))?;
        values.insert(s.key.to_string(), v);
    }
    Ok(Params(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[ParamSpec] = &[
        ParamSpec { key: "n", kind: Kind::Int, default: "3", help: "" },
        ParamSpec { key: "c", kind: Kind::Complex, default: "1,0", help: "" },
        ParamSpec { key: "b", kind: Kind::Basis, default: "z", help: "" },
        ParamSpec { key: "m", kind: Kind::RealList, default: "0.5,1", help: "" },
    ];

    #[test]
    fn precedence_and_types() {
        let file: toml::Table = toml::from_str("n = 5\nc = [0.6, 0.8]\nm = [2, 3.5]").unwrap();
        let p = resolve(SCHEMA, "t", &file, &["n=7".into(), "b=angles:1.0,0.5".into()]).unwrap();
        assert_eq!(p.int("n"), 7);
        assert_eq!(p.complex("c"), C64::new(0.6, 0.8));
        assert_eq!(p.real_list("m"), &[2.0, 3.5]);
        assert_eq!(p.basis("b").label(), "bloch(1,0.5)");
    }

    #[test]
    fn unknown_and_malformed_keys() {
        let empty = toml::Table::new();
        assert!(matches!(resolve(SCHEMA, "t", &empty, &["q=1".into()]), Err(CliError::Config(m)) if m.contains("\"q\"")));
        assert!(matches!(resolve(SCHEMA, "t", &empty, &["n=x".into()]), Err(CliError::Config(m)) if m.contains("parameter n")));
        assert!(matches!(resolve(SCHEMA, "t", &empty, &["b=w".into()]), Err(CliError::Config(_))));
        assert!(matches!(resolve(SCHEMA, "t", &empty, &["n".into()]), Err(CliError::Usage(_))));
    }
}
