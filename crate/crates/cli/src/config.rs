//! Parameter schemas and validated experiment configurations.

use std::collections::BTreeMap;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Real,
    Positive,
    NonNegative,
    Int { min: i64 },
    /// Comma-separated reals.
    RealList,
    Choice(&'static [&'static str]),
}

impl Kind {
    pub fn describe(&self) -> String {
        match self {
            Kind::Real => "real".into(),
            Kind::Positive => "real > 0".into(),
            Kind::NonNegative => "real >= 0".into(),
            Kind::Int { min } => format!("integer >= {min}"),
            Kind::RealList => "comma-separated reals".into(),
            Kind::Choice(opts) => format!("one of {}", opts.join("|")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub name: &'static str,
    pub kind: Kind,
    /// `None` marks a required key.
    pub default: Option<&'static str>,
    pub help: &'static str,
}

pub const fn param(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Param {
    Param {
        name,
        kind,
        default: Some(default),
        help,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    List(Vec<f64>),
    Choice(String),
}

fn parse_real(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::config(Some(key), format!("'{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::config(Some(key), format!("'{raw}' is not finite")));
    }
    Ok(v)
}

fn parse_value(p: &Param, raw: &str) -> Result<Value> {
    let key = Some(p.name);
    match p.kind {
        Kind::Real => Ok(Value::Real(parse_real(p.name, raw)?)),
        Kind::Positive | Kind::NonNegative => {
            let v = parse_real(p.name, raw)?;
            let ok = if p.kind == Kind::Positive { v > 0.0 } else { v >= 0.0 };
            if !ok {
                return Err(CliError::config(key, format!("{v} is not {}", p.kind.describe())));
            }
            Ok(Value::Real(v))
        }
        Kind::Int { min } => {
            let v: i64 = raw
                .trim()
                .parse()
                .map_err(|_| CliError::config(key, format!("'{raw}' is not an integer")))?;
            if v < min {
                return Err(CliError::config(key, format!("{v} is below {min}")));
            }
            Ok(Value::Int(v))
        }
        Kind::RealList => {
            let vals = raw
                .split(',')
                .map(|s| parse_real(p.name, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::List(vals))
        }
        Kind::Choice(opts) => {
            let v = raw.trim();
            if !opts.contains(&v) {
                return Err(CliError::config(key, format!("'{v}' is not {}", p.kind.describe())));
            }
            Ok(Value::Choice(v.to_string()))
        }
    }
}

/// A parameter map checked against an experiment's schema.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Effective parameters as text, defaults filled in.
    pub raw: BTreeMap<String, String>,
    values: BTreeMap<String, Value>,
    pub digits: usize,
}

pub const MAX_DIGITS: usize = 17;

impl ExperimentConfig {
    /// Rejects unknown keys and fills defaults; missing required keys are errors.
    pub fn validate(
        experiment: &str,
        schema: &[Param],
        given: &BTreeMap<String, String>,
        digits: usize,
    ) -> Result<Self> {
        if digits == 0 || digits > MAX_DIGITS {
            return Err(CliError::config(
                Some("digits"),
                format!("{digits} outside 1..={MAX_DIGITS}"),
            ));
        }
        if let Some(k) = given.keys().find(|k| !schema.iter().any(|p| p.name == k.as_str())) {
            return Err(CliError::config(
                Some(k),
                format!("unknown key for experiment '{experiment}'"),
            ));
        }
        let mut raw = BTreeMap::new();
        let mut values = BTreeMap::new();
        for p in schema {
            let text = match (given.get(p.name), p.default) {
                (Some(v), _) => v.clone(),
                (None, Some(d)) => d.to_string(),
                (None, None) => return Err(CliError::config(Some(p.name), "missing required key")),
            };
            values.insert(p.name.to_string(), parse_value(p, &text)?);
            raw.insert(p.name.to_string(), text);
        }
        Ok(Self {
            experiment: experiment.to_string(),
            raw,
            values,
            digits,
        })
    }

    fn get(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("experiment reads undeclared key '{key}'"))
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(v) => *v,
            other => panic!("key '{key}' is {other:?}, not a real"),
        }
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(v) => *v,
            other => panic!("key '{key}' is {other:?}, not an integer"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.int(key) as usize
    }

    pub fn list(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::List(v) => v,
            other => panic!("key '{key}' is {other:?}, not a list"),
        }
    }

    pub fn choice(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Choice(v) => v,
            other => panic!("key '{key}' is {other:?}, not a choice"),
        }
    }
}

/// Parses a `key = value` file and applies `--set key=value` overrides.
pub fn merge(file: Option<&str>, overrides: &[String]) -> Result<BTreeMap<String, String>> {
    let mut map = match file {
        Some(text) => infogeom::keyvalue::parse(text).map_err(|e| CliError::config(None, e.to_string()))?,
        None => BTreeMap::new(),
    };
    for s in overrides {
        let Some((k, v)) = s.split_once('=') else {
            return Err(CliError::config(None, format!("--set expects key=value, got '{s}'")));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::config(None, format!("--set expects key=value, got '{s}'")));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}
