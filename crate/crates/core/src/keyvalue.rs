//! Plain-text `key = value` files with `#` comments, and the lattice field
//! spec read from them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldChannel, LatticeSpec};

/// Parses `key = value` lines. Blank lines and text after `#` are ignored;
/// duplicate keys are an error.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected key=value, got '{line}'"),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "empty key or value".into(),
            });
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("duplicate key '{k}'"),
            });
        }
    }
    Ok(out)
}

/// Typed access to a parsed map that tracks which keys were consumed.
pub struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Self { map }
    }

    fn take_raw(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take_raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("key '{key}': cannot parse '{v}'"),
            }),
        }
    }

    pub fn require<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?.ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing required key '{key}'"),
        })
    }

    /// Fails if any key was not consumed.
    pub fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::Parse {
                line: 0,
                msg: format!("unknown key '{k}'"),
            }),
        }
    }
}

/// Free scalar field on a periodic lattice with smearing/noise channel, plus
/// the optional quantum noise and cutoff keys.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub lattice: LatticeSpec,
    pub beta: f64,
    pub mass: f64,
    pub h: f64,
    pub sigma: f64,
    pub y_phi: Option<f64>,
    pub y_pi: Option<f64>,
    pub eps_cut: Option<f64>,
}

impl FieldSpec {
    pub fn from_fields(f: &mut Fields) -> Result<Self> {
        let lattice = LatticeSpec::new(f.require("d")?, f.require("n_per_side")?, f.require("spacing")?)?;
        let spec = Self {
            lattice,
            beta: f.require("beta")?,
            mass: f.require("mass")?,
            h: f.require("h")?,
            sigma: f.require("sigma")?,
            y_phi: f.take("y_phi")?,
            y_pi: f.take("y_pi")?,
            eps_cut: f.take("eps_cut")?,
        };
        if !(spec.beta > 0.0 && spec.mass >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta={} mass={}",
                spec.beta, spec.mass
            )));
        }
        FieldChannel::new(spec.sigma, spec.h)?;
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut f = Fields::new(parse(text)?);
        let spec = Self::from_fields(&mut f)?;
        f.finish()?;
        Ok(spec)
    }

    pub fn channel(&self) -> FieldChannel {
        FieldChannel::new(self.sigma, self.h).expect("validated on construction")
    }
}
