use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        };
        f.write_str(s)
    }
}

impl FromStr for PauliAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(PauliAxis::X),
            "y" | "Y" => Ok(PauliAxis::Y),
            "z" | "Z" => Ok(PauliAxis::Z),
            other => Err(Error::InvalidArgument(format!("unknown Pauli axis {other:?}"))),
        }
    }
}

/// A real multiple of a tensor product of Pauli operators; sites missing from
/// `factors` carry the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub coefficient: f64,
    pub factors: BTreeMap<usize, PauliAxis>,
}

impl PauliString {
    pub fn new(coefficient: f64, factors: impl IntoIterator<Item = (usize, PauliAxis)>) -> Self {
        Self { coefficient, factors: factors.into_iter().collect() }
    }

    pub fn single(coefficient: f64, site: usize, axis: PauliAxis) -> Self {
        Self::new(coefficient, [(site, axis)])
    }

    pub fn identity(coefficient: f64) -> Self {
        Self::new(coefficient, [])
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.factors.keys().find(|&&s| s == 0 || s > n) {
            Some(&site) => Err(Error::SiteOutOfRange { site, n }),
            None => Ok(()),
        }
    }

    /// Parses a comma-separated list such as `"z@1,-x@2,x@3"` or
    /// `"0.5*z@1 z@2"` (space-joined factors form one product term).
    pub fn parse_list(s: &str) -> Result<Vec<PauliString>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse Pauli term {s:?}"));
        let s = s.trim();
        let (coefficient, body) = if let Some((coef, rest)) = s.split_once('*') {
            (coef.trim().parse::<f64>().map_err(|_| bad())?, rest.trim())
        } else if let Some(rest) = s.strip_prefix('-') {
            (-1.0, rest.trim())
        } else if let Some(rest) = s.strip_prefix('+') {
            (1.0, rest.trim())
        } else {
            (1.0, s)
        };
        let mut factors = BTreeMap::new();
        for f in body.split_whitespace() {
            let (axis, site) = f.split_once('@').ok_or_else(bad)?;
            let site: usize = site.parse().map_err(|_| bad())?;
            if factors.insert(site, axis.parse()?).is_some() {
                return Err(bad());
            }
        }
        if factors.is_empty() {
            return Err(bad());
        }
        Ok(Self { coefficient, factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mirror_initial_terms() {
        let terms = PauliString::parse_list("z@1,-x@2,x@3").unwrap();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[1], PauliString::single(-1.0, 2, PauliAxis::X));
        let zz: PauliString = "0.5*z@1 z@2".parse().unwrap();
        assert_eq!(zz.factors.len(), 2);
        assert_eq!(zz.coefficient, 0.5);
        assert!("q@1".parse::<PauliString>().is_err());
        assert!("z@1 x@1".parse::<PauliString>().is_err());
    }

    #[test]
    fn site_range_is_checked() {
        assert!(PauliString::single(1.0, 4, PauliAxis::Z).check(3).is_err());
        assert!(PauliString::identity(1.0).check(1).is_ok());
    }
}
