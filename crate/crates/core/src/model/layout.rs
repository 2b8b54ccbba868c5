use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `B` blocks of `M` qubit sites, consecutive blocks separated by a single
/// buffer spin. Chain ends carry no buffer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub n: usize,
    /// `qubit_sites[i]` is the physical site of logical qubit `i + 1`.
    pub qubit_sites: Vec<usize>,
    pub buffer_sites: Vec<usize>,
}

impl BlockLayout {
    pub fn new(m: usize, b: usize) -> Result<Self> {
        if m == 0 || b == 0 {
            return Err(Error::InvalidArgument(format!("block layout needs M >= 1 and B >= 1 (got M={m}, B={b})")));
        }
        let n = b * m + b - 1;
        let mut qubit_sites = Vec::with_capacity(b * m);
        let mut buffer_sites = Vec::with_capacity(b - 1);
        for site in 1..=n {
            if site % (m + 1) == 0 {
                buffer_sites.push(site);
            } else {
                qubit_sites.push(site);
            }
        }
        Ok(Self { m, b, n, qubit_sites, buffer_sites })
    }

    pub fn capacity(&self) -> usize {
        self.qubit_sites.len()
    }

    pub fn site_of(&self, qubit: usize) -> usize {
        self.qubit_sites[qubit - 1]
    }

    pub fn is_buffer(&self, site: usize) -> bool {
        self.buffer_sites.contains(&site)
    }

    pub fn density(&self) -> Ratio<u64> {
        density(self)
    }

    /// Checks a deserialized layout against the block structure.
    pub fn validate(&self) -> Result<()> {
        let expect = Self::new(self.m, self.b)?;
        if *self != expect {
            return Err(Error::InvalidArgument(format!(
                "layout is not M={} B={} blocks separated by single buffers",
                self.m, self.b
            )));
        }
        Ok(())
    }
}

/// Storage density `B M / (B M + B - 1)`.
pub fn density(layout: &BlockLayout) -> Ratio<u64> {
    let q = (layout.b * layout.m) as u64;
    Ratio::new(q, q + layout.b as u64 - 1)
}
