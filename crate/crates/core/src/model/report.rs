use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::pauli::PauliAxis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalLabel {
    Absorption,
    Emission,
    #[serde(rename = "none")]
    NoSignal,
}

impl SignalLabel {
    pub fn from_value(value: f64, threshold: f64) -> Self {
        if value > threshold {
            SignalLabel::Absorption
        } else if value < -threshold {
            SignalLabel::Emission
        } else {
            SignalLabel::NoSignal
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignalLabel::Absorption => "absorption",
            SignalLabel::Emission => "emission",
            SignalLabel::NoSignal => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteReadout {
    pub site: usize,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub readout_axis: PauliAxis,
    pub label: SignalLabel,
}

impl SiteReadout {
    pub fn component(&self, axis: PauliAxis) -> f64 {
        match axis {
            PauliAxis::X => self.sx,
            PauliAxis::Y => self.sy,
            PauliAxis::Z => self.sz,
        }
    }

    pub fn readout(&self) -> f64 {
        self.component(self.readout_axis)
    }
}

/// Per-site Pauli expectations. For deviation states the values are in units
/// of the polarization (a unit-coefficient term reads 1.0); `polarization`
/// records the scale, 1.0 for pure states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub polarization: f64,
    pub threshold: f64,
    pub sites: Vec<SiteReadout>,
}

impl SpectrumReport {
    pub fn site(&self, site: usize) -> &SiteReadout {
        &self.sites[site - 1]
    }

    pub fn labels(&self) -> Vec<SignalLabel> {
        self.sites.iter().map(|s| s.label).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.sites
            .iter()
            .flat_map(|s| [s.sx, s.sy, s.sz])
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub counts: BTreeMap<String, usize>,
    pub total_steps: usize,
    pub edge_selective_pulses: usize,
    pub interior_selective_pulses: usize,
    pub mirror_cycles: usize,
    pub storage_density: Ratio<u64>,
    pub compliant: bool,
}

impl CostReport {
    pub fn count(&self, kind: &str) -> usize {
        self.counts.get(kind).copied().unwrap_or(0)
    }
}
