use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A deterministic strategy `(h_A, h_B)`; synchronous strategies have `h_A = h_B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    #[serde(rename = "hA")]
    pub h_a: Vec<usize>,
    #[serde(rename = "hB")]
    pub h_b: Vec<usize>,
    #[serde(default)]
    pub synchronous: bool,
}

impl DeterministicStrategy {
    pub fn bipartite(h_a: Vec<usize>, h_b: Vec<usize>) -> Self {
        DeterministicStrategy {
            h_a,
            h_b,
            synchronous: false,
        }
    }

    pub fn synchronous(h: Vec<usize>) -> Self {
        DeterministicStrategy {
            h_a: h.clone(),
            h_b: h,
            synchronous: true,
        }
    }

    /// Checks output range and the synchronous flag.
    pub fn validate(&self, k: usize) -> Result<()> {
        if self.h_a.iter().chain(&self.h_b).any(|&a| a >= k) {
            return Err(Error::InvalidGame(format!("strategy output outside 0..{k}")));
        }
        if self.synchronous && self.h_a != self.h_b {
            return Err(Error::InvalidGame("synchronous strategy with hA ≠ hB".into()));
        }
        Ok(())
    }
}
