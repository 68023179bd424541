use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three model energies: intercell hopping `j1`, intracell hopping `j2`
/// and the emitter-chain coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct CouplingParams {
    j1: f64,
    j2: f64,
    g: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    j1: f64,
    j2: f64,
    g: f64,
}

impl TryFrom<RawParams> for CouplingParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        CouplingParams::new(raw.j1, raw.j2, raw.g)
    }
}

impl From<CouplingParams> for RawParams {
    fn from(p: CouplingParams) -> Self {
        RawParams {
            j1: p.j1,
            j2: p.j2,
            g: p.g,
        }
    }
}

impl CouplingParams {
    pub fn new(j1: f64, j2: f64, g: f64) -> Result<Self> {
        if !(j1.is_finite() && j1 > 0.0) {
            return Err(Error::InvalidParams(format!("j1 must be > 0, got {j1}")));
        }
        if !(j2.is_finite() && j2 > 0.0) {
            return Err(Error::InvalidParams(format!("j2 must be > 0, got {j2}")));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParams(format!("g must be >= 0, got {g}")));
        }
        Ok(Self { j1, j2, g })
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn j2(&self) -> f64 {
        self.j2
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Same chain, different emitter coupling.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.j1, self.j2, g)
    }

    /// Outer band edge `J+ = j1 + j2`.
    pub fn j_plus(&self) -> f64 {
        self.j1 + self.j2
    }

    /// Signed `J- = j1 - j2`; the inner band edge sits at `|J-|`.
    pub fn j_minus(&self) -> f64 {
        self.j1 - self.j2
    }

    /// Renormalized intercell hopping seen by the bound pair.
    pub fn j1_tilde(&self) -> f64 {
        self.j1 - self.g * self.g / self.j1
    }

    /// Strong-coupling threshold `sqrt(j1 (j1 + j2))`.
    pub fn g_str(&self) -> f64 {
        (self.j1 * (self.j1 + self.j2)).sqrt()
    }

    /// Weak-coupling threshold `sqrt(j1 (j1 - j2))`, only for the topological chain.
    pub fn g_weak(&self) -> Option<f64> {
        (self.j1 > self.j2).then(|| (self.j1 * (self.j1 - self.j2)).sqrt())
    }

    /// Exceptional point `sqrt(j1^2 - j2^2)`, only for the topological chain.
    pub fn g_ep(&self) -> Option<f64> {
        (self.j1 > self.j2).then(|| (self.j1 * self.j1 - self.j2 * self.j2).sqrt())
    }

    /// Branch points of the self-energy on the positive real axis, `(|J-|, J+)`.
    pub fn band_edges(&self) -> (f64, f64) {
        (self.j_minus().abs(), self.j_plus())
    }
}
