//! Velocity and energy vector analysis of loudspeaker gains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_between, Direction, LoudspeakerLayout, Vec3};
use crate::render::SystemRenderer;

/// Source-width estimate derived from the energy vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadFormula {
    /// `2·acos(‖rE‖)`.
    #[default]
    Arccos,
    /// `186.4·(1 − ‖rE‖) + 10.7`.
    Frank,
    /// Twice the energy-weighted RMS angle of the loudspeakers around the
    /// rE direction.
    EnergyVariance,
}

impl SpreadFormula {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpreadFormula::Arccos => "arccos",
            SpreadFormula::Frank => "frank",
            SpreadFormula::EnergyVariance => "energy-variance",
        }
    }
}

impl fmt::Display for SpreadFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpreadFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arccos" => Ok(SpreadFormula::Arccos),
            "frank" => Ok(SpreadFormula::Frank),
            "energy-variance" => Ok(SpreadFormula::EnergyVariance),
            other => Err(Error::config(format!("unknown spread formula `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorAnalysis {
    pub pressure: f64,
    pub energy: f64,
    /// `None` when the pressure sum vanishes.
    pub rv: Option<Vec3>,
    pub re: Vec3,
    pub rv_mag: Option<f64>,
    pub re_mag: f64,
    pub spread_deg: f64,
}

/// Gerzon vectors of real broadband gains `g`.
pub fn analyze_gains(g: &[f64], layout: &LoudspeakerLayout, spread: SpreadFormula) -> Result<VectorAnalysis> {
    let e: Vec<f64> = g.iter().map(|x| x * x).collect();
    analyze(g, &e, layout, spread)
}

/// Velocity vector from the pressure gains `g`, energy vector and spread
/// from the per-loudspeaker energies `e`.
pub fn analyze(g: &[f64], e: &[f64], layout: &LoudspeakerLayout, spread: SpreadFormula) -> Result<VectorAnalysis> {
    let u = layout.unit_vectors();
    for (what, len) in [("pressure gains", g.len()), ("energies", e.len())] {
        if len != u.len() {
            return Err(Error::Shape {
                context: what,
                expected: u.len(),
                got: len,
            });
        }
    }
    let energy: f64 = e.iter().sum();
    if energy <= 0.0 || !energy.is_finite() {
        return Err(Error::UndefinedVector("all loudspeaker gains are zero".into()));
    }
    let pressure: f64 = g.iter().sum();
    let weighted = |w: &[f64]| u.iter().zip(w).fold(Vec3::zeros(), |acc, (v, &x)| acc + v * x);
    let re = weighted(e) / energy;
    // cancellation below this is numerical noise
    let rv = (pressure.abs() > 1e-12 * g.iter().map(|x| x.abs()).sum::<f64>()).then(|| weighted(g) / pressure);
    let re_mag = re.norm().min(1.0);
    let spread_deg = match spread {
        SpreadFormula::Arccos => 2.0 * re_mag.acos().to_degrees(),
        SpreadFormula::Frank => 186.4 * (1.0 - re_mag) + 10.7,
        SpreadFormula::EnergyVariance => {
            if re_mag < 1e-12 {
                180.0
            } else {
                let var: f64 = u.iter().zip(e).map(|(v, &w)| w * angle_between(v, &re).powi(2)).sum::<f64>() / energy;
                (2.0 * var.sqrt()).min(359.999)
            }
        }
    };
    Ok(VectorAnalysis {
        pressure,
        energy,
        rv,
        re,
        rv_mag: rv.map(|v| v.norm()),
        re_mag,
        spread_deg,
    })
}

/// Vector analysis of a unit source at `d` through `renderer`.
///
/// SWF gains are frequency independent. For Ambisonics the velocity
/// vector uses the low-band decoder and the energy vector the summed
/// energy of both bands.
pub fn analyze_rendering(renderer: &SystemRenderer, d: &Direction, spread: SpreadFormula) -> Result<VectorAnalysis> {
    match renderer {
        SystemRenderer::Swf(swf) => analyze_gains(&swf.gains(d), swf.layout(), spread),
        SystemRenderer::Ambisonics(dec) => {
            let low = dec.low.gains_for(d);
            let high = dec.high.gains_for(d);
            let e: Vec<f64> = low.iter().zip(&high).map(|(a, b)| a * a + b * b).collect();
            analyze(&low, &e, &dec.layout, spread)
        }
    }
}
