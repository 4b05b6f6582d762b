//! Rendering systems: a technique applied to a loudspeaker layout.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ambisonics::{encode_plane_wave, AmbisonicDecoder, DEFAULT_CROSSOVER_HZ};
use crate::error::{Error, Result};
use crate::geometry::{Direction, LayoutName, LoudspeakerLayout};
use crate::signal::MultichannelSignal;
use crate::swf::{SwfOptions, SwfRenderer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    /// Direct HRIR convolution at the source direction.
    Reference,
    Ambisonics,
    Swf,
}

impl Technique {
    pub fn as_str(&self) -> &'static str {
        match self {
            Technique::Reference => "reference",
            Technique::Ambisonics => "ambisonics",
            Technique::Swf => "swf",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "reference" | "ref" => Ok(Technique::Reference),
            "ambisonics" | "hoa" => Ok(Technique::Ambisonics),
            "swf" => Ok(Technique::Swf),
            other => Err(Error::config(format!("unknown technique `{other}`"))),
        }
    }
}

/// A technique/layout pair from the condition grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct System {
    pub technique: Technique,
    pub layout: LayoutName,
}

impl System {
    pub fn new(technique: Technique, layout: LayoutName) -> Self {
        Self { technique, layout }
    }

    /// Ambisonics and SWF on every built-in layout.
    pub fn default_grid() -> Vec<System> {
        [Technique::Ambisonics, Technique::Swf]
            .into_iter()
            .flat_map(|t| LayoutName::ALL.into_iter().map(move |l| System::new(t, l)))
            .collect()
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.technique, self.layout)
    }
}

/// A loudspeaker renderer built for one [`System`].
#[derive(Debug)]
pub enum SystemRenderer {
    Ambisonics(AmbisonicDecoder),
    Swf(SwfRenderer),
}

impl SystemRenderer {
    pub fn new(system: System, swf: SwfOptions) -> Result<Self> {
        Self::with_crossover(system, swf, DEFAULT_CROSSOVER_HZ)
    }

    pub fn with_crossover(system: System, swf: SwfOptions, crossover_hz: f64) -> Result<Self> {
        match system.technique {
            Technique::Ambisonics => Ok(Self::Ambisonics(AmbisonicDecoder::for_layout(
                system.layout,
                crossover_hz,
            )?)),
            Technique::Swf => Ok(Self::Swf(SwfRenderer::for_layout(system.layout, swf)?)),
            Technique::Reference => Err(Error::config("the reference is not a loudspeaker renderer")),
        }
    }

    pub fn layout(&self) -> &LoudspeakerLayout {
        match self {
            Self::Ambisonics(dec) => &dec.layout,
            Self::Swf(swf) => swf.layout(),
        }
    }

    /// Loudspeaker feeds for a mono source at `d`.
    pub fn render(&self, d: &Direction, s: &[f64], sample_rate: u32) -> Result<MultichannelSignal> {
        match self {
            Self::Ambisonics(dec) => dec.decode(&encode_plane_wave(dec.order(), d, s, sample_rate)?),
            Self::Swf(swf) => {
                if s.is_empty() {
                    return Err(Error::config("cannot render an empty signal"));
                }
                Ok(swf.render(d, s, sample_rate))
            }
        }
    }
}
