//! Lifting filters for one level of the mesh hierarchy.
//!
//! A level is split into *even* vertices, inherited from the coarser mesh,
//! and *odd* vertices, each the midpoint of one coarse edge. Both filters
//! use the linear interpolating predict (mean of the two edge endpoints);
//! they differ in where the update sits and how it is weighted.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::MeshLevel;
use crate::signal::axpy;

/// Topology of one refinement step as seen by a lifting filter.
#[derive(Debug, Clone)]
pub struct LevelTopology {
    pub coarse_count: usize,
    pub parents: Vec<[usize; 2]>,
    /// Number of odd vertices incident to each even vertex.
    pub degree: Vec<usize>,
}

impl LevelTopology {
    pub fn new(level: &MeshLevel) -> Self {
        let mut degree = vec![0; level.coarse_count];
        for &[a, b] in &level.parents {
            degree[a] += 1;
            degree[b] += 1;
        }
        Self {
            coarse_count: level.coarse_count,
            parents: level.parents.clone(),
            degree,
        }
    }

    pub fn fine_count(&self) -> usize {
        self.coarse_count + self.parents.len()
    }

    fn predict(&self, coarse: &[Vec<f64>], j: usize) -> Vec<f64> {
        let [a, b] = self.parents[j];
        coarse[a]
            .iter()
            .zip(&coarse[b])
            .map(|(x, y)| 0.5 * (x + y))
            .collect()
    }
}

/// One invertible lifting step. Rows are per-vertex sample sequences.
pub trait LiftingFilter: fmt::Debug + Send + Sync {
    fn kind(&self) -> LiftingKind;

    /// Fine rows → (coarse rows, detail rows).
    fn analyze(&self, topo: &LevelTopology, fine: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>);

    /// Exact inverse of [`analyze`](Self::analyze).
    fn synthesize(&self, topo: &LevelTopology, coarse: Vec<Vec<f64>>, details: &[Vec<f64>]) -> Vec<Vec<f64>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftingKind {
    /// Update, normalise, then predict. Keeps vertex-aligned sources on one
    /// vertex at every coarser level.
    #[default]
    UpdateFirst,
    /// Predict, then a `1/(2·deg)` update of the even vertices.
    PredictUpdate,
}

impl LiftingKind {
    pub fn filter(self) -> Box<dyn LiftingFilter> {
        match self {
            LiftingKind::UpdateFirst => Box::new(UpdateFirst::default()),
            LiftingKind::PredictUpdate => Box::new(PredictUpdate),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LiftingKind::UpdateFirst => "update-first",
            LiftingKind::PredictUpdate => "predict-update",
        }
    }
}

impl fmt::Display for LiftingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LiftingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "update-first" => Ok(LiftingKind::UpdateFirst),
            "predict-update" => Ok(LiftingKind::PredictUpdate),
            other => Err(Error::config(format!("unknown lifting scheme `{other}`"))),
        }
    }
}

/// `even += w·Σ odd` over incident edges, rescaled by `1/(1 + w·deg)` so
/// constants pass through; the details are then the prediction residuals
/// of the odd vertices against the new coarse values.
#[derive(Debug, Clone, Copy)]
pub struct UpdateFirst {
    pub weight: f64,
}

impl Default for UpdateFirst {
    fn default() -> Self {
        Self { weight: 0.5 }
    }
}

impl LiftingFilter for UpdateFirst {
    fn kind(&self) -> LiftingKind {
        LiftingKind::UpdateFirst
    }

    fn analyze(&self, topo: &LevelTopology, mut fine: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let odd = fine.split_off(topo.coarse_count);
        let mut coarse = fine;
        for (j, &[a, b]) in topo.parents.iter().enumerate() {
            axpy(&mut coarse[a], self.weight, &odd[j]);
            axpy(&mut coarse[b], self.weight, &odd[j]);
        }
        for (row, &deg) in coarse.iter_mut().zip(&topo.degree) {
            let k = 1.0 / (1.0 + self.weight * deg as f64);
            row.iter_mut().for_each(|v| *v *= k);
        }
        let details = odd
            .into_iter()
            .enumerate()
            .map(|(j, mut row)| {
                axpy(&mut row, -1.0, &topo.predict(&coarse, j));
                row
            })
            .collect();
        (coarse, details)
    }

    fn synthesize(&self, topo: &LevelTopology, coarse: Vec<Vec<f64>>, details: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let odd: Vec<Vec<f64>> = details
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let mut row = topo.predict(&coarse, j);
                axpy(&mut row, 1.0, d);
                row
            })
            .collect();
        let mut even = coarse;
        for (row, &deg) in even.iter_mut().zip(&topo.degree) {
            let k = 1.0 + self.weight * deg as f64;
            row.iter_mut().for_each(|v| *v *= k);
        }
        for (j, &[a, b]) in topo.parents.iter().enumerate() {
            axpy(&mut even[a], -self.weight, &odd[j]);
            axpy(&mut even[b], -self.weight, &odd[j]);
        }
        even.extend(odd);
        even
    }
}

/// Linear predict followed by `even += Σ d / (2·deg)`.
#[derive(Debug, Clone, Copy)]
pub struct PredictUpdate;

impl LiftingFilter for PredictUpdate {
    fn kind(&self) -> LiftingKind {
        LiftingKind::PredictUpdate
    }

    fn analyze(&self, topo: &LevelTopology, mut fine: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let odd = fine.split_off(topo.coarse_count);
        let mut coarse = fine;
        let details: Vec<Vec<f64>> = odd
            .into_iter()
            .enumerate()
            .map(|(j, mut row)| {
                axpy(&mut row, -1.0, &topo.predict(&coarse, j));
                row
            })
            .collect();
        for (j, &[a, b]) in topo.parents.iter().enumerate() {
            axpy(&mut coarse[a], 0.5 / topo.degree[a] as f64, &details[j]);
            axpy(&mut coarse[b], 0.5 / topo.degree[b] as f64, &details[j]);
        }
        (coarse, details)
    }

    fn synthesize(&self, topo: &LevelTopology, mut coarse: Vec<Vec<f64>>, details: &[Vec<f64>]) -> Vec<Vec<f64>> {
        for (j, &[a, b]) in topo.parents.iter().enumerate() {
            axpy(&mut coarse[a], -0.5 / topo.degree[a] as f64, &details[j]);
            axpy(&mut coarse[b], -0.5 / topo.degree[b] as f64, &details[j]);
        }
        let odd: Vec<Vec<f64>> = details
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let mut row = topo.predict(&coarse, j);
                axpy(&mut row, 1.0, d);
                row
            })
            .collect();
        coarse.extend(odd);
        coarse
    }
}
