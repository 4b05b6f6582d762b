//! Encoding, multilevel transform and loudspeaker rendering over an
//! octahedron subdivision hierarchy.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::lifting::{LevelTopology, LiftingFilter, LiftingKind};
use crate::error::{Error, Result};
use crate::geometry::{
    angle_between, build_octahedron_hierarchy, load_layout, Direction, LayoutName,
    LoudspeakerLayout, TriMeshHierarchy,
};
use crate::signal::{axpy, MultichannelSignal};

/// Default depth of the encoding mesh (66 vertices).
pub const DEFAULT_FINEST_LEVEL: usize = 2;

/// Scaling coefficients on the level-0 vertices plus, for every finer
/// level, detail coefficients on the vertices introduced at that level.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    pub sample_rate: u32,
    pub scaling: Vec<Vec<f64>>,
    /// `details[k - 1]` belongs to level `k`.
    pub details: Vec<Vec<Vec<f64>>>,
}

impl WaveletCoeffs {
    pub fn finest_level(&self) -> usize {
        self.details.len()
    }

    pub fn coefficient_count(&self) -> usize {
        self.scaling.len() + self.details.iter().map(Vec::len).sum::<usize>()
    }

    /// Writes `level,vertex,value` rows for one sample index. Vertex indices
    /// use the nested numbering of the finest mesh.
    pub fn write_csv<W: Write>(&self, w: W, sample: usize) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["level", "vertex", "value"])?;
        let value = |row: &Vec<f64>| row.get(sample).copied().unwrap_or(0.0);
        for (i, row) in self.scaling.iter().enumerate() {
            out.write_record([0.to_string(), i.to_string(), value(row).to_string()])?;
        }
        let mut offset = self.scaling.len();
        for (k, level) in self.details.iter().enumerate() {
            for (j, row) in level.iter().enumerate() {
                out.write_record([
                    (k + 1).to_string(),
                    (offset + j).to_string(),
                    value(row).to_string(),
                ])?;
            }
            offset += level.len();
        }
        out.flush()?;
        Ok(())
    }
}

fn topologies(h: &TriMeshHierarchy) -> Vec<LevelTopology> {
    h.levels().iter().skip(1).map(LevelTopology::new).collect()
}

/// Barycentric panning of `s` onto the finest mesh of `h`.
pub fn swf_encode(h: &TriMeshHierarchy, d: &Direction, s: &[f64], sample_rate: u32) -> MultichannelSignal {
    MultichannelSignal::from_gains(sample_rate, &encode_gains(h, d), s)
}

fn encode_gains(h: &TriMeshHierarchy, d: &Direction) -> Vec<f64> {
    let mesh = h.finest();
    let loc = mesh.locate(d);
    let mut g = vec![0.0; mesh.vertex_count()];
    for (&v, &w) in loc.vertices.iter().zip(&loc.weights) {
        g[v] += w;
    }
    g
}

/// Forward transform of finest-level vertex signals.
pub fn swf_analysis(
    h: &TriMeshHierarchy,
    filter: &dyn LiftingFilter,
    x: &MultichannelSignal,
) -> Result<WaveletCoeffs> {
    let expected = h.finest().vertex_count();
    if x.channels() != expected {
        return Err(Error::Shape {
            context: "wavelet analysis input",
            expected,
            got: x.channels(),
        });
    }
    let sample_rate = x.sample_rate();
    let mut rows = x.clone().into_rows();
    let mut details = Vec::with_capacity(h.finest_level());
    for topo in topologies(h).iter().rev() {
        let (coarse, d) = filter.analyze(topo, rows);
        details.push(d);
        rows = coarse;
    }
    details.reverse();
    Ok(WaveletCoeffs {
        sample_rate,
        scaling: rows,
        details,
    })
}

/// Inverse transform up to `target_level`; details above it are ignored.
pub fn swf_synthesis(
    h: &TriMeshHierarchy,
    filter: &dyn LiftingFilter,
    c: &WaveletCoeffs,
    target_level: usize,
) -> Result<MultichannelSignal> {
    check_coeffs(h, c)?;
    check_level(target_level, c.finest_level())?;
    let mut rows = c.scaling.clone();
    for (topo, d) in topologies(h).iter().zip(&c.details).take(target_level) {
        rows = filter.synthesize(topo, rows, d);
    }
    MultichannelSignal::new(c.sample_rate, rows)
}

/// Zeroes every detail band above `level`.
pub fn swf_truncate(c: &WaveletCoeffs, level: usize) -> Result<WaveletCoeffs> {
    check_level(level, c.finest_level())?;
    let mut out = c.clone();
    for band in out.details.iter_mut().skip(level) {
        band.iter_mut().flatten().for_each(|v| *v = 0.0);
    }
    Ok(out)
}

fn check_level(level: usize, finest: usize) -> Result<()> {
    if level > finest {
        return Err(Error::Bounds {
            what: "synthesis level",
            value: level as i64,
            min: 0,
            max: finest as i64,
        });
    }
    Ok(())
}

fn check_coeffs(h: &TriMeshHierarchy, c: &WaveletCoeffs) -> Result<()> {
    let shape = |expected: usize, got: usize| Error::Shape {
        context: "wavelet coefficients",
        expected,
        got,
    };
    if c.details.len() != h.finest_level() {
        return Err(shape(h.finest_level(), c.details.len()));
    }
    if c.scaling.len() != h.level(0).vertex_count() {
        return Err(shape(h.level(0).vertex_count(), c.scaling.len()));
    }
    for (k, band) in c.details.iter().enumerate() {
        let n = h.level(k + 1).new_vertex_count();
        if band.len() != n {
            return Err(shape(n, band.len()));
        }
    }
    Ok(())
}

/// How mesh-vertex signals are mapped onto loudspeakers that are not mesh
/// vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RemapMode {
    /// Amplitude panning over the layout triangulation.
    #[default]
    Barycentric,
    /// Each vertex goes to its closest loudspeaker.
    Nearest,
}

impl RemapMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RemapMode::Barycentric => "barycentric",
            RemapMode::Nearest => "nearest",
        }
    }
}

impl fmt::Display for RemapMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RemapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "barycentric" => Ok(RemapMode::Barycentric),
            "nearest" => Ok(RemapMode::Nearest),
            other => Err(Error::config(format!("unknown remap mode `{other}`"))),
        }
    }
}

/// Options shared by every SWF renderer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwfOptions {
    pub finest_level: usize,
    pub lifting: LiftingKind,
    pub remap: RemapMode,
}

impl Default for SwfOptions {
    fn default() -> Self {
        Self {
            finest_level: DEFAULT_FINEST_LEVEL,
            lifting: LiftingKind::default(),
            remap: RemapMode::default(),
        }
    }
}

/// Synthesis level for a layout: level 0 when the loudspeakers are the
/// octahedron vertices, otherwise the deepest level with at most
/// `len + 16` vertices.
pub fn default_target_level(h: &TriMeshHierarchy, layout: &LoudspeakerLayout) -> usize {
    let base = &h.level(0).mesh.vertices;
    let on_octahedron = layout.len() == base.len()
        && base
            .iter()
            .all(|v| angle_between(v, &layout.unit_vectors()[layout.nearest(v)]) < 1e-6);
    if on_octahedron {
        return 0;
    }
    h.levels()
        .iter()
        .rposition(|l| l.vertex_count() <= layout.len() + 16)
        .unwrap_or(0)
}

/// Loudspeaker × vertex gain matrix for the given mode.
pub fn remap_matrix(vertices: &[crate::geometry::Vec3], layout: &LoudspeakerLayout, mode: RemapMode) -> DMatrix<f64> {
    let mut r = DMatrix::zeros(layout.len(), vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        match mode {
            RemapMode::Nearest => r[(layout.nearest(v), i)] = 1.0,
            RemapMode::Barycentric => {
                let loc = layout.mesh().locate_vector(v);
                let mut w = loc.weights;
                w.iter_mut().for_each(|x| {
                    if *x < 1e-9 {
                        *x = 0.0
                    }
                });
                let sum: f64 = w.iter().sum();
                for (&s, &x) in loc.vertices.iter().zip(&w) {
                    r[(s, i)] += x / sum;
                }
            }
        }
    }
    r
}

/// A ready-to-use SWF panner for one loudspeaker layout.
#[derive(Debug)]
pub struct SwfRenderer {
    hierarchy: TriMeshHierarchy,
    filter: Box<dyn LiftingFilter>,
    layout: LoudspeakerLayout,
    options: SwfOptions,
    target_level: usize,
    remap: DMatrix<f64>,
}

impl SwfRenderer {
    pub fn new(layout: LoudspeakerLayout, options: SwfOptions) -> Result<Self> {
        let hierarchy = build_octahedron_hierarchy(options.finest_level)?;
        let target_level = default_target_level(&hierarchy, &layout);
        let remap = remap_matrix(&hierarchy.level(target_level).mesh.vertices, &layout, options.remap);
        Ok(Self {
            hierarchy,
            filter: options.lifting.filter(),
            layout,
            options,
            target_level,
            remap,
        })
    }

    pub fn for_layout(name: LayoutName, options: SwfOptions) -> Result<Self> {
        Self::new(load_layout(name)?, options)
    }

    pub fn hierarchy(&self) -> &TriMeshHierarchy {
        &self.hierarchy
    }

    pub fn filter(&self) -> &dyn LiftingFilter {
        self.filter.as_ref()
    }

    pub fn layout(&self) -> &LoudspeakerLayout {
        &self.layout
    }

    pub fn options(&self) -> &SwfOptions {
        &self.options
    }

    pub fn target_level(&self) -> usize {
        self.target_level
    }

    /// Signals on the target-level mesh vertices for a unit source.
    pub fn vertex_gains(&self, d: &Direction) -> Vec<f64> {
        let x = MultichannelSignal::new(0, encode_gains(&self.hierarchy, d).into_iter().map(|g| vec![g]).collect())
            .expect("single-sample rows");
        let c = swf_analysis(&self.hierarchy, self.filter(), &x).expect("encoder matches hierarchy");
        swf_synthesis(&self.hierarchy, self.filter(), &c, self.target_level)
            .expect("target level within hierarchy")
            .into_rows()
            .into_iter()
            .map(|r| r[0])
            .collect()
    }

    /// Frequency-independent loudspeaker gains for a unit source.
    pub fn gains(&self, d: &Direction) -> Vec<f64> {
        let v = self.vertex_gains(d);
        let mut g: Vec<f64> = (&self.remap * nalgebra::DVector::from_vec(v)).iter().copied().collect();
        // round-off from the lifting steps, not a real contribution
        let floor = 1e-12 * g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for x in g.iter_mut().filter(|x| x.abs() <= floor) {
            *x = 0.0;
        }
        g
    }

    /// Loudspeaker feeds for a mono source. The chain is linear and
    /// time-invariant, so feeds are the gains applied to `s`.
    pub fn render(&self, d: &Direction, s: &[f64], sample_rate: u32) -> MultichannelSignal {
        MultichannelSignal::from_gains(sample_rate, &self.gains(d), s)
    }
}

/// Full signal-domain pipeline: encode, analyse, synthesise at the layout
/// level and remap. Equivalent to [`SwfRenderer::render`].
pub fn swf_render(
    h: &TriMeshHierarchy,
    filter: &dyn LiftingFilter,
    d: &Direction,
    s: &[f64],
    sample_rate: u32,
    layout: &LoudspeakerLayout,
    mode: RemapMode,
) -> Result<MultichannelSignal> {
    if s.is_empty() {
        return Err(Error::config("cannot render an empty signal"));
    }
    let target = default_target_level(h, layout);
    let x = swf_encode(h, d, s, sample_rate);
    let c = swf_analysis(h, filter, &x)?;
    let y = swf_synthesis(h, filter, &c, target)?;
    let r = remap_matrix(&h.level(target).mesh.vertices, layout, mode);
    let mut feeds = MultichannelSignal::silent(sample_rate, layout.len(), s.len());
    for (i, row) in y.rows().iter().enumerate() {
        for spk in 0..layout.len() {
            axpy(feeds.row_mut(spk), r[(spk, i)], row);
        }
    }
    Ok(feeds)
}
