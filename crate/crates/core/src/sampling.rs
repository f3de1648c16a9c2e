//! Noisy parity sampling under the Poisson models.
//!
//! Per-edge counts `N_e ~ Poisson(lambda * w_e)`, independent across edges,
//! are generated through the equivalent two-step form: draw the total
//! `N ~ Poisson(m)` with `m = lambda * sum_e w_e`, then attach each sample to
//! an edge chosen with probability `w_e / sum_e w_e`. This is exact (Poisson
//! splitting) and costs `O(m log #classes)` instead of `O(|E|)`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Poisson;

use crate::error::{Error, Result};
use crate::hypergraph::HyperTopology;
use crate::labeling::Labeling;
use crate::topology::MeasurementTopology;

/// One observation of `X_u xor X_v`, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParitySample {
    pub u: u32,
    pub v: u32,
    pub value: u8,
}

impl ParitySample {
    pub fn new(a: usize, b: usize, value: u8) -> Self {
        ParitySample {
            u: a.min(b) as u32,
            v: a.max(b) as u32,
            value: value & 1,
        }
    }
}

/// Pairwise samples grouped by edge (sorted by `(u, v)`, draw order kept
/// within an edge).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    n: usize,
    samples: Vec<ParitySample>,
    pub theta: f64,
    pub lambda: f64,
    pub m_target: f64,
}

impl SampleSet {
    pub fn new(n: usize, mut samples: Vec<ParitySample>, theta: f64) -> Self {
        for s in &mut samples {
            if s.u > s.v {
                std::mem::swap(&mut s.u, &mut s.v);
            }
        }
        samples.sort_by_key(|s| (s.u, s.v));
        let m = samples.len() as f64;
        SampleSet {
            n,
            samples,
            theta,
            lambda: f64::NAN,
            m_target: m,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[ParitySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Multi-linked samples: each covers a set of vertices and reports one noisy
/// label per vertex, all sharing a random global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperSampleSet {
    n: usize,
    offsets: Vec<usize>,
    vertices: Vec<u32>,
    values: Vec<u8>,
    pub p: f64,
    pub lambda: f64,
    pub m_target: f64,
}

impl HyperSampleSet {
    pub fn empty(n: usize, p: f64) -> Self {
        HyperSampleSet {
            n,
            offsets: vec![0],
            vertices: Vec::new(),
            values: Vec::new(),
            p,
            lambda: f64::NAN,
            m_target: 0.0,
        }
    }

    /// Append a sample; `values[k]` is the reading at `vertices[k]`.
    pub fn push(&mut self, vertices: &[u32], values: &[u8]) {
        assert_eq!(vertices.len(), values.len(), "one value per vertex");
        self.vertices.extend_from_slice(vertices);
        self.values.extend(values.iter().map(|v| v & 1));
        self.offsets.push(self.vertices.len());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> (&[u32], &[u8]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.vertices[a..b], &self.values[a..b])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &[u8])> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Total number of vertex readings, `sum_e |e|`.
    pub fn total_readings(&self) -> usize {
        self.vertices.len()
    }

    /// Break each sample into its `C(L, 2)` pairwise parities `Y_a xor Y_b`.
    pub fn derived_pairs(&self) -> SampleSet {
        let mut pairs = Vec::new();
        for (vs, ys) in self.iter() {
            for a in 0..vs.len() {
                for b in (a + 1)..vs.len() {
                    pairs.push(ParitySample::new(
                        vs[a] as usize,
                        vs[b] as usize,
                        ys[a] ^ ys[b],
                    ));
                }
            }
        }
        SampleSet::new(self.n, pairs, 2.0 * self.p * (1.0 - self.p))
    }
}

/// Sampling-rate weight as a function of edge distance.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightProfile {
    Uniform,
    /// `Poisson(mean)` pmf evaluated at the (rounded) distance.
    PoissonPmf { mean: f64 },
    /// `table[d - 1]` for distance `d` (rounded up for grid distances).
    Table(Vec<f64>),
}

impl WeightProfile {
    pub fn weight(&self, distance: f64) -> f64 {
        match self {
            WeightProfile::Uniform => 1.0,
            WeightProfile::PoissonPmf { mean } => {
                let k = distance.round().max(0.0) as u64;
                let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
                (k as f64 * mean.ln() - mean - ln_fact).exp()
            }
            WeightProfile::Table(t) => {
                let idx = distance.ceil() as usize;
                if idx == 0 || idx > t.len() {
                    0.0
                } else {
                    t[idx - 1]
                }
            }
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(())
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<usize> {
    let dist = Poisson::new(mean).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(dist.sample(rng) as usize)
}

/// Uniform-rate (or topology-weighted) parity samples with flip rate `theta`.
///
/// `lambda = m_target / sum_e w_e`. The random stream consumed does not
/// depend on `truth`, so `truth` and its complement give identical parities
/// under the same seed.
pub fn draw_samples<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    truth: &Labeling,
    theta: f64,
    m_target: f64,
    rng: &mut R,
) -> Result<SampleSet> {
    check_theta(theta)?;
    if !(m_target > 0.0) {
        return Err(Error::NonpositiveSampleSize(m_target));
    }
    if truth.len() != topology.n() {
        return Err(Error::LengthMismatch(truth.len(), topology.n()));
    }
    if topology.edge_count() == 0 {
        return Err(Error::EmptyTopology);
    }
    let class_mass: Vec<f64> = topology
        .classes()
        .iter()
        .map(|c| c.count as f64 * c.weight)
        .collect();
    let pick_class =
        WeightedIndex::new(&class_mass).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let total = poisson_count(m_target, rng)?;
    let bits = truth.bits();
    let mut samples = Vec::with_capacity(total);
    for _ in 0..total {
        let c = pick_class.sample(rng);
        let k = rng.random_range(0..topology.classes()[c].count);
        let (a, b) = topology.class_edge(c, k);
        let noise = (rng.random::<f64>() < theta) as u8;
        samples.push(ParitySample::new(a, b, bits[a] ^ bits[b] ^ noise));
    }
    let mut set = SampleSet::new(topology.n(), samples, theta);
    set.lambda = m_target / topology.total_weight();
    set.m_target = m_target;
    Ok(set)
}

/// As [`draw_samples`], with per-edge rates multiplied by `profile(distance)`.
pub fn draw_weighted_samples<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    truth: &Labeling,
    theta: f64,
    m_target: f64,
    profile: &WeightProfile,
    rng: &mut R,
) -> Result<SampleSet> {
    let weighted = topology.reweighted(|d| profile.weight(d))?;
    draw_samples(&weighted, truth, theta, m_target, rng)
}

/// Multi-linked samples: `Z_i = X_i` flipped w.p. `p`, then all readings of a
/// sample are flipped together w.p. 1/2.
pub fn draw_hyper_samples<R: Rng + ?Sized>(
    hyper: &HyperTopology,
    truth: &Labeling,
    p: f64,
    m_target: f64,
    rng: &mut R,
) -> Result<HyperSampleSet> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    if !(m_target > 0.0) {
        return Err(Error::NonpositiveSampleSize(m_target));
    }
    if truth.len() != hyper.n() {
        return Err(Error::LengthMismatch(truth.len(), hyper.n()));
    }
    let total = poisson_count(m_target, rng)?;
    let bits = truth.bits();
    let mut set = HyperSampleSet::empty(hyper.n(), p);
    let mut values = Vec::new();
    for _ in 0..total {
        let edge = hyper.sample_edge(rng);
        values.clear();
        for &v in &edge {
            let noise = (rng.random::<f64>() < p) as u8;
            values.push(bits[v as usize] ^ noise);
        }
        let phase = rng.random::<bool>() as u8;
        values.iter_mut().for_each(|y| *y ^= phase);
        if edge.len() >= 2 {
            set.push(&edge, &values);
        }
    }
    set.lambda = m_target / hyper.universe_size();
    set.m_target = m_target;
    Ok(set)
}
