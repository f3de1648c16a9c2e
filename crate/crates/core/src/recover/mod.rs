//! Spectral-Expanding and Spectral-Stitching, pairwise and multi-linked.
//!
//! Both algorithms produce a rough estimate (spectral on a core, then
//! progressive majority votes, or spectral on overlapping windows stitched
//! by overlap agreement) and polish it with synchronous local refinement.

mod brute;
mod multilink;

pub use brute::{brute_force_ml, BRUTE_FORCE_MAX_N};
pub use multilink::{
    local_ml_score, recover_multilink, spectral_expanding_multilink,
    spectral_stitching_multilink,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::incidence::PairIncidence;
use crate::labeling::Labeling;
use crate::sampling::SampleSet;
use crate::spectral::{
    build_from_incidence, default_max_iter, leading_eigvec_signs, MatrixMode, DEFAULT_TOL,
};
use crate::topology::MeasurementTopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Expanding,
    Stitching,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Expanding => "expanding",
            Algorithm::Stitching => "stitching",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "expanding" => Ok(Algorithm::Expanding),
            "stitching" => Ok(Algorithm::Stitching),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryConfig {
    pub algorithm: Algorithm,
    /// Refinement cap; `None` means `ceil(log2 n) + 2`.
    pub t_max: Option<usize>,
    /// Stitching window; `None` means `r` rounded down to even.
    pub window: Option<usize>,
    pub matrix_mode: MatrixMode,
    pub early_stop: bool,
    pub tol: f64,
    /// Power-iteration cap; `None` means `100 * ceil(ln dim)`.
    pub max_iter: Option<usize>,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        RecoveryConfig {
            algorithm: Algorithm::Expanding,
            t_max: None,
            window: None,
            matrix_mode: MatrixMode::FirstSample,
            early_stop: true,
            tol: DEFAULT_TOL,
            max_iter: None,
        }
    }
}

impl RecoveryConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        RecoveryConfig {
            algorithm,
            ..Default::default()
        }
    }

    pub fn t_max_for(&self, n: usize) -> usize {
        self.t_max
            .unwrap_or_else(|| (n.max(2) as f64).log2().ceil() as usize + 2)
    }

    pub fn window_for(&self, topology: &MeasurementTopology) -> Result<usize> {
        let n = topology.n();
        let w = self
            .window
            .unwrap_or_else(|| (topology.radius().min(n) & !1).max(2));
        if w < 2 || !w.is_multiple_of(2) || w > n {
            return Err(Error::InvalidWindow { w, n });
        }
        Ok(w)
    }
}

/// Non-fatal observations made during a run.
#[derive(Debug, Clone, PartialEq)]
pub enum StageFlag {
    /// Spectral matrix had no entries; window `None` is the core.
    SpectralDegenerate { window: Option<usize> },
    SpectralNotConverged { window: Option<usize>, iterations: usize },
    /// Vertex got no backward samples during progressive estimation.
    NoBackwardSamples(usize),
    /// Refinement hit `t_max` while still changing labels.
    RefinementNotConverged,
    /// Refinement revisited the iterate from two rounds earlier.
    Oscillation { round: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub labeling: Labeling,
    /// Refinement rounds executed.
    pub iterations_used: usize,
    pub stage_flags: Vec<StageFlag>,
    /// Labels changed by each refinement round.
    pub per_iteration_changes: Vec<usize>,
    /// Total power-iteration steps across spectral calls.
    pub spectral_iterations: usize,
}

/// 1 iff strictly more than half the bits are 1.
pub fn majority_vote(bits: &[u8]) -> u8 {
    let ones = bits.iter().filter(|&&b| b == 1).count();
    u8::from(2 * ones > bits.len())
}

fn check_theta(theta: f64) -> Result<()> {
    if theta >= 0.5 || theta.is_nan() {
        return Err(Error::ThetaAboveHalf(theta));
    }
    Ok(())
}

fn check_sizes(topology: &MeasurementTopology, n: usize) -> Result<()> {
    if topology.n() != n {
        return Err(Error::LengthMismatch(topology.n(), n));
    }
    Ok(())
}

/// Dispatches on `config.algorithm`.
pub fn recover<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    samples: &SampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    match config.algorithm {
        Algorithm::Expanding => spectral_expanding(topology, samples, config, rng),
        Algorithm::Stitching => spectral_stitching(topology, samples, config, rng),
    }
}

pub fn spectral_expanding<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    samples: &SampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    check_theta(samples.theta)?;
    check_sizes(topology, samples.n())?;
    let incidence = PairIncidence::new(samples);
    let mut flags = Vec::new();
    let (core_bits, spectral_iterations) = core_estimate(topology, &incidence, config, rng, &mut flags);
    let initial = progressive_estimate(topology, &incidence, &core_bits, &mut flags);
    Ok(finish(&incidence, initial, config, flags, spectral_iterations))
}

pub fn spectral_stitching<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    samples: &SampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    check_theta(samples.theta)?;
    check_sizes(topology, samples.n())?;
    let width = config.window_for(topology)?;
    let incidence = PairIncidence::new(samples);
    let mut flags = Vec::new();
    let (initial, spectral_iterations) =
        stitched_estimate(topology, &incidence, width, config, rng, &mut flags);
    Ok(finish(&incidence, initial, config, flags, spectral_iterations))
}

fn finish(
    incidence: &PairIncidence,
    initial: Labeling,
    config: &RecoveryConfig,
    mut flags: Vec<StageFlag>,
    spectral_iterations: usize,
) -> RecoveryResult {
    let t_max = config.t_max_for(incidence.n());
    let refined = refine(initial, t_max, config.early_stop, |current| {
        (0..current.len())
            .map(|v| majority_update(incidence, current, v))
            .collect()
    });
    flags.extend(refined.flags);
    RecoveryResult {
        labeling: refined.labeling,
        iterations_used: refined.changes.len(),
        stage_flags: flags,
        per_iteration_changes: refined.changes,
        spectral_iterations,
    }
}

/// Spectral estimate on the core; bits indexed like `topology.core_vertices()`.
pub(crate) fn core_estimate<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    incidence: &PairIncidence,
    config: &RecoveryConfig,
    rng: &mut R,
    flags: &mut Vec<StageFlag>,
) -> (Vec<u8>, usize) {
    let core: Vec<usize> = topology.core_vertices().iter().map(|&v| v as usize).collect();
    spectral_on(incidence, &core, config, rng, flags, None)
}

fn spectral_on<R: Rng + ?Sized>(
    incidence: &PairIncidence,
    subset: &[usize],
    config: &RecoveryConfig,
    rng: &mut R,
    flags: &mut Vec<StageFlag>,
    window: Option<usize>,
) -> (Vec<u8>, usize) {
    let matrix = build_from_incidence(incidence, subset, config.matrix_mode);
    let max_iter = config.max_iter.unwrap_or_else(|| default_max_iter(subset.len()));
    let est = leading_eigvec_signs(&matrix, rng, config.tol, max_iter);
    if est.degenerate {
        flags.push(StageFlag::SpectralDegenerate { window });
    } else if !est.converged {
        flags.push(StageFlag::SpectralNotConverged {
            window,
            iterations: est.iterations,
        });
    }
    (est.bits, est.iterations)
}

/// Stage 2: walk the recovery order after the core; each vertex takes the
/// majority of `Y_ij xor X_j` over samples to vertices earlier in the order.
/// Samples to later vertices are never read.
pub fn progressive_estimate(
    topology: &MeasurementTopology,
    incidence: &PairIncidence,
    core_bits: &[u8],
    flags: &mut Vec<StageFlag>,
) -> Labeling {
    let n = topology.n();
    let order = topology.order();
    let pos = topology.positions();
    let mut est = Labeling::zeros(n);
    for (k, &bit) in core_bits.iter().enumerate() {
        est.set(order[k] as usize, bit);
    }
    for k in core_bits.len()..n {
        let v = order[k] as usize;
        let (nbrs, vals) = incidence.of(v);
        let (mut ones, mut total) = (0usize, 0usize);
        for (&u, &y) in nbrs.iter().zip(vals) {
            if (pos[u as usize] as usize) < k {
                ones += usize::from(y ^ est.get(u as usize));
                total += 1;
            }
        }
        if total == 0 {
            flags.push(StageFlag::NoBackwardSamples(v));
        }
        est.set(v, u8::from(2 * ones > total));
    }
    est
}

/// Window `l` covers order positions `[l W/2, l W/2 + W)`, truncated at `n`.
pub fn stitching_windows(n: usize, width: usize) -> Result<Vec<std::ops::Range<usize>>> {
    if width < 2 || !width.is_multiple_of(2) || width > n {
        return Err(Error::InvalidWindow { w: width, n });
    }
    let stride = width / 2;
    let mut out = Vec::new();
    let mut start = 0;
    loop {
        let end = (start + width).min(n);
        out.push(start..end);
        if end == n {
            break;
        }
        start += stride;
    }
    Ok(out)
}

/// Aligns `next` to `prev` on their overlap: flip `next` when more than half
/// of the overlap disagrees. Returns whether a flip happened.
pub fn calibrate_phase(prev_overlap: &[u8], next: &mut [u8], overlap: usize) -> bool {
    let disagree = prev_overlap
        .iter()
        .zip(&next[..overlap])
        .filter(|(a, b)| a != b)
        .count();
    let flip = 2 * disagree > overlap;
    if flip {
        next.iter_mut().for_each(|b| *b ^= 1);
    }
    flip
}

pub(crate) fn stitched_estimate<R: Rng + ?Sized>(
    topology: &MeasurementTopology,
    incidence: &PairIncidence,
    width: usize,
    config: &RecoveryConfig,
    rng: &mut R,
    flags: &mut Vec<StageFlag>,
) -> (Labeling, usize) {
    let n = topology.n();
    let order = topology.order();
    let windows = stitching_windows(n, width).expect("window validated by caller");
    let mut by_position = vec![0u8; n];
    let mut iterations = 0;
    for (l, range) in windows.iter().enumerate() {
        let subset: Vec<usize> = range.clone().map(|k| order[k] as usize).collect();
        let (mut bits, iters) = spectral_on(incidence, &subset, config, rng, flags, Some(l));
        iterations += iters;
        if l > 0 {
            let overlap = windows[l - 1].end - range.start;
            calibrate_phase(&by_position[range.start..range.start + overlap], &mut bits, overlap);
        }
        by_position[range.clone()].copy_from_slice(&bits);
    }
    let mut est = Labeling::zeros(n);
    for (k, &b) in by_position.iter().enumerate() {
        est.set(order[k] as usize, b);
    }
    (est, iterations)
}

fn majority_update(incidence: &PairIncidence, current: &Labeling, v: usize) -> u8 {
    let (nbrs, vals) = incidence.of(v);
    let ones: usize = nbrs
        .iter()
        .zip(vals)
        .map(|(&u, &y)| usize::from(y ^ current.get(u as usize)))
        .sum();
    u8::from(2 * ones > nbrs.len())
}

pub(crate) struct Refined {
    pub labeling: Labeling,
    pub changes: Vec<usize>,
    pub flags: Vec<StageFlag>,
}

/// Synchronous rounds `X^(t+1) = round(X^(t))` until no label changes
/// (with `early_stop`) or `t_max` rounds.
pub(crate) fn refine(
    initial: Labeling,
    t_max: usize,
    early_stop: bool,
    mut round_fn: impl FnMut(&Labeling) -> Vec<u8>,
) -> Refined {
    let mut current = initial;
    let mut previous: Option<Labeling> = None;
    let mut changes = Vec::new();
    let mut flags = Vec::new();
    let mut settled = false;
    for round in 0..t_max {
        let next = Labeling::from(round_fn(&current));
        let changed = next.hamming(&current).expect("same length");
        changes.push(changed);
        if changed == 0 {
            settled = true;
            if early_stop {
                break;
            }
            continue;
        }
        if previous.as_ref() == Some(&next) {
            flags.push(StageFlag::Oscillation { round: round + 1 });
        }
        previous = Some(std::mem::replace(&mut current, next));
    }
    if !settled && t_max > 0 {
        flags.push(StageFlag::RefinementNotConverged);
    }
    Refined {
        labeling: current,
        changes,
        flags,
    }
}
