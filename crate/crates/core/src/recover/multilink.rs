//! Multi-linked variants: spectral stages run on derived pairwise parities,
//! vote stages use the local maximum-likelihood rule.

use rand::Rng;

use super::{
    core_estimate, refine, stitched_estimate, Algorithm, RecoveryConfig, RecoveryResult, StageFlag,
};
use crate::error::{Error, Result};
use crate::hypergraph::HyperTopology;
use crate::incidence::{HyperIncidence, PairIncidence};
use crate::labeling::Labeling;
use crate::limits::log_add_exp;
use crate::sampling::HyperSampleSet;

const P_FLOOR: f64 = 1e-12;

/// `ln` of the unnormalized mixture likelihood of one sample with `a`
/// readings agreeing with the labeling out of `width`.
fn ln_mixture(a: usize, width: usize, lp: f64, lq: f64) -> f64 {
    let (a, b) = (a as f64, (width - a) as f64);
    log_add_exp(a * lq + b * lp, a * lp + b * lq)
}

fn log_probs(p: f64) -> (f64, f64) {
    let p = p.max(P_FLOOR);
    (p.ln(), (1.0 - p).ln())
}

/// Contribution of one sample to the score of vertex slot `k`, given the
/// number of agreeing readings among the other slots.
fn sample_term(others_agree: usize, y_k: u8, width: usize, lp: f64, lq: f64) -> f64 {
    let a1 = others_agree + usize::from(y_k == 1);
    let a0 = others_agree + usize::from(y_k == 0);
    ln_mixture(a1, width, lp, lq) - ln_mixture(a0, width, lp, lq)
}

/// `sum_e [ln P(Y_e | X_v = 1) - ln P(Y_e | X_v = 0)]` over the samples
/// `incident` (ids into `samples`), other labels held at `current`.
/// `p` is clamped below at `1e-12`.
pub fn local_ml_score(
    vertex: usize,
    current: &Labeling,
    samples: &HyperSampleSet,
    incident: &[u32],
    p: f64,
) -> f64 {
    let (lp, lq) = log_probs(p);
    incident
        .iter()
        .map(|&e| {
            let (vs, ys) = samples.get(e as usize);
            let mut others = 0;
            let mut y_k = None;
            for (&v, &y) in vs.iter().zip(ys) {
                if v as usize == vertex {
                    y_k = Some(y);
                } else if y == current.get(v as usize) {
                    others += 1;
                }
            }
            let y_k = y_k.expect("sample is incident to vertex");
            sample_term(others, y_k, vs.len(), lp, lq)
        })
        .sum()
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::POutOfRange(p));
    }
    Ok(())
}

pub fn recover_multilink<R: Rng + ?Sized>(
    hyper: &HyperTopology,
    samples: &HyperSampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    match config.algorithm {
        Algorithm::Expanding => spectral_expanding_multilink(hyper, samples, config, rng),
        Algorithm::Stitching => spectral_stitching_multilink(hyper, samples, config, rng),
    }
}

pub fn spectral_expanding_multilink<R: Rng + ?Sized>(
    hyper: &HyperTopology,
    samples: &HyperSampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    check_p(samples.p)?;
    let topology = hyper.base();
    if topology.n() != samples.n() {
        return Err(Error::LengthMismatch(topology.n(), samples.n()));
    }
    let pairs = PairIncidence::new(&samples.derived_pairs());
    let incidence = HyperIncidence::new(samples);
    let mut flags = Vec::new();
    let (core_bits, spectral_iterations) = core_estimate(topology, &pairs, config, rng, &mut flags);

    // progressive local ML over samples whose latest vertex is the current one
    let n = topology.n();
    let order = topology.order();
    let pos = topology.positions();
    let mut est = Labeling::zeros(n);
    for (k, &bit) in core_bits.iter().enumerate() {
        est.set(order[k] as usize, bit);
    }
    for k in core_bits.len()..n {
        let v = order[k] as usize;
        let backward: Vec<u32> = incidence
            .of(v)
            .iter()
            .copied()
            .filter(|&e| {
                samples
                    .get(e as usize)
                    .0
                    .iter()
                    .all(|&u| (pos[u as usize] as usize) <= k)
            })
            .collect();
        if backward.is_empty() {
            flags.push(StageFlag::NoBackwardSamples(v));
            continue;
        }
        let score = local_ml_score(v, &est, samples, &backward, samples.p);
        est.set(v, u8::from(score >= 0.0));
    }
    Ok(finish(samples, &incidence, est, config, flags, spectral_iterations))
}

pub fn spectral_stitching_multilink<R: Rng + ?Sized>(
    hyper: &HyperTopology,
    samples: &HyperSampleSet,
    config: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryResult> {
    check_p(samples.p)?;
    let topology = hyper.base();
    if topology.n() != samples.n() {
        return Err(Error::LengthMismatch(topology.n(), samples.n()));
    }
    let width = config.window_for(topology)?;
    let pairs = PairIncidence::new(&samples.derived_pairs());
    let incidence = HyperIncidence::new(samples);
    let mut flags = Vec::new();
    let (initial, spectral_iterations) =
        stitched_estimate(topology, &pairs, width, config, rng, &mut flags);
    Ok(finish(samples, &incidence, initial, config, flags, spectral_iterations))
}

fn finish(
    samples: &HyperSampleSet,
    incidence: &HyperIncidence,
    initial: Labeling,
    config: &RecoveryConfig,
    mut flags: Vec<StageFlag>,
    spectral_iterations: usize,
) -> RecoveryResult {
    let (lp, lq) = log_probs(samples.p);
    let t_max = config.t_max_for(samples.n());
    let mut agree = vec![0usize; samples.len()];
    let refined = refine(initial, t_max, config.early_stop, |current| {
        for (e, (vs, ys)) in samples.iter().enumerate() {
            agree[e] = vs
                .iter()
                .zip(ys)
                .filter(|(&v, &y)| current.get(v as usize) == y)
                .count();
        }
        (0..current.len())
            .map(|v| {
                let x_v = current.get(v);
                let score: f64 = incidence
                    .of(v)
                    .iter()
                    .map(|&e| {
                        let (vs, ys) = samples.get(e as usize);
                        let k = vs.iter().position(|&u| u as usize == v).expect("incident");
                        let others = agree[e as usize] - usize::from(ys[k] == x_v);
                        sample_term(others, ys[k], vs.len(), lp, lq)
                    })
                    .sum();
                u8::from(score >= 0.0)
            })
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hyper_topology, HyperEdgePolicy};
    use crate::recover::{spectral_expanding, RecoveryConfig};
    use crate::rng::stream_rng;
    use crate::sampling::draw_hyper_samples;
    use crate::topology::Family;

    #[test]
    fn no_samples_score_zero() {
        let set = HyperSampleSet::empty(3, 0.1);
        assert_eq!(local_ml_score(0, &Labeling::zeros(3), &set, &[], 0.1), 0.0);
    }

    #[test]
    fn width_two_score_follows_parity() {
        for (y0, y1, x1) in [(0, 0, 0), (0, 1, 0), (1, 1, 1), (1, 0, 1), (0, 0, 1)] {
            let mut set = HyperSampleSet::empty(2, 0.1);
            set.push(&[0, 1], &[y0, y1]);
            let current = Labeling::planted(&[0, x1]);
            let score = local_ml_score(0, &current, &set, &[0], 0.1);
            let vote = (y0 ^ y1) ^ x1;
            assert_eq!(u8::from(score > 0.0), vote);
            assert!(score != 0.0);
        }
    }

    #[test]
    fn score_magnitude_is_log_odds() {
        let p: f64 = 0.05;
        let theta = 2.0 * p * (1.0 - p);
        let mut set = HyperSampleSet::empty(2, p);
        set.push(&[0, 1], &[1, 0]);
        let s = local_ml_score(0, &Labeling::zeros(2), &set, &[0], p);
        assert!((s - ((1.0 - theta) / theta).ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_p_is_clamped() {
        let mut set = HyperSampleSet::empty(3, 0.0);
        set.push(&[0, 1, 2], &[1, 1, 1]);
        let s = local_ml_score(0, &Labeling::planted(&[0, 1, 1]), &set, &[0], 0.0);
        assert!(s.is_finite() && s > 0.0);
    }

    #[test]
    fn rejects_bad_p() {
        let hyper =
            build_hyper_topology(Family::Ring, 10, 2, HyperEdgePolicy::Window { width: 2 }).unwrap();
        let set = HyperSampleSet::empty(10, 0.5);
        let out = spectral_expanding_multilink(&hyper, &set, &RecoveryConfig::default(), &mut stream_rng(0, 2));
        assert_eq!(out, Err(Error::POutOfRange(0.5)));
    }

    #[test]
    fn noiseless_multilink_exact() {
        let n = 200;
        let hyper =
            build_hyper_topology(Family::Ring, n, 10, HyperEdgePolicy::Window { width: 4 }).unwrap();
        for seed in 0..4 {
            let truth = Labeling::random(n, &mut stream_rng(seed, 0));
            let set = draw_hyper_samples(&hyper, &truth, 0.0, 3000.0, &mut stream_rng(seed, 1)).unwrap();
            for algo in [Algorithm::Expanding, Algorithm::Stitching] {
                let cfg = RecoveryConfig::with_algorithm(algo);
                let out = recover_multilink(&hyper, &set, &cfg, &mut stream_rng(seed, 2)).unwrap();
                assert_eq!(out.labeling.dist(&truth).unwrap(), 0, "{algo} seed {seed}");
            }
        }
    }

    #[test]
    fn width_two_matches_pairwise() {
        let n = 300;
        let p = 0.02;
        let hyper =
            build_hyper_topology(Family::Ring, n, 15, HyperEdgePolicy::Window { width: 2 }).unwrap();
        for seed in 0..5 {
            let truth = Labeling::random(n, &mut stream_rng(seed, 0));
            let set = draw_hyper_samples(&hyper, &truth, p, 6000.0, &mut stream_rng(seed, 1)).unwrap();
            let multi = spectral_expanding_multilink(&hyper, &set, &RecoveryConfig::default(), &mut stream_rng(seed, 2))
                .unwrap();
            let pairs = set.derived_pairs();
            let single = spectral_expanding(hyper.base(), &pairs, &RecoveryConfig::default(), &mut stream_rng(seed, 2))
                .unwrap();
            assert_eq!(multi.labeling, single.labeling, "seed {seed}");
        }
    }

    #[test]
    fn noisy_multilink_recovers() {
        let n = 1000;
        let hyper =
            build_hyper_topology(Family::Ring, n, 30, HyperEdgePolicy::Window { width: 5 }).unwrap();
        let mut wins = 0;
        for seed in 0..5 {
            let truth = Labeling::random(n, &mut stream_rng(seed, 0));
            let set = draw_hyper_samples(&hyper, &truth, 0.05, 6000.0, &mut stream_rng(seed, 1)).unwrap();
            let out = spectral_expanding_multilink(&hyper, &set, &RecoveryConfig::default(), &mut stream_rng(seed, 2))
                .unwrap();
            wins += usize::from(out.labeling.dist(&truth).unwrap() == 0);
        }
        assert!(wins >= 4, "{wins}/5");
    }
}
