use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use locrec::hypergraph::{build_hyper_topology, HyperEdgePolicy, HyperTopology};
use locrec::limits::{self, LimitSpec, Locality, NoiseModel, DEFAULT_REGIME_THRESHOLD};
use locrec::recover::{recover, recover_multilink};
use locrec::rng::{derive_seed, stream, stream_rng};
use locrec::sample_io::{self, HeaderNoise, SampleHeader};
use locrec::sampling::{draw_hyper_samples, draw_samples};
use locrec::{
    build_topology, Family, Labeling, MeasurementTopology, RecoveryConfig, SmallWorldWeights,
    WeightProfile,
};

use crate::record::{switch_error, TrialRecord};
use crate::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub small_world: Option<SmallWorldWeights>,
    /// Distance-dependent sampling rates; `m*` is computed as if uniform.
    pub profile: WeightProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Theta(f64),
    /// Fixed-width multi-linked samples on windows of the base graph.
    Multilink { width: usize, p: f64 },
    /// Linked-read fragments: `Poisson(reads_mean)` readings inside a run of
    /// `length` consecutive vertices.
    Fragments { length: usize, reads_mean: f64, p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub model: ModelSpec,
    pub noise: NoiseSpec,
    pub m_ratios: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub recovery: RecoveryConfig,
    /// Record recovery wall time (makes output nondeterministic).
    pub timing: bool,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HarnessError::Plan("trials must be >= 1".into()));
        }
        if self.m_ratios.is_empty() {
            return Err(HarnessError::Plan("no m ratios given".into()));
        }
        if let Some(bad) = self.m_ratios.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(HarnessError::Plan(format!("m ratio must be positive, got {bad}")));
        }
        Ok(())
    }
}

enum Sampler {
    Pairwise { weighted: MeasurementTopology },
    Hyper(HyperTopology),
}

/// A plan with its topology, sampler and `m*` resolved once.
pub struct Experiment {
    plan: ExperimentPlan,
    topology: MeasurementTopology,
    sampler: Sampler,
    mstar: f64,
    warnings: Vec<String>,
}

/// Everything one trial produced, for callers that need more than the record.
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub truth: Labeling,
    pub estimate: Labeling,
    pub per_iteration_changes: Vec<usize>,
    pub sample_ms: f64,
    pub recover_ms: f64,
}

impl Experiment {
    pub fn new(plan: ExperimentPlan) -> Result<Self> {
        plan.validate()?;
        let m = &plan.model;
        let mut warnings = Vec::new();
        let (topology, sampler, noise_model) = match plan.noise {
            NoiseSpec::Theta(theta) => {
                let topology = build_topology(m.family, m.n, m.r, m.small_world)?;
                let weighted = match &m.profile {
                    WeightProfile::Uniform => topology.clone(),
                    profile => topology.reweighted(|d| profile.weight(d))?,
                };
                if let Some(w) = limits::weight_ratio_warning(weighted.weight_ratio()) {
                    warnings.push(w);
                }
                (topology, Sampler::Pairwise { weighted }, NoiseModel::Theta(theta))
            }
            NoiseSpec::Multilink { width, p } => {
                let hyper =
                    build_hyper_topology(m.family, m.n, m.r, HyperEdgePolicy::Window { width })?;
                (hyper.base().clone(), Sampler::Hyper(hyper), NoiseModel::Multilink { width, p })
            }
            NoiseSpec::Fragments {
                length,
                reads_mean,
                p,
            } => {
                let hyper = build_hyper_topology(
                    m.family,
                    m.n,
                    m.r,
                    HyperEdgePolicy::Fragment { length, reads_mean },
                )?;
                (
                    hyper.base().clone(),
                    Sampler::Hyper(hyper),
                    NoiseModel::MultilinkAsymptotic {
                        mean_width: reads_mean,
                        p,
                    },
                )
            }
        };
        let spec = LimitSpec {
            family: m.family,
            n: m.n,
            locality: Locality::Radius(topology.radius()),
            noise: noise_model,
        };
        let mstar = limits::evaluate(&spec, DEFAULT_REGIME_THRESHOLD)?.mstar;
        Ok(Experiment {
            plan,
            topology,
            sampler,
            mstar,
            warnings,
        })
    }

    pub fn plan(&self) -> &ExperimentPlan {
        &self.plan
    }

    pub fn mstar(&self) -> f64 {
        self.mstar
    }

    pub fn topology(&self) -> &MeasurementTopology {
        &self.topology
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn run_trial(&self, m_ratio: f64, trial: usize) -> Result<TrialRecord> {
        self.run_trial_full(m_ratio, trial, None).map(|o| o.record)
    }

    /// Runs trial `trial` at `m = m_ratio * m*`; optionally dumps the samples.
    pub fn run_trial_full(
        &self,
        m_ratio: f64,
        trial: usize,
        dump: Option<&mut dyn Write>,
    ) -> Result<TrialOutcome> {
        if !(m_ratio > 0.0 && m_ratio.is_finite()) {
            return Err(HarnessError::Plan(format!("m ratio must be positive, got {m_ratio}")));
        }
        let model = &self.plan.model;
        let seed = derive_seed(self.plan.master_seed, trial as u64);
        let truth = Labeling::random(model.n, &mut stream_rng(seed, stream::TRUTH));
        let m = m_ratio * self.mstar;
        let mut sample_rng = stream_rng(seed, stream::SAMPLES);
        let mut algo_rng = stream_rng(seed, stream::ALGORITHM);
        let header = |noise| SampleHeader {
            n: model.n,
            family: model.family,
            r: self.topology.radius(),
            seed,
            m_target: m,
            noise,
        };

        let t0 = Instant::now();
        let (result, theta, p, width, sample_ms, recover_ms) = match (&self.sampler, self.plan.noise) {
            (Sampler::Pairwise { weighted }, NoiseSpec::Theta(theta)) => {
                let samples = draw_samples(weighted, &truth, theta, m, &mut sample_rng)?;
                let sample_ms = elapsed_ms(t0);
                if let Some(out) = dump {
                    sample_io::write_pairwise(out, &header(HeaderNoise::Theta(theta)), &samples)?;
                }
                let t1 = Instant::now();
                let result = recover(&self.topology, &samples, &self.plan.recovery, &mut algo_rng)?;
                (result, Some(theta), None, None, sample_ms, elapsed_ms(t1))
            }
            (Sampler::Hyper(hyper), noise) => {
                let p = match noise {
                    NoiseSpec::Multilink { p, .. } | NoiseSpec::Fragments { p, .. } => p,
                    NoiseSpec::Theta(_) => unreachable!("pairwise noise has a pairwise sampler"),
                };
                let samples = draw_hyper_samples(hyper, &truth, p, m, &mut sample_rng)?;
                let sample_ms = elapsed_ms(t0);
                if let Some(out) = dump {
                    let width = hyper.width().unwrap_or(0);
                    sample_io::write_multilink(out, &header(HeaderNoise::Multilink { p, width }), &samples)?;
                }
                let t1 = Instant::now();
                let result = recover_multilink(hyper, &samples, &self.plan.recovery, &mut algo_rng)?;
                let width = match noise {
                    NoiseSpec::Multilink { width, .. } => width as f64,
                    _ => hyper.mean_width(),
                };
                (result, None, Some(p), Some(width), sample_ms, elapsed_ms(t1))
            }
            (Sampler::Pairwise { .. }, _) => unreachable!("multi-linked noise has a hyper sampler"),
        };

        let hamming = result.labeling.dist(&truth)?;
        let record = TrialRecord {
            family: model.family,
            n: model.n,
            r: self.topology.radius(),
            theta,
            p,
            width,
            algorithm: self.plan.recovery.algorithm,
            m_ratio,
            m,
            trial,
            seed,
            hamming,
            switch_err: switch_error(&result.labeling, &truth)?,
            iterations: result.iterations_used,
            runtime_ms: self.plan.timing.then_some(recover_ms),
        };
        Ok(TrialOutcome {
            record,
            truth,
            estimate: result.labeling,
            per_iteration_changes: result.per_iteration_changes,
            sample_ms,
            recover_ms,
        })
    }
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// All `(ratio, trial)` records in ratio-major order, computed on `jobs`
/// worker threads. Output order does not depend on `jobs`.
pub fn sweep(experiment: &Experiment, jobs: usize) -> Result<Vec<TrialRecord>> {
    let plan = experiment.plan();
    let tasks: Vec<(f64, usize)> = plan
        .m_ratios
        .iter()
        .flat_map(|&ratio| (0..plan.trials).map(move |t| (ratio, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(ratio, trial)| experiment.run_trial(ratio, trial))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub r_exp: f64,
    pub r: usize,
    pub theta: f64,
    pub m_ratio: f64,
    pub m: f64,
    pub trial: usize,
    pub hamming: usize,
    pub iterations: usize,
    pub sample_ms: f64,
    pub recover_ms: f64,
}

impl BenchRow {
    pub const HEADER: &'static str =
        "family,n,r_exp,r,theta,m_ratio,m,trial,success,hamming,iters,sample_ms,recover_ms";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.1},{},{},{},{},{:.3},{:.3}",
            self.family,
            self.n,
            self.r_exp,
            self.r,
            self.theta,
            self.m_ratio,
            self.m,
            self.trial,
            u8::from(self.hamming == 0),
            self.hamming,
            self.iterations,
            self.sample_ms,
            self.recover_ms
        )
    }
}

/// `ceil(n^e)`, guarding against `n^e` landing a hair above an integer.
pub fn radius_from_exponent(n: usize, e: f64) -> usize {
    let x = (n as f64).powf(e);
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 * x.max(1.0) {
        rounded as usize
    } else {
        x.ceil() as usize
    }
}

/// Runtime table: one row per `(r exponent, trial)`, trials run sequentially.
pub fn bench(
    base: &ExperimentPlan,
    r_exps: &[f64],
    m_ratio: f64,
) -> Result<Vec<BenchRow>> {
    let theta = match base.noise {
        NoiseSpec::Theta(t) => t,
        _ => return Err(HarnessError::Plan("bench supports pairwise noise only".into())),
    };
    let mut rows = Vec::new();
    for &e in r_exps {
        let mut plan = base.clone();
        plan.model.r = radius_from_exponent(plan.model.n, e);
        plan.m_ratios = vec![m_ratio];
        let exp = Experiment::new(plan)?;
        for trial in 0..base.trials {
            let out = exp.run_trial_full(m_ratio, trial, None)?;
            rows.push(BenchRow {
                family: exp.plan.model.family,
                n: exp.plan.model.n,
                r_exp: e,
                r: exp.topology.radius(),
                theta,
                m_ratio,
                m: out.record.m,
                trial,
                hamming: out.record.hamming,
                iterations: out.record.iterations,
                sample_ms: out.sample_ms,
                recover_ms: out.recover_ms,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaploMode {
    /// Pairwise samples on a line; distance rates ~ truncated Poisson gaps.
    MatePair,
    /// Linked-read fragments (multi-linked samples).
    TenX,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaploOptions {
    pub mode: HaploMode,
    pub n: usize,
    /// Per-read error rate.
    pub p: f64,
    pub gap_mean: f64,
    pub max_gap: usize,
    pub fragment_length: usize,
    pub reads_mean: f64,
    pub m_ratios: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub recovery: RecoveryConfig,
    pub timing: bool,
}

impl Default for HaploOptions {
    fn default() -> Self {
        HaploOptions {
            mode: HaploMode::MatePair,
            n: 10_000,
            p: 0.01,
            gap_mean: 3.5,
            max_gap: 9,
            fragment_length: 100,
            reads_mean: 9.0,
            m_ratios: vec![1.5],
            trials: 10,
            master_seed: 1,
            recovery: RecoveryConfig::default(),
            timing: false,
        }
    }
}

impl HaploOptions {
    pub fn plan(&self) -> ExperimentPlan {
        let (model, noise) = match self.mode {
            HaploMode::MatePair => {
                let gaps = WeightProfile::PoissonPmf {
                    mean: self.gap_mean,
                };
                let table: Vec<f64> = (1..=self.max_gap).map(|d| gaps.weight(d as f64)).collect();
                let total: f64 = table.iter().sum();
                (
                    ModelSpec {
                        family: Family::Line,
                        n: self.n,
                        r: self.max_gap,
                        small_world: None,
                        profile: WeightProfile::Table(table.iter().map(|w| w / total).collect()),
                    },
                    NoiseSpec::Theta(2.0 * self.p * (1.0 - self.p)),
                )
            }
            HaploMode::TenX => (
                ModelSpec {
                    family: Family::Line,
                    n: self.n,
                    r: self.fragment_length.saturating_sub(1).max(1),
                    small_world: None,
                    profile: WeightProfile::Uniform,
                },
                NoiseSpec::Fragments {
                    length: self.fragment_length,
                    reads_mean: self.reads_mean,
                    p: self.p,
                },
            ),
        };
        ExperimentPlan {
            model,
            noise,
            m_ratios: self.m_ratios.clone(),
            trials: self.trials,
            master_seed: self.master_seed,
            recovery: self.recovery.clone(),
            timing: self.timing,
        }
    }
}

/// Haplotype-style simulation; mate-pair rows also carry the per-read `p`.
pub fn haplosim(options: &HaploOptions, jobs: usize) -> Result<Vec<TrialRecord>> {
    let exp = Experiment::new(options.plan())?;
    let mut records = sweep(&exp, jobs)?;
    if options.mode == HaploMode::MatePair {
        for rec in &mut records {
            rec.p = Some(options.p);
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_plan(n: usize, r: usize) -> ExperimentPlan {
        ExperimentPlan {
            model: ModelSpec {
                family: Family::Ring,
                n,
                r,
                small_world: None,
                profile: WeightProfile::Uniform,
            },
            noise: NoiseSpec::Theta(0.1),
            m_ratios: vec![0.5, 2.0],
            trials: 3,
            master_seed: 9,
            recovery: RecoveryConfig::default(),
            timing: false,
        }
    }

    #[test]
    fn plan_validation() {
        let mut plan = ring_plan(100, 5);
        plan.trials = 0;
        assert!(Experiment::new(plan).is_err());
        let mut plan = ring_plan(100, 5);
        plan.m_ratios = vec![1.0, 0.0];
        assert!(Experiment::new(plan).is_err());
        let exp = Experiment::new(ring_plan(100, 5)).unwrap();
        assert!(exp.run_trial(-1.0, 0).is_err());
    }

    #[test]
    fn mstar_matches_limits() {
        let exp = Experiment::new(ring_plan(1000, 10)).unwrap();
        let n = 1000f64;
        let expected = n * n.ln() / (2.0 * limits::hellinger(limits::kl_half(0.1).unwrap()));
        assert!((exp.mstar() - expected).abs() < 1e-9);
    }

    #[test]
    fn sweep_order_independent_of_jobs() {
        let exp = Experiment::new(ring_plan(500, 20)).unwrap();
        let a = sweep(&exp, 1).unwrap();
        let b = sweep(&exp, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert_eq!(a[3].m_ratio, 2.0);
        assert_eq!(a[3].trial, 0);
        // trials share truth and seed across ratios
        assert_eq!(a[0].seed, a[3].seed);
    }

    #[test]
    fn trial_matches_sweep_row() {
        let exp = Experiment::new(ring_plan(500, 20)).unwrap();
        let rows = sweep(&exp, 2).unwrap();
        assert_eq!(exp.run_trial(2.0, 1).unwrap(), rows[4]);
    }

    #[test]
    fn radius_exponent() {
        assert_eq!(radius_from_exponent(10_000, 0.5), 100);
        assert_eq!(radius_from_exponent(10_000, 0.6), 252);
        assert_eq!(radius_from_exponent(100_000, 0.25), 18);
    }

    #[test]
    fn haplo_plans() {
        let mate = HaploOptions::default().plan();
        assert_eq!(mate.model.r, 9);
        match &mate.model.profile {
            WeightProfile::Table(t) => {
                assert_eq!(t.len(), 9);
                assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(t[2] > t[0] && t[2] > t[8]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(mate.noise, NoiseSpec::Theta(2.0 * 0.01 * 0.99));
        let tenx = HaploOptions {
            mode: HaploMode::TenX,
            ..Default::default()
        }
        .plan();
        assert_eq!(tenx.model.r, 99);
    }

    #[test]
    fn dump_contains_samples() {
        let exp = Experiment::new(ring_plan(60, 3)).unwrap();
        let mut buf = Vec::new();
        exp.run_trial_full(1.0, 0, Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# locrec pairwise n=60 family=ring r=3 theta=0.1"));
        assert!(text.lines().count() > 10);
    }
}
