//! Chernoff information and minimum sample complexity.
//!
//! All logarithms are natural. `1 - exp(-D*)` is the Chernoff-Hellinger
//! divergence that governs recovery under Poisson sample counts.

use crate::error::{Error, Result};
use crate::topology::Family;

/// Default crossover between the `r = n^beta` and `r = gamma * n` regimes.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 0.95;
/// Weight ratio above which the bounded-ratio assumption is reported.
pub const WEIGHT_RATIO_WARNING: f64 = 100.0;

const GOLDEN_MAX_ITER: usize = 200;

/// `KL(0.5 || theta) = 0.5 ln(0.5/theta) + 0.5 ln(0.5/(1-theta))`.
pub fn kl_half(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(0.5 * (0.5 / theta).ln() + 0.5 * (0.5 / (1.0 - theta)).ln())
}

/// `1 - exp(-d)`.
pub fn hellinger(dstar: f64) -> f64 {
    -(-dstar).exp_m1()
}

/// Two distributions on a common finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistPair {
    pub support: Vec<i64>,
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
}

impl FiniteDistPair {
    pub fn new(support: Vec<i64>, p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        let pair = FiniteDistPair { support, p0, p1 };
        pair.validate()?;
        Ok(pair)
    }

    /// `Bernoulli(a)` vs `Bernoulli(b)` on `{0, 1}`.
    pub fn bernoulli(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![0, 1], vec![1.0 - a, a], vec![1.0 - b, b])
    }

    pub fn validate(&self) -> Result<()> {
        if self.p0.len() != self.support.len() || self.p1.len() != self.support.len() {
            return Err(Error::InvalidDistribution("length mismatch".into()));
        }
        for (name, p) in [("p0", &self.p0), ("p1", &self.p1)] {
            if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidDistribution(format!("{name} has a negative entry")));
            }
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidDistribution(format!("{name} sums to {total}")));
            }
        }
        Ok(())
    }

    /// `ln sum_y p0(y)^tau p1(y)^(1-tau)`, with `0^0 = 1`.
    pub fn log_affinity(&self, tau: f64) -> f64 {
        let total: f64 = self
            .p0
            .iter()
            .zip(&self.p1)
            .map(|(&a, &b)| {
                if (a == 0.0 && tau > 0.0) || (b == 0.0 && tau < 1.0) {
                    0.0
                } else {
                    a.powf(tau) * b.powf(1.0 - tau)
                }
            })
            .sum();
        total.ln()
    }
}

/// `D* = -min_{tau in [0,1]} ln sum p0^tau p1^(1-tau)` by golden-section search.
///
/// The objective is convex in `tau`, so the search brackets the minimizer.
pub fn chernoff_information(pair: &FiniteDistPair, tol: f64) -> Result<f64> {
    pair.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (tau, value) = golden_min(|t| pair.log_affinity(t), 0.0, 1.0, tol);
    let _ = tau;
    let best = value.min(pair.log_affinity(0.0)).min(pair.log_affinity(1.0));
    Ok((-best).max(0.0))
}

/// Minimizer and minimum of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(c, fc), (d, fd), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// `ln C(n, k)`, symmetric in `k <-> n - k` bit for bit.
fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn check_multilink(width: usize, p: f64) -> Result<()> {
    if width < 2 {
        return Err(Error::InvalidParameter(format!("need L >= 2, got {width}")));
    }
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::POutOfRange(p));
    }
    Ok(())
}

/// `ln { p^a (1-p)^(L-a) + (1-p)^a p^(L-a) }`.
fn ln_mix(width: usize, a: usize, lp: f64, lq: f64) -> f64 {
    let b = (width - a) as f64;
    let a = a as f64;
    log_add_exp(a * lp + b * lq, a * lq + b * lp)
}

/// Laws of the number of disagreeing readings among the other `L - 1`
/// vertices of a multi-linked sample, given `X_1 = 0` (`p0`) or `X_1 = 1`
/// (`p1`) with every other label 0.
pub fn multilink_distributions(width: usize, p: f64) -> Result<FiniteDistPair> {
    check_multilink(width, p)?;
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let k = width - 1;
    let mut p0 = Vec::with_capacity(width);
    let mut p1 = Vec::with_capacity(width);
    for i in 0..width {
        let c = ln_binomial(k, i);
        p0.push((c + ln_mix(width, i, lp, lq)).exp());
        p1.push((c + ln_mix(width, i + 1, lp, lq)).exp());
    }
    Ok(FiniteDistPair {
        support: (0..width as i64).collect(),
        p0,
        p1,
    })
}

/// Closed-form Chernoff information of [`multilink_distributions`], attained
/// at `tau = 1/2`. Evaluated entirely in log space.
pub fn multilink_chernoff(width: usize, p: f64) -> Result<f64> {
    check_multilink(width, p)?;
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let k = width - 1;
    let terms: Vec<f64> = (0..width)
        .map(|i| {
            ln_binomial(k, i) + 0.5 * (ln_mix(width, i, lp, lq) + ln_mix(width, i + 1, lp, lq))
        })
        .collect();
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = hi + terms.iter().map(|t| (t - hi).exp()).sum::<f64>().ln();
    Ok((-log_sum).max(0.0))
}

/// How the locality radius is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Locality {
    /// Concrete radius; the regime is inferred from `(n, r)`.
    Radius(usize),
    /// `r = n^beta`.
    Beta(f64),
    /// `r = gamma * n` (lines only).
    Gamma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Theta(f64),
    Multilink { width: usize, p: f64 },
    /// `L -> infinity` limit with `D = KL(0.5 || p)`; `mean_width` vertices per sample.
    MultilinkAsymptotic { mean_width: f64, p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSpec {
    pub family: Family,
    pub n: usize,
    pub locality: Locality,
    pub noise: NoiseModel,
}

/// Which closed form produced `m*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `n ln n / (2 H)`.
    Homogeneous,
    LineBeta(f64),
    LineGamma(f64),
    GridBeta(f64),
    /// `n ln n / (L H_L)`.
    Multilink(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitReport {
    pub dstar: f64,
    pub hellinger: f64,
    pub mstar: f64,
    pub regime: Regime,
}

fn dstar_of(noise: NoiseModel) -> Result<f64> {
    match noise {
        NoiseModel::Theta(theta) => {
            if theta == 0.5 {
                return Err(Error::ZeroDivergence);
            }
            kl_half(theta)
        }
        NoiseModel::Multilink { width, p } => multilink_chernoff(width, p),
        NoiseModel::MultilinkAsymptotic { mean_width, p } => {
            if !(mean_width >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "mean width must be >= 1, got {mean_width}"
                )));
            }
            if !(p > 0.0 && p < 0.5) {
                return Err(Error::POutOfRange(p));
            }
            kl_half(p)
        }
    }
}

/// Minimum sample complexity with the default regime threshold.
pub fn m_star(spec: &LimitSpec) -> Result<f64> {
    evaluate(spec, DEFAULT_REGIME_THRESHOLD).map(|r| r.mstar)
}

/// Full limit report. `threshold` picks the `beta` regime when
/// `r < n^threshold` (lines) or `r^2 < n^threshold` (grids).
pub fn evaluate(spec: &LimitSpec, threshold: f64) -> Result<LimitReport> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let dstar = dstar_of(spec.noise)?;
    let h = hellinger(dstar);
    if !(h > 0.0) {
        return Err(Error::ZeroDivergence);
    }
    let nf = n as f64;
    let nlogn = nf * nf.ln();

    if let NoiseModel::Multilink { .. } | NoiseModel::MultilinkAsymptotic { .. } = spec.noise {
        if !matches!(spec.family, Family::Ring | Family::Line) {
            return Err(Error::UnsupportedCombination(format!(
                "multi-linked limit on a {} graph",
                spec.family
            )));
        }
        let width = match spec.noise {
            NoiseModel::Multilink { width, .. } => width as f64,
            NoiseModel::MultilinkAsymptotic { mean_width, .. } => mean_width,
            NoiseModel::Theta(_) => unreachable!(),
        };
        return Ok(LimitReport {
            dstar,
            hellinger: h,
            mstar: nlogn / (width * h),
            regime: Regime::Multilink(width),
        });
    }

    let regime = match spec.family {
        Family::Ring | Family::SmallWorld | Family::Complete => Regime::Homogeneous,
        Family::Line => match spec.locality {
            Locality::Beta(beta) => {
                if !(beta > 0.0 && beta < 1.0) {
                    return Err(Error::UnsupportedCombination(format!(
                        "line exponent beta = {beta} outside (0, 1)"
                    )));
                }
                Regime::LineBeta(beta)
            }
            Locality::Gamma(gamma) => {
                if !(gamma > 0.0 && gamma <= 1.0) {
                    return Err(Error::UnsupportedCombination(format!(
                        "line fraction gamma = {gamma} outside (0, 1]"
                    )));
                }
                Regime::LineGamma(gamma)
            }
            Locality::Radius(r) => {
                if r == 0 || r >= n {
                    return Err(Error::RadiusTooLarge { n, r });
                }
                if (r as f64) < nf.powf(threshold) {
                    Regime::LineBeta((r as f64).ln() / nf.ln())
                } else {
                    Regime::LineGamma(r as f64 / nf)
                }
            }
        },
        Family::Grid => {
            let beta = match spec.locality {
                Locality::Beta(beta) => beta,
                Locality::Radius(r) => {
                    let rf = r as f64;
                    if r == 0 || rf * rf >= nf.powf(threshold) {
                        return Err(Error::UnsupportedCombination(format!(
                            "grid radius {r} is outside the r = n^beta (beta < 1/2) regime"
                        )));
                    }
                    rf.ln() / nf.ln()
                }
                Locality::Gamma(_) => {
                    return Err(Error::UnsupportedCombination(
                        "grids have no r = gamma * n regime".into(),
                    ))
                }
            };
            if !(beta > 0.0 && beta < 0.5) {
                return Err(Error::UnsupportedCombination(format!(
                    "grid exponent beta = {beta} outside (0, 1/2)"
                )));
            }
            Regime::GridBeta(beta)
        }
    };
    let mstar = match regime {
        Regime::Homogeneous => nlogn / (2.0 * h),
        Regime::LineBeta(beta) => beta.max(0.5) * nlogn / h,
        Regime::LineGamma(gamma) => (1.0 - gamma / 2.0) * nlogn / h,
        Regime::GridBeta(beta) => (4.0 * beta).max(0.5) * nlogn / h,
        Regime::Multilink(_) => unreachable!(),
    };
    Ok(LimitReport {
        dstar,
        hellinger: h,
        mstar,
        regime,
    })
}

/// Single-vertex error exponent `lambda d_v (1 - exp(-D*))`.
pub fn genie_error_exponent(lambda_dv: f64, dstar: f64) -> f64 {
    lambda_dv * hellinger(dstar)
}

/// Message when `max w / min w` exceeds [`WEIGHT_RATIO_WARNING`]; `m*` itself is unchanged.
pub fn weight_ratio_warning(ratio: f64) -> Option<String> {
    (ratio > WEIGHT_RATIO_WARNING).then(|| {
        format!(
            "weight ratio max/min = {ratio:.3e} exceeds {WEIGHT_RATIO_WARNING}; \
             the limit assumes a bounded ratio"
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kl_values() {
        assert_eq!(kl_half(0.5).unwrap(), 0.0);
        assert!((kl_half(0.1).unwrap() - 0.510_825_623_765_990_7).abs() < 1e-15);
        assert!((kl_half(0.1).unwrap() + (0.6f64).ln()).abs() < 1e-15);
        assert!(kl_half(0.0).is_err());
        assert!(kl_half(1.0).is_err());
    }

    proptest! {
        #[test]
        fn kl_identity_and_symmetry(theta in 1e-6f64..0.999_999) {
            let kl = kl_half(theta).unwrap();
            let alt = -(2.0 * (theta * (1.0 - theta)).sqrt()).ln();
            prop_assert!((kl - alt).abs() < 1e-12);
            prop_assert!((kl - kl_half(1.0 - theta).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn chernoff_is_nonnegative(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let d = chernoff_information(&FiniteDistPair::bernoulli(a, b).unwrap(), 1e-12).unwrap();
            prop_assert!(d >= 0.0);
            if (a - b).abs() < 1e-15 {
                prop_assert!(d < 1e-12);
            }
        }
    }

    #[test]
    fn chernoff_of_identical_is_zero() {
        let pair = FiniteDistPair::new(vec![0, 1, 2], vec![0.2, 0.3, 0.5], vec![0.2, 0.3, 0.5])
            .unwrap();
        assert!(chernoff_information(&pair, 1e-12).unwrap().abs() < 1e-15);
    }

    #[test]
    fn chernoff_of_mirrored_bernoulli_is_kl() {
        let pair = FiniteDistPair::bernoulli(0.1, 0.9).unwrap();
        let d = chernoff_information(&pair, 1e-12).unwrap();
        assert!((d - 0.510_825_623_765_990_7).abs() < 1e-12);
        // symmetric pair: the infimum sits at tau = 1/2
        assert!((d + pair.log_affinity(0.5)).abs() < 1e-12);
    }

    #[test]
    fn chernoff_rejects_bad_distribution() {
        assert!(matches!(
            FiniteDistPair::new(vec![0, 1], vec![0.5, 0.6], vec![0.5, 0.5]),
            Err(Error::InvalidDistribution(_))
        ));
        let bad = FiniteDistPair {
            support: vec![0, 1],
            p0: vec![-0.1, 1.1],
            p1: vec![0.5, 0.5],
        };
        assert!(chernoff_information(&bad, 1e-12).is_err());
    }

    #[test]
    fn chernoff_asymmetric_pair_interior_minimum() {
        // Bern(0.1) vs Bern(0.6): minimizer is not at 1/2
        let pair = FiniteDistPair::bernoulli(0.1, 0.6).unwrap();
        let d = chernoff_information(&pair, 1e-12).unwrap();
        let grid_best = (1..100_000)
            .map(|k| pair.log_affinity(k as f64 / 100_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!((d + grid_best).abs() < 1e-9);
        assert!(d > -pair.log_affinity(0.5));
    }

    #[test]
    fn multilink_width_two_distribution() {
        let p = 0.07;
        let pair = multilink_distributions(2, p).unwrap();
        assert!((pair.p0[0] - ((1.0 - p) * (1.0 - p) + p * p)).abs() < 1e-15);
        assert!((pair.p0[1] - 2.0 * p * (1.0 - p)).abs() < 1e-15);
    }

    #[test]
    fn multilink_distributions_are_mirrored_and_normalized() {
        for width in 2..=10 {
            for p in [0.01, 0.05, 0.1, 0.25, 0.4] {
                let pair = multilink_distributions(width, p).unwrap();
                pair.validate().unwrap();
                for i in 0..width {
                    assert_eq!(pair.p0[i], pair.p1[width - 1 - i], "L={width} p={p} i={i}");
                }
            }
        }
        assert!(multilink_distributions(1, 0.1).is_err());
        assert!(multilink_distributions(3, 0.5).is_err());
    }

    #[test]
    fn multilink_closed_form_width_two_is_kl() {
        let d = multilink_chernoff(2, 0.01).unwrap();
        let theta = 2.0 * 0.01 * 0.99;
        assert!((d - kl_half(theta).unwrap()).abs() < 1e-10);
        // frozen from a 40-digit evaluation
        assert!((d - 1.277_888_813_334_223_4).abs() < 1e-12);
        for p in [0.02, 0.1, 0.3, 0.45] {
            let d = multilink_chernoff(2, p).unwrap();
            assert!((d - kl_half(2.0 * p * (1.0 - p)).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn multilink_closed_form_frozen_values() {
        // 40-digit reference values
        let cases = [
            (5, 0.01, 1.611_907_224_022_424_8),
            (10, 0.1, 0.508_281_414_104_526_9),
            (6, 0.25, 0.093_666_134_236_761_33),
            (3, 0.05, 0.695_871_506_541_340_6),
        ];
        for (w, p, expected) in cases {
            let d = multilink_chernoff(w, p).unwrap();
            assert!((d - expected).abs() < 1e-12, "L={w} p={p}: {d}");
        }
    }

    #[test]
    fn multilink_large_width_is_finite() {
        let d = multilink_chernoff(400, 0.01).unwrap();
        assert!((d - kl_half(0.01).unwrap()).abs() < 1e-12);
        let d = multilink_chernoff(200, 0.1).unwrap();
        assert!((d - kl_half(0.1).unwrap()).abs() < 1e-12);
    }

    fn ring(n: usize, theta: f64) -> LimitSpec {
        LimitSpec {
            family: Family::Ring,
            n,
            locality: Locality::Radius(10),
            noise: NoiseModel::Theta(theta),
        }
    }

    #[test]
    fn m_star_reference_values() {
        let m = m_star(&ring(100_000, 0.1)).unwrap();
        assert!((m - 1_439_115.683_121_278_6).abs() < 1e-6);
        let line = LimitSpec {
            family: Family::Line,
            locality: Locality::Beta(0.75),
            ..ring(100_000, 0.1)
        };
        assert!((m_star(&line).unwrap() - 2_158_673.524_681_918).abs() < 1e-6);
        let grid = LimitSpec {
            family: Family::Grid,
            locality: Locality::Beta(0.25),
            ..ring(100_000, 0.1)
        };
        assert!((m_star(&grid).unwrap() - 2_878_231.366_242_557).abs() < 1e-6);
    }

    #[test]
    fn zero_divergence() {
        assert_eq!(m_star(&ring(100, 0.5)), Err(Error::ZeroDivergence));
    }

    #[test]
    fn unsupported_combinations() {
        let grid_multi = LimitSpec {
            family: Family::Grid,
            n: 100,
            locality: Locality::Beta(0.2),
            noise: NoiseModel::Multilink { width: 3, p: 0.1 },
        };
        assert!(matches!(m_star(&grid_multi), Err(Error::UnsupportedCombination(_))));
        let grid_gamma = LimitSpec {
            family: Family::Grid,
            n: 100,
            locality: Locality::Gamma(0.5),
            noise: NoiseModel::Theta(0.1),
        };
        assert!(matches!(m_star(&grid_gamma), Err(Error::UnsupportedCombination(_))));
    }

    #[test]
    fn regime_inference_from_radius() {
        let n = 100_000;
        let spec = |family, r| LimitSpec {
            family,
            n,
            locality: Locality::Radius(r),
            noise: NoiseModel::Theta(0.1),
        };
        let rep = evaluate(&spec(Family::Line, 316), DEFAULT_REGIME_THRESHOLD).unwrap();
        assert!(matches!(rep.regime, Regime::LineBeta(b) if (b - 0.5).abs() < 1e-3));
        let rep = evaluate(&spec(Family::Line, 60_000), DEFAULT_REGIME_THRESHOLD).unwrap();
        assert_eq!(rep.regime, Regime::LineGamma(0.6));
        let rep = evaluate(&spec(Family::Grid, 18), DEFAULT_REGIME_THRESHOLD).unwrap();
        assert!(matches!(rep.regime, Regime::GridBeta(_)));
        assert!(evaluate(&spec(Family::Grid, 300), DEFAULT_REGIME_THRESHOLD).is_err());
    }

    #[test]
    fn line_and_grid_hinges() {
        let base = m_star(&ring(10_000, 0.1)).unwrap();
        let at = |family, beta| {
            m_star(&LimitSpec {
                family,
                locality: Locality::Beta(beta),
                ..ring(10_000, 0.1)
            })
            .unwrap()
        };
        // flat below the hinge, equal to the ring value
        for beta in [0.1, 0.3, 0.49, 0.5] {
            assert!((at(Family::Line, beta) - base).abs() < 1e-6);
        }
        assert!(at(Family::Line, 0.6) > base);
        for beta in [0.05, 0.1, 0.125] {
            assert!((at(Family::Grid, beta) - base).abs() < 1e-6);
        }
        assert!(at(Family::Grid, 0.2) > base);
        // continuity across the hinge
        assert!((at(Family::Line, 0.5 + 1e-9) - base).abs() / base < 1e-8);
        assert!((at(Family::Grid, 0.125 + 1e-9) - base).abs() / base < 1e-7);
    }

    #[test]
    fn multilink_lower_barrier() {
        for p in [0.01, 0.05, 0.1, 0.25] {
            let n = 10_000;
            let barrier = (n as f64) * (n as f64).ln() / hellinger(kl_half(p).unwrap());
            let mut prev = f64::INFINITY;
            for width in 2..=40 {
                let spec = LimitSpec {
                    family: Family::Ring,
                    n,
                    locality: Locality::Radius(50),
                    noise: NoiseModel::Multilink { width, p },
                };
                let lm = width as f64 * m_star(&spec).unwrap();
                assert!(lm <= prev * (1.0 + 1e-12), "p={p} L={width}");
                assert!(lm >= barrier * (1.0 - 1e-12), "p={p} L={width}");
                prev = lm;
            }
        }
    }

    #[test]
    fn genie_exponent() {
        assert_eq!(genie_error_exponent(5.0, 0.0), 0.0);
        let ln_n = (1e5f64).ln();
        assert!((genie_error_exponent(ln_n, 800.0) - ln_n).abs() < 1e-12);
        assert!(genie_error_exponent(2.0, 0.5) > genie_error_exponent(1.0, 0.5));
        assert!(genie_error_exponent(1.0, 0.6) > genie_error_exponent(1.0, 0.5));
    }

    #[test]
    fn weight_ratio_flag() {
        assert!(weight_ratio_warning(10.0).is_none());
        assert!(weight_ratio_warning(1e6).is_some());
    }
}
