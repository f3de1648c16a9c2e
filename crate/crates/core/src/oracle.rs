//! Independent numerical checks: a dense eigensolver, grid-search Chernoff
//! information and empirical noise rates. Production code paths never call
//! into this module.

use std::fmt;

use crate::error::{Error, Result};
use crate::labeling::Labeling;
use crate::limits::{self, FiniteDistPair};
use crate::sampling::SampleSet;

pub const DENSE_MAX_DIM: usize = 64;

/// Algebraically largest eigenpair of a symmetric matrix by cyclic Jacobi
/// rotations (until the off-diagonal norm is below `1e-12`).
pub fn dense_top_eigvec(matrix: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = matrix.len();
    if n > DENSE_MAX_DIM {
        return Err(Error::TooLarge { n, max: DENSE_MAX_DIM });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::LengthMismatch(row.len(), n));
        }
        for j in 0..n {
            if (row[j] - matrix[j][i]).abs() > 1e-12 * (1.0 + row[j].abs()) {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let off = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..100 {
        if off(&a) < 1e-12 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let top = (0..n)
        .max_by(|&i, &j| a[i][i].total_cmp(&a[j][j]))
        .expect("n >= 1");
    Ok((a[top][top], v.iter().map(|row| row[top]).collect()))
}

/// `-min` of the log-affinity over `tau = k / gridsize`, `k = 0..=gridsize`.
pub fn chernoff_tau_grid(pair: &FiniteDistPair, gridsize: usize) -> Result<f64> {
    pair.validate()?;
    if gridsize < 1000 {
        return Err(Error::InvalidParameter(format!("grid size {gridsize} < 1000")));
    }
    let best = (0..=gridsize)
        .map(|k| pair.log_affinity(k as f64 / gridsize as f64))
        .fold(f64::INFINITY, f64::min);
    Ok((-best).max(0.0))
}

/// Fraction of samples whose value differs from the true parity.
pub fn empirical_flip_rate(samples: &SampleSet, truth: &Labeling) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if truth.len() != samples.n() {
        return Err(Error::LengthMismatch(truth.len(), samples.n()));
    }
    let flips = samples
        .samples()
        .iter()
        .filter(|s| s.value != truth.get(s.u as usize) ^ truth.get(s.v as usize))
        .count();
    Ok(flips as f64 / samples.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        OracleReport {
            name: name.into(),
            observed,
            expected,
            tolerance,
            pass: (observed - expected).abs() <= tolerance,
        }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: observed {:.15e} expected {:.15e} tol {:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected,
            self.tolerance
        )
    }
}

/// Angle between two vectors, ignoring sign.
pub fn unsigned_angle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot.abs() / (na * nb)).min(1.0).acos()
}

/// Self-contained consistency checks between the production numerics and
/// the oracles above.
pub fn run_selftest() -> Vec<OracleReport> {
    use crate::limits::{kl_half, multilink_chernoff, multilink_distributions};
    use crate::rng::stream_rng;
    use crate::sampling::draw_samples;
    use crate::spectral::{leading_eigvec_from, SignedSampleMatrix};
    use crate::topology::{build_topology, Family};
    use rand::Rng;

    let mut out = Vec::new();

    let bern = FiniteDistPair::bernoulli(0.1, 0.9).expect("valid");
    out.push(OracleReport::new(
        "tau-grid Bern(0.1) vs Bern(0.9)",
        chernoff_tau_grid(&bern, 100_000).expect("valid"),
        kl_half(0.1).expect("valid"),
        1e-6,
    ));

    for width in [2, 5, 10] {
        for p in [0.01, 0.1, 0.25] {
            let pair = multilink_distributions(width, p).expect("valid");
            let golden = limits::chernoff_information(&pair, 1e-12).expect("valid");
            let closed = multilink_chernoff(width, p).expect("valid");
            out.push(OracleReport::new(
                format!("closed form vs golden section L={width} p={p}"),
                closed,
                golden,
                1e-9,
            ));
            out.push(OracleReport::new(
                format!("golden section vs tau grid L={width} p={p}"),
                golden,
                chernoff_tau_grid(&pair, 10_000).expect("valid"),
                1e-6,
            ));
        }
    }

    let mut rng = stream_rng(20_240_501, 0);
    for trial in 0..3 {
        let dim = 5;
        let mut dense = vec![vec![0.0; dim]; dim];
        let mut triples = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let x: f64 = rng.random_range(-1.0..1.0);
                dense[i][j] = x;
                dense[j][i] = x;
                triples.push((i, j, x));
            }
        }
        let (lambda, vec) = dense_top_eigvec(&dense).expect("small");
        let sparse = SignedSampleMatrix::from_triples(dim, &triples);
        let start = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let est = leading_eigvec_from(&sparse, start, 1e-15, 200_000);
        out.push(OracleReport::new(
            format!("power iteration vs Jacobi eigenvalue #{trial}"),
            est.eigenvalue,
            lambda,
            1e-9,
        ));
        out.push(OracleReport::new(
            format!("power iteration vs Jacobi eigenvector angle #{trial}"),
            unsigned_angle(&est.vector, &vec),
            0.0,
            1e-6,
        ));
    }

    let topo = build_topology(Family::Ring, 2000, 20, None).expect("valid");
    let truth = Labeling::random(2000, &mut stream_rng(5, 0));
    let samples = draw_samples(&topo, &truth, 0.1, 100_000.0, &mut stream_rng(5, 1)).expect("valid");
    out.push(OracleReport::new(
        "empirical flip rate theta=0.1",
        empirical_flip_rate(&samples, &truth).expect("nonempty"),
        0.1,
        0.005,
    ));
    out
}
