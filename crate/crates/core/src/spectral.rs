//! Spectral initialization: the signed sample matrix on a vertex subset and
//! the sign pattern of its leading eigenvector.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::incidence::PairIncidence;
use crate::sampling::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixMode {
    /// `A_ij` from the first sample on the edge only.
    #[default]
    FirstSample,
    /// `A_ij` = (# zero samples) - (# one samples).
    Aggregate,
}

impl std::str::FromStr for MatrixMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "first" | "first-sample" => Ok(MatrixMode::FirstSample),
            "aggregate" => Ok(MatrixMode::Aggregate),
            other => Err(format!("unknown matrix mode '{other}'")),
        }
    }
}

/// Sparse symmetric matrix in CSR form over local indices `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSampleMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    val: Vec<f64>,
}

impl SignedSampleMatrix {
    /// Builds from `(i, j, value)` triples with `i != j`; the transpose is added.
    pub fn from_triples(dim: usize, triples: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
        for &(i, j, x) in triples {
            if i != j && x != 0.0 {
                rows[i].push((j as u32, x));
                rows[j].push((i as u32, x));
            }
        }
        Self::from_rows(rows)
    }

    fn from_rows(mut rows: Vec<Vec<(u32, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut col = Vec::new();
        let mut val = Vec::new();
        for row in &mut rows {
            row.sort_unstable_by_key(|e| e.0);
            for &(c, x) in row.iter() {
                col.push(c);
                val.push(x);
            }
            row_ptr.push(col.len());
        }
        SignedSampleMatrix {
            dim: rows.len(),
            row_ptr,
            col,
            val,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.col.len()
    }

    pub fn is_zero(&self) -> bool {
        self.val.iter().all(|&x| x == 0.0)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col[range.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.val[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (i, row) in out.iter_mut().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row[self.col[k] as usize] = self.val[k];
            }
        }
        out
    }

    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.val[self.row_ptr[i]..self.row_ptr[i + 1]].iter().map(|x| x.abs()).sum())
            .fold(0.0, f64::max)
    }

    /// `out = (A + shift I) x`.
    fn shifted_mul(&self, x: &[f64], shift: f64, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = shift * x[i];
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            *o = acc;
        }
    }
}

/// Sample matrix on `subset` (local index = position in `subset`) from the
/// full sample list.
pub fn build_sample_matrix(
    samples: &SampleSet,
    subset: &[usize],
    mode: MatrixMode,
) -> SignedSampleMatrix {
    build_from_incidence(&PairIncidence::new(samples), subset, mode)
}

/// Same as [`build_sample_matrix`] but touches only samples incident to
/// `subset`, so repeated windows cost time proportional to their degree.
pub fn build_from_incidence(
    incidence: &PairIncidence,
    subset: &[usize],
    mode: MatrixMode,
) -> SignedSampleMatrix {
    let local: HashMap<u32, u32> = subset
        .iter()
        .enumerate()
        .map(|(i, &v)| (v as u32, i as u32))
        .collect();
    let mut rows = Vec::with_capacity(subset.len());
    for &v in subset {
        let (nbrs, vals) = incidence.of(v);
        let mut row: Vec<(u32, f64)> = Vec::new();
        let mut k = 0;
        while k < nbrs.len() {
            let u = nbrs[k];
            let mut end = k + 1;
            while end < nbrs.len() && nbrs[end] == u {
                end += 1;
            }
            if let Some(&j) = local.get(&u) {
                let sign = |y: u8| if y == 0 { 1.0 } else { -1.0 };
                let x = match mode {
                    MatrixMode::FirstSample => sign(vals[k]),
                    MatrixMode::Aggregate => vals[k..end].iter().map(|&y| sign(y)).sum(),
                };
                if x != 0.0 && u as usize != v {
                    row.push((j, x));
                }
            }
            k = end;
        }
        rows.push(row);
    }
    SignedSampleMatrix::from_rows(rows)
}

/// Outcome of the power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEstimate {
    /// `1` iff the eigenvector entry is `>= 0`, indexed like the subset.
    pub bits: Vec<u8>,
    pub vector: Vec<f64>,
    /// Rayleigh quotient of `A` at the returned vector.
    pub eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The matrix was all zero; `bits` is all zero.
    pub degenerate: bool,
}

pub const DEFAULT_TOL: f64 = 1e-8;

/// `100 * ceil(ln dim)`, at least 100.
pub fn default_max_iter(dim: usize) -> usize {
    100 * ((dim.max(2) as f64).ln().ceil() as usize).max(1)
}

/// Leading eigenvector signs with a random Gaussian start vector.
pub fn leading_eigvec_signs<R: Rng + ?Sized>(
    matrix: &SignedSampleMatrix,
    rng: &mut R,
    tol: f64,
    max_iter: usize,
) -> SpectralEstimate {
    let start: Vec<f64> = (0..matrix.dim()).map(|_| rng.sample(StandardNormal)).collect();
    leading_eigvec_from(matrix, start, tol, max_iter)
}

/// Power iteration on `A + sI`, `s = 1 + max_i sum_j |A_ij|`, from `start`.
pub fn leading_eigvec_from(
    matrix: &SignedSampleMatrix,
    start: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> SpectralEstimate {
    let dim = matrix.dim();
    assert_eq!(start.len(), dim, "start vector length");
    if dim == 1 {
        return SpectralEstimate {
            bits: vec![1],
            vector: vec![1.0],
            eigenvalue: 0.0,
            iterations: 0,
            converged: true,
            degenerate: false,
        };
    }
    if matrix.is_zero() {
        return SpectralEstimate {
            bits: vec![0; dim],
            vector: vec![0.0; dim],
            eigenvalue: 0.0,
            iterations: 0,
            converged: true,
            degenerate: true,
        };
    }
    let shift = 1.0 + matrix.max_abs_row_sum();
    let mut x = start;
    if normalize(&mut x) == 0.0 {
        x = vec![1.0 / (dim as f64).sqrt(); dim];
    }
    let mut y = vec![0.0; dim];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        matrix.shifted_mul(&x, shift, &mut y);
        normalize(&mut y);
        iterations += 1;
        let diff: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        std::mem::swap(&mut x, &mut y);
        if diff < tol {
            converged = true;
            break;
        }
    }
    matrix.shifted_mul(&x, 0.0, &mut y);
    let eigenvalue = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    SpectralEstimate {
        bits: x.iter().map(|&u| u8::from(u >= 0.0)).collect(),
        vector: x,
        eigenvalue,
        iterations,
        converged,
        degenerate: false,
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}
