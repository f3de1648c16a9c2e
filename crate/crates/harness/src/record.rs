use std::fmt::Write as _;

use locrec::{Algorithm, Family, Labeling};

pub const CSV_HEADER: &str =
    "family,n,r,theta,p,L,algo,m_ratio,m,trial,seed,success,hamming,switch_err,iters,runtime_ms";

/// One Monte Carlo outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub theta: Option<f64>,
    pub p: Option<f64>,
    /// Sample width; the mean width for variable-width samples.
    pub width: Option<f64>,
    pub algorithm: Algorithm,
    pub m_ratio: f64,
    pub m: f64,
    pub trial: usize,
    pub seed: u64,
    pub hamming: usize,
    pub switch_err: f64,
    pub iterations: usize,
    pub runtime_ms: Option<f64>,
}

impl TrialRecord {
    pub fn success(&self) -> bool {
        self.hamming == 0
    }

    fn prefix(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{:.1}",
            self.family,
            self.n,
            self.r,
            opt(self.theta),
            opt(self.p),
            opt(self.width),
            self.algorithm,
            self.m_ratio,
            self.m
        )
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{},{}",
            self.prefix(),
            self.trial,
            self.seed,
            u8::from(self.success()),
            self.hamming,
            self.switch_err,
            self.iterations,
            self.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default()
        )
    }
}

/// Summary row for the records of one ratio: success rate, mean Hamming
/// distance, mean switch error, median iterations and median runtime.
pub fn summary_row(records: &[TrialRecord]) -> Option<String> {
    let first = records.first()?;
    let k = records.len() as f64;
    let rate = records.iter().filter(|r| r.success()).count() as f64 / k;
    let mean_hamming = records.iter().map(|r| r.hamming as f64).sum::<f64>() / k;
    let mean_switch = records.iter().map(|r| r.switch_err).sum::<f64>() / k;
    let mut iters: Vec<usize> = records.iter().map(|r| r.iterations).collect();
    iters.sort_unstable();
    let runtime = if records.iter().all(|r| r.runtime_ms.is_some()) {
        let mut t: Vec<f64> = records.iter().filter_map(|r| r.runtime_ms).collect();
        t.sort_by(f64::total_cmp);
        format!("{:.3}", t[t.len() / 2])
    } else {
        String::new()
    };
    Some(format!(
        "{},summary,,{},{:.3},{:.6},{},{}",
        first.prefix(),
        rate,
        mean_hamming,
        mean_switch,
        iters[iters.len() / 2],
        runtime
    ))
}

/// Header, trial rows, and one summary row after each run of equal `m_ratio`.
pub fn render_csv(records: &[TrialRecord], summaries: bool) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    let mut start = 0;
    while start < records.len() {
        let mut end = start + 1;
        while end < records.len() && records[end].m_ratio == records[start].m_ratio {
            end += 1;
        }
        for rec in &records[start..end] {
            writeln!(out, "{}", rec.csv_row()).unwrap();
        }
        if summaries {
            writeln!(out, "{}", summary_row(&records[start..end]).expect("nonempty")).unwrap();
        }
        start = end;
    }
    out
}

/// Fraction of adjacent positions where the flip-aligned estimate switches
/// between agreeing and disagreeing with the truth.
pub fn switch_error(estimate: &Labeling, truth: &Labeling) -> locrec::Result<f64> {
    let h = estimate.hamming(truth)?;
    let n = truth.len();
    if n < 2 {
        return Err(locrec::Error::InvalidParameter(format!(
            "switch error needs at least 2 positions, got {n}"
        )));
    }
    let flip = u8::from(2 * h > n);
    let agree = |i: usize| estimate.get(i) ^ flip == truth.get(i);
    let switches = (1..n).filter(|&i| agree(i) != agree(i - 1)).count();
    Ok(switches as f64 / (n - 1) as f64)
}
