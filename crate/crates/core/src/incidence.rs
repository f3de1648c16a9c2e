//! Per-vertex views of a sample set.

use crate::sampling::{HyperSampleSet, SampleSet};

/// CSR adjacency of pairwise samples: for every vertex, the other endpoint
/// and value of each incident sample, sorted by neighbor. Repeated samples
/// on an edge keep their original relative order.
#[derive(Debug, Clone)]
pub struct PairIncidence {
    offsets: Vec<usize>,
    neighbor: Vec<u32>,
    value: Vec<u8>,
}

impl PairIncidence {
    pub fn new(samples: &SampleSet) -> Self {
        let n = samples.n();
        let mut offsets = vec![0usize; n + 1];
        for s in samples.samples() {
            offsets[s.u as usize + 1] += 1;
            offsets[s.v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let total = offsets[n];
        let mut cursor = offsets.clone();
        let mut neighbor = vec![0u32; total];
        let mut value = vec![0u8; total];
        // samples are sorted by (u, v), so every list fills in neighbor order
        for s in samples.samples() {
            for (a, b) in [(s.u, s.v), (s.v, s.u)] {
                let slot = cursor[a as usize];
                neighbor[slot] = b;
                value[slot] = s.value;
                cursor[a as usize] += 1;
            }
        }
        PairIncidence {
            offsets,
            neighbor,
            value,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_raw(offsets: Vec<usize>, neighbor: Vec<u32>, value: Vec<u8>) -> Self {
        PairIncidence {
            offsets,
            neighbor,
            value,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `(neighbors, values)` of the samples touching `v`.
    pub fn of(&self, v: usize) -> (&[u32], &[u8]) {
        let range = self.offsets[v]..self.offsets[v + 1];
        (&self.neighbor[range.clone()], &self.value[range])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Vertex to incident hyper-sample ids.
#[derive(Debug, Clone)]
pub struct HyperIncidence {
    offsets: Vec<usize>,
    sample: Vec<u32>,
}

impl HyperIncidence {
    pub fn new(samples: &HyperSampleSet) -> Self {
        let n = samples.n();
        let mut offsets = vec![0usize; n + 1];
        for (vs, _) in samples.iter() {
            for &v in vs {
                offsets[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut sample = vec![0u32; offsets[n]];
        for (idx, (vs, _)) in samples.iter().enumerate() {
            for &v in vs {
                sample[cursor[v as usize]] = idx as u32;
                cursor[v as usize] += 1;
            }
        }
        HyperIncidence { offsets, sample }
    }

    pub fn of(&self, v: usize) -> &[u32] {
        &self.sample[self.offsets[v]..self.offsets[v + 1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::ParitySample;

    #[test]
    fn pair_lists_sorted_and_complete() {
        let set = SampleSet::new(
            5,
            vec![
                ParitySample::new(3, 1, 1),
                ParitySample::new(0, 1, 0),
                ParitySample::new(1, 2, 1),
                ParitySample::new(1, 0, 1),
            ],
            0.1,
        );
        let inc = PairIncidence::new(&set);
        let (nb, val) = inc.of(1);
        assert_eq!(nb, &[0, 0, 2, 3]);
        assert_eq!(val, &[0, 1, 1, 1]);
        assert_eq!(inc.degree(4), 0);
        assert_eq!(inc.of(0).0, &[1, 1]);
    }

    #[test]
    fn hyper_lists() {
        let mut set = HyperSampleSet::empty(4, 0.1);
        set.push(&[0, 1, 2], &[0, 0, 1]);
        set.push(&[1, 3], &[1, 1]);
        let inc = HyperIncidence::new(&set);
        assert_eq!(inc.of(1), &[0, 1]);
        assert_eq!(inc.of(3), &[1]);
        assert!(inc.of(0) == [0]);
    }
}
