//! L-wise hyper-edges over a ring or line base graph.

use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::Rng;
use rand_distr::Poisson;

use crate::error::{Error, Result};
use crate::topology::{build_topology, Family, MeasurementTopology};

const MAX_EXPLICIT_UNIVERSE: usize = 2_000_000;

/// Which hyper-edges can carry a multi-linked sample.
#[derive(Debug, Clone, PartialEq)]
pub enum HyperEdgePolicy {
    /// Every `width`-subset of each window `{v, v+1, ..., v+r}`, drawn uniformly.
    Window { width: usize },
    /// A segment of `length` consecutive vertices is picked uniformly; the
    /// sample then covers `Poisson(reads_mean)` distinct vertices of it.
    Fragment { length: usize, reads_mean: f64 },
}

#[derive(Debug, Clone)]
enum Universe {
    /// Canonical first vertex `v` plus a subset of `v+1..=v+r` (no wrap ambiguity).
    Implicit { starts: Option<WeightedIndex<f64>> },
    Explicit(Vec<Vec<u32>>),
    Segments,
}

#[derive(Debug, Clone)]
pub struct HyperTopology {
    base: MeasurementTopology,
    policy: HyperEdgePolicy,
    universe: Universe,
    universe_size: f64,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Build the hyper-edge universe on top of a ring (or line) `R_r`.
pub fn build_hyper_topology(
    base_family: Family,
    n: usize,
    r: usize,
    policy: HyperEdgePolicy,
) -> Result<HyperTopology> {
    if !matches!(base_family, Family::Ring | Family::Line) {
        return Err(Error::InvalidParameter(format!(
            "multi-linked sampling needs a ring or line base, got {base_family}"
        )));
    }
    let base = build_topology(base_family, n, r, None)?;
    let (universe, universe_size) = match policy {
        HyperEdgePolicy::Window { width } => {
            if width < 2 {
                return Err(Error::InvalidParameter(format!("need L >= 2, got {width}")));
            }
            if width > r + 1 || width > n {
                return Err(Error::WidthExceedsRadius { width, r });
            }
            match base_family {
                Family::Ring if 2 * r < n => (
                    Universe::Implicit { starts: None },
                    n as f64 * binomial(r, width - 1),
                ),
                Family::Ring => {
                    let sets = enumerate_ring_windows(n, r, width)?;
                    let size = sets.len() as f64;
                    (Universe::Explicit(sets), size)
                }
                _ => {
                    let weights: Vec<f64> = (0..n)
                        .map(|v| binomial(r.min(n - 1 - v), width - 1))
                        .collect();
                    let size = weights.iter().sum();
                    let starts = WeightedIndex::new(&weights)
                        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                    (Universe::Implicit { starts: Some(starts) }, size)
                }
            }
        }
        HyperEdgePolicy::Fragment { length, reads_mean } => {
            if length < 2 || length > r + 1 || length > n {
                return Err(Error::WidthExceedsRadius { width: length, r });
            }
            if !(reads_mean > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "reads per fragment must be positive, got {reads_mean}"
                )));
            }
            let segments = match base_family {
                Family::Ring => n,
                _ => n - length + 1,
            };
            (Universe::Segments, segments as f64)
        }
    };
    Ok(HyperTopology {
        base,
        policy,
        universe,
        universe_size,
    })
}

fn enumerate_ring_windows(n: usize, r: usize, width: usize) -> Result<Vec<Vec<u32>>> {
    let window = (r + 1).min(n);
    let per_window = binomial(window, width);
    if per_window * n as f64 > MAX_EXPLICIT_UNIVERSE as f64 {
        return Err(Error::UniverseTooLarge((per_window * n as f64) as usize));
    }
    let mut sets = BTreeSet::new();
    let mut combo: Vec<usize> = (0..width).collect();
    for v in 0..n {
        combo.iter_mut().enumerate().for_each(|(i, c)| *c = i);
        loop {
            let mut set: Vec<u32> = combo.iter().map(|&o| ((v + o) % n) as u32).collect();
            set.sort_unstable();
            sets.insert(set);
            // next combination of `width` offsets out of `window`
            let mut i = width;
            while i > 0 && combo[i - 1] == window - width + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..width {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Ok(sets.into_iter().collect())
}

impl HyperTopology {
    pub fn base(&self) -> &MeasurementTopology {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn policy(&self) -> &HyperEdgePolicy {
        &self.policy
    }

    /// Fixed hyper-edge width, `None` for fragment sampling.
    pub fn width(&self) -> Option<usize> {
        match self.policy {
            HyperEdgePolicy::Window { width } => Some(width),
            HyperEdgePolicy::Fragment { .. } => None,
        }
    }

    /// Mean number of vertices touched per sample.
    pub fn mean_width(&self) -> f64 {
        match self.policy {
            HyperEdgePolicy::Window { width } => width as f64,
            HyperEdgePolicy::Fragment { length, reads_mean } => reads_mean.min(length as f64),
        }
    }

    /// Number of distinct hyper-edges (or segments, for fragments).
    pub fn universe_size(&self) -> f64 {
        self.universe_size
    }

    /// Distinct vertices, pairwise adjacent in the base graph.
    pub fn is_valid_hyper_edge(&self, vertices: &[usize]) -> bool {
        for (i, &a) in vertices.iter().enumerate() {
            if a >= self.n() {
                return false;
            }
            for &b in &vertices[i + 1..] {
                if a == b || !self.base.is_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Draw one hyper-edge; vertices come back sorted by id.
    pub fn sample_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let n = self.n();
        let r = self.base.radius();
        let mut out: Vec<u32> = match (&self.policy, &self.universe) {
            (HyperEdgePolicy::Window { width }, Universe::Implicit { starts }) => {
                let (v, span) = match starts {
                    Some(w) => {
                        let v = w.sample(rng);
                        (v, r.min(n - 1 - v))
                    }
                    None => (rng.random_range(0..n), r),
                };
                let mut set = Vec::with_capacity(*width);
                set.push(v as u32);
                for o in index::sample(rng, span, width - 1) {
                    set.push(((v + o + 1) % n) as u32);
                }
                set
            }
            (HyperEdgePolicy::Window { .. }, Universe::Explicit(sets)) => {
                sets[rng.random_range(0..sets.len())].clone()
            }
            (HyperEdgePolicy::Fragment { length, reads_mean }, _) => {
                let start = rng.random_range(0..self.universe_size as usize);
                let k = Poisson::new(*reads_mean)
                    .map(|p| p.sample(rng) as usize)
                    .unwrap_or(0)
                    .min(*length);
                index::sample(rng, *length, k)
                    .into_iter()
                    .map(|o| ((start + o) % n) as u32)
                    .collect()
            }
            _ => unreachable!("policy and universe are built together"),
        };
        out.sort_unstable();
        out
    }

    /// Every hyper-edge of a window policy, each once. Small inputs only.
    pub fn enumerate(&self) -> Result<Vec<Vec<u32>>> {
        let width = match self.policy {
            HyperEdgePolicy::Window { width } => width,
            HyperEdgePolicy::Fragment { .. } => {
                return Err(Error::InvalidParameter(
                    "fragment universes are not enumerable".into(),
                ))
            }
        };
        if let Universe::Explicit(sets) = &self.universe {
            return Ok(sets.clone());
        }
        if self.universe_size > MAX_EXPLICIT_UNIVERSE as f64 {
            return Err(Error::UniverseTooLarge(self.universe_size as usize));
        }
        let n = self.n();
        let r = self.base.radius();
        let ring = self.base.family() == Family::Ring;
        let mut out = Vec::new();
        for v in 0..n {
            let span = if ring { r } else { r.min(n - 1 - v) };
            if span < width - 1 {
                continue;
            }
            let mut combo: Vec<usize> = (0..width - 1).collect();
            loop {
                let mut set = vec![v as u32];
                set.extend(combo.iter().map(|&o| ((v + o + 1) % n) as u32));
                set.sort_unstable();
                out.push(set);
                let k = width - 1;
                let mut i = k;
                while i > 0 && combo[i - 1] == span - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                combo[i - 1] += 1;
                for j in i..k {
                    combo[j] = combo[j - 1] + 1;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    #[test]
    fn full_ring_single_hyper_edge() {
        let h = build_hyper_topology(Family::Ring, 5, 4, HyperEdgePolicy::Window { width: 5 })
            .unwrap();
        assert_eq!(h.enumerate().unwrap(), vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(h.universe_size(), 1.0);
    }

    #[test]
    fn mutual_connectivity() {
        let h = build_hyper_topology(Family::Ring, 6, 2, HyperEdgePolicy::Window { width: 3 })
            .unwrap();
        assert!(h.is_valid_hyper_edge(&[0, 1, 2]));
        assert!(!h.is_valid_hyper_edge(&[0, 1, 3]));
        assert!(!h.is_valid_hyper_edge(&[0, 0, 1]));
    }

    #[test]
    fn width_two_is_the_edge_set() {
        let h = build_hyper_topology(Family::Ring, 10, 3, HyperEdgePolicy::Window { width: 2 })
            .unwrap();
        let hyper: BTreeSet<(usize, usize)> = h
            .enumerate()
            .unwrap()
            .into_iter()
            .map(|e| (e[0] as usize, e[1] as usize))
            .collect();
        let edges: BTreeSet<(usize, usize)> = h.base().edges().collect();
        assert_eq!(hyper, edges);
        assert_eq!(h.universe_size(), 30.0);
    }

    #[test]
    fn width_must_fit_window() {
        assert!(matches!(
            build_hyper_topology(Family::Ring, 20, 3, HyperEdgePolicy::Window { width: 5 }),
            Err(Error::WidthExceedsRadius { .. })
        ));
        assert!(matches!(
            build_hyper_topology(Family::Ring, 20, 3, HyperEdgePolicy::Window { width: 1 }),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn enumerated_universe_is_valid_and_distinct() {
        for (family, n, r, w) in [
            (Family::Ring, 12, 4, 3),
            (Family::Line, 12, 4, 3),
            (Family::Ring, 7, 4, 3),
        ] {
            let h = build_hyper_topology(family, n, r, HyperEdgePolicy::Window { width: w })
                .unwrap();
            let sets = h.enumerate().unwrap();
            let distinct: BTreeSet<_> = sets.iter().cloned().collect();
            assert_eq!(distinct.len(), sets.len());
            assert_eq!(sets.len() as f64, h.universe_size());
            for s in &sets {
                let s: Vec<usize> = s.iter().map(|&v| v as usize).collect();
                assert!(h.is_valid_hyper_edge(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn sampling_is_uniform_over_universe() {
        for family in [Family::Ring, Family::Line] {
            let h = build_hyper_topology(family, 9, 3, HyperEdgePolicy::Window { width: 3 })
                .unwrap();
            let universe = h.enumerate().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let draws = 60_000;
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            for _ in 0..draws {
                let e = h.sample_edge(&mut rng);
                *counts.entry(e).or_default() += 1;
            }
            assert_eq!(counts.len(), universe.len());
            let expected = draws as f64 / universe.len() as f64;
            for s in &universe {
                let c = counts[s] as f64;
                assert!((c - expected).abs() < 5.0 * expected.sqrt(), "{family} {s:?} {c}");
            }
        }
    }

    #[test]
    fn fragments_stay_inside_segment() {
        let h = build_hyper_topology(
            Family::Line,
            500,
            99,
            HyperEdgePolicy::Fragment {
                length: 100,
                reads_mean: 9.0,
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut total = 0;
        for _ in 0..2000 {
            let e = h.sample_edge(&mut rng);
            total += e.len();
            if let (Some(a), Some(b)) = (e.first(), e.last()) {
                assert!(b - a < 100);
            }
            let v: Vec<usize> = e.iter().map(|&x| x as usize).collect();
            assert!(h.is_valid_hyper_edge(&v));
        }
        let mean = total as f64 / 2000.0;
        assert!((mean - 9.0).abs() < 0.3, "{mean}");
    }
}
