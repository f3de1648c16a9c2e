//! Measurement graphs with locality.
//!
//! Every supported family is translation-structured, so the edge set is kept
//! implicitly as a list of [`EdgeClass`]es: all edges sharing one displacement
//! (index distance for 1-D families, lattice offset for grids). A class knows
//! how many edges it holds and can map an index in `0..count` to a concrete
//! vertex pair. This keeps a ring with `r = n^0.75` at `n = 10^5` (half a
//! billion edges) at a few kilobytes, and lets the sampler draw a uniformly
//! random edge in `O(log #classes)`.
//!
//! Vertices are 0-indexed in this API. The text sample format and the CLI use
//! 1-indexed vertices.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Complete,
    Line,
    Ring,
    Grid,
    SmallWorld,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Line => "line",
            Family::Ring => "ring",
            Family::Grid => "grid",
            Family::SmallWorld => "smallworld",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(Family::Complete),
            "line" => Ok(Family::Line),
            "ring" => Ok(Family::Ring),
            "grid" => Ok(Family::Grid),
            "smallworld" | "small-world" | "small_world" => Ok(Family::SmallWorld),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

/// How edge classes map to vertex pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Geometry {
    /// Indices on a cycle; class `d` holds pairs at circular distance `d`.
    Circulant,
    /// Indices on a path; class `d` holds pairs `(k, k + d)`.
    Path,
    /// `side x side` integer lattice, vertex id `y * side + x`.
    Lattice { side: usize },
}

/// All edges sharing one displacement.
///
/// For 1-D families `dy == 0` and `dx` is the index distance. For grids
/// `(dx, dy)` is the lattice offset from the first endpoint to the second,
/// normalized to the half-plane `dx > 0 || (dx == 0 && dy > 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeClass {
    pub dx: i64,
    pub dy: i64,
    pub count: u64,
    pub weight: f64,
}

impl EdgeClass {
    /// Euclidean length of the displacement.
    pub fn distance(&self) -> f64 {
        ((self.dx * self.dx + self.dy * self.dy) as f64).sqrt()
    }
}

/// Small-world rates: `w0` on long-range (complete-only) pairs, `w1` on ring pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldWeights {
    pub w0: f64,
    pub w1: f64,
    /// Bound `C` in the check `w0 * n <= C * w1 * r`.
    pub ratio_bound: f64,
}

impl SmallWorldWeights {
    pub fn new(w0: f64, w1: f64) -> Self {
        SmallWorldWeights {
            w0,
            w1,
            ratio_bound: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementTopology {
    n: usize,
    family: Family,
    r: usize,
    geometry: Geometry,
    classes: Vec<EdgeClass>,
    lattice_index: HashMap<(i64, i64), usize>,
    order: Vec<u32>,
    position: Vec<u32>,
    core: usize,
}

/// Construct one of the five measurement-graph families.
///
/// `r` is the index radius for lines and rings and the Euclidean radius for
/// grids. It is ignored for complete graphs. Small-world graphs take their
/// two rates from `small_world`; every other family gets unit weights.
pub fn build_topology(
    family: Family,
    n: usize,
    r: usize,
    small_world: Option<SmallWorldWeights>,
) -> Result<MeasurementTopology> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    if r < 1 && family != Family::Complete {
        return Err(Error::InvalidParameter("need r >= 1".into()));
    }
    let mut lattice_index = HashMap::new();
    let (geometry, classes, r, core) = match family {
        Family::Ring => {
            if r >= n {
                return Err(Error::RadiusTooLarge { n, r });
            }
            let classes = circulant_classes(n, r.min(n / 2), |_| 1.0);
            (Geometry::Circulant, classes, r, r)
        }
        Family::Complete => {
            let classes = circulant_classes(n, n / 2, |_| 1.0);
            (Geometry::Circulant, classes, n - 1, n)
        }
        Family::SmallWorld => {
            if r >= n {
                return Err(Error::RadiusTooLarge { n, r });
            }
            let sw = small_world.unwrap_or(SmallWorldWeights::new(r as f64 / n as f64, 1.0));
            if !(sw.w0 > 0.0) || !(sw.w1 > 0.0) {
                return Err(Error::NonpositiveWeight {
                    distance: 0.0,
                    weight: sw.w0.min(sw.w1),
                });
            }
            if sw.w0 * n as f64 > sw.ratio_bound * sw.w1 * r as f64 {
                return Err(Error::WeightRatioUnbounded {
                    w0: sw.w0,
                    w1: sw.w1,
                    n,
                    r,
                    c: sw.ratio_bound,
                });
            }
            let classes =
                circulant_classes(n, n / 2, |d| if d <= r { sw.w1 } else { sw.w0 });
            (Geometry::Circulant, classes, r, r)
        }
        Family::Line => {
            if r >= n {
                return Err(Error::RadiusTooLarge { n, r });
            }
            let classes = (1..=r)
                .map(|d| EdgeClass {
                    dx: d as i64,
                    dy: 0,
                    count: (n - d) as u64,
                    weight: 1.0,
                })
                .collect();
            (Geometry::Path, classes, r, r)
        }
        Family::Grid => {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                return Err(Error::NonSquareGrid(n));
            }
            if r >= side {
                return Err(Error::RadiusTooLarge { n, r });
            }
            let classes = lattice_classes(side, r);
            for (idx, c) in classes.iter().enumerate() {
                lattice_index.insert((c.dx, c.dy), idx);
            }
            (Geometry::Lattice { side }, classes, r, r * r)
        }
    };

    let order: Vec<u32> = match geometry {
        Geometry::Lattice { side } => serpentine_order(side, r),
        _ => (0..n as u32).collect(),
    };
    let mut position = vec![0u32; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v as usize] = pos as u32;
    }

    Ok(MeasurementTopology {
        n,
        family,
        r,
        geometry,
        classes,
        lattice_index,
        order,
        position,
        core: core.min(n),
    })
}

fn circulant_classes(n: usize, max_d: usize, weight: impl Fn(usize) -> f64) -> Vec<EdgeClass> {
    (1..=max_d)
        .map(|d| EdgeClass {
            dx: d as i64,
            dy: 0,
            count: if 2 * d == n { (n / 2) as u64 } else { n as u64 },
            weight: weight(d),
        })
        .collect()
}

fn lattice_classes(side: usize, r: usize) -> Vec<EdgeClass> {
    let r = r as i64;
    let s = side as i64;
    let mut classes = Vec::new();
    for dx in 0..=r {
        for dy in -r..=r {
            if dx == 0 && dy <= 0 {
                continue;
            }
            if dx * dx + dy * dy > r * r {
                continue;
            }
            classes.push(EdgeClass {
                dx,
                dy,
                count: ((s - dx) * (s - dy.abs())) as u64,
                weight: 1.0,
            });
        }
    }
    classes
}

/// Core `r x r` block in the bottom-left corner (row-major), then the rest of
/// the bottom band of height `r` column by column with alternating direction,
/// then the remaining rows boustrophedon, starting from the side where the
/// band finished.
fn serpentine_order(side: usize, r: usize) -> Vec<u32> {
    let id = |x: usize, y: usize| (y * side + x) as u32;
    let mut order = Vec::with_capacity(side * side);
    for y in 0..r {
        for x in 0..r {
            order.push(id(x, y));
        }
    }
    // band columns: start at the top of the band since the core ends there
    let mut downward = true;
    for x in r..side {
        if downward {
            for y in (0..r).rev() {
                order.push(id(x, y));
            }
        } else {
            for y in 0..r {
                order.push(id(x, y));
            }
        }
        downward = !downward;
    }
    let mut leftward = true;
    for y in r..side {
        if leftward {
            for x in (0..side).rev() {
                order.push(id(x, y));
            }
        } else {
            for x in 0..side {
                order.push(id(x, y));
            }
        }
        leftward = !leftward;
    }
    order
}

impl MeasurementTopology {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Locality radius. For complete graphs this is `n - 1`.
    pub fn radius(&self) -> usize {
        self.r
    }

    /// Side length of the lattice for grids.
    pub fn grid_side(&self) -> Option<usize> {
        match self.geometry {
            Geometry::Lattice { side } => Some(side),
            _ => None,
        }
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    /// Recovery order: `order()[k]` is the vertex processed at step `k`.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Inverse of [`order`](Self::order).
    pub fn position(&self, v: usize) -> usize {
        self.position[v] as usize
    }

    pub fn positions(&self) -> &[u32] {
        &self.position
    }

    /// Size of the core prefix of the recovery order.
    pub fn core_size(&self) -> usize {
        self.core
    }

    pub fn core_vertices(&self) -> &[u32] {
        &self.order[..self.core]
    }

    pub fn edge_count(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// `sum_e weight(e)`.
    pub fn total_weight(&self) -> f64 {
        self.classes.iter().map(|c| c.count as f64 * c.weight).sum()
    }

    /// The `k`-th edge of class `class`, `k < classes()[class].count`.
    pub fn class_edge(&self, class: usize, k: u64) -> (usize, usize) {
        let c = &self.classes[class];
        debug_assert!(k < c.count);
        let k = k as usize;
        match self.geometry {
            Geometry::Circulant => (k, (k + c.dx as usize) % self.n),
            Geometry::Path => (k, k + c.dx as usize),
            Geometry::Lattice { side } => {
                let width = side - c.dx as usize;
                let x = k % width;
                let y = k / width + (-c.dy).max(0) as usize;
                let x2 = x + c.dx as usize;
                let y2 = (y as i64 + c.dy) as usize;
                (y * side + x, y2 * side + x2)
            }
        }
    }

    fn coords(&self, v: usize) -> (i64, i64) {
        match self.geometry {
            Geometry::Lattice { side } => ((v % side) as i64, (v / side) as i64),
            _ => (v as i64, 0),
        }
    }

    /// Index of the class holding the pair `{u, v}`, if it is an edge.
    pub fn class_of(&self, u: usize, v: usize) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        match self.geometry {
            Geometry::Circulant => {
                let diff = u.abs_diff(v);
                let d = diff.min(self.n - diff);
                (d <= self.classes.len()).then(|| d - 1)
            }
            Geometry::Path => {
                let d = u.abs_diff(v);
                (d <= self.classes.len()).then(|| d - 1)
            }
            Geometry::Lattice { .. } => {
                let (x1, y1) = self.coords(u);
                let (x2, y2) = self.coords(v);
                let (mut dx, mut dy) = (x2 - x1, y2 - y1);
                if dx < 0 || (dx == 0 && dy < 0) {
                    dx = -dx;
                    dy = -dy;
                }
                self.lattice_index.get(&(dx, dy)).copied()
            }
        }
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.class_of(u, v).is_some()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.class_of(u, v).map(|c| self.classes[c].weight)
    }

    /// Neighbors of `v`, sorted by vertex id.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        match self.geometry {
            Geometry::Circulant => {
                for c in &self.classes {
                    let d = c.dx as usize;
                    out.push((v + d) % self.n);
                    if 2 * d != self.n {
                        out.push((v + self.n - d) % self.n);
                    }
                }
            }
            Geometry::Path => {
                for c in &self.classes {
                    let d = c.dx as usize;
                    if v >= d {
                        out.push(v - d);
                    }
                    if v + d < self.n {
                        out.push(v + d);
                    }
                }
            }
            Geometry::Lattice { side } => {
                let (x, y) = self.coords(v);
                let s = side as i64;
                for c in &self.classes {
                    for sign in [1i64, -1] {
                        let (x2, y2) = (x + sign * c.dx, y + sign * c.dy);
                        if (0..s).contains(&x2) && (0..s).contains(&y2) {
                            out.push((y2 * s + x2) as usize);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn avg_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n as f64
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.neighbors(v)
            .into_iter()
            .map(|u| self.weight(u, v).unwrap_or(0.0))
            .sum()
    }

    /// Enumerate every edge as `(min, max)`. Use only on small graphs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.classes.len()).flat_map(move |c| {
            (0..self.classes[c].count).map(move |k| {
                let (a, b) = self.class_edge(c, k);
                (a.min(b), a.max(b))
            })
        })
    }

    /// Multiply every class weight by `profile(distance)`.
    ///
    /// Distance is the index distance for lines (`|i - j|`) and rings
    /// (circular), and the Euclidean distance for grids, so the resulting
    /// weights satisfy the symmetry assumptions of the nonuniform model.
    pub fn reweighted(&self, profile: impl Fn(f64) -> f64) -> Result<Self> {
        let mut out = self.clone();
        for c in &mut out.classes {
            let distance = c.distance();
            let w = profile(distance);
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonpositiveWeight {
                    distance,
                    weight: w,
                });
            }
            c.weight *= w;
        }
        Ok(out)
    }

    /// `max w / min w` over edges.
    pub fn weight_ratio(&self) -> f64 {
        let (lo, hi) = self
            .classes
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), c| {
                (lo.min(c.weight), hi.max(c.weight))
            });
        hi / lo
    }
}
