//! Exact recovery of two communities from locality-constrained noisy
//! parity samples.
//!
//! Vertices carry hidden bits. A sample on edge `(i, j)` of a measurement
//! graph reveals `X_i xor X_j`, flipped with probability `theta`. The
//! estimators here recover the bits up to a global flip once the sample
//! count exceeds the information-theoretic minimum `m*` computed in
//! [`limits`].

// NaN-rejecting `!(x > 0.0)` guards and index loops over dense matrices are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod hypergraph;
pub mod incidence;
pub mod labeling;
pub mod limits;
pub mod oracle;
pub mod recover;
pub mod rng;
pub mod sample_io;
pub mod sampling;
pub mod spectral;
pub mod topology;

pub use error::{Error, Result};
pub use hypergraph::{build_hyper_topology, HyperEdgePolicy, HyperTopology};
pub use labeling::Labeling;
pub use limits::{LimitReport, LimitSpec, Locality, NoiseModel};
pub use recover::{Algorithm, RecoveryConfig, RecoveryResult, StageFlag};
pub use spectral::MatrixMode;
pub use sampling::{HyperSampleSet, ParitySample, SampleSet, WeightProfile};
pub use topology::{build_topology, Family, MeasurementTopology, SmallWorldWeights};
