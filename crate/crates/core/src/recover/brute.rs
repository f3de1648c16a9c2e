use crate::error::{Error, Result};
use crate::labeling::Labeling;
use crate::sampling::SampleSet;

pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Exhaustive maximum-likelihood labeling for uniform `theta < 0.5`: the
/// assignment with `X_0 = 0` agreeing with the most samples. Ties go to the
/// lexicographically smallest `(X_1, ..., X_{n-1})`.
pub fn brute_force_ml(samples: &SampleSet) -> Result<Labeling> {
    let n = samples.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    if n <= 1 {
        return Ok(Labeling::zeros(n));
    }
    // X_1 is the most significant bit so integer order is lexicographic order
    let bit = |code: u32, v: usize| -> u8 {
        if v == 0 {
            0
        } else {
            ((code >> (n - 1 - v)) & 1) as u8
        }
    };
    let mut best = (0u32, usize::MAX);
    for code in 0..(1u32 << (n - 1)) {
        let disagreements = samples
            .samples()
            .iter()
            .filter(|s| bit(code, s.u as usize) ^ bit(code, s.v as usize) != s.value)
            .count();
        if disagreements < best.1 {
            best = (code, disagreements);
        }
    }
    Ok(Labeling::from((0..n).map(|v| bit(best.0, v)).collect::<Vec<u8>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::sampling::{draw_samples, ParitySample};
    use crate::topology::{build_topology, Family};

    #[test]
    fn too_large() {
        let set = SampleSet::new(21, vec![], 0.1);
        assert_eq!(brute_force_ml(&set), Err(Error::TooLarge { n: 21, max: 20 }));
    }

    #[test]
    fn single_sample() {
        let set = SampleSet::new(4, vec![ParitySample::new(0, 1, 1)], 0.1);
        assert_eq!(brute_force_ml(&set).unwrap().bits(), &[0, 1, 0, 0]);
    }

    #[test]
    fn tie_goes_lexicographically_smallest() {
        let set = SampleSet::new(3, vec![ParitySample::new(1, 2, 0), ParitySample::new(1, 2, 1)], 0.1);
        assert_eq!(brute_force_ml(&set).unwrap().bits(), &[0, 0, 0]);
    }

    #[test]
    fn noiseless_connected_is_exact() {
        let topo = build_topology(Family::Ring, 10, 2, None).unwrap();
        for seed in 0..10 {
            let truth = Labeling::random(10, &mut stream_rng(seed, 0));
            let set = draw_samples(&topo, &truth, 0.0, 200.0, &mut stream_rng(seed, 1)).unwrap();
            let est = brute_force_ml(&set).unwrap();
            assert_eq!(est.get(0), 0);
            assert_eq!(est.dist(&truth).unwrap(), 0);
        }
    }
}
