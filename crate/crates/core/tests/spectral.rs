use locrec::oracle::{dense_top_eigvec, unsigned_angle};
use locrec::rng::{derive_seed, stream, stream_rng};
use locrec::sampling::draw_samples;
use locrec::spectral::{
    build_sample_matrix, default_max_iter, leading_eigvec_signs, SignedSampleMatrix, DEFAULT_TOL,
};
use locrec::{build_topology, Family, Labeling, MatrixMode};
use rand::Rng;

fn misclassified(bits: &[u8], truth: &Labeling) -> usize {
    Labeling::from(bits.to_vec()).dist(truth).unwrap()
}

#[test]
fn complete_graph_spectral_estimate_is_mostly_right() {
    let n = 200;
    let topo = build_topology(Family::Complete, n, 1, None).unwrap();
    let m = 6.0 * n as f64 * (n as f64).ln();
    let subset: Vec<usize> = (0..n).collect();
    let mut good = 0;
    for trial in 0..10 {
        let seed = derive_seed(5, trial);
        let truth = Labeling::random(n, &mut stream_rng(seed, stream::TRUTH));
        let samples =
            draw_samples(&topo, &truth, 0.1, m, &mut stream_rng(seed, stream::SAMPLES)).unwrap();
        for mode in [MatrixMode::FirstSample, MatrixMode::Aggregate] {
            let a = build_sample_matrix(&samples, &subset, mode);
            let est = leading_eigvec_signs(
                &a,
                &mut stream_rng(seed, stream::ALGORITHM),
                DEFAULT_TOL,
                default_max_iter(n),
            );
            assert!(!est.degenerate);
            if mode == MatrixMode::FirstSample && misclassified(&est.bits, &truth) < n / 10 {
                good += 1;
            }
        }
    }
    assert!(good >= 9, "only {good}/10 runs below 10% error");
}

#[test]
fn power_iteration_matches_dense_eigensolver() {
    let mut rng = stream_rng(11, 0);
    for dim in [3, 8, 20, 40] {
        // planted rank-one signs plus sparse noise: a clear top eigengap
        let u: Vec<f64> = (0..dim).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let mut triples = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let noise = if rng.random::<f64>() < 0.5 { 0.0 } else if rng.random::<bool>() { 0.3 } else { -0.3 };
                triples.push((i, j, u[i] * u[j] + noise));
            }
        }
        let a = SignedSampleMatrix::from_triples(dim, &triples);
        let (lambda, v) = dense_top_eigvec(&a.to_dense()).unwrap();
        let est = leading_eigvec_signs(&a, &mut rng, 1e-12, 100_000);
        assert!(est.converged, "dim {dim}");
        assert!((est.eigenvalue - lambda).abs() < 1e-9 * lambda, "dim {dim}");
        assert!(unsigned_angle(&est.vector, &v) < 1e-4, "dim {dim}");
    }
}

#[test]
fn signs_follow_the_eigenvector_rule() {
    // rank-one matrix u u^T with off-diagonal entries only
    let u = [1.0, -1.0, 1.0, 1.0, -1.0];
    let mut triples = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            triples.push((i, j, u[i] * u[j]));
        }
    }
    let a = SignedSampleMatrix::from_triples(5, &triples);
    let est = leading_eigvec_signs(&a, &mut stream_rng(3, 0), DEFAULT_TOL, 1000);
    let bits: Vec<u8> = u.iter().map(|&x| u8::from(x >= 0.0)).collect();
    let flipped: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
    assert!(est.bits == bits || est.bits == flipped);
}
