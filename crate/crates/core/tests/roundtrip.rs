use locrec::limits::{chernoff_information, kl_half, FiniteDistPair};
use locrec::rng::stream_rng;
use locrec::sample_io::{read_pairwise, write_pairwise, HeaderNoise, SampleHeader};
use locrec::sampling::draw_samples;
use locrec::{build_topology, Family, Labeling};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairwise_files_roundtrip(n in 3usize..60, r in 1usize..5, seed in any::<u64>(), theta in 0.0f64..0.5) {
        let r = r.min(n - 1);
        let topo = build_topology(Family::Ring, n, r, None).unwrap();
        let truth = Labeling::random(n, &mut stream_rng(seed, 0));
        let set = draw_samples(&topo, &truth, theta, 4.0 * n as f64, &mut stream_rng(seed, 1)).unwrap();
        let header = SampleHeader {
            n,
            family: Family::Ring,
            r,
            seed,
            m_target: 4.0 * n as f64,
            noise: HeaderNoise::Theta(theta),
        };
        let mut buf = Vec::new();
        write_pairwise(&mut buf, &header, &set).unwrap();
        let (h2, s2) = read_pairwise(&buf[..]).unwrap();
        prop_assert_eq!(h2, header);
        prop_assert_eq!(s2.samples(), set.samples());
    }

    #[test]
    fn bernoulli_chernoff_is_kl_half(theta in 0.001f64..0.499) {
        let pair = FiniteDistPair::bernoulli(theta, 1.0 - theta).unwrap();
        let d = chernoff_information(&pair, 1e-12).unwrap();
        prop_assert!((d - kl_half(theta).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn dist_is_flip_invariant(bits in proptest::collection::vec(0u8..2, 1..40), other in proptest::collection::vec(0u8..2, 40)) {
        let a = Labeling::from(bits.clone());
        let b = Labeling::from(other[..bits.len()].to_vec());
        let d = a.dist(&b).unwrap();
        prop_assert_eq!(d, a.flipped().dist(&b).unwrap());
        prop_assert!(2 * d <= bits.len());
    }
}
