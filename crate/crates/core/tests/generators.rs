use kernelbench_core::generators::{generate, sample, stream, BlockModelSpec};

#[test]
fn edge_frequencies_match_block_probabilities() {
    let spec = BlockModelSpec::uniform(30, 2, 0.3, 0.1, 77).unwrap();
    let labels = spec.labels();
    let (mut intra, mut intra_pairs, mut inter, mut inter_pairs) = (0.0, 0.0, 0.0, 0.0);
    for index in 0..200 {
        let g = sample(&spec, &mut stream(spec.seed, index, 0));
        for i in 0..30 {
            for j in (i + 1)..30 {
                let e = g.adjacency()[(i, j)];
                if labels[i] == labels[j] {
                    intra += e;
                    intra_pairs += 1.0;
                } else {
                    inter += e;
                    inter_pairs += 1.0;
                }
            }
        }
    }
    // Binomial standard errors are about 0.002 and 0.0015; allow five.
    assert!((intra / intra_pairs - 0.3).abs() < 0.01, "{}", intra / intra_pairs);
    assert!((inter / inter_pairs - 0.1).abs() < 0.0075, "{}", inter / inter_pairs);
}

#[test]
fn generated_graphs_are_connected_and_labelled() {
    let spec = BlockModelSpec::uniform(100, 2, 0.3, 0.1, 5).unwrap();
    for i in 0..10 {
        let g = generate(&spec, i).unwrap();
        assert!(kernelbench_core::graph::is_connected(&g));
        assert_eq!(g.num_classes(), 2);
        assert!(!g.is_weighted());
    }
}

#[test]
fn sparse_specs_resample_until_connected() {
    // Expected degree about 2.5: single samples are often disconnected.
    let spec = BlockModelSpec::uniform(12, 1, 0.23, 0.23, 3).unwrap();
    let mut resampled = 0;
    for i in 0..20 {
        let g = generate(&spec, i).unwrap();
        assert!(kernelbench_core::graph::is_connected(&g));
        if g != sample(&spec, &mut stream(spec.seed, i, 0)) {
            resampled += 1;
        }
    }
    assert!(resampled > 0);
}
