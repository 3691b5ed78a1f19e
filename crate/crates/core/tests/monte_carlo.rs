use anchorradar_core::baselines::random_baseline;
use anchorradar_core::stage2::{stage2_loss, stage2_loss_and_gradient};
use anchorradar_core::{Hypergraph, NodeId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_baseline_matches_uniform_guessing() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let nodes: Vec<NodeId> = (0..30).collect();
    let mut members = Vec::new();
    let mut anchors = Vec::new();
    for _ in 0..60 {
        let size = rng.gen_range(2..=7);
        let mut m: Vec<NodeId> = nodes.choose_multiple(&mut rng, size).copied().collect();
        m.sort_unstable();
        let k = rng.gen_range(1..=size.min(3));
        let mut a: Vec<NodeId> = m.choose_multiple(&mut rng, k).copied().collect();
        a.sort_unstable();
        members.push(m);
        anchors.push(a);
    }
    let h = Hypergraph::from_edges(nodes.len(), members, anchors).unwrap();
    let edges: Vec<usize> = (0..h.edge_count()).collect();
    let expected = random_baseline(&h, &edges);

    let trials = 100_000;
    let mut hits = 0u32;
    for _ in 0..trials {
        let e = *edges.choose(&mut rng).unwrap();
        let guess = h.edge(e).choose(&mut rng).unwrap();
        hits += u32::from(h.anchors(e).contains(guess));
    }
    let observed = f64::from(hits) / f64::from(trials);
    let sigma = (expected * (1.0 - expected) / f64::from(trials)).sqrt();
    assert!(
        (observed - expected).abs() < 4.0 * sigma,
        "observed {observed}, expected {expected} (sigma {sigma})"
    );
}

fn instance() -> impl Strategy<Value = (Hypergraph, Vec<f64>, Vec<f64>, f64)> {
    (3usize..9).prop_flat_map(|n| {
        let edge = prop::collection::btree_set(0..n as NodeId, 2..=n.min(5)).prop_flat_map(|set| {
            let m: Vec<NodeId> = set.into_iter().collect();
            let len = m.len();
            (
                Just(m),
                prop::sample::subsequence((0..len).collect::<Vec<_>>(), 1..=len.min(2)),
            )
        });
        (
            prop::collection::vec(edge, 1..8),
            prop::collection::vec(-3.0f64..3.0, n),
            0.0f64..2.0,
        )
            .prop_flat_map(move |(raw, s2, alpha)| {
                let (members, anchors): (Vec<Vec<NodeId>>, Vec<Vec<NodeId>>) = raw
                    .into_iter()
                    .map(|(m, picks)| {
                        let a = picks.iter().map(|&i| m[i]).collect();
                        (m, a)
                    })
                    .unzip();
                let h = Hypergraph::from_edges(n, members, anchors).unwrap();
                let rows = h.incidence_count();
                (
                    Just(h),
                    Just(s2),
                    prop::collection::vec(-3.0f64..3.0, rows),
                    Just(alpha),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stage2_gradient_matches_central_differences((h, s2, s1, alpha) in instance()) {
        let train: Vec<usize> = (0..h.edge_count()).collect();
        let (loss, grad) = stage2_loss_and_gradient(&s2, &s1, &h, &train, alpha).unwrap();
        prop_assert_eq!(loss, stage2_loss(&s2, &s1, &h, &train, alpha).unwrap());
        let step = 1e-5;
        for v in 0..s2.len() {
            let mut plus = s2.clone();
            plus[v] += step;
            let mut minus = s2.clone();
            minus[v] -= step;
            let numeric = (stage2_loss(&plus, &s1, &h, &train, alpha).unwrap()
                - stage2_loss(&minus, &s1, &h, &train, alpha).unwrap())
                / (2.0 * step);
            let rel = (grad[v] - numeric).abs() / grad[v].abs().max(numeric.abs()).max(1e-4);
            prop_assert!(rel < 1e-5, "node {}: analytic {} numeric {}", v, grad[v], numeric);
        }
    }
}
