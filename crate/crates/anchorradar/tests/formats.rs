use anchorradar::formats::{
    fmt_f64, read_dataset, read_edge_map, read_key_values, read_model, read_split, read_strengths,
    write_dataset, write_edge_map, write_metrics, write_model, write_split, write_strengths,
};
use anchorradar_core::metrics::{EdgeMap, MetricsReport};
use anchorradar_core::split::make_splits;
use anchorradar_core::stage1::Stage1Model;
use anchorradar_core::{Hypergraph, HypergraphBuilder, SplitRatios};
use proptest::prelude::*;

/// Hypergraph with arbitrary alphanumeric node names.
fn named_hypergraph() -> impl Strategy<Value = Hypergraph> {
    let names = prop::collection::btree_set("[A-Za-z0-9_.-]{1,8}", 2..12);
    names.prop_flat_map(|names| {
        let names: Vec<String> = names.into_iter().collect();
        let n = names.len();
        let edge = (
            prop::collection::btree_set(0..n, 1..=n.min(5)),
            any::<prop::sample::Index>(),
        );
        prop::collection::vec(edge, 1..20).prop_map(move |raw| {
            let mut b = HypergraphBuilder::new();
            for (set, pick) in raw {
                let members: Vec<&str> = set.iter().map(|&i| names[i].as_str()).collect();
                let anchor = [members[pick.index(members.len())]];
                b.add_named_edge(&members, &anchor).unwrap();
            }
            b.build()
        })
    })
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, -1e-6f64..1e-6, Just(0.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dataset_round_trip(h in named_hypergraph()) {
        let mut buf = Vec::new();
        write_dataset(&h, &mut buf).unwrap();
        let g = read_dataset(buf.as_slice()).unwrap();
        prop_assert_eq!(g.edge_count(), h.edge_count());
        for e in 0..h.edge_count() {
            let names = |x: &Hypergraph, ids: &[u32]| {
                let mut v: Vec<String> = ids.iter().map(|&i| x.node_name(i).to_string()).collect();
                v.sort();
                v
            };
            prop_assert_eq!(names(&g, g.edge(e)), names(&h, h.edge(e)));
            prop_assert_eq!(names(&g, g.anchors(e)), names(&h, h.anchors(e)));
        }
    }

    #[test]
    fn float_text_is_exact(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn model_round_trip(n_f in 1usize..6, hidden in 1usize..6, seed in any::<u64>()) {
        let m = Stage1Model::init(n_f, hidden, seed);
        let mut buf = Vec::new();
        write_model(&m, &mut buf).unwrap();
        prop_assert_eq!(read_model(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn strengths_and_edge_maps_round_trip(
        h in named_hypergraph(),
        values in prop::collection::vec(finite(), 24),
        seed in any::<u64>(),
    ) {
        let n = h.node_count();
        let s: Vec<f64> = values[..n].to_vec();
        let p: Vec<f64> = values[12..12 + n].iter().map(|v| v.abs()).collect();
        let mut buf = Vec::new();
        write_strengths(&h, &s, &p, &mut buf).unwrap();
        let (s2, p2) = read_strengths(&h, buf.as_slice()).unwrap();
        prop_assert_eq!(s2, s);
        prop_assert_eq!(p2, p);

        let map: EdgeMap = (0..h.edge_count()).map(|e| (e, h.edge(e).to_vec())).collect();
        let mut buf = Vec::new();
        write_edge_map(&h, &map, &mut buf).unwrap();
        prop_assert_eq!(read_edge_map(&h, buf.as_slice()).unwrap(), map);

        if let Ok(split) = make_splits(&h, SplitRatios::new(0.4, 0.3, 0.3).unwrap(), seed) {
            let mut buf = Vec::new();
            write_split(&h, &split, &mut buf).unwrap();
            let back = read_split(&h, buf.as_slice()).unwrap();
            prop_assert_eq!(back.labels(), split.labels());
        }
    }

    #[test]
    fn metrics_round_trip(acc in 0.0f64..=1.0, ndcg in 0.0f64..=1.0, mrr in 0.0f64..=1.0, edges in 0usize..10_000) {
        let m = MetricsReport { accuracy: acc, ndcg, mrr, edges };
        let mut buf = Vec::new();
        write_metrics("test", 3, &m, &mut buf).unwrap();
        let kv = read_key_values(buf.as_slice()).unwrap();
        prop_assert_eq!(kv["accuracy"].parse::<f64>().unwrap(), acc);
        prop_assert_eq!(kv["ndcg"].parse::<f64>().unwrap(), ndcg);
        prop_assert_eq!(kv["mrr"].parse::<f64>().unwrap(), mrr);
        prop_assert_eq!(kv["edges"].parse::<usize>().unwrap(), edges);
        prop_assert_eq!(kv["subset"].as_str(), "test");
    }
}
