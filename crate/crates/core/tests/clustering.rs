mod common;

use fdg::clustering::{
    extend_labelling_ag_fdg, hierarchical_clustering, incremental_clustering, AgDistance, IncrementalConfig, Linkage,
};
use fdg::{ag_to_fdg, synth_from_labelled_fdgs, update_fdg_with_ag, AttributedGraph, Binnings, CommonLabelling, Labelling};
use rand::seq::SliceRandom;
use rand::Rng;

fn graphs(seed: u64, count: usize) -> Vec<AttributedGraph> {
    let mut rng = common::rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=4);
            common::random_ag(&mut rng, n, 0.4, 4)
        })
        .collect()
}

fn total_z(fdgs: &[fdg::Fdg]) -> u64 {
    fdgs.iter().map(|f| f.z()).sum()
}

#[test]
fn incremental_extremes() {
    let set = graphs(41, 6);
    let cfg = IncrementalConfig::default();
    let one = incremental_clustering(&set, &cfg, 1e9).unwrap();
    assert_eq!(one.fdgs.len(), 1);
    assert_eq!(one.fdgs[0].z(), 6);
    let all = incremental_clustering(&set, &cfg, -1.0).unwrap();
    assert_eq!(all.fdgs.len(), 6);
    assert_eq!(total_z(&all.fdgs), 6);
}

#[test]
fn incremental_identical_pair() {
    let g = graphs(42, 1).remove(0);
    let r = incremental_clustering(&[g.clone(), g], &IncrementalConfig::default(), 0.0).unwrap();
    assert_eq!(r.fdgs.len(), 1);
    assert_eq!(r.fdgs[0].z(), 2);
}

#[test]
fn incremental_is_deterministic_and_conserves_mass() {
    for seed in 0..5 {
        let set = graphs(100 + seed, 7);
        for d in [0.5, 2.0, 4.0] {
            let a = incremental_clustering(&set, &IncrementalConfig::default(), d).unwrap();
            let b = incremental_clustering(&set, &IncrementalConfig::default(), d).unwrap();
            assert_eq!(a.fdgs, b.fdgs);
            assert_eq!(total_z(&a.fdgs), 7);
            let mut ids: Vec<usize> = a.provenance.concat();
            ids.sort();
            assert_eq!(ids, (0..7).collect::<Vec<_>>());
        }
    }
}

#[test]
fn extended_pair_synthesis_equals_update() {
    let mut rng = common::rng(43);
    for _ in 0..40 {
        let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let g = common::random_ag(&mut rng, n, 0.5, 3);
        let f = common::random_fdg(&mut rng, m, 3);
        let mut targets: Vec<Option<usize>> = (0..f.order()).map(Some).collect();
        targets.extend(std::iter::repeat_n(None, g.order()));
        targets.shuffle(&mut rng);
        let mu = Labelling::new(targets[..g.order()].to_vec());
        let (g2, f2, mu2) = extend_labelling_ag_fdg(&g, &f, &mu).unwrap();
        assert_eq!(g2.order(), f2.order());
        assert!(mu2.vertex_map.iter().all(|t| t.is_some()));
        let labels = CommonLabelling::new(vec![(0..f2.order()).map(Some).collect(), mu2.vertex_map.clone()]);
        let batch = synth_from_labelled_fdgs(&[f2, ag_to_fdg(&g2)], &labels, None).unwrap();
        let update = update_fdg_with_ag(&g, &f, &mu).unwrap();
        assert_eq!(batch, update);
    }
}

#[test]
fn hierarchical_identical_graphs_merge() {
    let g = graphs(44, 1).remove(0);
    let set = vec![g.clone(), g.clone(), g];
    let r = hierarchical_clustering(&set, &AgDistance::default(), 0.0, Linkage::Single, &Binnings::default()).unwrap();
    assert_eq!(r.fdgs.len(), 1);
    assert_eq!(r.fdgs[0].z(), 3);
}

#[test]
fn hierarchical_below_minimum_gives_singletons() {
    let set = graphs(45, 5);
    let dist = AgDistance::default();
    let mut min = f64::INFINITY;
    for i in 0..5 {
        for j in i + 1..5 {
            min = min.min(dist.eval(&set[i], &set[j]).unwrap().0);
        }
    }
    for linkage in [Linkage::Single, Linkage::Complete] {
        let r = hierarchical_clustering(&set, &dist, min - 0.5, linkage, &Binnings::default()).unwrap();
        assert_eq!(r.fdgs.len(), 5);
        let r = hierarchical_clustering(&set, &dist, 1e9, linkage, &Binnings::default()).unwrap();
        assert_eq!(r.fdgs.len(), 1);
        assert_eq!(r.fdgs[0].z(), 5);
    }
}

#[test]
fn merge_distances_are_monotone_and_counts_shrink() {
    for seed in 0..6 {
        let set = graphs(200 + seed, 6);
        for linkage in [Linkage::Single, Linkage::Complete] {
            let r = hierarchical_clustering(&set, &AgDistance::default(), 1e9, linkage, &Binnings::default()).unwrap();
            for w in r.merges.windows(2) {
                assert!(w[0].2 <= w[1].2, "{:?}", r.merges);
            }
            let mut prev = usize::MAX;
            for d in [0.0, 1.0, 2.0, 3.0, 5.0, 8.0] {
                let c = hierarchical_clustering(&set, &AgDistance::default(), d, linkage, &Binnings::default())
                    .unwrap()
                    .fdgs
                    .len();
                assert!(c <= prev);
                prev = c;
            }
        }
    }
}

/// Single-vertex graphs with distinct real attributes and a distance equal
/// to the squared attribute gap, so every pairwise distance is distinct.
#[test]
fn hierarchical_is_permutation_invariant() {
    let xs = [0.0, 1.0, 3.0, 7.0, 15.0, 31.0];
    let set: Vec<AttributedGraph> =
        xs.iter().map(|x| AttributedGraph::new(vec![fdg::AttrTuple::real(*x)], []).unwrap()).collect();
    let dist = AgDistance::Custom(std::sync::Arc::new(|a: &AttributedGraph, b: &AttributedGraph| {
        let v = |g: &AttributedGraph| match g.vertex(0).values()[0] {
            fdg::AttrValue::Real(x) => x,
            fdg::AttrValue::Cat(c) => c as f64,
        };
        Ok(((v(a) - v(b)).powi(2) + (v(a) + v(b)) * 1e-3, Labelling::identity(1)))
    }));
    let mut rng = common::rng(46);
    for linkage in [Linkage::Single, Linkage::Complete] {
        let base = hierarchical_clustering(&set, &dist, 20.0, linkage, &Binnings::default()).unwrap();
        let key = |set: &[AttributedGraph], r: &fdg::clustering::Clustering| {
            let mut groups: Vec<Vec<String>> = r
                .provenance
                .iter()
                .map(|p| {
                    let mut v: Vec<String> = p.iter().map(|i| set[*i].vertex(0).to_string()).collect();
                    v.sort();
                    v
                })
                .collect();
            groups.sort();
            groups
        };
        let expected = key(&set, &base);
        for _ in 0..10 {
            let mut perm = set.clone();
            perm.shuffle(&mut rng);
            let r = hierarchical_clustering(&perm, &dist, 20.0, linkage, &Binnings::default()).unwrap();
            assert_eq!(key(&perm, &r), expected);
        }
    }
}
