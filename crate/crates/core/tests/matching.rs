mod common;

use common::oracle;

use fdg::matching::{bnb_search, exhaustive_oracle, SearchOptions, TraceEvent};
use fdg::{bnb_distance, ConstraintMode, CostWeights};
use rand::Rng;

fn weights(rng: &mut rand_chacha::ChaCha8Rng, mode: ConstraintMode, planar: bool) -> CostWeights {
    let mut k = [0.0; 8];
    for x in &mut k {
        *x = [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)];
    }
    k[0] = 1.0;
    CostWeights { k, k_pr: 1e-3, planar, mode }
}

#[test]
fn bnb_matches_oracle_on_random_instances() {
    let mut rng = common::rng(7);
    for case in 0..240 {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(1..=5);
        let planar = case % 2 == 1;
        let mode = if case % 4 < 2 { ConstraintMode::Relaxed } else { ConstraintMode::Restricted };
        let mut g = common::random_ag(&mut rng, n, 0.4, 3);
        let z = rng.random_range(1..=4);
        let mut f = common::random_fdg(&mut rng, m, z);
        if planar {
            g = common::with_random_order(&mut rng, g);
            f = common::fdg_with_random_order(&mut rng, f);
        }
        let w = weights(&mut rng, mode, planar);
        let a = bnb_distance(&g, &f, &w).unwrap();
        let b = exhaustive_oracle(&g, &f, &w).unwrap();
        assert_eq!(a.valid, b.valid, "case {case}");
        assert_eq!(a.distance.to_bits(), b.distance.to_bits(), "case {case}: {} vs {}", a.distance, b.distance);
        if a.valid {
            assert_eq!(a.labelling, b.labelling, "case {case}");
        }
    }
}

#[test]
fn bound_is_admissible_along_every_path() {
    let mut rng = common::rng(11);
    for _ in 0..60 {
        let g = common::random_ag(&mut rng, 4, 0.5, 3);
        let f = common::random_fdg(&mut rng, 4, 3);
        let w = weights(&mut rng, ConstraintMode::Relaxed, false);
        let opts = SearchOptions { trace: true, ..SearchOptions::default() };
        let r = bnb_search(&g, &f, &w, &opts).unwrap();
        let mut stack: Vec<f64> = Vec::new();
        for ev in &r.trace {
            match *ev {
                TraceEvent::Enter { l } => stack.push(l),
                TraceEvent::Exit => {
                    stack.pop();
                }
                TraceEvent::Leaf { cost } => {
                    for l in &stack {
                        assert!(*l <= cost + 1e-9, "bound {l} above leaf {cost}");
                    }
                }
            }
        }
    }
}

use fdg::matching::{
    arc_cost, check_constraints, second_order_cost, vertex_cost, Constraint, ORACLE_LIMIT,
};
use fdg::{
    ag_to_fdg, count_labellings, count_search_nodes, extend_fdg, labelling_cost, synth_from_labelled_ags, AttrTuple,
    AttributedGraph, BoolMatrix, CommonLabelling, Error, Fdg, Labelling, RelationKind, Role,
};

fn cat(c: u32) -> AttrTuple {
    AttrTuple::cat(c)
}

fn lone(codes: &[u32]) -> AttributedGraph {
    AttributedGraph::new(codes.iter().map(|c| cat(*c)).collect(), []).unwrap()
}

/// Two FDG vertices that never appear together.
fn antagonistic_pair() -> Fdg {
    synth_from_labelled_ags(&[lone(&[0]), lone(&[1])], &CommonLabelling::new(vec![vec![Some(0)], vec![Some(1)]]), None)
        .unwrap()
}

/// Vertex 1 is present whenever vertex 0 is, but not the other way round.
fn occurrent_pair() -> Fdg {
    synth_from_labelled_ags(&[lone(&[0, 1]), lone(&[1])], &CommonLabelling::new(vec![vec![Some(0), Some(1)], vec![Some(1)]]), None)
        .unwrap()
}

#[test]
fn first_order_costs() {
    let f = ag_to_fdg(&AttributedGraph::new(vec![cat(0), cat(1)], [((0, 1), cat(5))]).unwrap());
    assert_eq!(vertex_cost(&cat(0), f.vertex_pdf(0), &f, 1e-4), 0.0);
    assert_eq!(vertex_cost(&cat(1), f.vertex_pdf(0), &f, 1e-4), 1.0);
    let e = extend_fdg(&f, 3).unwrap();
    assert_eq!(vertex_cost(&cat(0), e.vertex_pdf(2), &e, 1e-4), 1.0);
    let tenth = fdg::Pdf::from_parts(0.9, vec![std::collections::BTreeMap::from([(fdg::Bin::Cat(3), 1.0)])], 10.0);
    assert!((vertex_cost(&cat(3), &tenth, &f, 0.01) - 0.5).abs() < 1e-12);

    assert_eq!(arc_cost(&AttrTuple::null(), f.arc_pdf(0, 1), false, &f, 1e-4), 0.0);
    assert_eq!(arc_cost(&cat(5), f.arc_pdf(0, 1), false, &f, 1e-4), 1.0);
    assert_eq!(arc_cost(&cat(5), f.arc_pdf(0, 1), true, &f, 1e-4), 0.0);
    assert_eq!(arc_cost(&AttrTuple::null(), f.arc_pdf(1, 0), true, &f, 1e-4), 0.0);
}

#[test]
fn second_order_cases() {
    let a = antagonistic_pair();
    assert_eq!(second_order_cost(RelationKind::Antagonism, Role::Vertex, &a, 0, 1, true, true), 1);
    assert_eq!(second_order_cost(RelationKind::Antagonism, Role::Vertex, &a, 0, 1, true, false), 0);
    let o = occurrent_pair();
    assert_eq!(second_order_cost(RelationKind::Occurrence, Role::Vertex, &o, 0, 1, true, false), 1);
    assert_eq!(second_order_cost(RelationKind::Occurrence, Role::Vertex, &o, 1, 0, true, false), 0);
    let e = extend_fdg(&a, 3).unwrap();
    assert!(e.relations(Role::Vertex).antagonism.get(0, 2));
    assert_eq!(second_order_cost(RelationKind::Antagonism, Role::Vertex, &e, 0, 2, true, true), 0);
    assert_eq!(second_order_cost(RelationKind::Existence, Role::Vertex, &e, 2, 0, false, false), 0);
}

#[test]
fn antagonism_violation_in_both_modes() {
    let f = antagonistic_pair();
    let g = lone(&[0, 1]);
    let both = Labelling::identity(2);
    let r = check_constraints(&both, &g, &f, &[Constraint::R3, Constraint::R4]).unwrap();
    assert_eq!((r.r3, r.r4, r.r5), (Some(false), Some(true), None));
    let base = labelling_cost(&both, &g, &f, &CostWeights::relaxed([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
    let with = labelling_cost(&both, &g, &f, &CostWeights::relaxed([1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
    assert_eq!(with.cost - base.cost, 1.0);
    assert!(!with.admissible(ConstraintMode::Restricted));
    let restricted = bnb_distance(&g, &f, &CostWeights::restricted()).unwrap();
    assert!(restricted.valid);
    assert_ne!(restricted.labelling, both);
}

#[test]
fn empty_relations_satisfy_everything() {
    let mut rng = common::rng(21);
    for _ in 0..30 {
        let n = rng.random_range(1..5);
        let z = rng.random_range(1..5);
        let mut f = common::random_fdg(&mut rng, n, z);
        for role in [Role::Vertex, Role::Arc] {
            let r = f.relations_mut(role);
            for kind in RelationKind::ALL {
                let size = r.get(kind).size();
                *r.get_mut(kind) = BoolMatrix::new(size, false);
            }
        }
        let k = rng.random_range(1..4);
        let g = common::random_ag(&mut rng, k, 0.5, 3);
        let map: Vec<Option<usize>> = (0..k).map(|i| (i < n).then_some(i)).collect();
        let r = check_constraints(&Labelling::new(map), &g, &f, &[Constraint::R3, Constraint::R4]).unwrap();
        assert_eq!((r.r3, r.r4), (Some(true), Some(true)));
        let mut w = CostWeights::relaxed([1.0, 1.0, 3.0, 2.0, 5.0, 1.0, 4.0, 2.0]);
        let relaxed = exhaustive_oracle(&g, &f, &w).unwrap();
        w.mode = ConstraintMode::Restricted;
        let restricted = exhaustive_oracle(&g, &f, &w).unwrap();
        assert_eq!(relaxed.distance, restricted.distance);
        assert_eq!(relaxed.labelling, restricted.labelling);
    }
}

#[test]
fn planar_order_allows_only_rotations() {
    let g = AttributedGraph::new(
        vec![cat(0), cat(1), cat(1), cat(1)],
        [((0, 1), cat(2)), ((0, 2), cat(2)), ((0, 3), cat(2))],
    )
    .unwrap()
    .with_arc_order(vec![vec![1, 2, 3], vec![], vec![], vec![]])
    .unwrap();
    let base = ag_to_fdg(&g);
    let perms = [[1, 2, 3], [2, 3, 1], [3, 1, 2], [1, 3, 2], [2, 1, 3], [3, 2, 1]];
    for (k, p) in perms.iter().enumerate() {
        let f = base.clone().with_arc_order(vec![p.to_vec(), vec![], vec![], vec![]]).unwrap();
        let r = check_constraints(&Labelling::identity(4), &g, &f, &[Constraint::R5]).unwrap();
        assert_eq!(r.r5, Some(k < 3), "{p:?}");
    }
    let unordered = ag_to_fdg(&lone(&[0, 1]));
    assert!(matches!(
        check_constraints(&Labelling::identity(2), &lone(&[0, 1]), &unordered, &[Constraint::R5]),
        Err(Error::MissingOrder(_))
    ));
}

#[test]
fn labelling_cost_examples() {
    let mut rng = common::rng(22);
    let g = common::random_ag(&mut rng, 4, 0.5, 3);
    let f = ag_to_fdg(&g);
    let w = CostWeights::default();
    assert_eq!(labelling_cost(&Labelling::identity(4), &g, &f, &w).unwrap().cost, 0.0);
    assert_eq!(bnb_distance(&g, &f, &w).unwrap().distance, 0.0);
    let mut vertices = g.vertices().to_vec();
    vertices.push(cat(1));
    let arcs: Vec<_> = g.real_arcs().map(|(k, b)| (k, b.clone())).collect();
    let spurious = AttributedGraph::new(vertices, arcs).unwrap();
    let map = Labelling::new(vec![Some(0), Some(1), Some(2), Some(3), None]);
    assert_eq!(labelling_cost(&map, &spurious, &f, &w).unwrap().cost, 1.0);
    let heavier = CostWeights::relaxed([2.5, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(labelling_cost(&map, &spurious, &f, &heavier).unwrap().cost, 2.5);
}

#[test]
fn oracle_guards_and_smallest_space() {
    let g = lone(&[0]);
    let f = ag_to_fdg(&lone(&[1]));
    let r = exhaustive_oracle(&g, &f, &CostWeights::default()).unwrap();
    assert_eq!(r.leaves, 2);
    let big = lone(&[0; 6]);
    let bigf = ag_to_fdg(&lone(&[0; 5]));
    assert!(6 + 5 > ORACLE_LIMIT);
    assert!(matches!(exhaustive_oracle(&big, &bigf, &CostWeights::default()), Err(Error::TooLarge { .. })));
}

#[test]
fn search_space_counts() {
    assert_eq!(oracle::search_walk(1, 1).0, 2);
    assert_eq!(oracle::search_walk(2, 1).0, 3);
    assert_eq!(oracle::search_walk(2, 2).0, 7);
    let mut rng = common::rng(23);
    for n in 0..=4 {
        for m in 0..=4 {
            let (leaves, nodes) = oracle::search_walk(n, m);
            assert_eq!(count_labellings(n, m), leaves, "Q({n},{m})");
            assert_eq!(count_search_nodes(n, m), nodes, "A({n},{m})");
            if m == 0 {
                continue;
            }
            let g = common::random_ag(&mut rng, n, 0.5, 3);
            let f = common::random_fdg(&mut rng, m, 2);
            for mode in [ConstraintMode::Relaxed, ConstraintMode::Restricted] {
                let w = CostWeights::restricted().with_mode(mode);
                let r = bnb_search(&g, &f, &w, &SearchOptions::exhaustive()).unwrap();
                assert_eq!(r.leaves as u128, leaves);
                assert_eq!(r.explored_nodes as u128, nodes);
            }
        }
    }
}

#[test]
fn pruning_never_changes_the_distance() {
    let mut rng = common::rng(24);
    for _ in 0..150 {
        let (n, m) = (rng.random_range(1..5), rng.random_range(1..5));
        let g = common::random_ag(&mut rng, n, 0.4, 3);
        let z = rng.random_range(1..5);
        let f = common::random_fdg(&mut rng, m, z);
        let w = weights(&mut rng, ConstraintMode::Restricted, false);
        let pruned = bnb_search(&g, &f, &w, &SearchOptions::default()).unwrap();
        let loose = SearchOptions { antagonism_pruning: false, ..SearchOptions::default() };
        let plain = bnb_search(&g, &f, &w, &loose).unwrap();
        assert_eq!(pruned.distance.to_bits(), plain.distance.to_bits());
        assert_eq!(pruned.valid, plain.valid);
        assert!(pruned.explored_nodes <= plain.explored_nodes);
    }
}

#[test]
fn restricted_solutions_survive_heavy_relaxed_weights() {
    let mut rng = common::rng(25);
    let mut checked = 0;
    while checked < 100 {
        let (n, m) = (rng.random_range(1..5), rng.random_range(1..5));
        let g = common::random_ag(&mut rng, n, 0.4, 3);
        let z = rng.random_range(1..4);
        let f = common::random_fdg(&mut rng, m, z);
        let restricted = bnb_distance(&g, &f, &CostWeights::restricted()).unwrap();
        if !restricted.valid {
            continue;
        }
        checked += 1;
        let heavy = CostWeights::relaxed([1.0, 1.0, 1e6, 1e6, 1e6, 1e6, 1e6, 1e6]);
        let relaxed = bnb_distance(&g, &f, &heavy).unwrap();
        let detail = relaxed.detail.unwrap();
        assert_eq!(detail.counts, [0; 6]);
        assert!((detail.first_order - restricted.distance).abs() < 1e-9);
    }
}

#[test]
fn distance_grows_with_each_weight() {
    let mut rng = common::rng(26);
    for _ in 0..80 {
        let (n, m) = (rng.random_range(1..5), rng.random_range(1..5));
        let g = common::random_ag(&mut rng, n, 0.4, 3);
        let z = rng.random_range(1..5);
        let f = common::random_fdg(&mut rng, m, z);
        let w = weights(&mut rng, ConstraintMode::Relaxed, false);
        let base = bnb_distance(&g, &f, &w).unwrap().distance;
        let i = rng.random_range(0..8);
        let mut up = w.clone();
        up.k[i] += 1.5;
        assert!(bnb_distance(&g, &f, &up).unwrap().distance >= base - 1e-12);
    }
}

#[test]
fn scaling_weights_scales_the_distance() {
    let mut rng = common::rng(27);
    for _ in 0..80 {
        let (n, m) = (rng.random_range(1..5), rng.random_range(1..5));
        let g = common::random_ag(&mut rng, n, 0.4, 3);
        let z = rng.random_range(1..5);
        let f = common::random_fdg(&mut rng, m, z);
        let w = weights(&mut rng, ConstraintMode::Relaxed, false);
        let base = bnb_distance(&g, &f, &w).unwrap();
        for c in [0.5, 3.0, 8.0] {
            let s = bnb_distance(&g, &f, &w.scaled(c)).unwrap();
            assert!((s.distance - c * base.distance).abs() < 1e-9 * (1.0 + base.distance));
            let again = labelling_cost(&s.labelling, &g, &f, &w).unwrap().cost;
            assert!((again - base.distance).abs() < 1e-9 * (1.0 + base.distance));
        }
    }
}
