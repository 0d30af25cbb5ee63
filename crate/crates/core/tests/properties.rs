//! Property tests for the invariants of each module, driven by seeded generators.

use std::collections::BTreeSet;

use proptest::prelude::*;
use ripscollapse::complex::{
    diameter, distance_levels, vietoris_rips, vietoris_rips_at_level, Filtration, Simplex, SimplexOrder,
    SimplicialComplex, VertexOrder, DEFAULT_SIMPLEX_BUDGET,
};
use ripscollapse::datasets::{self, WeightRange};
use ripscollapse::gradients::{
    apparent_pairs, canonical_gradient, cone_gradient, contractibility_threshold, generic_gradient,
    perturbed_gradient, refinement_check, zero_persistence_apparent_pairs, TreeMetricSpace,
};
use ripscollapse::metric::{compatible_order, geodesic_defect, hyperbolicity, tree_metric, FiniteMetricSpace, WeightedTree};
use ripscollapse::morse::{
    collapse, critical_cells, minimal_vertex_refinement, replay, validate_gradient, DiscreteGradient,
    ValidationOptions,
};
use ripscollapse::persistence::{homology_oracle, persistent_homology, Barcode};
use ripscollapse::DistanceValue;

const B: usize = DEFAULT_SIMPLEX_BUDGET;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn full_filtration(x: &FiniteMetricSpace, cap: Option<usize>, order: VertexOrder, c: SimplexOrder) -> Filtration {
    let k = vietoris_rips(x, &x.max_distance(), cap, B).unwrap();
    Filtration::new(k, distance_levels(x), order, c)
}

fn vertices_and_tree_edges(tree: &WeightedTree) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = (0..tree.len()).map(Simplex::vertex).collect();
    out.extend(tree.edges().iter().map(|e| Simplex::edge(e.u, e.v)));
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// `min_z max(d(x,z) - r, d(y,z) - d + r)`, evaluated directly in floating point.
fn envelope_f64(x: &FiniteMetricSpace, a: usize, b: usize, r: f64) -> f64 {
    let d = x.dist(a, b).to_f64();
    (0..x.len())
        .map(|z| (x.dist(a, z).to_f64() - r).max(x.dist(b, z).to_f64() - d + r))
        .fold(f64::INFINITY, f64::min)
}

/// Brute-force defect over a grid of at least 10^4 split values per pair. For integer
/// distances the grid contains every half-integer, where all envelope breakpoints lie.
fn grid_defect(x: &FiniteMetricSpace) -> f64 {
    let mut best = 0.0f64;
    for (a, b) in x.pairs() {
        let d = x.dist(a, b).to_f64();
        let halves = (2.0 * d).round() as usize;
        let per_half = 10_000usize.div_ceil(halves.max(1));
        let steps = halves.max(1) * per_half;
        for k in 0..=steps {
            best = best.max(envelope_f64(x, a, b, d * k as f64 / steps as f64));
        }
    }
    best
}

/// Degree-0 deaths by Kruskal's algorithm on edges sorted by level.
fn union_find_deaths(x: &FiniteMetricSpace) -> Vec<usize> {
    let levels = distance_levels(x);
    let mut edges: Vec<(usize, usize, usize)> = x.pairs().map(|(a, b)| (levels.pair(a, b), a, b)).collect();
    edges.sort();
    let mut parent: Vec<usize> = (0..x.len()).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        p[v] = r;
        r
    }
    let mut deaths = Vec::new();
    for (l, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            deaths.push(l);
        }
    }
    deaths
}

fn bars(b: &Barcode, k: usize) -> Vec<(usize, Option<usize>)> {
    let mut v: Vec<_> = b.degree(k).iter().map(|i| (i.birth_level, i.death_level)).collect();
    v.sort();
    v
}

fn chi_matches(k: &SimplicialComplex, v: &DiscreteGradient) -> bool {
    ripscollapse::complex::euler_characteristic(critical_cells(v, k)) == k.euler_characteristic()
}

proptest! {
    #![proptest_config(config())]

    // ---- metric ----

    #[test]
    fn hyperbolicity_is_permutation_invariant(n in 4usize..8, seed in any::<u64>(), perm_seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let order = datasets::random_order(n, perm_seed);
        let y = x.subspace(order.sequence());
        prop_assert_eq!(hyperbolicity(&x).delta, hyperbolicity(&y).delta);
    }

    #[test]
    fn defect_at_least_half_min_distance(n in 2usize..8, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange { low: 1, high: 20 });
        let nu = geodesic_defect(&x).nu;
        let half = x.min_positive_distance().unwrap().half();
        prop_assert!(nu >= half);
        if n == 2 {
            prop_assert_eq!(nu, half);
        }
    }

    #[test]
    fn dense_tree_samples_have_small_defect(n in 2usize..6, seed in any::<u64>(), step in 1i64..4) {
        let tree = datasets::random_tree(n, seed, WeightRange { low: 1, high: 6 });
        let step = DistanceValue::from_int(step);
        let sample = tree_metric(&datasets::grid_sample_of_tree(&tree, &step));
        prop_assert!(geodesic_defect(&sample).nu <= step.half());
    }

    #[test]
    fn tree_metrics_are_zero_hyperbolic_with_half_max_edge_defect(n in 2usize..=10, seed in any::<u64>()) {
        let (tree, x) = datasets::random_tree_metric(n, seed);
        prop_assert!(hyperbolicity(&x).delta.is_zero());
        prop_assert_eq!(geodesic_defect(&x).nu, tree.max_edge_length().half());
    }

    #[test]
    fn defect_matches_grid_brute_force(n in 2usize..=8, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let exact = geodesic_defect(&x).nu.to_f64();
        prop_assert!((exact - grid_defect(&x)).abs() <= 1e-9);
    }

    // ---- complex ----

    #[test]
    fn rips_complexes_are_nested(n in 2usize..=8, seed in any::<u64>(), a in 0i64..25, b in 0i64..25) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let (t, u) = (DistanceValue::from_int(a.min(b)), DistanceValue::from_int(a.max(b)));
        let small = vietoris_rips(&x, &t, None, B).unwrap();
        let big = vietoris_rips(&x, &u, None, B).unwrap();
        prop_assert!(small.is_subcomplex_of(&big));
    }

    #[test]
    fn simplex_diameter_is_max_edge(n in 2usize..=7, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let levels = distance_levels(&x);
        let full = SimplicialComplex::full(n).unwrap();
        for s in full.iter() {
            let verts: Vec<usize> = s.vertices().collect();
            let mut m = 0;
            for (i, &p) in verts.iter().enumerate() {
                for &q in &verts[i + 1..] {
                    m = m.max(levels.pair(p, q));
                }
            }
            prop_assert_eq!(levels.simplex(s), m);
            prop_assert_eq!(&diameter(s, &x), levels.value(m));
        }
    }

    #[test]
    fn filtration_order_is_strict_total(
        n in 2usize..=6, seed in any::<u64>(), order_seed in any::<u64>(),
        picks in proptest::collection::vec((1u64..64, 1u64..64, 1u64..64), 20),
        colex in any::<bool>(),
    ) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let convention = if colex { SimplexOrder::ReverseColexicographic } else { SimplexOrder::Lexicographic };
        let f = full_filtration(&x, None, datasets::random_order(n, order_seed), convention);
        let all = (1u64 << n) - 1;
        for (a, b, c) in picks {
            let (a, b, c) = (a & all, b & all, c & all);
            if a == 0 || b == 0 || c == 0 {
                continue;
            }
            let (a, b, c) = (Simplex::from_mask(a), Simplex::from_mask(b), Simplex::from_mask(c));
            prop_assert_eq!(f.compare(a, b), f.compare(b, a).reverse());
            prop_assert_eq!(f.compare(a, b) == std::cmp::Ordering::Equal, a == b);
            if f.compare(a, b).is_lt() && f.compare(b, c).is_lt() {
                prop_assert!(f.compare(a, c).is_lt());
            }
        }
    }

    #[test]
    fn rips_at_max_distance_is_full(n in 1usize..=8, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let k = vietoris_rips(&x, &x.max_distance(), None, B).unwrap();
        prop_assert_eq!(k.len(), (1usize << n) - 1);
    }

    // ---- morse ----

    #[test]
    fn cone_collapses_preserve_homology_and_replay(n in 2usize..=7, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let t = contractibility_threshold(&x).theta;
        let cone = cone_gradient(&x, &t, 0, true, B).unwrap();
        let k = vietoris_rips(&x, &t, None, B).unwrap();
        let point = SimplicialComplex::closure(n, [Simplex::vertex(0)]).unwrap();
        prop_assert!(chi_matches(&k, &cone.gradient));
        let cert = collapse(&k, &cone.gradient, &point, &VertexOrder::identity(n)).unwrap();
        prop_assert_eq!(&replay(&k, &cert).unwrap(), &point);
        if k.len() <= 2000 {
            prop_assert_eq!(homology_oracle(&k, 2000).unwrap()[0], 1);
            prop_assert!(homology_oracle(&k, 2000).unwrap()[1..].iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn refinement_covers_the_same_simplices(n in 3usize..=8, seed in any::<u64>(), order_seed in any::<u64>()) {
        let tree = datasets::random_tree(n, seed, WeightRange::default());
        let tm = TreeMetricSpace::from_tree(&tree).unwrap();
        let order = datasets::random_order(n, order_seed);
        let v = perturbed_gradient(&tm, &order).unwrap();
        let m = minimal_vertex_refinement(&v, &order);
        prop_assert_eq!(2 * m.len(), v.covered_count());
        let from_pairs: BTreeSet<u64> = m.pairs().iter().flat_map(|&(s, t)| [s.mask(), t.mask()]).collect();
        let from_intervals: BTreeSet<u64> = v.intervals().iter().flat_map(|i| i.simplices()).map(|s| s.mask()).collect();
        prop_assert_eq!(from_pairs, from_intervals);
    }

    // ---- tree gradients ----

    #[test]
    fn tree_gradients_leave_exactly_vertices_and_edges(n in 2usize..=9, seed in any::<u64>(), order_seed in any::<u64>()) {
        let tree = datasets::random_tree(n, seed, WeightRange::default());
        let x = tree_metric(&tree);
        let tm = TreeMetricSpace::recover(&x).unwrap();
        let k = vietoris_rips(&x, &x.max_distance(), None, B).unwrap();
        let expected = vertices_and_tree_edges(&tree);
        let canonical = canonical_gradient(&tm).unwrap();
        let perturbed = perturbed_gradient(&tm, &datasets::random_order(n, order_seed)).unwrap();
        let order = compatible_order(&tree, seed as usize % n);
        let f = Filtration::new(k.clone(), distance_levels(&x), order, SimplexOrder::Lexicographic);
        let apparent = zero_persistence_apparent_pairs(&f).to_gradient();
        for v in [&canonical, &perturbed, &apparent] {
            prop_assert_eq!(critical_cells(v, &k), expected.clone());
            prop_assert!(chi_matches(&k, v));
            prop_assert!(validate_gradient(&k, v, ValidationOptions::default()).ok());
        }
    }

    #[test]
    fn refinement_chain_on_trees(n in 2usize..=9, seed in any::<u64>()) {
        let tree = datasets::random_tree(n, seed, WeightRange::default());
        let tm = TreeMetricSpace::from_tree(&tree).unwrap();
        let order = compatible_order(&tree, 0);
        let canonical = canonical_gradient(&tm).unwrap();
        let perturbed = perturbed_gradient(&tm, &order).unwrap();
        let f = full_filtration(tm.space(), None, order, SimplexOrder::Lexicographic);
        let apparent = zero_persistence_apparent_pairs(&f).to_gradient();
        prop_assert!(refinement_check(&perturbed, &canonical).refines);
        prop_assert!(refinement_check(&perturbed, &apparent).refines);
    }

    #[test]
    fn generic_apparent_pairs_refine_generic_gradient(n in 2usize..=8, seed in any::<u64>(), order_seed in any::<u64>()) {
        let tree = datasets::random_generic_tree(n, seed);
        let tm = TreeMetricSpace::from_tree(&tree).unwrap();
        let order = datasets::random_order(n, order_seed);
        let generic = generic_gradient(&tm).unwrap();
        let f = full_filtration(tm.space(), None, order.clone(), SimplexOrder::Lexicographic);
        prop_assert_eq!(zero_persistence_apparent_pairs(&f), minimal_vertex_refinement(&generic, &order));
    }

    #[test]
    fn reversed_lex_equals_reverse_colex(n in 2usize..=7, seed in any::<u64>(), order_seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let order = datasets::random_order(n, order_seed);
        let lex = full_filtration(&x, None, order.reversed(), SimplexOrder::Lexicographic);
        let colex = full_filtration(&x, None, order, SimplexOrder::ReverseColexicographic);
        prop_assert_eq!(lex.simplices(), colex.simplices());
        prop_assert_eq!(apparent_pairs(&lex), apparent_pairs(&colex));
    }

    #[test]
    fn tree_ball_intersections(n in 2usize..=9, seed in any::<u64>()) {
        let (_, x) = datasets::random_tree_metric(n, seed);
        for (a, b) in x.pairs() {
            let r = x.dist(a, b);
            let inter: Vec<usize> = (0..n).filter(|&z| x.dist(a, z) <= r && x.dist(b, z) <= r).collect();
            let mut diam = DistanceValue::from_int(0);
            for &p in &inter {
                for &q in &inter {
                    diam = diam.max(x.dist(p, q).clone());
                    if x.dist(p, q) == r {
                        for v in [p, q] {
                            prop_assert!(x.dist(a, v) == r || x.dist(b, v) == r);
                        }
                    }
                }
            }
            prop_assert_eq!(&diam, r);
        }
    }

    #[test]
    fn cone_strata_share_one_apex(n in 2usize..=7, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let t = contractibility_threshold(&x).theta;
        let cone = cone_gradient(&x, &t, 0, true, B).unwrap();
        for stratum in &cone.strata {
            for i in stratum.gradient.intervals() {
                prop_assert_eq!(i.phi.minus_mask(i.rho), 1u64 << stratum.apex);
                prop_assert!(i.rho.contains(stratum.vertex));
            }
        }
    }

    // ---- persistence ----

    #[test]
    fn degree_zero_matches_union_find(n in 1usize..=10, seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange { low: 1, high: 30 });
        let f = full_filtration(&x, Some(1), VertexOrder::identity(n), SimplexOrder::Lexicographic);
        let (b, _) = persistent_homology(&f, 0, true, usize::MAX).unwrap();
        let mut expected: Vec<(usize, Option<usize>)> = union_find_deaths(&x).into_iter().map(|d| (0, Some(d))).collect();
        expected.push((0, None));
        expected.sort();
        prop_assert_eq!(bars(&b, 0), expected);
    }

    #[test]
    fn barcode_is_order_independent(n in 3usize..=7, seed in any::<u64>(), order_seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let base = full_filtration(&x, Some(3), VertexOrder::identity(n), SimplexOrder::Lexicographic);
        let (reference, _) = persistent_homology(&base, 2, true, usize::MAX).unwrap();
        for k in 0..5 {
            let order = datasets::random_order(n, order_seed.wrapping_add(k));
            let f = full_filtration(&x, Some(3), order, SimplexOrder::Lexicographic);
            let (b, _) = persistent_homology(&f, 2, true, usize::MAX).unwrap();
            for d in 0..=2 {
                prop_assert_eq!(bars(&b, d), bars(&reference, d));
            }
        }
    }

    #[test]
    fn shortcut_does_not_change_barcode(n in 2usize..=7, seed in any::<u64>(), order_seed in any::<u64>()) {
        let x = datasets::random_metric(n, seed, WeightRange::default());
        let f = full_filtration(&x, Some(3), datasets::random_order(n, order_seed), SimplexOrder::Lexicographic);
        let (with, stats) = persistent_homology(&f, 2, true, usize::MAX).unwrap();
        let (without, plain) = persistent_homology(&f, 2, false, usize::MAX).unwrap();
        prop_assert_eq!(with, without);
        prop_assert_eq!(stats.apparent_skipped + stats.reduced_with_work + stats.critical, stats.columns);
        prop_assert_eq!(plain.apparent_skipped, 0);
    }
}

#[test]
fn collapse_preserves_homology_between_levels() {
    for seed in 0..8u64 {
        let x = datasets::random_metric(5 + seed as usize % 3, seed, WeightRange::default());
        let levels = distance_levels(&x);
        let fc = ripscollapse::gradients::filtered_cone_gradient(&x, 0, B).unwrap();
        for m in (fc.base_level + 1)..levels.len() {
            let k = vietoris_rips_at_level(&levels, m, None, B).unwrap();
            let l = vietoris_rips_at_level(&levels, m - 1, None, B).unwrap();
            let cert = collapse(&k, &fc.gradient.restrict(&k, Some(&l)), &l, &VertexOrder::identity(x.len())).unwrap();
            assert_eq!(replay(&k, &cert).unwrap(), l);
            if k.len() <= 2000 {
                let mut after = homology_oracle(&l, 2000).unwrap();
                let before = homology_oracle(&k, 2000).unwrap();
                after.resize(before.len(), 0);
                assert_eq!(before, after);
            }
        }
    }
}

#[test]
fn cyclic_matching_is_rejected() {
    let k = SimplicialComplex::closure(3, [Simplex::edge(0, 1), Simplex::edge(1, 2), Simplex::edge(0, 2)]).unwrap();
    let v = DiscreteGradient::from_pairs([
        (Simplex::vertex(0), Simplex::edge(0, 1)),
        (Simplex::vertex(1), Simplex::edge(1, 2)),
        (Simplex::vertex(2), Simplex::edge(0, 2)),
    ])
    .unwrap();
    let report = validate_gradient(&k, &v, ValidationOptions::default());
    assert!(!report.ok());
}
