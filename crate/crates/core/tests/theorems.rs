//! End-to-end checks of the collapse theorems on small fixtures and seeded random inputs.

use ripscollapse::complex::{
    distance_levels, subforest, vietoris_rips_at_level, Filtration, Simplex, SimplexOrder, SimplicialComplex,
    VertexOrder, DEFAULT_SIMPLEX_BUDGET,
};
use ripscollapse::datasets;
use ripscollapse::gradients::{
    canonical_gradient, filtered_cone_gradient, perturbed_gradient, refinement_check,
    zero_persistence_apparent_pairs, TreeMetricSpace,
};
use ripscollapse::metric::{compatible_order, tree_metric, FiniteMetricSpace, WeightedTree};
use ripscollapse::morse::{collapse, critical_cells, replay, validate_gradient, DiscreteGradient, ValidationOptions};
use ripscollapse::persistence::{homology_oracle, persistent_homology, DEFAULT_ORACLE_BUDGET};

const B: usize = DEFAULT_SIMPLEX_BUDGET;

fn full_filtration(x: &FiniteMetricSpace, order: VertexOrder, convention: SimplexOrder) -> Filtration {
    let levels = distance_levels(x);
    let k = vietoris_rips_at_level(&levels, levels.top(), None, B).unwrap();
    Filtration::new(k, levels, order, convention)
}

fn tree_edges_and_vertices(tree: &WeightedTree) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = (0..tree.len()).map(Simplex::vertex).collect();
    out.extend(tree.edges().iter().map(|e| Simplex::edge(e.u, e.v)));
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

fn collapse_and_check(k: &SimplicialComplex, v: &DiscreteGradient, l: &SimplicialComplex, order: &VertexOrder) {
    let restricted = v.restrict(k, Some(l));
    let cert = collapse(k, &restricted, l, order).unwrap_or_else(|e| panic!("collapse failed: {e}"));
    assert_eq!(&replay(k, &cert).unwrap(), l);
    if k.len() <= DEFAULT_ORACLE_BUDGET {
        let before = homology_oracle(k, DEFAULT_ORACLE_BUDGET).unwrap();
        let mut after = homology_oracle(l, DEFAULT_ORACLE_BUDGET).unwrap();
        after.resize(before.len(), 0);
        assert_eq!(before, after);
    }
}

fn theorem2_instance(tree: &WeightedTree) {
    let x = tree_metric(tree);
    let order = compatible_order(tree, 0);
    let f = full_filtration(&x, order.clone(), SimplexOrder::Lexicographic);
    let levels = f.levels().clone();
    let v = zero_persistence_apparent_pairs(&f).to_gradient();
    let report = validate_gradient(f.complex(), &v, ValidationOptions { levels: Some(&levels), ..Default::default() });
    assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
    assert_eq!(critical_cells(&v, f.complex()), tree_edges_and_vertices(tree));
    for m in 0..levels.len() {
        let k = vietoris_rips_at_level(&levels, m, None, B).unwrap();
        let forest = subforest(tree, levels.value(m));
        collapse_and_check(&k, &v, &forest, &order);
        if m > 0 && !tree.edges().iter().any(|e| levels.pair(e.u, e.v) == m) {
            let below = vietoris_rips_at_level(&levels, m - 1, None, B).unwrap();
            collapse_and_check(&k, &v, &below, &order);
        }
    }
    let (barcode, _) = persistent_homology(&f, x.len().saturating_sub(2).max(1), true, usize::MAX).unwrap();
    assert!(barcode.is_trivial_from(1));
    let tm = TreeMetricSpace::from_tree(tree).unwrap();
    let canonical = canonical_gradient(&tm).unwrap();
    let perturbed = perturbed_gradient(&tm, &order).unwrap();
    assert!(refinement_check(&perturbed, &canonical).refines);
    assert!(refinement_check(&perturbed, &v).refines);
}

fn theorem1_instance(x: &FiniteMetricSpace) {
    let fc = filtered_cone_gradient(x, 0, B).unwrap();
    let levels = distance_levels(x);
    let top = vietoris_rips_at_level(&levels, levels.top(), None, B).unwrap();
    let point = SimplicialComplex::closure(x.len(), [Simplex::vertex(0)]).unwrap();
    let report = validate_gradient(&top, &fc.gradient, ValidationOptions { subcomplex: Some(&point), ..Default::default() });
    assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
    let order = VertexOrder::identity(x.len());
    for m in fc.base_level..levels.len() {
        let k = vietoris_rips_at_level(&levels, m, None, B).unwrap();
        collapse_and_check(&k, &fc.gradient, &point, &order);
        if m > fc.base_level {
            let below = vietoris_rips_at_level(&levels, m - 1, None, B).unwrap();
            collapse_and_check(&k, &fc.gradient, &below, &order);
        }
    }
}

#[test]
fn fixture_trees_satisfy_theorem2() {
    theorem2_instance(&datasets::unit_star_tree());
    theorem2_instance(&datasets::generic_tree());
}

#[test]
fn random_trees_satisfy_theorem2() {
    for seed in 0..12u64 {
        let (tree, _) = datasets::random_tree_metric(4 + (seed as usize % 6), seed);
        theorem2_instance(&tree);
    }
}

#[test]
fn filtered_cone_on_fixtures() {
    theorem1_instance(&tree_metric(&datasets::unit_star_tree()));
    theorem1_instance(&tree_metric(&datasets::generic_tree()));
    theorem1_instance(&datasets::counterexample_graph());
    theorem1_instance(&datasets::cycle_graph(5));
}

#[test]
fn filtered_cone_on_random_inputs() {
    for seed in 0..6u64 {
        let (_, x) = datasets::random_tree_metric(4 + (seed as usize % 5), seed);
        theorem1_instance(&x);
        let y = datasets::random_metric(4 + (seed as usize % 3), seed, Default::default());
        theorem1_instance(&y);
    }
}

#[test]
fn reverse_compatible_reduction_needs_no_additions() {
    for seed in 0..10u64 {
        let (tree, x) = datasets::random_tree_metric(4 + (seed as usize % 6), seed);
        let order = compatible_order(&tree, 0).reversed();
        let f = full_filtration(&x, order, SimplexOrder::ReverseColexicographic);
        let (_, stats) = persistent_homology(&f, 2, true, usize::MAX).unwrap();
        assert_eq!(stats.additions_from(1), 0, "seed {seed}: {stats:?}");
    }
}

#[test]
fn counterexample_apparent_pairs_leave_diameter_fifteen_critical() {
    let x = datasets::counterexample_graph();
    let f = full_filtration(&x, VertexOrder::identity(x.len()), SimplexOrder::Lexicographic);
    let v = ripscollapse::gradients::apparent_pairs(&f).to_gradient();
    let critical = critical_cells(&v, f.complex());
    let names = x.names().to_vec();
    let shown: Vec<String> = critical.iter().map(|s| format!("{} @ {}", s.display_with(&names), f.diameter(*s))).collect();
    println!("{} simplices, critical: {shown:?}", f.len());
    let at15: Vec<Simplex> = critical.iter().copied().filter(|s| f.diameter(*s).to_string() == "15").collect();
    let idx = |n: &str| x.index_of(n).unwrap();
    assert_eq!(at15, vec![Simplex::edge(idx("b"), idx("e")), Simplex::new(&[idx("b"), idx("d"), idx("e")])]);
}
