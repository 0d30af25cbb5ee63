//! Verification pipelines: construction, validation, collapse, replay and homology checks,
//! each recorded as assertions on a [`RunReport`].

use serde_json::json;

use ripscollapse::complex::{
    distance_levels, euler_characteristic, subforest, vietoris_rips_at_level, DistanceLevels, Filtration, Simplex,
    SimplexOrder, SimplicialComplex, VertexOrder,
};
use ripscollapse::datasets;
use ripscollapse::gradients::{
    apparent_pairs, canonical_gradient, filtered_cone_gradient, generic_gradient, perturbed_gradient,
    refinement_check, zero_persistence_apparent_pairs, GradientError, RefinementReport, RefinementWitness,
    TreeMetricSpace,
};
use ripscollapse::metric::{geodesic_defect, is_compatible_order, FiniteMetricSpace, WeightedTree};
use ripscollapse::morse::{
    collapse, critical_cells, minimal_vertex_refinement, replay, validate_gradient, DiscreteGradient,
    ValidationOptions,
};
use ripscollapse::persistence::{h1_surjectivity_check, homology_oracle, persistent_homology, DEFAULT_ORACLE_BUDGET};
use ripscollapse::DistanceValue;

use crate::error::CliError;
use crate::report::{simplex, simplices, value, RunReport};

/// Limits shared by all pipelines.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub budget: usize,
    pub oracle_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: ripscollapse::complex::DEFAULT_SIMPLEX_BUDGET, oracle_budget: DEFAULT_ORACLE_BUDGET }
    }
}

/// Aggregates many instances of one claim into a single assertion.
struct Tally {
    name: String,
    checked: usize,
    skipped: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), checked: 0, skipped: 0, failure: None }
    }

    fn add(&mut self, outcome: Result<(), String>) {
        self.checked += 1;
        if let (Err(e), None) = (outcome, &self.failure) {
            self.failure = Some(e);
        }
    }

    fn finish(self, report: &mut RunReport) -> bool {
        if self.checked == 0 && self.skipped > 0 {
            report.skip(self.name, format!("{} instances above the oracle budget", self.skipped));
            return true;
        }
        let detail = match &self.failure {
            Some(e) => e.clone(),
            None if self.skipped > 0 => format!("{} instances, {} above the oracle budget", self.checked, self.skipped),
            None => format!("{} instances", self.checked),
        };
        report.check(self.name, self.failure.is_none(), Some(detail))
    }
}

fn level_name(levels: &DistanceLevels, m: usize) -> String {
    format!("r_{m}={}", levels.value(m))
}

/// Realizes `k ↘ l` from `v` restricted to `k ∖ l`, replays the certificate and compares
/// Betti numbers of both ends.
#[allow(clippy::too_many_arguments)]
fn collapse_and_compare(
    k: &SimplicialComplex,
    v: &DiscreteGradient,
    l: &SimplicialComplex,
    order: &VertexOrder,
    names: &[String],
    limits: Limits,
    collapses: &mut Tally,
    homology: &mut Tally,
    label: &str,
) {
    let restricted = v.restrict(k, Some(l));
    let certificate = match collapse(k, &restricted, l, order) {
        Ok(c) => c,
        Err(e) => {
            let left: Vec<Simplex> = critical_cells(&restricted, k).into_iter().filter(|s| !l.contains(*s)).collect();
            collapses.add(Err(format!("{label}: {e}; critical outside target: {}", simplices(&left, names).join(" "))));
            return;
        }
    };
    collapses.add(match replay(k, &certificate) {
        Ok(end) if &end == l => Ok(()),
        Ok(_) => Err(format!("{label}: replay ended elsewhere")),
        Err(e) => Err(format!("{label}: {e}")),
    });
    if k.len() > limits.oracle_budget {
        homology.skipped += 1;
        return;
    }
    let before = homology_oracle(k, limits.oracle_budget).expect("within budget");
    let mut after = homology_oracle(l, limits.oracle_budget).expect("smaller than k");
    after.resize(before.len(), 0);
    homology.add(if before == after {
        Ok(())
    } else {
        Err(format!("{label}: Betti numbers {before:?} before, {after:?} after"))
    });
}

fn vertices_and_edges(tree: &WeightedTree) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = (0..tree.len()).map(Simplex::vertex).collect();
    out.extend(tree.edges().iter().map(|e| Simplex::edge(e.u, e.v)));
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

fn euler_check(report: &mut RunReport, k: &SimplicialComplex, v: &DiscreteGradient) -> bool {
    let critical = euler_characteristic(critical_cells(v, k));
    report.check(
        "euler characteristic of critical cells",
        critical == k.euler_characteristic(),
        Some(format!("chi(K) = {}, chi(critical) = {critical}", k.euler_characteristic())),
    )
}

/// Validation, critical cells `V ∪ E` and the level-by-level collapses of a gradient on a tree
/// metric: `VR_t ↘ T_t` at every level, and `VR_u ↘ VR_t` for adjacent levels with no tree edge
/// of length in `(t, u]`.
fn tree_collapses(
    report: &mut RunReport,
    label: &str,
    tree: &WeightedTree,
    levels: &DistanceLevels,
    v: &DiscreteGradient,
    order: &VertexOrder,
    limits: Limits,
) -> Result<(), CliError> {
    let names = tree.names().to_vec();
    let full = vietoris_rips_at_level(levels, levels.top(), None, limits.budget)?;
    let validation = validate_gradient(
        &full,
        v,
        ValidationOptions { subcomplex: None, order: Some(order), levels: Some(levels) },
    );
    report.validation(label, &validation, &names);
    let critical = critical_cells(v, &full);
    let expected = vertices_and_edges(tree);
    report.result("critical_cells", simplices(&critical, &names));
    report.check(
        "critical cells are exactly the vertices and tree edges",
        critical == expected,
        Some(format!("critical: {}", simplices(&critical, &names).join(" "))),
    );
    euler_check(report, &full, v);

    let mut to_forest = Tally::new("collapse VR_t onto the subforest T_t at every level");
    let mut between = Tally::new("collapse VR_u onto VR_t for adjacent levels without tree edges in (t,u]");
    let mut homology = Tally::new("homology preserved by every collapse");
    let mut below: Option<SimplicialComplex> = None;
    for m in 0..levels.len() {
        let k = vietoris_rips_at_level(levels, m, None, limits.budget)?;
        let forest = subforest(tree, levels.value(m));
        collapse_and_compare(&k, v, &forest, order, &names, limits, &mut to_forest, &mut homology, &level_name(levels, m));
        if let Some(prev) = &below {
            if !tree.edges().iter().any(|e| levels.pair(e.u, e.v) == m) {
                let label = format!("{} -> {}", level_name(levels, m), level_name(levels, m - 1));
                collapse_and_compare(&k, v, prev, order, &names, limits, &mut between, &mut homology, &label);
            }
        }
        below = Some(k);
    }
    to_forest.finish(report);
    between.finish(report);
    homology.finish(report);
    Ok(())
}

/// Filtered cone gradient: validates on the full complex and collapses `VR_u ↘ VR_t ↘ {p}` for
/// all levels `u > t ≥ 4δ+2ν` (or from the given `t`).
pub fn theorem1(
    report: &mut RunReport,
    space: &FiniteMetricSpace,
    reference: usize,
    t: Option<&DistanceValue>,
    limits: Limits,
) -> Result<(), CliError> {
    let names = space.names().to_vec();
    let fc = match filtered_cone_gradient(space, reference, limits.budget) {
        Ok(fc) => fc,
        Err(e @ (GradientError::NoApex { .. } | GradientError::Morse(_))) => {
            report.check("filtered cone gradient construction", false, Some(e.to_string()));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    report.result("delta", value(&fc.threshold.delta));
    report.result("nu", value(&fc.threshold.nu));
    report.result("threshold", value(&fc.threshold.theta));
    report.result("intervals", fc.gradient.len());
    report.result("strata", fc.strata.len() + fc.base.strata.len());
    report.line(format!(
        "delta = {}, nu = {}, 4*delta + 2*nu = {}",
        fc.threshold.delta, fc.threshold.nu, fc.threshold.theta
    ));
    let levels = distance_levels(space);
    let start = match t {
        None => fc.base_level,
        Some(t) => {
            report.check(
                "t is at least 4*delta + 2*nu",
                space.mode().le(&fc.threshold.theta, t),
                Some(format!("t = {t}, 4*delta + 2*nu = {}", fc.threshold.theta)),
            );
            levels.level_at_most(t).ok_or_else(|| CliError::Input("t must be nonnegative".into()))?
        }
    };
    report.result("start_level", json!({ "index": start, "value": value(levels.value(start)) }));

    let full = vietoris_rips_at_level(&levels, levels.top(), None, limits.budget)?;
    let point = SimplicialComplex::closure(space.len(), [Simplex::vertex(reference)])?;
    let order = VertexOrder::identity(space.len());
    let validation =
        validate_gradient(&full, &fc.gradient, ValidationOptions { subcomplex: Some(&point), order: Some(&order), levels: None });
    report.validation("filtered cone gradient", &validation, &names);
    let above: Vec<&DiscreteGradient> = fc.level_gradients.iter().map(|(_, v)| v).collect();
    let compatible = fc
        .level_gradients
        .iter()
        .all(|(m, v)| v.intervals().iter().all(|i| levels.simplex(i.rho) == *m && levels.simplex(i.phi) == *m));
    report.check(
        "strata above the threshold are diameter-constant",
        compatible,
        Some(format!("{} level gradients", above.len())),
    );
    euler_check(report, &full, &fc.gradient);

    let mut to_point = Tally::new("collapse VR_t onto the reference point for every level t above the threshold");
    let mut between = Tally::new("collapse VR_u onto VR_t for adjacent levels above the threshold");
    let mut homology = Tally::new("homology preserved by every collapse");
    let mut below: Option<SimplicialComplex> = None;
    for m in start..levels.len() {
        let k = vietoris_rips_at_level(&levels, m, None, limits.budget)?;
        collapse_and_compare(&k, &fc.gradient, &point, &order, &names, limits, &mut to_point, &mut homology, &level_name(&levels, m));
        if let Some(prev) = &below {
            let label = format!("{} -> {}", level_name(&levels, m), level_name(&levels, m - 1));
            collapse_and_compare(&k, &fc.gradient, prev, &order, &names, limits, &mut between, &mut homology, &label);
        }
        below = Some(k);
    }
    to_point.finish(report);
    between.finish(report);
    homology.finish(report);
    Ok(())
}

/// Zero-persistence apparent pairs on a tree metric under a compatible order.
pub fn theorem2(
    report: &mut RunReport,
    tree: &WeightedTree,
    space: &FiniteMetricSpace,
    order: &VertexOrder,
    convention: SimplexOrder,
    limits: Limits,
) -> Result<(), CliError> {
    let levels = distance_levels(space);
    let full = vietoris_rips_at_level(&levels, levels.top(), None, limits.budget)?;
    let f = Filtration::new(full.clone(), levels.clone(), order.clone(), convention);
    let v = zero_persistence_apparent_pairs(&f).to_gradient();
    report.result("pairs", v.len());
    tree_collapses(report, "zero-persistence apparent pairs", tree, &levels, &v, order, limits)?;
    let max_degree = full.dimension().unwrap_or(0).saturating_sub(1).max(1);
    let (barcode, stats) = persistent_homology(&f, max_degree, true, limits.budget)?;
    let nontrivial: Vec<String> = (1..=max_degree)
        .flat_map(|k| barcode.degree(k).iter().map(move |i| {
            let death = i.death.as_ref().map_or("inf".to_string(), |d| d.to_string());
            format!("H{k} [{}, {death})", i.birth)
        }))
        .collect();
    report.check(
        "barcode is trivial in degrees 1 and above",
        nontrivial.is_empty(),
        Some(if nontrivial.is_empty() { format!("degrees 1..={max_degree}") } else { nontrivial.join(", ") }),
    );
    report.result("additions_in_degree_1_and_above", stats.additions_from(1));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeGradient {
    Generic,
    Canonical,
    Perturbed,
}

pub fn tree_gradient(
    report: &mut RunReport,
    tree: &WeightedTree,
    kind: TreeGradient,
    order: &VertexOrder,
    limits: Limits,
) -> Result<(), CliError> {
    let tm = TreeMetricSpace::from_tree(tree)?;
    let (label, v) = match kind {
        TreeGradient::Generic => ("generic gradient", generic_gradient(&tm)?),
        TreeGradient::Canonical => ("canonical gradient", canonical_gradient(&tm)?),
        TreeGradient::Perturbed => ("perturbed gradient", perturbed_gradient(&tm, order)?),
    };
    report.result("intervals", v.len());
    tree_collapses(report, label, tree, tm.levels(), &v, order, limits)
}

fn refinement_assertion(report: &mut RunReport, name: &str, r: &RefinementReport, names: &[String]) -> bool {
    let detail = match &r.witness {
        None => format!("{} coarse intervals, {} fine intervals", r.coarse_intervals, r.fine_intervals),
        Some(RefinementWitness::Straddles { fine }) => {
            format!("fine interval [{}, {}] lies in no coarse interval", simplex(fine.rho, names), simplex(fine.phi, names))
        }
        Some(RefinementWitness::Overlap { simplex: s }) => format!("{} is covered twice", simplex(*s, names)),
        Some(RefinementWitness::Uncovered { coarse, simplex: s }) => format!(
            "{} in [{}, {}] is not covered",
            simplex(*s, names),
            simplex(coarse.rho, names),
            simplex(coarse.phi, names)
        ),
    };
    report.check(name, r.refines, Some(detail))
}

/// The refinement chain on a tree metric, plus the generic-case identity with minimal vertex
/// refinements for five seeded random orders.
pub fn refinement(
    report: &mut RunReport,
    tree: &WeightedTree,
    order: &VertexOrder,
    seed: u64,
    limits: Limits,
) -> Result<(), CliError> {
    let names = tree.names().to_vec();
    let tm = TreeMetricSpace::from_tree(tree)?;
    let canonical = canonical_gradient(&tm)?;
    let perturbed = perturbed_gradient(&tm, order)?;
    let levels = tm.levels().clone();
    let full = vietoris_rips_at_level(&levels, levels.top(), None, limits.budget)?;
    let f = Filtration::new(full.clone(), levels.clone(), order.clone(), SimplexOrder::Lexicographic);
    let apparent = zero_persistence_apparent_pairs(&f).to_gradient();
    refinement_assertion(report, "perturbed intervals are unions of canonical intervals", &refinement_check(&perturbed, &canonical), &names);
    refinement_assertion(report, "perturbed intervals are unions of apparent pairs", &refinement_check(&perturbed, &apparent), &names);
    match generic_gradient(&tm) {
        Ok(generic) => {
            let mut tally = Tally::new("generic: zero-persistence apparent pairs equal the minimal vertex refinement");
            for k in 0..5 {
                let random = datasets::random_order(tree.len(), seed.wrapping_add(k));
                let f = Filtration::new(full.clone(), levels.clone(), random.clone(), SimplexOrder::Lexicographic);
                let ok = zero_persistence_apparent_pairs(&f) == minimal_vertex_refinement(&generic, &random);
                tally.add(if ok { Ok(()) } else { Err(format!("order {:?}", random.sequence())) });
            }
            tally.finish(report);
        }
        Err(GradientError::NotGeneric { .. }) => {
            report.skip("generic: zero-persistence apparent pairs equal the minimal vertex refinement", "metric is not generic")
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn h1_surjectivity(report: &mut RunReport, space: &FiniteMetricSpace, limits: Limits) -> Result<(), CliError> {
    let nu = geodesic_defect(space).nu;
    let r = h1_surjectivity_check(space, &nu, limits.budget)?;
    report.result("nu", value(&nu));
    report.result("bound", value(&r.bound));
    let detail = match &r.witness {
        None => format!("no degree-1 interval born after 2*nu = {}", r.bound),
        Some(i) => format!(
            "interval born at {} ({}) exceeds 2*nu = {}",
            i.birth,
            simplex(i.birth_simplex, space.names()),
            r.bound
        ),
    };
    report.check("H1(VR_t) -> H1(VR_u) is onto for all 2*nu < t < u", r.holds, Some(detail));
    Ok(())
}

/// Tries to realize `VR_u ↘ VR_t` with the apparent-pairs gradient.
pub fn apparent_collapse(
    report: &mut RunReport,
    space: &FiniteMetricSpace,
    u: &DistanceValue,
    t: &DistanceValue,
    order: &VertexOrder,
    convention: SimplexOrder,
    limits: Limits,
) -> Result<(), CliError> {
    let names = space.names().to_vec();
    let levels = distance_levels(space);
    let lu = levels.level_at_most(u).ok_or_else(|| CliError::Input("u must be nonnegative".into()))?;
    let lt = levels.level_at_most(t).ok_or_else(|| CliError::Input("t must be nonnegative".into()))?;
    if lt > lu {
        return Err(CliError::Input("t must not exceed u".into()));
    }
    let k = vietoris_rips_at_level(&levels, lu, None, limits.budget)?;
    let l = vietoris_rips_at_level(&levels, lt, None, limits.budget)?;
    let f = Filtration::new(k.clone(), levels.clone(), order.clone(), convention);
    let v = apparent_pairs(&f).to_gradient().restrict(&k, Some(&l));
    let critical: Vec<Simplex> = critical_cells(&v, &k).into_iter().filter(|s| !l.contains(*s)).collect();
    report.result("critical_between", simplices(&critical, &names));
    report.line(format!("critical simplices in VR_u minus VR_t: {}", simplices(&critical, &names).join(" ")));
    let validation = validate_gradient(&k, &v, ValidationOptions { subcomplex: Some(&l), order: Some(order), levels: Some(&levels) });
    report.validation("apparent pairs on VR_u minus VR_t", &validation, &names);
    let mut collapses = Tally::new("apparent pairs collapse VR_u onto VR_t");
    let mut homology = Tally::new("homology preserved by the collapse");
    let label = format!("{} -> {}", level_name(&levels, lu), level_name(&levels, lt));
    collapse_and_compare(&k, &v, &l, order, &names, limits, &mut collapses, &mut homology, &label);
    collapses.finish(report);
    if homology.checked > 0 || homology.skipped > 0 {
        homology.finish(report);
    }
    Ok(())
}

/// Whether `order` is compatible with the tree rooted at `root` under `convention`.
pub fn order_is_compatible(tree: &WeightedTree, root: usize, order: &VertexOrder, convention: SimplexOrder) -> bool {
    // Reverse-colexicographic comparison under an order equals lexicographic under its reverse.
    match convention {
        SimplexOrder::Lexicographic => is_compatible_order(tree, root, order),
        SimplexOrder::ReverseColexicographic => is_compatible_order(tree, root, &order.reversed()),
    }
}
