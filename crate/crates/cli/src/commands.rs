use serde_json::{json, Value};

use ripscollapse::complex::{
    distance_levels, subforest, vietoris_rips_at_level, DistanceLevels, Filtration, Simplex,
    SimplicialComplex, VertexOrder,
};
use ripscollapse::datasets::{self, WeightRange};
use ripscollapse::gradients::{
    apparent_pairs, canonical_gradient, cone_gradient, contractibility_threshold, filtered_cone_gradient,
    generic_gradient, perturbed_gradient, zero_persistence_apparent_pairs, TreeMetricSpace,
};
use ripscollapse::metric::{
    compatible_order, format_lower_triangular, format_tree, geodesic_defect, hyperbolicity, is_compatible_order,
    parse_tree, tree_metric, WeightedTree,
};
use ripscollapse::morse::{collapse, critical_cells, replay, validate_gradient, DiscreteGradient, ValidationOptions};
use ripscollapse::persistence::{homology_oracle, persistent_homology, DEFAULT_ORACLE_BUDGET};
use ripscollapse::DistanceValue;

use crate::args::{Cli, CollapseTarget, Command, GenKind, GlobalOpts, GradientKind, OrderKind, OrderOpts, Pipeline};
use crate::error::CliError;
use crate::input::{self, Loaded};
use crate::pipelines::{self, Limits, TreeGradient};
use crate::report::{simplex, simplices, value, RunReport};

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Vr { .. } => "vr",
            Command::Gradient { .. } => "gradient",
            Command::Collapse { .. } => "collapse",
            Command::Persistence { .. } => "persistence",
            Command::Verify { .. } => "verify",
            Command::Gen { .. } => "gen",
            Command::Order { .. } => "order",
        }
    }
}

fn limits(global: &GlobalOpts) -> Limits {
    Limits { budget: global.budget, oracle_budget: DEFAULT_ORACLE_BUDGET }
}

/// Runs one command. The report's `passed` flag decides between exit codes 0 and 1.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let global = &cli.global;
    let mut report = RunReport::new(cli.command.name());
    report.param("mode", format!("{:?}", global.mode).to_lowercase());
    report.param("seed", global.seed);
    report.param("budget", global.budget);
    if let Some(cap) = global.dim_cap {
        report.param("dim_cap", cap);
    }
    match &cli.command {
        Command::Analyze { input } => {
            let loaded = input::load(input, global)?;
            analyze(&mut report, &loaded)?;
        }
        Command::Vr { input, t, level, order } => {
            let loaded = input::load(input, global)?;
            vr(&mut report, &loaded, global, t.as_deref(), *level, order)?;
        }
        Command::Gradient { input, kind, t, reference, no_threshold_check, order } => {
            let loaded = input::load(input, global)?;
            gradient(&mut report, &loaded, global, *kind, t.as_deref(), reference.as_deref(), *no_threshold_check, order)?;
        }
        Command::Collapse { input, kind, u, t, target, reference, order } => {
            let loaded = input::load(input, global)?;
            let spec = CollapseSpec { kind: *kind, u: u.as_deref(), t: t.as_deref(), target: *target, reference: reference.as_deref() };
            collapse_command(&mut report, &loaded, global, &spec, order)?;
        }
        Command::Persistence { input, max_degree, no_shortcut, show_zero, order } => {
            let loaded = input::load(input, global)?;
            persistence(&mut report, &loaded, global, *max_degree, !*no_shortcut, *show_zero, order)?;
        }
        Command::Verify { pipeline, input, t, u, n, reference, allow_incompatible, order } => {
            let spec = VerifySpec {
                pipeline: *pipeline,
                input: input.as_deref(),
                t: t.as_deref(),
                u: u.as_deref(),
                n: *n,
                reference: reference.as_deref(),
                allow_incompatible: *allow_incompatible,
            };
            verify(&mut report, global, &spec, order)?;
        }
        Command::Gen { kind, n, low, high, step, tree, out } => {
            gen(&mut report, global, *kind, *n, WeightRange { low: *low, high: *high }, step, tree.as_deref(), out.as_deref())?;
        }
        Command::Order { input, root, reverse } => {
            let loaded = input::load(input, global)?;
            order(&mut report, &loaded, root.as_deref(), *reverse)?;
        }
    }
    Ok(report)
}

fn start(report: &mut RunReport, loaded: &Loaded) {
    report.input_digest = Some(loaded.digest.clone());
    report.result("points", loaded.space.len());
}

fn analyze(report: &mut RunReport, loaded: &Loaded) -> Result<(), CliError> {
    start(report, loaded);
    let space = &loaded.space;
    let names = space.names();
    let h = hyperbolicity(space);
    let d = geodesic_defect(space);
    let theta = &h.delta.scale(4) + &d.nu.scale(2);
    let levels = distance_levels(space);
    report.line(format!("points: {}", space.len()));
    let quad = h.witness.map(|q| q.iter().map(|&i| names[i].clone()).collect::<Vec<_>>());
    report.result("delta", json!({ "value": value(&h.delta), "witness": quad }));
    report.line(match &quad {
        Some(q) => format!("delta: {} (attained by {})", h.delta, q.join(" ")),
        None => format!("delta: {}", h.delta),
    });
    let split = d.witness.as_ref().map(|(x, y, r)| json!({ "x": names[*x], "y": names[*y], "r": value(r) }));
    report.result("nu", json!({ "value": value(&d.nu), "witness": split }));
    report.line(match &d.witness {
        Some((x, y, r)) => format!("nu: {} (pair {} {} split at {r})", d.nu, names[*x], names[*y]),
        None => format!("nu: {}", d.nu),
    });
    report.result("threshold", value(&theta));
    report.line(format!("4*delta + 2*nu: {theta}"));
    report.result("levels", levels.values().iter().map(value).collect::<Vec<_>>());
    report.line(format!("levels: {}", levels.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
    let tree = loaded.tree.is_some() || TreeMetricSpace::recover(space).is_ok();
    report.result("tree_metric", tree);
    report.line(format!("tree metric: {}", if tree { "yes" } else { "no" }));
    for w in levels.warnings() {
        report.line(format!("warning: {w}"));
    }
    report.result("warnings", levels.warnings().to_vec());
    Ok(())
}

fn scale_level(levels: &DistanceLevels, loaded: &Loaded, t: Option<&str>, level: Option<usize>) -> Result<usize, CliError> {
    match (t, level) {
        (Some(t), _) => {
            let t = input::parse_value(t, &loaded.space)?;
            levels.level_at_most(&t).ok_or_else(|| CliError::Input("scale must be nonnegative".into()))
        }
        (None, Some(m)) if m < levels.len() => Ok(m),
        (None, Some(m)) => Err(CliError::Input(format!("level {m} out of range 0..{}", levels.len()))),
        (None, None) => Ok(levels.top()),
    }
}

fn vr(
    report: &mut RunReport,
    loaded: &Loaded,
    global: &GlobalOpts,
    t: Option<&str>,
    level: Option<usize>,
    order_opts: &OrderOpts,
) -> Result<(), CliError> {
    start(report, loaded);
    let levels = distance_levels(&loaded.space);
    let m = scale_level(&levels, loaded, t, level)?;
    let (order, convention) = input::vertex_order(loaded, order_opts, OrderKind::Identity, global.seed)?;
    let k = vietoris_rips_at_level(&levels, m, global.dim_cap, global.budget)?;
    let f = Filtration::new(k.clone(), levels.clone(), order, convention);
    let mut by_dim: Vec<usize> = Vec::new();
    for s in k.iter() {
        if by_dim.len() <= s.dim() {
            by_dim.resize(s.dim() + 1, 0);
        }
        by_dim[s.dim()] += 1;
    }
    report.result("level", m);
    report.result("scale", value(levels.value(m)));
    report.result("simplices", k.len());
    report.result("by_dimension", by_dim.clone());
    report.result("euler_characteristic", k.euler_characteristic());
    let names = loaded.space.names();
    for s in f.simplices() {
        report.line(format!("{} : {}", simplex(*s, names), f.diameter(*s)));
    }
    report.line(format!("# {} simplices, by dimension {by_dim:?}", k.len()));
    Ok(())
}

/// A gradient and the complexes it is meant for.
struct Built {
    gradient: DiscreteGradient,
    levels: DistanceLevels,
    /// Level of the host complex `K`.
    host: usize,
    /// `L` in "covers exactly `K ∖ L`".
    subcomplex: Option<SimplicialComplex>,
    diameter_constant: bool,
    order: VertexOrder,
    reference: usize,
    tree: Option<WeightedTree>,
}

fn tree_space(loaded: &Loaded) -> Result<TreeMetricSpace, CliError> {
    Ok(match &loaded.tree {
        Some(tree) => TreeMetricSpace::from_tree(tree)?,
        None => TreeMetricSpace::recover(&loaded.space)?,
    })
}

/// Makes a recovered tree available to compatible orders.
fn with_tree(loaded: &Loaded) -> Result<Loaded, CliError> {
    let mut out = loaded.clone();
    if out.tree.is_none() {
        out.tree = Some(TreeMetricSpace::recover(&loaded.space)?.tree().clone());
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn build(
    report: &mut RunReport,
    loaded: &Loaded,
    global: &GlobalOpts,
    kind: GradientKind,
    cone_scale: Option<DistanceValue>,
    reference: Option<&str>,
    enforce_threshold: bool,
    order_opts: &OrderOpts,
) -> Result<Built, CliError> {
    let space = &loaded.space;
    let p = input::point(space, reference)?;
    let levels = distance_levels(space);
    let names = space.names();
    let point = || SimplicialComplex::closure(space.len(), [Simplex::vertex(p)]);
    let identity = VertexOrder::identity(space.len());
    let built = match kind {
        GradientKind::Cone => {
            let t = match cone_scale {
                Some(t) => t,
                None => contractibility_threshold(space).theta,
            };
            let cone = cone_gradient(space, &t, p, enforce_threshold, global.budget)?;
            report.result("t", value(&cone.t));
            report.result(
                "strata",
                cone.strata
                    .iter()
                    .map(|s| json!({ "vertex": names[s.vertex], "apex": names[s.apex], "intervals": s.gradient.len() }))
                    .collect::<Vec<_>>(),
            );
            Built {
                gradient: cone.gradient,
                host: cone.t_level,
                levels,
                subcomplex: Some(point()?),
                diameter_constant: false,
                order: identity,
                reference: p,
                tree: None,
            }
        }
        GradientKind::FilteredCone => {
            let fc = filtered_cone_gradient(space, p, global.budget)?;
            report.result("delta", value(&fc.threshold.delta));
            report.result("nu", value(&fc.threshold.nu));
            report.result("threshold", value(&fc.threshold.theta));
            report.result("base_level", fc.base_level);
            report.result(
                "level_intervals",
                fc.level_gradients.iter().map(|(m, v)| json!({ "level": m, "intervals": v.len() })).collect::<Vec<_>>(),
            );
            Built {
                gradient: fc.gradient,
                host: levels.top(),
                levels,
                subcomplex: Some(point()?),
                diameter_constant: false,
                order: identity,
                reference: p,
                tree: None,
            }
        }
        GradientKind::Generic | GradientKind::Canonical | GradientKind::Perturbed => {
            let tm = tree_space(loaded)?;
            let loaded = with_tree(loaded)?;
            let (order, _) = input::vertex_order(&loaded, order_opts, OrderKind::Compatible, global.seed)?;
            let gradient = match kind {
                GradientKind::Generic => generic_gradient(&tm)?,
                GradientKind::Canonical => canonical_gradient(&tm)?,
                _ => perturbed_gradient(&tm, &order)?,
            };
            Built {
                gradient,
                host: levels.top(),
                levels,
                subcomplex: None,
                diameter_constant: true,
                order,
                reference: p,
                tree: Some(tm.tree().clone()),
            }
        }
        GradientKind::Apparent | GradientKind::ApparentZero => {
            let (order, convention) = input::vertex_order(loaded, order_opts, OrderKind::Identity, global.seed)?;
            let k = vietoris_rips_at_level(&levels, levels.top(), global.dim_cap, global.budget)?;
            let f = Filtration::new(k, levels.clone(), order.clone(), convention);
            let matching = if kind == GradientKind::Apparent { apparent_pairs(&f) } else { zero_persistence_apparent_pairs(&f) };
            Built {
                gradient: matching.to_gradient(),
                host: levels.top(),
                levels,
                subcomplex: None,
                diameter_constant: kind == GradientKind::ApparentZero,
                order,
                reference: p,
                tree: loaded.tree.clone(),
            }
        }
    };
    report.param("kind", format!("{kind:?}"));
    report.param("vertex_order", built.order.sequence().iter().map(|&v| names[v].clone()).collect::<Vec<_>>());
    Ok(built)
}

#[allow(clippy::too_many_arguments)]
fn gradient(
    report: &mut RunReport,
    loaded: &Loaded,
    global: &GlobalOpts,
    kind: GradientKind,
    t: Option<&str>,
    reference: Option<&str>,
    no_threshold_check: bool,
    order_opts: &OrderOpts,
) -> Result<(), CliError> {
    start(report, loaded);
    let t = t.map(|t| input::parse_value(t, &loaded.space)).transpose()?;
    let b = build(report, loaded, global, kind, t, reference, !no_threshold_check, order_opts)?;
    let names = loaded.space.names();
    let k = vietoris_rips_at_level(&b.levels, b.host, global.dim_cap, global.budget)?;
    let sorted = b.gradient.sorted();
    report.result(
        "intervals",
        sorted.intervals().iter().map(|i| json!([simplex(i.rho, names), simplex(i.phi, names)])).collect::<Vec<_>>(),
    );
    let critical = critical_cells(&b.gradient, &k);
    report.result("critical_cells", simplices(&critical, names));
    report.line(sorted.dump(Some(names)).trim_end());
    report.line(format!("# {} intervals; critical: {}", sorted.len(), simplices(&critical, names).join(" ")));
    let options = ValidationOptions {
        subcomplex: b.subcomplex.as_ref(),
        order: Some(&b.order),
        levels: b.diameter_constant.then_some(&b.levels),
    };
    report.validation("gradient", &validate_gradient(&k, &b.gradient, options), names);
    Ok(())
}

struct CollapseSpec<'a> {
    kind: GradientKind,
    u: Option<&'a str>,
    t: Option<&'a str>,
    target: CollapseTarget,
    reference: Option<&'a str>,
}

fn collapse_command(
    report: &mut RunReport,
    loaded: &Loaded,
    global: &GlobalOpts,
    spec: &CollapseSpec,
    order_opts: &OrderOpts,
) -> Result<(), CliError> {
    start(report, loaded);
    let space = &loaded.space;
    let names = space.names();
    let levels = distance_levels(space);
    let u = match spec.u {
        Some(u) => input::parse_value(u, space)?,
        None => levels.value(levels.top()).clone(),
    };
    let lu = levels.level_at_most(&u).ok_or_else(|| CliError::Input("u must be nonnegative".into()))?;
    let cone_scale = (spec.kind == GradientKind::Cone).then(|| u.clone());
    let b = build(report, loaded, global, spec.kind, cone_scale, spec.reference, true, order_opts)?;
    let k = vietoris_rips_at_level(&levels, lu, global.dim_cap, global.budget)?;
    let t = match spec.t {
        Some(t) => input::parse_value(t, space)?,
        None if spec.target == CollapseTarget::Forest => u.clone(),
        None => contractibility_threshold(space).theta,
    };
    let l = match spec.target {
        CollapseTarget::Rips => {
            let lt = levels.level_at_most(&t).ok_or_else(|| CliError::Input("t must be nonnegative".into()))?;
            vietoris_rips_at_level(&levels, lt.min(lu), global.dim_cap, global.budget)?
        }
        CollapseTarget::Forest => {
            let tree = b.tree.as_ref().ok_or_else(|| CliError::Input("a forest target needs a tree metric".into()))?;
            subforest(tree, &t)
        }
        CollapseTarget::Point => SimplicialComplex::closure(space.len(), [Simplex::vertex(b.reference)])?,
    };
    report.param("u", value(&u));
    report.param("t", value(&t));
    report.param("target", format!("{:?}", spec.target).to_lowercase());
    if !l.is_subcomplex_of(&k) {
        return Err(CliError::Input("the target is not a subcomplex of VR_u".into()));
    }
    let restricted = b.gradient.restrict(&k, Some(&l));
    let certificate = match collapse(&k, &restricted, &l, &b.order) {
        Ok(c) => c,
        Err(e) => {
            let left: Vec<Simplex> = critical_cells(&restricted, &k).into_iter().filter(|s| !l.contains(*s)).collect();
            report.result("critical_outside_target", simplices(&left, names));
            report.check("collapse", false, Some(format!("{e}; critical outside target: {}", simplices(&left, names).join(" "))));
            return Ok(());
        }
    };
    report.line(certificate.dump(Some(names)).trim_end());
    report.result("steps", certificate.len());
    report.result("source_simplices", k.len());
    report.result("target_simplices", l.len());
    report.check("collapse", true, Some(format!("{} elementary collapses", certificate.len())));
    let replayed = replay(&k, &certificate);
    report.check(
        "certificate replays onto the target",
        matches!(&replayed, Ok(end) if *end == l),
        replayed.err().map(|e| e.to_string()),
    );
    if k.len() <= DEFAULT_ORACLE_BUDGET {
        let before = homology_oracle(&k, DEFAULT_ORACLE_BUDGET)?;
        let mut after = homology_oracle(&l, DEFAULT_ORACLE_BUDGET)?;
        after.resize(before.len(), 0);
        report.result("betti", before.clone());
        report.check("Betti numbers agree", before == after, Some(format!("{before:?} / {after:?}")));
    } else {
        report.skip("Betti numbers agree", format!("{} simplices exceed the oracle budget", k.len()));
    }
    Ok(())
}

fn persistence(
    report: &mut RunReport,
    loaded: &Loaded,
    global: &GlobalOpts,
    max_degree: usize,
    shortcut: bool,
    show_zero: bool,
    order_opts: &OrderOpts,
) -> Result<(), CliError> {
    start(report, loaded);
    let names = loaded.space.names();
    let levels = distance_levels(&loaded.space);
    let (order, convention) = input::vertex_order(loaded, order_opts, OrderKind::Identity, global.seed)?;
    // One dimension beyond the reduced columns, so apparent pairs in the top degree are exact.
    let cap = global.dim_cap.map_or(max_degree + 2, |c| c.min(max_degree + 2));
    let k = vietoris_rips_at_level(&levels, levels.top(), Some(cap), global.budget)?;
    let f = Filtration::new(k, levels, order, convention);
    let (barcode, stats) = persistent_homology(&f, max_degree, shortcut, global.budget)?;
    report.param("max_degree", max_degree);
    report.param("shortcut", shortcut);
    let bar = |i: &ripscollapse::persistence::PersistenceInterval| {
        json!({
            "birth": value(&i.birth),
            "death": i.death.as_ref().map(value),
            "birth_simplex": simplex(i.birth_simplex, names),
            "death_simplex": i.death_simplex.map(|s| simplex(s, names)),
        })
    };
    let degrees: Vec<Value> = (0..=max_degree).map(|k| Value::Array(barcode.degree(k).iter().map(bar).collect())).collect();
    report.result("barcode", degrees);
    if show_zero {
        let zero: Vec<Value> = (0..=max_degree).map(|k| Value::Array(barcode.zero_length(k).iter().map(bar).collect())).collect();
        report.result("zero_length", zero);
    }
    let per_degree: Vec<Value> = stats
        .per_degree
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let by_level: serde_json::Map<String, Value> = d
                .non_apparent_by_level
                .iter()
                .map(|(m, c)| (f.levels().value(*m).to_string(), json!(c)))
                .collect();
            json!({
                "degree": k,
                "columns": d.columns,
                "apparent_skipped": d.apparent_skipped,
                "reduced_with_work": d.reduced_with_work,
                "critical": d.critical,
                "additions": d.additions,
                "non_apparent_by_level": by_level,
            })
        })
        .collect();
    report.result(
        "stats",
        json!({
            "columns": stats.columns,
            "apparent_skipped": stats.apparent_skipped,
            "reduced_with_work": stats.reduced_with_work,
            "critical": stats.critical,
            "additions": stats.additions,
            "per_degree": per_degree,
        }),
    );
    report.text.push_str(&barcode.table());
    if show_zero {
        for k in 0..=max_degree {
            for i in barcode.zero_length(k) {
                report.line(format!("{k} {} {} (zero length)", i.birth, i.birth));
            }
        }
    }
    report.line(format!(
        "# columns {}, apparent {}, reduced with work {}, critical {}, additions {}",
        stats.columns, stats.apparent_skipped, stats.reduced_with_work, stats.critical, stats.additions
    ));
    for (k, d) in stats.per_degree.iter().enumerate() {
        report.line(format!(
            "# degree {k}: columns {}, apparent {}, reduced with work {}, critical {}, additions {}",
            d.columns, d.apparent_skipped, d.reduced_with_work, d.critical, d.additions
        ));
        if !d.non_apparent_by_level.is_empty() {
            let by_level: Vec<String> =
                d.non_apparent_by_level.iter().map(|(m, c)| format!("{}:{c}", f.levels().value(*m))).collect();
            report.line(format!("#   non-apparent columns by scale: {}", by_level.join(" ")));
        }
    }
    Ok(())
}

struct VerifySpec<'a> {
    pipeline: Pipeline,
    input: Option<&'a std::path::Path>,
    t: Option<&'a str>,
    u: Option<&'a str>,
    n: usize,
    reference: Option<&'a str>,
    allow_incompatible: bool,
}

fn verify(report: &mut RunReport, global: &GlobalOpts, spec: &VerifySpec, order_opts: &OrderOpts) -> Result<(), CliError> {
    let tree_pipeline = matches!(
        spec.pipeline,
        Pipeline::Theorem2 | Pipeline::Canonical | Pipeline::Perturbed | Pipeline::Generic | Pipeline::Refinement
    );
    let loaded = match spec.input {
        Some(path) => input::load(path, global)?,
        None if spec.pipeline == Pipeline::ApparentCollapse => {
            return Err(CliError::Input("apparent-collapse needs an input file".into()))
        }
        None if spec.pipeline == Pipeline::Generic => input::generated_generic_tree(spec.n, global.seed),
        None if tree_pipeline => input::generated_tree(spec.n, global.seed),
        None => input::generated_metric(spec.n, global.seed),
    };
    report.param("pipeline", format!("{:?}", spec.pipeline).to_lowercase());
    start(report, &loaded);
    let limits = limits(global);
    let space = &loaded.space;
    if tree_pipeline {
        let loaded = with_tree(&loaded)?;
        let tree = loaded.tree.clone().expect("with_tree");
        let root = input::root(&loaded, order_opts.root.as_deref())?;
        let (order, convention) = input::vertex_order(&loaded, order_opts, OrderKind::Compatible, global.seed)?;
        report.param("vertex_order", order.sequence().iter().map(|&v| space.names()[v].clone()).collect::<Vec<_>>());
        report.param("root", space.names()[root].clone());
        let needs_compatible = matches!(spec.pipeline, Pipeline::Theorem2 | Pipeline::Refinement);
        if needs_compatible {
            let compatible = pipelines::order_is_compatible(&tree, root, &order, convention);
            let name = "vertex order is compatible with the tree";
            if compatible {
                report.check(name, true, None);
            } else if spec.allow_incompatible {
                report.skip(name, "incompatible order accepted by --allow-incompatible");
            } else {
                return Err(CliError::Input(
                    "the vertex order is not compatible with the tree; pass --allow-incompatible to proceed".into(),
                ));
            }
        }
        match spec.pipeline {
            Pipeline::Theorem2 => pipelines::theorem2(report, &tree, space, &order, convention, limits)?,
            Pipeline::Canonical => pipelines::tree_gradient(report, &tree, TreeGradient::Canonical, &order, limits)?,
            Pipeline::Perturbed => pipelines::tree_gradient(report, &tree, TreeGradient::Perturbed, &order, limits)?,
            Pipeline::Generic => pipelines::tree_gradient(report, &tree, TreeGradient::Generic, &order, limits)?,
            _ => pipelines::refinement(report, &tree, &order, global.seed, limits)?,
        }
        return Ok(());
    }
    match spec.pipeline {
        Pipeline::Theorem1 => {
            let p = input::point(space, spec.reference)?;
            let t = spec.t.map(|t| input::parse_value(t, space)).transpose()?;
            pipelines::theorem1(report, space, p, t.as_ref(), limits)
        }
        Pipeline::H1Surjectivity => pipelines::h1_surjectivity(report, space, limits),
        _ => {
            let levels = distance_levels(space);
            let u = match spec.u {
                Some(u) => input::parse_value(u, space)?,
                None => levels.value(levels.top()).clone(),
            };
            let t = match spec.t {
                Some(t) => input::parse_value(t, space)?,
                None => {
                    let lu = levels.level_at_most(&u).unwrap_or(0);
                    levels.value(lu.saturating_sub(1)).clone()
                }
            };
            report.param("u", value(&u));
            report.param("t", value(&t));
            let (order, convention) = input::vertex_order(&loaded, order_opts, OrderKind::Identity, global.seed)?;
            pipelines::apparent_collapse(report, space, &u, &t, &order, convention, limits)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    report: &mut RunReport,
    global: &GlobalOpts,
    kind: GenKind,
    n: usize,
    weights: WeightRange,
    step: &str,
    tree: Option<&std::path::Path>,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    if n == 0 || n > ripscollapse::complex::MAX_VERTICES {
        return Err(CliError::Input(format!("n must be between 1 and {}", ripscollapse::complex::MAX_VERTICES)));
    }
    if weights.low < 1 || weights.low > weights.high {
        return Err(CliError::Input("weights need 1 <= low <= high".into()));
    }
    let seed = global.seed;
    report.param("kind", format!("{kind:?}"));
    report.param("n", n);
    report.param("weights", json!([weights.low, weights.high]));
    let text = match kind {
        GenKind::RandomTree => {
            report.line(format!("random tree on {n} vertices (uniform Prüfer sequence), weights uniform in {}..={}", weights.low, weights.high));
            format_tree(&datasets::random_tree(n, seed, weights))
        }
        GenKind::RandomMetric => {
            report.line(format!(
                "shortest-path metric of a random connected graph on {n} points, weights uniform in {}..={}",
                weights.low, weights.high
            ));
            format_lower_triangular(&datasets::random_metric(n, seed, weights))
        }
        GenKind::GridSampleOfTree => {
            let mode = input::mode(global);
            let base = match tree {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    report.input_digest = Some(input::digest(text.as_bytes()));
                    parse_tree(&text, mode)?
                }
                None => datasets::random_tree(n, seed, weights),
            };
            let step = mode.parse(step).map_err(|e| CliError::Input(format!("invalid step: {e}")))?;
            if step.is_zero() || step.is_negative() {
                return Err(CliError::Input("step must be positive".into()));
            }
            let sample = datasets::grid_sample_of_tree(&base, &step);
            if sample.len() > ripscollapse::complex::MAX_VERTICES {
                return Err(CliError::Input(format!("the sample has {} points; use a larger step", sample.len())));
            }
            let r = step.half();
            report.param("step", value(&step));
            report.result("sample_points", sample.len());
            report.result("defect_bound", value(&r));
            report.line(format!(
                "sample of {} points subdividing every edge into pieces of length at most {step}; geodesic defect at most {r}",
                sample.len()
            ));
            if sample.len() <= 24 {
                let nu = geodesic_defect(&tree_metric(&sample)).nu;
                report.result("defect", value(&nu));
                report.check("geodesic defect of the sample is at most step/2", mode.le(&nu, &r), Some(format!("nu = {nu}")));
            } else {
                report.skip("geodesic defect of the sample is at most step/2", "more than 24 sample points");
            }
            format_tree(&sample)
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, &text)?;
            report.result("output", path.display().to_string());
        }
        None => report.payload = Some(text),
    }
    Ok(())
}

fn order(report: &mut RunReport, loaded: &Loaded, root: Option<&str>, reverse: bool) -> Result<(), CliError> {
    start(report, loaded);
    let loaded = with_tree(loaded)?;
    let tree = loaded.tree.as_ref().expect("with_tree");
    let root = input::root(&loaded, root)?;
    let order = compatible_order(tree, root);
    let names = tree.names();
    report.check("order is compatible", is_compatible_order(tree, root, &order), None);
    let shown = if reverse { order.reversed() } else { order };
    let list: Vec<String> = shown.sequence().iter().map(|&v| names[v].clone()).collect();
    report.param("root", names[root].clone());
    report.param("reverse", reverse);
    report.result("order", list.clone());
    report.line(list.join(" "));
    Ok(())
}
