use crate::complex::{
    bits, clique_complex_on, distance_levels, vietoris_rips_at_level, ComplexError, DistanceLevels, Simplex,
};
use crate::gradients::GradientError;
use crate::metric::{geodesic_defect, hyperbolicity, FiniteMetricSpace};
use crate::morse::{merge_gradients, DiscreteGradient};
use crate::value::DistanceValue;

/// `delta`, `nu` and `4 delta + 2 nu` for a space.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub delta: DistanceValue,
    pub nu: DistanceValue,
    pub theta: DistanceValue,
}

pub fn contractibility_threshold(space: &FiniteMetricSpace) -> Threshold {
    let delta = hyperbolicity(space).delta;
    let nu = geodesic_defect(space).nu;
    let theta = &delta.scale(4) + &nu.scale(2);
    Threshold { delta, nu, theta }
}

/// One stratum of a cone gradient: the simplices added with `vertex`, all paired by
/// toggling `apex`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeStratum {
    /// Distance level of the stratum in the filtered construction, `None` for a plain cone.
    pub level: Option<usize>,
    /// Position of `vertex` in the point order.
    pub index: usize,
    pub vertex: usize,
    pub apex: usize,
    pub gradient: DiscreteGradient,
}

/// A gradient on `VR_t(X)` whose only critical simplex is the reference vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeGradient {
    pub gradient: DiscreteGradient,
    pub reference: usize,
    pub t: DistanceValue,
    /// Level index of `VR_t`.
    pub t_level: usize,
    /// Points sorted by distance to the reference, ties by index.
    pub point_order: Vec<usize>,
    pub strata: Vec<ConeStratum>,
}

/// A gradient on the whole Vietoris–Rips filtration compatible with diameters above the
/// threshold `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredConeGradient {
    pub gradient: DiscreteGradient,
    pub threshold: Threshold,
    /// Largest level with value at most `theta`; the base cone lives on this complex.
    pub base_level: usize,
    pub base: ConeGradient,
    /// Strata above the base, by level then position.
    pub strata: Vec<ConeStratum>,
    /// The merged gradient of each level above the base.
    pub level_gradients: Vec<(usize, DiscreteGradient)>,
}

/// Points by `(d(x, p), x)`, starting with `p`.
pub fn point_order(levels: &DistanceLevels, p: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..levels.points()).collect();
    order.sort_by_key(|&x| (x != p, if x == p { 0 } else { levels.pair(x, p) }, x));
    order
}

fn graph(levels: &DistanceLevels, level: usize) -> Vec<u64> {
    let n = levels.points();
    let mut nbr = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if levels.pair(i, j) <= level {
                nbr[i] |= 1 << j;
                nbr[j] |= 1 << i;
            }
        }
    }
    nbr
}

/// All cliques (including the empty one) of the graph `nbr` inside `candidates`.
fn cliques(nbr: &[u64], candidates: u64, budget: usize) -> Result<Vec<u64>, GradientError> {
    let mut out = Vec::new();
    let mut stack = vec![(0u64, candidates)];
    while let Some((clique, rest)) = stack.pop() {
        out.push(clique);
        if out.len() > budget {
            return Err(ComplexError::Budget { budget }.into());
        }
        for v in bits(rest) {
            let above = !((2u64 << v) - 1);
            stack.push((clique | 1 << v, rest & nbr[v] & above));
        }
    }
    Ok(out)
}

fn first_apex(order: &[usize], ok: impl Fn(usize) -> bool) -> Option<usize> {
    order.iter().copied().find(|&z| ok(z))
}

fn stratum_pairs(
    nbr: &[u64],
    x: usize,
    link: u64,
    apex: usize,
    keep: impl Fn(u64) -> bool,
    budget: usize,
) -> Result<DiscreteGradient, GradientError> {
    let mut pairs = Vec::new();
    for c in cliques(nbr, link & !(1 << apex), budget)? {
        let sigma = c | 1 << x;
        if keep(sigma) {
            pairs.push((Simplex::from_mask(sigma), Simplex::from_mask(sigma | 1 << apex)));
        }
    }
    Ok(DiscreteGradient::from_pairs(pairs)?)
}

/// Collapses `VR_t(X)` onto the reference point `p` by coning each new point's star onto an
/// earlier apex.
///
/// With `enforce_threshold`, `t` must be at least `4 delta + 2 nu`.
pub fn cone_gradient(
    space: &FiniteMetricSpace,
    t: &DistanceValue,
    p: usize,
    enforce_threshold: bool,
    budget: usize,
) -> Result<ConeGradient, GradientError> {
    let n = space.len();
    if n > crate::complex::MAX_VERTICES {
        return Err(ComplexError::TooManyVertices(n).into());
    }
    if p >= n {
        return Err(GradientError::Precondition(format!("reference point {p} is out of range")));
    }
    let mode = space.mode();
    if enforce_threshold {
        let required = contractibility_threshold(space).theta;
        if !mode.le(&required, t) {
            return Err(GradientError::Threshold { t: Box::new(t.clone()), required: Box::new(required) });
        }
    }
    let levels = distance_levels(space);
    let t_level = levels
        .level_at_most(t)
        .ok_or_else(|| GradientError::Precondition(format!("threshold {t} is negative")))?;
    cone_at_level(space, &levels, t.clone(), t_level, p, budget)
}

fn cone_at_level(
    space: &FiniteMetricSpace,
    levels: &DistanceLevels,
    t: DistanceValue,
    t_level: usize,
    p: usize,
    budget: usize,
) -> Result<ConeGradient, GradientError> {
    let n = space.len();
    let mode = space.mode();
    let order = point_order(levels, p);
    let nbr = graph(levels, t_level);
    let mut strata = Vec::new();
    let mut parts = Vec::new();
    let mut prev = 1u64 << p;
    for (i, &x) in order.iter().enumerate().skip(1) {
        let link = nbr[x] & prev;
        let apex = if mode.lt(space.dist(x, p), &t) {
            p
        } else {
            let star = link | 1 << x;
            first_apex(&order[..i], |z| star & !(1 << z) & !nbr[z] == 0).ok_or_else(|| GradientError::NoApex {
                level: None,
                index: i,
                vertex: x,
                reason: "no earlier point is within t of the whole star".into(),
            })?
        };
        let gradient = stratum_pairs(&nbr, x, link, apex, |_| true, budget)?;
        prev |= 1 << x;
        parts.push((clique_complex_on(n, nbr.clone(), prev, None, budget)?, gradient.clone()));
        strata.push(ConeStratum { level: None, index: i, vertex: x, apex, gradient });
    }
    let gradient = merge_gradients(&parts)?;
    Ok(ConeGradient { gradient, reference: p, t, t_level, point_order: order, strata })
}

/// The filtered cone gradient: the cone on `VR_theta` with `theta = 4 delta + 2 nu`, extended
/// level by level with strata of simplices of exact diameter `r_m` whose last point is `x_i`.
pub fn filtered_cone_gradient(
    space: &FiniteMetricSpace,
    p: usize,
    budget: usize,
) -> Result<FilteredConeGradient, GradientError> {
    let n = space.len();
    if n > crate::complex::MAX_VERTICES {
        return Err(ComplexError::TooManyVertices(n).into());
    }
    if p >= n {
        return Err(GradientError::Precondition(format!("reference point {p} is out of range")));
    }
    let threshold = contractibility_threshold(space);
    let levels = distance_levels(space);
    let base_level = levels.level_at_most(&threshold.theta).expect("theta is nonnegative");
    let base = cone_at_level(space, &levels, threshold.theta.clone(), base_level, p, budget)?;
    let order = base.point_order.clone();

    let mut strata = Vec::new();
    let mut level_gradients = Vec::new();
    let mut across = vec![(vietoris_rips_at_level(&levels, base_level, None, budget)?, base.gradient.clone())];
    for m in (base_level + 1)..levels.len() {
        let nbr = graph(&levels, m);
        let below = vietoris_rips_at_level(&levels, m - 1, None, budget)?;
        let mut parts = Vec::new();
        let mut prev = 1u64 << p;
        for (i, &x) in order.iter().enumerate().skip(1) {
            let earlier = prev;
            prev |= 1 << x;
            if !bits(earlier).any(|y| levels.pair(x, y) == m) {
                continue;
            }
            let link = nbr[x] & earlier;
            let apex = if levels.pair(x, p) < m {
                p
            } else {
                // Close to the whole star at r_m, and strictly closer than r_m to its open part.
                let star = link | 1 << x;
                let open = bits(prev).filter(|&y| levels.pair(x, y) < m).fold(0u64, |a, y| a | 1 << y);
                first_apex(&order[..i], |z| {
                    star & !(1 << z) & !nbr[z] == 0 && bits(open & !(1 << z)).all(|y| levels.pair(z, y) < m)
                })
                .ok_or_else(|| GradientError::NoApex {
                    level: Some(m),
                    index: i,
                    vertex: x,
                    reason: "no earlier point satisfies the apex conditions".into(),
                })?
            };
            let gradient =
                stratum_pairs(&nbr, x, link, apex, |s| levels.simplex(Simplex::from_mask(s)) == m, budget)?;
            let part = below.union(&clique_complex_on(n, nbr.clone(), prev, None, budget)?);
            parts.push((part, gradient.clone()));
            strata.push(ConeStratum { level: Some(m), index: i, vertex: x, apex, gradient });
        }
        let merged = merge_gradients(&parts)?;
        across.push((vietoris_rips_at_level(&levels, m, None, budget)?, merged.clone()));
        level_gradients.push((m, merged));
    }
    let gradient = merge_gradients(&across)?;
    Ok(FilteredConeGradient { gradient, threshold, base_level, base, strata, level_gradients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{vietoris_rips, SimplicialComplex, VertexOrder, DEFAULT_SIMPLEX_BUDGET};
    use crate::datasets;
    use crate::metric::tree_metric;
    use crate::morse::{collapse, validate_gradient, ValidationOptions};

    const B: usize = DEFAULT_SIMPLEX_BUDGET;

    fn point(n: usize) -> SimplicialComplex {
        SimplicialComplex::closure(n, [Simplex::vertex(0)]).unwrap()
    }

    #[test]
    fn tree_cone_collapses_to_reference() {
        let x = tree_metric(&datasets::generic_tree());
        let t = x.max_distance();
        let cone = cone_gradient(&x, &t, 0, true, B).unwrap();
        let k = vietoris_rips(&x, &t, None, B).unwrap();
        let l = point(x.len());
        let opts = ValidationOptions { subcomplex: Some(&l), ..Default::default() };
        assert!(validate_gradient(&k, &cone.gradient, opts).ok());
        collapse(&k, &cone.gradient, &l, &VertexOrder::identity(x.len())).unwrap();
    }

    #[test]
    fn cycle_below_threshold_is_rejected() {
        let x = datasets::cycle_graph(6);
        let t = DistanceValue::from_int(1);
        assert!(matches!(cone_gradient(&x, &t, 0, true, B), Err(GradientError::Threshold { .. })));
    }

    #[test]
    fn filtered_cone_on_star() {
        let x = tree_metric(&datasets::unit_star_tree());
        let f = filtered_cone_gradient(&x, 0, B).unwrap();
        let levels = distance_levels(&x);
        let k = vietoris_rips_at_level(&levels, levels.top(), None, B).unwrap();
        let l = point(x.len());
        let report = validate_gradient(&k, &f.gradient, ValidationOptions { subcomplex: Some(&l), ..Default::default() });
        assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
        // Above the base every interval is diameter-constant.
        for (m, v) in &f.level_gradients {
            assert!(v.intervals().iter().all(|i| levels.simplex(i.rho) == *m && levels.simplex(i.phi) == *m));
        }
    }

    #[test]
    fn point_order_starts_at_reference() {
        let x = tree_metric(&datasets::generic_tree());
        let order = point_order(&distance_levels(&x), 2);
        assert_eq!(order[0], 2);
        assert_eq!(order.len(), x.len());
    }
}
