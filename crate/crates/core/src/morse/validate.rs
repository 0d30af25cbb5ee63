use std::collections::HashMap;
use std::fmt;

use crate::complex::{DistanceLevels, Simplex, SimplicialComplex, VertexOrder};
use crate::morse::{minimal_vertex_refinement, DiscreteGradient, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// Intervals are pairwise disjoint.
    Disjoint,
    /// Every interval is regular.
    Regular,
    /// Every interval lies in the host complex.
    Contained,
    /// The intervals cover exactly `K ∖ L`.
    Complement,
    /// The refined matching has no closed gradient path.
    Acyclic,
    /// Both ends of every interval have the same diameter.
    DiameterCompatible,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Disjoint,
        Check::Regular,
        Check::Contained,
        Check::Complement,
        Check::Acyclic,
        Check::DiameterCompatible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Disjoint => "disjoint",
            Check::Regular => "regular",
            Check::Contained => "contained",
            Check::Complement => "complement",
            Check::Acyclic => "acyclic",
            Check::DiameterCompatible => "diameter-compatible",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: CheckStatus,
    /// Human-readable reason on failure.
    pub detail: Option<String>,
    /// Offending simplices on failure; for `Acyclic`, a closed gradient path.
    pub witness: Vec<Simplex>,
}

impl CheckOutcome {
    fn pass(check: Check) -> Self {
        CheckOutcome { check, status: CheckStatus::Pass, detail: None, witness: Vec::new() }
    }

    fn skipped(check: Check) -> Self {
        CheckOutcome { check, status: CheckStatus::Skipped, detail: None, witness: Vec::new() }
    }

    fn fail(check: Check, detail: String, witness: Vec<Simplex>) -> Self {
        CheckOutcome { check, status: CheckStatus::Fail, detail: Some(detail), witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl ValidationReport {
    /// No check failed (skipped checks count as passing).
    pub fn ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != CheckStatus::Fail)
    }

    pub fn outcome(&self, check: Check) -> &CheckOutcome {
        self.outcomes.iter().find(|o| o.check == check).expect("every check is reported")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| o.status == CheckStatus::Fail)
    }
}

/// Optional inputs to [`validate_gradient`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidationOptions<'a> {
    /// When given, the intervals must cover exactly `K ∖ L`.
    pub subcomplex: Option<&'a SimplicialComplex>,
    /// Vertex order used for the minimal vertex refinement; identity when absent.
    pub order: Option<&'a VertexOrder>,
    /// When given, every interval must be diameter-constant.
    pub levels: Option<&'a DistanceLevels>,
}

/// Runs every gradient check against the host complex `k`.
pub fn validate_gradient(
    k: &SimplicialComplex,
    gradient: &DiscreteGradient,
    options: ValidationOptions<'_>,
) -> ValidationReport {
    let mut outcomes = Vec::with_capacity(6);

    let mut owner: HashMap<Simplex, usize> = HashMap::with_capacity(gradient.covered_count());
    let mut clash = None;
    'scan: for (idx, interval) in gradient.intervals().iter().enumerate() {
        for s in interval.simplices() {
            if let Some(prev) = owner.insert(s, idx) {
                clash = Some((s, prev, idx));
                break 'scan;
            }
        }
    }
    outcomes.push(match clash {
        None => CheckOutcome::pass(Check::Disjoint),
        Some((s, a, b)) => {
            let (ia, ib) = (gradient.intervals()[a], gradient.intervals()[b]);
            CheckOutcome::fail(
                Check::Disjoint,
                format!("simplex [{s}] lies in intervals [{}]->[{}] and [{}]->[{}]", ia.rho, ia.phi, ib.rho, ib.phi),
                vec![s],
            )
        }
    });

    outcomes.push(match gradient.intervals().iter().find(|i| i.rho == i.phi || !i.rho.is_face_of(i.phi)) {
        None => CheckOutcome::pass(Check::Regular),
        Some(i) => CheckOutcome::fail(Check::Regular, format!("[{}] -> [{}] is not regular", i.rho, i.phi), vec![i.rho, i.phi]),
    });

    outcomes.push(match gradient.intervals().iter().find(|i| !k.contains(i.phi)) {
        None => CheckOutcome::pass(Check::Contained),
        Some(i) => CheckOutcome::fail(Check::Contained, format!("[{}] is not in the complex", i.phi), vec![i.phi]),
    });

    outcomes.push(match options.subcomplex {
        None => CheckOutcome::skipped(Check::Complement),
        Some(l) => complement_check(k, l, &owner),
    });

    let default_order;
    let order = match options.order {
        Some(o) => o,
        None => {
            default_order = VertexOrder::identity(k.n_vertices());
            &default_order
        }
    };
    let regular = outcomes[1].status == CheckStatus::Pass && outcomes[0].status == CheckStatus::Pass;
    outcomes.push(if regular {
        let refined = minimal_vertex_refinement(gradient, order);
        match find_cycle(&refined) {
            None => CheckOutcome::pass(Check::Acyclic),
            Some(cycle) => CheckOutcome::fail(
                Check::Acyclic,
                format!("closed gradient path through {} simplices", cycle.len()),
                cycle,
            ),
        }
    } else {
        CheckOutcome::skipped(Check::Acyclic)
    });

    outcomes.push(match options.levels {
        None => CheckOutcome::skipped(Check::DiameterCompatible),
        Some(levels) => match gradient.intervals().iter().find(|i| levels.simplex(i.rho) != levels.simplex(i.phi)) {
            None => CheckOutcome::pass(Check::DiameterCompatible),
            Some(i) => CheckOutcome::fail(
                Check::DiameterCompatible,
                format!(
                    "diam [{}] = {} but diam [{}] = {}",
                    i.rho,
                    levels.value(levels.simplex(i.rho)),
                    i.phi,
                    levels.value(levels.simplex(i.phi))
                ),
                vec![i.rho, i.phi],
            ),
        },
    });

    ValidationReport { outcomes }
}

fn complement_check(k: &SimplicialComplex, l: &SimplicialComplex, owner: &HashMap<Simplex, usize>) -> CheckOutcome {
    if let Some(s) = l.iter().find(|s| !k.contains(*s)) {
        return CheckOutcome::fail(Check::Complement, format!("[{s}] is in L but not in K"), vec![s]);
    }
    if let Some(s) = k.iter().find(|s| !l.contains(*s) && !owner.contains_key(s)) {
        return CheckOutcome::fail(Check::Complement, format!("[{s}] in K ∖ L is not covered"), vec![s]);
    }
    let mut covered_in_l: Vec<Simplex> = owner.keys().copied().filter(|s| l.contains(*s)).collect();
    covered_in_l.sort_by(|a, b| a.canonical_cmp(b));
    if let Some(&s) = covered_in_l.first() {
        return CheckOutcome::fail(Check::Complement, format!("[{s}] is covered but lies in L"), vec![s]);
    }
    CheckOutcome::pass(Check::Complement)
}

/// A closed path `sigma_0, tau_0, sigma_1, tau_1, ...` alternating matched pairs and facets,
/// or `None` if the matching is acyclic.
pub fn find_cycle(matching: &Matching) -> Option<Vec<Simplex>> {
    let up: HashMap<Simplex, Simplex> = matching.pairs().iter().copied().collect();
    // Nodes are the lower simplices; sigma -> sigma' when sigma' ≠ sigma is a facet of up(sigma).
    let mut lowers: Vec<Simplex> = up.keys().copied().collect();
    lowers.sort_by(|a, b| a.canonical_cmp(b));
    let successors = |s: Simplex| -> Vec<Simplex> {
        let tau = up[&s];
        tau.facets().filter(|f| *f != s && up.contains_key(f)).collect()
    };
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Open,
        Done,
    }
    let mut mark: HashMap<Simplex, Mark> = lowers.iter().map(|&s| (s, Mark::Fresh)).collect();
    for &start in &lowers {
        if mark[&start] != Mark::Fresh {
            continue;
        }
        let mut stack: Vec<(Simplex, Vec<Simplex>, usize)> = vec![(start, successors(start), 0)];
        mark.insert(start, Mark::Open);
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let next = top.1[top.2];
                top.2 += 1;
                match mark[&next] {
                    Mark::Fresh => {
                        mark.insert(next, Mark::Open);
                        let succ = successors(next);
                        stack.push((next, succ, 0));
                    }
                    Mark::Open => {
                        let from = stack.iter().position(|(s, _, _)| *s == next).expect("open node on stack");
                        let mut cycle = Vec::new();
                        for (s, _, _) in &stack[from..] {
                            cycle.push(*s);
                            cycle.push(up[s]);
                        }
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                let (s, _, _) = stack.pop().expect("nonempty");
                mark.insert(s, Mark::Done);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::GradientInterval;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v)
    }

    #[test]
    fn triangle_boundary_cycle_rejected() {
        let k = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]).unwrap();
        let v = DiscreteGradient::from_pairs([
            (s(&[0]), s(&[0, 1])),
            (s(&[1]), s(&[1, 2])),
            (s(&[2]), s(&[0, 2])),
        ])
        .unwrap();
        let report = validate_gradient(&k, &v, ValidationOptions::default());
        let acyclic = report.outcome(Check::Acyclic);
        assert_eq!(acyclic.status, CheckStatus::Fail);
        assert_eq!(acyclic.witness.len(), 6);
        assert!(!report.ok());
    }

    #[test]
    fn overlap_and_gap_detected() {
        let k = SimplicialComplex::full(3).unwrap();
        let v = DiscreteGradient::new(vec![
            GradientInterval::new(s(&[0]), s(&[0, 1, 2])).unwrap(),
            GradientInterval::new(s(&[0, 2]), s(&[0, 1, 2])).unwrap(),
        ]);
        let report = validate_gradient(&k, &v, ValidationOptions::default());
        assert_eq!(report.outcome(Check::Disjoint).status, CheckStatus::Fail);

        let l = SimplicialComplex::closure(3, [s(&[1, 2])]).unwrap();
        let v = DiscreteGradient::from_pairs([(s(&[0]), s(&[0, 1]))]).unwrap();
        let report = validate_gradient(&k, &v, ValidationOptions { subcomplex: Some(&l), ..Default::default() });
        let c = report.outcome(Check::Complement);
        assert_eq!(c.status, CheckStatus::Fail);
        assert_eq!(c.witness, vec![s(&[0, 2])]);
    }

    #[test]
    fn collapsible_cone_passes() {
        let k = SimplicialComplex::full(3).unwrap();
        let l = SimplicialComplex::closure(3, [s(&[0])]).unwrap();
        let v = DiscreteGradient::from_pairs([(s(&[1]), s(&[0, 1])), (s(&[2]), s(&[0, 2])), (s(&[1, 2]), s(&[0, 1, 2]))])
            .unwrap();
        let report = validate_gradient(&k, &v, ValidationOptions { subcomplex: Some(&l), ..Default::default() });
        assert!(report.ok(), "{report:?}");
    }
}
