use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Instance, LinkId, ObjectId, PlacementPlan};
use crate::scalar::Scalar;

/// One violated feasibility constraint of a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BudgetExceeded { allocated: u64, budget: u64 },
    SizeMismatch { link: LinkId, declared: u64, placed: u64 },
    UnknownLink { link: LinkId, field: &'static str },
    UnknownObject { object: ObjectId },
    PlacementUnavailable { link: LinkId, object: ObjectId },
    RouteUnavailable { object: ObjectId, link: LinkId },
    PathSelectionLength { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BudgetExceeded { allocated, budget } => {
                write!(f, "budget: {allocated} cache slots allocated but the budget is {budget}")
            }
            Violation::SizeMismatch { link, declared, placed } => {
                write!(f, "border_sizes[{}]: declared {declared} but {placed} objects are placed there", link.0)
            }
            Violation::UnknownLink { link, field } => write!(f, "{field}: link {} is not in the topology", link.0),
            Violation::UnknownObject { object } => write!(f, "placement: object {} is not in the catalog", object.0),
            Violation::PlacementUnavailable { link, object } => {
                write!(f, "placement: object {} cached at link {} which cannot supply it", object.0, link.0)
            }
            Violation::RouteUnavailable { object, link } => {
                write!(f, "path_selection[{}]: link {} cannot supply the object", object.0, link.0)
            }
            Violation::PathSelectionLength { expected, found } => {
                write!(f, "path_selection: expected {expected} entries, found {found}")
            }
        }
    }
}

/// Outcome of [`validate`]: empty when the plan is feasible.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn cites_budget(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, Violation::BudgetExceeded { .. }))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("feasible");
        }
        const SHOWN: usize = 50;
        for v in self.violations.iter().take(SHOWN) {
            writeln!(f, "  - {v}")?;
        }
        if self.violations.len() > SHOWN {
            writeln!(f, "  ... and {} more", self.violations.len() - SHOWN)?;
        }
        Ok(())
    }
}

/// Checks every feasibility constraint of `plan` against `instance` and a cache budget.
pub fn validate<S: Scalar>(instance: &Instance<S>, plan: &PlacementPlan, budget: u64) -> Verdict {
    let mut verdict = check_structure(instance, plan);
    let allocated = plan.total_size();
    if allocated > budget {
        verdict.violations.push(Violation::BudgetExceeded { allocated, budget });
    }
    verdict
}

fn check_structure<S: Scalar>(instance: &Instance<S>, plan: &PlacementPlan) -> Verdict {
    let topology = instance.topology();
    let catalog = instance.catalog();
    let availability = instance.availability();
    let n = catalog.len();
    let mut violations = Vec::new();

    if plan.path_selection.len() != n {
        violations.push(Violation::PathSelectionLength { expected: n, found: plan.path_selection.len() });
    }
    for (o, &link) in plan.path_selection.iter().enumerate().take(n) {
        let object = ObjectId(o as u32);
        if !topology.contains(link) {
            violations.push(Violation::UnknownLink { link, field: "path_selection" });
        } else if catalog.demand(object) > S::zero() && !availability.get(object).contains(link) {
            violations.push(Violation::RouteUnavailable { object, link });
        }
    }

    let mut placed = vec![0u64; topology.len()];
    for &(link, object) in &plan.border_placement {
        if object.index() >= n {
            violations.push(Violation::UnknownObject { object });
            continue;
        }
        match topology.slot(link) {
            None => violations.push(Violation::UnknownLink { link, field: "placement" }),
            Some(slot) => {
                placed[slot] += 1;
                if !availability.get(object).contains(link) {
                    violations.push(Violation::PlacementUnavailable { link, object });
                }
            }
        }
    }
    for &link in plan.border_sizes.keys() {
        if !topology.contains(link) {
            violations.push(Violation::UnknownLink { link, field: "border_sizes" });
        }
    }
    for (slot, l) in topology.links().iter().enumerate() {
        let declared = plan.border_size(l.id);
        if declared != placed[slot] {
            violations.push(Violation::SizeMismatch { link: l.id, declared, placed: placed[slot] });
        }
    }
    Verdict { violations }
}

/// Cost and efficiency of a feasible plan.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport<S> {
    /// Total retrieval cost: price times demand leaving through each link.
    pub total_cost: S,
    /// Fraction of demand served by caches.
    pub hit_ratio: S,
    /// Demand leaving the ISP through each link, ordered by link id.
    pub per_link_outflow: BTreeMap<LinkId, S>,
    /// Demand-weighted fraction served by internal caches; zero in this model.
    pub core_hit_fraction: S,
}

/// Closed-form cost and hit-ratio of `plan`.
///
/// Each object's full demand is directed to its selected link and leaves the
/// ISP unless the border cache on that link stores it. Plans that fail the
/// structural checks of [`validate`] are rejected; the budget is not checked
/// here. Plans with internal caches are rejected as unsupported.
pub fn evaluate<S: Scalar>(instance: &Instance<S>, plan: &PlacementPlan) -> Result<EvaluationReport<S>> {
    let verdict = check_structure(instance, plan);
    if !verdict.is_feasible() {
        return Err(Error::Infeasible(verdict));
    }
    if plan.total_internal_size() > 0 {
        return Err(Error::UnsupportedInternalCaches);
    }
    let topology = instance.topology();
    let catalog = instance.catalog();
    let n = catalog.len();

    let mut hit_on_path = vec![0u64; n.div_ceil(64)];
    for &(link, object) in &plan.border_placement {
        let o = object.index();
        if plan.path_selection[o] == link {
            hit_on_path[o / 64] |= 1u64 << (o % 64);
        }
    }

    let prices: Vec<S> = topology.links().iter().map(|l| l.price).collect();
    let mut outflow = vec![S::zero(); topology.len()];
    let mut hits = S::zero();
    for (o, (&d, &link)) in catalog.demands().iter().zip(&plan.path_selection).enumerate() {
        if hit_on_path[o / 64] & (1u64 << (o % 64)) != 0 {
            hits = hits + d;
        } else {
            let slot = topology.slot(link).expect("routes checked above");
            outflow[slot] = outflow[slot] + d;
        }
    }
    // Σ_l p_l · Σ_o d_out(l, o); per-link grouping keeps this linear in the catalog.
    let total_cost = outflow.iter().zip(&prices).map(|(&out, &p)| p * out).sum();
    // Summing hits directly keeps an empty cache at exactly 0.
    let hit_ratio = hits / catalog.total_demand();
    let per_link_outflow = topology.ids().zip(outflow).collect();
    Ok(EvaluationReport { total_cost, hit_ratio, per_link_outflow, core_hit_fraction: S::zero() })
}
