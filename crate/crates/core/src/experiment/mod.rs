//! Parameter sweeps contrasting MIN-COST with MAX-HIT.
//!
//! Each scenario index draws one availability map; every (gamma, alpha,
//! budget) point of a sweep is evaluated on the same maps, so differences
//! between points are not blurred by resampling.

mod replay;
mod stats;

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{evaluate, Catalog, Instance, LinkId, PlacementPlan};
use crate::planner::{cheapest_links, rank_with_paths, Objective};
use crate::scenario::{three_link_topology, scenario_availability, zipf_catalog, DEFAULT_AVAILABILITY_PROB};

pub use replay::{default_quantum, replay_error_bound, replay_requests, RequestTrace};
pub use stats::{confidence_interval, Estimate};

pub const DEFAULT_SCENARIOS: usize = 40;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

fn default_scenarios() -> usize {
    DEFAULT_SCENARIOS
}

fn default_confidence() -> f64 {
    DEFAULT_CONFIDENCE
}

fn default_availability_prob() -> f64 {
    DEFAULT_AVAILABILITY_PROB
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub gammas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub budgets: Vec<u64>,
    pub catalog_size: usize,
    #[serde(default = "default_scenarios")]
    pub scenarios_per_point: usize,
    pub seed: u64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default = "default_availability_prob")]
    pub availability_prob: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.gammas.is_empty() || self.alphas.is_empty() || self.budgets.is_empty() {
            return bad("gammas, alphas and budgets must each list at least one value".into());
        }
        if let Some(g) = self.gammas.iter().find(|g| !g.is_finite() || **g < 1.0) {
            return bad(format!("gamma must be a finite value >= 1, got {g}"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return bad(format!("alpha must be a finite value >= 0, got {a}"));
        }
        if has_duplicates(&self.gammas) || has_duplicates(&self.alphas) || has_duplicates(&self.budgets) {
            return bad("gammas, alphas and budgets must not repeat values".into());
        }
        if self.catalog_size == 0 {
            return bad("catalog_size must be at least 1".into());
        }
        if self.scenarios_per_point == 0 {
            return bad("scenarios_per_point must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.confidence) {
            return bad(format!("confidence must lie in [0, 1), got {}", self.confidence));
        }
        if self.confidence > 0.0 && self.scenarios_per_point < 2 {
            return bad("confidence intervals need scenarios_per_point >= 2".into());
        }
        if !(0.0..=1.0).contains(&self.availability_prob) {
            return bad(format!("availability_prob must lie in [0, 1], got {}", self.availability_prob));
        }
        Ok(())
    }
}

fn has_duplicates<T: PartialEq>(values: &[T]) -> bool {
    values.iter().enumerate().any(|(i, v)| values[..i].contains(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanMetrics {
    pub cost: f64,
    pub hit_ratio: f64,
}

/// Both planners on one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub scenario: u64,
    pub min_cost: PlanMetrics,
    pub max_hit: PlanMetrics,
    /// `(c_hit - c_cost) / c_hit`; 0 when `c_hit == 0`.
    pub cost_saving: f64,
    /// `(h_hit - h_cost) / h_hit`; 0 when `h_hit == 0`.
    pub hit_ratio_loss: f64,
    pub cost_saving_undefined: bool,
    pub hit_ratio_loss_undefined: bool,
    /// MIN-COST border cache sizes normalized to sum to 1, in link id order. All zero with no cache.
    pub border_shares: Vec<f64>,
}

impl ScenarioOutcome {
    pub fn from_metrics(scenario: u64, min_cost: PlanMetrics, max_hit: PlanMetrics, plan: &PlacementPlan) -> Self {
        let (cost_saving, cost_saving_undefined) = relative_gap(max_hit.cost, min_cost.cost);
        let (hit_ratio_loss, hit_ratio_loss_undefined) = relative_gap(max_hit.hit_ratio, min_cost.hit_ratio);
        let total = plan.total_border_size();
        let border_shares = plan
            .border_sizes
            .values()
            .map(|&s| if total == 0 { 0.0 } else { s as f64 / total as f64 })
            .collect();
        ScenarioOutcome { scenario, min_cost, max_hit, cost_saving, hit_ratio_loss, cost_saving_undefined, hit_ratio_loss_undefined, border_shares }
    }
}

fn relative_gap(reference: f64, other: f64) -> (f64, bool) {
    if reference == 0.0 {
        (0.0, true)
    } else {
        ((reference - other) / reference, false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkShare {
    pub link: LinkId,
    pub share: Estimate,
}

/// Aggregated outcome at one (gamma, alpha, budget).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub alpha: f64,
    pub budget: u64,
    pub cost_saving: Estimate,
    pub hit_ratio_loss: Estimate,
    pub border_shares: Vec<LinkShare>,
    pub undefined_cost_saving: usize,
    pub undefined_hit_ratio_loss: usize,
    pub scenarios: Vec<ScenarioOutcome>,
}

impl SweepPoint {
    fn aggregate(gamma: f64, alpha: f64, budget: u64, links: &[LinkId], scenarios: Vec<ScenarioOutcome>, confidence: f64) -> Self {
        let column = |f: &dyn Fn(&ScenarioOutcome) -> f64| -> Vec<f64> { scenarios.iter().map(f).collect() };
        let cost_saving = confidence_interval(&column(&|s| s.cost_saving), confidence);
        let hit_ratio_loss = confidence_interval(&column(&|s| s.hit_ratio_loss), confidence);
        let border_shares = links
            .iter()
            .enumerate()
            .map(|(i, &link)| LinkShare { link, share: confidence_interval(&column(&|s| s.border_shares[i]), confidence) })
            .collect();
        SweepPoint {
            gamma,
            alpha,
            budget,
            cost_saving,
            hit_ratio_loss,
            border_shares,
            undefined_cost_saving: scenarios.iter().filter(|s| s.cost_saving_undefined).count(),
            undefined_hit_ratio_loss: scenarios.iter().filter(|s| s.hit_ratio_loss_undefined).count(),
            scenarios,
        }
    }

    pub fn share(&self, link: LinkId) -> Option<Estimate> {
        self.border_shares.iter().find(|s| s.link == link).map(|s| s.share)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub spec: SweepSpec,
    /// Ordered by alpha, then gamma, then budget, each in the order given in the spec.
    pub points: Vec<SweepPoint>,
}

impl SweepResults {
    pub fn point(&self, gamma: f64, alpha: f64, budget: u64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.gamma == gamma && p.alpha == alpha && p.budget == budget)
    }

    /// One row per point: means and CI half-widths of every metric.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# config: {}", serde_json::to_string(&self.spec)?)?;
        let mut csv = csv::Writer::from_writer(out);
        let links: Vec<LinkId> = self.points.first().map(|p| p.border_shares.iter().map(|s| s.link).collect()).unwrap_or_default();
        let mut header: Vec<String> = ["gamma", "alpha", "budget", "cost_saving_mean", "cost_saving_ci", "hit_ratio_loss_mean", "hit_ratio_loss_ci"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for l in &links {
            header.push(format!("share_{l}_mean"));
            header.push(format!("share_{l}_ci"));
        }
        header.push("undefined_cost_saving".into());
        header.push("undefined_hit_ratio_loss".into());
        csv.write_record(&header)?;
        let ci = |e: &Estimate| e.half_width.map_or_else(String::new, |h| h.to_string());
        for p in &self.points {
            let mut row = vec![
                p.gamma.to_string(),
                p.alpha.to_string(),
                p.budget.to_string(),
                p.cost_saving.mean.to_string(),
                ci(&p.cost_saving),
                p.hit_ratio_loss.mean.to_string(),
                ci(&p.hit_ratio_loss),
            ];
            for s in &p.border_shares {
                row.push(s.share.mean.to_string());
                row.push(ci(&s.share));
            }
            row.push(p.undefined_cost_saving.to_string());
            row.push(p.undefined_hit_ratio_loss.to_string());
            csv.write_record(&row)?;
        }
        csv.flush()?;
        Ok(())
    }
}

fn metrics(instance: &Instance<f64>, plan: &PlacementPlan) -> Result<PlanMetrics> {
    let report = evaluate(instance, plan)?;
    Ok(PlanMetrics { cost: report.total_cost, hit_ratio: report.hit_ratio })
}

/// Outcomes of one scenario at every point, in [`order_index`] order.
fn run_scenario(spec: &SweepSpec, catalogs: &[Arc<Catalog<f64>>], index: u64) -> Result<Vec<ScenarioOutcome>> {
    let availability = Arc::new(scenario_availability(spec.catalog_size, spec.availability_prob, spec.seed, index)?);
    let n = spec.catalog_size as u64;
    let max_budget = spec.budgets.iter().copied().max().unwrap_or(0).min(n) as usize;
    let mut outcomes = Vec::with_capacity(spec.gammas.len() * catalogs.len() * spec.budgets.len());
    for &gamma in &spec.gammas {
        let topology = three_link_topology(gamma)?;
        let paths = cheapest_links(&topology, &availability)?;
        for catalog in catalogs {
            let instance = Instance::new(topology.clone(), Arc::clone(catalog), Arc::clone(&availability))?;
            let by_cost = rank_with_paths(&instance, paths.clone(), Objective::MinCost, max_budget);
            let by_hit = rank_with_paths(&instance, paths.clone(), Objective::MaxHit, max_budget);
            for &budget in &spec.budgets {
                let cost_plan = by_cost.plan(budget);
                let hit_plan = by_hit.plan(budget);
                outcomes.push(ScenarioOutcome::from_metrics(
                    index,
                    metrics(&instance, &cost_plan)?,
                    metrics(&instance, &hit_plan)?,
                    &cost_plan,
                ));
            }
        }
    }
    log::debug!("scenario {index} done");
    Ok(outcomes)
}

/// Runs every (gamma, alpha, budget) combination of `spec`.
///
/// Scenarios run in parallel on the current rayon pool; the result does not
/// depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResults> {
    spec.validate()?;
    let catalogs = spec.alphas.iter().map(|&a| zipf_catalog(spec.catalog_size, a).map(Arc::new)).collect::<Result<Vec<_>>>()?;
    log::info!(
        "sweep: {} gammas x {} alphas x {} budgets, N = {}, {} scenarios",
        spec.gammas.len(),
        spec.alphas.len(),
        spec.budgets.len(),
        spec.catalog_size,
        spec.scenarios_per_point
    );
    let per_scenario: Vec<Vec<ScenarioOutcome>> = (0..spec.scenarios_per_point as u64)
        .into_par_iter()
        .map(|s| run_scenario(spec, &catalogs, s))
        .collect::<Result<_>>()?;

    let links: Vec<LinkId> = three_link_topology(1.0)?.ids().collect();
    let mut points = Vec::new();
    for &alpha in &spec.alphas {
        for &gamma in &spec.gammas {
            for &budget in &spec.budgets {
                let outcomes = per_scenario.iter().map(|row| row[order_index(spec, alpha, gamma, budget)].clone()).collect();
                points.push(SweepPoint::aggregate(gamma, alpha, budget, &links, outcomes, spec.confidence));
            }
        }
    }
    Ok(SweepResults { spec: spec.clone(), points })
}

/// Position of a point in the per-scenario outcome vector (gamma-major, then alpha, then budget).
fn order_index(spec: &SweepSpec, alpha: f64, gamma: f64, budget: u64) -> usize {
    let g = spec.gammas.iter().position(|&x| x == gamma).expect("gamma from spec");
    let a = spec.alphas.iter().position(|&x| x == alpha).expect("alpha from spec");
    let b = spec.budgets.iter().position(|&x| x == budget).expect("budget from spec");
    (g * spec.alphas.len() + a) * spec.budgets.len() + b
}

/// A single sweep point.
pub fn run_point(gamma: f64, alpha: f64, budget: u64, catalog_size: usize, scenarios: usize, seed: u64, confidence: f64) -> Result<SweepPoint> {
    let spec = SweepSpec {
        gammas: vec![gamma],
        alphas: vec![alpha],
        budgets: vec![budget],
        catalog_size,
        scenarios_per_point: scenarios,
        seed,
        confidence,
        availability_prob: DEFAULT_AVAILABILITY_PROB,
    };
    Ok(run_sweep(&spec)?.points.remove(0))
}
