//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.
//!
//! Criteria 2-5 share one full-scale sweep (10^7 objects, 40 scenarios,
//! gamma 1..10, alpha {0.8, 1.2}, budgets {10^2, 10^3, 10^4}); it takes a few
//! minutes on one core.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cachecost::experiment::{default_quantum, replay_error_bound, replay_requests, run_sweep, SweepResults, SweepSpec};
use cachecost::oracle::{brute_force_max_hit, brute_force_min_cost, SmallInstanceLimits};
use cachecost::planner::{lower_bound_cost, plan_max_hit, plan_min_cost};
use cachecost::scenario::{generate, ScenarioConfig, CHEAP_LINK, EXPENSIVE_LINK, PEERING_LINK};
use cachecost::{evaluate, validate, AvailabilityMap, Instance, LinkSet};
use common::{close, random_small_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const REL_TOL: f64 = 1e-9;
const FULL_N: usize = 10_000_000;
const FULL_SCENARIOS: usize = 40;
const FULL_SEED: u64 = 1;
const ALPHA_LOW: f64 = 0.8;
const ALPHA_HIGH: f64 = 1.2;
const GAMMA_MAX: f64 = 10.0;
const BUDGETS: [u64; 3] = [100, 1_000, 10_000];
const BUDGET_FULL: u64 = 10_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gammas() -> Vec<f64> {
    (1..=10).map(f64::from).collect()
}

fn full_sweep() -> &'static SweepResults {
    static SWEEP: OnceLock<SweepResults> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let spec = SweepSpec {
            gammas: gammas(),
            alphas: vec![ALPHA_LOW, ALPHA_HIGH],
            budgets: BUDGETS.to_vec(),
            catalog_size: FULL_N,
            scenarios_per_point: FULL_SCENARIOS,
            seed: FULL_SEED,
            confidence: 0.95,
            availability_prob: 0.5,
        };
        let start = Instant::now();
        let results = run_sweep(&spec).expect("full-scale sweep");
        println!("      (full-scale sweep finished in {:.1?})", start.elapsed());
        results
    })
}

fn oracle_optimality() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_140_601);
    let limits = SmallInstanceLimits::default();
    let instances = 1_000;
    for i in 0..instances {
        let inst = random_small_instance(&mut rng, 8, 3);
        let budget = rand::Rng::random_range(&mut rng, 0..=4u64);
        let greedy = evaluate(&inst, &plan_min_cost(&inst, budget).unwrap()).unwrap();
        let bound = lower_bound_cost(&inst, budget).unwrap();
        let best = brute_force_min_cost(&inst, budget, &limits).unwrap();
        ensure(
            close(greedy.total_cost, best.cost, REL_TOL) && close(bound, best.cost, REL_TOL),
            format!("instance {i}: greedy {} / bound {bound} / oracle {}", greedy.total_cost, best.cost),
        )?;
        let hit = evaluate(&inst, &plan_max_hit(&inst, budget).unwrap()).unwrap();
        let best_hit = brute_force_max_hit(&inst, budget, &limits).unwrap();
        ensure(
            close(hit.hit_ratio, best_hit.hit_ratio, REL_TOL),
            format!("instance {i}: greedy hit-ratio {} / oracle {}", hit.hit_ratio, best_hit.hit_ratio),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:.1?}, limit 60s"))?;
    Ok(format!("{instances} instances agree with the oracle and the lower bound ({elapsed:.1?})"))
}

fn series(results: &SweepResults, alpha: f64, budget: u64) -> Vec<&cachecost::experiment::SweepPoint> {
    gammas().into_iter().map(|g| results.point(g, alpha, budget).expect("point in sweep")).collect()
}

fn cost_saving_curve() -> Check {
    let points = series(full_sweep(), ALPHA_HIGH, BUDGET_FULL);
    for w in points.windows(2) {
        let (a, b) = (&w[0].cost_saving, &w[1].cost_saving);
        ensure(
            b.upper() >= a.lower(),
            format!("cost saving drops from {:.4} (gamma {}) to {:.4} (gamma {}) beyond CI overlap", a.mean, w[0].gamma, b.mean, w[1].gamma),
        )?;
    }
    let last = points.last().unwrap().cost_saving;
    ensure((0.20..=0.40).contains(&last.mean), format!("cost saving at gamma 10 is {:.4}, outside [0.20, 0.40]", last.mean))?;
    let curve: Vec<String> = points.iter().map(|p| format!("{:.3}", p.cost_saving.mean)).collect();
    Ok(format!("cost saving vs gamma = [{}], at gamma 10: {:.4} ± {:.4}", curve.join(", "), last.mean, last.half_width.unwrap_or(0.0)))
}

fn hit_ratio_loss_curve() -> Check {
    let results = full_sweep();
    let high = series(results, ALPHA_HIGH, BUDGET_FULL);
    let low = series(results, ALPHA_LOW, BUDGET_FULL);
    let at_max = high.last().unwrap().hit_ratio_loss;
    let fmt = |pts: &[&cachecost::experiment::SweepPoint]| pts.iter().map(|p| format!("{:.3}", p.hit_ratio_loss.mean)).collect::<Vec<_>>().join(", ");
    let summary = format!("loss alpha 1.2 = [{}]; alpha 0.8 = [{}]", fmt(&high), fmt(&low));
    ensure((0.40..=0.75).contains(&at_max.mean), format!("hit-ratio loss at gamma 10 is {:.4}, outside [0.40, 0.75]; {summary}", at_max.mean))?;
    for (h, l) in high.iter().zip(&low).filter(|(h, _)| h.gamma >= 2.0) {
        ensure(
            h.hit_ratio_loss.mean > l.hit_ratio_loss.mean,
            format!(
                "at gamma {} the loss for alpha 1.2 ({:.4} ± {:.4}) is not above alpha 0.8 ({:.4} ± {:.4}); {summary}",
                h.gamma,
                h.hit_ratio_loss.mean,
                h.hit_ratio_loss.half_width.unwrap_or(0.0),
                l.hit_ratio_loss.mean,
                l.hit_ratio_loss.half_width.unwrap_or(0.0)
            ),
        )?;
    }
    Ok(summary)
}

fn budget_ordering() -> Check {
    let results = full_sweep();
    let savings: Vec<f64> = BUDGETS.iter().map(|&b| results.point(GAMMA_MAX, ALPHA_HIGH, b).unwrap().cost_saving.mean).collect();
    ensure(savings.windows(2).all(|w| w[0] < w[1]), format!("savings across budgets {BUDGETS:?} are {savings:?}"))?;
    Ok(format!("cost saving at gamma 10 for budgets {BUDGETS:?}: {savings:.4?}"))
}

fn cache_split() -> Check {
    let points = series(full_sweep(), ALPHA_HIGH, BUDGET_FULL);
    let peering = cachecost::scenario::three_link_topology::<f64>(1.0).unwrap().slot(PEERING_LINK).unwrap();
    for p in &points {
        ensure(p.scenarios.iter().all(|s| s.border_shares[peering] == 0.0), format!("gamma {}: a scenario caches on the peering link", p.gamma))?;
    }
    let l2: Vec<f64> = points.iter().map(|p| p.share(CHEAP_LINK).unwrap().mean).collect();
    let l3: Vec<f64> = points.iter().map(|p| p.share(EXPENSIVE_LINK).unwrap().mean).collect();
    ensure(l2[0] > l3[0], format!("at gamma 1 the cheap link share {:.3} does not exceed the expensive one {:.3}", l2[0], l3[0]))?;
    let threshold = (0..points.len()).find(|&i| (i..points.len()).all(|j| l3[j] > l2[j]));
    let threshold = threshold.ok_or_else(|| format!("l3 share never stays above l2: l2 = {l2:.3?}, l3 = {l3:.3?}"))?;
    ensure(l3.windows(2).all(|w| w[1] >= w[0]), format!("l3 share is not non-decreasing in gamma: {l3:.3?}"))?;
    Ok(format!("l1 share 0 everywhere; l2 > l3 at gamma 1; l3 > l2 from gamma {}; l2 = {l2:.3?}, l3 = {l3:.3?}", points[threshold].gamma))
}

fn desk_scale_invariants() -> Check {
    let start = Instant::now();
    let n = 100_000;
    let budgets = [10u64, 100, 1_000];
    for (gamma, alpha, seed) in [(1.0, 0.8, 11u64), (3.0, 1.2, 12), (10.0, 1.2, 13), (10.0, 0.0, 14)] {
        let config = ScenarioConfig { catalog_size: n, zipf_alpha: alpha, price_ratio: gamma, budget: 0, availability_prob: 0.5, seed, scenario: 0 };
        let inst = generate(&config).map_err(|e| e.to_string())?;
        let scaled = inst.with_topology(inst.topology().scale_prices(3.75).unwrap()).unwrap();
        let (mut last_cost, mut last_hit) = (f64::INFINITY, -1.0);
        for &b in &budgets {
            let cost_plan = plan_min_cost(&inst, b).unwrap();
            let hit_plan = plan_max_hit(&inst, b).unwrap();
            for plan in [&cost_plan, &hit_plan] {
                ensure(validate(&inst, plan, b).is_feasible(), format!("gamma {gamma} budget {b}: infeasible plan"))?;
                ensure(plan.total_internal_size() == 0, "internal cache allocated")?;
            }
            ensure(plan_min_cost(&scaled, b).unwrap() == cost_plan, format!("gamma {gamma} budget {b}: price scaling changed the MIN-COST plan"))?;
            ensure(plan_max_hit(&scaled, b).unwrap() == hit_plan, format!("gamma {gamma} budget {b}: price scaling changed the MAX-HIT plan"))?;
            let c = evaluate(&inst, &cost_plan).unwrap();
            let h = evaluate(&inst, &hit_plan).unwrap();
            ensure(c.total_cost <= last_cost && h.hit_ratio >= last_hit, format!("gamma {gamma} budget {b}: not monotone in budget"))?;
            ensure(close(c.total_cost, lower_bound_cost(&inst, b).unwrap(), REL_TOL), "MIN-COST cost differs from the lower bound")?;
            last_cost = c.total_cost;
            last_hit = h.hit_ratio;
            let quantum = default_quantum(inst.catalog());
            for (plan, report) in [(&cost_plan, &c), (&hit_plan, &h)] {
                let replayed = replay_requests(&inst, plan, quantum).unwrap();
                let bound = replay_error_bound(&inst, plan, quantum);
                let gap = (replayed - report.total_cost).abs();
                ensure(
                    gap <= bound * (1.0 + 1e-9) + REL_TOL * report.total_cost,
                    format!("gamma {gamma} budget {b}: replay gap {gap} exceeds bound {bound}"),
                )?;
            }
        }
    }

    let spec = SweepSpec {
        gammas: vec![1.0, 2.0, 5.0, 10.0],
        alphas: vec![0.8, 1.2],
        budgets: budgets.to_vec(),
        catalog_size: n,
        scenarios_per_point: 8,
        seed: 99,
        confidence: 0.95,
        availability_prob: 0.5,
    };
    let first = run_sweep(&spec).map_err(|e| e.to_string())?;
    for p in &first.points {
        for s in &p.scenarios {
            ensure(
                s.cost_saving >= 0.0 && s.hit_ratio_loss >= 0.0,
                format!("gamma {} alpha {} budget {} scenario {}: saving {} loss {}", p.gamma, p.alpha, p.budget, s.scenario, s.cost_saving, s.hit_ratio_loss),
            )?;
        }
    }
    let bytes = |r: &SweepResults| {
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        (serde_json::to_vec(r).unwrap(), csv)
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let second = pool.install(|| run_sweep(&spec)).map_err(|e| e.to_string())?;
    ensure(bytes(&first) == bytes(&second), "sweep outputs differ between runs")?;
    let a: AvailabilityMap = cachecost::scenario::scenario_availability(n, 0.5, 5, 2).unwrap();
    let b = cachecost::scenario::scenario_availability(n, 0.5, 5, 2).unwrap();
    ensure(a.sets().iter().map(|s| s.0).eq(b.sets().iter().map(|s| s.0)), "availability not reproducible")?;

    let elapsed = start.elapsed();
    Ok(format!("feasibility, scaling, monotonicity, replay, non-negative ratios and determinism hold ({elapsed:.1?})"))
}

fn trivial_anchors() -> Check {
    let n = 2_000;
    let spec = |budgets: Vec<u64>| SweepSpec {
        gammas: vec![1.0, 10.0],
        alphas: vec![0.8, 1.2],
        budgets,
        catalog_size: n,
        scenarios_per_point: 4,
        seed: 3,
        confidence: 0.95,
        availability_prob: 0.5,
    };
    let results = run_sweep(&spec(vec![0, n as u64, 5 * n as u64])).map_err(|e| e.to_string())?;
    for p in &results.points {
        for s in &p.scenarios {
            if p.budget == 0 {
                ensure(s.cost_saving == 0.0 && s.hit_ratio_loss == 0.0, format!("budget 0: saving {} loss {}", s.cost_saving, s.hit_ratio_loss))?;
            } else {
                for m in [s.min_cost, s.max_hit] {
                    ensure(m.cost == 0.0 && m.hit_ratio == 1.0, format!("budget {}: cost {} hit-ratio {}", p.budget, m.cost, m.hit_ratio))?;
                }
                ensure(s.cost_saving_undefined && s.cost_saving == 0.0, "zero MAX-HIT cost should be flagged")?;
            }
        }
    }

    let config = ScenarioConfig { catalog_size: n, zipf_alpha: 1.2, price_ratio: 1.0, budget: 0, availability_prob: 0.5, seed: 4, scenario: 0 };
    let base = generate(&config).unwrap();
    let both: LinkSet = [CHEAP_LINK, EXPENSIVE_LINK].into_iter().collect();
    let inst = Instance::new(base.topology().clone(), base.shared_catalog(), AvailabilityMap::new(vec![both; n]).unwrap()).unwrap();
    for b in [1u64, 10, 100, 1_000] {
        let mass = |plan: &cachecost::PlacementPlan| -> f64 { plan.cached_objects().map(|o| inst.catalog().demand(o)).sum() };
        let (c, h) = (mass(&plan_min_cost(&inst, b).unwrap()), mass(&plan_max_hit(&inst, b).unwrap()));
        ensure(c == h, format!("gamma 1, budget {b}: cached demand {c} vs {h}"))?;
    }
    Ok("budget 0 gives no saving or loss; budget >= N gives cost 0 and hit-ratio 1; gamma 1 on shared provider links caches equal demand".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 oracle optimality", oracle_optimality),
        ("6 desk-scale invariants", desk_scale_invariants),
        ("7 trivial anchors", trivial_anchors),
        ("2 cost saving vs price ratio", cost_saving_curve),
        ("3 hit-ratio loss vs price ratio", hit_ratio_loss_curve),
        ("4 cost saving vs budget", budget_ordering),
        ("5 border cache split", cache_split),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
