//! Report rendering: the human-readable transcript and the JSON document.

use ipa_core::abstraction::{CubeSet, PredicateBank};
use ipa_core::reach::{IterStats, PropertyStatus, ReachResult, FAILURE_EXPLANATIONS};
use serde::Serialize;

#[derive(Serialize)]
pub struct JsonReport {
    pub model: String,
    pub predicates: Vec<String>,
    pub iterations: u32,
    pub converged: bool,
    pub reach_size: usize,
    pub properties: Vec<JsonProperty>,
    pub timings: JsonTimings,
}

#[derive(Serialize)]
pub struct JsonProperty {
    pub name: String,
    pub status: String,
    pub witnesses: Vec<String>,
}

#[derive(Serialize)]
pub struct JsonTimings {
    pub total_ms: f64,
    pub iterations: Vec<JsonIteration>,
}

#[derive(Serialize)]
pub struct JsonIteration {
    pub new_cubes: usize,
    pub solver_calls: u64,
    pub ms: f64,
}

pub struct PropertyOutcome {
    pub name: String,
    pub status: PropertyStatus,
    pub witnesses: Vec<u64>,
}

pub fn json_report(
    model_path: &str,
    bank: &PredicateBank,
    reach: &ReachResult,
    properties: &[PropertyOutcome],
    total_ms: f64,
) -> JsonReport {
    JsonReport {
        model: model_path.to_string(),
        predicates: bank.pred_syms.clone(),
        iterations: reach.iterations,
        converged: reach.converged,
        reach_size: reach.rho.len(),
        properties: properties
            .iter()
            .map(|p| JsonProperty {
                name: p.name.clone(),
                status: match p.status {
                    PropertyStatus::Holds => "HOLDS".to_string(),
                    PropertyStatus::Unknown => "UNKNOWN".to_string(),
                },
                witnesses: p
                    .witnesses
                    .iter()
                    .map(|&c| CubeSet::bits(bank.width(), c))
                    .collect(),
            })
            .collect(),
        timings: JsonTimings {
            total_ms,
            iterations: reach
                .per_iteration
                .iter()
                .map(|it: &IterStats| JsonIteration {
                    new_cubes: it.new_cubes,
                    solver_calls: it.solver_calls,
                    ms: it.wall.as_secs_f64() * 1e3,
                })
                .collect(),
        },
    }
}

pub fn render_text(
    model_path: &str,
    bank: &PredicateBank,
    reach: &ReachResult,
    properties: &[PropertyOutcome],
) -> String {
    let mut out = String::new();
    out.push_str(&format!("model: {model_path}\n"));
    out.push_str(&format!(
        "predicates ({}): {}\n",
        bank.width(),
        bank.pred_syms.join(" ")
    ));
    for (k, it) in reach.per_iteration.iter().enumerate() {
        out.push_str(&format!(
            "iteration {}: +{} cubes ({} solver calls, {:.1} ms)\n",
            k + 1,
            it.new_cubes,
            it.solver_calls,
            it.wall.as_secs_f64() * 1e3
        ));
    }
    if reach.converged {
        out.push_str(&format!(
            "converged after {} iterations; {} reachable abstract states\n",
            reach.iterations,
            reach.rho.len()
        ));
    } else {
        out.push_str(&format!(
            "iteration budget exhausted after {} iterations without convergence; {} states so far\n",
            reach.iterations,
            reach.rho.len()
        ));
    }
    for p in properties {
        match p.status {
            PropertyStatus::Holds => out.push_str(&format!("{}: HOLDS\n", p.name)),
            PropertyStatus::Unknown => {
                out.push_str(&format!("{}: UNKNOWN\n", p.name));
                for w in &p.witnesses {
                    out.push_str(&format!(
                        "  violating cube: {}\n",
                        CubeSet::bits(bank.width(), *w)
                    ));
                }
                out.push_str("  a failed proof attempt has four possible causes:\n");
                for reason in FAILURE_EXPLANATIONS {
                    out.push_str(&format!("   - {reason}\n"));
                }
            }
        }
    }
    out
}
