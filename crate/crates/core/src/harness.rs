//! Operational surface: scenario ingestion and validation, run execution
//! (single and multi-seed), trace/summary persistence, and proactive vs
//! reactive vs no-adaptation comparison.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::adaptation::PolicyState;
use crate::control::{LoopConfig, LoopMode, LoopState};
use crate::evaluation::{AppSpec, RunMetrics};
use crate::model::{ApplicationLabel, ControlSettings, CpBounds};
use crate::sim::{
    EnergyModel, Environment, FaultEvent, FaultKind, NodeInit, NodeRole, PresenceEvent, SimState,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("scenario invalid at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Precondition(String),
}

fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Io { path, source }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> HarnessError {
    HarnessError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

/// Run-level configuration overrides, all optional in the document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub energy: EnergyModel,
    pub cp_bounds: CpBounds,
    #[serde(rename = "loop")]
    pub control: LoopConfig,
    /// Mission window length in ticks for the reliability metric; the full
    /// run when absent.
    pub mission_window: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioNode {
    pub id: u32,
    pub position: (f64, f64),
    pub role: NodeRole,
    #[serde(default = "default_battery")]
    pub initial_battery: f64,
    #[serde(default)]
    pub controls: ControlSettings,
}

fn default_battery() -> f64 {
    100.0
}

/// A complete run description, loadable from a JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub nodes: Vec<ScenarioNode>,
    pub environment: Environment,
    pub fault_schedule: Vec<FaultEvent>,
    pub presence_script: Vec<PresenceEvent>,
    pub app_spec: AppSpec,
    pub config: RunConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "unnamed".to_string(),
            nodes: Vec::new(),
            environment: Environment::default(),
            fault_schedule: Vec::new(),
            presence_script: Vec::new(),
            app_spec: AppSpec::default(),
            config: RunConfig::default(),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.name.is_empty() {
            return Err(invalid("name", "must not be empty"));
        }
        let mut seen = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(first) = seen.insert(n.id, i) {
                return Err(invalid(
                    format!("nodes[{i}].id"),
                    format!("duplicate node id {} (first at nodes[{first}])", n.id),
                ));
            }
            if n.initial_battery < 0.0 {
                return Err(invalid(
                    format!("nodes[{i}].initial_battery"),
                    "must be >= 0",
                ));
            }
            if !(0.0..1.0).contains(&n.controls.sleep_fraction) {
                return Err(invalid(
                    format!("nodes[{i}].controls.sleep_fraction"),
                    "must be in [0, 1)",
                ));
            }
            if n.controls.round_time <= 0.0 {
                return Err(invalid(
                    format!("nodes[{i}].controls.round_time"),
                    "must be > 0",
                ));
            }
        }
        let sensors = self
            .nodes
            .iter()
            .filter(|n| n.role == NodeRole::PresenceSensor)
            .count();
        let actuators = self
            .nodes
            .iter()
            .filter(|n| n.role == NodeRole::LightActuator)
            .count();
        if sensors != 1 {
            return Err(invalid("nodes", format!("need exactly one PresenceSensor, found {sensors}")));
        }
        if actuators != 1 {
            return Err(invalid("nodes", format!("need exactly one LightActuator, found {actuators}")));
        }
        for (i, w) in self.presence_script.windows(2).enumerate() {
            if w[1].tick <= w[0].tick {
                return Err(invalid(
                    format!("presence_script[{}].tick", i + 1),
                    "ticks must be strictly increasing",
                ));
            }
        }
        if self.environment.path_loss_exponent <= 0.0 {
            return Err(invalid("environment.path_loss_exponent", "must be > 0"));
        }
        if self.environment.shadowing_sigma < 0.0 {
            return Err(invalid("environment.shadowing_sigma", "must be >= 0"));
        }
        for (i, z) in self.environment.interference_zones.iter().enumerate() {
            if z.radius <= 0.0 {
                return Err(invalid(
                    format!("environment.interference_zones[{i}].radius"),
                    "must be > 0",
                ));
            }
            if z.extra_noise < 0.0 {
                return Err(invalid(
                    format!("environment.interference_zones[{i}].extra_noise"),
                    "must be >= 0",
                ));
            }
            if z.active_from > z.active_to {
                return Err(invalid(
                    format!("environment.interference_zones[{i}].active_from"),
                    "must be <= active_to",
                ));
            }
        }
        for (i, f) in self.fault_schedule.iter().enumerate() {
            match &f.kind {
                FaultKind::NodeCrash { node } | FaultKind::DrainMultiplier { node, .. } => {
                    if !self.nodes.iter().any(|n| n.id == *node) {
                        return Err(invalid(
                            format!("fault_schedule[{i}]"),
                            format!("references unknown node {node}"),
                        ));
                    }
                }
                FaultKind::Interference { zone } => {
                    if zone.radius <= 0.0 {
                        return Err(invalid(
                            format!("fault_schedule[{i}].kind.Interference.zone.radius"),
                            "must be > 0",
                        ));
                    }
                }
            }
            if let FaultKind::DrainMultiplier { factor, .. } = f.kind {
                if factor < 1.0 {
                    return Err(invalid(
                        format!("fault_schedule[{i}].kind.DrainMultiplier.factor"),
                        "must be >= 1",
                    ));
                }
            }
        }
        if self.app_spec.max_reaction_delay <= 0.0 {
            return Err(invalid("app_spec.max_reaction_delay", "must be > 0"));
        }
        if !self.config.cp_bounds.is_well_formed() {
            return Err(invalid("config.cp_bounds", "lo must be <= hi in every bound"));
        }
        Ok(())
    }

    pub fn build_sim(&self, seed: u64) -> SimState {
        let nodes: Vec<NodeInit> = self
            .nodes
            .iter()
            .map(|n| NodeInit {
                id: n.id,
                position: n.position,
                role: n.role,
                initial_battery: n.initial_battery,
                controls: n.controls.clone(),
            })
            .collect();
        SimState::init_network(
            &nodes,
            self.environment.clone(),
            self.fault_schedule.clone(),
            self.presence_script.clone(),
            self.config.energy.clone(),
            self.config.cp_bounds.clone(),
            seed,
        )
    }
}

/// Parses and validates a scenario document (strict: unknown keys rejected).
pub fn load_scenario_str(document: &str) -> Result<Scenario, HarnessError> {
    let scenario: Scenario =
        serde_json::from_str(document).map_err(|e| HarnessError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, HarnessError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    load_scenario_str(&text)
}

/// Snapshot of the bandit for the run summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySnapshot {
    pub exploration_rate: f64,
    pub ratios: BTreeMap<String, BTreeMap<String, (u64, u64)>>,
}

impl PolicySnapshot {
    fn from(policy: &PolicyState) -> PolicySnapshot {
        let mut ratios = BTreeMap::new();
        for (ft, per) in &policy.stats {
            let inner: BTreeMap<String, (u64, u64)> = per
                .iter()
                .map(|(id, s)| (id.clone(), (s.successes, s.attempts)))
                .collect();
            ratios.insert(ft.name().to_string(), inner);
        }
        PolicySnapshot {
            exploration_rate: policy.exploration_rate,
            ratios,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub mode: LoopMode,
    pub ticks: u64,
    pub metrics: RunMetrics,
    pub policy: PolicySnapshot,
    pub config: RunConfig,
    pub app_spec: AppSpec,
    /// Trace file name, relative to the output directory.
    pub trace_file: Option<String>,
}

pub const TRACE_HEADER: &str = "tick,node_id,rssi_mean_dbm,neighbor_count,messages_received,battery_j,reachable,app_label,violated_dimension,prediction_fault_type,prediction_t_min,prediction_t_max,action_id,intervention_flag";

/// Executes one run of `ticks` control-loop cycles; when `out_dir` is given,
/// writes the trace CSV and summary JSON there.
pub fn run(
    scenario: &Scenario,
    seed: u64,
    mode: LoopMode,
    ticks: u64,
    out_dir: Option<&Path>,
) -> Result<RunReport, HarnessError> {
    if ticks == 0 {
        return Err(HarnessError::Precondition("ticks must be >= 1".to_string()));
    }
    let sim = scenario.build_sim(seed);
    let mut state = LoopState::new(sim, scenario.app_spec.clone(), scenario.config.control.clone());
    let mut trace = String::with_capacity(1024 + 96 * ticks as usize * scenario.nodes.len());
    trace.push_str(TRACE_HEADER);
    trace.push('\n');
    for _ in 0..ticks {
        let out = state.tick(mode);
        let (label, dim) = match out.label {
            ApplicationLabel::Normal => ("normal", ""),
            ApplicationLabel::Failure(d) => ("failure", d.name()),
        };
        for f in &out.frames {
            let pred = out.new_predictions.iter().find(|p| p.node == f.node);
            let action = out
                .actions
                .iter()
                .filter(|(n, _)| *n == f.node)
                .map(|(_, a)| a.as_str())
                .collect::<Vec<_>>()
                .join(";");
            let intervention = if out.interventions.contains(&f.node) { "1" } else { "" };
            writeln!(
                trace,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                out.tick,
                f.node,
                f.values[0],
                f.values[1],
                f.values[2],
                f.values[3],
                f.reachable,
                label,
                dim,
                pred.map(|p| p.fault_type.name()).unwrap_or(""),
                pred.map(|p| p.t_min.to_string()).unwrap_or_default(),
                pred.map(|p| p.t_max.to_string()).unwrap_or_default(),
                action,
                intervention,
            )
            .expect("string write");
        }
    }
    let metrics = state.metrics.finalize(scenario.config.mission_window);
    let stem = format!("{}-{}-seed{}", scenario.name, mode.name(), seed);
    let trace_file = out_dir.map(|_| format!("{stem}.trace.csv"));
    let report = RunReport {
        scenario: scenario.name.clone(),
        seed,
        mode,
        ticks,
        metrics,
        policy: PolicySnapshot::from(&state.policy),
        config: scenario.config.clone(),
        app_spec: scenario.app_spec.clone(),
        trace_file: trace_file.clone(),
    };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let trace_path = dir.join(trace_file.expect("set when out_dir is set"));
        fs::write(&trace_path, trace).map_err(io_err(&trace_path))?;
        let summary_path = dir.join(format!("{stem}.summary.json"));
        let json = serde_json::to_string_pretty(&report).expect("serializable report");
        fs::write(&summary_path, json + "\n").map_err(io_err(&summary_path))?;
    }
    Ok(report)
}

/// One (seed, mode) cell of a comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareCell {
    pub seed: u64,
    pub mode: LoopMode,
    pub availability: f64,
    pub mtbf_ticks: Option<f64>,
    pub manual_interventions: u64,
    pub prediction_precision: Option<f64>,
    pub prediction_recall: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeAggregate {
    pub mode: LoopMode,
    pub mean_availability: f64,
    pub stddev_availability: f64,
    pub mean_interventions: f64,
    pub mean_mtbf_ticks: Option<f64>,
    pub mean_precision: Option<f64>,
    pub mean_recall: Option<f64>,
}

/// Result of a paired one-sided t-test that `lhs` beats `rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairedTest {
    pub lhs: LoopMode,
    pub rhs: LoopMode,
    pub mean_difference: f64,
    pub t_statistic: Option<f64>,
    pub p_value: f64,
    pub significant_at_05: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub scenario: String,
    pub seeds: Vec<u64>,
    pub ticks: u64,
    pub cells: Vec<CompareCell>,
    pub aggregates: Vec<ModeAggregate>,
    pub proactive_vs_reactive: PairedTest,
    pub reactive_vs_no_adapt: PairedTest,
    /// True when availability ordering Proactive > Reactive > NoAdaptation
    /// holds with both paired tests significant at 0.05.
    pub ordering_holds: bool,
    pub errors: Vec<String>,
}

/// Paired one-sided test of mean(lhs - rhs) > 0.
pub fn paired_one_sided(lhs: &[f64], rhs: &[f64], l: LoopMode, r: LoopMode) -> PairedTest {
    assert_eq!(lhs.len(), rhs.len());
    let n = lhs.len();
    let diffs: Vec<f64> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n as f64 - 1.0);
    let sd = var.sqrt();
    let (t, p) = if sd == 0.0 {
        // degenerate: all paired differences identical
        (None, if mean > 0.0 { 0.0 } else { 1.0 })
    } else {
        let t = mean / (sd / (n as f64).sqrt());
        let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid dof");
        (Some(t), 1.0 - dist.cdf(t))
    };
    PairedTest {
        lhs: l,
        rhs: r,
        mean_difference: mean,
        t_statistic: t,
        p_value: p,
        significant_at_05: mean > 0.0 && p < 0.05,
    }
}

pub const ALL_MODES: [LoopMode; 3] = [
    LoopMode::NoAdaptation,
    LoopMode::Reactive,
    LoopMode::Proactive,
];

fn run_cell(scenario: &Scenario, seed: u64, mode: LoopMode, ticks: u64) -> Result<CompareCell, String> {
    run(scenario, seed, mode, ticks, None)
        .map(|r| CompareCell {
            seed,
            mode,
            availability: r.metrics.availability,
            mtbf_ticks: r.metrics.mtbf_ticks,
            manual_interventions: r.metrics.manual_interventions,
            prediction_precision: r.metrics.prediction_precision,
            prediction_recall: r.metrics.prediction_recall,
        })
        .map_err(|e| format!("seed {seed} mode {}: {e}", mode.name()))
}

#[cfg(feature = "parallel")]
fn run_all_cells(
    scenario: &Scenario,
    seeds: &[u64],
    ticks: u64,
) -> Vec<Result<CompareCell, String>> {
    use rayon::prelude::*;
    let jobs: Vec<(u64, LoopMode)> = seeds
        .iter()
        .flat_map(|s| ALL_MODES.iter().map(|m| (*s, *m)))
        .collect();
    jobs.into_par_iter()
        .map(|(seed, mode)| run_cell(scenario, seed, mode, ticks))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all_cells(
    scenario: &Scenario,
    seeds: &[u64],
    ticks: u64,
) -> Vec<Result<CompareCell, String>> {
    run_all_cells_sequential(scenario, seeds, ticks)
}

/// Sequential cell execution; kept available for the benchmark comparison.
pub fn run_all_cells_sequential(
    scenario: &Scenario,
    seeds: &[u64],
    ticks: u64,
) -> Vec<Result<CompareCell, String>> {
    seeds
        .iter()
        .flat_map(|s| ALL_MODES.iter().map(move |m| (*s, *m)))
        .map(|(seed, mode)| run_cell(scenario, seed, mode, ticks))
        .collect()
}

/// Runs all three modes for each seed and reports per-mode aggregates plus
/// the paired mode-ordering verdict. Per-cell errors are reported without
/// aborting remaining cells.
pub fn compare(
    scenario: &Scenario,
    seeds: &[u64],
    ticks: u64,
) -> Result<ComparisonSummary, HarnessError> {
    if seeds.len() < 2 {
        return Err(HarnessError::Precondition(
            "compare needs at least 2 seeds".to_string(),
        ));
    }
    let results = run_all_cells(scenario, seeds, ticks);
    let mut cells = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(c) => cells.push(c),
            Err(e) => errors.push(e),
        }
    }
    cells.sort_by_key(|c| (c.seed, ALL_MODES.iter().position(|m| *m == c.mode)));

    let per_mode = |mode: LoopMode| -> Vec<&CompareCell> {
        cells.iter().filter(|c| c.mode == mode).collect()
    };
    let mut aggregates = Vec::new();
    for mode in ALL_MODES {
        let cs = per_mode(mode);
        let n = cs.len().max(1) as f64;
        let mean = cs.iter().map(|c| c.availability).sum::<f64>() / n;
        let var = cs
            .iter()
            .map(|c| (c.availability - mean).powi(2))
            .sum::<f64>()
            / n;
        let mean_opt = |get: &dyn Fn(&CompareCell) -> Option<f64>| {
            let vals: Vec<f64> = cs.iter().filter_map(|c| get(c)).collect();
            if vals.is_empty() {
                None
            } else {
                Some(vals.iter().sum::<f64>() / vals.len() as f64)
            }
        };
        aggregates.push(ModeAggregate {
            mode,
            mean_availability: mean,
            stddev_availability: var.sqrt(),
            mean_interventions: cs.iter().map(|c| c.manual_interventions as f64).sum::<f64>() / n,
            mean_mtbf_ticks: mean_opt(&|c| c.mtbf_ticks),
            mean_precision: mean_opt(&|c| c.prediction_precision),
            mean_recall: mean_opt(&|c| c.prediction_recall),
        });
    }

    // paired tests need every seed present in both modes
    let avail = |mode: LoopMode| -> Vec<f64> {
        seeds
            .iter()
            .filter_map(|s| {
                cells
                    .iter()
                    .find(|c| c.seed == *s && c.mode == mode)
                    .map(|c| c.availability)
            })
            .collect()
    };
    let pro = avail(LoopMode::Proactive);
    let rea = avail(LoopMode::Reactive);
    let non = avail(LoopMode::NoAdaptation);
    let complete = pro.len() == seeds.len() && rea.len() == seeds.len() && non.len() == seeds.len();
    let pvr = paired_one_sided(&pro, &rea, LoopMode::Proactive, LoopMode::Reactive);
    let rvn = paired_one_sided(&rea, &non, LoopMode::Reactive, LoopMode::NoAdaptation);
    let ordering_holds = complete && pvr.significant_at_05 && rvn.significant_at_05;
    Ok(ComparisonSummary {
        scenario: scenario.name.clone(),
        seeds: seeds.to_vec(),
        ticks,
        cells,
        aggregates,
        proactive_vs_reactive: pvr,
        reactive_vs_no_adapt: rvn,
        ordering_holds,
        errors,
    })
}

pub fn write_comparison(
    summary: &ComparisonSummary,
    out_dir: &Path,
) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let path = out_dir.join(format!("{}-comparison.json", summary.scenario));
    let json = serde_json::to_string_pretty(summary).expect("serializable summary");
    fs::write(&path, json + "\n").map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> serde_json::Value {
        serde_json::json!({
            "name": "mini",
            "nodes": [
                {"id": 0, "position": [0.0, 0.0], "role": "PresenceSensor"},
                {"id": 1, "position": [5.0, 0.0], "role": "Relay"},
                {"id": 2, "position": [10.0, 0.0], "role": "LightActuator"}
            ],
            "presence_script": [{"tick": 5, "occupied": true}]
        })
    }

    #[test]
    fn minimal_document_loads_with_defaults() {
        let s = load_scenario_str(&minimal_doc().to_string()).unwrap();
        assert_eq!(s.nodes.len(), 3);
        assert_eq!(s.nodes[1].initial_battery, 100.0);
        assert_eq!(s.config.control.monitor_window, 10);
    }

    #[test]
    fn duplicate_node_id_names_path() {
        let mut doc = minimal_doc();
        doc["nodes"][2]["id"] = serde_json::json!(0);
        doc["nodes"][2]["role"] = serde_json::json!("LightActuator");
        let err = load_scenario_str(&doc.to_string()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nodes[2].id"), "got: {msg}");
    }

    #[test]
    fn unknown_key_rejected() {
        let mut doc = minimal_doc();
        doc["nodez"] = serde_json::json!([]);
        let err = load_scenario_str(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("nodez"));
    }

    #[test]
    fn missing_actuator_rejected() {
        let mut doc = minimal_doc();
        doc["nodes"][2]["role"] = serde_json::json!("Relay");
        let err = load_scenario_str(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("LightActuator"));
    }

    #[test]
    fn two_actuators_rejected() {
        let mut doc = minimal_doc();
        doc["nodes"][1]["role"] = serde_json::json!("LightActuator");
        let err = load_scenario_str(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("exactly one LightActuator"));
    }

    #[test]
    fn presence_script_must_increase() {
        let mut doc = minimal_doc();
        doc["presence_script"] = serde_json::json!([
            {"tick": 5, "occupied": true},
            {"tick": 5, "occupied": false}
        ]);
        let err = load_scenario_str(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("presence_script[1].tick"));
    }

    #[test]
    fn scenario_round_trips() {
        let s = load_scenario_str(&minimal_doc().to_string()).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let again = load_scenario_str(&json).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn run_rejects_zero_ticks() {
        let s = load_scenario_str(&minimal_doc().to_string()).unwrap();
        assert!(run(&s, 1, LoopMode::Proactive, 0, None).is_err());
    }

    #[test]
    fn compare_rejects_single_seed() {
        let s = load_scenario_str(&minimal_doc().to_string()).unwrap();
        assert!(compare(&s, &[1], 10).is_err());
    }

    #[test]
    fn run_reports_match_between_invocations() {
        let s = load_scenario_str(&minimal_doc().to_string()).unwrap();
        let a = run(&s, 9, LoopMode::Proactive, 50, None).unwrap();
        let b = run(&s, 9, LoopMode::Proactive, 50, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn paired_test_detects_clear_ordering() {
        let lhs = vec![0.9, 0.92, 0.91, 0.95, 0.93, 0.9];
        let rhs = vec![0.7, 0.75, 0.72, 0.74, 0.71, 0.73];
        let t = paired_one_sided(&lhs, &rhs, LoopMode::Proactive, LoopMode::Reactive);
        assert!(t.significant_at_05);
        let t = paired_one_sided(&rhs, &lhs, LoopMode::Reactive, LoopMode::Proactive);
        assert!(!t.significant_at_05);
    }

    #[test]
    fn paired_test_degenerate_identical_diffs() {
        let lhs = vec![0.9, 0.9, 0.9];
        let rhs = vec![0.8, 0.8, 0.8];
        let t = paired_one_sided(&lhs, &rhs, LoopMode::Proactive, LoopMode::Reactive);
        assert!(t.significant_at_05);
        assert_eq!(t.t_statistic, None);
    }
}
