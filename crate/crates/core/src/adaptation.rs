//! Adaptation: maps fault predictions to controllable-parameter changes and
//! learns per-fault-type action effectiveness with an epsilon-greedy bandit.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{classify, FaultPrediction, FaultType, ThresholdModel};
use crate::model::ControlSettings;
use crate::monitor::History;
use crate::sim::{NodeId, SimError, SimEvent, SimState, Tick};

#[derive(Debug, Error, PartialEq)]
pub enum AdaptationError {
    #[error("no actions cataloged for fault type {0:?}")]
    EmptyCatalog(FaultType),
}

/// Partial change to a node's controls; unset fields stay as they are.
/// Power/sensitivity/sleep deltas are additive, round time multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlDelta {
    pub tx_power_db: Option<f64>,
    pub rx_sensitivity_db: Option<f64>,
    pub tx_schedules: Option<i32>,
    pub rx_schedules: Option<i32>,
    pub round_time_factor: Option<f64>,
    pub sleep_fraction: Option<f64>,
}

impl ControlDelta {
    pub fn apply_to(&self, settings: &ControlSettings) -> ControlSettings {
        let mut out = settings.clone();
        if let Some(d) = self.tx_power_db {
            out.tx_power += d;
        }
        if let Some(d) = self.rx_sensitivity_db {
            out.rx_sensitivity += d;
        }
        if let Some(d) = self.tx_schedules {
            out.tx_schedules = (out.tx_schedules as i64 + d as i64).max(0) as u32;
        }
        if let Some(d) = self.rx_schedules {
            out.rx_schedules = (out.rx_schedules as i64 + d as i64).max(0) as u32;
        }
        if let Some(f) = self.round_time_factor {
            out.round_time *= f;
        }
        if let Some(d) = self.sleep_fraction {
            out.sleep_fraction += d;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        *self == ControlDelta::default()
    }
}

/// What an action does when applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ActionKind {
    /// Adjust the target node's own controls.
    AdjustSelf(ControlDelta),
    /// Adjust every neighbor in radio range of the target (redundancy).
    AdjustNeighbors(ControlDelta),
    /// Request a manual intervention on the target.
    Escalate,
}

/// A cataloged adaptation action; `target` is bound when selected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationAction {
    pub id: &'static str,
    pub kind: ActionKind,
    pub description: &'static str,
}

fn delta(f: impl FnOnce(&mut ControlDelta)) -> ControlDelta {
    let mut d = ControlDelta::default();
    f(&mut d);
    d
}

/// Default per-fault-type catalogs.
pub fn default_catalog(fault_type: FaultType) -> Vec<AdaptationAction> {
    match fault_type {
        FaultType::BatteryDepletion => vec![
            AdaptationAction {
                id: "sleep_up",
                kind: ActionKind::AdjustSelf(delta(|d| d.sleep_fraction = Some(0.2))),
                description: "increase sleep fraction by 0.2",
            },
            AdaptationAction {
                id: "tx_sched_down",
                kind: ActionKind::AdjustSelf(delta(|d| d.tx_schedules = Some(-1))),
                description: "drop one broadcast slot",
            },
            AdaptationAction {
                id: "round_double",
                kind: ActionKind::AdjustSelf(delta(|d| d.round_time_factor = Some(2.0))),
                description: "double the round time",
            },
            AdaptationAction {
                id: "tx_power_down",
                kind: ActionKind::AdjustSelf(delta(|d| d.tx_power_db = Some(-3.0))),
                description: "lower TX power by 3 dB",
            },
            AdaptationAction {
                id: "battery_swap",
                kind: ActionKind::Escalate,
                description: "schedule a battery replacement",
            },
        ],
        FaultType::ConnectivityLoss => vec![
            AdaptationAction {
                id: "tx_power_up",
                kind: ActionKind::AdjustSelf(delta(|d| d.tx_power_db = Some(5.0))),
                description: "raise TX power by 5 dB",
            },
            AdaptationAction {
                id: "rx_sense_up",
                kind: ActionKind::AdjustSelf(delta(|d| d.rx_sensitivity_db = Some(-5.0))),
                description: "improve RX sensitivity by 5 dB",
            },
            AdaptationAction {
                id: "round_half",
                kind: ActionKind::AdjustSelf(delta(|d| d.round_time_factor = Some(0.5))),
                description: "halve the round time",
            },
            AdaptationAction {
                id: "sleep_down",
                kind: ActionKind::AdjustSelf(delta(|d| d.sleep_fraction = Some(-0.2))),
                description: "reduce sleep fraction by 0.2",
            },
        ],
        FaultType::MessageLoss => vec![
            AdaptationAction {
                id: "rx_sched_up",
                kind: ActionKind::AdjustSelf(delta(|d| d.rx_schedules = Some(1))),
                description: "add one listen slot",
            },
            AdaptationAction {
                id: "round_half",
                kind: ActionKind::AdjustSelf(delta(|d| d.round_time_factor = Some(0.5))),
                description: "halve the round time",
            },
        ],
        FaultType::NodeUnreachable => vec![
            AdaptationAction {
                id: "escalate",
                kind: ActionKind::Escalate,
                description: "request manual intervention",
            },
            AdaptationAction {
                id: "neighbor_tx_up",
                kind: ActionKind::AdjustNeighbors(delta(|d| d.tx_power_db = Some(3.0))),
                description: "raise neighbor TX power by 3 dB",
            },
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActionStats {
    pub attempts: u64,
    pub successes: u64,
}

impl ActionStats {
    /// Untried actions score 1.0 (optimistic initialization).
    pub fn ratio(&self) -> f64 {
        if self.attempts == 0 {
            1.0
        } else {
            self.successes as f64 / self.attempts as f64
        }
    }
}

/// Per-fault-type bandit over the action catalogs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    pub exploration_rate: f64,
    pub stats: BTreeMap<FaultType, BTreeMap<String, ActionStats>>,
}

impl PolicyState {
    pub fn new(exploration_rate: f64) -> PolicyState {
        let mut stats = BTreeMap::new();
        for ft in [
            FaultType::BatteryDepletion,
            FaultType::ConnectivityLoss,
            FaultType::MessageLoss,
            FaultType::NodeUnreachable,
        ] {
            let per: BTreeMap<String, ActionStats> = default_catalog(ft)
                .into_iter()
                .map(|a| (a.id.to_string(), ActionStats::default()))
                .collect();
            stats.insert(ft, per);
        }
        PolicyState {
            exploration_rate,
            stats,
        }
    }

    pub fn stats_for(&self, ft: FaultType, id: &str) -> ActionStats {
        self.stats
            .get(&ft)
            .and_then(|m| m.get(id))
            .copied()
            .unwrap_or_default()
    }
}

/// Epsilon-greedy selection: with probability `exploration_rate` a uniform
/// catalog action, otherwise the best success ratio; ties break toward the
/// lowest action id.
pub fn select_action<R: Rng>(
    fault_type: FaultType,
    policy: &PolicyState,
    rng: &mut R,
) -> Result<AdaptationAction, AdaptationError> {
    let catalog = default_catalog(fault_type);
    if catalog.is_empty() {
        return Err(AdaptationError::EmptyCatalog(fault_type));
    }
    let explore: f64 = rng.gen();
    if explore < policy.exploration_rate {
        let i = rng.gen_range(0..catalog.len());
        return Ok(catalog[i].clone());
    }
    let mut sorted = catalog;
    sorted.sort_by(|a, b| a.id.cmp(b.id));
    let best = sorted
        .into_iter()
        .map(|a| {
            let r = policy.stats_for(fault_type, a.id).ratio();
            (a, r)
        })
        .max_by(|(a, ra), (b, rb)| {
            ra.partial_cmp(rb)
                .unwrap()
                // ties toward the lowest id: when equal, prefer the earlier
                .then_with(|| b.id.cmp(a.id))
        })
        .map(|(a, _)| a)
        .unwrap();
    Ok(best)
}

/// Outcome of an applied (or skipped) adaptation for one prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeResult {
    Averted,
    Occurred,
    Expired,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionOutcome {
    pub prediction: FaultPrediction,
    pub action: Option<AdaptationAction>,
    pub result: OutcomeResult,
    pub resolved_at: Tick,
}

/// Applies an action's control change to the managed system. A dead target
/// is recorded as a failed action and leaves the state unchanged.
/// `Escalate` is a no-op here; the control loop owns interventions.
pub fn apply_action(
    action: &AdaptationAction,
    target: NodeId,
    state: &mut SimState,
) -> Result<(), SimError> {
    let tick = state.tick;
    let alive = state.node(target)?.alive;
    if !alive {
        state.event_log.push((
            tick,
            SimEvent::ActionFailed {
                node: target,
                action: action.id.to_string(),
            },
        ));
        return Err(SimError::DeadNode(target));
    }
    match &action.kind {
        ActionKind::AdjustSelf(delta) => {
            let next = delta.apply_to(&state.node(target)?.controls);
            state.apply_controls(target, &next)?;
        }
        ActionKind::AdjustNeighbors(delta) => {
            let ids = neighbors_in_range(state, target);
            for id in ids {
                let next = delta.apply_to(&state.node(id)?.controls);
                state.apply_controls(id, &next)?;
            }
        }
        ActionKind::Escalate => {}
    }
    state.event_log.push((
        tick,
        SimEvent::ActionApplied {
            node: target,
            action: action.id.to_string(),
        },
    ));
    Ok(())
}

/// Alive nodes whose deterministic RSSI toward `target` clears its
/// sensitivity.
pub fn neighbors_in_range(state: &SimState, target: NodeId) -> Vec<NodeId> {
    let Ok(t) = state.node(target) else {
        return Vec::new();
    };
    state
        .nodes
        .iter()
        .filter(|n| n.id != target && n.alive)
        .filter(|n| {
            let dx = n.position.0 - t.position.0;
            let dy = n.position.1 - t.position.1;
            let d = (dx * dx + dy * dy).sqrt().max(1e-6);
            crate::sim::compute_rssi(
                n.controls.tx_power,
                d,
                &state.environment,
                0.0,
                t.position,
                state.tick,
            )
            .map(|rssi| rssi >= t.controls.rx_sensitivity)
            .unwrap_or(false)
        })
        .map(|n| n.id)
        .collect()
}

/// Decides a prediction's outcome, or None while still pending.
///
/// The verdict is taken from the state of the node once the window has run
/// its course, so an adaptation that pulled the trigger observable back to
/// the normal side counts as a save even when the crossing briefly showed up
/// mid-window:
///
/// - Occurred (early): the node died inside the window.
/// - At the first tick past t_max — Occurred when the node is unreachable or
///   its trigger observable sits on the failure side; otherwise Averted when
///   an action was applied, Expired (false positive) when none was.
pub fn resolve_outcome(
    prediction: &FaultPrediction,
    action: Option<&AdaptationAction>,
    history: &History,
    model: &ThresholdModel,
    state: &SimState,
    now: Tick,
) -> Option<PredictionOutcome> {
    let done = |result| {
        Some(PredictionOutcome {
            prediction: *prediction,
            action: action.cloned(),
            result,
            resolved_at: now,
        })
    };
    let dead = state.node(prediction.node).map(|n| !n.alive).unwrap_or(true);
    if dead && now <= prediction.t_max {
        return done(OutcomeResult::Occurred);
    }
    if now <= prediction.t_max {
        return None;
    }
    let failing = match history.last_frame(prediction.node) {
        Some(f) => !f.reachable || classify(f, model)[prediction.trigger.index()].is_failure(),
        None => true,
    };
    if dead || failing {
        done(OutcomeResult::Occurred)
    } else if action.is_some() {
        done(OutcomeResult::Averted)
    } else {
        done(OutcomeResult::Expired)
    }
}

/// Counts the outcome into the bandit. Outcomes without an action leave the
/// policy unchanged.
pub fn update_policy(policy: &mut PolicyState, outcome: &PredictionOutcome) {
    let Some(action) = &outcome.action else {
        return;
    };
    let per = policy
        .stats
        .entry(outcome.prediction.fault_type)
        .or_default();
    let stats = per.entry(action.id.to_string()).or_default();
    stats.attempts += 1;
    if outcome.result == OutcomeResult::Averted {
        stats.successes += 1;
    }
}
