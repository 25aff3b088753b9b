//! The per-run control loop: step the simulator, sample, label, learn,
//! predict, adapt by mode, resolve outcomes, and update metrics — one pass
//! of the monitoring / analysis / adaptation / evaluation cycle per tick.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adaptation::{
    apply_action, resolve_outcome, select_action, update_policy, ActionKind, AdaptationAction,
    OutcomeResult, PolicyState, PredictionOutcome,
};
use crate::analysis::{
    classify, learn_thresholds, predict_faults, AnalysisConfig, FaultPrediction, FaultType,
    SideFlag, ThresholdModel,
};
use crate::evaluation::{
    evaluate_application, record_intervention, AppSpec, MetricsAccumulator,
};
use crate::model::{
    ApplicationLabel, ObservableId, ViolatedDimension, OBSERVABLE_CATALOG, OBSERVABLE_COUNT,
};
use crate::monitor::{sample, History, ObservationFrame};
use crate::sim::{NodeId, SimEvent, SimState, Tick, TickReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopMode {
    NoAdaptation,
    Reactive,
    Proactive,
}

impl LoopMode {
    pub fn name(self) -> &'static str {
        match self {
            LoopMode::NoAdaptation => "no-adapt",
            LoopMode::Reactive => "reactive",
            LoopMode::Proactive => "proactive",
        }
    }
}

/// Loop-level configuration; analysis knobs nest under `analysis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopConfig {
    pub monitor_window: Tick,
    pub history_capacity: usize,
    pub analysis: AnalysisConfig,
    pub exploration_rate: f64,
    pub repair_delay: Tick,
    /// How long a reactive pseudo-prediction stays open before resolution.
    pub reactive_resolve_window: Tick,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            monitor_window: 10,
            history_capacity: 512,
            analysis: AnalysisConfig::default(),
            exploration_rate: 0.1,
            repair_delay: 50,
            reactive_resolve_window: 20,
        }
    }
}

/// A prediction awaiting resolution, with the action taken for it (if any).
#[derive(Debug, Clone)]
pub struct OpenPrediction {
    pub prediction: FaultPrediction,
    pub action: Option<AdaptationAction>,
}

/// Everything the harness wants to know about one loop tick.
#[derive(Debug, Clone)]
pub struct TickOutput {
    pub tick: Tick,
    pub frames: Vec<ObservationFrame>,
    pub label: ApplicationLabel,
    pub new_predictions: Vec<FaultPrediction>,
    /// (node, action id) actions applied this tick.
    pub actions: Vec<(NodeId, String)>,
    pub interventions: Vec<NodeId>,
    pub resolved: Vec<PredictionOutcome>,
    pub report: TickReport,
}

pub struct LoopState {
    pub sim: SimState,
    pub history: History,
    pub bootstrap: ThresholdModel,
    pub learned: ThresholdModel,
    pub policy: PolicyState,
    pub open: Vec<OpenPrediction>,
    pub metrics: MetricsAccumulator,
    pub labeled: Vec<(ObservationFrame, ApplicationLabel)>,
    pub app_spec: AppSpec,
    pub config: LoopConfig,
    prev_flags: BTreeMap<NodeId, [SideFlag; OBSERVABLE_COUNT]>,
    prev_reachable: BTreeMap<NodeId, bool>,
    /// Ticks at which a scheduled repair restored some node.
    restores: Vec<Tick>,
}

impl LoopState {
    pub fn new(sim: SimState, app_spec: AppSpec, config: LoopConfig) -> LoopState {
        // bootstrap RSSI boundary sits just above the least sensitive radio
        let rssi_tau = sim
            .nodes
            .iter()
            .map(|n| n.controls.rx_sensitivity)
            .fold(f64::NEG_INFINITY, f64::max)
            + config.analysis.bootstrap_rssi_margin_db;
        let bootstrap = ThresholdModel::bootstrap(rssi_tau);
        let learned = learn_thresholds(
            &[],
            config.analysis.min_samples_per_class,
            config.analysis.min_balanced_accuracy,
        );
        let exploration = config.exploration_rate;
        LoopState {
            history: History::new(config.history_capacity),
            bootstrap,
            learned,
            policy: PolicyState::new(exploration),
            open: Vec::new(),
            metrics: MetricsAccumulator::new(),
            labeled: Vec::new(),
            app_spec,
            config,
            sim,
            prev_flags: BTreeMap::new(),
            prev_reachable: BTreeMap::new(),
            restores: Vec::new(),
        }
    }

    /// Current effective model: learned entries where usable, bootstrap
    /// defaults elsewhere.
    pub fn model(&self) -> ThresholdModel {
        self.learned.merged_over(&self.bootstrap)
    }

    fn open_keys(&self) -> Vec<(NodeId, ObservableId)> {
        self.open
            .iter()
            .map(|o| (o.prediction.node, o.prediction.trigger))
            .collect()
    }

    /// A node's frame at a failure tick trains the failure class only when
    /// the node is implicated: unreachable, dead, or with some observable
    /// already on the failure side. Healthy nodes stay Normal so unrelated
    /// failures do not poison the global boundary.
    fn frame_label(
        &self,
        frame: &ObservationFrame,
        app_label: ApplicationLabel,
        model: &ThresholdModel,
    ) -> ApplicationLabel {
        if app_label.is_normal() {
            return ApplicationLabel::Normal;
        }
        let dead = self
            .sim
            .node(frame.node)
            .map(|n| !n.alive)
            .unwrap_or(false);
        let implicated = dead
            || !frame.reachable
            || classify(frame, model).iter().any(|f| f.is_failure());
        if implicated {
            app_label
        } else {
            ApplicationLabel::Normal
        }
    }

    /// Executes one full cycle. Deterministic given the seed: the simulator
    /// and the policy share the run generator.
    pub fn tick(&mut self, mode: LoopMode) -> TickOutput {
        let report = self.sim.step();
        let now = self.sim.tick;
        let restored_now = self
            .sim
            .event_log
            .iter()
            .rev()
            .take_while(|(t, _)| *t == now)
            .any(|(_, e)| matches!(e, SimEvent::NodeRestored { .. }));
        if restored_now {
            self.restores.push(now);
        }

        // monitoring
        let frames = sample(&self.sim, self.config.monitor_window, &self.history);
        self.history.push(&frames).expect("monotone ticks");

        // evaluation label (feeds threshold learning)
        let label = evaluate_application(&self.sim, &self.app_spec);
        let model = self.model();
        for f in &frames {
            // carried-forward readings of dark nodes teach nothing
            if !f.reachable {
                continue;
            }
            let fl = self.frame_label(f, label, &model);
            self.labeled.push((*f, fl));
        }
        // a node going dark retro-labels its recent live frames as failure
        // exemplars: the readings on the way down are the actual precursors
        for f in &frames {
            let was = self.prev_reachable.get(&f.node).copied().unwrap_or(true);
            if was && !f.reachable {
                let mut relabeled = 0usize;
                for entry in self.labeled.iter_mut().rev() {
                    if relabeled >= self.config.analysis.precursor_window {
                        break;
                    }
                    if entry.0.node == f.node {
                        entry.1 = ApplicationLabel::Failure(ViolatedDimension::ReactionDelay);
                        relabeled += 1;
                    }
                }
            }
            self.prev_reachable.insert(f.node, f.reachable);
        }

        // periodic relearning over the full labeled history
        if now % self.config.analysis.relearn_every == 0 {
            self.learned = learn_thresholds(
                &self.labeled,
                self.config.analysis.min_samples_per_class,
                self.config.analysis.min_balanced_accuracy,
            );
        }
        let model = self.model();

        // classification and threshold-crossing edges
        let mut crossings: Vec<(NodeId, ObservableId)> = Vec::new();
        for f in &frames {
            let flags = classify(f, &model);
            if let Some(prev) = self.prev_flags.get(&f.node) {
                for obs in OBSERVABLE_CATALOG {
                    let i = obs.index();
                    if flags[i].is_failure() && !prev[i].is_failure() {
                        crossings.push((f.node, obs));
                    }
                }
            }
            self.prev_flags.insert(f.node, flags);
        }
        let open_keys = self.open_keys();
        let unpredicted_now = crossings
            .iter()
            .filter(|k| !open_keys.contains(k))
            .count() as u64;

        // analysis + adaptation per mode; the proactive loop reacts to
        // manifested crossings as well, prediction is strictly additive
        let mut new_predictions = Vec::new();
        let mut actions: Vec<(NodeId, String)> = Vec::new();
        let mut interventions: Vec<NodeId> = Vec::new();
        if mode == LoopMode::Proactive {
            let preds = predict_faults(
                &self.history,
                &model,
                &self.config.analysis,
                now,
                &open_keys,
            );
            for p in preds {
                // a node with a repair already on the calendar is handled;
                // issuing more forecasts for it just burns actions
                if self.sim.pending_repairs.iter().any(|(_, n)| *n == p.node) {
                    continue;
                }
                let action = select_action(p.fault_type, &self.policy, &mut self.sim.rng)
                    .expect("default catalogs are non-empty");
                let attached = self.perform(&action, p.node, &mut actions, &mut interventions);
                self.open.push(OpenPrediction {
                    prediction: p,
                    action: attached.then_some(action),
                });
                new_predictions.push(p);
            }
        }
        if mode != LoopMode::NoAdaptation {
            let predicted_now: Vec<(NodeId, ObservableId)> = new_predictions
                .iter()
                .map(|p| (p.node, p.trigger))
                .collect();
            for (node, obs) in &crossings {
                if open_keys.contains(&(*node, *obs)) || predicted_now.contains(&(*node, *obs)) {
                    continue;
                }
                let fault_type = FaultType::from_trigger(*obs);
                let action = select_action(fault_type, &self.policy, &mut self.sim.rng)
                    .expect("default catalogs are non-empty");
                let attached = self.perform(&action, *node, &mut actions, &mut interventions);
                let p = FaultPrediction {
                    node: *node,
                    feature: crate::model::observable_feature(*obs),
                    fault_type,
                    t_min: now,
                    t_max: now + self.config.reactive_resolve_window,
                    issued_at: now,
                    trigger: *obs,
                };
                self.open.push(OpenPrediction {
                    prediction: p,
                    action: attached.then_some(action),
                });
            }
        }

        // resolve matured predictions and update the policy
        let mut resolved = Vec::new();
        let mut still_open = Vec::new();
        for o in std::mem::take(&mut self.open) {
            match resolve_outcome(
                &o.prediction,
                o.action.as_ref(),
                &self.history,
                &model,
                &self.sim,
                now,
            ) {
                Some(outcome) => {
                    // an unrelated repair inside the window muddies who
                    // deserves credit; skip the update rather than reward a
                    // bystander. An Escalate's own repair is its mechanism,
                    // so it keeps its credit.
                    let escalated = outcome
                        .action
                        .as_ref()
                        .map(|a| a.kind == ActionKind::Escalate)
                        .unwrap_or(false);
                    let repair_inside = outcome.result == OutcomeResult::Averted
                        && !escalated
                        && self.restores.iter().any(|t| {
                            *t >= outcome.prediction.issued_at && *t <= outcome.resolved_at
                        });
                    if !repair_inside {
                        update_policy(&mut self.policy, &outcome);
                    }
                    resolved.push(outcome);
                }
                None => still_open.push(o),
            }
        }
        self.open = still_open;

        // dead nodes get a manual intervention in every mode
        let dead: Vec<NodeId> = self
            .sim
            .nodes
            .iter()
            .filter(|n| !n.alive)
            .map(|n| n.id)
            .collect();
        for id in dead {
            let pending = self.sim.pending_repairs.iter().any(|(_, n)| *n == id);
            if !pending {
                record_intervention(
                    &mut self.sim,
                    &mut self.metrics,
                    id,
                    self.config.repair_delay,
                    false,
                )
                .expect("node is dead");
                interventions.push(id);
            }
        }

        self.metrics.update(label, &resolved, unpredicted_now);

        TickOutput {
            tick: now,
            frames,
            label,
            new_predictions,
            actions,
            interventions,
            resolved,
            report,
        }
    }

    /// Applies one action to the managed system; returns whether it landed
    /// (and should be credited to the policy).
    fn perform(
        &mut self,
        action: &AdaptationAction,
        target: NodeId,
        actions: &mut Vec<(NodeId, String)>,
        interventions: &mut Vec<NodeId>,
    ) -> bool {
        match action.kind {
            ActionKind::Escalate => {
                let fresh = !self.sim.pending_repairs.iter().any(|(_, n)| *n == target);
                let ok = record_intervention(
                    &mut self.sim,
                    &mut self.metrics,
                    target,
                    self.config.repair_delay,
                    true,
                )
                .is_ok();
                if ok && fresh {
                    interventions.push(target);
                }
                actions.push((target, action.id.to_string()));
                ok
            }
            _ => {
                let ok = apply_action(action, target, &mut self.sim).is_ok();
                if ok {
                    actions.push((target, action.id.to_string()));
                }
                ok
            }
        }
    }
}
