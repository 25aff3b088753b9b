//! Deterministic discrete-event simulation of a duty-cycled gossip WSN:
//! log-distance radio propagation, per-activity energy accounting, epidemic
//! message flooding, presence sensor / light actuator devices, and fault
//! injection.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{clamp_controls, ActiveResource, ControlSettings, CpBounds};

pub type NodeId = u32;
pub type Tick = u64;

/// Message TTL in hops for epidemic flooding.
pub const GOSSIP_TTL: u32 = 8;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("distance must be > 0, got {0}")]
    NonPositiveDistance(f64),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is dead")]
    DeadNode(NodeId),
    #[error("fault at tick {at} is in the past (now {now})")]
    PastFault { at: Tick, now: Tick },
    #[error("node {0} is healthy; intervention rejected")]
    HealthyNode(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeRole {
    Relay,
    PresenceSensor,
    LightActuator,
}

/// One circular interference region, active over a tick interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceZone {
    pub center: (f64, f64),
    pub radius: f64,
    pub extra_noise: f64,
    pub active_from: Tick,
    pub active_to: Tick,
}

impl InterferenceZone {
    pub fn affects(&self, pos: (f64, f64), tick: Tick) -> bool {
        if tick < self.active_from || tick > self.active_to {
            return false;
        }
        let dx = pos.0 - self.center.0;
        let dy = pos.1 - self.center.1;
        (dx * dx + dy * dy).sqrt() <= self.radius
    }
}

/// Radio environment parameters for the log-distance path loss model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Environment {
    pub path_loss_exponent: f64,
    /// Path loss in dB at the 1 m reference distance.
    pub reference_loss: f64,
    pub noise_floor: f64,
    pub shadowing_sigma: f64,
    pub interference_zones: Vec<InterferenceZone>,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            path_loss_exponent: 2.5,
            reference_loss: 40.0,
            noise_floor: -100.0,
            shadowing_sigma: 0.0,
            interference_zones: Vec::new(),
        }
    }
}

impl Environment {
    /// Total interference penalty (dB) at a receiver position and tick.
    pub fn interference_at(&self, pos: (f64, f64), tick: Tick) -> f64 {
        self.interference_zones
            .iter()
            .filter(|z| z.affects(pos, tick))
            .map(|z| z.extra_noise)
            .sum()
    }
}

/// Received signal strength for a link under the log-distance model.
///
/// `shadow` is the lognormal shadowing draw in dB (0 for the deterministic
/// case); interference active at `rx_pos` during `tick` subtracts its
/// declared extra noise.
pub fn compute_rssi(
    tx_power: f64,
    distance: f64,
    env: &Environment,
    shadow: f64,
    rx_pos: (f64, f64),
    tick: Tick,
) -> Result<f64, SimError> {
    if distance <= 0.0 {
        return Err(SimError::NonPositiveDistance(distance));
    }
    let path_loss = env.reference_loss + 10.0 * env.path_loss_exponent * (distance).log10();
    Ok(tx_power - path_loss + shadow - env.interference_at(rx_pos, tick))
}

/// Standard normal draw via Box-Muller; keeps shadowing reproducible from
/// the run generator without extra dependencies.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Fault kinds injectable into a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FaultKind {
    /// Node stops sending, receiving and consuming energy.
    NodeCrash { node: NodeId },
    /// Per-activity energy costs multiplied by `factor` (>= 1).
    DrainMultiplier { node: NodeId, factor: f64 },
    /// A new interference zone becomes part of the environment.
    Interference { zone: InterferenceZone },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultEvent {
    pub at_tick: Tick,
    pub kind: FaultKind,
}

/// Per-activity energy model; costs are in joules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyModel {
    pub e_tx: f64,
    pub e_rx: f64,
    pub e_idle_per_s: f64,
    pub e_sleep_per_s: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            e_tx: 0.020,
            e_rx: 0.010,
            e_idle_per_s: 0.001,
            e_sleep_per_s: 0.00001,
        }
    }
}

/// A gossip payload: the newest presence flag seen from one origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GossipMessage {
    pub origin: NodeId,
    pub seq: u64,
    pub occupied: bool,
    pub ttl: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub id: NodeId,
    pub position: (f64, f64),
    pub battery: f64,
    pub controls: ControlSettings,
    pub alive: bool,
    pub role: NodeRole,
    pub awake: bool,
    pub drain_multiplier: f64,
    pub initial_battery: f64,
    pub initial_controls: ControlSettings,
    /// Newest message per origin; duplicate suppression by (origin, seq).
    pub messages: BTreeMap<NodeId, GossipMessage>,
}

impl NodeState {
    pub fn is_dead(&self) -> bool {
        !self.alive
    }
}

/// Initial description of one node, consumed by `init_network`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeInit {
    pub id: NodeId,
    pub position: (f64, f64),
    pub role: NodeRole,
    pub initial_battery: f64,
    pub controls: ControlSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresenceEvent {
    pub tick: Tick,
    pub occupied: bool,
}

/// Append-only run events for audit and traceability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SimEvent {
    PresenceChanged { occupied: bool },
    LightChanged { on: bool },
    ControlsApplied { node: NodeId },
    ActionApplied { node: NodeId, action: String },
    ActionFailed { node: NodeId, action: String },
    FaultApplied { description: String },
    NodeDied { node: NodeId },
    InterventionScheduled { node: NodeId, restore_at: Tick },
    NodeRestored { node: NodeId },
}

/// One successful reception.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceptionRecord {
    pub tick: Tick,
    pub receiver: NodeId,
    pub sender: NodeId,
    pub rssi: f64,
}

/// Per-node activity during one step, for energy audits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeActivity {
    pub node: NodeId,
    pub broadcasts: u32,
    pub receptions: u32,
    pub awake_seconds: f64,
    pub sleep_seconds: f64,
    pub drain_multiplier: f64,
    pub energy_spent: f64,
}

/// What one call to `step` produced.
#[derive(Debug, Clone, Default)]
pub struct TickReport {
    pub tick: Tick,
    pub receptions: Vec<ReceptionRecord>,
    pub activity: Vec<NodeActivity>,
}

/// How many past ticks of reception/broadcast records the state retains for
/// windowed monitoring.
pub const RETENTION_TICKS: Tick = 64;

#[derive(Debug, Clone)]
pub struct SimState {
    pub tick: Tick,
    pub nodes: Vec<NodeState>,
    pub environment: Environment,
    pub pending_faults: Vec<FaultEvent>,
    pub rng: ChaCha8Rng,
    pub event_log: Vec<(Tick, SimEvent)>,
    pub energy: EnergyModel,
    pub bounds: CpBounds,
    /// Global tick duration in seconds (minimum initial round time).
    pub tick_seconds: f64,
    pub presence_script: Vec<PresenceEvent>,
    presence_cursor: usize,
    pub occupied: bool,
    pub light_on: bool,
    /// Tick of the most recent occupancy transition.
    pub last_transition: Option<Tick>,
    /// Tick at which the light first matched occupancy after the last
    /// transition; None while still mismatched.
    pub reflected_at: Option<Tick>,
    gossip_seq: u64,
    pub pending_repairs: Vec<(Tick, NodeId)>,
    /// Receptions from the last `RETENTION_TICKS` ticks, oldest first.
    pub recent_receptions: Vec<ReceptionRecord>,
    /// (tick, node) broadcast records from the last `RETENTION_TICKS` ticks.
    pub recent_broadcasts: Vec<(Tick, NodeId)>,
}

impl SimState {
    /// Builds the initial state. Node ids must be unique and roles must
    /// include exactly one PresenceSensor and one LightActuator; the harness
    /// validates this before calling.
    pub fn init_network(
        nodes: &[NodeInit],
        environment: Environment,
        faults: Vec<FaultEvent>,
        presence_script: Vec<PresenceEvent>,
        energy: EnergyModel,
        bounds: CpBounds,
        seed: u64,
    ) -> SimState {
        let tick_seconds = nodes
            .iter()
            .map(|n| n.controls.round_time)
            .fold(f64::INFINITY, f64::min)
            .max(1e-9);
        let mut faults = faults;
        faults.sort_by_key(|f| f.at_tick);
        let nodes = nodes
            .iter()
            .map(|n| NodeState {
                id: n.id,
                position: n.position,
                battery: n.initial_battery,
                controls: clamp_controls(&n.controls, &bounds),
                alive: n.initial_battery > 0.0,
                role: n.role,
                awake: true,
                drain_multiplier: 1.0,
                initial_battery: n.initial_battery,
                initial_controls: clamp_controls(&n.controls, &bounds),
                messages: BTreeMap::new(),
            })
            .collect();
        SimState {
            tick: 0,
            nodes,
            environment,
            pending_faults: faults,
            rng: ChaCha8Rng::seed_from_u64(seed),
            event_log: Vec::new(),
            energy,
            bounds,
            tick_seconds,
            presence_script,
            presence_cursor: 0,
            occupied: false,
            light_on: false,
            last_transition: None,
            reflected_at: None,
            gossip_seq: 0,
            pending_repairs: Vec::new(),
            recent_receptions: Vec::new(),
            recent_broadcasts: Vec::new(),
        }
    }

    pub fn node(&self, id: NodeId) -> Result<&NodeState, SimError> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or(SimError::UnknownNode(id))
    }

    fn node_mut(&mut self, id: NodeId) -> Result<&mut NodeState, SimError> {
        self.nodes
            .iter_mut()
            .find(|n| n.id == id)
            .ok_or(SimError::UnknownNode(id))
    }

    /// Schedules a fault; application happens inside `step` at its tick.
    pub fn inject_fault(&mut self, event: FaultEvent) -> Result<(), SimError> {
        if event.at_tick < self.tick {
            return Err(SimError::PastFault {
                at: event.at_tick,
                now: self.tick,
            });
        }
        self.pending_faults.push(event);
        self.pending_faults.sort_by_key(|f| f.at_tick);
        Ok(())
    }

    /// Replaces a live node's controls (clamped to bounds) effective next step.
    pub fn apply_controls(
        &mut self,
        node: NodeId,
        settings: &ControlSettings,
    ) -> Result<(), SimError> {
        let bounds = self.bounds.clone();
        let tick = self.tick;
        let n = self.node_mut(node)?;
        if !n.alive {
            return Err(SimError::DeadNode(node));
        }
        n.controls = clamp_controls(settings, &bounds);
        self.event_log.push((tick, SimEvent::ControlsApplied { node }));
        Ok(())
    }

    /// Counts a manual repair: the node comes back at full battery with its
    /// initial controls after `repair_delay` ticks. Rejected for healthy
    /// nodes; the caller decides what "unreachable" means.
    pub fn schedule_repair(
        &mut self,
        node: NodeId,
        repair_delay: Tick,
        allow_unreachable: bool,
    ) -> Result<bool, SimError> {
        let tick = self.tick;
        let n = self.node(node)?;
        if n.alive && !allow_unreachable {
            return Err(SimError::HealthyNode(node));
        }
        if self.pending_repairs.iter().any(|(_, id)| *id == node) {
            return Ok(false);
        }
        let restore_at = tick + repair_delay;
        self.pending_repairs.push((restore_at, node));
        self.event_log
            .push((tick, SimEvent::InterventionScheduled { node, restore_at }));
        Ok(true)
    }

    fn round_ticks(&self, controls: &ControlSettings) -> Tick {
        ((controls.round_time / self.tick_seconds).round() as Tick).max(1)
    }

    fn originate_presence(&mut self, occupied: bool) {
        let Some(sensor) = self
            .nodes
            .iter_mut()
            .find(|n| n.role == NodeRole::PresenceSensor)
        else {
            return;
        };
        if !sensor.alive || !sensor.controls.has_resource(ActiveResource::Sensor) {
            return;
        }
        self.gossip_seq += 1;
        let msg = GossipMessage {
            origin: sensor.id,
            seq: self.gossip_seq,
            occupied,
            ttl: GOSSIP_TTL,
        };
        sensor.messages.insert(sensor.id, msg);
    }

    fn set_light(&mut self, on: bool) {
        if self.light_on != on {
            self.light_on = on;
            let tick = self.tick;
            self.event_log.push((tick, SimEvent::LightChanged { on }));
        }
        if self.light_on == self.occupied {
            if self.reflected_at.is_none() {
                self.reflected_at = Some(self.tick);
            }
        } else {
            self.reflected_at = None;
        }
    }

    fn apply_due_repairs(&mut self) {
        let tick = self.tick;
        let due: Vec<NodeId> = self
            .pending_repairs
            .iter()
            .filter(|(t, _)| *t <= tick)
            .map(|(_, id)| *id)
            .collect();
        self.pending_repairs.retain(|(t, _)| *t > tick);
        for id in due {
            let mut re_originate = false;
            if let Ok(n) = self.node_mut(id) {
                n.battery = n.initial_battery;
                n.alive = true;
                n.controls = n.initial_controls.clone();
                // maintenance replaces the hardware: a drain defect is fixed
                n.drain_multiplier = 1.0;
                n.messages.clear();
                re_originate = n.role == NodeRole::PresenceSensor;
            }
            self.event_log.push((tick, SimEvent::NodeRestored { node: id }));
            // a repaired sensor reports the current occupancy on wake
            if re_originate {
                let occupied = self.occupied;
                self.originate_presence(occupied);
            }
        }
    }

    fn apply_due_faults(&mut self) {
        let tick = self.tick;
        let due: Vec<FaultEvent> = self
            .pending_faults
            .iter()
            .filter(|f| f.at_tick <= tick)
            .cloned()
            .collect();
        self.pending_faults.retain(|f| f.at_tick > tick);
        for fault in due {
            match &fault.kind {
                FaultKind::NodeCrash { node } => {
                    if let Ok(n) = self.node_mut(*node) {
                        n.alive = false;
                    }
                    self.event_log.push((
                        tick,
                        SimEvent::FaultApplied {
                            description: format!("crash node {node}"),
                        },
                    ));
                }
                FaultKind::DrainMultiplier { node, factor } => {
                    if let Ok(n) = self.node_mut(*node) {
                        n.drain_multiplier *= factor.max(1.0);
                    }
                    self.event_log.push((
                        tick,
                        SimEvent::FaultApplied {
                            description: format!("drain x{factor} node {node}"),
                        },
                    ));
                }
                FaultKind::Interference { zone } => {
                    self.environment.interference_zones.push(zone.clone());
                    self.event_log.push((
                        tick,
                        SimEvent::FaultApplied {
                            description: "interference zone".to_string(),
                        },
                    ));
                }
            }
        }
    }

    fn apply_presence_script(&mut self) {
        let tick = self.tick;
        while self.presence_cursor < self.presence_script.len()
            && self.presence_script[self.presence_cursor].tick <= tick
        {
            let ev = self.presence_script[self.presence_cursor];
            self.presence_cursor += 1;
            if ev.occupied != self.occupied {
                self.occupied = ev.occupied;
                self.last_transition = Some(tick);
                self.reflected_at = if self.light_on == self.occupied {
                    Some(tick)
                } else {
                    None
                };
                self.event_log
                    .push((tick, SimEvent::PresenceChanged { occupied: ev.occupied }));
                self.originate_presence(ev.occupied);
            }
        }
    }

    /// Advances one gossip round. Deterministic given the current state.
    pub fn step(&mut self) -> TickReport {
        self.tick += 1;
        let tick = self.tick;
        self.apply_due_repairs();
        self.apply_due_faults();
        self.apply_presence_script();

        // Broadcast phase: snapshot every transmission before any reception,
        // so propagation advances one hop per tick.
        struct Broadcast {
            sender: NodeId,
            slot: u32,
            tx_power: f64,
            position: (f64, f64),
            messages: Vec<GossipMessage>,
        }
        let mut broadcasts: Vec<Broadcast> = Vec::new();
        let mut broadcast_counts: BTreeMap<NodeId, u32> = BTreeMap::new();
        for n in &self.nodes {
            if !n.alive || !n.controls.has_resource(ActiveResource::Radio) {
                continue;
            }
            if tick % self.round_ticks(&n.controls) != 0 {
                continue;
            }
            let live: Vec<GossipMessage> =
                n.messages.values().filter(|m| m.ttl > 0).copied().collect();
            for slot in 0..n.controls.tx_schedules {
                broadcasts.push(Broadcast {
                    sender: n.id,
                    slot,
                    tx_power: n.controls.tx_power,
                    position: n.position,
                    messages: live.clone(),
                });
            }
            *broadcast_counts.entry(n.id).or_insert(0) += n.controls.tx_schedules;
            self.recent_broadcasts.push((tick, n.id));
        }

        // Reception phase. Shadowing is drawn once per (sender, receiver)
        // link per tick; wake state is drawn per listen opportunity.
        let mut receptions: Vec<ReceptionRecord> = Vec::new();
        let mut inbox: BTreeMap<NodeId, Vec<GossipMessage>> = BTreeMap::new();
        let mut shadow_cache: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        let sigma = self.environment.shadowing_sigma;
        let receiver_ids: Vec<NodeId> = self.nodes.iter().map(|n| n.id).collect();
        for rid in receiver_ids {
            let (alive, radio, rx_sched, sleep_fraction, sensitivity, rx_pos) = {
                let r = self.node(rid).expect("receiver exists");
                (
                    r.alive,
                    r.controls.has_resource(ActiveResource::Radio),
                    r.controls.rx_schedules,
                    r.controls.sleep_fraction,
                    r.controls.rx_sensitivity,
                    r.position,
                )
            };
            if !alive || !radio {
                continue;
            }
            for b in &broadcasts {
                if b.sender == rid || b.slot >= rx_sched {
                    continue;
                }
                // wake draw: asleep for sleep_fraction of each round
                let wake: f64 = self.rng.gen();
                if wake < sleep_fraction {
                    continue;
                }
                let shadow = if sigma > 0.0 {
                    *shadow_cache
                        .entry((b.sender, rid))
                        .or_insert_with(|| standard_normal(&mut self.rng) * sigma)
                } else {
                    0.0
                };
                let dx = rx_pos.0 - b.position.0;
                let dy = rx_pos.1 - b.position.1;
                let distance = (dx * dx + dy * dy).sqrt().max(1e-6);
                let rssi = compute_rssi(b.tx_power, distance, &self.environment, shadow, rx_pos, tick)
                    .expect("positive distance");
                if rssi < sensitivity {
                    continue;
                }
                receptions.push(ReceptionRecord {
                    tick,
                    receiver: rid,
                    sender: b.sender,
                    rssi,
                });
                inbox.entry(rid).or_default().extend(b.messages.iter().copied());
            }
        }

        // Merge inboxes: keep the newest sequence per origin, decrement TTL.
        let mut light_update: Option<bool> = None;
        for (rid, msgs) in &inbox {
            let role = self.node(*rid).expect("receiver exists").role;
            let n = self.node_mut(*rid).expect("receiver exists");
            for m in msgs {
                if m.origin == *rid {
                    continue;
                }
                let newer = match n.messages.get(&m.origin) {
                    Some(existing) => m.seq > existing.seq,
                    None => true,
                };
                if !newer {
                    continue;
                }
                n.messages.insert(
                    m.origin,
                    GossipMessage {
                        ttl: m.ttl.saturating_sub(1),
                        ..*m
                    },
                );
                if role == NodeRole::LightActuator
                    && n.controls.has_resource(ActiveResource::Actuator)
                {
                    light_update = Some(m.occupied);
                }
            }
        }
        if let Some(on) = light_update {
            self.set_light(on);
        }

        // Energy accounting.
        let mut activity = Vec::with_capacity(self.nodes.len());
        let tick_seconds = self.tick_seconds;
        let energy = self.energy.clone();
        let mut died: Vec<NodeId> = Vec::new();
        for n in self.nodes.iter_mut() {
            n.awake = n.alive && n.controls.sleep_fraction < 1.0;
            if !n.alive {
                activity.push(NodeActivity {
                    node: n.id,
                    broadcasts: 0,
                    receptions: 0,
                    awake_seconds: 0.0,
                    sleep_seconds: 0.0,
                    drain_multiplier: n.drain_multiplier,
                    energy_spent: 0.0,
                });
                continue;
            }
            let b = broadcast_counts.get(&n.id).copied().unwrap_or(0);
            let r = receptions.iter().filter(|rec| rec.receiver == n.id).count() as u32;
            let awake_seconds = tick_seconds * (1.0 - n.controls.sleep_fraction);
            let sleep_seconds = tick_seconds * n.controls.sleep_fraction;
            let cost = (energy.e_tx * b as f64
                + energy.e_rx * r as f64
                + energy.e_idle_per_s * awake_seconds
                + energy.e_sleep_per_s * sleep_seconds)
                * n.drain_multiplier;
            let spent = cost.min(n.battery);
            n.battery -= spent;
            if n.battery <= 0.0 {
                n.battery = 0.0;
                n.alive = false;
                died.push(n.id);
            }
            activity.push(NodeActivity {
                node: n.id,
                broadcasts: b,
                receptions: r,
                awake_seconds,
                sleep_seconds,
                drain_multiplier: n.drain_multiplier,
                energy_spent: spent,
            });
        }
        for id in died {
            self.event_log.push((tick, SimEvent::NodeDied { node: id }));
        }

        self.recent_receptions.extend(receptions.iter().copied());
        let cutoff = tick.saturating_sub(RETENTION_TICKS);
        self.recent_receptions.retain(|r| r.tick > cutoff);
        self.recent_broadcasts.retain(|(t, _)| *t > cutoff);

        TickReport {
            tick,
            receptions,
            activity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(exp: f64, ref_loss: f64, sigma: f64) -> Environment {
        Environment {
            path_loss_exponent: exp,
            reference_loss: ref_loss,
            shadowing_sigma: sigma,
            ..Environment::default()
        }
    }

    fn line_nodes(n: u32, spacing: f64, battery: f64) -> Vec<NodeInit> {
        (0..n)
            .map(|i| NodeInit {
                id: i,
                position: (i as f64 * spacing, 0.0),
                role: if i == 0 {
                    NodeRole::PresenceSensor
                } else if i == n - 1 {
                    NodeRole::LightActuator
                } else {
                    NodeRole::Relay
                },
                initial_battery: battery,
                controls: ControlSettings::default(),
            })
            .collect()
    }

    fn basic_state(n: u32, spacing: f64, seed: u64) -> SimState {
        SimState::init_network(
            &line_nodes(n, spacing, 100.0),
            env(2.5, 40.0, 0.0),
            Vec::new(),
            vec![PresenceEvent { tick: 2, occupied: true }],
            EnergyModel::default(),
            CpBounds::default(),
            seed,
        )
    }

    #[test]
    fn rssi_reference_distance() {
        let e = env(2.5, 40.0, 0.0);
        let v = compute_rssi(0.0, 1.0, &e, 0.0, (0.0, 0.0), 0).unwrap();
        assert!((v - (-40.0)).abs() < 1e-12);
    }

    #[test]
    fn rssi_ten_meters() {
        let e = env(2.5, 40.0, 0.0);
        let v = compute_rssi(0.0, 10.0, &e, 0.0, (0.0, 0.0), 0).unwrap();
        assert!((v - (-65.0)).abs() < 1e-12);
    }

    #[test]
    fn rssi_interference_zone() {
        let mut e = env(2.5, 40.0, 0.0);
        e.interference_zones.push(InterferenceZone {
            center: (0.0, 0.0),
            radius: 5.0,
            extra_noise: 10.0,
            active_from: 0,
            active_to: 100,
        });
        let v = compute_rssi(0.0, 10.0, &e, 0.0, (0.0, 0.0), 50).unwrap();
        assert!((v - (-75.0)).abs() < 1e-12);
        // outside the active interval the penalty disappears
        let v = compute_rssi(0.0, 10.0, &e, 0.0, (0.0, 0.0), 101).unwrap();
        assert!((v - (-65.0)).abs() < 1e-12);
    }

    #[test]
    fn rssi_rejects_nonpositive_distance() {
        let e = env(2.5, 40.0, 0.0);
        assert!(compute_rssi(0.0, 0.0, &e, 0.0, (0.0, 0.0), 0).is_err());
    }

    #[test]
    fn init_is_deterministic() {
        let a = basic_state(5, 10.0, 42);
        let b = basic_state(5, 10.0, 42);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.tick, 0);
        assert!(a.nodes.iter().all(|n| n.battery == 100.0));
    }

    #[test]
    fn mutual_reception_at_ten_meters() {
        let mut s = basic_state(2, 10.0, 1);
        let report = s.step();
        // -65 dBm >= -90 dBm: both hear each other once per tx slot
        assert!(report.receptions.iter().any(|r| r.receiver == 0 && r.sender == 1));
        assert!(report.receptions.iter().any(|r| r.receiver == 1 && r.sender == 0));
    }

    #[test]
    fn energy_decrement_is_itemized() {
        let mut s = basic_state(4, 5.0, 7);
        let before: Vec<f64> = s.nodes.iter().map(|n| n.battery).collect();
        let report = s.step();
        for (i, act) in report.activity.iter().enumerate() {
            let e = &s.energy;
            let expected = (e.e_tx * act.broadcasts as f64
                + e.e_rx * act.receptions as f64
                + e.e_idle_per_s * act.awake_seconds
                + e.e_sleep_per_s * act.sleep_seconds)
                * act.drain_multiplier;
            let actual = before[i] - s.nodes[i].battery;
            assert!((expected - actual).abs() < 1e-12);
        }
    }

    #[test]
    fn declared_energy_example() {
        // 1 broadcast (20 mJ) + 3 receptions (10 mJ each) + 1 s awake idle (1 mJ)
        let e = EnergyModel::default();
        let cost = e.e_tx * 1.0 + e.e_rx * 3.0 + e.e_idle_per_s * 1.0;
        assert!((100.0 - cost - 99.949).abs() < 1e-12);
    }

    #[test]
    fn crashed_node_is_silent() {
        let mut s = basic_state(3, 5.0, 3);
        s.inject_fault(FaultEvent {
            at_tick: 1,
            kind: FaultKind::NodeCrash { node: 1 },
        })
        .unwrap();
        let report = s.step();
        assert!(!s.nodes[1].alive);
        assert!(report.receptions.iter().all(|r| r.receiver != 1 && r.sender != 1));
        let battery = s.nodes[1].battery;
        s.step();
        assert_eq!(s.nodes[1].battery, battery);
    }

    #[test]
    fn drain_multiplier_scales_costs() {
        let mut a = basic_state(2, 5.0, 9);
        let mut b = basic_state(2, 5.0, 9);
        b.inject_fault(FaultEvent {
            at_tick: 1,
            kind: FaultKind::DrainMultiplier { node: 0, factor: 5.0 },
        })
        .unwrap();
        a.step();
        b.step();
        let spent_a = 100.0 - a.nodes[0].battery;
        let spent_b = 100.0 - b.nodes[0].battery;
        assert!((spent_b - 5.0 * spent_a).abs() < 1e-12);
    }

    #[test]
    fn past_fault_rejected() {
        let mut s = basic_state(2, 5.0, 1);
        s.step();
        s.step();
        let err = s.inject_fault(FaultEvent {
            at_tick: 1,
            kind: FaultKind::NodeCrash { node: 0 },
        });
        assert!(err.is_err());
    }

    #[test]
    fn apply_controls_clamps_and_logs() {
        let mut s = basic_state(2, 5.0, 1);
        let mut c = ControlSettings::default();
        c.tx_power = 99.0;
        s.apply_controls(0, &c).unwrap();
        assert_eq!(s.node(0).unwrap().controls.tx_power, 5.0);
        assert!(s
            .event_log
            .iter()
            .any(|(_, e)| matches!(e, SimEvent::ControlsApplied { node: 0 })));
    }

    #[test]
    fn apply_controls_rejects_dead_node() {
        let mut s = basic_state(2, 5.0, 1);
        s.inject_fault(FaultEvent {
            at_tick: 1,
            kind: FaultKind::NodeCrash { node: 1 },
        })
        .unwrap();
        s.step();
        assert_eq!(
            s.apply_controls(1, &ControlSettings::default()),
            Err(SimError::DeadNode(1))
        );
    }

    #[test]
    fn tx_power_raise_shifts_rssi_linearly() {
        let mut s = basic_state(2, 10.0, 5);
        let r1 = s.step();
        let base = r1.receptions.iter().find(|r| r.receiver == 1).unwrap().rssi;
        let mut c = s.node(0).unwrap().controls.clone();
        c.tx_power += 5.0;
        s.apply_controls(0, &c).unwrap();
        let r2 = s.step();
        let raised = r2.receptions.iter().find(|r| r.receiver == 1).unwrap().rssi;
        assert!((raised - base - 5.0).abs() < 1e-12);
    }

    #[test]
    fn presence_propagates_and_lights() {
        let mut s = basic_state(4, 5.0, 11);
        for _ in 0..10 {
            s.step();
        }
        assert!(s.occupied);
        assert!(s.light_on);
        assert!(s.reflected_at.is_some());
    }

    #[test]
    fn repair_restores_node() {
        let mut s = basic_state(3, 5.0, 2);
        s.inject_fault(FaultEvent {
            at_tick: 1,
            kind: FaultKind::NodeCrash { node: 1 },
        })
        .unwrap();
        s.step();
        assert!(s.schedule_repair(1, 3, false).is_ok());
        // healthy node rejected
        assert_eq!(s.schedule_repair(2, 3, false), Err(SimError::HealthyNode(2)));
        for _ in 0..4 {
            s.step();
        }
        let n = s.node(1).unwrap();
        assert!(n.alive);
        assert!(n.battery > 99.0);
    }

    #[test]
    fn battery_never_increases_without_repair() {
        let mut s = basic_state(5, 8.0, 13);
        s.environment.shadowing_sigma = 2.0;
        let mut prev: Vec<f64> = s.nodes.iter().map(|n| n.battery).collect();
        for _ in 0..200 {
            s.step();
            for (i, n) in s.nodes.iter().enumerate() {
                assert!(n.battery <= prev[i] + 1e-12);
                prev[i] = n.battery;
            }
        }
    }

    #[test]
    fn step_is_deterministic() {
        let mut a = basic_state(5, 8.0, 99);
        let mut b = basic_state(5, 8.0, 99);
        a.environment.shadowing_sigma = 3.0;
        b.environment.shadowing_sigma = 3.0;
        for _ in 0..50 {
            a.step();
            b.step();
        }
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.event_log, b.event_log);
    }

    #[test]
    fn link_symmetry_without_shadowing() {
        let mut s = basic_state(3, 9.0, 17);
        let report = s.step();
        let heard: Vec<(NodeId, NodeId)> = report
            .receptions
            .iter()
            .map(|r| (r.sender, r.receiver))
            .collect();
        for (a, b) in &heard {
            assert!(heard.contains(&(*b, *a)), "link {a}->{b} not symmetric");
        }
    }
}
