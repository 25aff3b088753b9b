//! Monitoring mechanism: samples each node's four observables every
//! monitoring instant and keeps bounded per-node histories for analysis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ObservableId, OBSERVABLE_COUNT};
use crate::sim::{NodeId, SimState, Tick};

#[derive(Debug, Error, PartialEq)]
pub enum MonitorError {
    #[error("frame for node {node} at tick {tick} is not newer than stored tick {last}")]
    OutOfOrder { node: NodeId, tick: Tick, last: Tick },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}

/// One node's (m+n)-dimensional observation at a monitoring instant.
/// Vector order: RssiMean, NeighborCount, MessagesReceived, BatteryLevel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationFrame {
    pub tick: Tick,
    pub node: NodeId,
    pub values: [f64; OBSERVABLE_COUNT],
    /// False when the node reported nothing this instant; values are then
    /// carried forward from the previous frame and stale.
    pub reachable: bool,
}

impl ObservationFrame {
    pub fn value(&self, id: ObservableId) -> f64 {
        self.values[id.index()]
    }
}

/// Bounded per-node frame history (ring buffer semantics).
#[derive(Debug, Clone)]
pub struct History {
    capacity: usize,
    frames: BTreeMap<NodeId, Vec<ObservationFrame>>,
}

impl History {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        History {
            capacity,
            frames: BTreeMap::new(),
        }
    }

    pub fn last_frame(&self, node: NodeId) -> Option<&ObservationFrame> {
        self.frames.get(&node).and_then(|v| v.last())
    }

    pub fn len(&self, node: NodeId) -> usize {
        self.frames.get(&node).map_or(0, Vec::len)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.frames.keys().copied()
    }

    /// Appends frames, evicting the oldest beyond capacity. Frames must be
    /// strictly newer than anything already stored for their node.
    pub fn push(&mut self, frames: &[ObservationFrame]) -> Result<(), MonitorError> {
        for f in frames {
            if let Some(last) = self.last_frame(f.node) {
                if f.tick <= last.tick {
                    return Err(MonitorError::OutOfOrder {
                        node: f.node,
                        tick: f.tick,
                        last: last.tick,
                    });
                }
            }
        }
        for f in frames {
            let buf = self.frames.entry(f.node).or_default();
            buf.push(*f);
            if buf.len() > self.capacity {
                buf.remove(0);
            }
        }
        Ok(())
    }

    /// The most recent `length` frames for a node, oldest first.
    pub fn window(&self, node: NodeId, length: usize) -> Result<Vec<ObservationFrame>, MonitorError> {
        assert!(length >= 1);
        let buf = self.frames.get(&node).ok_or(MonitorError::UnknownNode(node))?;
        let start = buf.len().saturating_sub(length);
        Ok(buf[start..].to_vec())
    }

    /// Consecutive trailing frames with reachable = false.
    pub fn trailing_unreachable(&self, node: NodeId) -> usize {
        self.frames
            .get(&node)
            .map(|buf| buf.iter().rev().take_while(|f| !f.reachable).count())
            .unwrap_or(0)
    }
}

/// Samples one frame per node at the state's current tick.
///
/// RssiMean averages the RSSI of links the node heard over the last
/// `window` ticks (noise floor when it heard nothing); NeighborCount is
/// the number of distinct senders heard; MessagesReceived the reception
/// count. A node heard by no one that also emitted nothing is unreachable
/// and its values are carried forward from `history`.
pub fn sample(state: &SimState, window: Tick, history: &History) -> Vec<ObservationFrame> {
    assert!(window >= 1);
    let tick = state.tick;
    let from = tick.saturating_sub(window - 1);
    let mut frames = Vec::with_capacity(state.nodes.len());
    for n in &state.nodes {
        let heard: Vec<_> = state
            .recent_receptions
            .iter()
            .filter(|r| r.receiver == n.id && r.tick >= from)
            .collect();
        let heard_by_others = state
            .recent_receptions
            .iter()
            .any(|r| r.sender == n.id && r.tick >= from);
        let emitted = state
            .recent_broadcasts
            .iter()
            .any(|(t, id)| *id == n.id && *t >= from);
        let reachable = heard_by_others || emitted;
        if !reachable {
            let values = history
                .last_frame(n.id)
                .map(|f| f.values)
                .unwrap_or([state.environment.noise_floor, 0.0, 0.0, n.battery]);
            frames.push(ObservationFrame {
                tick,
                node: n.id,
                values,
                reachable: false,
            });
            continue;
        }
        let mut senders: Vec<NodeId> = heard.iter().map(|r| r.sender).collect();
        senders.sort_unstable();
        senders.dedup();
        // mean over links: per-sender mean RSSI, averaged across senders
        let rssi_mean = if senders.is_empty() {
            state.environment.noise_floor
        } else {
            let per_link: f64 = senders
                .iter()
                .map(|s| {
                    let link: Vec<f64> = heard
                        .iter()
                        .filter(|r| r.sender == *s)
                        .map(|r| r.rssi)
                        .collect();
                    link.iter().sum::<f64>() / link.len() as f64
                })
                .sum();
            per_link / senders.len() as f64
        };
        frames.push(ObservationFrame {
            tick,
            node: n.id,
            values: [
                rssi_mean,
                senders.len() as f64,
                heard.len() as f64,
                n.battery,
            ],
            reachable: true,
        });
    }
    frames
}
