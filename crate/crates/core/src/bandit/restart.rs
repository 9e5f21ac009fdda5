use serde::{Deserialize, Serialize};

use super::BanditState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RestartKind {
    #[default]
    None,
    Periodic {
        interval: u64,
    },
    RspForecast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartPolicy {
    pub kind: RestartKind,
    /// Episode slot at which the current forecast was made.
    pub origin: u64,
    pub next_restart_slot: Option<u64>,
}

impl RestartPolicy {
    pub fn new(kind: RestartKind) -> Result<Self> {
        if let RestartKind::Periodic { interval } = kind {
            if interval == 0 {
                return Err(Error::arg("interval", "must be at least one slot"));
            }
        }
        Ok(RestartPolicy {
            kind,
            origin: 0,
            next_restart_slot: None,
        })
    }

    /// Set `next = origin + ceil(t_inf / slot_period)`.
    pub fn schedule(&mut self, origin: u64, t_inf: f64, slot_period: f64) {
        self.origin = origin;
        if self.kind == RestartKind::RspForecast {
            let slots = (t_inf / slot_period - 1e-9).ceil().max(1.0);
            self.next_restart_slot = Some(origin + slots as u64);
        }
    }

    /// Reinitialise `state` if a restart is due after `completed` episode slots.
    pub fn maybe_restart(&mut self, state: &mut BanditState, completed: u64) -> bool {
        let due = match self.kind {
            RestartKind::None => false,
            RestartKind::Periodic { interval } => completed > 0 && completed % interval == 0,
            RestartKind::RspForecast => self.next_restart_slot.is_some_and(|n| completed >= n),
        };
        if due {
            state.reset();
            self.origin = completed;
            self.next_restart_slot = None;
        }
        due
    }
}
