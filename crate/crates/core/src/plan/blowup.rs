use std::fmt;

use serde::Serialize;

use super::local::Side;
use crate::config::{Configuration, CurveId, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlanStep {
    /// The `index`-th node (by node id) joining two curves present before any blow-up.
    Base { a: String, b: String, index: usize },
    /// The unique node joining two curves, at least one of them exceptional.
    InfinitelyNear { a: String, b: String },
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanStep::Base { a, b, index: 0 } => write!(f, "{a}∩{b}"),
            PlanStep::Base { a, b, index } => write!(f, "{a}∩{b}#{index}"),
            PlanStep::InfinitelyNear { a, b } => write!(f, "{a}∩{b}'"),
        }
    }
}

/// Ordered blow-up script.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BlowupPlan {
    pub steps: Vec<PlanStep>,
}

impl BlowupPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the plan; every step's node must exist in the state reached so far.
    pub fn replay(&self, start: &Configuration) -> Result<Configuration> {
        let mut cfg = start.clone();
        for step in &self.steps {
            let node = match step {
                PlanStep::Base { a, b, index } => {
                    let ids = cfg.nodes_between(cfg.id_of(a)?, cfg.id_of(b)?);
                    *ids.get(*index).ok_or_else(|| Error::Record(format!("no node #{index} on {a}∩{b}")))?
                }
                PlanStep::InfinitelyNear { a, b } => {
                    let ids = cfg.nodes_between(cfg.id_of(a)?, cfg.id_of(b)?);
                    match ids.as_slice() {
                        [n] => *n,
                        _ => return Err(Error::Record(format!("{a}∩{b} is not a single node"))),
                    }
                }
            };
            cfg = cfg.blow_up(node)?;
        }
        Ok(cfg)
    }
}

impl fmt::Display for BlowupPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Blows up `start` (a node joining `x` and `y`) and then follows `sides`, appending the
/// steps to `plan`. `x` is the curve `Side::Left` points to.
pub(crate) fn apply_group(
    cfg: Configuration,
    plan: &mut BlowupPlan,
    start: NodeId,
    x: CurveId,
    y: CurveId,
    sides: &[Side],
) -> Result<Configuration> {
    let index = cfg
        .nodes_between(x, y)
        .iter()
        .position(|&n| n == start)
        .ok_or_else(|| Error::Record(format!("{} and {} do not meet there", cfg.name(x), cfg.name(y))))?;
    plan.steps.push(PlanStep::Base { a: cfg.name(x).to_string(), b: cfg.name(y).to_string(), index });
    let mut cfg = cfg.blow_up(start)?;
    let mut local = vec![x, cfg.last_exceptional().expect("just created"), y];
    let mut one = 1;
    for &side in sides {
        let nb = match side {
            Side::Left => one - 1,
            Side::Right => one + 1,
        };
        let (a, b) = (local[one], local[nb]);
        let node = cfg.nodes_between(a, b)[0];
        plan.steps.push(PlanStep::InfinitelyNear { a: cfg.name(a).to_string(), b: cfg.name(b).to_string() });
        cfg = cfg.blow_up(node)?;
        let e = cfg.last_exceptional().expect("just created");
        match side {
            Side::Left => local.insert(one, e),
            Side::Right => {
                local.insert(one + 1, e);
                one += 1;
            }
        }
    }
    Ok(cfg)
}
