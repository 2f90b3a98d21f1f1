use serde::{Deserialize, Serialize};

use super::{Event, Reason, Solve, SolveConfig};
use crate::geom::number::{format_rational, to_f64};

/// A guard position with its value in the last solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuardValue {
    pub x: String,
    pub y: String,
    pub value: String,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub lb: u32,
    pub ub: Option<u32>,
    /// `(ub - lb) / lb`; null when there is no upper bound.
    pub gap: Option<f64>,
    pub reason: Reason,
    /// Best binary guard set, as exact coordinates.
    pub guards: Vec<[String; 2]>,
    pub solution: Vec<GuardValue>,
    /// Final witness set.
    pub witnesses: Vec<[String; 2]>,
    pub rounding_bound: Option<u32>,
    pub num_guards: usize,
    pub num_witnesses: usize,
    pub num_cuts: usize,
    pub lp_solves: usize,
    pub ip_solves: usize,
    pub time_s: f64,
}

/// Everything about one solve, as written by `gallery solve --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    /// Vertex count of the solved polygon, used to catch mismatched inputs.
    pub vertices: usize,
    pub config: SolveConfig,
    pub events: Vec<Event>,
    pub result: RunResult,
}

impl RunRecord {
    pub fn new(instance: impl Into<String>, config: &SolveConfig, solve: &Solve) -> Self {
        let s = &solve.state;
        let m = &s.model;
        RunRecord {
            instance: instance.into(),
            vertices: m.polygon().vertex_count(),
            config: config.clone(),
            events: solve.log.events.clone(),
            result: RunResult {
                lb: s.lower_bound,
                ub: s.upper_bound,
                gap: s.gap(),
                reason: s.reason.unwrap_or(Reason::TimeLimit),
                guards: s.incumbent.iter().map(|p| p.to_strings()).collect(),
                solution: s
                    .last_solution
                    .iter()
                    .map(|(p, v)| {
                        let [x, y] = p.to_strings();
                        GuardValue {
                            x,
                            y,
                            value: format_rational(v),
                            approx: to_f64(v),
                        }
                    })
                    .collect(),
                witnesses: m.witnesses().iter().map(|p| p.to_strings()).collect(),
                rounding_bound: s.rounding_bound,
                num_guards: m.guards().len(),
                num_witnesses: m.witnesses().len(),
                num_cuts: m.cuts().len(),
                lp_solves: s.lp_solves,
                ip_solves: s.ip_solves,
                time_s: s.elapsed,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run records serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
