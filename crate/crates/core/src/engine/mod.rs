//! Driver loops alternating primal phases (new witnesses until the guard
//! solution covers the polygon) and dual phases (new guards until the
//! packing is feasible everywhere), with cutting planes and bound
//! bookkeeping.

mod record;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::number::{self, ratio};
use crate::geom::{Point, Polygon, Rational};
use crate::lp::{self, solve_ip_until, solve_lp, Arithmetic, LpError, LpSolution};
use crate::model::{CutConstraint, Model, ModelError};
use crate::separation::{dual_separate, primal_separate, separate_ec, separate_sc};

pub use record::{GuardValue, RunRecord, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Lp,
    Ip,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Lp => "lp",
            Mode::Ip => "ip",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lp" => Ok(Mode::Lp),
            "ip" => Ok(Mode::Ip),
            _ => Err(format!("unknown mode `{s}` (expected lp or ip)")),
        }
    }
}

/// Which cutting planes to separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CutSet {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "ec")]
    Ec,
    #[serde(rename = "sc3")]
    Sc3,
    #[serde(rename = "sc4")]
    Sc4,
    #[default]
    #[serde(rename = "sc3+ec")]
    Sc3Ec,
}

impl CutSet {
    pub const ALL: [CutSet; 5] = [CutSet::None, CutSet::Ec, CutSet::Sc3, CutSet::Sc4, CutSet::Sc3Ec];

    /// Subset size of the set-cover cuts, if they are enabled.
    pub fn sc_size(self) -> Option<usize> {
        match self {
            CutSet::Sc3 | CutSet::Sc3Ec => Some(3),
            CutSet::Sc4 => Some(4),
            CutSet::None | CutSet::Ec => None,
        }
    }

    pub fn ec(self) -> bool {
        matches!(self, CutSet::Ec | CutSet::Sc3Ec)
    }
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutSet::None => "none",
            CutSet::Ec => "ec",
            CutSet::Sc3 => "sc3",
            CutSet::Sc4 => "sc4",
            CutSet::Sc3Ec => "sc3+ec",
        })
    }
}

impl FromStr for CutSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CutSet::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown cut set `{s}` (expected none, ec, sc3, sc4 or sc3+ec)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub mode: Mode,
    pub cuts: CutSet,
    /// Seconds.
    pub time_limit: f64,
    pub arithmetic: Arithmetic,
    /// Separate cuts in a primal phase only once the solution covers the
    /// polygon.
    pub cuts_on_feasible_only: bool,
    /// Verify the optimality certificate of every exact LP solve.
    pub check_duality: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::Lp,
            cuts: CutSet::Sc3Ec,
            time_limit: 60.0,
            arithmetic: Arithmetic::Exact,
            cuts_on_feasible_only: false,
            check_duality: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Optimal,
    TimeLimit,
    /// A full round changed neither guards, witnesses nor cuts, so every
    /// later round would repeat it.
    Stalled,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::Optimal => "optimal",
            Reason::TimeLimit => "time_limit",
            Reason::Stalled => "stalled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Start,
    PrimalLp,
    PrimalIp,
    DualLp,
    Upper,
    Lower,
    End,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// Seconds since the start of the solve.
    pub t: f64,
    pub lb: u32,
    pub ub: Option<u32>,
    #[serde(rename = "nG")]
    pub n_guards: usize,
    #[serde(rename = "nW")]
    pub n_witnesses: usize,
    #[serde(rename = "nCuts")]
    pub n_cuts: usize,
    pub obj: Option<f64>,
    pub tag: Tag,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveLog {
    pub events: Vec<Event>,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("covering LP infeasible; rows {0:?} have no guard")]
    Infeasible(Vec<u64>),
}

impl From<crate::geom::GeomError> for EngineError {
    fn from(e: crate::geom::GeomError) -> Self {
        EngineError::Model(e.into())
    }
}

pub struct SolveState {
    pub model: Model,
    pub lower_bound: u32,
    pub upper_bound: Option<u32>,
    pub phase: Phase,
    pub elapsed: f64,
    /// Guards of the best binary cover found.
    pub incumbent: Vec<Point>,
    /// Last LP or IP solution, as guard values.
    pub last_solution: Vec<(Point, Rational)>,
    /// Size of the support of the last fractional cover of the polygon, a
    /// valid but unused upper bound.
    pub rounding_bound: Option<u32>,
    pub reason: Option<Reason>,
    pub lp_solves: usize,
    pub ip_solves: usize,
    /// Certificate failures seen when `check_duality` is set.
    pub duality_violations: Vec<String>,
}

impl SolveState {
    pub fn is_closed(&self) -> bool {
        self.upper_bound == Some(self.lower_bound)
    }

    /// `(ub - lb) / lb`; `None` while there is no upper bound.
    pub fn gap(&self) -> Option<f64> {
        self.upper_bound
            .map(|ub| f64::from(ub - self.lower_bound.min(ub)) / f64::from(self.lower_bound))
    }
}

pub struct Solve {
    pub state: SolveState,
    pub log: SolveLog,
}

struct Engine<'a> {
    cfg: &'a SolveConfig,
    start: Instant,
    deadline: Instant,
    tol: Rational,
    state: SolveState,
    log: SolveLog,
}

impl<'a> Engine<'a> {
    fn new(poly: &Polygon, cfg: &'a SolveConfig) -> Self {
        let start = Instant::now();
        let limit = Duration::try_from_secs_f64(cfg.time_limit.max(0.0)).unwrap_or(Duration::MAX);
        let deadline = start.checked_add(limit).unwrap_or(start + Duration::from_secs(1 << 40));
        let tol = match cfg.arithmetic {
            Arithmetic::Exact => Rational::zero(),
            Arithmetic::Float => ratio(1, 1_000_000),
        };
        let mut e = Engine {
            cfg,
            start,
            deadline,
            tol,
            state: SolveState {
                model: Model::new(poly.clone()),
                lower_bound: 1,
                upper_bound: None,
                phase: Phase::Primal,
                elapsed: 0.0,
                incumbent: Vec::new(),
                last_solution: Vec::new(),
                rounding_bound: None,
                reason: None,
                lp_solves: 0,
                ip_solves: 0,
                duality_violations: Vec::new(),
            },
            log: SolveLog::default(),
        };
        e.event(Tag::Start, None);
        e
    }

    fn timed_out(&self) -> bool {
        Instant::now() >= self.deadline
    }

    fn event(&mut self, tag: Tag, obj: Option<f64>) {
        let t = self.start.elapsed().as_secs_f64();
        let m = &self.state.model;
        self.log.events.push(Event {
            t,
            lb: self.state.lower_bound,
            ub: self.state.upper_bound,
            n_guards: m.guards().len(),
            n_witnesses: m.witnesses().len(),
            n_cuts: m.cuts().len(),
            obj,
            tag,
        });
        log::debug!(
            "{t:.3}s {tag:?} lb={} ub={:?} G={} W={} A={} obj={obj:?}",
            self.state.lower_bound,
            self.state.upper_bound,
            m.guards().len(),
            m.witnesses().len(),
            m.cuts().len()
        );
    }

    fn solve_relaxation(&mut self) -> Result<LpSolution, EngineError> {
        let lpm = self.state.model.lp_model()?;
        let sol = solve_lp(&lpm, self.cfg.arithmetic)?;
        self.state.lp_solves += 1;
        if !sol.is_optimal() {
            return Err(EngineError::Infeasible(sol.infeasible_rows));
        }
        if self.cfg.check_duality && self.cfg.arithmetic == Arithmetic::Exact {
            self.state.duality_violations.extend(lp::optimality_violations(&lpm, &sol));
        }
        self.remember(&sol);
        Ok(sol)
    }

    fn solve_integer(&mut self) -> Result<LpSolution, EngineError> {
        let lpm = self.state.model.lp_model()?;
        let sol = solve_ip_until(&lpm, self.cfg.arithmetic, None, Some(self.deadline))?;
        self.state.ip_solves += 1;
        if !sol.is_optimal() {
            return Err(EngineError::Infeasible(sol.infeasible_rows));
        }
        self.remember(&sol);
        Ok(sol)
    }

    fn remember(&mut self, sol: &LpSolution) {
        let guards = self.state.model.guards();
        self.state.last_solution = sol
            .primal
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(g, v)| (guards.get(g).clone(), v.clone()))
            .collect();
    }

    fn cuts_for(&self, x: &[Rational]) -> Result<Vec<CutConstraint>, EngineError> {
        let mut cuts = Vec::new();
        if let Some(k) = self.cfg.cuts.sc_size() {
            cuts.extend(separate_sc(&self.state.model, x, k, &self.tol).new_cuts);
        }
        if self.cfg.cuts.ec() {
            cuts.extend(separate_ec(&self.state.model, x, &self.tol)?.new_cuts);
        }
        Ok(cuts)
    }

    fn add_cuts(&mut self, cuts: Vec<CutConstraint>) -> bool {
        let mut changed = false;
        for c in cuts {
            changed |= self.state.model.add_cut(c);
        }
        changed
    }

    fn offer_upper(&mut self, sol: &LpSolution) {
        let chosen: Vec<Point> = sol
            .primal
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > number::half())
            .map(|(g, _)| self.state.model.guards().get(g).clone())
            .collect();
        let value = chosen.len() as u32;
        if self.state.upper_bound.map_or(true, |ub| value < ub) {
            self.state.upper_bound = Some(value);
            self.state.incumbent = chosen;
            self.event(Tag::Upper, Some(f64::from(value)));
        }
    }

    fn lower_from(&self, sol: &LpSolution) -> u32 {
        let c = match self.cfg.arithmetic {
            Arithmetic::Exact => number::ceil(&sol.objective),
            Arithmetic::Float => number::ceil(&number::from_f64(sol.objective_approx - 1e-6)),
        };
        u32::try_from(c).unwrap_or(u32::MAX)
    }

    /// One primal phase. Returns whether guards, witnesses or cuts changed.
    fn primal_phase(&mut self, integer: bool) -> Result<bool, EngineError> {
        self.state.phase = Phase::Primal;
        let mut changed = false;
        loop {
            if self.timed_out() {
                return Ok(changed);
            }
            let sol = if integer {
                let s = self.solve_integer()?;
                self.event(Tag::PrimalIp, Some(s.objective_approx));
                s
            } else {
                let s = self.solve_relaxation()?;
                self.event(Tag::PrimalLp, Some(s.objective_approx));
                s
            };
            let sep = primal_separate(&self.state.model, &sol.primal, &self.tol)?;
            let failed = !sep.found;
            let cuts = if integer || (self.cfg.cuts_on_feasible_only && !failed) {
                Vec::new()
            } else {
                self.cuts_for(&sol.primal)?
            };
            for w in sep.new_witnesses {
                changed |= self.state.model.add_witness(w)?.is_some();
            }
            changed |= self.add_cuts(cuts);
            if failed {
                if integer || sol.is_integral() {
                    self.offer_upper(&sol);
                } else {
                    let support = sol.primal.iter().filter(|v| !v.is_zero()).count() as u32;
                    self.state.rounding_bound = Some(self.state.rounding_bound.map_or(support, |r| r.min(support)));
                }
            }
            if failed || self.state.is_closed() {
                return Ok(changed);
            }
        }
    }

    /// One dual phase. Returns whether guards, witnesses or cuts changed.
    fn dual_phase(&mut self) -> Result<bool, EngineError> {
        self.state.phase = Phase::Dual;
        let mut changed = false;
        loop {
            if self.timed_out() {
                return Ok(changed);
            }
            let sol = self.solve_relaxation()?;
            self.event(Tag::DualLp, Some(sol.objective_approx));
            let sep = dual_separate(&self.state.model, &sol, &self.tol)?;
            let failed = !sep.found;
            let cuts = self.cuts_for(&sol.primal)?;
            for g in sep.new_guards {
                changed |= self.state.model.add_guard(g)?.is_some();
            }
            changed |= self.add_cuts(cuts);
            if failed {
                let lb = self.lower_from(&sol);
                if lb > self.state.lower_bound {
                    self.state.lower_bound = lb;
                    self.event(Tag::Lower, Some(sol.objective_approx));
                }
            }
            if failed || self.state.is_closed() {
                return Ok(changed);
            }
        }
    }

    fn run(mut self, integer: bool) -> Result<Solve, EngineError> {
        let reason = loop {
            let result = self
                .primal_phase(integer)
                .and_then(|a| if self.state.is_closed() { Ok(a) } else { Ok(a | self.dual_phase()?) });
            let changed = match result {
                Ok(c) => c,
                Err(EngineError::Lp(LpError::Deadline)) => break Reason::TimeLimit,
                Err(e) => return Err(e),
            };
            if self.state.is_closed() {
                break Reason::Optimal;
            }
            if self.timed_out() {
                break Reason::TimeLimit;
            }
            if !changed {
                break Reason::Stalled;
            }
        };
        self.state.reason = Some(reason);
        self.state.elapsed = self.start.elapsed().as_secs_f64();
        self.event(Tag::End, None);
        log::info!(
            "{reason}: lb={} ub={:?} after {:.2}s",
            self.state.lower_bound,
            self.state.upper_bound,
            self.state.elapsed
        );
        Ok(Solve {
            state: self.state,
            log: self.log,
        })
    }
}

/// Solves by LPs only; upper bounds come from integral LP optima that
/// cover the polygon.
pub fn run_lp_mode(poly: &Polygon, cfg: &SolveConfig) -> Result<Solve, EngineError> {
    Engine::new(poly, cfg).run(false)
}

/// Solves integer programs in primal phases and LPs in dual phases.
pub fn run_ip_mode(poly: &Polygon, cfg: &SolveConfig) -> Result<Solve, EngineError> {
    Engine::new(poly, cfg).run(true)
}

/// Runs the mode selected in `cfg`.
pub fn solve(poly: &Polygon, cfg: &SolveConfig) -> Result<Solve, EngineError> {
    match cfg.mode {
        Mode::Lp => run_lp_mode(poly, cfg),
        Mode::Ip => run_ip_mode(poly, cfg),
    }
}
