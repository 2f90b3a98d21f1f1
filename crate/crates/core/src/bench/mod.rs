//! Benchmark instances and batch experiments: solve every generated
//! polygon under every configuration, then summarize solved fractions,
//! gaps, and gap quartiles over time.

pub mod generate;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, Event, Reason, SolveConfig};
pub use generate::{generate, generate_with, Class, GenError, GenParams, GenSpec};

/// Short name of a configuration, such as `lp:sc3+ec`.
pub fn config_label(cfg: &SolveConfig) -> String {
    format!("{}:{}", cfg.mode, cfg.cuts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub class: Class,
    pub size: usize,
    pub seed: u64,
    pub config: String,
    /// A binary solution was found.
    pub solved: bool,
    pub lb: u32,
    pub ub: Option<u32>,
    /// `(ub - lb) / lb`; `None` stands for an infinite gap.
    pub gap: Option<f64>,
    pub time_s: f64,
    pub reason: Option<Reason>,
    pub vertices: usize,
    pub holes: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Batch {
    pub rows: Vec<BatchRow>,
    /// Event log of each row's solve, empty where it failed.
    pub events: Vec<Vec<Event>>,
}

/// Solves every spec under every config, in parallel. Rows come out in
/// spec-major order regardless of scheduling.
pub fn run_batch(specs: &[GenSpec], configs: &[SolveConfig]) -> Batch {
    let jobs: Vec<(&GenSpec, &SolveConfig)> = specs
        .iter()
        .flat_map(|s| configs.iter().map(move |c| (s, c)))
        .collect();
    let done: Vec<(BatchRow, Vec<Event>)> = jobs.par_iter().map(|(s, c)| run_one(s, c)).collect();
    let (rows, events) = done.into_iter().unzip();
    Batch { rows, events }
}

fn run_one(spec: &GenSpec, cfg: &SolveConfig) -> (BatchRow, Vec<Event>) {
    let mut row = BatchRow {
        class: spec.class,
        size: spec.target_vertices,
        seed: spec.seed,
        config: config_label(cfg),
        solved: false,
        lb: 0,
        ub: None,
        gap: None,
        time_s: 0.0,
        reason: None,
        vertices: 0,
        holes: 0,
        error: None,
    };
    let poly = match generate(spec) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, Vec::new());
        }
    };
    row.vertices = poly.vertex_count();
    row.holes = poly.holes().len();
    match engine::solve(&poly, cfg) {
        Ok(s) => {
            let st = &s.state;
            row.solved = st.upper_bound.is_some();
            row.lb = st.lower_bound;
            row.ub = st.upper_bound;
            row.gap = st.gap();
            row.time_s = st.elapsed;
            row.reason = st.reason;
            (row, s.log.events)
        }
        Err(e) => {
            row.error = Some(e.to_string());
            (row, Vec::new())
        }
    }
}

impl Batch {
    /// `class,size,seed,config,solved,lb,ub,gap,time_s`, with `inf` for an
    /// infinite gap and an empty `ub` when there is none.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class", "size", "seed", "config", "solved", "lb", "ub", "gap", "time_s"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.class.to_string(),
                r.size.to_string(),
                r.seed.to_string(),
                r.config.clone(),
                r.solved.to_string(),
                r.lb.to_string(),
                r.ub.map(|u| u.to_string()).unwrap_or_default(),
                r.gap.map_or_else(|| "inf".to_string(), |g| format!("{g:.6}")),
                format!("{:.3}", r.time_s),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
    }

    fn groups(&self) -> Vec<(Class, usize, String, Vec<usize>)> {
        let mut out: Vec<(Class, usize, String, Vec<usize>)> = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            match out
                .iter_mut()
                .find(|g| g.0 == r.class && g.1 == r.size && g.2 == r.config)
            {
                Some(g) => g.3.push(i),
                None => out.push((r.class, r.size, r.config.clone(), vec![i])),
            }
        }
        out
    }

    /// Percent with a binary solution and the median gap among those, per
    /// class, size and configuration.
    pub fn summary(&self) -> Vec<Summary> {
        self.groups()
            .into_iter()
            .map(|(class, size, config, idx)| {
                let mut gaps: Vec<f64> = idx.iter().filter_map(|&i| self.rows[i].gap).collect();
                gaps.sort_by(f64::total_cmp);
                Summary {
                    class,
                    size,
                    config,
                    instances: idx.len(),
                    solved_percent: 100.0 * gaps.len() as f64 / idx.len() as f64,
                    median_gap: (!gaps.is_empty()).then(|| gaps[(gaps.len() - 1) / 2]),
                }
            })
            .collect()
    }

    /// Gap quartiles per group at `samples` evenly spaced times up to
    /// `horizon` seconds.
    pub fn series(&self, horizon: f64, samples: usize) -> Vec<QuartileSeries> {
        let times: Vec<f64> = (0..samples)
            .map(|k| horizon * k as f64 / (samples.max(2) - 1) as f64)
            .collect();
        self.groups()
            .into_iter()
            .map(|(class, size, config, idx)| {
                let quartiles = times
                    .iter()
                    .map(|&t| {
                        let gaps: Vec<f64> = idx.iter().map(|&i| gap_at(&self.events[i], t)).collect();
                        quartiles(&gaps).map(|q| q.is_finite().then_some(q))
                    })
                    .collect();
                QuartileSeries {
                    class,
                    size,
                    config,
                    times: times.clone(),
                    quartiles,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub class: Class,
    pub size: usize,
    pub config: String,
    pub instances: usize,
    pub solved_percent: f64,
    /// `None` when nothing was solved.
    pub median_gap: Option<f64>,
}

/// Q0 to Q4 of the relative gap at each sample time. `None` is an
/// infinite gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuartileSeries {
    pub class: Class,
    pub size: usize,
    pub config: String,
    pub times: Vec<f64>,
    pub quartiles: Vec<[Option<f64>; 5]>,
}

/// Relative gap after `t` seconds of a logged solve; infinite before the
/// first upper bound or for a failed solve.
pub fn gap_at(events: &[Event], t: f64) -> f64 {
    events
        .iter()
        .take_while(|e| e.t <= t)
        .last()
        .and_then(|e| e.ub.map(|ub| f64::from(ub - e.lb.min(ub)) / f64::from(e.lb)))
        .unwrap_or(f64::INFINITY)
}

/// Minimum, quartiles and maximum by nearest rank, so infinite values stay
/// infinite instead of being interpolated.
pub fn quartiles(values: &[f64]) -> [f64; 5] {
    if values.is_empty() {
        return [f64::INFINITY; 5];
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    [0.0, 0.25, 0.5, 0.75, 1.0].map(|q: f64| v[((q * (n - 1) as f64).round() as usize).min(n - 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{CutSet, Mode, Tag};

    #[test]
    fn quartiles_are_ordered() {
        let q = quartiles(&[3.0, 1.0, f64::INFINITY, 0.0, 2.0]);
        assert_eq!(q, [0.0, 1.0, 2.0, 3.0, f64::INFINITY]);
        assert!(q.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn gap_follows_events() {
        let ev = |t, lb, ub| Event {
            t,
            lb,
            ub,
            n_guards: 0,
            n_witnesses: 0,
            n_cuts: 0,
            obj: None,
            tag: Tag::Upper,
        };
        let log = vec![ev(0.0, 1, None), ev(1.0, 2, Some(4)), ev(2.0, 3, Some(3))];
        assert_eq!(gap_at(&log, 0.5), f64::INFINITY);
        assert_eq!(gap_at(&log, 1.5), 1.0);
        assert_eq!(gap_at(&log, 5.0), 0.0);
    }

    #[test]
    fn small_batch() {
        let specs = [GenSpec::new(Class::Koch, 15, 1), GenSpec::new(Class::Orthogonal, 12, 2)];
        let cfg = SolveConfig {
            mode: Mode::Lp,
            cuts: CutSet::Sc3Ec,
            time_limit: 30.0,
            ..SolveConfig::default()
        };
        let b = run_batch(&specs, &[cfg]);
        assert_eq!(b.rows.len(), 2);
        assert_eq!(b.rows[0].class, Class::Koch);
        let csv = b.to_csv();
        assert!(csv.starts_with("class,size,seed,config,solved,lb,ub,gap,time_s\n"));
        assert_eq!(csv.lines().count(), 3);
        for s in b.series(30.0, 5) {
            for q in &s.quartiles {
                let v: Vec<f64> = q.iter().map(|x| x.unwrap_or(f64::INFINITY)).collect();
                assert!(v.windows(2).all(|w| w[0] <= w[1]));
            }
        }
        assert_eq!(b.summary().len(), 2);
    }
}
