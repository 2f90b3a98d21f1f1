//! Facet conditions for the guard-cover polytope `conv{x in {0,1}^G : x
//! covers W}` and an exhaustive oracle that measures face dimensions.

pub mod oracle;
mod report;

pub use report::{facet_report, facet_report_with_circulant, CutReport, FacetReport, Failure, OracleTrivial};

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::geom::arrangement::overlay_regions;
use crate::geom::number::int;
use crate::geom::{GeomError, Point, Polygon};
use crate::model::{Model, VisibilityMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FacetError {
    #[error("the cover polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("the witness set is empty")]
    EmptySet,
    #[error("witness {0} is out of range")]
    UnknownWitness(usize),
    #[error("witness {0} appears twice")]
    RepeatedWitness(usize),
    #[error("witness {0} can join the set without changing the inequality")]
    NotMaximal(usize),
    #[error("edge-cover sets need an odd size of at least 3, got {0}")]
    BadCycleSize(usize),
}

/// Every witness sees at least two guards.
pub fn is_full_dimensional(m: &VisibilityMatrix) -> bool {
    (0..m.num_witnesses()).all(|w| m.row(w).iter().filter(|&&s| s).count() >= 2)
}

fn validate_set(m: &VisibilityMatrix, s: &[usize]) -> Result<(), FacetError> {
    if s.is_empty() {
        return Err(FacetError::EmptySet);
    }
    for (i, &w) in s.iter().enumerate() {
        if w >= m.num_witnesses() {
            return Err(FacetError::UnknownWitness(w));
        }
        if s[..i].contains(&w) {
            return Err(FacetError::RepeatedWitness(w));
        }
    }
    Ok(())
}

/// Guards split by how much of `S` they see: none, some, or all.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub j0: Vec<usize>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
}

impl Partition {
    pub fn of(m: &VisibilityMatrix, s: &[usize]) -> Self {
        let mut p = Partition::default();
        for g in 0..m.num_guards() {
            match s.iter().filter(|&&w| m.sees(w, g)).count() {
                0 => p.j0.push(g),
                c if c == s.len() => p.j2.push(g),
                _ => p.j1.push(g),
            }
        }
        p
    }

    /// Coefficients of the inequality `2 x(J2) + x(J1) >= 2`.
    pub fn coefficients(&self, num_guards: usize) -> Vec<u32> {
        let mut c = vec![0; num_guards];
        for &g in &self.j1 {
            c[g] = 1;
        }
        for &g in &self.j2 {
            c[g] = 2;
        }
        c
    }
}

/// Guards of `J1` joined when together they see all of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoCoverGraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl TwoCoverGraph {
    pub fn build(m: &VisibilityMatrix, s: &[usize], j1: &[usize]) -> Self {
        let mut edges = Vec::new();
        for (i, &a) in j1.iter().enumerate() {
            for &b in &j1[i + 1..] {
                if s.iter().all(|&w| m.sees(w, a) || m.sees(w, b)) {
                    edges.push((a, b));
                }
            }
        }
        TwoCoverGraph { nodes: j1.to_vec(), edges }
    }

    /// Connected components as node lists, each tagged with whether it
    /// contains an odd cycle (is not bipartite).
    pub fn components(&self) -> Vec<(Vec<usize>, bool)> {
        let n = self.nodes.len();
        let pos = |g: usize| self.nodes.iter().position(|&x| x == g).expect("edge endpoint is a node");
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            let (a, b) = (pos(a), pos(b));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color = vec![u8::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut comp = vec![self.nodes[s]];
            let mut odd = false;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        comp.push(self.nodes[v]);
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        odd = true;
                    }
                }
            }
            comp.sort_unstable();
            out.push((comp, odd));
        }
        out
    }
}

/// Witnesses seen by `g` and by no other guard of `J0`.
pub fn t_set(m: &VisibilityMatrix, g: usize, j0: &[usize]) -> Vec<usize> {
    (0..m.num_witnesses())
        .filter(|&w| m.sees(w, g) && j0.iter().all(|&h| h == g || !m.sees(w, h)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum ScFailure {
    /// A component of the 2-cover graph is bipartite.
    NoOddCycle { component: Vec<usize> },
    /// A guard of `J0` whose private witnesses no guard of `J2` and no
    /// 2-cover pair of `J1` can take over.
    Uncovered { guard: usize, t: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScVerdict {
    pub facet: bool,
    pub partition: Partition,
    pub graph: TwoCoverGraph,
    pub failure: Option<ScFailure>,
}

/// Decides whether `2 x(J2) + x(J1) >= 2` for witness set `s` is a facet.
///
/// Requires a full-dimensional polytope and a maximal `s`: no other
/// witness is seen only by guards that also see part of `s`.
pub fn check_sc_facet(m: &VisibilityMatrix, s: &[usize]) -> Result<ScVerdict, FacetError> {
    validate_set(m, s)?;
    if !is_full_dimensional(m) {
        return Err(FacetError::NotFullDimensional);
    }
    let part = Partition::of(m, s);
    let mut seen_by_s = vec![false; m.num_guards()];
    for &g in part.j1.iter().chain(&part.j2) {
        seen_by_s[g] = true;
    }
    if let Some(w) = (0..m.num_witnesses())
        .find(|w| !s.contains(w) && (0..m.num_guards()).all(|g| !m.sees(*w, g) || seen_by_s[g]))
    {
        return Err(FacetError::NotMaximal(w));
    }
    let graph = TwoCoverGraph::build(m, s, &part.j1);
    let mut failure = graph
        .components()
        .into_iter()
        .find(|(_, odd)| !odd)
        .map(|(component, _)| ScFailure::NoOddCycle { component });
    if failure.is_none() {
        for &g in &part.j0 {
            let t = t_set(m, g, &part.j0);
            if t.is_empty() {
                continue;
            }
            let by_j2 = part.j2.iter().any(|&h| t.iter().all(|&w| m.sees(w, h)));
            let by_pair = || {
                part.j1.iter().enumerate().any(|(i, &a)| {
                    part.j1[i + 1..].iter().any(|&b| {
                        t.iter().chain(s).all(|&w| m.sees(w, a) || m.sees(w, b))
                    })
                })
            };
            if !by_j2 && !by_pair() {
                failure = Some(ScFailure::Uncovered { guard: g, t });
                break;
            }
        }
    }
    Ok(ScVerdict {
        facet: failure.is_none(),
        partition: part,
        graph,
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum EcFailure {
    /// A guard sees three or more of the set.
    SeesThree { guard: usize },
    /// The pairs seen together by single guards do not form one cycle
    /// through the whole set.
    NotACycle { pairs: Vec<(usize, usize)> },
    /// A guard seeing part of the set also sees a witness outside it.
    SeesOutside { guard: usize, witness: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EcVerdict {
    pub facet: bool,
    pub failure: Option<EcFailure>,
}

/// Checks the sufficient conditions for `x(G ∩ V(W)) >= ceil(k/2)` to be
/// a facet: no guard sees three of the set, the pairs seen by single
/// guards form a cycle through all of it, and guards seeing the set see
/// nothing else.
pub fn check_ec_facet(m: &VisibilityMatrix, wbar: &[usize]) -> Result<EcVerdict, FacetError> {
    validate_set(m, wbar)?;
    let k = wbar.len();
    if k < 3 || k % 2 == 0 {
        return Err(FacetError::BadCycleSize(k));
    }
    if !is_full_dimensional(m) {
        return Err(FacetError::NotFullDimensional);
    }
    let verdict = |failure: Option<EcFailure>| {
        Ok(EcVerdict {
            facet: failure.is_none(),
            failure,
        })
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in 0..m.num_guards() {
        let hit: Vec<usize> = (0..k).filter(|&i| m.sees(wbar[i], g)).collect();
        match hit[..] {
            [a, b] if !pairs.contains(&(a, b)) => pairs.push((a, b)),
            [_, _, _, ..] => return verdict(Some(EcFailure::SeesThree { guard: g })),
            _ => {}
        }
    }
    if !is_single_cycle(k, &pairs) {
        let pairs = pairs.iter().map(|&(a, b)| (wbar[a], wbar[b])).collect();
        return verdict(Some(EcFailure::NotACycle { pairs }));
    }
    for g in 0..m.num_guards() {
        if !wbar.iter().any(|&w| m.sees(w, g)) {
            continue;
        }
        if let Some(w) = (0..m.num_witnesses()).find(|w| !wbar.contains(w) && m.sees(*w, g)) {
            return verdict(Some(EcFailure::SeesOutside { guard: g, witness: w }));
        }
    }
    verdict(None)
}

fn is_single_cycle(k: usize, pairs: &[(usize, usize)]) -> bool {
    if pairs.len() != k {
        return false;
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    if adj.iter().any(|n| n.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == k
}

/// Facet status of the bounds `x_g >= 0`, `x_g <= 1` and of each witness
/// row, from their combinatorial conditions. All false unless the polytope
/// is full-dimensional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialReport {
    pub full_dimensional: bool,
    pub lower: Vec<bool>,
    pub upper: Vec<bool>,
    pub witness: Vec<bool>,
}

pub fn check_trivial_facets(m: &VisibilityMatrix) -> TrivialReport {
    let (ng, nw) = (m.num_guards(), m.num_witnesses());
    let full = is_full_dimensional(m);
    let seeing: Vec<Vec<usize>> = (0..nw).map(|w| m.guards_seeing(w)).collect();
    let lower = (0..ng)
        .map(|g| full && seeing.iter().all(|s| s.iter().filter(|&&h| h != g).count() >= 2))
        .collect();
    let witness = (0..nw)
        .map(|w| full && witness_row_is_facet(m, w, &seeing))
        .collect();
    TrivialReport {
        full_dimensional: full,
        lower,
        upper: vec![full; ng],
        witness,
    }
}

fn witness_row_is_facet(m: &VisibilityMatrix, w: usize, seeing: &[Vec<usize>]) -> bool {
    let vw = &seeing[w];
    let dominated = seeing
        .iter()
        .any(|o| o.len() < vw.len() && o.iter().all(|g| vw.contains(g)));
    if dominated {
        return false;
    }
    (0..m.num_guards())
        .filter(|g| !vw.contains(g))
        .all(|g| {
            // witnesses of g that no guard outside V(w) other than g sees
            let private: Vec<usize> = m
                .witnesses_seen(g)
                .into_iter()
                .filter(|&u| seeing[u].iter().all(|&h| h == g || vw.contains(&h)))
                .collect();
            vw.iter().any(|&h| private.iter().all(|&u| m.sees(u, h)))
        })
}

/// Whether the guards and witnesses of `model` form a full circulant
/// configuration: guard `i` sees every witness but one, a different one for
/// each guard, and every point of the polygon sees all guards but one.
pub fn is_full_circulant(model: &Model) -> Result<bool, GeomError> {
    let m = model.matrix();
    let k = m.num_guards();
    if k < 3 || m.num_witnesses() != k {
        return Ok(false);
    }
    let mut missed = vec![false; k];
    for g in 0..k {
        let miss: Vec<usize> = (0..k).filter(|&w| !m.sees(w, g)).collect();
        match miss[..] {
            [w] if !missed[w] => missed[w] = true,
            _ => return Ok(false),
        }
    }
    let pts: Vec<&Point> = model.guards().iter().collect();
    let vis = model.visibility_many(&pts)?;
    let regions: Vec<&Polygon> = vis.iter().map(|v| &v.region).collect();
    let arr = overlay_regions(&regions, model.polygon());
    Ok(arr
        .min_weight()
        .is_some_and(|w| *w >= int(k as i64 - 1)))
}
