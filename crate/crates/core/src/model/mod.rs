//! Guard and witness sets, their visibility matrix, persistent cuts, and the
//! covering LP built from them.

mod checkpoint;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::visibility::sees_unchecked;
use crate::geom::{visibility_polygon, GeomError, Point, Polygon, VisibilityPolygon};
use crate::lp::{LpError, LpModel, RowKind};

pub use checkpoint::{Checkpoint, CutRecord};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("witness {0:?} is not seen by any guard")]
    UncoveredWitness(Point),
    #[error("cut has {0} witnesses; SC cuts need at least 3, EC cuts an odd number of at least 3")]
    BadCut(usize),
}

/// Ordered points with stable ids and exact-coordinate deduplication.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

pub type GuardSet = PointSet;
pub type WitnessSet = PointSet;

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(pts: I) -> Self {
        let mut s = Self::new();
        for p in pts {
            s.insert(p);
        }
        s
    }

    /// Inserts `p` and returns its id, or `None` if it was already present.
    pub fn insert(&mut self, p: Point) -> Option<usize> {
        if self.index.contains_key(&p) {
            return None;
        }
        let id = self.points.len();
        self.index.insert(p.clone(), id);
        self.points.push(p);
        Some(id)
    }

    pub fn id_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn get(&self, id: usize) -> &Point {
        &self.points[id]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

/// Witness-by-guard visibility, extended as either set grows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VisibilityMatrix {
    rows: Vec<Vec<bool>>,
    guards: usize,
}

impl VisibilityMatrix {
    pub fn compute(poly: &Polygon, guards: &PointSet, witnesses: &PointSet) -> Self {
        let rows = witnesses
            .points()
            .par_iter()
            .map(|w| guards.iter().map(|g| sees_unchecked(g, w, poly)).collect())
            .collect();
        VisibilityMatrix { rows, guards: guards.len() }
    }

    pub fn sees(&self, witness: usize, guard: usize) -> bool {
        self.rows[witness][guard]
    }

    pub fn row(&self, witness: usize) -> &[bool] {
        &self.rows[witness]
    }

    /// Ids of the guards seeing `witness`.
    pub fn guards_seeing(&self, witness: usize) -> Vec<usize> {
        (0..self.guards).filter(|&g| self.rows[witness][g]).collect()
    }

    /// Ids of the witnesses seen by `guard`.
    pub fn witnesses_seen(&self, guard: usize) -> Vec<usize> {
        (0..self.rows.len()).filter(|&w| self.rows[w][guard]).collect()
    }

    pub fn num_witnesses(&self) -> usize {
        self.rows.len()
    }

    pub fn num_guards(&self) -> usize {
        self.guards
    }

    pub fn push_guard(&mut self, poly: &Polygon, g: &Point, witnesses: &PointSet) {
        let col: Vec<bool> = witnesses
            .points()
            .par_iter()
            .map(|w| sees_unchecked(g, w, poly))
            .collect();
        for (row, v) in self.rows.iter_mut().zip(col) {
            row.push(v);
        }
        self.guards += 1;
    }

    pub fn push_witness(&mut self, poly: &Polygon, w: &Point, guards: &PointSet) {
        let row = guards
            .points()
            .par_iter()
            .map(|g| sees_unchecked(g, w, poly))
            .collect();
        self.rows.push(row);
    }

    /// Builds a matrix directly from boolean rows (witness by guard).
    pub fn from_rows(rows: Vec<Vec<bool>>) -> Self {
        let guards = rows.first().map_or(0, |r| r.len());
        VisibilityMatrix { rows, guards }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Sc,
    Ec,
}

/// A cut stored by its witness points. Guard coefficients are derived from
/// what each guard sees of those points, so the cut applies unchanged to
/// guards added later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutConstraint {
    pub kind: CutKind,
    pub witnesses: Vec<Point>,
    pub rhs: u32,
    /// For EC cuts: the largest number of the witnesses any point of the
    /// polygon sees, as verified when the cut was created (at most 2).
    pub certificate: Option<u32>,
}

impl CutConstraint {
    pub fn sc(witnesses: Vec<Point>) -> Result<Self, ModelError> {
        if witnesses.len() < 3 {
            return Err(ModelError::BadCut(witnesses.len()));
        }
        Ok(CutConstraint { kind: CutKind::Sc, witnesses, rhs: 2, certificate: None })
    }

    pub fn ec(witnesses: Vec<Point>, certificate: u32) -> Result<Self, ModelError> {
        let k = witnesses.len();
        if k < 3 || k % 2 == 0 {
            return Err(ModelError::BadCut(k));
        }
        Ok(CutConstraint {
            kind: CutKind::Ec,
            rhs: k.div_ceil(2) as u32,
            witnesses,
            certificate: Some(certificate),
        })
    }

    /// Coefficient of a guard that sees `seen` of the cut's witnesses.
    pub fn coefficient_for(&self, seen: usize) -> u32 {
        match self.kind {
            CutKind::Sc if seen == self.witnesses.len() => 2,
            CutKind::Sc | CutKind::Ec if seen > 0 => 1,
            _ => 0,
        }
    }

    pub fn row_kind(&self) -> RowKind {
        match self.kind {
            CutKind::Sc => RowKind::ScCut,
            CutKind::Ec => RowKind::EcCut,
        }
    }
}

/// Coefficient of guard `g` in cut `c`, computed geometrically.
pub fn cut_coefficient(g: &Point, c: &CutConstraint, poly: &Polygon) -> Result<u32, GeomError> {
    if !poly.contains(g) {
        return Err(GeomError::PointOutside(g.clone()));
    }
    let seen = c.witnesses.iter().filter(|w| sees_unchecked(g, w, poly)).count();
    Ok(c.coefficient_for(seen))
}

/// The covering LP over `guards` and `witnesses` with the given cuts,
/// computing every coefficient from scratch. Column ids are guard ids; row
/// ids are witness ids followed by one id per cut.
pub fn build_model(
    poly: &Polygon,
    guards: &PointSet,
    witnesses: &PointSet,
    cuts: &[CutConstraint],
) -> Result<LpModel, ModelError> {
    let matrix = VisibilityMatrix::compute(poly, guards, witnesses);
    let coefs: Vec<Vec<u32>> = cuts
        .iter()
        .map(|c| {
            guards
                .iter()
                .map(|g| cut_coefficient(g, c, poly))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    assemble(guards, witnesses, &matrix, cuts, &coefs)
}

fn assemble(
    guards: &PointSet,
    witnesses: &PointSet,
    matrix: &VisibilityMatrix,
    cuts: &[CutConstraint],
    cut_coefs: &[Vec<u32>],
) -> Result<LpModel, ModelError> {
    let mut m = LpModel::new();
    for g in 0..guards.len() {
        m.add_column(g as u64, &[])?;
    }
    for w in 0..witnesses.len() {
        let entries: Vec<(u64, u32)> = matrix.guards_seeing(w).into_iter().map(|g| (g as u64, 1)).collect();
        if entries.is_empty() {
            return Err(ModelError::UncoveredWitness(witnesses.get(w).clone()));
        }
        m.add_row(w as u64, RowKind::Witness, &entries, 1)?;
    }
    for (ci, c) in cuts.iter().enumerate() {
        let entries: Vec<(u64, u32)> = cut_coefs[ci]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(g, &v)| (g as u64, v))
            .collect();
        m.add_row((witnesses.len() + ci) as u64, c.row_kind(), &entries, c.rhs)?;
    }
    Ok(m)
}

/// Mutable solver state: the polygon, guard and witness sets, their
/// visibility matrix, the cut pool, and a cache of visibility polygons.
#[derive(Debug)]
pub struct Model {
    polygon: Polygon,
    guards: PointSet,
    witnesses: PointSet,
    matrix: VisibilityMatrix,
    cuts: Vec<CutConstraint>,
    /// Per cut, the coefficient of every guard.
    cut_coefs: Vec<Vec<u32>>,
    vis: Mutex<HashMap<Point, Arc<VisibilityPolygon>>>,
}

impl Clone for Model {
    fn clone(&self) -> Self {
        Model {
            polygon: self.polygon.clone(),
            guards: self.guards.clone(),
            witnesses: self.witnesses.clone(),
            matrix: self.matrix.clone(),
            cuts: self.cuts.clone(),
            cut_coefs: self.cut_coefs.clone(),
            vis: Mutex::new(self.vis.lock().expect("cache lock").clone()),
        }
    }
}

impl Model {
    /// Starts with every polygon vertex as both guard and witness.
    pub fn new(polygon: Polygon) -> Self {
        let pts: Vec<Point> = polygon.vertices().cloned().collect();
        Self::with_sets(polygon, PointSet::from_points(pts.clone()), PointSet::from_points(pts))
            .expect("polygon vertices lie in the polygon")
    }

    pub fn with_sets(polygon: Polygon, guards: PointSet, witnesses: PointSet) -> Result<Self, ModelError> {
        for p in guards.iter().chain(witnesses.iter()) {
            if !polygon.contains(p) {
                return Err(GeomError::PointOutside(p.clone()).into());
            }
        }
        let matrix = VisibilityMatrix::compute(&polygon, &guards, &witnesses);
        Ok(Model {
            polygon,
            guards,
            witnesses,
            matrix,
            cuts: Vec::new(),
            cut_coefs: Vec::new(),
            vis: Mutex::new(HashMap::new()),
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn guards(&self) -> &PointSet {
        &self.guards
    }

    pub fn witnesses(&self) -> &PointSet {
        &self.witnesses
    }

    pub fn matrix(&self) -> &VisibilityMatrix {
        &self.matrix
    }

    pub fn cuts(&self) -> &[CutConstraint] {
        &self.cuts
    }

    /// Coefficient of guard `g` in cut `c`.
    pub fn cut_coef(&self, c: usize, g: usize) -> u32 {
        self.cut_coefs[c][g]
    }

    /// Adds a guard; `Ok(None)` if it is already present.
    pub fn add_guard(&mut self, p: Point) -> Result<Option<usize>, ModelError> {
        if self.guards.contains(&p) {
            return Ok(None);
        }
        if !self.polygon.contains(&p) {
            return Err(GeomError::PointOutside(p).into());
        }
        self.matrix.push_guard(&self.polygon, &p, &self.witnesses);
        let g = self.guards.len();
        for (ci, c) in self.cuts.iter().enumerate() {
            let seen = self.count_seen(&p, g, c);
            self.cut_coefs[ci].push(c.coefficient_for(seen));
        }
        Ok(self.guards.insert(p))
    }

    /// Adds a witness; `Ok(None)` if it is already present.
    pub fn add_witness(&mut self, p: Point) -> Result<Option<usize>, ModelError> {
        if self.witnesses.contains(&p) {
            return Ok(None);
        }
        if !self.polygon.contains(&p) {
            return Err(GeomError::PointOutside(p).into());
        }
        self.matrix.push_witness(&self.polygon, &p, &self.guards);
        Ok(self.witnesses.insert(p))
    }

    /// Adds a cut unless an identical one exists. Returns whether it was new.
    pub fn add_cut(&mut self, c: CutConstraint) -> bool {
        if self
            .cuts
            .iter()
            .any(|o| o.kind == c.kind && o.rhs == c.rhs && same_set(&o.witnesses, &c.witnesses))
        {
            return false;
        }
        let coefs = (0..self.guards.len())
            .into_par_iter()
            .map(|g| c.coefficient_for(self.count_seen(self.guards.get(g), g, &c)))
            .collect();
        self.cut_coefs.push(coefs);
        self.cuts.push(c);
        true
    }

    /// Number of the cut's witnesses seen by guard `g` at point `p`, using
    /// the matrix where the witness is known.
    fn count_seen(&self, p: &Point, g: usize, c: &CutConstraint) -> usize {
        c.witnesses
            .iter()
            .filter(|w| match self.witnesses.id_of(w) {
                Some(wi) if g < self.matrix.num_guards() => self.matrix.sees(wi, g),
                _ => sees_unchecked(p, w, &self.polygon),
            })
            .count()
    }

    /// The covering LP for the current state. Column and row ids are as in
    /// [`build_model`].
    pub fn lp_model(&self) -> Result<LpModel, ModelError> {
        assemble(&self.guards, &self.witnesses, &self.matrix, &self.cuts, &self.cut_coefs)
    }

    /// Visibility polygon of `p`, cached.
    pub fn visibility(&self, p: &Point) -> Result<Arc<VisibilityPolygon>, GeomError> {
        if let Some(v) = self.vis.lock().expect("cache lock").get(p) {
            return Ok(v.clone());
        }
        let v = Arc::new(visibility_polygon(p, &self.polygon)?);
        self.vis
            .lock()
            .expect("cache lock")
            .insert(p.clone(), v.clone());
        Ok(v)
    }

    /// Visibility polygons of many points, computed in parallel.
    pub fn visibility_many(&self, pts: &[&Point]) -> Result<Vec<Arc<VisibilityPolygon>>, GeomError> {
        pts.par_iter().map(|p| self.visibility(p)).collect()
    }
}

fn same_set(a: &[Point], b: &[Point]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a: Vec<&Point> = a.iter().collect();
    let mut b: Vec<&Point> = b.iter().collect();
    a.sort();
    b.sort();
    a == b
}
