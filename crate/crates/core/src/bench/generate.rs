//! Random polygon classes on integer coordinates. Each generator works on
//! `i64` points, checks simplicity exactly with 128-bit predicates, and
//! only converts to a [`Polygon`] at the end.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Koch,
    Orthogonal,
    Simple,
    Spike,
}

impl Class {
    pub const ALL: [Class; 4] = [Class::Koch, Class::Orthogonal, Class::Simple, Class::Spike];
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Koch => "koch",
            Class::Orthogonal => "orthogonal",
            Class::Simple => "simple",
            Class::Spike => "spike",
        })
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Class::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown class `{s}` (expected koch, orthogonal, simple or spike)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenSpec {
    pub class: Class,
    pub target_vertices: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(class: Class, target_vertices: usize, seed: u64) -> Self {
        GenSpec {
            class,
            target_vertices,
            seed,
        }
    }
}

/// Generator knobs. The defaults are what [`generate`] uses.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Koch: chance that a bump points into the polygon.
    pub koch_inward: f64,
    /// Koch: bump heights, in sixths of the replaced edge.
    pub koch_heights: (i64, i64),
    /// Orthogonal: grid cells per side, as a multiple of the target.
    pub ortho_grid: f64,
    /// Orthogonal: widths of grid rows and columns, in units.
    pub ortho_cell: (i64, i64),
    /// Simple: coordinate range of the random points.
    pub simple_range: i64,
    /// Spike: chance of having holes at all.
    pub spike_hole_chance: f64,
    /// Spike: most holes.
    pub spike_max_holes: usize,
    /// Spike: spike length as a fraction of the body radius.
    pub spike_length: (f64, f64),
    /// Spike: spike base width as a fraction of its edge.
    pub spike_width: (f64, f64),
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            koch_inward: 0.3,
            koch_heights: (1, 2),
            ortho_grid: 0.5,
            ortho_cell: (2, 6),
            simple_range: 1_000_000,
            spike_hole_chance: 0.75,
            spike_max_holes: 3,
            spike_length: (0.3, 1.0),
            spike_width: (0.04, 0.12),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("target of {0} vertices is below the minimum of 12")]
    TooSmall(usize),
    #[error("no valid {class} polygon after {attempts} attempts (seed {seed})")]
    Exhausted { class: Class, seed: u64, attempts: u32 },
}

const ATTEMPTS: u32 = 25;

/// Generates a polygon of the requested class with a vertex count within
/// 10% of the target. Deterministic per spec.
pub fn generate(spec: &GenSpec) -> Result<Polygon, GenError> {
    generate_with(spec, &GenParams::default())
}

pub fn generate_with(spec: &GenSpec, params: &GenParams) -> Result<Polygon, GenError> {
    let n = spec.target_vertices;
    if n < 12 {
        return Err(GenError::TooSmall(n));
    }
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(u64::from(attempt));
        let rings = match spec.class {
            Class::Koch => koch(n, params, &mut rng),
            Class::Orthogonal => orthogonal(n, params, &mut rng),
            Class::Simple => simple(n, params, &mut rng),
            Class::Spike => spike(n, params, &mut rng),
        };
        let Some((outer, holes)) = rings else { continue };
        let count = outer.len() + holes.iter().map(Vec::len).sum::<usize>();
        if count.abs_diff(n) * 10 > n {
            continue;
        }
        let conv = |r: &[P]| r.iter().map(|&(x, y)| Point::from_ints(x, y)).collect::<Vec<_>>();
        if let Ok(p) = Polygon::new(conv(&outer), holes.iter().map(|h| conv(h)).collect()) {
            return Ok(p);
        }
    }
    Err(GenError::Exhausted {
        class: spec.class,
        seed: spec.seed,
        attempts: ATTEMPTS,
    })
}

type P = (i64, i64);
type Rings = (Vec<P>, Vec<Vec<P>>);

fn orient(a: P, b: P, c: P) -> i128 {
    let (ax, ay) = (i128::from(a.0), i128::from(a.1));
    (i128::from(b.0) - ax) * (i128::from(c.1) - ay) - (i128::from(b.1) - ay) * (i128::from(c.0) - ax)
}

fn on_segment(p: P, a: P, b: P) -> bool {
    orient(a, b, p) == 0
        && a.0.min(b.0) <= p.0
        && p.0 <= a.0.max(b.0)
        && a.1.min(b.1) <= p.1
        && p.1 <= a.1.max(b.1)
}

/// Closed segment intersection.
fn touches(a: P, b: P, c: P, d: P) -> bool {
    let (o1, o2) = (orient(a, b, c).signum(), orient(a, b, d).signum());
    let (o3, o4) = (orient(c, d, a).signum(), orient(c, d, b).signum());
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

fn signed_area2(ring: &[P]) -> i128 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            i128::from(a.0) * i128::from(b.1) - i128::from(b.0) * i128::from(a.1)
        })
        .sum()
}

/// Whether segment `(a, b)` meets any edge of `ring` other than those
/// listed in `skip` (edge `i` runs from vertex `i` to `i + 1`).
fn hits_ring(a: P, b: P, ring: &[P], skip: &[usize]) -> bool {
    let n = ring.len();
    (0..n).any(|i| !skip.contains(&i) && touches(a, b, ring[i], ring[(i + 1) % n]))
}

/// Random Koch-style bumps: an edge `a b` becomes `a, a + d/3, apex,
/// a + 2d/3, b` with the apex off the edge by a random multiple of `d/6`.
fn koch(n: usize, prm: &GenParams, rng: &mut ChaCha8Rng) -> Option<Rings> {
    const UNIT: i64 = 6i64.pow(8);
    let mut ring: Vec<P> = vec![(0, 0), (6 * UNIT, 0), (3 * UNIT, 5 * UNIT)];
    let steps = (n - 3 + 1) / 3;
    for _ in 0..steps {
        let mut placed = false;
        for _ in 0..200 {
            let m = ring.len();
            let i = rng.gen_range(0..m);
            let (a, b) = (ring[i], ring[(i + 1) % m]);
            let d = (b.0 - a.0, b.1 - a.1);
            if d.0 % 6 != 0 || d.1 % 6 != 0 {
                continue;
            }
            let t = rng.gen_range(prm.koch_heights.0..=prm.koch_heights.1);
            // interior lies left of a counterclockwise edge
            let side = if rng.gen_bool(prm.koch_inward) { 1 } else { -1 };
            let p1 = (a.0 + d.0 / 3, a.1 + d.1 / 3);
            let p3 = (a.0 + 2 * d.0 / 3, a.1 + 2 * d.1 / 3);
            let apex = (
                a.0 + d.0 / 2 - side * t * d.1 / 6,
                a.1 + d.1 / 2 + side * t * d.0 / 6,
            );
            // the pieces along the old edge cannot hit anything new
            let clear = !hits_ring(p1, apex, &ring, &[i]) && !hits_ring(apex, p3, &ring, &[i]);
            if clear {
                ring.splice(i + 1..i + 1, [p1, apex, p3]);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some((ring, Vec::new()))
}

/// A random polyomino on a grid with random row and column widths, grown
/// one cell at a time while keeping its outline a simple ring.
fn orthogonal(n: usize, prm: &GenParams, rng: &mut ChaCha8Rng) -> Option<Rings> {
    let size = ((n as f64 * prm.ortho_grid) as usize).max(8);
    let lines = |rng: &mut ChaCha8Rng| {
        let mut v = vec![0i64];
        for _ in 0..size {
            let w = rng.gen_range(prm.ortho_cell.0..=prm.ortho_cell.1);
            v.push(v.last().unwrap() + w);
        }
        v
    };
    let xs = lines(rng);
    let ys = lines(rng);
    let mut grid = vec![vec![false; size]; size];
    let mid = size / 2;
    grid[mid][mid] = true;
    let mut frontier: Vec<(usize, usize)> = Vec::new();
    let push_nbrs = |f: &mut Vec<(usize, usize)>, (i, j): (usize, usize)| {
        if i > 0 {
            f.push((i - 1, j));
        }
        if j > 0 {
            f.push((i, j - 1));
        }
        if i + 1 < size {
            f.push((i + 1, j));
        }
        if j + 1 < size {
            f.push((i, j + 1));
        }
    };
    push_nbrs(&mut frontier, (mid, mid));
    let lo = n - n / 10;
    let hi = n + n / 10;
    for _ in 0..size * size * 4 {
        if frontier.is_empty() {
            return None;
        }
        let k = rng.gen_range(0..frontier.len());
        let c = frontier.swap_remove(k);
        if grid[c.0][c.1] || !can_add(&grid, c) {
            continue;
        }
        grid[c.0][c.1] = true;
        push_nbrs(&mut frontier, c);
        let ring = outline(&grid, &xs, &ys);
        if (lo..=hi).contains(&ring.len()) {
            return Some((ring, Vec::new()));
        }
    }
    None
}

fn cell(grid: &[Vec<bool>], i: isize, j: isize) -> bool {
    let n = grid.len() as isize;
    (0..n).contains(&i) && (0..n).contains(&j) && grid[i as usize][j as usize]
}

/// Adding cell `c` keeps the shape free of holes and of cells that touch
/// only at a corner.
fn can_add(grid: &[Vec<bool>], c: (usize, usize)) -> bool {
    let (i, j) = (c.0 as isize, c.1 as isize);
    for (di, dj) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
        if cell(grid, i + di, j + dj) && !cell(grid, i + di, j) && !cell(grid, i, j + dj) {
            return false;
        }
    }
    let occupied = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        .iter()
        .filter(|(di, dj)| cell(grid, i + di, j + dj))
        .count();
    if occupied <= 1 {
        return true;
    }
    // the empty cells outside must stay connected
    let n = grid.len() as isize;
    let mut seen = vec![vec![false; grid.len() + 2]; grid.len() + 2];
    let free = |a: isize, b: isize| (a, b) != (i, j) && !cell(grid, a, b);
    let mut stack = vec![(-1isize, -1isize)];
    seen[0][0] = true;
    let mut reached = 1usize;
    while let Some((a, b)) = stack.pop() {
        for (da, db) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let (x, y) = (a + da, b + db);
            if x < -1 || y < -1 || x > n || y > n {
                continue;
            }
            let s = &mut seen[(x + 1) as usize][(y + 1) as usize];
            if !*s && free(x, y) {
                *s = true;
                reached += 1;
                stack.push((x, y));
            }
        }
    }
    let filled: usize = grid.iter().map(|r| r.iter().filter(|&&b| b).count()).sum::<usize>() + 1;
    reached == (grid.len() + 2).pow(2) - filled
}

/// Counterclockwise boundary of the filled cells with collinear vertices
/// removed. Cell `(i, j)` spans `xs[i]..xs[i+1]` by `ys[j]..ys[j+1]`.
fn outline(grid: &[Vec<bool>], xs: &[i64], ys: &[i64]) -> Vec<P> {
    use std::collections::HashMap;
    let mut next: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let (ii, jj) = (|i: usize| i as isize, |j: usize| j as isize);
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            if !grid[i][j] {
                continue;
            }
            // boundary edges, interior on the left
            if !cell(grid, ii(i), jj(j) - 1) {
                next.insert((i, j), (i + 1, j));
            }
            if !cell(grid, ii(i) + 1, jj(j)) {
                next.insert((i + 1, j), (i + 1, j + 1));
            }
            if !cell(grid, ii(i), jj(j) + 1) {
                next.insert((i + 1, j + 1), (i, j + 1));
            }
            if !cell(grid, ii(i) - 1, jj(j)) {
                next.insert((i, j + 1), (i, j));
            }
        }
    }
    let start = *next.keys().min().expect("non-empty shape");
    let mut corners = vec![start];
    let mut cur = next[&start];
    while cur != start {
        corners.push(cur);
        cur = next[&cur];
    }
    let pts: Vec<P> = corners.iter().map(|&(i, j)| (xs[i], ys[j])).collect();
    let m = pts.len();
    (0..m)
        .filter(|&k| orient(pts[(k + m - 1) % m], pts[k], pts[(k + 1) % m]) != 0)
        .map(|k| pts[k])
        .collect()
}

/// Random points joined by a nearest-neighbour tour, then untangled by
/// reversing the path between crossing edges until none cross.
fn simple(n: usize, prm: &GenParams, rng: &mut ChaCha8Rng) -> Option<Rings> {
    let r = prm.simple_range;
    let mut pts: Vec<P> = (0..n).map(|_| (rng.gen_range(0..r), rng.gen_range(0..r))).collect();
    pts.sort_unstable();
    pts.dedup();
    pts.shuffle(rng);
    let m = pts.len();
    // nearest-neighbour tour
    let mut order = vec![0usize];
    let mut used = vec![false; m];
    used[0] = true;
    for _ in 1..m {
        let last = pts[*order.last().unwrap()];
        let (k, _) = (0..m)
            .filter(|&k| !used[k])
            .map(|k| (k, (pts[k].0 - last.0).pow(2) + (pts[k].1 - last.1).pow(2)))
            .min_by_key(|&(_, d)| d)?;
        used[k] = true;
        order.push(k);
    }
    let mut ring: Vec<P> = order.iter().map(|&k| pts[k]).collect();
    for _ in 0..m * m {
        let Some((i, j)) = find_crossing(&ring) else {
            if signed_area2(&ring) < 0 {
                ring.reverse();
            }
            return Some((ring, Vec::new()));
        };
        ring[i + 1..=j].reverse();
    }
    None
}

fn find_crossing(ring: &[P]) -> Option<(usize, usize)> {
    let m = ring.len();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if touches(ring[i], ring[i + 1], ring[j], ring[(j + 1) % m]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A convex body with thin triangular spikes on some edges and small
/// triangular holes inside.
fn spike(n: usize, prm: &GenParams, rng: &mut ChaCha8Rng) -> Option<Rings> {
    const R: f64 = 1_000_000.0;
    let mut holes: Vec<Vec<P>> = Vec::new();
    if rng.gen_bool(prm.spike_hole_chance) {
        let count = rng.gen_range(1..=prm.spike_max_holes.min((n - 9) / 3).max(1));
        for _ in 0..count * 10 {
            if holes.len() == count {
                break;
            }
            let (cr, ca) = (rng.gen_range(0.0..0.55) * R, rng.gen_range(0.0..std::f64::consts::TAU));
            let (cx, cy) = (cr * ca.cos(), cr * ca.sin());
            let size = rng.gen_range(0.04..0.1) * R;
            let rot = rng.gen_range(0.0..std::f64::consts::TAU);
            // clockwise triangle
            let tri: Vec<P> = (0..3)
                .map(|k| {
                    let a = rot - f64::from(k) * std::f64::consts::TAU / 3.0;
                    ((cx + size * a.cos()) as i64, (cy + size * a.sin()) as i64)
                })
                .collect();
            let far = holes.iter().all(|h| {
                let (hx, hy) = h.iter().fold((0, 0), |a, p| (a.0 + p.0 / 3, a.1 + p.1 / 3));
                let d = (((hx as f64 - cx).powi(2) + (hy as f64 - cy).powi(2)).sqrt()) / R;
                d > 0.25
            });
            if far {
                holes.push(tri);
            }
        }
    }
    let budget = n - 3 * holes.len();
    let spikes = budget / 4;
    let sides = budget - 3 * spikes;
    let body: Vec<P> = (0..sides)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / sides as f64;
            ((R * a.cos()) as i64, (R * a.sin()) as i64)
        })
        .collect();
    let mut chosen: Vec<usize> = (0..sides).collect();
    chosen.shuffle(rng);
    chosen.truncate(spikes);
    let mut ring = Vec::with_capacity(n);
    for k in 0..sides {
        let (a, b) = (body[k], body[(k + 1) % sides]);
        ring.push(a);
        if !chosen.contains(&k) {
            continue;
        }
        let w = rng.gen_range(prm.spike_width.0..prm.spike_width.1);
        let u = rng.gen_range(0.15..0.85 - w);
        let at = |t: f64| {
            (
                a.0 + ((b.0 - a.0) as f64 * t) as i64,
                a.1 + ((b.1 - a.1) as f64 * t) as i64,
            )
        };
        let (p, q) = (at(u), at(u + w));
        let mid = ((p.0 + q.0) as f64 / 2.0, (p.1 + q.1) as f64 / 2.0);
        let len = rng.gen_range(prm.spike_length.0..prm.spike_length.1) * R;
        let (dx, dy) = ((b.1 - a.1) as f64, -(b.0 - a.0) as f64);
        let norm = (dx * dx + dy * dy).sqrt();
        let tip = ((mid.0 + dx / norm * len) as i64, (mid.1 + dy / norm * len) as i64);
        ring.extend([p, tip, q]);
    }
    Some((ring, holes))
}
