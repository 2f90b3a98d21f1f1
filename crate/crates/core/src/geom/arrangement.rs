//! Overlay of polygonal regions inside a polygon, with per-cell coverage.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::number::{round_dyadic, Rational};
use super::point::{cmp_angle, on_segment, segment_intersection, Point, SegmentIntersection};
use super::polygon::{locate_in_ring, ring_bbox, signed_area, Location, Polygon};
use super::visibility::first_hit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Face,
    Edge,
    Vertex,
}

/// A face, edge, or vertex of the subdivision together with a point in its
/// relative interior and the indices of the input regions containing it.
#[derive(Clone, Debug)]
pub struct Cell {
    pub kind: CellKind,
    pub point: Point,
    pub members: Vec<usize>,
    pub weight: Rational,
}

/// Planar subdivision of a polygon by the boundaries of a list of regions.
#[derive(Clone, Debug)]
pub struct Arrangement {
    vertices: Vec<Point>,
    pieces: Vec<(usize, usize)>,
    /// Outer boundary cycles of the kept faces, as vertex ids.
    face_rings: Vec<Vec<usize>>,
    face_areas: Vec<Rational>,
    cells: Vec<Cell>,
}

impl Arrangement {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn faces(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.kind == CellKind::Face)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.kind == CellKind::Edge)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.kind == CellKind::Vertex)
    }

    pub fn vertex_points(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn min_weight(&self) -> Option<&Rational> {
        self.cells.iter().map(|c| &c.weight).min()
    }

    pub fn max_weight(&self) -> Option<&Rational> {
        self.cells.iter().map(|c| &c.weight).max()
    }

    /// Replaces every cell weight by `f(members)`.
    pub fn reweigh<F>(&mut self, f: F)
    where
        F: Fn(&[usize]) -> Rational + Sync,
    {
        self.cells
            .par_iter_mut()
            .for_each(|c| c.weight = f(&c.members));
    }

    /// The cell containing `q`, for `q` in the polygon.
    pub fn locate(&self, q: &Point) -> Option<&Cell> {
        let nv = self.vertices.len();
        if let Some(i) = self.vertices.iter().position(|v| v == q) {
            return self.cells.iter().find(|c| c.kind == CellKind::Vertex && c.point == self.vertices[i]);
        }
        let _ = nv;
        if let Some(k) = self
            .pieces
            .iter()
            .position(|&(a, b)| on_segment(q, &self.vertices[a], &self.vertices[b]))
        {
            let (a, b) = self.pieces[k];
            let mid = self.vertices[a].midpoint(&self.vertices[b]);
            return self.cells.iter().find(|c| c.kind == CellKind::Edge && c.point == mid);
        }
        // innermost outer cycle containing q
        let mut best: Option<usize> = None;
        for (fi, ring) in self.face_rings.iter().enumerate() {
            let pts: Vec<Point> = ring.iter().map(|&v| self.vertices[v].clone()).collect();
            if locate_in_ring(q, &pts) == Location::Inside
                && best.map_or(true, |b| self.face_areas[fi] < self.face_areas[b])
            {
                best = Some(fi);
            }
        }
        best.map(|fi| {
            self.faces()
                .nth(fi)
                .expect("one face cell per kept ring")
        })
    }
}

/// Overlays weighted regions inside `poly`. Each cell weight is the total
/// weight of the regions containing the cell (faces by interior, edges and
/// vertices by closed containment).
pub fn overlay(regions: &[(Polygon, Rational)], poly: &Polygon) -> Arrangement {
    let polys: Vec<&Polygon> = regions.iter().map(|(p, _)| p).collect();
    let mut arr = overlay_regions(&polys, poly);
    arr.reweigh(|members| {
        members
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + &regions[i].1)
    });
    arr
}

/// Overlays unweighted regions; each cell weight is its member count.
pub fn overlay_regions(regions: &[&Polygon], poly: &Polygon) -> Arrangement {
    let mut segs: Vec<(Point, Point)> = poly
        .edges()
        .chain(regions.iter().flat_map(|r| r.edges()))
        .map(|(a, b)| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
        .collect();
    segs.sort();
    segs.dedup();

    let splits = split_points(&segs);
    let mut vid: HashMap<Point, usize> = HashMap::new();
    let mut vertices: Vec<Point> = Vec::new();
    let mut pieces: Vec<(usize, usize)> = Vec::new();
    for mut pts in splits {
        pts.sort();
        pts.dedup();
        let ids: Vec<usize> = pts
            .into_iter()
            .map(|p| {
                *vid.entry(p.clone()).or_insert_with(|| {
                    vertices.push(p);
                    vertices.len() - 1
                })
            })
            .collect();
        for w in ids.windows(2) {
            pieces.push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    pieces.sort_unstable();
    pieces.dedup();

    let cycles = face_cycles(&vertices, &pieces);
    let piece_refs: Vec<(&Point, &Point)> = pieces
        .iter()
        .map(|&(a, b)| (&vertices[a], &vertices[b]))
        .collect();

    let faces: Vec<(Vec<usize>, Rational, Point)> = cycles
        .into_par_iter()
        .filter_map(|cyc| {
            let pts: Vec<Point> = cyc.iter().map(|&v| vertices[v].clone()).collect();
            let area = signed_area(&pts);
            if area <= Rational::zero() {
                return None;
            }
            let rep = face_point(&pts, &piece_refs);
            (poly.locate(&rep) == Location::Inside).then_some((cyc, area, rep))
        })
        .collect();

    let boxes: Vec<[f64; 4]> = regions.iter().map(|r| approx_box(r.outer())).collect();
    let classify = |p: &Point, open: bool| -> Vec<usize> {
        let (x, y) = p.approx();
        (0..regions.len())
            .filter(|&i| {
                let b = boxes[i];
                let tol = 1e-9 * (1.0 + b[2].abs().max(b[3].abs()).max(b[0].abs()).max(b[1].abs()));
                if x < b[0] - tol || x > b[2] + tol || y < b[1] - tol || y > b[3] + tol {
                    return false;
                }
                match regions[i].locate(p) {
                    Location::Inside => true,
                    Location::Boundary => !open,
                    Location::Outside => false,
                }
            })
            .collect()
    };

    let mut cells: Vec<Cell> = Vec::new();
    let mut face_rings = Vec::with_capacity(faces.len());
    let mut face_areas = Vec::with_capacity(faces.len());
    let face_cells: Vec<Cell> = faces
        .par_iter()
        .map(|(_, _, rep)| Cell {
            kind: CellKind::Face,
            point: rep.clone(),
            members: classify(rep, true),
            weight: Rational::zero(),
        })
        .collect();
    for (cyc, area, _) in faces {
        face_rings.push(cyc);
        face_areas.push(area);
    }
    cells.extend(face_cells);
    let edge_cells: Vec<Cell> = pieces
        .par_iter()
        .filter_map(|&(a, b)| {
            let mid = vertices[a].midpoint(&vertices[b]);
            poly.contains(&mid).then(|| Cell {
                kind: CellKind::Edge,
                members: classify(&mid, false),
                point: mid,
                weight: Rational::zero(),
            })
        })
        .collect();
    cells.extend(edge_cells);
    let vertex_cells: Vec<Cell> = vertices
        .par_iter()
        .filter(|v| poly.contains(v))
        .map(|v| Cell {
            kind: CellKind::Vertex,
            point: v.clone(),
            members: classify(v, false),
            weight: Rational::zero(),
        })
        .collect();
    cells.extend(vertex_cells);
    for c in &mut cells {
        c.weight = Rational::from_integer(c.members.len().into());
    }
    Arrangement {
        vertices,
        pieces,
        face_rings,
        face_areas,
        cells,
    }
}

fn approx_box(ring: &[Point]) -> [f64; 4] {
    let (lo, hi) = ring_bbox(ring);
    let (x0, y0) = lo.approx();
    let (x1, y1) = hi.approx();
    [x0, y0, x1, y1]
}

/// For each segment, its endpoints plus every point where another segment
/// touches it.
fn split_points(segs: &[(Point, Point)]) -> Vec<Vec<Point>> {
    let n = segs.len();
    let boxes: Vec<[f64; 4]> = segs
        .iter()
        .map(|(a, b)| {
            let (ax, ay) = a.approx();
            let (bx, by) = b.approx();
            [ax.min(bx), ay.min(by), ax.max(bx), ay.max(by)]
        })
        .collect();
    let scale = boxes
        .iter()
        .flat_map(|b| b.iter().map(|v| v.abs()))
        .fold(1.0f64, f64::max);
    let tol = 1e-9 * scale;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i][0].partial_cmp(&boxes[j][0]).unwrap_or(Ordering::Equal));

    let hits: Vec<Vec<(usize, Point)>> = (0..n)
        .into_par_iter()
        .map(|oi| {
            let i = order[oi];
            let bi = boxes[i];
            let mut out = Vec::new();
            for &j in &order[oi + 1..] {
                let bj = boxes[j];
                if bj[0] > bi[2] + tol {
                    break;
                }
                if bj[1] > bi[3] + tol || bi[1] > bj[3] + tol {
                    continue;
                }
                match segment_intersection(&segs[i].0, &segs[i].1, &segs[j].0, &segs[j].1) {
                    SegmentIntersection::None => {}
                    SegmentIntersection::Point(p) => {
                        out.push((i, p.clone()));
                        out.push((j, p));
                    }
                    SegmentIntersection::Overlap(p, q) => {
                        out.push((i, p.clone()));
                        out.push((i, q.clone()));
                        out.push((j, p));
                        out.push((j, q));
                    }
                }
            }
            out
        })
        .collect();
    let mut splits: Vec<Vec<Point>> = segs.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect();
    for (k, p) in hits.into_iter().flatten() {
        splits[k].push(p);
    }
    splits
}

/// Boundary cycles of the planar graph, each traversed with its face on
/// the left.
fn face_cycles(vertices: &[Point], pieces: &[(usize, usize)]) -> Vec<Vec<usize>> {
    // half-edge 2k: a -> b, 2k+1: b -> a
    let nh = pieces.len() * 2;
    let origin = |h: usize| if h % 2 == 0 { pieces[h / 2].0 } else { pieces[h / 2].1 };
    let target = |h: usize| if h % 2 == 0 { pieces[h / 2].1 } else { pieces[h / 2].0 };
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for h in 0..nh {
        outgoing[origin(h)].push(h);
    }
    let mut pos = vec![0usize; nh];
    for (v, out) in outgoing.iter_mut().enumerate() {
        let o = &vertices[v];
        out.sort_by(|&a, &b| cmp_angle(o, &vertices[target(a)], &vertices[target(b)]));
        for (i, &h) in out.iter().enumerate() {
            pos[h] = i;
        }
    }
    let next = |h: usize| {
        let twin = h ^ 1;
        let v = target(h);
        let out = &outgoing[v];
        let i = pos[twin];
        out[(i + out.len() - 1) % out.len()]
    };
    let mut seen = vec![false; nh];
    let mut cycles = Vec::new();
    for start in 0..nh {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cyc.push(origin(h));
            h = next(h);
        }
        cycles.push(cyc);
    }
    cycles
}

/// A point strictly inside the face bounded on the left by the first edge of
/// `ring`, rounded to a short dyadic when that keeps it in the face.
fn face_point(ring: &[Point], pieces: &[(&Point, &Point)]) -> Point {
    let a = &ring[0];
    let b = &ring[1];
    let m = a.midpoint(b);
    let nx = a.y() - b.y();
    let ny = b.x() - a.x();
    let through = m.offset(&nx, &ny);
    let (_, hit) = first_hit(&m, &through, pieces.iter().copied())
        .expect("a bounded face is closed on every side");
    let rep = m.midpoint(&hit);

    // clearance from rep to the nearest piece, in floating point
    let (rx, ry) = rep.approx();
    let mut clear = f64::INFINITY;
    for (p, q) in pieces {
        clear = clear.min(seg_dist(rx, ry, p.approx(), q.approx()));
    }
    if !(clear.is_finite() && clear > 0.0) {
        return rep;
    }
    let bits = (-(clear / 8.0).log2()).ceil().max(0.0) as u32;
    let rounded = Point::new(round_dyadic(rep.x(), bits), round_dyadic(rep.y(), bits));
    if rounded == rep {
        return rep;
    }
    let blocked = pieces.iter().any(|(p, q)| {
        segment_intersection(&rep, &rounded, p, q) != SegmentIntersection::None
    });
    if blocked {
        rep
    } else {
        rounded
    }
}

fn seg_dist(px: f64, py: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((px - a.0) * dx + (py - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (cx, cy) = (a.0 + t * dx - px, a.1 + t * dy - py);
    (cx * cx + cy * cy).sqrt()
}
