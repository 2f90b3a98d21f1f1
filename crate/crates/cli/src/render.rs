//! SVG drawings of a polygon with a (fractional) guard solution.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use gallery_core::engine::RunRecord;
use gallery_core::geom::{visibility_polygon, Point, Polygon};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// A guard to draw, with its value in [0, 1].
#[derive(Debug, Clone)]
pub struct Marker {
    pub at: Point,
    pub value: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub guards: Vec<Marker>,
    pub witnesses: Vec<Point>,
    /// Shade each guard's visibility region in proportion to its value.
    pub coverage: bool,
}

impl Scene {
    /// The scene of a run record: the fractional solution if there is one,
    /// otherwise the best binary guard set. Fails if the record does not
    /// belong to `poly`.
    pub fn from_record(rec: &RunRecord, poly: &Polygon) -> Result<Self> {
        if rec.vertices != poly.vertex_count() {
            bail!(
                "record was made for a polygon with {} vertices, instance has {}",
                rec.vertices,
                poly.vertex_count()
            );
        }
        let point = |[x, y]: &[String; 2]| -> Result<Point> {
            let p = Point::parse(x, y).ok_or_else(|| anyhow::anyhow!("bad coordinate pair {x:?} {y:?}"))?;
            if !poly.contains(&p) {
                bail!("record point ({x}, {y}) lies outside the instance");
            }
            Ok(p)
        };
        let guards = if rec.result.solution.is_empty() {
            rec.result
                .guards
                .iter()
                .map(|g| Ok(Marker { at: point(g)?, value: 1.0 }))
                .collect::<Result<_>>()?
        } else {
            rec.result
                .solution
                .iter()
                .map(|g| {
                    Ok(Marker {
                        at: point(&[g.x.clone(), g.y.clone()])?,
                        value: g.approx,
                    })
                })
                .collect::<Result<_>>()?
        };
        let witnesses = rec.result.witnesses.iter().map(point).collect::<Result<_>>()?;
        Ok(Scene { guards, witnesses, coverage: false })
    }
}

struct View {
    min: (f64, f64),
    scale: f64,
    height: f64,
}

impl View {
    fn new(poly: &Polygon) -> Self {
        let (lo, hi) = poly.bbox();
        let (lx, ly) = lo.approx();
        let (hx, hy) = hi.approx();
        let span = (hx - lx).max(hy - ly).max(f64::MIN_POSITIVE);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        View {
            min: (lx, ly),
            scale,
            height: (hy - ly) * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.approx();
        (
            MARGIN + (x - self.min.0) * self.scale,
            self.height - MARGIN - (y - self.min.1) * self.scale,
        )
    }

    fn path(&self, poly: &Polygon) -> String {
        let mut d = String::new();
        for ring in poly.rings() {
            for (i, p) in ring.iter().enumerate() {
                let (x, y) = self.map(p);
                let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
            }
            d.push_str("Z ");
        }
        d.trim_end().to_string()
    }
}

pub fn render_svg(poly: &Polygon, scene: &Scene) -> Result<String> {
    let view = View::new(poly);
    let r = 6.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h:.0}" viewBox="0 0 {WIDTH} {h:.2}">"#,
        h = view.height
    );
    let _ = writeln!(
        s,
        r##"<path class="polygon" d="{}" fill="#f4f1e8" stroke="#333" stroke-width="1.5" fill-rule="evenodd"/>"##,
        view.path(poly)
    );
    if scene.coverage {
        for g in scene.guards.iter().filter(|g| g.value > 0.0) {
            let vis = visibility_polygon(&g.at, poly)?;
            let _ = writeln!(
                s,
                r##"<path class="coverage" d="{}" fill="#3a7bd5" fill-opacity="{:.3}" stroke="none"/>"##,
                view.path(&vis.region),
                0.25 * g.value.min(1.0)
            );
        }
    }
    for w in &scene.witnesses {
        let (x, y) = view.map(w);
        let _ = writeln!(
            s,
            r##"<rect class="witness" x="{:.2}" y="{:.2}" width="4" height="4" fill="#c0392b"/>"##,
            x - 2.0,
            y - 2.0
        );
    }
    if !scene.guards.is_empty() {
        s.push_str("<defs>\n");
        for (i, g) in scene.guards.iter().enumerate() {
            let (x, y) = view.map(&g.at);
            let _ = writeln!(s, r#"<clipPath id="guard{i}"><circle cx="{x:.2}" cy="{y:.2}" r="{r}"/></clipPath>"#);
        }
        s.push_str("</defs>\n");
    }
    for (i, g) in scene.guards.iter().enumerate() {
        let (x, y) = view.map(&g.at);
        let v = g.value.clamp(0.0, 1.0);
        let fill_h = 2.0 * r * v;
        let _ = writeln!(
            s,
            r##"<g class="guard" data-value="{v:.6}"><rect x="{:.2}" y="{:.2}" width="{}" height="{fill_h:.2}" fill="#1d4e89" clip-path="url(#guard{i})"/><circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="none" stroke="#1d4e89" stroke-width="1.5"/></g>"##,
            x - r,
            y + r - fill_h,
            2.0 * r
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
