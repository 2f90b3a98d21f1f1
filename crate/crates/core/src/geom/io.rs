//! Plain-text polygon instances.
//!
//! ```text
//! # comment
//! outer 4
//! 0 0
//! 4 0
//! 4 4
//! 0 4
//! hole 3
//! 1 1
//! 2 3/2
//! 3 1
//! ```
//! The outer ring is counterclockwise, every hole clockwise. Optional
//! `guards <k>` and `witnesses <k>` sections list designated points.

use std::fmt::Write as _;

use super::point::Point;
use super::polygon::Polygon;
use super::GeomError;

/// A polygon together with optional designated guard and witness points.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub polygon: Polygon,
    pub guards: Vec<Point>,
    pub witnesses: Vec<Point>,
}

pub fn parse_polygon(text: &str) -> Result<Polygon, GeomError> {
    parse_instance(text).map(|i| i.polygon)
}

/// Parses rings plus optional `guards <k>` and `witnesses <k>` sections,
/// each followed by `k` points.
pub fn parse_instance(text: &str) -> Result<Instance, GeomError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut outer: Option<Vec<Point>> = None;
    let mut holes = Vec::new();
    let mut guards = Vec::new();
    let mut witnesses = Vec::new();
    while let Some((lineno, header)) = lines.next() {
        let err = |message: String| GeomError::Parse { line: lineno, message };
        let mut parts = header.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let count: usize = parts
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| err(format!("expected `<section> <k>`, found {header:?}")))?;
        if parts.next().is_some() {
            return Err(err("trailing tokens after section header".into()));
        }
        match kind {
            "outer" if outer.is_some() => return Err(err("duplicate outer ring".into())),
            "hole" if outer.is_none() => return Err(err("hole before outer ring".into())),
            "outer" | "hole" | "guards" | "witnesses" => {}
            _ => return Err(err(format!("unknown section {kind:?}"))),
        }
        let mut pts = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| err(format!("section declares {count} points but input ended")))?;
            let coords: Vec<&str> = line.split_whitespace().collect();
            let point = match coords.as_slice() {
                [x, y] => Point::parse(x, y),
                _ => None,
            }
            .ok_or_else(|| GeomError::Parse {
                line: ln,
                message: format!("expected `x y` with rational coordinates, found {line:?}"),
            })?;
            pts.push(point);
        }
        match kind {
            "outer" => outer = Some(pts),
            "hole" => holes.push(pts),
            "guards" => guards.extend(pts),
            _ => witnesses.extend(pts),
        }
    }
    let outer = outer.ok_or(GeomError::Parse {
        line: 0,
        message: "missing outer ring".into(),
    })?;
    Ok(Instance {
        polygon: Polygon::new(outer, holes)?,
        guards,
        witnesses,
    })
}

fn write_section(out: &mut String, kind: &str, pts: &[Point]) {
    let _ = writeln!(out, "{kind} {}", pts.len());
    for v in pts {
        let _ = writeln!(out, "{v}");
    }
}

pub fn write_polygon(p: &Polygon) -> String {
    let mut out = String::new();
    write_section(&mut out, "outer", p.outer());
    for hole in p.holes() {
        write_section(&mut out, "hole", hole);
    }
    out
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = write_polygon(&inst.polygon);
    if !inst.guards.is_empty() {
        write_section(&mut out, "guards", &inst.guards);
    }
    if !inst.witnesses.is_empty() {
        write_section(&mut out, "witnesses", &inst.witnesses);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_write() {
        let text = "# square with a hole\nouter 4\n0 0\n10 0\n10 10\n0 10\n\nhole 3\n2 2\n3 9/2 # apex\n4 2\n";
        let p = parse_polygon(text).unwrap();
        assert_eq!(p.holes().len(), 1);
        assert_eq!(p.holes()[0][1], Point::parse("3", "4.5").unwrap());
        let again = parse_polygon(&write_polygon(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_polygon("outer 3\n0 0\n1 x\n0 1\n").unwrap_err();
        assert!(matches!(err, GeomError::Parse { line: 3, .. }), "{err}");
        let err = parse_polygon("outer 4\n0 0\n1 0\n").unwrap_err();
        assert!(matches!(err, GeomError::Parse { .. }));
        let err = parse_polygon("hole 3\n0 0\n1 0\n0 1\n").unwrap_err();
        assert!(matches!(err, GeomError::Parse { line: 1, .. }));
        // valid syntax, invalid geometry
        let err = parse_polygon("outer 3\n0 0\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, GeomError::WrongOrientation { .. }));
        let err = parse_polygon("outer 3\n0 0\n1 0\n0 1\nfoo 1\n0 0\n").unwrap_err();
        assert!(matches!(err, GeomError::Parse { line: 5, .. }));
    }

    #[test]
    fn point_sections_round_trip() {
        let text = "outer 3\n0 0\n6 0\n0 6\nguards 1\n1 1\nwitnesses 2\n1/2 1/2\n2 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.guards, vec![Point::from_ints(1, 1)]);
        assert_eq!(inst.witnesses.len(), 2);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
        assert_eq!(parse_polygon(text).unwrap(), inst.polygon);
    }
}
