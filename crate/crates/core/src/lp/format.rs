//! Text dump in the common LP interchange format.

use std::fmt::Write as _;

use super::{LpModel, RowKind};

/// Writes `model` in LP format. With `binary`, variables are declared binary
/// instead of bounded.
pub fn write_lp(model: &LpModel, binary: bool) -> String {
    let name = |p: usize| format!("g{}", model.column_ids()[p]);
    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    if model.num_columns() == 0 {
        out.push_str(" 0");
    }
    for (i, _) in model.column_ids().iter().enumerate() {
        let _ = write!(out, "{} {}", if i == 0 { "" } else { " +" }, name(i));
    }
    out.push_str("\nSubject To\n");
    for r in model.rows() {
        let prefix = match r.kind {
            RowKind::Witness => "w",
            RowKind::ScCut => "sc",
            RowKind::EcCut => "ec",
        };
        let _ = write!(out, " {prefix}{}:", r.id);
        if r.coefs.is_empty() {
            out.push_str(" 0 g0");
        }
        for (i, &(p, c)) in r.coefs.iter().enumerate() {
            let sep = if i == 0 { "" } else { " +" };
            if c == 1 {
                let _ = write!(out, "{sep} {}", name(p));
            } else {
                let _ = write!(out, "{sep} {c} {}", name(p));
            }
        }
        let _ = writeln!(out, " >= {}", r.rhs);
    }
    if binary {
        out.push_str("Binary\n");
        for i in 0..model.num_columns() {
            let _ = writeln!(out, " {}", name(i));
        }
    } else {
        out.push_str("Bounds\n");
        for i in 0..model.num_columns() {
            let _ = writeln!(out, " 0 <= {} <= 1", name(i));
        }
    }
    out.push_str("End\n");
    out
}
