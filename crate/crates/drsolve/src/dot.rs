//! Graphviz export of witness models: one node per point, one labeled edge
//! per related pair and direction.

use std::fmt::Write;

use drs_core::witness::{PointClass, WitnessModel};

pub fn witness_dot(model: &WitnessModel) -> String {
    let unit = model.unit();
    let mut out = String::from("graph witness {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (p, coords) in unit.points() {
        let names: Vec<&str> =
            coords.iter().map(|&c| unit.base()[c as usize].as_str()).collect();
        let class = match model.class(p) {
            PointClass::Root => " root".to_string(),
            PointClass::Created(d) => format!(" dir{d}"),
            PointClass::Bridge => " bridge".to_string(),
        };
        let _ = writeln!(
            out,
            "  p{p} [label=\"{p}: ({}) tag {}{}\"];",
            names.join(","),
            model.tag(p),
            class
        );
    }
    for i in 0..unit.n() {
        for (p, _) in unit.points() {
            for &q in unit.clique(i, p) {
                if q > p {
                    let _ = writeln!(out, "  p{p} -- p{q} [label=\"{i}\"];");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
