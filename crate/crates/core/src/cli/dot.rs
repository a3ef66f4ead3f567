//! Graphviz export of a witness subgraph.

use std::fmt::Write as _;

use crate::construction::{classify, witness_neighbors, Side, WitnessSpec};
use crate::error::Result;
use crate::hamming::{rank, RankSpace};

pub const DOT_GUARD: u64 = 1_000;

/// Members in rank order, labelled by digit string (coordinate 1 first) with
/// a `side` attribute; each edge written once, from its lower-ranked end.
pub fn witness_dot(w: &WitnessSpec) -> Result<String> {
    let p = w.params();
    let space = RankSpace::new(p, DOT_GUARD)?;
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut node_count = 0u64;
    let mut edge_count = 0u64;
    for r in 0..space.vertex_count() {
        let v = space.vertex(r);
        let label = classify(&v, w.partition(), p);
        if !w.contains_label(label) {
            continue;
        }
        node_count += 1;
        let name = v.digit_string(p.k());
        let shape = match label.side {
            Side::X => "box",
            Side::Y => "ellipse",
        };
        writeln!(nodes, "  \"{name}\" [side=\"{}\", shape={shape}];", label.side).unwrap();
        for u in witness_neighbors(&v, w)? {
            if rank(&u, p)?.0 > r {
                edge_count += 1;
                writeln!(edges, "  \"{name}\" -- \"{}\";", u.digit_string(p.k())).unwrap();
            }
        }
    }
    Ok(format!(
        "graph witness {{\n  // H({},{}) i1={} i2={} nodes={node_count} edges={edge_count}\n{nodes}{edges}}}\n",
        p.n(),
        p.k(),
        w.i1(),
        w.i2()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::HammingParams;
    use crate::partition::make_partition;

    #[test]
    fn h22_witness() {
        let w = WitnessSpec::new(HammingParams::new(2, 2).unwrap(), make_partition(2).unwrap(), 0, 1).unwrap();
        let dot = witness_dot(&w).unwrap();
        assert_eq!(
            dot,
            "graph witness {\n  // H(2,2) i1=0 i2=1 nodes=3 edges=2\n  \
\"00\" [side=\"X\", shape=box];\n  \
\"10\" [side=\"Y\", shape=ellipse];\n  \
\"01\" [side=\"Y\", shape=ellipse];\n  \
\"00\" -- \"10\";\n  \
\"00\" -- \"01\";\n}\n"
        );
    }

    #[test]
    fn diagonal_has_no_edges() {
        let w = WitnessSpec::new(HammingParams::new(4, 3).unwrap(), make_partition(4).unwrap(), 1, 1).unwrap();
        let dot = witness_dot(&w).unwrap();
        assert!(!dot.contains("--"));
        assert!(dot.contains("edges=0"));
    }

    #[test]
    fn guard() {
        let w = WitnessSpec::new(HammingParams::new(7, 3).unwrap(), make_partition(7).unwrap(), 0, 1).unwrap();
        assert!(witness_dot(&w).is_err());
    }
}
