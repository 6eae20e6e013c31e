//! DOT export for quick visual inspection. Output is deterministic: ids
//! ascend and edge lists follow their stored order.

use std::fmt::Write;

use crate::absprop::{AbstractProp, LeafSet};
use crate::boolean::{Edge, Linking};
use crate::morphism::Morphism;

fn set_text(s: LeafSet) -> String {
    let ids: Vec<String> = s.ids().map(|i| i.to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

fn resolutions_text(p: &AbstractProp) -> String {
    let sets: Vec<String> = p.resolutions().iter().map(|&r| set_text(r)).collect();
    sets.join(" ")
}

fn leaf_nodes(out: &mut String, p: &AbstractProp, prefix: &str) {
    for (i, leaf) in p.leaves().iter().enumerate() {
        let _ = writeln!(out, "    {prefix}{i} [label=\"{i}: {leaf}\"];");
    }
}

/// One node per leaf; the resolutions go into the graph label.
pub fn prop_to_dot(p: &AbstractProp) -> String {
    let mut out = String::new();
    out.push_str("graph prop {\n");
    let _ = writeln!(out, "  label=\"resolutions: {}\";\n", resolutions_text(p));
    for (i, leaf) in p.leaves().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{i}: {leaf}\"];");
    }
    out.push_str("}\n");
    out
}

/// Source leaves in one cluster, target leaves in another, one arrow per
/// related pair.
pub fn morphism_to_dot(m: &Morphism) -> String {
    let mut out = String::new();
    out.push_str("digraph morphism {\n  rankdir=TB;\n");
    out.push_str("  subgraph cluster_source {\n");
    let _ = writeln!(
        out,
        "    label=\"source, resolutions: {}\";",
        resolutions_text(m.source())
    );
    leaf_nodes(&mut out, m.source(), "s");
    out.push_str("  }\n");
    out.push_str("  subgraph cluster_target {\n");
    let _ = writeln!(
        out,
        "    label=\"target, resolutions: {}\";",
        resolutions_text(m.target())
    );
    leaf_nodes(&mut out, m.target(), "t");
    out.push_str("  }\n");
    for &(x, y) in m.pairs() {
        let _ = writeln!(out, "  s{x} -> t{y};");
    }
    out.push_str("}\n");
    out
}

/// Like a morphism, but undirected and with the intra edges drawn inside
/// their own cluster.
pub fn linking_to_dot(l: &Linking) -> String {
    let mut out = String::new();
    out.push_str("graph linking {\n");
    out.push_str("  subgraph cluster_source {\n");
    let _ = writeln!(
        out,
        "    label=\"source, resolutions: {}\";",
        resolutions_text(l.source())
    );
    leaf_nodes(&mut out, l.source(), "s");
    out.push_str("  }\n");
    out.push_str("  subgraph cluster_target {\n");
    let _ = writeln!(
        out,
        "    label=\"target, resolutions: {}\";",
        resolutions_text(l.target())
    );
    leaf_nodes(&mut out, l.target(), "t");
    out.push_str("  }\n");
    for e in l.edges() {
        let _ = match *e {
            Edge::Cross(i, j) => writeln!(out, "  s{i} -- t{j};"),
            Edge::SourceDual(i, j) => writeln!(out, "  s{i} -- s{j};"),
            Edge::TargetDual(i, j) => writeln!(out, "  t{i} -- t{j};"),
        };
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absprop::compile;
    use crate::formula::Formula;

    fn prop(text: &str) -> AbstractProp {
        compile(&Formula::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn prop_dot_golden() {
        assert_eq!(
            prop_to_dot(&prop("p&q")),
            "graph prop {\n  label=\"resolutions: {0} {1}\";\n\n  n0 [label=\"0: p\"];\n  n1 [label=\"1: q\"];\n}\n"
        );
    }

    #[test]
    fn morphism_dot_mentions_every_pair() {
        let m = Morphism::new(
            prop("p"),
            prop("p|p"),
            [(0, 0), (0, 1)].into_iter().collect(),
        )
        .unwrap();
        let dot = morphism_to_dot(&m);
        assert!(dot.contains("s0 -> t0;"));
        assert!(dot.contains("s0 -> t1;"));
        assert!(dot.contains("cluster_source"));
    }

    #[test]
    fn linking_dot_draws_intra_edges() {
        let l = Linking::new(
            prop("p|~p"),
            prop("p|~p"),
            [crate::boolean::Edge::SourceDual(0, 1)].into_iter().collect(),
        )
        .unwrap();
        let dot = linking_to_dot(&l);
        assert!(dot.contains("s0 -- s1;"));
    }
}
