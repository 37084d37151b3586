//! Graphviz export of grafting trees. Every term node is drawn as an edge
//! from its upper vertex down to the vertex it hangs from, labeled `α_i`
//! for generator nodes, `pn_k` for projection leaves and `iotan` for
//! basepoint leaves, with the root vertex lowest.

use std::fmt::Write;

use crate::completion::{Tree, TreeTuple};

/// One digraph for a single tree.
pub fn tree_to_dot(tree: &Tree, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    out.push_str("  rankdir=TB;\n  node [shape=point];\n  v0;\n");
    let mut next = 1;
    draw(tree, 0, &mut next, &mut out);
    out.push_str("}\n");
    out
}

/// One digraph per component, named `<prefix>_<i>` with `i` counted from 1.
pub fn tuple_to_dot(tuple: &TreeTuple, prefix: &str) -> String {
    tuple
        .components
        .iter()
        .enumerate()
        .map(|(i, t)| tree_to_dot(t, &format!("{prefix}_{}", i + 1)))
        .collect()
}

/// The edge label of the root node of `tree`.
pub fn edge_label(tree: &Tree) -> String {
    match tree {
        Tree::Proj { arity, index } => format!("p{arity}_{index}"),
        Tree::Iota { arity } => format!("iota{arity}"),
        Tree::Node { op, component, .. } => format!("{op}_{component}"),
    }
}

fn draw(tree: &Tree, below: usize, next: &mut usize, out: &mut String) {
    let v = *next;
    *next += 1;
    let _ = writeln!(out, "  v{v};");
    let _ = writeln!(out, "  v{v} -> v{below} [label=\"{}\"];", edge_label(tree));
    if let Tree::Node { children, .. } = tree {
        for c in children {
            draw(c, v, next, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::phi;
    use crate::presentation::Presentation;

    fn counts(dot: &str) -> (usize, usize) {
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        let vertices = dot
            .lines()
            .filter(|l| l.trim_end().ends_with(';') && l.trim().starts_with('v') && !l.contains("->"))
            .count();
        (vertices, edges)
    }

    #[test]
    fn leaf_is_one_edge() {
        let dot = tree_to_dot(&Tree::proj(2, 1), "t");
        assert_eq!(counts(&dot), (2, 1));
        assert!(dot.contains("label=\"p2_1\""));
    }

    #[test]
    fn generator_tree_shape() {
        let p = Presentation::new("Magma", false).with_generator("mu", 2, 1).unwrap();
        let t = phi(&p, &p.parse_word(2, "mu").unwrap()).unwrap();
        let dot = tuple_to_dot(&t, "phi");
        assert_eq!(counts(&dot), (4, 3));
        assert!(dot.contains("v1 -> v0 [label=\"mu_1\"]"));
        assert!(dot.contains("v2 -> v1 [label=\"p2_1\"]"));
        assert!(dot.contains("v3 -> v1 [label=\"p2_2\"]"));
    }

    #[test]
    fn tuple_gives_one_graph_per_component() {
        let t = TreeTuple::new(3, vec![Tree::proj(3, 1), Tree::proj(3, 3), Tree::iota(3)]);
        let dot = tuple_to_dot(&t, "x");
        assert_eq!(dot.matches("digraph").count(), 3);
        assert!(dot.contains("iota3"));
    }
}
