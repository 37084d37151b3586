//! Oracles shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use semitheory::completion::Tree;
use semitheory::Presentation;

/// Binary bracketings over the variables `x1, x2` with exactly `t`
/// operations, built as strings without touching the tree type.
pub fn bracketings(t: usize) -> Vec<String> {
    if t == 0 {
        return vec!["x1".into(), "x2".into()];
    }
    let mut out = Vec::new();
    for left in 0..t {
        for l in bracketings(left) {
            for r in bracketings(t - 1 - left) {
                out.push(format!("m({l},{r})"));
            }
        }
    }
    out
}

pub fn count_nodes(t: &Tree, name: &str) -> usize {
    match t {
        Tree::Node { op, children, .. } => {
            usize::from(&**op == name) + children.iter().map(|c| count_nodes(c, name)).sum::<usize>()
        }
        _ => 0,
    }
}

/// Applies one random relation move to a pointed tree: an `iota` leaf is
/// expanded into a generator node over `iota` leaves, or a subtree whose
/// leaves are all `iota` is collapsed back to one. Trees without `iota`
/// admit no move and are returned unchanged.
pub fn relation_move(p: &Presentation, t: &Tree, rng: &mut ChaCha8Rng) -> Tree {
    let mut applicable = Vec::new();
    let mut counter = 0;
    collect_applicable(t, &mut counter, &mut applicable);
    if applicable.is_empty() {
        return t.clone();
    }
    let target = applicable[rng.gen_range(0..applicable.len())];
    let mut counter = 0;
    rewrite(p, t, target, &mut counter, rng)
}

/// Preorder positions holding an `iota` leaf or an all-`iota` node.
fn collect_applicable(t: &Tree, counter: &mut usize, out: &mut Vec<usize>) {
    if t.is_all_iota() {
        out.push(*counter);
    }
    *counter += 1;
    if let Tree::Node { children, .. } = t {
        for c in children {
            collect_applicable(c, counter, out);
        }
    }
}

fn rewrite(p: &Presentation, t: &Tree, target: usize, counter: &mut usize, rng: &mut ChaCha8Rng) -> Tree {
    let here = *counter;
    *counter += 1;
    if here == target {
        let n = t.source_arity();
        return match t {
            Tree::Iota { .. } => {
                let gens: Vec<_> = p.generators().collect();
                let g = gens[rng.gen_range(0..gens.len())];
                Tree::node(&g.name, rng.gen_range(1..=g.codomain), vec![Tree::iota(n); g.domain])
            }
            _ => Tree::iota(n),
        };
    }
    match t {
        Tree::Node {
            op,
            component,
            children,
        } => Tree::node(
            op,
            *component,
            children.iter().map(|c| rewrite(p, c, target, counter, rng)).collect(),
        ),
        leaf => leaf.clone(),
    }
}
