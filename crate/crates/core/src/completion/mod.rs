//! The completion of a free semi-theory to an algebraic theory.
//!
//! A morphism `[n] -> [1]` is a grafting tree (a term over the generators)
//! whose leaves are projections `p(n,k)`, or in pointed mode `iota(n)`. A
//! morphism `[n] -> [m]` is an `m`-tuple of such trees and composition
//! substitutes the `i`-th tree for every `p(m,i)` leaf.
//!
//! Pointed trees are kept in canonical form: every subterm whose leaves are
//! all `iota` is collapsed to a single `iota` leaf. Unpointed trees never
//! contain `iota`, so the same composition code serves both modes.

mod axioms;
mod random;
mod syntax;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presentation::{GeneratorDecl, Letter, Presentation, Word};

pub use axioms::{check_category_laws, check_theory_axioms, check_theory_axioms_with, AxiomBounds};
pub use random::{random_tree, random_tuple};
pub use syntax::{parse_tree, parse_tuple};

/// A labeled grafting tree. `Node { op: α, component: i, .. }` is the edge
/// labeled `α_i` with one child per input of `α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Proj {
        arity: usize,
        index: usize,
    },
    Iota {
        arity: usize,
    },
    Node {
        op: Arc<str>,
        component: usize,
        children: Vec<Tree>,
    },
}

impl Tree {
    pub fn proj(arity: usize, index: usize) -> Tree {
        Tree::Proj { arity, index }
    }

    pub fn iota(arity: usize) -> Tree {
        Tree::Iota { arity }
    }

    pub fn node(op: &str, component: usize, children: Vec<Tree>) -> Tree {
        Tree::Node {
            op: Arc::from(op),
            component,
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Tree::Node { .. })
    }

    /// Arity of the leaves (every well-formed tree has at least one leaf).
    pub fn source_arity(&self) -> usize {
        match self {
            Tree::Proj { arity, .. } | Tree::Iota { arity } => *arity,
            Tree::Node { children, .. } => children[0].source_arity(),
        }
    }

    /// Number of term nodes, counting leaves.
    pub fn size(&self) -> usize {
        match self {
            Tree::Node { children, .. } => 1 + children.iter().map(Tree::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Edges on the longest directed path; a leaf is a single edge.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Node { children, .. } => 1 + children.iter().map(Tree::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn is_all_iota(&self) -> bool {
        match self {
            Tree::Iota { .. } => true,
            Tree::Proj { .. } => false,
            Tree::Node { children, .. } => children.iter().all(Tree::is_all_iota),
        }
    }

    pub fn contains_iota(&self) -> bool {
        match self {
            Tree::Iota { .. } => true,
            Tree::Proj { .. } => false,
            Tree::Node { children, .. } => children.iter().any(Tree::contains_iota),
        }
    }

    /// Bottom-up collapse of all-`iota` subterms.
    pub(crate) fn collapse_iota(&self) -> Tree {
        match self {
            Tree::Node {
                op,
                component,
                children,
            } => {
                let children: Vec<Tree> = children.iter().map(Tree::collapse_iota).collect();
                if children.iter().all(|c| matches!(c, Tree::Iota { .. })) {
                    Tree::Iota {
                        arity: children[0].source_arity(),
                    }
                } else {
                    Tree::Node {
                        op: op.clone(),
                        component: *component,
                        children,
                    }
                }
            }
            leaf => leaf.clone(),
        }
    }

    /// Grafts `args[i-1]` in place of every `p(_,i)` leaf and relabels
    /// `iota` leaves to `iota(source)`, collapsing as it goes.
    pub(crate) fn substitute(&self, args: &[Tree], source: usize) -> Tree {
        match self {
            Tree::Proj { index, .. } => args[index - 1].clone(),
            Tree::Iota { .. } => Tree::Iota { arity: source },
            Tree::Node {
                op,
                component,
                children,
            } => {
                let children: Vec<Tree> = children.iter().map(|c| c.substitute(args, source)).collect();
                if children.iter().all(|c| matches!(c, Tree::Iota { .. })) {
                    Tree::Iota { arity: source }
                } else {
                    Tree::Node {
                        op: op.clone(),
                        component: *component,
                        children,
                    }
                }
            }
        }
    }

    /// Checks the tree against a presentation and returns its source arity.
    pub fn validate(&self, p: &Presentation) -> Result<usize> {
        let arity = self.source_arity();
        self.validate_inner(p, arity)?;
        if p.is_pointed() && self.collapse_iota() != *self {
            return Err(Error::MalformedTerm(format!("{self} is not in canonical pointed form")));
        }
        Ok(arity)
    }

    fn validate_inner(&self, p: &Presentation, arity: usize) -> Result<()> {
        match self {
            Tree::Proj { arity: a, index } => {
                if *a != arity {
                    return Err(Error::MalformedTerm(format!("leaf {self} in a tree over [{arity}]")));
                }
                if *index == 0 || index > a {
                    return Err(Error::MalformedTerm(format!("invalid projection {self}")));
                }
            }
            Tree::Iota { arity: a } => {
                if !p.is_pointed() {
                    return Err(Error::NotPointed);
                }
                if *a != arity {
                    return Err(Error::MalformedTerm(format!("leaf {self} in a tree over [{arity}]")));
                }
            }
            Tree::Node {
                op,
                component,
                children,
            } => {
                let g = p.generator(op).ok_or_else(|| Error::UnknownGenerator(op.to_string()))?;
                if children.len() != g.domain {
                    return Err(Error::MalformedTerm(format!(
                        "`{op}` takes {} inputs, found {}",
                        g.domain,
                        children.len()
                    )));
                }
                if *component == 0 || *component > g.codomain {
                    return Err(Error::MalformedTerm(format!(
                        "`{op}` has {} outputs, component {component} requested",
                        g.codomain
                    )));
                }
                for c in children {
                    c.validate_inner(p, arity)?;
                }
            }
        }
        Ok(())
    }
}

/// A morphism `[domain] -> [components.len()]` of the completion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeTuple {
    pub domain: usize,
    pub components: Vec<Tree>,
}

impl TreeTuple {
    pub fn new(domain: usize, components: Vec<Tree>) -> Self {
        TreeTuple { domain, components }
    }

    pub fn single(tree: Tree) -> Self {
        TreeTuple {
            domain: tree.source_arity(),
            components: vec![tree],
        }
    }

    pub fn codomain(&self) -> usize {
        self.components.len()
    }

    /// Sum of the component sizes.
    pub fn size(&self) -> usize {
        self.components.iter().map(Tree::size).sum()
    }

    pub fn depth(&self) -> usize {
        self.components.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Every component has source arity equal to the domain.
    pub fn is_well_typed(&self) -> bool {
        fn leaves_ok(t: &Tree, n: usize) -> bool {
            match t {
                Tree::Proj { arity, index } => *arity == n && *index >= 1 && index <= arity,
                Tree::Iota { arity } => *arity == n,
                Tree::Node { children, .. } => !children.is_empty() && children.iter().all(|c| leaves_ok(c, n)),
            }
        }
        self.components.iter().all(|c| leaves_ok(c, self.domain))
    }

    pub fn validate(&self, p: &Presentation) -> Result<()> {
        p.check_object(self.domain)?;
        for c in &self.components {
            let arity = c.validate(p)?;
            if arity != self.domain {
                return Err(Error::ObjectMismatch {
                    expected: self.domain,
                    found: arity,
                });
            }
        }
        Ok(())
    }
}

/// Composition in the completion, abstracted so that verification sweeps can
/// be run against deliberately broken variants.
pub trait Graft {
    /// `s ∘ t` for `s: [m] -> [k]`, `t: [n] -> [m]`.
    fn graft(&self, s: &TreeTuple, t: &TreeTuple) -> Result<TreeTuple>;
}

/// Grafting composition as defined for the completion.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grafting;

impl Graft for Grafting {
    fn graft(&self, s: &TreeTuple, t: &TreeTuple) -> Result<TreeTuple> {
        compose_trees(s, t)
    }
}

/// `s ∘ t`: grafts the components of `t` into the projection leaves of each
/// component of `s`.
pub fn compose_trees(s: &TreeTuple, t: &TreeTuple) -> Result<TreeTuple> {
    if s.domain != t.codomain() {
        return Err(Error::ObjectMismatch {
            expected: s.domain,
            found: t.codomain(),
        });
    }
    Ok(TreeTuple {
        domain: t.domain,
        components: s
            .components
            .iter()
            .map(|c| c.substitute(&t.components, t.domain))
            .collect(),
    })
}

/// `(p(n,1), ..., p(n,n))`; the empty tuple for `n = 0`.
pub fn identity_tuple(n: usize) -> TreeTuple {
    TreeTuple {
        domain: n,
        components: (1..=n).map(|k| Tree::proj(n, k)).collect(),
    }
}

/// The tuple `(T_{α_1}, ..., T_{α_k})` for a generator `α: [m] -> [k]`.
pub fn generator_tuple(g: &GeneratorDecl) -> TreeTuple {
    let leaves: Vec<Tree> = (1..=g.domain).map(|i| Tree::proj(g.domain, i)).collect();
    TreeTuple {
        domain: g.domain,
        components: (1..=g.codomain)
            .map(|j| Tree::node(&g.name, j, leaves.clone()))
            .collect(),
    }
}

fn letter_image(p: &Presentation, letter: &Letter) -> Result<TreeTuple> {
    Ok(match letter {
        Letter::Proj { arity, index } => TreeTuple::new(*arity, vec![Tree::proj(*arity, *index)]),
        Letter::Gen(g) => {
            match p.generator(&g.name) {
                Some(decl) if decl == g => {}
                _ => return Err(Error::UnknownGenerator(g.name.clone())),
            }
            generator_tuple(g)
        }
        Letter::Iota(n) => TreeTuple::new(*n, vec![Tree::iota(*n)]),
        Letter::ToZero(n) => TreeTuple::new(*n, Vec::new()),
        Letter::FromZero(m) => TreeTuple::new(0, vec![Tree::iota(0); *m]),
    })
}

/// The completion functor on words.
pub fn phi(p: &Presentation, w: &Word) -> Result<TreeTuple> {
    if !p.is_pointed() && (w.domain == 0 || w.codomain == 0) {
        return Err(Error::InvalidObject(0, "unpointed"));
    }
    let mut acc = identity_tuple(w.domain);
    for letter in w.letters() {
        if !p.is_pointed() && matches!(letter, Letter::Iota(_) | Letter::ToZero(_) | Letter::FromZero(_)) {
            return Err(Error::NotPointed);
        }
        acc = compose_trees(&letter_image(p, letter)?, &acc)?;
    }
    Ok(acc)
}

/// Action of a word on a tuple: `Φ(w) ∘ t`, computed letter by letter.
pub fn act(p: &Presentation, w: &Word, t: &TreeTuple) -> Result<TreeTuple> {
    act_with(&Grafting, p, w, t)
}

pub fn act_with(graft: &dyn Graft, p: &Presentation, w: &Word, t: &TreeTuple) -> Result<TreeTuple> {
    if w.domain != t.codomain() {
        return Err(Error::ObjectMismatch {
            expected: w.domain,
            found: t.codomain(),
        });
    }
    let mut acc = t.clone();
    for letter in w.letters() {
        acc = graft.graft(&letter_image(p, letter)?, &acc)?;
    }
    Ok(acc)
}

/// Canonical representative of a pointed tree.
pub fn canonicalize_pointed(p: &Presentation, t: &Tree) -> Result<Tree> {
    if !p.is_pointed() {
        return Err(Error::NotPointed);
    }
    Ok(t.collapse_iota())
}

/// Trees of source arity `n` bucketed by size, `buckets[s]` holding the
/// trees with exactly `s` nodes (pointed: canonical ones only).
pub(crate) fn trees_by_size(p: &Presentation, n: usize, max_nodes: usize) -> Vec<Vec<Tree>> {
    let mut buckets: Vec<Vec<Tree>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes == 0 {
        return buckets;
    }
    buckets[1] = (1..=n).map(|k| Tree::proj(n, k)).collect();
    if p.is_pointed() {
        buckets[1].push(Tree::iota(n));
    }
    let gens: Vec<&GeneratorDecl> = p.generators().collect();
    for size in 2..=max_nodes {
        let mut out = Vec::new();
        for g in &gens {
            if g.domain > size - 1 {
                continue;
            }
            let mut children_sets = Vec::new();
            child_tuples(&buckets, g.domain, size - 1, &mut Vec::new(), &mut children_sets);
            for children in children_sets {
                if p.is_pointed() && children.iter().all(|c| matches!(c, Tree::Iota { .. })) {
                    continue;
                }
                for j in 1..=g.codomain {
                    out.push(Tree::node(&g.name, j, children.clone()));
                }
            }
        }
        buckets[size] = out;
    }
    buckets
}

/// All sequences of `count` trees from `buckets` with sizes summing to `budget`.
fn child_tuples(buckets: &[Vec<Tree>], count: usize, budget: usize, prefix: &mut Vec<Tree>, out: &mut Vec<Vec<Tree>>) {
    if count == 0 {
        if budget == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // every remaining child needs at least one node
    for s in 1..=budget.saturating_sub(count - 1) {
        for t in &buckets[s] {
            prefix.push(t.clone());
            child_tuples(buckets, count - 1, budget - s, prefix, out);
            prefix.pop();
        }
    }
}

/// All trees `[n] -> [1]` with at most `max_nodes` nodes, canonically ordered.
pub fn enumerate_trees(p: &Presentation, n: usize, max_nodes: usize) -> Result<Vec<Tree>> {
    p.check_object(n)?;
    let mut all: Vec<Tree> = trees_by_size(p, n, max_nodes).into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// All tuples `[n] -> [m]` whose total size is at most `max_total`,
/// canonically ordered.
pub fn enumerate_tuples(p: &Presentation, n: usize, m: usize, max_total: usize) -> Result<Vec<TreeTuple>> {
    p.check_object(n)?;
    if m == 0 {
        return Ok(vec![TreeTuple::new(n, Vec::new())]);
    }
    let buckets = trees_by_size(p, n, max_total);
    let mut out = Vec::new();
    for total in m..=max_total {
        let mut sets = Vec::new();
        child_tuples(&buckets, m, total, &mut Vec::new(), &mut sets);
        out.extend(sets.into_iter().map(|c| TreeTuple::new(n, c)));
    }
    out.sort();
    Ok(out)
}

/// Collects the distinct trees of a set of tuples.
pub fn components_of<'a>(tuples: impl IntoIterator<Item = &'a TreeTuple>) -> BTreeSet<Tree> {
    tuples.into_iter().flat_map(|t| t.components.iter().cloned()).collect()
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Proj { arity, index } => write!(f, "p{arity}_{index}"),
            Tree::Iota { arity } => write!(f, "iota{arity}"),
            Tree::Node {
                op,
                component,
                children,
            } => {
                write!(f, "{op}_{component}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for TreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
