//! The two filtrations of `D̄_n = Hom([n], -)` in the completion of a free
//! unpointed semi-theory `D`, and bounded checks of the facts about them.
//!
//! `D̄^0` is the image of `Hom_D([n], -)`. `sD̄^{k+1}` consists of all tuples
//! of members of `D̄^k[1]` (the smallest subdiagram closed under
//! projections), and `D̄^{k+1}` is the closure of `sD̄^{k+1}` under the
//! action of `D`.
//!
//! Every level is computed by generative closure restricted to tuples with
//! at most `max_nodes` nodes in total. The moves are: project, apply a
//! generator, and apply a generator followed by one of its projections.
//! None of them shrinks a tuple except a projection, and a projection only
//! ever follows a generator, so the bounded closure is exactly the set of
//! members within the bound as long as `max_object` covers every generator
//! arity.

mod lemmas;
mod pullback;

use std::collections::{BTreeMap, BTreeSet};

use crate::completion::{identity_tuple, Tree, TreeTuple};
use crate::error::{Error, Result};
use crate::presentation::{Letter, Presentation, Word};

pub use lemmas::{check_l1, check_l1_with, check_l2, check_l3, check_l4, factorizations, Factorization};
pub use pullback::{check_pullback, extend_p_map, restrict_d_map, solve_d_maps, DMaps, PMap};

/// Bounds shared by filtration construction and the lemma sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiltrationBounds {
    pub max_nodes: usize,
    pub max_word_len: usize,
    /// Lemma sweeps cover the levels `k <= max_level`.
    pub max_level: usize,
    /// Largest codomain kept; `None` means the larger of `n` and the
    /// largest generator arity.
    pub max_object: Option<usize>,
}

impl FiltrationBounds {
    pub fn new(max_nodes: usize, max_word_len: usize) -> Self {
        FiltrationBounds {
            max_nodes,
            max_word_len,
            max_level: 1,
            max_object: None,
        }
    }

    pub fn object_bound(&self, p: &Presentation, n: usize) -> usize {
        self.max_object.unwrap_or(n.max(p.max_arity()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelKind {
    /// Closed under the action of `D` (`D̄^k`).
    DClosed,
    /// Closed under projections only (`sD̄^k`).
    PClosed,
}

/// One level of a filtration: its bounded members grouped by codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationLevel {
    pub n: usize,
    pub k: usize,
    pub kind: LevelKind,
    members: BTreeMap<usize, BTreeSet<TreeTuple>>,
}

impl FiltrationLevel {
    fn from_set(n: usize, k: usize, kind: LevelKind, set: BTreeSet<TreeTuple>) -> Self {
        let mut members: BTreeMap<usize, BTreeSet<TreeTuple>> = BTreeMap::new();
        for t in set {
            members.entry(t.codomain()).or_default().insert(t);
        }
        FiltrationLevel { n, k, kind, members }
    }

    pub fn contains(&self, t: &TreeTuple) -> bool {
        self.members.get(&t.codomain()).is_some_and(|s| s.contains(t))
    }

    pub fn contains_tree(&self, t: &Tree) -> bool {
        self.members
            .get(&1)
            .is_some_and(|s| s.contains(&TreeTuple::new(self.n, vec![t.clone()])))
    }

    /// Members with codomain `m`.
    pub fn at(&self, m: usize) -> impl Iterator<Item = &TreeTuple> {
        self.members.get(&m).into_iter().flatten()
    }

    /// The trees of `level[1]`.
    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.at(1).map(|t| &t.components[0])
    }

    pub fn iter(&self) -> impl Iterator<Item = &TreeTuple> {
        self.members.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.members.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &FiltrationLevel) -> bool {
        self.iter().all(|t| other.contains(t))
    }
}

/// `D̄^0 ⊆ sD̄^1 ⊆ D̄^1 ⊆ ... ⊆ sD̄^{k_max} ⊆ D̄^{k_max}` within bounds.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub n: usize,
    pub max_nodes: usize,
    pub max_object: usize,
    d: Vec<FiltrationLevel>,
    s: Vec<FiltrationLevel>,
}

impl Filtration {
    pub fn k_max(&self) -> usize {
        self.d.len() - 1
    }

    /// `D̄^k`.
    pub fn d(&self, k: usize) -> &FiltrationLevel {
        &self.d[k]
    }

    /// `sD̄^k`; level 0 coincides with `D̄^0`.
    pub fn s(&self, k: usize) -> &FiltrationLevel {
        &self.s[k]
    }
}

/// A single step of the `D`-action: the letters applied and the result.
pub(crate) struct Move {
    pub letters: Vec<Letter>,
    pub result: TreeTuple,
}

/// Generator moves on `t`: `α(t)` when its codomain is at most
/// `max_object`, and `p_j ∘ α (t)` for `α` with more than one output.
/// Standalone projections are left to the caller.
pub(crate) fn generator_moves(p: &Presentation, t: &TreeTuple, max_object: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for g in p.generators().filter(|g| g.domain == t.codomain()) {
        if g.codomain <= max_object {
            out.push(Move {
                letters: vec![Letter::Gen(g.clone())],
                result: TreeTuple::new(
                    t.domain,
                    (1..=g.codomain)
                        .map(|j| Tree::node(&g.name, j, t.components.clone()))
                        .collect(),
                ),
            });
        }
        if g.codomain > 1 {
            for j in 1..=g.codomain {
                out.push(Move {
                    letters: vec![
                        Letter::Gen(g.clone()),
                        Letter::Proj {
                            arity: g.codomain,
                            index: j,
                        },
                    ],
                    result: TreeTuple::new(t.domain, vec![Tree::node(&g.name, j, t.components.clone())]),
                });
            }
        }
    }
    out
}

pub(crate) fn projection_moves(t: &TreeTuple) -> Vec<Move> {
    let m = t.codomain();
    if m < 2 {
        return Vec::new();
    }
    (1..=m)
        .map(|i| Move {
            letters: vec![Letter::Proj { arity: m, index: i }],
            result: TreeTuple::new(t.domain, vec![t.components[i - 1].clone()]),
        })
        .collect()
}

pub(crate) fn word_of(domain: usize, codomain: usize, letters: Vec<Letter>) -> Word {
    Word::from_letters(domain, codomain, letters, false)
}

/// Closure of `seeds` under the `D`-action, within the bounds.
fn d_closure(p: &Presentation, seeds: BTreeSet<TreeTuple>, max_nodes: usize, max_object: usize) -> BTreeSet<TreeTuple> {
    let mut seen = seeds;
    let mut frontier: Vec<TreeTuple> = seen.iter().cloned().collect();
    while let Some(t) = frontier.pop() {
        let moves = generator_moves(p, &t, max_object)
            .into_iter()
            .chain(projection_moves(&t));
        for mv in moves {
            if mv.result.size() <= max_nodes && !seen.contains(&mv.result) {
                seen.insert(mv.result.clone());
                frontier.push(mv.result);
            }
        }
    }
    seen
}

/// All tuples of at most `max_object` members of `trees` with total size
/// at most `max_nodes`.
fn tuples_of(n: usize, trees: &[Tree], max_nodes: usize, max_object: usize) -> BTreeSet<TreeTuple> {
    let mut out = BTreeSet::new();
    fn go(n: usize, trees: &[Tree], budget: usize, left: usize, prefix: &mut Vec<Tree>, out: &mut BTreeSet<TreeTuple>) {
        if !prefix.is_empty() {
            out.insert(TreeTuple::new(n, prefix.clone()));
        }
        if left == 0 {
            return;
        }
        for t in trees {
            let s = t.size();
            if s <= budget {
                prefix.push(t.clone());
                go(n, trees, budget - s, left - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    go(n, trees, max_nodes, max_object, &mut Vec::new(), &mut out);
    out
}

/// Builds `D̄^k` and `sD̄^k` for `k <= k_max` from `[n]`.
pub fn generate_filtration(p: &Presentation, n: usize, k_max: usize, bounds: FiltrationBounds) -> Result<Filtration> {
    if p.is_pointed() {
        return Err(Error::Pointed);
    }
    p.check_object(n)?;
    if bounds.max_nodes < n {
        return Err(Error::BoundExceeded(format!(
            "max_nodes = {} leaves level 0 of [{n}] empty",
            bounds.max_nodes
        )));
    }
    let max_object = bounds.object_bound(p, n);
    let base = d_closure(p, BTreeSet::from([identity_tuple(n)]), bounds.max_nodes, max_object);
    // keep only codomains within range (the identity itself may exceed it)
    let base: BTreeSet<TreeTuple> = base.into_iter().filter(|t| t.codomain() <= max_object).collect();
    let level0 = FiltrationLevel::from_set(n, 0, LevelKind::DClosed, base);
    let mut d = vec![level0.clone()];
    let mut s = vec![FiltrationLevel {
        kind: LevelKind::PClosed,
        ..level0
    }];
    for k in 1..=k_max {
        let trees: Vec<Tree> = d[k - 1].trees().cloned().collect();
        let seeds = tuples_of(n, &trees, bounds.max_nodes, max_object);
        s.push(FiltrationLevel::from_set(n, k, LevelKind::PClosed, seeds.clone()));
        let closed = d_closure(p, seeds, bounds.max_nodes, max_object);
        d.push(FiltrationLevel::from_set(n, k, LevelKind::DClosed, closed));
    }
    Ok(Filtration {
        n,
        max_nodes: bounds.max_nodes,
        max_object,
        d,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::parse_tree;

    fn magma() -> Presentation {
        Presentation::new("Magma", false).with_generator("mu", 2, 1).unwrap()
    }

    #[test]
    fn level_zero_of_magma() {
        let f = generate_filtration(&magma(), 2, 0, FiltrationBounds::new(7, 4)).unwrap();
        let trees: BTreeSet<Tree> = f.d(0).trees().cloned().collect();
        let expected: BTreeSet<Tree> = ["p2_1", "p2_2", "mu_1(p2_1,p2_2)"]
            .iter()
            .map(|t| parse_tree(t).unwrap())
            .collect();
        assert_eq!(trees, expected);
        assert_eq!(f.k_max(), 0);
        assert_eq!(f.s(0).len(), f.d(0).len());
    }

    #[test]
    fn nested_product_appears_at_level_one() {
        let f = generate_filtration(&magma(), 2, 1, FiltrationBounds::new(7, 4)).unwrap();
        let t = parse_tree("mu_1(mu_1(p2_1,p2_2),p2_1)").unwrap();
        assert!(!f.d(0).contains_tree(&t));
        assert!(!f.s(1).contains_tree(&t));
        assert!(f.d(1).contains_tree(&t));
        assert!(f.d(0).is_subset(f.s(1)));
        assert!(f.s(1).is_subset(f.d(1)));
        // level one: p1, p2 and mu applied to any pair of p1, p2, mu(p1,p2)
        assert_eq!(f.d(1).trees().count(), 11);
    }

    #[test]
    fn rejects_pointed_and_tiny_bounds() {
        let p = Presentation::new("M", true).with_generator("mu", 2, 1).unwrap();
        assert_eq!(
            generate_filtration(&p, 2, 0, FiltrationBounds::new(5, 2)).unwrap_err(),
            Error::Pointed
        );
        assert!(matches!(
            generate_filtration(&magma(), 3, 0, FiltrationBounds::new(2, 2)),
            Err(Error::BoundExceeded(_))
        ));
    }
}
