//! Dimensionwise completion: each bounded level `F_k C` presented as a free
//! semi-theory and handed to the completion module, and the comparison of
//! those completions with a reference presentation of `C` through the
//! collapse induced by `Ψ`.

use std::collections::{BTreeMap, BTreeSet};

use super::nested::{enumerate_nested, eval_psi, lift_psi, NestedWord};
use super::table::{FiniteSemiTheory, MorId};
use super::ResolutionBounds;
use crate::completion::{
    compose_trees, enumerate_trees, enumerate_tuples, generator_tuple, identity_tuple, Tree, TreeTuple,
};
use crate::error::{Error, Result};
use crate::presentation::{is_identifier, is_reserved_name, Presentation};
use crate::report::Report;

/// What a generator of a level presentation stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelGenerator {
    /// Level 0: a morphism of the table.
    Morphism(MorId),
    /// Level `k >= 1`: a bounded word of level `k - 1`.
    Word(NestedWord),
}

/// A bounded level `F_k C` as a free semi-theory.
#[derive(Debug, Clone)]
pub struct LevelPresentation {
    pub level: usize,
    pub presentation: Presentation,
    pub generators: BTreeMap<String, LevelGenerator>,
}

impl LevelPresentation {
    /// `Ψ` of a generator.
    pub fn psi(&self, t: &FiniteSemiTheory, name: &str) -> Result<MorId> {
        match self.generators.get(name) {
            Some(LevelGenerator::Morphism(f)) => Ok(*f),
            Some(LevelGenerator::Word(w)) => eval_psi(t, w),
            None => Err(Error::UnknownGenerator(name.to_string())),
        }
    }
}

/// Presents level `k` of the resolution: the generators of `F_k C` are the
/// morphisms of `F_{k-1} C` (table morphisms for `k = 0`) within the
/// bounds, except the lifts of projections, which the completion supplies.
/// Formal identities stay generators.
pub fn complete_dimension(t: &FiniteSemiTheory, k: usize, bounds: ResolutionBounds) -> Result<LevelPresentation> {
    if k > super::MAX_LEVEL {
        return Err(Error::BoundExceeded(format!(
            "level {k} exceeds the cap {}",
            super::MAX_LEVEL
        )));
    }
    let mut p = Presentation::new(format!("{}_F{k}", t.name()), t.is_pointed());
    p.set_max_object(Some(t.objects()));
    let mut generators = BTreeMap::new();
    let is_projection = |f: MorId| t.projection_index(f).is_some();
    if k == 0 {
        for f in t.ids().filter(|f| !t.touches_zero(*f) && !is_projection(*f)) {
            let m = t.mor(f);
            let name = if is_identifier(&m.name) && !is_reserved_name(&m.name) {
                m.name.clone()
            } else {
                format!("m{}", f.0)
            };
            p.add_generator(&name, m.domain, m.codomain)?;
            generators.insert(name, LevelGenerator::Morphism(f));
        }
    } else {
        let lifts: BTreeSet<NestedWord> = t
            .ids()
            .filter(|f| is_projection(*f))
            .map(|f| lift_psi(t, f, k - 1))
            .collect::<Result<_>>()?;
        let words = enumerate_nested(t, k - 1, bounds.len_at(k - 1), bounds.cap)?;
        for (idx, w) in words.into_iter().filter(|w| !lifts.contains(w)).enumerate() {
            let name = format!("w{}_{idx}", k - 1);
            p.add_generator(&name, w.domain(), w.codomain())?;
            generators.insert(name, LevelGenerator::Word(w));
        }
    }
    if generators.len() > bounds.cap {
        return Err(Error::BoundExceeded(format!(
            "{} generators at level {k}",
            generators.len()
        )));
    }
    Ok(LevelPresentation {
        level: k,
        presentation: p,
        generators,
    })
}

/// The tuple a table morphism denotes in the completion of a reference
/// presentation whose generators are named after the table morphisms.
pub fn table_tuple(t: &FiniteSemiTheory, reference: &Presentation, f: MorId) -> Result<TreeTuple> {
    let m = t.mor(f);
    if t.is_identity(f) {
        return Ok(identity_tuple(m.domain));
    }
    if let Some((n, k)) = t.projection_index(f) {
        return Ok(TreeTuple::new(n, vec![Tree::proj(n, k)]));
    }
    if t.touches_zero(f) || (t.is_pointed() && t.through_zero(m.domain, m.codomain)? == f) {
        return Ok(TreeTuple::new(m.domain, vec![Tree::iota(m.domain); m.codomain]));
    }
    let g = reference
        .generator(&m.name)
        .ok_or_else(|| Error::UnknownGenerator(m.name.clone()))?;
    if (g.domain, g.codomain) != (m.domain, m.codomain) {
        return Err(Error::ArityMismatch {
            expected: m.domain,
            found: g.domain,
        });
    }
    Ok(generator_tuple(g))
}

/// The collapse `Ψ̄`: replaces each generator node by the tree that `Ψ` of
/// the generator denotes in the reference completion.
pub fn collapse_tree(
    t: &FiniteSemiTheory,
    lp: &LevelPresentation,
    reference: &Presentation,
    tree: &Tree,
) -> Result<Tree> {
    match tree {
        Tree::Node {
            op,
            component,
            children,
        } => {
            let f = lp.psi(t, op)?;
            let image = table_tuple(t, reference, f)?;
            let args = children
                .iter()
                .map(|c| collapse_tree(t, lp, reference, c))
                .collect::<Result<Vec<_>>>()?;
            let source = tree.source_arity();
            let r = image.components[component - 1].substitute(&args, source);
            Ok(if reference.is_pointed() { r.collapse_iota() } else { r })
        }
        leaf => Ok(leaf.clone()),
    }
}

/// Compares the completion of level `k` with the completion of a
/// reference presentation of the table on bounded Hom-sets: the collapse
/// lands in the reference completion, reaches all of it, and commutes with
/// composition. At level 0 the trees without formal-identity nodes must
/// coincide with the reference trees.
pub fn compare_completion(
    t: &FiniteSemiTheory,
    k: usize,
    reference: &Presentation,
    max_nodes: usize,
    bounds: ResolutionBounds,
) -> Result<Report> {
    let lp = complete_dimension(t, k, bounds)?;
    let mut report = Report::new("completion-comparison")
        .bound("level", k)
        .bound("max_nodes", max_nodes)
        .bound("max_object", t.objects());
    report.note(format!(
        "level {k} of {} has {} generators",
        t.name(),
        lp.generators.len()
    ));
    let formal_identity =
        |name: &str| matches!(lp.generators.get(name), Some(LevelGenerator::Morphism(f)) if t.is_identity(*f));
    for n in 1..=t.objects() {
        let level_trees = enumerate_trees(&lp.presentation, n, max_nodes)?;
        let direct: BTreeSet<Tree> = enumerate_trees(reference, n, max_nodes)?.into_iter().collect();
        let mut reached = BTreeSet::new();
        let mut identity_free = BTreeSet::new();
        for tree in &level_trees {
            report.case();
            let c = collapse_tree(t, &lp, reference, tree)?;
            if c.validate(reference).is_err() || !direct.contains(&c) {
                report.fail(format!("collapse of {tree} is {c}, outside the reference completion"));
            }
            reached.insert(c.clone());
            if k == 0 && !has_node(tree, &formal_identity) {
                identity_free.insert(tree.clone());
                if c != *tree {
                    report.fail(format!("collapse moves the identity-free tree {tree} to {c}"));
                }
            }
        }
        report.case();
        if let Some(missing) = direct.difference(&reached).next() {
            report.fail(format!("{missing} is not the collapse of any bounded tree"));
        }
        if k == 0 {
            report.case();
            if identity_free != direct {
                report.fail(format!(
                    "identity-free trees out of [{n}] differ from the reference completion ({} vs {})",
                    identity_free.len(),
                    direct.len()
                ));
            }
        }
        // collapse commutes with grafting
        let inner_bound = max_nodes.min(4);
        for m in 1..=t.objects() {
            let outer = enumerate_trees(&lp.presentation, m, inner_bound)?;
            for u in enumerate_tuples(&lp.presentation, n, m, inner_bound)? {
                let cu = TreeTuple::new(
                    n,
                    u.components
                        .iter()
                        .map(|c| collapse_tree(t, &lp, reference, c))
                        .collect::<Result<_>>()?,
                );
                for s in &outer {
                    report.case();
                    let st = compose_trees(&TreeTuple::single(s.clone()), &u)?;
                    let left = collapse_tree(t, &lp, reference, &st.components[0])?;
                    let cs = TreeTuple::single(collapse_tree(t, &lp, reference, s)?);
                    let right = compose_trees(&cs, &cu)?;
                    if right.components[0] != left {
                        report.fail(format!("collapse does not commute with grafting {s} onto {u}"));
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

fn has_node(tree: &Tree, pred: &dyn Fn(&str) -> bool) -> bool {
    match tree {
        Tree::Node { op, children, .. } => pred(op) || children.iter().any(|c| has_node(c, pred)),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::TableBuilder;

    fn magma2() -> FiniteSemiTheory {
        TableBuilder::new("Magma2", 2, false)
            .mor("p2_1", 2, 1)
            .mor("p2_2", 2, 1)
            .mor("mu", 2, 1)
            .proj(2, 1, "p2_1")
            .proj(2, 2, "p2_2")
            .build()
            .unwrap()
    }

    #[test]
    fn level_zero_generators() {
        let lp = complete_dimension(&magma2(), 0, ResolutionBounds::new(0)).unwrap();
        let names: Vec<&str> = lp.generators.keys().map(String::as_str).collect();
        assert_eq!(names, ["id_2", "mu"]);
    }

    #[test]
    fn level_zero_matches_direct_completion() {
        let reference = Presentation::new("Magma", false).with_generator("mu", 2, 1).unwrap();
        let r = compare_completion(&magma2(), 0, &reference, 5, ResolutionBounds::new(0)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn projection_level_one_collapses_to_projections() {
        let t = TableBuilder::new("P2", 2, false)
            .mor("p2_1", 2, 1)
            .mor("p2_2", 2, 1)
            .proj(2, 1, "p2_1")
            .proj(2, 2, "p2_2")
            .build()
            .unwrap();
        let empty = Presentation::new("P", false);
        let r = compare_completion(&t, 1, &empty, 4, ResolutionBounds::new(1)).unwrap();
        assert!(r.passed(), "{r}");
        let lp = complete_dimension(&t, 1, ResolutionBounds::new(1)).unwrap();
        let tree = enumerate_trees(&lp.presentation, 2, 3)
            .unwrap()
            .into_iter()
            .find(|x| x.size() == 3)
            .unwrap();
        assert!(matches!(
            collapse_tree(&t, &lp, &empty, &tree).unwrap(),
            Tree::Proj { .. }
        ));
    }

    #[test]
    fn generator_cap() {
        let b = ResolutionBounds {
            max_level: 2,
            max_len: 3,
            cap: 10,
        };
        assert!(matches!(
            complete_dimension(&magma2(), 2, b),
            Err(Error::BoundExceeded(_))
        ));
    }
}
