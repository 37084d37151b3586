use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::random_tuple;
use super::{enumerate_trees, enumerate_tuples, identity_tuple, Graft, Grafting, Tree, TreeTuple};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::report::Report;

/// Bounds for [`check_theory_axioms`]. Hom-sets are bounded by the total
/// node count of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomBounds {
    pub max_nodes: usize,
    pub max_object: usize,
    /// Objects used for the associativity sweep, which is cubic in the
    /// Hom-set sizes.
    pub triple_object: usize,
    /// Node bound for the tuples in the unit and associativity checks.
    pub triple_nodes: usize,
}

impl AxiomBounds {
    pub fn new(max_nodes: usize, max_object: usize) -> Self {
        AxiomBounds {
            max_nodes,
            max_object,
            triple_object: max_object.min(2),
            triple_nodes: max_nodes.min(4),
        }
    }
}

fn objects(p: &Presentation, max: usize) -> std::ops::RangeInclusive<usize> {
    if p.is_pointed() {
        0..=max
    } else {
        1..=max
    }
}

pub fn check_theory_axioms(p: &Presentation, bounds: AxiomBounds) -> Result<Report> {
    check_theory_axioms_with(p, bounds, &Grafting)
}

/// Verifies the algebraic-theory axioms of the completion on bounded
/// Hom-sets: the projection law, the componentwise bijection
/// `Hom([n],[m]) -> Hom([n],[1])^m`, and the category laws.
pub fn check_theory_axioms_with(p: &Presentation, bounds: AxiomBounds, graft: &dyn Graft) -> Result<Report> {
    let mut report = Report::new("theory-axioms")
        .bound("max_nodes", bounds.max_nodes)
        .bound("max_object", bounds.max_object)
        .bound("triple_object", bounds.triple_object)
        .bound("triple_nodes", bounds.triple_nodes);
    let n_max = bounds.max_nodes;

    for n in objects(p, bounds.max_object) {
        let trees: BTreeSet<Tree> = enumerate_trees(p, n, n_max)?.into_iter().collect();
        for m in 1..=bounds.max_object {
            let homs = enumerate_tuples(p, n, m, n_max)?;
            let mut images: BTreeSet<Vec<Tree>> = BTreeSet::new();
            for t in &homs {
                let mut comps = Vec::with_capacity(m);
                for i in 1..=m {
                    report.case();
                    let proj = TreeTuple::new(m, vec![Tree::proj(m, i)]);
                    match graft.graft(&proj, t) {
                        Ok(r) if r.is_well_typed() && r.codomain() == 1 && r.components[0] == t.components[i - 1] => {
                            comps.push(r.components[0].clone());
                        }
                        Ok(r) => {
                            report.fail(format!("p{m}_{i} ∘ {t} = {r}, expected {}", t.components[i - 1]));
                            comps.push(r.components.first().cloned().unwrap_or(Tree::proj(1, 1)));
                        }
                        Err(e) => report.fail(format!("p{m}_{i} ∘ {t}: {e}")),
                    }
                }
                images.insert(comps);
            }
            // injectivity of the component map
            report.case();
            if images.len() != homs.len() {
                report.fail(format!(
                    "component map on Hom([{n}],[{m}]) is not injective: {} tuples, {} images",
                    homs.len(),
                    images.len()
                ));
            }
            // surjectivity onto bounded component vectors
            let expected = component_vectors(&trees, m, n_max);
            report.case();
            if expected != images {
                let missing = expected.difference(&images).next();
                report.fail(format!(
                    "component map Hom([{n}],[{m}]) -> Hom([{n}],[1])^{m} is not onto the bounded product (e.g. {missing:?})"
                ));
            }
        }
    }

    let t_obj = bounds.triple_object;
    let homs = |n: usize, m: usize| enumerate_tuples(p, n, m, bounds.triple_nodes);
    for a in objects(p, t_obj) {
        for b in objects(p, t_obj) {
            let ab = homs(a, b)?;
            for t in &ab {
                report.case();
                check_units(graft, t, &mut report);
            }
            for c in objects(p, t_obj) {
                let bc = homs(b, c)?;
                for d in objects(p, t_obj) {
                    let cd = homs(c, d)?;
                    for s in &cd {
                        for t in &bc {
                            let st = match graft.graft(s, t) {
                                Ok(st) => st,
                                Err(e) => {
                                    report.fail(format!("{s} ∘ {t}: {e}"));
                                    continue;
                                }
                            };
                            for u in &ab {
                                report.case();
                                check_associativity(graft, s, t, u, Some(&st), &mut report);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

fn component_vectors(trees: &BTreeSet<Tree>, m: usize, budget: usize) -> BTreeSet<Vec<Tree>> {
    let mut out = BTreeSet::new();
    fn go(trees: &BTreeSet<Tree>, m: usize, budget: usize, prefix: &mut Vec<Tree>, out: &mut BTreeSet<Vec<Tree>>) {
        if prefix.len() == m {
            out.insert(prefix.clone());
            return;
        }
        let left = m - prefix.len() - 1;
        for t in trees {
            let s = t.size();
            if s + left <= budget {
                prefix.push(t.clone());
                go(trees, m, budget - s, prefix, out);
                prefix.pop();
            }
        }
    }
    go(trees, m, budget, &mut Vec::new(), &mut out);
    out
}

fn check_units(graft: &dyn Graft, t: &TreeTuple, report: &mut Report) {
    let left = graft.graft(&identity_tuple(t.codomain()), t);
    let right = graft.graft(t, &identity_tuple(t.domain));
    if left.as_ref() != Ok(t) || right.as_ref() != Ok(t) {
        report.fail(format!("unit law fails for {t}: id∘t = {left:?}, t∘id = {right:?}"));
    }
}

fn check_associativity(
    graft: &dyn Graft,
    s: &TreeTuple,
    t: &TreeTuple,
    u: &TreeTuple,
    st: Option<&TreeTuple>,
    report: &mut Report,
) {
    let st = match st {
        Some(st) => Ok(st.clone()),
        None => graft.graft(s, t),
    };
    let left = st.and_then(|st| graft.graft(&st, u));
    let right = graft.graft(t, u).and_then(|tu| graft.graft(s, &tu));
    match (left, right) {
        (Ok(l), Ok(r)) if l == r && l.is_well_typed() => {}
        (l, r) => report.fail(format!(
            "associativity fails for s={s}, t={t}, u={u}: (s∘t)∘u = {}, s∘(t∘u) = {}",
            l.map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
            r.map(|x| x.to_string()).unwrap_or_else(|e| e.to_string())
        )),
    }
}

/// Category laws on tuples whose components come from
/// `enumerate_trees(p, _, per_tree_nodes)` over objects `1..=max_object`,
/// plus `random_triples` random composable triples of larger terms.
pub fn check_category_laws(
    p: &Presentation,
    per_tree_nodes: usize,
    max_object: usize,
    random_triples: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("category-laws")
        .bound("max_nodes", per_tree_nodes)
        .bound("max_object", max_object)
        .bound("random_triples", random_triples);
    let graft = Grafting;
    let objs: Vec<usize> = objects(p, max_object).collect();
    // Hom([a],[b]) = trees(a)^b
    let mut homs = std::collections::BTreeMap::new();
    for &a in &objs {
        let trees = enumerate_trees(p, a, per_tree_nodes)?;
        for &b in &objs {
            let mut tuples = vec![Vec::new()];
            for _ in 0..b {
                tuples = tuples
                    .into_iter()
                    .flat_map(|prefix: Vec<Tree>| {
                        trees.iter().map(move |t| {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            v
                        })
                    })
                    .collect();
            }
            homs.insert(
                (a, b),
                tuples.into_iter().map(|c| TreeTuple::new(a, c)).collect::<Vec<_>>(),
            );
        }
    }
    for &a in &objs {
        for &b in &objs {
            for t in &homs[&(a, b)] {
                report.case();
                check_units(&graft, t, &mut report);
            }
            for &c in &objs {
                for &d in &objs {
                    for s in &homs[&(c, d)] {
                        for t in &homs[&(b, c)] {
                            let st = compose_or_fail(&graft, s, t, &mut report);
                            for u in &homs[&(a, b)] {
                                report.case();
                                check_associativity(&graft, s, t, u, st.as_ref(), &mut report);
                            }
                        }
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_triples {
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=max_object.max(3))).collect();
        let u = random_tuple(p, dims[0], dims[1], 9, &mut rng);
        let t = random_tuple(p, dims[1], dims[2], 9, &mut rng);
        let s = random_tuple(p, dims[2], dims[3], 9, &mut rng);
        report.case();
        check_associativity(&graft, &s, &t, &u, None, &mut report);
        report.case();
        check_units(&graft, &s, &mut report);
    }
    Ok(report.finish())
}

fn compose_or_fail(graft: &dyn Graft, s: &TreeTuple, t: &TreeTuple, report: &mut Report) -> Option<TreeTuple> {
    match graft.graft(s, t) {
        Ok(st) => Some(st),
        Err(e) => {
            report.fail(format!("{s} ∘ {t}: {e}"));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn magma() -> Presentation {
        Presentation::new("Magma", false).with_generator("mu", 2, 1).unwrap()
    }

    #[test]
    fn magma_passes() {
        let r = check_theory_axioms(&magma(), AxiomBounds::new(5, 3)).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.cases > 1000);
    }

    #[test]
    fn projections_only_theory() {
        let p = Presentation::new("P", false);
        let r = check_theory_axioms(&p, AxiomBounds::new(4, 3)).unwrap();
        assert!(r.passed(), "{r}");
        for n in 1..=3 {
            let trees = enumerate_trees(&p, n, 4).unwrap();
            assert_eq!(trees, (1..=n).map(|k| Tree::proj(n, k)).collect::<Vec<_>>());
        }
    }

    /// Pointed grafting that forgets to relabel `iota` leaves.
    struct NoRelabel;

    impl Graft for NoRelabel {
        fn graft(&self, s: &TreeTuple, t: &TreeTuple) -> Result<TreeTuple> {
            fn sub(tree: &Tree, args: &[Tree]) -> Tree {
                match tree {
                    Tree::Proj { index, .. } => args[index - 1].clone(),
                    Tree::Iota { .. } => tree.clone(),
                    Tree::Node {
                        op,
                        component,
                        children,
                    } => Tree::Node {
                        op: op.clone(),
                        component: *component,
                        children: children.iter().map(|c| sub(c, args)).collect(),
                    },
                }
            }
            if s.domain != t.codomain() {
                return Err(Error::ObjectMismatch {
                    expected: s.domain,
                    found: t.codomain(),
                });
            }
            Ok(TreeTuple::new(
                t.domain,
                s.components
                    .iter()
                    .map(|c| sub(c, &t.components).collapse_iota())
                    .collect(),
            ))
        }
    }

    #[test]
    fn pointed_magma_passes_and_mutant_fails() {
        let p = Presentation::new("PtMagma", true).with_generator("mu", 2, 1).unwrap();
        let bounds = AxiomBounds::new(4, 2);
        let r = check_theory_axioms(&p, bounds).unwrap();
        assert!(r.passed(), "{r}");
        let r = check_theory_axioms_with(&p, bounds, &NoRelabel).unwrap();
        assert!(r.has_failures());
        assert!(!r.counterexamples.is_empty());
    }

    #[test]
    fn category_laws_small() {
        let r = check_category_laws(&magma(), 3, 2, 50, 7).unwrap();
        assert!(r.passed(), "{r}");
    }
}
