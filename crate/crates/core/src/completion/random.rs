//! Seeded random terms for property tests and sampled sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Tree, TreeTuple};
use crate::presentation::{GeneratorDecl, Presentation};

/// A random tree `[n] -> [1]` with at most `budget` nodes (at least 1).
/// Pointed trees are returned in canonical form.
pub fn random_tree<R: Rng + ?Sized>(p: &Presentation, n: usize, budget: usize, rng: &mut R) -> Tree {
    let gens: Vec<&GeneratorDecl> = p.generators().collect();
    let t = grow(p, &gens, n, budget.max(1), rng);
    if p.is_pointed() {
        t.collapse_iota()
    } else {
        t
    }
}

fn leaf<R: Rng + ?Sized>(p: &Presentation, n: usize, rng: &mut R) -> Tree {
    let choices = n + usize::from(p.is_pointed());
    let k = rng.gen_range(0..choices.max(1));
    if k < n {
        Tree::proj(n, k + 1)
    } else {
        Tree::iota(n)
    }
}

fn grow<R: Rng + ?Sized>(p: &Presentation, gens: &[&GeneratorDecl], n: usize, budget: usize, rng: &mut R) -> Tree {
    let fitting: Vec<&&GeneratorDecl> = gens.iter().filter(|g| g.domain < budget).collect();
    if fitting.is_empty() || (n > 0 && rng.gen_bool(0.3)) {
        return leaf(p, n, rng);
    }
    let g = fitting.choose(rng).expect("nonempty");
    // split budget - 1 nodes among the children, one each at least
    let mut shares = vec![1usize; g.domain];
    let mut spare = rng.gen_range(0..=budget - 1 - g.domain);
    while spare > 0 {
        let i = rng.gen_range(0..g.domain);
        shares[i] += 1;
        spare -= 1;
    }
    let children = shares.into_iter().map(|s| grow(p, gens, n, s, rng)).collect();
    Tree::node(&g.name, rng.gen_range(1..=g.codomain), children)
}

/// A random tuple `[n] -> [m]`, each component with at most `budget` nodes.
pub fn random_tuple<R: Rng + ?Sized>(p: &Presentation, n: usize, m: usize, budget: usize, rng: &mut R) -> TreeTuple {
    TreeTuple::new(n, (0..m).map(|_| random_tree(p, n, budget, rng)).collect())
}
