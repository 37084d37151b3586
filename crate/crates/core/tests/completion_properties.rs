mod common;

use common::{bracketings, count_nodes, relation_move};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semitheory::completion::{
    canonicalize_pointed, compose_trees, enumerate_trees, identity_tuple, random_tree, random_tuple, Tree, TreeTuple,
};
use semitheory::Presentation;

fn magma() -> Presentation {
    Presentation::new("Magma", false).with_generator("mu", 2, 1).unwrap()
}

fn two_gen() -> Presentation {
    Presentation::new("MuDelta", false)
        .with_generator("mu", 2, 1)
        .unwrap()
        .with_generator("delta", 1, 2)
        .unwrap()
}

fn pointed_two_gen() -> Presentation {
    Presentation::new("PointedMuDelta", true)
        .with_generator("mu", 2, 1)
        .unwrap()
        .with_generator("delta", 1, 2)
        .unwrap()
}

#[test]
fn magma_trees_are_counted_by_catalan_numbers() {
    let trees = enumerate_trees(&magma(), 2, 9).unwrap();
    for t in 0..=4 {
        let mut oracle = bracketings(t);
        oracle.sort();
        oracle.dedup();
        let found = trees.iter().filter(|x| count_nodes(x, "mu") == t).count();
        assert_eq!(found, oracle.len(), "trees with {t} operations");
    }
    assert_eq!(
        (0..=4).map(|t| bracketings(t).len()).collect::<Vec<_>>(),
        [2, 4, 16, 80, 448]
    );
}

#[test]
fn pointed_relation_moves_are_confluent() {
    let p = pointed_two_gen();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let t = random_tree(&p, n, 8, &mut rng);
        let direct = canonicalize_pointed(&p, &t).unwrap();
        let mut moved = t.clone();
        for _ in 0..rng.gen_range(0..=3) {
            moved = relation_move(&p, &moved, &mut rng);
        }
        assert_eq!(
            canonicalize_pointed(&p, &moved).unwrap(),
            direct,
            "{t} moved to {moved}"
        );
    }
}

#[test]
fn canonicalization_is_idempotent_on_enumerated_trees() {
    let p = pointed_two_gen();
    for n in 1..=2 {
        for t in enumerate_trees(&p, n, 5).unwrap() {
            let c = canonicalize_pointed(&p, &t).unwrap();
            assert_eq!(c, t);
            assert_eq!(canonicalize_pointed(&p, &c).unwrap(), c);
        }
    }
}

#[test]
fn depth_bound_is_attained() {
    // mu(mu(p1,p2),p1) has depth 3; grafting it onto itself in the first slot
    let s = TreeTuple::single(Tree::node(
        "mu",
        1,
        vec![
            Tree::node("mu", 1, vec![Tree::proj(2, 1), Tree::proj(2, 2)]),
            Tree::proj(2, 1),
        ],
    ));
    let t = TreeTuple::new(2, vec![s.components[0].clone(), Tree::proj(2, 2)]);
    let st = compose_trees(&s, &t).unwrap();
    assert_eq!(st.depth(), s.depth() + t.depth() - 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn grafting_depth_is_subadditive(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let p = two_gen();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_tuple(&p, m, 1, 10, &mut rng);
        let t = random_tuple(&p, n, m, 10, &mut rng);
        let st = compose_trees(&s, &t).unwrap();
        prop_assert!(st.depth() < s.depth() + t.depth());
        prop_assert!(st.validate(&p).is_ok());
    }

    #[test]
    fn grafting_is_associative_and_unital(seed in any::<u64>(), pointed in any::<bool>()) {
        let p = if pointed { pointed_two_gen() } else { two_gen() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let a = random_tuple(&p, dims[1], dims[0], 8, &mut rng);
        let b = random_tuple(&p, dims[2], dims[1], 8, &mut rng);
        let c = random_tuple(&p, dims[3], dims[2], 8, &mut rng);
        let left = compose_trees(&compose_trees(&a, &b).unwrap(), &c).unwrap();
        let right = compose_trees(&a, &compose_trees(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose_trees(&identity_tuple(dims[0]), &a).unwrap(), a.clone());
        prop_assert_eq!(compose_trees(&a, &identity_tuple(dims[1])).unwrap(), a);
    }

    #[test]
    fn projections_pick_components(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=4) {
        let p = magma();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tuple(&p, n, m, 9, &mut rng);
        for i in 1..=m {
            let proj = TreeTuple::single(Tree::proj(m, i));
            prop_assert_eq!(&compose_trees(&proj, &t).unwrap().components[0], &t.components[i - 1]);
        }
    }
}
