use proptest::prelude::*;
use semitheory::algebra::{check_roundtrip, check_roundtrip_with, Evaluator, RoundtripBounds, StrictAlgebra};
use semitheory::completion::{Tree, TreeTuple};
use semitheory::{Presentation, Result};

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

fn bounds(max_nodes: usize) -> RoundtripBounds {
    RoundtripBounds {
        max_nodes,
        max_word_len: 3,
        max_object: 2,
    }
}

/// `x - y mod 3`, which is neither commutative nor associative.
fn subtraction() -> StrictAlgebra {
    StrictAlgebra::new("sub3", "Magma", vec!["0".into(), "1".into(), "2".into()])
        .unwrap()
        .with_op("mu", 2, 1, |x| vec![(x[0] + 3 - x[1]) % 3])
        .unwrap()
}

/// Evaluates with the children of every node reversed.
struct Mirrored;

fn mirrored(a: &StrictAlgebra, t: &Tree, x: &[usize]) -> Result<usize> {
    match t {
        Tree::Proj { index, .. } => Ok(x[index - 1]),
        Tree::Iota { .. } => Ok(a.point().unwrap_or(0)),
        Tree::Node {
            op,
            component,
            children,
        } => {
            let args = children
                .iter()
                .rev()
                .map(|c| mirrored(a, c, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(a.apply(op, &args)?[component - 1])
        }
    }
}

impl Evaluator for Mirrored {
    fn eval_tuple(&self, a: &StrictAlgebra, t: &TreeTuple, x: &[usize]) -> Result<Vec<usize>> {
        t.components.iter().map(|c| mirrored(a, c, x)).collect()
    }
}

#[test]
fn mirrored_evaluation_is_caught() {
    let r = check_roundtrip_with(&subtraction(), &magma(), bounds(5), &Mirrored).unwrap();
    assert!(r.has_failures());
}

#[test]
fn mirrored_evaluation_is_invisible_on_commutative_algebras() {
    let xor = StrictAlgebra::new("xor", "Magma", vec!["0".into(), "1".into()])
        .unwrap()
        .with_op("mu", 2, 1, |x| vec![x[0] ^ x[1]])
        .unwrap();
    assert!(check_roundtrip_with(&xor, &magma(), bounds(5), &Mirrored)
        .unwrap()
        .passed());
}

#[test]
fn subtraction_round_trips() {
    let r = check_roundtrip(&subtraction(), &magma(), bounds(5)).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn algebra_files_round_trip() {
    let a = subtraction();
    let b = StrictAlgebra::parse(&a.to_text()).unwrap();
    assert_eq!(a.to_text(), b.to_text());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_algebras_round_trip(seed in any::<u64>(), size in 1usize..=3, both in any::<bool>()) {
        let p = if both { two_gen() } else { magma() };
        let a = StrictAlgebra::random(&p, size, seed).unwrap();
        let r = check_roundtrip(&a, &p, bounds(4)).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }
}
