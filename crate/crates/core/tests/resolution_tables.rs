use semitheory::resolution::{
    check_identities, compare_completion, pointed_sets_table, FiniteSemiTheory, ResolutionBounds,
};
use semitheory::Presentation;

fn load(text: &str) -> FiniteSemiTheory {
    FiniteSemiTheory::parse(text).unwrap()
}

#[test]
fn table_files_round_trip() {
    for text in [
        include_str!("../data/p2.tbl"),
        include_str!("../data/six.tbl"),
        include_str!("../data/magma2.tbl"),
        include_str!("../data/gamma2.tbl"),
    ] {
        let t = load(text);
        assert_eq!(load(&t.to_text()).to_text(), t.to_text());
    }
}

#[test]
fn pointed_sets_file_matches_generator() {
    let generated = pointed_sets_table(2).unwrap();
    assert_eq!(generated.len(), 23);
    assert_eq!(load(include_str!("../data/gamma2.tbl")).to_text(), generated.to_text());
}

#[test]
fn pointed_sets_identities_at_short_lengths() {
    let t = pointed_sets_table(2).unwrap();
    let bounds = ResolutionBounds {
        max_level: 1,
        max_len: 2,
        cap: 200_000,
    };
    let r = check_identities(&t, bounds).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn magma_table_level_one_collapses_onto_magma() {
    let t = load(include_str!("../data/magma2.tbl"));
    let p = Presentation::parse(include_str!("../data/magma.th")).unwrap();
    let bounds = ResolutionBounds {
        max_level: 1,
        max_len: 2,
        cap: 200_000,
    };
    let r = compare_completion(&t, 1, &p, 3, bounds).unwrap();
    assert!(r.passed(), "{r}");
}
