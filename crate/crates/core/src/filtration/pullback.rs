//! The square of Hom-sets into the diagram `X[m] = X1^m` of a strict
//! algebra:
//!
//! ```text
//! Hom_D(D̄^k, X)  <--  Hom_D(D̄^{k+1}, X)
//!       |                    |
//! Hom_P(D̄^k, X)  <--  Hom_P(sD̄^{k+1}, X)
//! ```
//!
//! and the check that it is a pullback of sets. A map of diagrams that
//! commutes with projections is determined by its values on trees, so maps
//! are represented by their restriction to `level[1]`.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    factorizations, generate_filtration, generator_moves, projection_moves, word_of, Filtration, FiltrationBounds,
    FiltrationLevel,
};
use crate::algebra::{all_inputs, StrictAlgebra};
use crate::completion::{Tree, TreeTuple};
use crate::error::{Error, Result};
use crate::presentation::{Letter, Presentation};
use crate::report::Report;

/// Values of a projection-compatible map on the trees of a level.
pub type PMap = BTreeMap<Tree, usize>;

/// The bounded set `Hom_D(F, X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DMaps {
    pub maps: Vec<PMap>,
    /// False when the enumeration hit its cap.
    pub complete: bool,
    /// Number of naturality constraints enforced.
    pub constraints: usize,
}

/// Largest number of free-variable assignments enumerated per Hom-set.
const ENUMERATION_CAP: usize = 1 << 20;

fn eval_letters(
    a: &StrictAlgebra,
    domain: usize,
    codomain: usize,
    letters: &[Letter],
    x: &[usize],
) -> Result<Vec<usize>> {
    a.eval_word(&word_of(domain, codomain, letters.to_vec()), x)
}

fn values_of(map: &PMap, t: &TreeTuple) -> Option<Vec<usize>> {
    t.components.iter().map(|c| map.get(c).copied()).collect()
}

/// Maps of diagrams `level -> X` commuting with every generator (and with
/// every generator followed by a projection) between bounded members.
/// Naturality for longer words follows inside the bounds, since every
/// intermediate tuple of such a word is itself a bounded member.
pub fn solve_d_maps(p: &Presentation, level: &FiltrationLevel, a: &StrictAlgebra) -> Result<DMaps> {
    let mut vars: Vec<&Tree> = level.trees().collect();
    vars.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.cmp(y)));
    // target tree -> (letters, source tuple)
    let mut rules: BTreeMap<&Tree, Vec<(Vec<Letter>, &TreeTuple)>> = BTreeMap::new();
    let mut constraints = 0;
    for t in level.iter() {
        for mv in generator_moves(p, t, usize::MAX) {
            if mv.result.codomain() == 1 && level.contains(&mv.result) {
                let target = vars
                    .iter()
                    .find(|v| ***v == mv.result.components[0])
                    .copied()
                    .expect("member tree");
                rules.entry(target).or_default().push((mv.letters, t));
                constraints += 1;
            }
        }
    }
    let free: Vec<&Tree> = vars.iter().copied().filter(|v| !rules.contains_key(v)).collect();
    let size = a.size();
    let total = (size as u128).checked_pow(free.len() as u32);
    let complete = total.is_some_and(|t| t <= ENUMERATION_CAP as u128);
    let mut maps = Vec::new();
    if complete {
        'assign: for values in all_inputs(size, free.len()) {
            let mut map: PMap = free.iter().map(|v| (*v).clone()).zip(values).collect();
            for v in &vars {
                let Some(rs) = rules.get(v) else { continue };
                for (letters, src) in rs {
                    let x = values_of(&map, src).expect("children are smaller");
                    let y = eval_letters(a, src.codomain(), 1, letters, &x)?[0];
                    match map.get(*v) {
                        Some(&old) if old != y => continue 'assign,
                        Some(_) => {}
                        None => {
                            map.insert((*v).clone(), y);
                        }
                    }
                }
            }
            maps.push(map);
        }
    }
    Ok(DMaps {
        maps,
        complete,
        constraints,
    })
}

/// Restriction of a map to the trees of a smaller level.
pub fn restrict_d_map(map: &PMap, level: &FiltrationLevel) -> PMap {
    level.trees().map(|t| (t.clone(), map[t])).collect()
}

/// Extends a projection-compatible map `eps: sD̄^{k+1} -> X` whose
/// restriction to `D̄^k` commutes with `D` to a map of `D`-diagrams on
/// `D̄^{k+1}`, via the unique factorization `T = φ(S)`:
/// `eps̄(T) = X(φ)(eps(S))`.
pub fn extend_p_map(
    p: &Presentation,
    f: &Filtration,
    k: usize,
    a: &StrictAlgebra,
    eps: &BTreeMap<TreeTuple, Vec<usize>>,
) -> Result<BTreeMap<TreeTuple, Vec<usize>>> {
    let s = f.s(k + 1);
    for t in s.iter() {
        let v = eps
            .get(t)
            .ok_or_else(|| Error::ProjectionIncompatible(format!("eps is undefined on {t}")))?;
        if v.len() != t.codomain() {
            return Err(Error::ProjectionIncompatible(format!(
                "eps({t}) has {} coordinates",
                v.len()
            )));
        }
        for (i, c) in t.components.iter().enumerate() {
            let single = TreeTuple::new(t.domain, vec![c.clone()]);
            if eps.get(&single).map(|w| w[0]) != Some(v[i]) {
                return Err(Error::ProjectionIncompatible(format!(
                    "eps({t}) = {} but eps({c}) = {}",
                    a.format_elements(v),
                    eps.get(&single)
                        .map(|w| a.format_elements(w))
                        .unwrap_or_else(|| "undefined".into())
                )));
            }
        }
    }
    let natural_on = |level: &FiltrationLevel, map: &BTreeMap<TreeTuple, Vec<usize>>| -> Result<()> {
        for t in level.iter() {
            let moves = generator_moves(p, t, usize::MAX).into_iter().chain(projection_moves(t));
            for mv in moves {
                if !level.contains(&mv.result) {
                    continue;
                }
                let expected = eval_letters(a, t.codomain(), mv.result.codomain(), &mv.letters, &map[t])?;
                if map[&mv.result] != expected {
                    return Err(Error::NotNatural(format!(
                        "value {} at {} but {} at {}",
                        a.format_elements(&map[t]),
                        t,
                        a.format_elements(&map[&mv.result]),
                        mv.result
                    )));
                }
            }
        }
        Ok(())
    };
    natural_on(f.d(k), eps)?;

    let mut out = BTreeMap::new();
    for t in f.d(k + 1).iter() {
        if s.contains(t) {
            out.insert(t.clone(), eps[t].clone());
            continue;
        }
        let found = factorizations(p, f, k, t);
        let [fac] = found.as_slice() else {
            return Err(Error::NoFactorization(format!(
                "{t} has {} factorizations",
                found.len()
            )));
        };
        let value = a.eval_word(&fac.word, &eps[&fac.source])?;
        out.insert(t.clone(), value);
    }
    natural_on(f.d(k + 1), &out)?;
    Ok(out)
}

fn tuple_values(map: &PMap, level: &FiltrationLevel) -> BTreeMap<TreeTuple, Vec<usize>> {
    level
        .iter()
        .map(|t| (t.clone(), values_of(map, t).expect("components are members")))
        .collect()
}

/// Verifies that `Hom_D(D̄^{k+1}, X)` is the pullback of the square, by
/// computing all four bounded Hom-sets, the set pullback `P`, the
/// restriction map `ι` and its inverse `ν` given by `extend_p_map`.
pub fn check_pullback(
    p: &Presentation,
    n: usize,
    k: usize,
    a: &StrictAlgebra,
    bounds: FiltrationBounds,
) -> Result<Report> {
    a.check_against(p)?;
    let f = generate_filtration(p, n, k + 1, bounds)?;
    let mut report = Report::new("pullback")
        .bound("n", n)
        .bound("k", k)
        .bound("max_nodes", bounds.max_nodes)
        .bound("max_object", f.max_object)
        .bound("carrier", a.size());
    let (dk, dk1, s) = (f.d(k), f.d(k + 1), f.s(k + 1));
    let hom_dk = solve_d_maps(p, dk, a)?;
    let hom_dk1 = solve_d_maps(p, dk1, a)?;
    report.note(format!(
        "naturality enforced for generators and generator-then-projection steps between bounded members ({} and {} constraints)",
        hom_dk.constraints, hom_dk1.constraints
    ));
    if !hom_dk.complete || !hom_dk1.complete {
        report.inconclusive_case();
        report.note("Hom-set enumeration exceeded its cap");
        return Ok(report.finish());
    }

    // the pullback: pairs (f, g) agreeing on the trees of D̄^k
    let dk_trees: BTreeSet<&Tree> = dk.trees().collect();
    let s_free: Vec<&Tree> = s.trees().filter(|t| !dk_trees.contains(t)).collect();
    let fibre = (a.size() as u128).checked_pow(s_free.len() as u32);
    if fibre.is_none_or(|x| x > ENUMERATION_CAP as u128) {
        report.inconclusive_case();
        report.note("pullback fibre exceeds the enumeration cap");
        return Ok(report.finish());
    }
    let hom_p_size = (a.size() as u128).checked_pow(s.trees().count() as u32);
    report.note(format!(
        "|Hom_D(D̄^k)| = {}, |Hom_D(D̄^k+1)| = {}, |Hom_P(sD̄^k+1)| = {}",
        hom_dk.maps.len(),
        hom_dk1.maps.len(),
        hom_p_size.map(|x| x.to_string()).unwrap_or_else(|| "huge".into())
    ));
    let mut pullback: BTreeSet<(PMap, PMap)> = BTreeSet::new();
    for fm in &hom_dk.maps {
        for extra in all_inputs(a.size(), s_free.len()) {
            let mut g: PMap = s
                .trees()
                .filter(|t| dk_trees.contains(t))
                .map(|t| (t.clone(), fm[t]))
                .collect();
            g.extend(s_free.iter().map(|t| (*t).clone()).zip(extra));
            pullback.insert((fm.clone(), g));
        }
    }

    let hom_dk_set: BTreeSet<&PMap> = hom_dk.maps.iter().collect();
    let hom_dk1_set: BTreeSet<&PMap> = hom_dk1.maps.iter().collect();
    let iota = |h: &PMap| (restrict_d_map(h, dk), restrict_d_map(h, s));

    // ι lands in P and is injective
    let mut images = BTreeSet::new();
    for h in &hom_dk1.maps {
        report.case();
        let (fm, g) = iota(h);
        if !hom_dk_set.contains(&fm) || !pullback.contains(&(fm.clone(), g.clone())) {
            report.fail(format!("restriction of {h:?} is not in the pullback"));
        }
        images.insert((fm, g));
    }
    report.case();
    if images.len() != hom_dk1.maps.len() {
        report.fail("restriction map ι is not injective");
    }

    // ν = extension; ι∘ν = id on P
    let mut nu: BTreeMap<&(PMap, PMap), PMap> = BTreeMap::new();
    for pair in &pullback {
        report.case();
        let eps = tuple_values(&pair.1, s);
        match extend_p_map(p, &f, k, a, &eps) {
            Ok(ext) => {
                let h: PMap = ext
                    .into_iter()
                    .filter(|(t, _)| t.codomain() == 1)
                    .map(|(t, v)| (t.components[0].clone(), v[0]))
                    .collect();
                if !hom_dk1_set.contains(&h) {
                    report.fail(format!("extension of {:?} is not a map of D-diagrams", pair.1));
                } else if iota(&h) != *pair {
                    report.fail(format!("ι∘ν differs from the identity at {:?}", pair.1));
                }
                nu.insert(pair, h);
            }
            Err(e) => report.fail(format!("extension of {:?} failed: {e}", pair.1)),
        }
    }
    // ν∘ι = id on Hom_D(D̄^{k+1}, X)
    for h in &hom_dk1.maps {
        report.case();
        if nu.get(&iota(h)) != Some(h) {
            report.fail(format!("ν∘ι differs from the identity at {h:?}"));
        }
    }
    report.case();
    if pullback.len() != hom_dk1.maps.len() {
        report.fail(format!(
            "cardinalities differ: |P| = {}, |Hom_D(D̄^k+1)| = {}",
            pullback.len(),
            hom_dk1.maps.len()
        ));
    }
    report.note(format!("|P| = {}", pullback.len()));
    Ok(report.finish())
}
