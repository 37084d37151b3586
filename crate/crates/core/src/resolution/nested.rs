//! Nested words: the morphisms of the levels `F_k C = F^{k+1} C` of the
//! free resolution, where `F` sends a category to the free category on its
//! underlying graph.
//!
//! A level-0 word is a composable string of table morphisms; a level-`k`
//! word is a composable string of level-`(k-1)` words. Identity morphisms
//! of the table (and empty words of lower levels) are ordinary letters,
//! distinct from the empty word. Letters are in application order.
//!
//! Faces apply the counit at nesting depth `i`: at the innermost depth the
//! letters of a level-0 word are multiplied in the table, at every other
//! depth a word of words is flattened by concatenation. Degeneracies wrap
//! every letter at depth `i` into a one-letter word.
//!
//! For pointed tables the words only use morphisms between nonzero
//! objects, and everything factoring through `[0]` is represented by a
//! single zero word per level and pair of objects.

use std::fmt;

use super::table::{FiniteSemiTheory, MorId};
use crate::error::{Error, Result};

/// A letter of a nested word: a table morphism at level 0, a word of the
/// level below otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Atom(MorId),
    Word(NestedWord),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedWord {
    level: usize,
    domain: usize,
    codomain: usize,
    letters: Vec<Cell>,
    zero: bool,
}

impl Cell {
    fn ends(&self, t: &FiniteSemiTheory) -> (usize, usize) {
        match self {
            Cell::Atom(f) => (t.mor(*f).domain, t.mor(*f).codomain),
            Cell::Word(w) => (w.domain, w.codomain),
        }
    }

    fn is_zero(&self, t: &FiniteSemiTheory) -> bool {
        match self {
            Cell::Atom(f) => t.touches_zero(*f),
            Cell::Word(w) => w.zero,
        }
    }

    /// Nesting level of the cell, with atoms one below level 0.
    fn level(&self) -> Option<usize> {
        match self {
            Cell::Atom(_) => None,
            Cell::Word(w) => Some(w.level),
        }
    }
}

impl NestedWord {
    /// The empty word at `[n]`.
    pub fn identity(level: usize, n: usize) -> NestedWord {
        NestedWord {
            level,
            domain: n,
            codomain: n,
            letters: Vec::new(),
            zero: false,
        }
    }

    /// The word representing the composite through `[0]`.
    pub fn zero(level: usize, domain: usize, codomain: usize) -> NestedWord {
        NestedWord {
            level,
            domain,
            codomain,
            letters: Vec::new(),
            zero: true,
        }
    }

    /// A word from letters of the right level, checking composability.
    pub fn new(t: &FiniteSemiTheory, level: usize, letters: Vec<Cell>) -> Result<NestedWord> {
        let expected = level.checked_sub(1);
        let first = letters
            .first()
            .ok_or_else(|| Error::MalformedTerm("use NestedWord::identity for empty words".into()))?;
        let domain = first.ends(t).0;
        let mut cur = domain;
        for c in &letters {
            if c.level() != expected {
                return Err(Error::MalformedTerm(format!(
                    "letter of the wrong level in a level-{level} word"
                )));
            }
            if c.is_zero(t) {
                return Err(Error::MalformedTerm("words cannot contain letters through [0]".into()));
            }
            let (d, cd) = c.ends(t);
            if d != cur {
                return Err(Error::ObjectMismatch {
                    expected: cur,
                    found: d,
                });
            }
            cur = cd;
        }
        Ok(NestedWord {
            level,
            domain,
            codomain: cur,
            letters,
            zero: false,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn letters(&self) -> &[Cell] {
        &self.letters
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty() && !self.zero
    }

    /// `g ∘ f`: the letters of `f` followed by those of `g`.
    pub fn compose(g: &NestedWord, f: &NestedWord) -> Result<NestedWord> {
        if g.level != f.level || f.codomain != g.domain {
            return Err(Error::ObjectMismatch {
                expected: g.domain,
                found: f.codomain,
            });
        }
        if f.zero || g.zero {
            return Ok(NestedWord::zero(f.level, f.domain, g.codomain));
        }
        let mut letters = f.letters.clone();
        letters.extend(g.letters.iter().cloned());
        Ok(NestedWord {
            level: f.level,
            domain: f.domain,
            codomain: g.codomain,
            letters,
            zero: false,
        })
    }

    pub fn display<'a>(&'a self, t: &'a FiniteSemiTheory) -> impl fmt::Display + 'a {
        WordDisplay { word: self, table: t }
    }
}

struct WordDisplay<'a> {
    word: &'a NestedWord,
    table: &'a FiniteSemiTheory,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.word;
        if w.zero {
            return write!(f, "0[{}->{}]", w.domain, w.codomain);
        }
        if w.letters.is_empty() {
            return write!(f, "<>[{}]", w.domain);
        }
        f.write_str("<")?;
        for (i, c) in w.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match c {
                Cell::Atom(m) => f.write_str(&self.table.mor(*m).name)?,
                Cell::Word(inner) => write!(f, "{}", inner.display(self.table))?,
            }
        }
        f.write_str(">")
    }
}

/// The counit: composes everything down to a table morphism.
pub fn eval_psi(t: &FiniteSemiTheory, w: &NestedWord) -> Result<MorId> {
    if w.zero {
        return t.through_zero(w.domain, w.codomain);
    }
    let mut acc = t.identity(w.domain)?;
    for c in &w.letters {
        let f = match c {
            Cell::Atom(f) => *f,
            Cell::Word(inner) => eval_psi(t, inner)?,
        };
        acc = t.compose(f, acc)?;
    }
    Ok(acc)
}

/// The section `ψ`: the `k`-fold singleton word on `f`.
pub fn lift_psi(t: &FiniteSemiTheory, f: MorId, k: usize) -> Result<NestedWord> {
    if f.0 >= t.len() {
        return Err(Error::Table(format!("unknown morphism #{}", f.0)));
    }
    let m = t.mor(f);
    if t.touches_zero(f) {
        return Ok(NestedWord::zero(k, m.domain, m.codomain));
    }
    let mut w = NestedWord::new(t, 0, vec![Cell::Atom(f)])?;
    for level in 1..=k {
        w = NestedWord::new(t, level, vec![Cell::Word(w)])?;
    }
    Ok(w)
}

fn face_word(t: &FiniteSemiTheory, i: usize, w: &NestedWord) -> Result<Cell> {
    if w.zero {
        return Ok(if w.level == 0 {
            Cell::Atom(t.through_zero(w.domain, w.codomain)?)
        } else {
            Cell::Word(NestedWord::zero(w.level - 1, w.domain, w.codomain))
        });
    }
    if i == 0 {
        if w.level == 0 {
            return Ok(Cell::Atom(eval_psi(t, w)?));
        }
        // flatten a word of words
        let mut letters = Vec::new();
        for c in &w.letters {
            match c {
                Cell::Word(inner) => letters.extend(inner.letters.iter().cloned()),
                Cell::Atom(_) => unreachable!("letters of a positive level are words"),
            }
        }
        return Ok(Cell::Word(NestedWord {
            level: w.level - 1,
            domain: w.domain,
            codomain: w.codomain,
            letters,
            zero: false,
        }));
    }
    let letters = w
        .letters
        .iter()
        .map(|c| match c {
            Cell::Word(inner) => face_word(t, i - 1, inner),
            Cell::Atom(_) => unreachable!("face depth checked by the caller"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cell::Word(NestedWord {
        level: w.level - 1,
        domain: w.domain,
        codomain: w.codomain,
        letters,
        zero: false,
    }))
}

/// `d_i` from level `k` to level `k - 1`, for `0 <= i <= k`.
pub fn face(t: &FiniteSemiTheory, i: usize, w: &NestedWord) -> Result<NestedWord> {
    if w.level == 0 || i > w.level {
        return Err(Error::IndexOutOfRange { index: i, max: w.level });
    }
    match face_word(t, i, w)? {
        Cell::Word(r) => Ok(r),
        Cell::Atom(_) => unreachable!("faces of positive levels are words"),
    }
}

fn degeneracy_word(i: usize, w: &NestedWord) -> NestedWord {
    if w.zero {
        return NestedWord::zero(w.level + 1, w.domain, w.codomain);
    }
    let letters = if i == 0 {
        w.letters
            .iter()
            .map(|c| {
                let (domain, codomain) = match c {
                    Cell::Atom(_) => unreachable!("set below"),
                    Cell::Word(inner) => (inner.domain, inner.codomain),
                };
                Cell::Word(NestedWord {
                    level: w.level,
                    domain,
                    codomain,
                    letters: vec![c.clone()],
                    zero: false,
                })
            })
            .collect()
    } else {
        w.letters
            .iter()
            .map(|c| match c {
                Cell::Word(inner) => Cell::Word(degeneracy_word(i - 1, inner)),
                Cell::Atom(_) => unreachable!("degeneracy depth checked by the caller"),
            })
            .collect()
    };
    NestedWord {
        level: w.level + 1,
        domain: w.domain,
        codomain: w.codomain,
        letters,
        zero: false,
    }
}

/// `s_i` from level `k` to level `k + 1`, for `0 <= i <= k`.
pub fn degeneracy(t: &FiniteSemiTheory, i: usize, w: &NestedWord) -> Result<NestedWord> {
    if i > w.level {
        return Err(Error::IndexOutOfRange { index: i, max: w.level });
    }
    if i == w.level {
        // innermost depth: wrap each atom of every level-0 word
        return Ok(wrap_atoms(t, w));
    }
    Ok(degeneracy_word(i, w))
}

fn wrap_atoms(t: &FiniteSemiTheory, w: &NestedWord) -> NestedWord {
    if w.zero {
        return NestedWord::zero(w.level + 1, w.domain, w.codomain);
    }
    let letters = w
        .letters
        .iter()
        .map(|c| match c {
            Cell::Atom(f) => {
                let m = t.mor(*f);
                Cell::Word(NestedWord {
                    level: 0,
                    domain: m.domain,
                    codomain: m.codomain,
                    letters: vec![c.clone()],
                    zero: false,
                })
            }
            Cell::Word(inner) => Cell::Word(wrap_atoms(t, inner)),
        })
        .collect();
    NestedWord {
        level: w.level + 1,
        domain: w.domain,
        codomain: w.codomain,
        letters,
        zero: false,
    }
}

/// All level-`k` words whose strings have at most `max_len` letters at
/// every depth, excluding zero words. Fails once more than `cap` words
/// would be produced.
pub fn enumerate_nested(t: &FiniteSemiTheory, level: usize, max_len: usize, cap: usize) -> Result<Vec<NestedWord>> {
    let cells: Vec<Cell> = if level == 0 {
        t.ids().filter(|f| !t.touches_zero(*f)).map(Cell::Atom).collect()
    } else {
        enumerate_nested(t, level - 1, max_len, cap)?
            .into_iter()
            .map(Cell::Word)
            .collect()
    };
    let mut out: Vec<NestedWord> = (1..=t.objects()).map(|n| NestedWord::identity(level, n)).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for c in &cells {
                if c.ends(t).0 != w.codomain {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(c.clone());
                next.push(NestedWord {
                    level,
                    domain: w.domain,
                    codomain: c.ends(t).1,
                    letters,
                    zero: false,
                });
                if out.len() + next.len() > cap {
                    return Err(Error::BoundExceeded(format!(
                        "more than {cap} level-{level} words of length <= {max_len}"
                    )));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::table::TableBuilder;

    fn p2() -> FiniteSemiTheory {
        TableBuilder::new("P2", 2, false)
            .mor("p2_1", 2, 1)
            .mor("p2_2", 2, 1)
            .proj(2, 1, "p2_1")
            .proj(2, 2, "p2_2")
            .build()
            .unwrap()
    }

    #[test]
    fn lifts_and_counit() {
        let t = p2();
        let p = t.lookup("p2_1").unwrap();
        assert_eq!(lift_psi(&t, p, 0).unwrap().display(&t).to_string(), "<p2_1>");
        let id1 = t.identity(1).unwrap();
        assert_eq!(lift_psi(&t, id1, 1).unwrap().display(&t).to_string(), "<<id_1>>");
        for f in t.ids() {
            for k in 0..=2 {
                assert_eq!(eval_psi(&t, &lift_psi(&t, f, k).unwrap()).unwrap(), f);
            }
        }
        assert_eq!(
            eval_psi(&t, &NestedWord::identity(1, 2)).unwrap(),
            t.identity(2).unwrap()
        );
    }

    #[test]
    fn faces_of_a_level_one_word() {
        let t = p2();
        let id2 = t.identity(2).unwrap();
        let p = t.lookup("p2_1").unwrap();
        let a = NestedWord::new(&t, 0, vec![Cell::Atom(id2)]).unwrap();
        let b = NestedWord::new(&t, 0, vec![Cell::Atom(p)]).unwrap();
        let w = NestedWord::new(&t, 1, vec![Cell::Word(a), Cell::Word(b)]).unwrap();
        assert_eq!(w.display(&t).to_string(), "<<id_2>,<p2_1>>");
        assert_eq!(face(&t, 0, &w).unwrap().display(&t).to_string(), "<id_2,p2_1>");
        assert_eq!(face(&t, 1, &w).unwrap().display(&t).to_string(), "<id_2,p2_1>");
        assert!(face(&t, 2, &w).is_err());
        let s0 = degeneracy(&t, 0, &w).unwrap();
        assert_eq!(s0.display(&t).to_string(), "<<<id_2>>,<<p2_1>>>");
        assert_eq!(face(&t, 0, &s0).unwrap(), w);
        assert_eq!(face(&t, 1, &s0).unwrap(), w);
    }

    #[test]
    fn rejects_non_composable_letters() {
        let t = p2();
        let p = t.lookup("p2_1").unwrap();
        assert!(NestedWord::new(&t, 0, vec![Cell::Atom(p), Cell::Atom(p)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let t = p2();
        // empty words at [1], [2]; id_1; id_2, p2_1, p2_2
        assert_eq!(enumerate_nested(&t, 0, 1, 1000).unwrap().len(), 6);
        assert!(matches!(enumerate_nested(&t, 2, 3, 50), Err(Error::BoundExceeded(_))));
    }
}
