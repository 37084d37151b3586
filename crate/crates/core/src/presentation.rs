//! Finitely presented free semi-theories and the words of the underlying
//! free category.
//!
//! Projections `p(n,k)` exist at every arity and are never declared. In
//! pointed mode the object `[0]` is both initial and terminal, so every word
//! passing through it collapses to a canonical `tozero;fromzero` pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A declared generator `name : [domain] -> [codomain]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorDecl {
    pub name: String,
    pub domain: usize,
    pub codomain: usize,
}

/// A finitely presented free semi-theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    pointed: bool,
    generators: BTreeMap<String, GeneratorDecl>,
    max_object: Option<usize>,
}

/// Names that can never be used for generators, since the term and word
/// syntaxes give them a fixed meaning.
pub fn is_reserved_name(name: &str) -> bool {
    fn digits(s: &str) -> bool {
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
    }
    if name == "id" {
        return true;
    }
    for prefix in ["iota", "tozero", "fromzero"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if digits(rest) {
                return true;
            }
        }
    }
    if let Some(rest) = name.strip_prefix('p') {
        let mut parts = rest.splitn(2, '_');
        let n = parts.next().unwrap_or("");
        match parts.next() {
            None => return digits(n),
            Some(k) => return digits(n) && digits(k),
        }
    }
    false
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(name: impl Into<String>, pointed: bool) -> Self {
        Presentation {
            name: name.into(),
            pointed,
            generators: BTreeMap::new(),
            max_object: None,
        }
    }

    /// Builder-style variant of [`Presentation::add_generator`].
    pub fn with_generator(mut self, name: &str, domain: usize, codomain: usize) -> Result<Self> {
        self.add_generator(name, domain, codomain)?;
        Ok(self)
    }

    pub fn add_generator(&mut self, name: &str, domain: usize, codomain: usize) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::MalformedTerm(format!("`{name}` is not an identifier")));
        }
        if is_reserved_name(name) {
            return Err(Error::ReservedName(name.to_string()));
        }
        if domain == 0 || codomain == 0 {
            return Err(Error::ZeroArity(name.to_string()));
        }
        if self.generators.contains_key(name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        self.generators.insert(
            name.to_string(),
            GeneratorDecl {
                name: name.to_string(),
                domain,
                codomain,
            },
        );
        Ok(())
    }

    pub fn set_max_object(&mut self, n: Option<usize>) {
        self.max_object = n;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorDecl> {
        self.generators.get(name)
    }

    /// Generators in name order.
    pub fn generators(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.generators.values()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Largest arity (domain or codomain) among the declared generators.
    pub fn max_arity(&self) -> usize {
        self.generators
            .values()
            .map(|g| g.domain.max(g.codomain))
            .max()
            .unwrap_or(0)
    }

    /// Explicit `maxobject` bound, or the largest arity plus two.
    pub fn max_object(&self) -> usize {
        self.max_object.unwrap_or(self.max_arity() + 2)
    }

    pub fn check_object(&self, n: usize) -> Result<()> {
        if n == 0 && !self.pointed {
            return Err(Error::InvalidObject(0, "unpointed"));
        }
        Ok(())
    }

    /// Parses the line-oriented presentation format.
    ///
    /// ```text
    /// theory Magma
    /// unpointed
    /// gen mu : 2 -> 1
    /// maxobject 4
    /// ```
    pub fn parse(text: &str) -> Result<Presentation> {
        let mut name: Option<String> = None;
        let mut mode: Option<bool> = None;
        let mut gens: Vec<(usize, String, usize, usize)> = Vec::new();
        let mut max_object = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| Error::Syntax {
                line: line_no,
                msg: msg.to_string(),
            };
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or("");
            match keyword {
                "theory" => {
                    let id = words.next().ok_or_else(|| syntax("expected theory name"))?;
                    if !is_identifier(id) || words.next().is_some() {
                        return Err(syntax("expected `theory <identifier>`"));
                    }
                    if name.replace(id.to_string()).is_some() {
                        return Err(syntax("theory name given twice"));
                    }
                }
                "pointed" | "unpointed" => {
                    if words.next().is_some() {
                        return Err(syntax("unexpected text after mode"));
                    }
                    if mode.replace(keyword == "pointed").is_some() {
                        return Err(syntax("mode given twice"));
                    }
                }
                "maxobject" => {
                    let n = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| syntax("expected `maxobject <N>` with N >= 1"))?;
                    if words.next().is_some() {
                        return Err(syntax("unexpected text after maxobject"));
                    }
                    max_object = Some(n);
                }
                "gen" => {
                    let rest = line["gen".len()..].trim();
                    let (lhs, rhs) = rest
                        .split_once(':')
                        .ok_or_else(|| syntax("expected `gen <name> : <m> -> <k>`"))?;
                    let gname = lhs.trim();
                    let (m, k) = rhs.split_once("->").ok_or_else(|| syntax("expected `<m> -> <k>`"))?;
                    let parse_arity = |s: &str| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| syntax(&format!("`{}` is not a natural number", s.trim())))
                    };
                    let (m, k) = (parse_arity(m)?, parse_arity(k)?);
                    if !is_identifier(gname) {
                        return Err(syntax(&format!("`{gname}` is not an identifier")));
                    }
                    gens.push((line_no, gname.to_string(), m, k));
                }
                other => return Err(syntax(&format!("unknown directive `{other}`"))),
            }
        }

        let mut p = Presentation::new(name.unwrap_or_else(|| "anonymous".into()), mode.unwrap_or(false));
        for (line, gname, m, k) in gens {
            match p.add_generator(&gname, m, k) {
                Ok(()) => {}
                Err(Error::ZeroArity(n)) if !p.pointed => {
                    return Err(Error::Syntax {
                        line,
                        msg: format!("generator `{n}` has arity 0 in unpointed mode"),
                    })
                }
                Err(e @ Error::DuplicateGenerator(_)) => return Err(e),
                Err(e @ Error::ReservedName(_)) => return Err(e),
                Err(e) => {
                    return Err(Error::Syntax {
                        line,
                        msg: e.to_string(),
                    })
                }
            }
        }
        p.max_object = max_object;
        Ok(p)
    }

    /// Renders the presentation back into the file format.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "theory {}\n{}\n",
            self.name,
            if self.pointed { "pointed" } else { "unpointed" }
        );
        for g in self.generators.values() {
            out.push_str(&format!("gen {} : {} -> {}\n", g.name, g.domain, g.codomain));
        }
        if let Some(n) = self.max_object {
            out.push_str(&format!("maxobject {n}\n"));
        }
        out
    }

    /// Letters available out of object `[a]`, with objects clamped to `max_obj`.
    fn letters_from(&self, a: usize, max_obj: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        if a == 0 {
            for m in 1..=max_obj {
                out.push(Letter::FromZero(m));
            }
            return out;
        }
        if a >= 2 {
            for k in 1..=a {
                out.push(Letter::Proj { arity: a, index: k });
            }
        }
        for g in self
            .generators
            .values()
            .filter(|g| g.domain == a && g.codomain <= max_obj)
        {
            out.push(Letter::Gen(g.clone()));
        }
        if self.pointed {
            out.push(Letter::ToZero(a));
        }
        out
    }

    /// The one-letter word for `letter`, validated against this presentation.
    pub fn letter_word(&self, letter: Letter) -> Result<Word> {
        match &letter {
            Letter::Proj { arity, index } => {
                if *arity == 0 || *index == 0 || index > arity {
                    return Err(Error::MalformedTerm(format!("invalid projection {letter}")));
                }
            }
            Letter::Gen(g) => match self.generators.get(&g.name) {
                Some(decl) if decl == g => {}
                _ => return Err(Error::UnknownGenerator(g.name.clone())),
            },
            Letter::Iota(_) | Letter::ToZero(_) | Letter::FromZero(_) => {
                if !self.pointed {
                    return Err(Error::NotPointed);
                }
                if matches!(letter, Letter::ToZero(0) | Letter::FromZero(0)) {
                    return Err(Error::MalformedTerm(format!("{letter} is an identity")));
                }
            }
        }
        let (domain, codomain) = (letter.domain(), letter.codomain());
        Ok(Word::from_letters(domain, codomain, vec![letter], self.pointed))
    }

    /// Looks up a generator letter by name.
    pub fn gen_letter(&self, name: &str) -> Result<Letter> {
        self.generators
            .get(name)
            .map(|g| Letter::Gen(g.clone()))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn identity_word(&self, n: usize) -> Result<Word> {
        self.check_object(n)?;
        Ok(Word::identity(n))
    }

    /// `g ∘ f`: apply `f` first, then `g`.
    pub fn compose_words(&self, g: &Word, f: &Word) -> Result<Word> {
        if f.codomain != g.domain {
            return Err(Error::ObjectMismatch {
                expected: g.domain,
                found: f.codomain,
            });
        }
        let mut letters = f.letters.clone();
        letters.extend(g.letters.iter().cloned());
        Ok(Word::from_letters(f.domain, g.codomain, letters, self.pointed))
    }

    /// All words `[n] -> [m]` with at most `max_len` letters, canonically
    /// ordered. Intermediate objects are clamped to `max(n, m, max_object)`.
    pub fn enumerate_words(&self, n: usize, m: usize, max_len: usize) -> Result<Vec<Word>> {
        let all = self.enumerate_words_from(n, max_len)?;
        Ok(all.into_iter().filter(|w| w.codomain == m).collect())
    }

    /// All words out of `[n]` with at most `max_len` letters.
    pub fn enumerate_words_from(&self, n: usize, max_len: usize) -> Result<Vec<Word>> {
        self.check_object(n)?;
        let max_obj = self.max_object().max(n);
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        let mut frontier = vec![Word::identity(n)];
        seen.insert(Word::identity(n));
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for letter in self.letters_from(w.codomain, max_obj) {
                    let cod = letter.codomain();
                    let mut letters = w.letters.clone();
                    letters.push(letter);
                    let word = Word::from_letters(w.domain, cod, letters, self.pointed);
                    if seen.insert(word.clone()) {
                        next.push(word);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }

    /// Parses a word given as `id` or letters in application order separated
    /// by `;`, e.g. `mu` or `delta ; p2_1`.
    pub fn parse_word(&self, source: usize, text: &str) -> Result<Word> {
        self.check_object(source)?;
        let text = text.trim();
        let mut word = Word::identity(source);
        if text == "id" || text.is_empty() {
            return Ok(word);
        }
        for token in text.split(';') {
            let letter = self.parse_letter(token.trim())?;
            let lw = self.letter_word(letter)?;
            word = self.compose_words(&lw, &word)?;
        }
        Ok(word)
    }

    fn parse_letter(&self, token: &str) -> Result<Letter> {
        let num = |s: &str| s.parse::<usize>().ok();
        if let Some(rest) = token.strip_prefix("iota").and_then(num) {
            return Ok(Letter::Iota(rest));
        }
        if let Some(rest) = token.strip_prefix("tozero").and_then(num) {
            return Ok(Letter::ToZero(rest));
        }
        if let Some(rest) = token.strip_prefix("fromzero").and_then(num) {
            return Ok(Letter::FromZero(rest));
        }
        if let Some(rest) = token.strip_prefix('p') {
            if let Some((a, b)) = rest.split_once('_') {
                if let (Some(arity), Some(index)) = (num(a), num(b)) {
                    return Ok(Letter::Proj { arity, index });
                }
            }
        }
        self.gen_letter(token)
    }
}

/// A letter of the free category underlying a presentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Proj {
        arity: usize,
        index: usize,
    },
    Gen(GeneratorDecl),
    /// `[n] -> [0] -> [1]`; normalized into `ToZero(n) ; FromZero(1)`.
    Iota(usize),
    ToZero(usize),
    FromZero(usize),
}

impl Letter {
    pub fn domain(&self) -> usize {
        match self {
            Letter::Proj { arity, .. } => *arity,
            Letter::Gen(g) => g.domain,
            Letter::Iota(n) | Letter::ToZero(n) => *n,
            Letter::FromZero(_) => 0,
        }
    }

    pub fn codomain(&self) -> usize {
        match self {
            Letter::Proj { .. } | Letter::Iota(_) => 1,
            Letter::Gen(g) => g.codomain,
            Letter::ToZero(_) => 0,
            Letter::FromZero(m) => *m,
        }
    }

    pub fn is_projection(&self) -> bool {
        matches!(self, Letter::Proj { .. })
    }

    fn touches_zero(&self) -> bool {
        matches!(self, Letter::Iota(_) | Letter::ToZero(_) | Letter::FromZero(_))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Proj { arity, index } => write!(f, "p{arity}_{index}"),
            Letter::Gen(g) => write!(f, "{}", g.name),
            Letter::Iota(n) => write!(f, "iota{n}"),
            Letter::ToZero(n) => write!(f, "tozero{n}"),
            Letter::FromZero(m) => write!(f, "fromzero{m}"),
        }
    }
}

/// A morphism of the free category: letters in application order
/// (`letters[0]` is applied first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub domain: usize,
    pub codomain: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(n: usize) -> Word {
        Word {
            domain: n,
            codomain: n,
            letters: Vec::new(),
        }
    }

    /// Builds a word from already composable letters and brings it into
    /// normal form: `p1_1` letters are dropped and, when `pointed`, anything
    /// factoring through `[0]` collapses to the canonical pair.
    pub(crate) fn from_letters(domain: usize, codomain: usize, letters: Vec<Letter>, pointed: bool) -> Word {
        let through_zero = domain == 0 || codomain == 0 || letters.iter().any(Letter::touches_zero);
        let letters = if pointed && through_zero {
            let mut v = Vec::new();
            if domain > 0 {
                v.push(Letter::ToZero(domain));
            }
            if codomain > 0 {
                v.push(Letter::FromZero(codomain));
            }
            v
        } else {
            letters
                .into_iter()
                .filter(|l| !matches!(l, Letter::Proj { arity: 1, index: 1 }))
                .collect()
        };
        Word {
            domain,
            codomain,
            letters,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when the first applied letter is not a projection (vacuously true
    /// for identities).
    pub fn starts_with_non_projection(&self) -> bool {
        self.letters.first().is_none_or(|l| !l.is_projection())
    }

    /// Sub-word made of the letters in `range` (application order).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        let letters: Vec<Letter> = self.letters[range.clone()].to_vec();
        let domain = if range.start == 0 {
            self.domain
        } else {
            self.letters[range.start - 1].codomain()
        };
        let codomain = letters.last().map(Letter::codomain).unwrap_or(domain);
        Word {
            domain,
            codomain,
            letters,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id[{}]", self.domain);
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn magma() -> Presentation {
        Presentation::parse("theory Magma\nunpointed\ngen mu : 2 -> 1").unwrap()
    }

    #[test]
    fn parses_magma() {
        let p = magma();
        assert_eq!(p.name(), "Magma");
        assert!(!p.is_pointed());
        assert_eq!(
            p.generator("mu"),
            Some(&GeneratorDecl {
                name: "mu".into(),
                domain: 2,
                codomain: 1
            })
        );
        assert_eq!(p.max_object(), 4);
    }

    #[test]
    fn parses_pointed() {
        let p = Presentation::parse("theory PtMagma\npointed\ngen mu : 2 -> 1").unwrap();
        assert!(p.is_pointed());
        assert_eq!(p.generator_count(), 1);
    }

    #[test]
    fn rejects_duplicates_and_reserved() {
        assert_eq!(
            Presentation::parse("gen mu : 2 -> 1\ngen mu : 3 -> 1"),
            Err(Error::DuplicateGenerator("mu".into()))
        );
        assert_eq!(
            Presentation::parse("gen p2_1 : 2 -> 1"),
            Err(Error::ReservedName("p2_1".into()))
        );
        assert_eq!(
            Presentation::parse("gen iota3 : 2 -> 1"),
            Err(Error::ReservedName("iota3".into()))
        );
    }

    #[test]
    fn zero_arity_in_unpointed_mode_is_a_syntax_error() {
        let err = Presentation::parse("theory T\nunpointed\n\ngen c : 0 -> 1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Presentation::parse("theory T\n# comment\ngen mu 2 -> 1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = Presentation::parse("theory T\nbogus").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn text_round_trip() {
        let p = Presentation::parse("theory Two\nunpointed\ngen mu : 2 -> 1\ngen delta : 1 -> 2\nmaxobject 5").unwrap();
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn identity_words() {
        let p = magma();
        let id2 = p.identity_word(2).unwrap();
        assert_eq!((id2.domain, id2.codomain, id2.len()), (2, 2, 0));
        assert_eq!(p.identity_word(0), Err(Error::InvalidObject(0, "unpointed")));
        let proj = p.letter_word(Letter::Proj { arity: 2, index: 1 }).unwrap();
        assert_eq!(p.compose_words(&proj, &id2).unwrap(), proj);
        let proj = p.letter_word(Letter::Proj { arity: 2, index: 2 }).unwrap();
        assert_eq!(p.compose_words(&proj, &id2).unwrap(), proj);
    }

    #[test]
    fn p11_is_the_identity() {
        let p = magma();
        let w = p.letter_word(Letter::Proj { arity: 1, index: 1 }).unwrap();
        assert_eq!(w, Word::identity(1));
    }

    #[test]
    fn composition_checks_objects() {
        let p = magma();
        let mu = p.letter_word(p.gen_letter("mu").unwrap()).unwrap();
        assert_eq!(
            p.compose_words(&mu, &mu),
            Err(Error::ObjectMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn enumerates_magma_words() {
        let p = magma();
        let words = p.enumerate_words(2, 1, 1).unwrap();
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["p2_1", "p2_2", "mu"]);
        assert_eq!(p.enumerate_words(1, 1, 3).unwrap(), vec![Word::identity(1)]);
        for n in 1..=3 {
            assert_eq!(p.enumerate_words(n, n, 0).unwrap(), vec![Word::identity(n)]);
        }
    }

    #[test]
    fn pointed_normal_form_collapses_through_zero() {
        let p = Presentation::parse("theory PtMagma\npointed\ngen mu : 2 -> 1").unwrap();
        let mu = p.letter_word(p.gen_letter("mu").unwrap()).unwrap();
        let iota1 = p.letter_word(Letter::Iota(1)).unwrap();
        let iota2 = p.letter_word(Letter::Iota(2)).unwrap();
        assert_eq!(iota2.letters(), &[Letter::ToZero(2), Letter::FromZero(1)]);
        // iota1 ∘ mu factors through [0], so it equals iota2.
        assert_eq!(p.compose_words(&iota1, &mu).unwrap(), iota2);
        let z = p.letter_word(Letter::ToZero(2)).unwrap();
        let back = p.letter_word(Letter::FromZero(2)).unwrap();
        let through = p.compose_words(&back, &z).unwrap();
        assert_eq!(through.letters(), &[Letter::ToZero(2), Letter::FromZero(2)]);
    }

    #[test]
    fn unpointed_rejects_zero_letters() {
        let p = magma();
        assert_eq!(p.letter_word(Letter::Iota(2)), Err(Error::NotPointed));
    }

    #[test]
    fn parse_word_syntax() {
        let p = Presentation::parse("theory Two\nunpointed\ngen mu : 2 -> 1\ngen delta : 1 -> 2").unwrap();
        let w = p.parse_word(1, "delta ; mu").unwrap();
        assert_eq!((w.domain, w.codomain, w.len()), (1, 1, 2));
        assert_eq!(w.to_string(), "delta ; mu");
        assert_eq!(p.parse_word(2, "id").unwrap(), Word::identity(2));
        assert!(p.parse_word(1, "mu").is_err());
    }
}
