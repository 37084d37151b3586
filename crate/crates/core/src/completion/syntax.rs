//! Text syntax for trees and tuples: `p<n>_<k>`, `iota<n>`,
//! `name_<i>(t1,...,tm)` and `(t1; ...; tm)`.

use super::{Tree, TreeTuple};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a term"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn error(&self, msg: &str) -> Error {
        Error::MalformedTerm(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

fn number(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn tree(cur: &mut Cursor<'_>) -> Result<Tree> {
    let word = cur.ident()?;
    if cur.peek() == Some('(') {
        let (op, component) = word
            .rsplit_once('_')
            .and_then(|(op, c)| number(c).map(|c| (op, c)))
            .filter(|(op, _)| !op.is_empty())
            .ok_or_else(|| cur.error(&format!("`{word}` is not of the form name_<i>")))?;
        cur.expect('(')?;
        let mut children = vec![tree(cur)?];
        while cur.peek() == Some(',') {
            cur.expect(',')?;
            children.push(tree(cur)?);
        }
        cur.expect(')')?;
        return Ok(Tree::node(op, component, children));
    }
    if let Some(n) = word.strip_prefix("iota").and_then(number) {
        return Ok(Tree::iota(n));
    }
    if let Some((a, k)) = word.strip_prefix('p').and_then(|r| r.split_once('_')) {
        if let (Some(arity), Some(index)) = (number(a), number(k)) {
            if index == 0 || index > arity {
                return Err(cur.error(&format!("invalid projection `{word}`")));
            }
            return Ok(Tree::proj(arity, index));
        }
    }
    Err(cur.error(&format!("`{word}` is not a leaf")))
}

/// Parses a single tree.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let mut cur = Cursor { src: text, pos: 0 };
    let t = tree(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(t)
}

/// Parses `(t1; ...; tm)` or a bare tree. The domain is read off the leaves;
/// `domain` is required for the empty tuple and checked otherwise.
pub fn parse_tuple(text: &str, domain: Option<usize>) -> Result<TreeTuple> {
    let mut cur = Cursor { src: text, pos: 0 };
    let mut components = Vec::new();
    if cur.peek() == Some('(') {
        cur.expect('(')?;
        if cur.peek() != Some(')') {
            components.push(tree(&mut cur)?);
            while cur.peek() == Some(';') {
                cur.expect(';')?;
                components.push(tree(&mut cur)?);
            }
        }
        cur.expect(')')?;
    } else {
        components.push(tree(&mut cur)?);
    }
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    let inferred = components.first().map(Tree::source_arity);
    let domain = match (inferred, domain) {
        (Some(a), Some(d)) if a != d => {
            return Err(Error::ObjectMismatch { expected: d, found: a });
        }
        (Some(a), _) => a,
        (None, Some(d)) => d,
        (None, None) => return Err(Error::MalformedTerm("empty tuple needs an explicit source".into())),
    };
    let tuple = TreeTuple::new(domain, components);
    if !tuple.is_well_typed() {
        return Err(Error::MalformedTerm(format!(
            "components of {tuple} disagree on the source object"
        )));
    }
    Ok(tuple)
}
