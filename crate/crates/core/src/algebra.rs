//! Finite strict algebras over a free semi-theory, evaluation of completion
//! terms in them, and the round-trip check between the extension to the
//! completion and restriction back along `phi`.
//!
//! `X[n]` is identified with `X[1]^n`, so a value of `X[n]` is a slice of
//! carrier indices and projections act as coordinate projections.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::completion::{compose_trees, enumerate_tuples, phi, Tree, TreeTuple};
use crate::error::{Error, Result};
use crate::presentation::{is_identifier, Letter, Presentation, Word};
use crate::report::Report;

/// The full table of one generator `[domain] -> [codomain]`: the entry at
/// the base-`|X|` index of the input tuple (first coordinate most
/// significant) is the output tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub domain: usize,
    pub codomain: usize,
    values: Vec<Vec<usize>>,
}

/// A finite strict algebra with carrier `X[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictAlgebra {
    name: String,
    theory: String,
    carrier: Vec<String>,
    ops: BTreeMap<String, OpTable>,
    point: Option<usize>,
}

/// Every input tuple in `X^n`, in table order.
pub fn all_inputs(carrier: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..carrier).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

impl StrictAlgebra {
    pub fn new(name: impl Into<String>, theory: impl Into<String>, carrier: Vec<String>) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::Algebra("empty carrier".into()));
        }
        for (i, c) in carrier.iter().enumerate() {
            if carrier[..i].contains(c) {
                return Err(Error::Algebra(format!("carrier element `{c}` listed twice")));
            }
        }
        Ok(StrictAlgebra {
            name: name.into(),
            theory: theory.into(),
            carrier,
            ops: BTreeMap::new(),
            point: None,
        })
    }

    /// Adds a generator table computed by `f` on every input tuple.
    pub fn with_op(
        mut self,
        name: &str,
        domain: usize,
        codomain: usize,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        let values: Vec<Vec<usize>> = all_inputs(self.carrier.len(), domain).iter().map(|x| f(x)).collect();
        for v in &values {
            if v.len() != codomain || v.iter().any(|&e| e >= self.carrier.len()) {
                return Err(Error::Algebra(format!("`{name}` produced an invalid output {v:?}")));
            }
        }
        self.ops.insert(
            name.to_string(),
            OpTable {
                domain,
                codomain,
                values,
            },
        );
        Ok(self)
    }

    pub fn with_point(mut self, point: usize) -> Result<Self> {
        if point >= self.carrier.len() {
            return Err(Error::IndexOutOfRange {
                index: point,
                max: self.carrier.len() - 1,
            });
        }
        self.point = Some(point);
        Ok(self)
    }

    /// A random algebra over `p` with the given carrier size.
    pub fn random(p: &Presentation, size: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let carrier = (0..size).map(|i| i.to_string()).collect();
        let mut a = StrictAlgebra::new(format!("random{size}_{seed}"), p.name(), carrier)?;
        for g in p.generators() {
            let values = all_inputs(size, g.domain)
                .iter()
                .map(|_| (0..g.codomain).map(|_| rng.gen_range(0..size)).collect())
                .collect();
            a.ops.insert(
                g.name.clone(),
                OpTable {
                    domain: g.domain,
                    codomain: g.codomain,
                    values,
                },
            );
        }
        if p.is_pointed() {
            let pt = rng.gen_range(0..size);
            a.point = Some(pt);
            for table in a.ops.values_mut() {
                table.values[StrictAlgebra::index_of(size, &vec![pt; table.domain])] = vec![pt; table.codomain];
            }
        }
        Ok(a)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theory(&self) -> &str {
        &self.theory
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn point(&self) -> Option<usize> {
        self.point
    }

    pub fn op(&self, name: &str) -> Option<&OpTable> {
        self.ops.get(name)
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.carrier
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Algebra(format!("`{name}` is not in the carrier")))
    }

    /// Parses a comma-separated list of carrier elements, e.g. `a,b`.
    pub fn parse_elements(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split(',').map(|e| self.element(e.trim())).collect()
    }

    pub fn format_elements(&self, xs: &[usize]) -> String {
        let names: Vec<&str> = xs.iter().map(|&x| self.carrier[x].as_str()).collect();
        format!("({})", names.join(","))
    }

    /// Applies the table of generator `name` to `x`.
    pub fn apply(&self, name: &str, x: &[usize]) -> Result<&[usize]> {
        let table = self
            .ops
            .get(name)
            .ok_or_else(|| Error::Algebra(format!("generator `{name}` is absent from the algebra")))?;
        if x.len() != table.domain {
            return Err(Error::ArityMismatch {
                expected: table.domain,
                found: x.len(),
            });
        }
        Ok(&table.values[StrictAlgebra::index_of(self.size(), x)])
    }

    fn index_of(size: usize, x: &[usize]) -> usize {
        x.iter().fold(0usize, |acc, &e| acc * size + e)
    }

    fn basepoint(&self) -> Result<usize> {
        self.point.ok_or(Error::NotPointed)
    }

    /// Checks that the algebra interprets exactly the generators of `p`,
    /// with matching arities, and has a basepoint iff `p` is pointed.
    pub fn check_against(&self, p: &Presentation) -> Result<()> {
        for g in p.generators() {
            match self.ops.get(&g.name) {
                None => {
                    return Err(Error::Algebra(format!(
                        "generator `{}` is absent from the algebra",
                        g.name
                    )))
                }
                Some(t) if (t.domain, t.codomain) != (g.domain, g.codomain) => {
                    return Err(Error::Algebra(format!(
                        "`{}` is [{}] -> [{}] in the algebra but [{}] -> [{}] in the theory",
                        g.name, t.domain, t.codomain, g.domain, g.codomain
                    )));
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = self.ops.keys().find(|k| p.generator(k).is_none()) {
            return Err(Error::UnknownGenerator(extra.clone()));
        }
        match (p.is_pointed(), self.point) {
            (true, None) => Err(Error::Algebra("pointed theory needs a `point` line".into())),
            (false, Some(_)) => Err(Error::Pointed),
            (true, Some(pt)) => {
                // [0] is initial, so every operation preserves the basepoint
                for (name, table) in &self.ops {
                    let out = self.apply(name, &vec![pt; table.domain])?;
                    if out.iter().any(|&y| y != pt) {
                        return Err(Error::Algebra(format!("`{name}` does not preserve the basepoint")));
                    }
                }
                Ok(())
            }
            (false, None) => Ok(()),
        }
    }

    /// Evaluates a tree `[n] -> [1]` at `x` in `X1^n`.
    pub fn eval_tree(&self, t: &Tree, x: &[usize]) -> Result<usize> {
        if t.source_arity() != x.len() {
            return Err(Error::ArityMismatch {
                expected: t.source_arity(),
                found: x.len(),
            });
        }
        self.eval_tree_unchecked(t, x)
    }

    fn eval_tree_unchecked(&self, t: &Tree, x: &[usize]) -> Result<usize> {
        match t {
            Tree::Proj { index, .. } => Ok(x[index - 1]),
            Tree::Iota { .. } => self.basepoint(),
            Tree::Node {
                op,
                component,
                children,
            } => {
                let args = children
                    .iter()
                    .map(|c| self.eval_tree_unchecked(c, x))
                    .collect::<Result<Vec<_>>>()?;
                let out = self.apply(op, &args)?;
                out.get(component - 1).copied().ok_or(Error::IndexOutOfRange {
                    index: *component,
                    max: out.len(),
                })
            }
        }
    }

    /// Evaluates a tuple `[n] -> [m]` componentwise.
    pub fn eval_tuple(&self, t: &TreeTuple, x: &[usize]) -> Result<Vec<usize>> {
        if t.domain != x.len() {
            return Err(Error::ArityMismatch {
                expected: t.domain,
                found: x.len(),
            });
        }
        t.components.iter().map(|c| self.eval_tree_unchecked(c, x)).collect()
    }

    /// Evaluates a word letter by letter, without going through trees.
    pub fn eval_word(&self, w: &Word, x: &[usize]) -> Result<Vec<usize>> {
        if w.domain != x.len() {
            return Err(Error::ArityMismatch {
                expected: w.domain,
                found: x.len(),
            });
        }
        let mut cur = x.to_vec();
        for letter in w.letters() {
            cur = match letter {
                Letter::Proj { index, .. } => vec![cur[index - 1]],
                Letter::Gen(g) => self.apply(&g.name, &cur)?.to_vec(),
                Letter::Iota(_) => vec![self.basepoint()?],
                Letter::ToZero(_) => Vec::new(),
                Letter::FromZero(m) => vec![self.basepoint()?; *m],
            };
        }
        Ok(cur)
    }

    /// Parses the algebra file format.
    pub fn parse(text: &str) -> Result<StrictAlgebra> {
        let syntax = |line: usize, msg: String| Error::Syntax { line, msg };
        let mut header: Option<(String, String)> = None;
        let mut carrier: Option<Vec<String>> = None;
        let mut point: Option<(usize, String)> = None;
        let mut rows: BTreeMap<String, Vec<TableRow>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "algebra" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    match parts.as_slice() {
                        [name, "over", theory] => header = Some((name.to_string(), theory.to_string())),
                        _ => return Err(syntax(line_no, "expected `algebra <name> over <theory>`".into())),
                    }
                }
                "carrier" => {
                    if carrier.is_some() {
                        return Err(syntax(line_no, "duplicate `carrier` line".into()));
                    }
                    carrier = Some(rest.split_whitespace().map(str::to_string).collect());
                }
                "point" => point = Some((line_no, rest.to_string())),
                op if is_identifier(op) => {
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| syntax(line_no, format!("expected `{op} (..) = (..)`")))?;
                    let tuple = |s: &str| -> Result<Vec<String>> {
                        let s = s.trim();
                        let inner = s
                            .strip_prefix('(')
                            .and_then(|s| s.strip_suffix(')'))
                            .ok_or_else(|| syntax(line_no, format!("`{s}` is not a parenthesised tuple")))?;
                        Ok(inner
                            .split(',')
                            .map(|e| e.trim().to_string())
                            .filter(|e| !e.is_empty())
                            .collect())
                    };
                    rows.entry(op.to_string())
                        .or_default()
                        .push((line_no, tuple(lhs)?, tuple(rhs)?));
                }
                other => return Err(syntax(line_no, format!("unknown directive `{other}`"))),
            }
        }
        let (name, theory) = header.ok_or_else(|| syntax(1, "missing `algebra <name> over <theory>` line".into()))?;
        let carrier = carrier.ok_or_else(|| syntax(1, "missing `carrier` line".into()))?;
        let mut a = StrictAlgebra::new(name, theory, carrier)?;
        let size = a.size();
        for (op, rows) in rows {
            let (first_line, first_in, first_out) = &rows[0];
            let (domain, codomain) = (first_in.len(), first_out.len());
            let mut values: Vec<Option<Vec<usize>>> = vec![None; size.pow(domain as u32)];
            for (line, input, output) in &rows {
                if input.len() != domain || output.len() != codomain {
                    return Err(syntax(
                        *line,
                        format!("`{op}` is [{domain}] -> [{codomain}] on line {first_line}"),
                    ));
                }
                let resolve = |names: &[String]| -> Result<Vec<usize>> {
                    names
                        .iter()
                        .map(|n| a.element(n).map_err(|e| syntax(*line, e.to_string())))
                        .collect()
                };
                let input = resolve(input)?;
                let output = resolve(output)?;
                let idx = StrictAlgebra::index_of(size, &input);
                if values[idx].replace(output).is_some() {
                    return Err(syntax(*line, format!("`{op}` defined twice on this input")));
                }
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(idx, v)| {
                    v.ok_or_else(|| {
                        let missing = all_inputs(size, domain).swap_remove(idx);
                        Error::Algebra(format!("`{op}` is not defined on {}", a.format_elements(&missing)))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            a.ops.insert(
                op,
                OpTable {
                    domain,
                    codomain,
                    values,
                },
            );
        }
        if let Some((line, p)) = point {
            let idx = a.element(&p).map_err(|e| syntax(line, e.to_string()))?;
            a.point = Some(idx);
        }
        Ok(a)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algebra {} over {}", self.name, self.theory);
        let _ = writeln!(out, "carrier {}", self.carrier.join(" "));
        if let Some(p) = self.point {
            let _ = writeln!(out, "point {}", self.carrier[p]);
        }
        for (name, table) in &self.ops {
            for (x, y) in all_inputs(self.size(), table.domain).iter().zip(&table.values) {
                let _ = writeln!(out, "{name} {} = {}", self.format_elements(x), self.format_elements(y));
            }
        }
        out
    }
}

/// Tree evaluation strategy, so that the round-trip check can be run
/// against a deliberately broken evaluator.
pub trait Evaluator {
    fn eval_tuple(&self, a: &StrictAlgebra, t: &TreeTuple, x: &[usize]) -> Result<Vec<usize>>;
}

/// The standard term evaluation.
pub struct TermEvaluation;

impl Evaluator for TermEvaluation {
    fn eval_tuple(&self, a: &StrictAlgebra, t: &TreeTuple, x: &[usize]) -> Result<Vec<usize>> {
        a.eval_tuple(t, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundtripBounds {
    pub max_nodes: usize,
    pub max_word_len: usize,
    pub max_object: usize,
}

/// One `op (inputs) = (outputs)` line with its line number.
type TableRow = (usize, Vec<String>, Vec<String>);

pub fn check_roundtrip(a: &StrictAlgebra, p: &Presentation, bounds: RoundtripBounds) -> Result<Report> {
    check_roundtrip_with(a, p, bounds, &TermEvaluation)
}

/// Checks that restricting the term-evaluation extension along `phi`
/// gives back the algebra on every bounded word, and that the extension
/// is functorial on every bounded composable pair of tuples.
pub fn check_roundtrip_with(
    a: &StrictAlgebra,
    p: &Presentation,
    bounds: RoundtripBounds,
    ev: &dyn Evaluator,
) -> Result<Report> {
    a.check_against(p)?;
    let mut report = Report::new("roundtrip")
        .bound("max_nodes", bounds.max_nodes)
        .bound("max_word_len", bounds.max_word_len)
        .bound("max_object", bounds.max_object);
    let lo = usize::from(!p.is_pointed());
    let objects = lo..=bounds.max_object;

    for n in objects.clone() {
        let inputs = all_inputs(a.size(), n);
        for w in p.enumerate_words_from(n, bounds.max_word_len)? {
            if w.codomain > bounds.max_object {
                continue;
            }
            let t = phi(p, &w)?;
            for x in &inputs {
                report.case();
                let direct = a.eval_word(&w, x)?;
                match ev.eval_tuple(a, &t, x) {
                    Ok(v) if v == direct => {}
                    Ok(v) => report.fail(format!(
                        "word {w} at {}: phi gives {}, direct evaluation {}",
                        a.format_elements(x),
                        a.format_elements(&v),
                        a.format_elements(&direct)
                    )),
                    Err(e) => report.fail(format!("word {w} at {}: {e}", a.format_elements(x))),
                }
            }
        }
    }

    let homs: BTreeMap<(usize, usize), Vec<TreeTuple>> = objects
        .clone()
        .flat_map(|n| objects.clone().map(move |m| (n, m)))
        .map(|(n, m)| enumerate_tuples(p, n, m, bounds.max_nodes).map(|h| ((n, m), h)))
        .collect::<Result<_>>()?;
    for n in objects.clone() {
        let inputs = all_inputs(a.size(), n);
        for m in objects.clone() {
            // t(x) for each t: [n] -> [m], computed once
            let inner: Vec<(&TreeTuple, Vec<Vec<usize>>)> = homs[&(n, m)]
                .iter()
                .map(|t| Ok((t, inputs.iter().map(|x| ev.eval_tuple(a, t, x)).collect::<Result<_>>()?)))
                .collect::<Result<_>>()?;
            for k in objects.clone() {
                for s in &homs[&(m, k)] {
                    for (t, tx) in &inner {
                        let st = compose_trees(s, t)?;
                        for (x, tx) in inputs.iter().zip(tx) {
                            report.case();
                            let left = ev.eval_tuple(a, &st, x)?;
                            let right = ev.eval_tuple(a, s, tx)?;
                            if left != right {
                                report.fail(format!(
                                    "s={s}, t={t} at {}: eval(s∘t) = {}, eval(s)(eval(t)) = {}",
                                    a.format_elements(x),
                                    a.format_elements(&left),
                                    a.format_elements(&right)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report.finish())
}
