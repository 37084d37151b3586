//! Finite semi-theories given by a full composition table.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::is_identifier;

/// Index of a morphism in its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorDecl {
    pub name: String,
    pub domain: usize,
    pub codomain: usize,
}

/// A finite semi-theory: objects `[1]..[objects]` (and `[0]` when pointed),
/// named morphisms, identities, a composition table and the designated
/// projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemiTheory {
    name: String,
    objects: usize,
    pointed: bool,
    mors: Vec<MorDecl>,
    by_name: BTreeMap<String, MorId>,
    identities: BTreeMap<usize, MorId>,
    /// `(g, f) -> g ∘ f`
    composition: HashMap<(MorId, MorId), MorId>,
    projections: BTreeMap<(usize, usize), MorId>,
}

/// Builder for tables defined in code.
#[derive(Debug, Clone)]
pub struct TableBuilder {
    name: String,
    objects: usize,
    pointed: bool,
    mors: Vec<MorDecl>,
    composites: Vec<(String, String, String)>,
    projections: Vec<(usize, usize, String)>,
}

impl TableBuilder {
    pub fn new(name: &str, objects: usize, pointed: bool) -> Self {
        TableBuilder {
            name: name.to_string(),
            objects,
            pointed,
            mors: Vec::new(),
            composites: Vec::new(),
            projections: Vec::new(),
        }
    }

    pub fn mor(mut self, name: &str, domain: usize, codomain: usize) -> Self {
        self.mors.push(MorDecl {
            name: name.to_string(),
            domain,
            codomain,
        });
        self
    }

    /// Records `g ∘ f = h`.
    pub fn compose(mut self, g: &str, f: &str, h: &str) -> Self {
        self.composites.push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    pub fn proj(mut self, n: usize, k: usize, name: &str) -> Self {
        self.projections.push((n, k, name.to_string()));
        self
    }

    pub fn build(self) -> Result<FiniteSemiTheory> {
        let table = |msg: String| Error::Table(msg);
        let lo = usize::from(!self.pointed);
        let mut mors = Vec::new();
        let mut by_name = BTreeMap::new();
        let mut identities = BTreeMap::new();
        for n in lo..=self.objects {
            let name = format!("id_{n}");
            identities.insert(n, MorId(mors.len()));
            by_name.insert(name.clone(), MorId(mors.len()));
            mors.push(MorDecl {
                name,
                domain: n,
                codomain: n,
            });
        }
        for m in self.mors {
            if !is_identifier(&m.name) {
                return Err(table(format!("`{}` is not a valid morphism name", m.name)));
            }
            for obj in [m.domain, m.codomain] {
                if obj > self.objects || obj < lo {
                    return Err(table(format!("`{}` uses object [{obj}] outside the table", m.name)));
                }
            }
            if by_name.insert(m.name.clone(), MorId(mors.len())).is_some() {
                return Err(table(format!("morphism `{}` declared twice", m.name)));
            }
            mors.push(m);
        }
        let lookup = |name: &str| -> Result<MorId> {
            by_name
                .get(name)
                .copied()
                .ok_or_else(|| table(format!("unknown morphism `{name}`")))
        };
        let mut composition = HashMap::new();
        for (i, m) in mors.iter().enumerate() {
            let f = MorId(i);
            composition.insert((identities[&m.codomain], f), f);
            composition.insert((f, identities[&m.domain]), f);
        }
        for (g, f, h) in &self.composites {
            let (gi, fi, hi) = (lookup(g)?, lookup(f)?, lookup(h)?);
            let (gd, fd, hd) = (&mors[gi.0], &mors[fi.0], &mors[hi.0]);
            if fd.codomain != gd.domain {
                return Err(table(format!("`{g} ∘ {f}` is not composable")));
            }
            if (hd.domain, hd.codomain) != (fd.domain, gd.codomain) {
                return Err(table(format!("`{g} ∘ {f} = {h}` has the wrong type")));
            }
            match composition.insert((gi, fi), hi) {
                Some(old) if old != hi => {
                    return Err(table(format!(
                        "`{g} ∘ {f}` defined as both `{}` and `{h}`",
                        mors[old.0].name
                    )));
                }
                _ => {}
            }
        }
        let mut projections = BTreeMap::new();
        projections.insert(
            (1, 1),
            identities
                .get(&1)
                .copied()
                .ok_or_else(|| table("no object [1]".into()))?,
        );
        for (n, k, name) in &self.projections {
            let id = lookup(name)?;
            let d = &mors[id.0];
            if *k == 0 || k > n || (d.domain, d.codomain) != (*n, 1) {
                return Err(table(format!("`proj {n} {k} = {name}` is malformed")));
            }
            if projections.insert((*n, *k), id).is_some_and(|old| old != id) {
                return Err(table(format!("projection p({n},{k}) designated twice")));
            }
        }
        let t = FiniteSemiTheory {
            name: self.name,
            objects: self.objects,
            pointed: self.pointed,
            mors,
            by_name,
            identities,
            composition,
            projections,
        };
        t.validate()?;
        Ok(t)
    }
}

impl FiniteSemiTheory {
    fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Table(msg));
        // totality
        for f in self.ids() {
            for g in self.ids() {
                if self.mor(f).codomain == self.mor(g).domain && !self.composition.contains_key(&(g, f)) {
                    return err(format!(
                        "missing composite `{} ∘ {}`",
                        self.mor(g).name,
                        self.mor(f).name
                    ));
                }
            }
        }
        // associativity
        for f in self.ids() {
            for g in self.ids().filter(|g| self.mor(*g).domain == self.mor(f).codomain) {
                let gf = self.composition[&(g, f)];
                for h in self.ids().filter(|h| self.mor(*h).domain == self.mor(g).codomain) {
                    let left = self.composition[&(self.composition[&(h, g)], f)];
                    let right = self.composition[&(h, gf)];
                    if left != right {
                        return err(format!(
                            "composition is not associative: ({h} ∘ {g}) ∘ {f} = {} but {h} ∘ ({g} ∘ {f}) = {}",
                            self.mor(left).name,
                            self.mor(right).name,
                            h = self.mor(h).name,
                            g = self.mor(g).name,
                            f = self.mor(f).name,
                        ));
                    }
                }
            }
        }
        // projections
        let lo = usize::from(!self.pointed);
        for n in 2.max(lo)..=self.objects {
            let mut seen = Vec::new();
            for k in 1..=n {
                match self.projections.get(&(n, k)) {
                    None => return err(format!("projection p({n},{k}) is not designated")),
                    Some(id) if seen.contains(id) => {
                        return err(format!("projections out of [{n}] are not distinct"));
                    }
                    Some(id) => seen.push(*id),
                }
            }
        }
        if self.pointed {
            for n in 0..=self.objects {
                if self.hom(n, 0).len() != 1 || self.hom(0, n).len() != 1 {
                    return err(format!("[0] is not both initial and terminal (object [{n}])"));
                }
            }
        }
        Ok(())
    }

    /// Parses the table file format.
    ///
    /// ```text
    /// finite theory P2
    /// objects 2
    /// mor p2_1 : 2 -> 1
    /// mor p2_2 : 2 -> 1
    /// proj 2 1 = p2_1
    /// proj 2 2 = p2_2
    /// ```
    ///
    /// `compose g f = h` records `g ∘ f = h`; identities `id_<n>` and
    /// their composites are implicit, and `pointed` adds the object `[0]`.
    pub fn parse(text: &str) -> Result<FiniteSemiTheory> {
        let syntax = |line: usize, msg: &str| Error::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut name = None;
        let mut objects = None;
        let mut pointed = false;
        let mut mors = Vec::new();
        let mut composites = Vec::new();
        let mut projections = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["finite", "theory", n] => name = Some(n.to_string()),
                ["objects", n] => objects = Some(n.parse::<usize>().map_err(|_| syntax(line_no, "bad object count"))?),
                ["pointed"] => pointed = true,
                ["unpointed"] => pointed = false,
                ["mor", n, ":", d, "->", c] => {
                    let d = d.parse().map_err(|_| syntax(line_no, "bad domain"))?;
                    let c = c.parse().map_err(|_| syntax(line_no, "bad codomain"))?;
                    mors.push((n.to_string(), d, c));
                }
                ["compose", g, f, "=", h] => composites.push((g.to_string(), f.to_string(), h.to_string())),
                ["proj", n, k, "=", m] => {
                    let n = n.parse().map_err(|_| syntax(line_no, "bad projection arity"))?;
                    let k = k.parse().map_err(|_| syntax(line_no, "bad projection index"))?;
                    projections.push((n, k, m.to_string()));
                }
                _ => return Err(syntax(line_no, &format!("cannot parse `{line}`"))),
            }
        }
        let name = name.ok_or_else(|| syntax(1, "missing `finite theory <name>` line"))?;
        let objects = objects.ok_or_else(|| syntax(1, "missing `objects <N>` line"))?;
        let mut b = TableBuilder::new(&name, objects, pointed);
        for (n, d, c) in mors {
            b = b.mor(&n, d, c);
        }
        for (g, f, h) in composites {
            b = b.compose(&g, &f, &h);
        }
        for (n, k, m) in projections {
            b = b.proj(n, k, &m);
        }
        b.build()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "finite theory {}", self.name);
        let _ = writeln!(out, "objects {}", self.objects);
        if self.pointed {
            let _ = writeln!(out, "pointed");
        }
        for f in self.ids().filter(|f| !self.is_identity(*f)) {
            let m = self.mor(f);
            let _ = writeln!(out, "mor {} : {} -> {}", m.name, m.domain, m.codomain);
        }
        let mut pairs: Vec<(&(MorId, MorId), &MorId)> = self
            .composition
            .iter()
            .filter(|((g, f), _)| !self.is_identity(*g) && !self.is_identity(*f))
            .collect();
        pairs.sort();
        for ((g, f), h) in pairs {
            let _ = writeln!(
                out,
                "compose {} {} = {}",
                self.mor(*g).name,
                self.mor(*f).name,
                self.mor(*h).name
            );
        }
        for ((n, k), id) in &self.projections {
            if *n > 1 {
                let _ = writeln!(out, "proj {n} {k} = {}", self.mor(*id).name);
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn len(&self) -> usize {
        self.mors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mors.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.mors.len()).map(MorId)
    }

    pub fn mor(&self, f: MorId) -> &MorDecl {
        &self.mors[f.0]
    }

    pub fn lookup(&self, name: &str) -> Result<MorId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::Table(format!("unknown morphism `{name}`")))
    }

    pub fn identity(&self, n: usize) -> Result<MorId> {
        self.identities
            .get(&n)
            .copied()
            .ok_or(Error::InvalidObject(n, "not an object of the table"))
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities.get(&self.mor(f).domain) == Some(&f)
    }

    /// The designated projection `p(n,k)`, if `f` is one.
    pub fn projection_index(&self, f: MorId) -> Option<(usize, usize)> {
        self.projections.iter().find(|(_, id)| **id == f).map(|(nk, _)| *nk)
    }

    pub fn projection(&self, n: usize, k: usize) -> Option<MorId> {
        self.projections.get(&(n, k)).copied()
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        self.composition
            .get(&(g, f))
            .copied()
            .ok_or_else(|| Error::ObjectMismatch {
                expected: self.mor(g).domain,
                found: self.mor(f).codomain,
            })
    }

    pub fn hom(&self, n: usize, m: usize) -> Vec<MorId> {
        self.ids()
            .filter(|f| self.mor(*f).domain == n && self.mor(*f).codomain == m)
            .collect()
    }

    /// True for morphisms with `[0]` as domain or codomain.
    pub fn touches_zero(&self, f: MorId) -> bool {
        let m = self.mor(f);
        self.pointed && (m.domain == 0 || m.codomain == 0)
    }

    /// The composite `[n] -> [0] -> [m]` in a pointed table.
    pub fn through_zero(&self, n: usize, m: usize) -> Result<MorId> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        let to = self.hom(n, 0)[0];
        let from = self.hom(0, m)[0];
        self.compose(from, to)
    }
}

/// The truncation of the category of finite pointed sets `{0,...,n}` and
/// basepoint-preserving maps to objects `n <= max_object`, with
/// `p(n,k)(i) = 1` exactly when `i = k`.
pub fn pointed_sets_table(max_object: usize) -> Result<FiniteSemiTheory> {
    // maps {0..n} -> {0..m} fixing 0, stored as the images of 1..n
    let maps = |n: usize, m: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=m).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    };
    let name = |n: usize, m: usize, v: &[usize]| -> String {
        if n == m && v.iter().enumerate().all(|(i, x)| *x == i + 1) {
            format!("id_{n}")
        } else {
            let digits: String = v.iter().map(|x| x.to_string()).collect();
            format!("f{n}_{m}_{digits}")
        }
    };
    let mut b = TableBuilder::new("PointedSets", max_object, true);
    let mut all = Vec::new();
    for n in 0..=max_object {
        for m in 0..=max_object {
            for v in maps(n, m) {
                let nm = name(n, m, &v);
                if !nm.starts_with("id_") {
                    b = b.mor(&nm, n, m);
                }
                all.push((n, m, v, nm));
            }
        }
    }
    for (n, m, f, fname) in &all {
        for (m2, k, g, gname) in &all {
            if m2 != m {
                continue;
            }
            let gf: Vec<usize> = f.iter().map(|&x| if x == 0 { 0 } else { g[x - 1] }).collect();
            b = b.compose(gname, fname, &name(*n, *k, &gf));
        }
    }
    for n in 2..=max_object {
        for k in 1..=n {
            let v: Vec<usize> = (1..=n).map(|i| usize::from(i == k)).collect();
            b = b.proj(n, k, &name(n, 1, &v));
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: &str =
        "finite theory P2\nobjects 2\nmor p2_1 : 2 -> 1\nmor p2_2 : 2 -> 1\nproj 2 1 = p2_1\nproj 2 2 = p2_2\n";

    #[test]
    fn loads_projection_table() {
        let t = FiniteSemiTheory::parse(P2).unwrap();
        assert_eq!(t.len(), 4);
        let p = t.lookup("p2_1").unwrap();
        assert_eq!(t.compose(p, t.identity(2).unwrap()).unwrap(), p);
        assert_eq!(t.projection_index(p), Some((2, 1)));
        assert_eq!(FiniteSemiTheory::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn rejects_non_associative_tables() {
        // e ∘ p2_2 = p2_1 breaks (e ∘ p2_1) ∘ s = e ∘ (p2_1 ∘ s)
        let bad = TableBuilder::new("Bad", 2, false)
            .mor("e", 1, 1)
            .mor("p2_1", 2, 1)
            .mor("p2_2", 2, 1)
            .mor("s", 2, 2)
            .compose("e", "e", "e")
            .compose("e", "p2_1", "p2_1")
            .compose("e", "p2_2", "p2_1")
            .compose("p2_1", "s", "p2_2")
            .compose("p2_2", "s", "p2_1")
            .compose("s", "s", "id_2")
            .compose("e", "p2_1", "p2_1")
            .proj(2, 1, "p2_1")
            .proj(2, 2, "p2_2")
            .build();
        match bad {
            Err(Error::Table(msg)) => assert!(msg.contains("associative"), "{msg}"),
            other => panic!("expected an associativity error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_incomplete_tables() {
        let text = "finite theory X\nobjects 2\nmor p2_1 : 2 -> 1\nmor p2_2 : 2 -> 1\nmor e : 1 -> 1\nproj 2 1 = p2_1\nproj 2 2 = p2_2\n";
        assert!(matches!(FiniteSemiTheory::parse(text), Err(Error::Table(_))));
        assert!(matches!(
            FiniteSemiTheory::parse("finite theory X\nobjects 2\n"),
            Err(Error::Table(_))
        ));
        assert!(matches!(
            FiniteSemiTheory::parse("finite theory X\nobjects two\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn pointed_sets_truncation() {
        let t = pointed_sets_table(2).unwrap();
        assert_eq!(t.len(), 23);
        assert!(t.is_pointed());
        let p21 = t.projection(2, 1).unwrap();
        assert_eq!(t.mor(p21).name, "f2_1_10");
        assert_eq!(FiniteSemiTheory::parse(&t.to_text()).unwrap(), t);
    }
}
