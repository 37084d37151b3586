//! The free simplicial resolution `F_* C` of a finite semi-theory, bounded
//! at a finite level, together with its dimensionwise completion.

mod complete;
mod nested;
mod table;

use crate::error::{Error, Result};
use crate::report::Report;

pub use complete::{
    collapse_tree, compare_completion, complete_dimension, table_tuple, LevelGenerator, LevelPresentation,
};
pub use nested::{degeneracy, enumerate_nested, eval_psi, face, lift_psi, Cell, NestedWord};
pub use table::{pointed_sets_table, FiniteSemiTheory, MorDecl, MorId, TableBuilder};

/// Highest level a sweep may reach.
pub const MAX_LEVEL: usize = 4;

/// Bounds for resolution sweeps. Words of level 2 and above use strings of
/// at most `min(max_len, 2)` letters per depth, since their number grows
/// as an iterated power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionBounds {
    pub max_level: usize,
    pub max_len: usize,
    /// Largest number of words enumerated per level.
    pub cap: usize,
}

impl ResolutionBounds {
    pub fn new(max_level: usize) -> Self {
        ResolutionBounds {
            max_level,
            max_len: 3,
            cap: 200_000,
        }
    }

    /// Rejects levels above [`MAX_LEVEL`].
    pub fn validate(&self) -> Result<()> {
        if self.max_level > MAX_LEVEL {
            return Err(Error::BoundExceeded(format!(
                "level {} exceeds the cap {MAX_LEVEL}",
                self.max_level
            )));
        }
        Ok(())
    }

    pub fn len_at(&self, level: usize) -> usize {
        if level >= 2 {
            self.max_len.min(2)
        } else {
            self.max_len
        }
    }
}

/// Checks the simplicial identities, the compatibility of `Ψ` with faces,
/// degeneracies and composition, and `Ψ ∘ ψ = id`, on all bounded words of
/// levels `k <= max_level`. Composition is checked on levels 0 and 1, with
/// single-letter level-1 factors.
pub fn check_identities(t: &FiniteSemiTheory, bounds: ResolutionBounds) -> Result<Report> {
    bounds.validate()?;
    let mut report = Report::new("simplicial-identities")
        .bound("max_level", bounds.max_level)
        .bound("max_len", bounds.max_len)
        .bound("cap", bounds.cap);
    report.note(format!("table {} with {} morphisms", t.name(), t.len()));
    let show = |w: &NestedWord| w.display(t).to_string();

    for f in t.ids() {
        for k in 0..=bounds.max_level {
            let lift = lift_psi(t, f, k)?;
            report.case();
            if eval_psi(t, &lift)? != f {
                report.fail(format!(
                    "Ψψ({}) at level {k} is {}",
                    t.mor(f).name,
                    t.mor(eval_psi(t, &lift)?).name
                ));
            }
            for i in 0..=k {
                report.case();
                if degeneracy(t, i, &lift)? != lift_psi(t, f, k + 1)? {
                    report.fail(format!("s_{i} of {} is not a lift", show(&lift)));
                }
                if k > 0 {
                    report.case();
                    if face(t, i, &lift)? != lift_psi(t, f, k - 1)? {
                        report.fail(format!("d_{i} of {} is not a lift", show(&lift)));
                    }
                }
            }
        }
    }

    for k in 0..=bounds.max_level {
        let words = enumerate_nested(t, k, bounds.len_at(k), bounds.cap)?;
        for w in &words {
            sweep_word(t, w, &mut report)?;
        }
        if k <= 1 {
            // pairs are quadratic, so level 1 composes single-letter words
            let short = if k == 1 {
                enumerate_nested(t, 0, bounds.len_at(0), bounds.cap)?
                    .into_iter()
                    .map(|w| NestedWord::new(t, 1, vec![Cell::Word(w)]))
                    .collect::<Result<Vec<_>>>()?
            } else {
                words.clone()
            };
            for f in &short {
                for g in short.iter().filter(|g| g.domain() == f.codomain()) {
                    report.case();
                    let gf = NestedWord::compose(g, f)?;
                    if eval_psi(t, &gf)? != t.compose(eval_psi(t, g)?, eval_psi(t, f)?)? {
                        report.fail(format!(
                            "Ψ does not respect the composite of {} and {}",
                            show(f),
                            show(g)
                        ));
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

fn sweep_word(t: &FiniteSemiTheory, w: &NestedWord, report: &mut Report) -> Result<()> {
    let k = w.level();
    let show = |w: &NestedWord| w.display(t).to_string();
    let psi = eval_psi(t, w)?;
    let mut check = |ok: bool, what: String| {
        report.case();
        if !ok {
            report.fail(format!("{what} fails on {}", show(w)));
        }
    };
    for i in 0..=k {
        let si = degeneracy(t, i, w)?;
        check(eval_psi(t, &si)? == psi, format!("Ψ s_{i} = Ψ"));
        // d_i s_i = d_{i+1} s_i = id
        check(face(t, i, &si)? == *w, format!("d_{i} s_{i} = id"));
        check(face(t, i + 1, &si)? == *w, format!("d_{} s_{i} = id", i + 1));
        for j in i..=k {
            // s_i s_j = s_{j+1} s_i
            let left = degeneracy(t, i, &degeneracy(t, j, w)?)?;
            let right = degeneracy(t, j + 1, &si)?;
            check(left == right, format!("s_{i} s_{j} = s_{} s_{i}", j + 1));
        }
    }
    if k == 0 {
        return Ok(());
    }
    for i in 0..=k {
        let di = face(t, i, w)?;
        check(eval_psi(t, &di)? == psi, format!("Ψ d_{i} = Ψ"));
        for j in 0..=k {
            let sj = degeneracy(t, j, w)?;
            if i < j {
                // d_i s_j = s_{j-1} d_i
                check(
                    face(t, i, &sj)? == degeneracy(t, j - 1, &di)?,
                    format!("d_{i} s_{j} = s_{} d_{i}", j - 1),
                );
            } else if i > j + 1 {
                // d_i s_j = s_j d_{i-1}
                let right = degeneracy(t, j, &face(t, i - 1, w)?)?;
                check(face(t, i, &sj)? == right, format!("d_{i} s_{j} = s_{j} d_{}", i - 1));
            }
        }
        if i == k {
            // d_{k+1} s_j for j < k
            for j in 0..k {
                let sj = degeneracy(t, j, w)?;
                let right = degeneracy(t, j, &face(t, k, w)?)?;
                check(
                    face(t, k + 1, &sj)? == right,
                    format!("d_{} s_{j} = s_{j} d_{k}", k + 1),
                );
            }
        }
    }
    if k >= 2 {
        for j in 1..=k {
            let dj = face(t, j, w)?;
            for i in 0..j {
                // d_i d_j = d_{j-1} d_i
                let left = face(t, i, &dj)?;
                let right = face(t, j - 1, &face(t, i, w)?)?;
                check(left == right, format!("d_{i} d_{j} = d_{} d_{i}", j - 1));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_table_identities() {
        let t = TableBuilder::new("P2", 2, false)
            .mor("p2_1", 2, 1)
            .mor("p2_2", 2, 1)
            .proj(2, 1, "p2_1")
            .proj(2, 2, "p2_2")
            .build()
            .unwrap();
        let r = check_identities(&t, ResolutionBounds::new(2)).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.cases > 1000);
    }

    #[test]
    fn level_cap() {
        let t = TableBuilder::new("P1", 1, false).build().unwrap();
        assert!(matches!(
            check_identities(&t, ResolutionBounds::new(5)),
            Err(Error::BoundExceeded(_))
        ));
    }
}
