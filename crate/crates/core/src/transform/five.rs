//! Restriction of 5₂ to initial premises in systems with both the 5- and
//! the 4-rules.
//!
//! The `→`-ancestors of an unrestricted 5₂ principal are raised to `⇒`.
//! Raising the sequent created by K, 4l or 5₁ goes through 5₁, which leaves
//! an empty `→`-sequent behind. That remnant is merged into a `→`-sequent
//! further down; when the end hypersequent has none the rewrite is stuck.

use std::collections::BTreeSet;

use super::occ::{origins, stored_to_applied, transport};
use super::t2::retype;
use super::{relayout, reinfer, stuck, validate, Engine, Options, Result, TransformError};
use crate::calculus::{RuleId, SystemId};
use crate::checker::{Path, Proof};
use crate::syntax::{Hypersequent, Sequent, Sort};

fn qualifies(sys: SystemId) -> bool {
    sys.has_rule(RuleId::Five2) && sys.has_rule(RuleId::FourR) && sys.has_rule(RuleId::FourL)
}

fn is_restricted(node: &Proof) -> bool {
    let prem = &node.premises[0].conclusion;
    prem.len() == 1 && prem.0[0].is_initial_shape()
}

/// Paths of 5₂ applications whose premise is not a single initial sequent.
pub fn unrestricted_52(p: &Proof) -> Vec<Path> {
    p.paths_where(|q| q.rule() == Some(RuleId::Five2) && !is_restricted(q))
}

fn empty_plain(s: &Sequent) -> bool {
    s.sort == Sort::Plain && s.is_empty()
}

/// Bring `q` to `target`, absorbing surplus empty `→`-sequents into a
/// `→`-sequent of the target when there is one. Returns whether a single
/// remnant is left at the end.
fn settle(q: Proof, target: &Hypersequent) -> Result<(Proof, bool)> {
    let want = target.0.iter().filter(|s| empty_plain(s)).count();
    let mut q = q;
    let have = q.conclusion.0.iter().filter(|s| empty_plain(s)).count();
    let Some(mut extra) = have.checked_sub(want) else {
        return Err(TransformError::Invalid(format!("{} lacks empty sequents of {target}", q.conclusion)));
    };
    let has_plain = target.0.iter().any(|s| s.sort == Sort::Plain);
    let floor = if has_plain { 0 } else { 1 };
    while extra > floor {
        let e = q.conclusion.0.iter().rposition(empty_plain).unwrap();
        let x = (0..q.conclusion.len())
            .find(|&k| k != e && q.seq(k).sort == Sort::Plain)
            .unwrap();
        q = q.merge(x, e)?;
        extra -= 1;
    }
    if extra == 0 {
        return Ok((relayout(q, target)?, false));
    }
    let mut t = target.clone();
    t.push(Sequent::empty(Sort::Plain));
    Ok((relayout(q, &t)?, true))
}

/// A proof of `p`'s conclusion with the `→`-sequents at `set` turned into
/// `⇒`-sequents, possibly followed by one empty `→`-sequent.
fn raise(eng: &mut Engine, p: &Proof, set: &BTreeSet<usize>) -> Result<(Proof, bool)> {
    if set.is_empty() {
        return Ok((p.clone(), false));
    }
    eng.tick()?;
    use RuleId::*;
    let target = retype(&p.conclusion, set, Sort::Modal);
    let app = match &p.app {
        Some(a) => a,
        None => return stuck("open leaf"),
    };
    let rule = app.rule;
    if rule.arity() == 0 {
        let s = p.seq(0);
        let q = if rule == InitAx {
            Proof::ax(Sort::Plain, s.ante[0].clone())
        } else {
            Proof::bot(Sort::Plain)
        };
        return Ok((relayout(q.five2(0)?, &target)?, false));
    }
    let orig = origins(p)?;
    let pos = stored_to_applied(p)?;
    let applied: BTreeSet<usize> = set.iter().map(|&k| pos[k]).collect();
    let without = |a: usize| -> BTreeSet<usize> { set.iter().copied().filter(|&k| pos[k] != a).collect() };
    let tr = |s: &BTreeSet<usize>, prem: usize| transport(&orig, s, prem);
    let i = app.args.seq.first().copied().unwrap_or(0);
    let j = app.args.idx.first().copied().unwrap_or(0);
    let prem = &p.premises[0];
    let fresh = prem.conclusion.len();
    let q = match rule {
        Nec1 if applied.contains(&i) => {
            let (q, _) = raise(eng, prem, &tr(&without(i), 0))?;
            q.four_r(i)?
        }
        D | T2 if applied.contains(&i) => raise(eng, prem, &tr(&without(i), 0))?.0,
        Ew if applied.contains(&fresh) => {
            let s = app.args.sequent.clone().unwrap().with_sort(Sort::Modal);
            raise(eng, prem, &tr(&without(fresh), 0))?.0.ew(s)?
        }
        K | FourL if applied.contains(&fresh) => {
            let (q, _) = raise(eng, prem, &tr(&without(fresh), 0))?;
            let q = if rule == K { q.k(i, j)? } else { q.four_l(i, j)? };
            let last = q.last();
            q.five1(last, 0)?
        }
        Five1 if applied.contains(&i) => {
            let (q, _) = raise(eng, prem, &tr(set, 0))?;
            let q = q.four_l(i, j)?;
            let last = q.last();
            q.five1(last, 0)?
        }
        Split => return stuck("split acts on a sequent that must become =>"),
        B1 | B2 | B25 => return stuck(format!("{rule} is outside the 4+5 systems")),
        _ => {
            let mut raised = vec![];
            for (k, pr) in p.premises.iter().enumerate() {
                raised.push(raise(eng, pr, &tr(set, k))?);
            }
            if raised.len() == 2 && raised[0].1 != raised[1].1 {
                for r in raised.iter_mut().filter(|r| !r.1) {
                    r.0 = r.0.clone().ew(Sequent::empty(Sort::Plain))?;
                }
            }
            reinfer(p, raised.into_iter().map(|r| r.0).collect())?
        }
    };
    settle(q, &target)
}

/// Replace ⇒-initials by 5₂ over the corresponding →-initial.
fn restrict_initials(p: Proof) -> Result<Proof> {
    if p.premises.is_empty() {
        if p.rule().is_some_and(|r| r.arity() == 0) && p.seq(0).sort == Sort::Modal {
            let s = p.seq(0);
            let q = if p.rule() == Some(RuleId::InitAx) {
                Proof::ax(Sort::Plain, s.ante[0].clone())
            } else {
                Proof::bot(Sort::Plain)
            };
            return relayout(q.five2(0)?, &p.conclusion);
        }
        return Ok(p);
    }
    let Proof { conclusion, app, premises } = p;
    let premises = premises.into_iter().map(restrict_initials).collect::<Result<Vec<_>>>()?;
    Ok(Proof { conclusion, app, premises })
}

/// Rebuild `node` with the subproof at `path` replaced by `new`, which may
/// carry a remnant.
fn rebuild(node: &Proof, path: &[usize], new: (Proof, bool)) -> Result<(Proof, bool)> {
    let Some((&k, rest)) = path.split_first() else {
        return Ok(new);
    };
    let (child, rem) = rebuild(&node.premises[k], rest, new)?;
    let mut prems = node.premises.clone();
    if !rem {
        prems[k] = child;
        return Ok((
            Proof {
                conclusion: node.conclusion.clone(),
                app: node.app.clone(),
                premises: prems,
            },
            false,
        ));
    }
    prems[k] = child;
    for (m, pr) in prems.iter_mut().enumerate() {
        if m != k {
            *pr = pr.clone().ew(Sequent::empty(Sort::Plain))?;
        }
    }
    settle(reinfer(node, prems)?, &node.conclusion)
}

pub fn restrict_52(p: &Proof, sys: SystemId) -> Result<Proof> {
    restrict_52_in(&mut Engine::new(sys, Options::default()), p)
}

pub fn restrict_52_in(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    if !qualifies(eng.sys) {
        return Err(TransformError::WrongSystem {
            op: "5₂-restriction",
            sys: eng.sys,
            needs: "the 5- and 4-rules",
        });
    }
    validate(p, eng.sys, None)?;
    eng.start(p);
    let mut out = p.clone();
    let pred = |q: &Proof| q.rule() == Some(RuleId::Five2) && !is_restricted(q);
    while let Some(path) = super::uppermost(&out, &pred).into_iter().next() {
        let before = out.node_count();
        let node = out.at(&path);
        let i = node.args().seq[0];
        let (raised, rem) = raise(eng, &node.premises[0], &BTreeSet::from([i]))?;
        let raised = restrict_initials(raised)?;
        let (q, rem) = settle_node(raised, rem, &node.conclusion)?;
        let (root, left) = rebuild(&out, &path, (q, rem))?;
        if left {
            return stuck(format!(
                "an empty -> sequent reaches the end hypersequent {}, which has no -> sequent to absorb it",
                out.conclusion
            ));
        }
        out = root;
        eng.step("restrict-52", before, &out)?;
    }
    Ok(out)
}

/// The raised premise of a 5₂ node has the node's conclusion up to layout.
fn settle_node(q: Proof, rem: bool, conclusion: &Hypersequent) -> Result<(Proof, bool)> {
    if rem {
        let mut t = conclusion.clone();
        t.push(Sequent::empty(Sort::Plain));
        Ok((relayout(q, &t)?, true))
    } else {
        Ok((relayout(q, conclusion)?, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{axiom_template, check_proof, AxiomName};
    use crate::syntax::{f, hs};

    #[test]
    fn template_five_in_k45() {
        let p = axiom_template(AxiomName::Five, &[f("p")]).unwrap();
        for sys in [SystemId::K45, SystemId::KD45, SystemId::S5] {
            let q = restrict_52(&p, sys).unwrap();
            assert_eq!(q.conclusion, p.conclusion);
            assert!(check_proof(&q, sys).ok);
            assert!(unrestricted_52(&q).is_empty());
            let fives = q.paths_where(|n| n.rule() == Some(RuleId::Five2));
            assert_eq!(fives.len(), 1);
            assert_eq!(q.at(&fives[0]).premises[0].conclusion, hs("p -> p"));
        }
    }

    #[test]
    fn all_modal_end_is_stuck() {
        let p = Proof::ax(Sort::Modal, f("p")).k(0, 0).unwrap().five2(1).unwrap();
        assert_eq!(p.conclusion, hs("=> p || box p =>"));
        assert!(matches!(restrict_52(&p, SystemId::K45), Err(TransformError::Stuck(_))));
    }

    #[test]
    fn needs_four_rules() {
        let p = Proof::ax(Sort::Plain, f("p"));
        assert!(matches!(restrict_52(&p, SystemId::K5), Err(TransformError::WrongSystem { .. })));
        assert_eq!(restrict_52(&p, SystemId::K45).unwrap(), p);
    }
}
