//! Admissibility of T2: retype the `⇒`-ancestors of a T2 principal to `→`
//! and rewrite the rules that introduced them.

use std::collections::BTreeSet;

use super::occ::{origins, stored_to_applied, transport};
use super::{relayout, reinfer, replace_at, require_group, stuck, uppermost, validate, Engine, Options, Result};
use crate::calculus::{Group, RuleId, SystemId};
use crate::checker::Proof;
use crate::syntax::{Hypersequent, Sort};

pub(crate) fn retype(h: &Hypersequent, set: &BTreeSet<usize>, sort: Sort) -> Hypersequent {
    let mut out = h.clone();
    for &k in set {
        out.0[k].sort = sort;
    }
    out
}

/// Split `□A` (at antecedent `j` of sequent `i`) off into its own `→`-sequent.
fn split_off(p: Proof, i: usize, j: usize) -> Result<Proof> {
    let (n, m) = (p.seq(i).ante.len(), p.seq(i).succ.len());
    Ok(p.split(i, (0..n).filter(|&x| x != j).collect(), (0..m).collect())?)
}

/// A proof of `p`'s conclusion with the `⇒`-sequents at `set` turned into
/// `→`-sequents, for proofs without 5₂ and B25 acting on them.
pub(crate) fn lower(eng: &mut Engine, p: &Proof, set: &BTreeSet<usize>) -> Result<Proof> {
    if set.is_empty() {
        return Ok(p.clone());
    }
    eng.tick()?;
    use RuleId::*;
    let target = retype(&p.conclusion, set, Sort::Plain);
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
        return relayout(q, &target);
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
        Nec2 => prem.clone(),
        T2 => {
            let mut s = tr(set, 0);
            s.insert(i);
            lower(eng, prem, &s)?
        }
        FourR if applied.contains(&i) => lower(eng, prem, &tr(&without(i), 0))?.nec1(i)?,
        K | FourL if applied.contains(&i) => {
            let q = lower(eng, prem, &tr(set, 0))?;
            let q = if rule == K { q.t1(i, j)? } else { q };
            split_off(q, i, j)?
        }
        B1 | Five1 if applied.contains(&fresh) => {
            let q = lower(eng, prem, &tr(&without(fresh), 0))?;
            let q = if rule == B1 { q.t1(i, j)? } else { q };
            split_off(q, i, j)?
        }
        B2 if applied.contains(&i) => {
            let ctx: BTreeSet<usize> = (0..fresh).filter(|&k| k != i).collect();
            lower(eng, prem, &ctx)?
        }
        B25 if applied.contains(&i) => {
            let mut s = tr(&without(i), 0);
            s.extend(app.args.seq[1..].iter().copied());
            lower(eng, prem, &s)?
        }
        Five2 if applied.contains(&i) => lower(eng, prem, &tr(&without(i), 0))?,
        Five2 | B25 => return stuck(format!("{rule} needs => context sequents")),
        Ew if applied.contains(&fresh) => {
            let s = app.args.sequent.clone().unwrap().with_sort(Sort::Plain);
            lower(eng, prem, &tr(&without(fresh), 0))?.ew(s)?
        }
        _ => {
            let mut prems = vec![];
            for (k, pr) in p.premises.iter().enumerate() {
                prems.push(lower(eng, pr, &tr(set, k))?);
            }
            reinfer(p, prems)?
        }
    };
    relayout(q, &target)
}

/// Remove every T2 application, uppermost first.
pub fn eliminate_t2(p: &Proof, sys: SystemId) -> Result<Proof> {
    eliminate_t2_in(&mut Engine::new(sys, Options::default()), p)
}

pub fn eliminate_t2_in(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    require_group("T2-elimination", eng.sys, &[Group::Alpha, Group::Gamma])?;
    validate(p, eng.sys, None)?;
    eng.start(p);
    let mut out = p.clone();
    let is_t2 = |q: &Proof| q.rule() == Some(RuleId::T2);
    while let Some(path) = uppermost(&out, &is_t2).into_iter().next() {
        let before = out.node_count();
        let weight = out.count_rule(RuleId::T2);
        let node = out.at(&path);
        let i = node.args().seq[0];
        let new = lower(eng, &node.premises[0], &BTreeSet::from([i]))?;
        replace_at(&mut out, &path, new)?;
        if out.count_rule(RuleId::T2) >= weight {
            return Err(super::TransformError::Invalid("T2 count did not decrease".into()));
        }
        eng.step("t2", before, &out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check_proof, expand_derived, Derived};
    use crate::syntax::{f, hs};

    #[test]
    fn s4_box_l_loses_t2() {
        let p = expand_derived(&Derived::S4BoxL { idx: 0 }, vec![Proof::ax(Sort::Plain, f("p"))]).unwrap();
        assert_eq!(p.count_rule(RuleId::T2), 1);
        let q = eliminate_t2(&p, SystemId::S4).unwrap();
        assert_eq!(q.count_rule(RuleId::T2), 0);
        assert_eq!(q.conclusion, p.conclusion);
        assert!(check_proof(&q, SystemId::S4).ok);
    }

    #[test]
    fn k_above_t2_becomes_split() {
        let p = Proof::ax(Sort::Modal, f("p"))
            .iw_l(0, f("q"))
            .unwrap()
            .k(0, 1)
            .unwrap()
            .t2(0)
            .unwrap();
        assert_eq!(p.conclusion, hs("p -> p || box q ->"));
        let q = eliminate_t2(&p, SystemId::T).unwrap();
        assert_eq!(q.conclusion, p.conclusion);
        assert!(check_proof(&q, SystemId::T).ok);
        assert_eq!(q.count_rule(RuleId::Split), 1);
    }

    #[test]
    fn t2_free_unchanged_and_beta_rejected() {
        let p = Proof::ax(Sort::Plain, f("p"));
        assert_eq!(eliminate_t2(&p, SystemId::T).unwrap(), p);
        assert!(matches!(
            eliminate_t2(&p, SystemId::K5),
            Err(super::super::TransformError::WrongGroup { .. })
        ));
    }
}
