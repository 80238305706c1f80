//! Regular proofs: every `nec1` and `D` sits on a K/4l column that starts
//! from a single `⇒`-sequent, and there is no `4r`.
//!
//! An offending node `I` is rebuilt from the `⇒`-ancestry (τ1) of its
//! upper sequent. Rules above `I` that do not touch τ1 are first moved
//! below `I`, copying `I` into both premises of a two-premise rule. Then,
//! for every node of the τ1 region, either the part outside τ1 is provable
//! or the τ1 content is provable as one `⇒`-sequent. In the second case K
//! and 4l are postponed: their formulas stay inside the sequent and are
//! recorded as a column, which is extracted right before `I`.

use std::collections::BTreeSet;

use super::occ::{origins, stored_to_applied, transport};
use super::subst::to_stuck;
use super::{relayout, reinfer, require_group, stuck, uppermost, validate, Engine, Options, Result, TransformError};
use crate::calculus::{Group, RuleId, SystemId};
use crate::checker::derived::merge_sort;
use crate::checker::{fit, Path, Proof};
use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub offending_nodes: Vec<Path>,
}

/// The top of the K/4l column above sequent `c` of `p`, with `c`'s position
/// there.
fn column_top(p: &Proof, c: usize) -> (&Proof, usize) {
    let mut cur = p;
    let mut c = c;
    while let Some(RuleId::K | RuleId::FourL) = cur.rule() {
        let Ok(pos) = stored_to_applied(cur) else { break };
        let i = cur.args().seq[0];
        if pos[c] != i {
            break;
        }
        c = i;
        cur = &cur.premises[0];
    }
    (cur, c)
}

fn regular_node(node: &Proof) -> bool {
    let c = node.args().seq[0];
    let (top, _) = column_top(&node.premises[0], c);
    top.conclusion.len() == 1
}

fn offending(q: &Proof) -> bool {
    match q.rule() {
        Some(RuleId::FourR) => true,
        Some(RuleId::Nec1 | RuleId::D) => !regular_node(q),
        _ => false,
    }
}

pub fn is_regular(p: &Proof, sys: SystemId) -> Result<RegularityReport> {
    require_group("regularity", sys, &[Group::Alpha])?;
    let offending_nodes = p.paths_where(offending);
    Ok(RegularityReport {
        regular: offending_nodes.is_empty(),
        offending_nodes,
    })
}

pub fn regularize(p: &Proof, sys: SystemId) -> Result<Proof> {
    regularize_in(&mut Engine::new(sys, Options::default()), p)
}

pub fn regularize_in(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    require_group("regularization", eng.sys, &[Group::Alpha])?;
    validate(p, eng.sys, None)?;
    eng.start(p);
    let mut out = p.clone();
    let mut left = out.paths_where(offending).len();
    while let Some(path) = uppermost(&out, &offending).into_iter().next() {
        let before = out.node_count();
        let node = out.at(&path);
        let rule = node.rule().unwrap();
        let new = reg_at(eng, &node.premises[0], node.args().seq[0], rule)?;
        super::replace_at(&mut out, &path, new)?;
        let now = out.paths_where(offending).len();
        if now >= left {
            return Err(TransformError::Invalid("offending node count did not decrease".into()));
        }
        left = now;
        eng.step("regularize", before, &out)?;
    }
    Ok(out)
}

/// The sequent `I` produces from the critical sequent `s`.
fn crit_out(s: &Sequent, rule: RuleId) -> Sequent {
    match rule {
        RuleId::D => Sequent::empty(Sort::Plain),
        RuleId::Nec1 => Sequent::plain(vec![], vec![Formula::boxed(s.succ[0].clone())]),
        _ => Sequent::modal(vec![], vec![Formula::boxed(s.succ[0].clone())]),
    }
}

fn replaced(h: &Hypersequent, c: usize, s: Sequent) -> Hypersequent {
    let mut out = h.clone();
    out.0[c] = s;
    out
}

/// Whether the rule at `p` acts on (or creates) the sequent at stored
/// position `c`.
fn touches(p: &Proof, c: usize) -> Result<bool> {
    use RuleId::*;
    let app = p.app.as_ref().unwrap();
    let pos = stored_to_applied(p)?;
    let a = pos[c];
    let fresh = p.premises.first().map_or(0, |q| q.conclusion.len());
    Ok(match app.rule {
        Ew | Split | K | FourL | B1 | Five1 if a == fresh => true,
        Ew => false,
        Merge => {
            let (i, k) = (app.args.seq[0], app.args.seq[1]);
            a == if k < i { i - 1 } else { i }
        }
        _ => app.args.seq.first() == Some(&a),
    })
}

/// A proof of `p`'s conclusion with the critical sequent `c` replaced by
/// what `rule` makes of it, in which that occurrence of `rule` is regular.
fn reg_at(eng: &mut Engine, p: &Proof, c: usize, rule: RuleId) -> Result<Proof> {
    eng.tick()?;
    let tgt = replaced(&p.conclusion, c, crit_out(p.seq(c), rule));
    if p.premises.is_empty() || touches(p, c)? {
        return build(eng, p, c, rule, &tgt);
    }
    let orig = origins(p)?;
    let mut prems = vec![];
    for (k, pr) in p.premises.iter().enumerate() {
        let ck = transport(&orig, &BTreeSet::from([c]), k);
        let &[ck] = ck.iter().copied().collect::<Vec<_>>().as_slice() else {
            return stuck("critical sequent has no unique ancestor");
        };
        prems.push(reg_at(eng, pr, ck, rule)?);
    }
    relayout(reinfer(p, prems)?, &tgt)
}

fn build(eng: &mut Engine, p: &Proof, c: usize, rule: RuleId, tgt: &Hypersequent) -> Result<Proof> {
    let out = match claim(eng, p, &BTreeSet::from([c]))? {
        Res::Lft(a) => a.ew(tgt.0[c].clone())?,
        Res::Rgt(b, col) => {
            let mut q = b;
            for (r, f) in &col {
                let j = find(&q, Side::Left, f)?;
                q = if *r == RuleId::K { q.k(0, j)? } else { q.four_l(0, j)? };
            }
            match rule {
                RuleId::D => q.d(0)?,
                RuleId::Nec1 => q.nec1(0)?,
                _ => {
                    let (q, _) = merge_sort(q.nec1(0)?, Sort::Plain, &[])?;
                    let mut q = q.nec2()?;
                    for (r, f) in &col {
                        let b = if *r == RuleId::K { Formula::boxed(f.clone()) } else { f.clone() };
                        let j = find(&q, Side::Left, &b)?;
                        q = q.four_l(0, j)?;
                    }
                    q
                }
            }
        }
    };
    relayout(to_stuck(fit(out, tgt))?, tgt)
}

enum Res {
    /// The part outside τ1, in stored order.
    Lft(Proof),
    /// One `⇒`-sequent holding the τ1 content and the postponed column,
    /// and the column itself as (K or 4l, formula in the sequent).
    Rgt(Proof, Vec<(RuleId, Formula)>),
}

fn find(p: &Proof, side: Side, a: &Formula) -> Result<usize> {
    match p.seq(0).side(side).iter().rposition(|x| x == a) {
        Some(j) => Ok(j),
        None => Err(TransformError::Invalid(format!("{a} missing from {}", p.conclusion))),
    }
}

fn without(h: &Hypersequent, s: &BTreeSet<usize>) -> Hypersequent {
    Hypersequent(h.0.iter().enumerate().filter(|(k, _)| !s.contains(k)).map(|x| x.1.clone()).collect())
}

fn content(h: &Hypersequent, s: &BTreeSet<usize>) -> Sequent {
    let mut out = Sequent::empty(Sort::Modal);
    for &k in s {
        out.ante.extend(h.0[k].ante.iter().cloned());
        out.succ.extend(h.0[k].succ.iter().cloned());
    }
    out
}

fn shift(s: &BTreeSet<usize>, i: usize) -> usize {
    i - s.iter().filter(|&&k| k < i).count()
}

/// Either the part of `p`'s conclusion outside `s` or the content of `s`
/// with the postponed column is provable.
fn claim(eng: &mut Engine, p: &Proof, s: &BTreeSet<usize>) -> Result<Res> {
    use RuleId::*;
    eng.tick()?;
    let Some(app) = &p.app else {
        return stuck("open leaf");
    };
    let rule = app.rule;
    if rule.arity() == 0 || rule == Nec2 {
        if s.len() != 1 || p.conclusion.len() != 1 {
            return stuck(format!("{rule} at the top of the critical region"));
        }
        return Ok(Res::Rgt(p.clone(), vec![]));
    }
    let orig = origins(p)?;
    let pos = stored_to_applied(p)?;
    let sa: BTreeSet<usize> = s.iter().map(|&k| pos[k]).collect();
    let prem0 = &p.premises[0];
    let fresh = prem0.conclusion.len();
    let rest = without(&p.conclusion, s);
    if rule == Ew && sa.contains(&fresh) {
        let s0 = transport(&orig, s, 0);
        let added = app.args.sequent.clone().unwrap();
        if s0.is_empty() {
            return Ok(Res::Lft(relayout(prem0.clone(), &rest)?));
        }
        return Ok(match claim(eng, prem0, &s0)? {
            Res::Lft(a) => Res::Lft(relayout(a, &rest)?),
            Res::Rgt(mut b, col) => {
                for f in added.ante {
                    b = b.iw_l(0, f)?;
                }
                for f in added.succ {
                    b = b.iw_r(0, f)?;
                }
                Res::Rgt(b, col)
            }
        });
    }
    let mut ss = vec![];
    let mut res = vec![];
    for (k, pr) in p.premises.iter().enumerate() {
        let sk = transport(&orig, s, k);
        if sk.is_empty() {
            return stuck(format!("{rule} premise {k} lies outside the critical region"));
        }
        res.push(claim(eng, pr, &sk)?);
        ss.push(sk);
    }
    let principal = app.args.seq.first().is_some_and(|i| ss[0].contains(i));
    let lft: Vec<Option<&Proof>> = res.iter().map(|r| if let Res::Lft(a) = r { Some(a) } else { None }).collect();
    if !principal || rule == Ew {
        // a rule outside τ1: apply it to the outside parts, or drop it
        if lft.iter().all(|x| x.is_some()) {
            let mut args = app.args.clone();
            for (n, i) in args.seq.iter_mut().enumerate() {
                let k = if matches!(rule, AndR | Cut) { n } else { 0 };
                *i = shift(&ss[k], *i);
            }
            let prems = lft.into_iter().map(|x| x.unwrap().clone()).collect();
            let q = Proof::infer(rule, args, prems)?;
            return Ok(Res::Lft(relayout(q, &rest)?));
        }
        return Ok(res.into_iter().find(|r| matches!(r, Res::Rgt(..))).unwrap());
    }
    if let Some(a) = lft.iter().flatten().next() {
        let q = (*a).clone();
        return Ok(Res::Lft(match rule {
            K | FourL => relayout(q.ew(p.conclusion.0[pos.iter().position(|&x| x == fresh).unwrap()].clone())?, &rest)?,
            _ => relayout(q, &rest)?,
        }));
    }
    let mut it = res.into_iter().map(|r| match r {
        Res::Rgt(b, col) => (b, col),
        Res::Lft(_) => unreachable!(),
    });
    let (mut b, mut col) = it.next().unwrap();
    let i = app.args.seq[0];
    let sq = prem0.seq(i);
    let idx = |k: usize| app.args.idx[k];
    match rule {
        NegL => {
            let j = find(&b, Side::Right, &sq.succ[idx(0)])?;
            b = b.neg_l(0, j)?
        }
        NegR => {
            let j = find(&b, Side::Left, &sq.ante[idx(0)])?;
            b = b.neg_r(0, j)?
        }
        AndL1 | AndL2 => {
            let j = find(&b, Side::Left, &sq.ante[idx(0)])?;
            let other = app.args.formula.clone().unwrap();
            b = if rule == AndL1 { b.and_l1(0, j, other)? } else { b.and_l2(0, j, other)? };
        }
        T1 => {
            let j = find(&b, Side::Left, &sq.ante[idx(0)])?;
            b = b.t1(0, j)?
        }
        IwL => b = b.iw_l(0, app.args.formula.clone().unwrap())?,
        IwR => b = b.iw_r(0, app.args.formula.clone().unwrap())?,
        IcL | IcR => {
            let side = rule.side().unwrap();
            let a = &sq.side(side)[idx(0)];
            let v = b.seq(0).side(side);
            let k = v.iter().rposition(|x| x == a);
            let j = k.and_then(|k| v[..k].iter().rposition(|x| x == a));
            match (j, k) {
                (Some(j), Some(k)) => b = b.ic(side, 0, j, k)?,
                _ => return Err(TransformError::Invalid("contracted copies missing".into())),
            }
        }
        K | FourL => col.push((rule, sq.ante[idx(0)].clone())),
        Merge => {}
        AndR | Cut => {
            let (mut b1, col1) = it.next().unwrap();
            let inner = |col: &[(RuleId, Formula)]| -> Vec<Formula> { col.iter().map(|x| x.1.clone()).collect() };
            let s2 = p.premises[1].seq(app.args.seq[1]);
            let a = sq.succ[idx(0)].clone();
            if rule == AndR {
                let c = s2.succ[idx(1)].clone();
                for f in inner(&col1) {
                    b = b.iw_l(0, f)?;
                }
                for f in inner(&col) {
                    b1 = b1.iw_l(0, f)?;
                }
                let (j1, j2) = (find(&b, Side::Right, &a)?, find(&b1, Side::Right, &c)?);
                b = Proof::and_r(b, 0, j1, b1, 0, j2)?;
            } else {
                let (j1, j2) = (find(&b, Side::Right, &a)?, find(&b1, Side::Left, &a)?);
                b = Proof::cut(b, 0, j1, b1, 0, j2)?;
                let others: BTreeSet<usize> = ss[0].iter().copied().filter(|&k| k != i).collect();
                let y = content(&prem0.conclusion, &others);
                for (side, fs) in [(Side::Left, &y.ante), (Side::Right, &y.succ)] {
                    for f in fs {
                        let v = b.seq(0).side(side);
                        let k = v.iter().rposition(|x| x == f).unwrap();
                        let j = v[..k].iter().rposition(|x| x == f).unwrap();
                        b = b.ic(side, 0, j, k)?;
                    }
                }
            }
            col.extend(col1);
        }
        _ => return stuck(format!("{rule} acts on the critical region")),
    }
    let mut want = content(&p.conclusion, s);
    want.ante.extend(col.iter().map(|x| x.1.clone()));
    if b.conclusion.len() != 1 || !b.seq(0).same(&want) {
        return Err(TransformError::Invalid(format!(
            "critical content {} differs from {want}",
            b.conclusion
        )));
    }
    Ok(Res::Rgt(b, col))
}
