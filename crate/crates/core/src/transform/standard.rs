//! Extraction of ordinary single-sequent proofs from regular proofs.
//!
//! Every hypersequent is read as the concatenation of its sequents. Most
//! rules then become an LK step or nothing at all. A K/4l column under
//! `nec1` or `D` becomes one modal rule
//! `□*C₁,…,□*Cₘ → E / □C₁,…,□Cₘ → □E`, with an empty succedent for `D`.

use std::fmt;

use super::regular::is_regular;
use super::occ::stored_to_applied;
use super::{require_group, validate, Result, TransformError};
use crate::calculus::{Group, RuleId, SystemId};
use crate::checker::derived::{expand_derived, merge_sort, Derived};
use crate::checker::Proof;
use crate::syntax::{concat_hyper, Formula, Hypersequent, Sequent, Side, Sort};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StdRule {
    Ax(Formula),
    Bot,
    NegL(Formula),
    NegR(Formula),
    AndL1(Formula, Formula),
    AndL2(Formula, Formula),
    AndR(Formula, Formula),
    IcL(Formula),
    IcR(Formula),
    IwL(Formula),
    IwR(Formula),
    Cut(Formula),
    /// `A, Γ → Δ / □A, Γ → Δ`
    BoxL(Formula),
    /// Premise antecedent `unboxed ++ kept`, conclusion antecedent
    /// `□unboxed ++ kept`; the succedent `E` becomes `□E`, or stays empty.
    Modal { unboxed: Vec<Formula>, kept: Vec<Formula> },
}

impl StdRule {
    pub fn name(&self) -> &'static str {
        match self {
            StdRule::Ax(_) => "ax",
            StdRule::Bot => "bot",
            StdRule::NegL(_) => "neg_l",
            StdRule::NegR(_) => "neg_r",
            StdRule::AndL1(..) => "and_l1",
            StdRule::AndL2(..) => "and_l2",
            StdRule::AndR(..) => "and_r",
            StdRule::IcL(_) => "ic_l",
            StdRule::IcR(_) => "ic_r",
            StdRule::IwL(_) => "iw_l",
            StdRule::IwR(_) => "iw_r",
            StdRule::Cut(_) => "cut",
            StdRule::BoxL(_) => "box_l",
            StdRule::Modal { .. } => "modal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdProof {
    pub end: Sequent,
    pub rule: StdRule,
    pub premises: Vec<StdProof>,
}

fn take(v: &mut Vec<Formula>, a: &Formula) -> std::result::Result<(), String> {
    match v.iter().position(|x| x == a) {
        Some(j) => {
            v.remove(j);
            Ok(())
        }
        None => Err(format!("{a} missing")),
    }
}

/// The conclusion `rule` gives to `prems`, or why it does not apply.
fn conclude(rule: &StdRule, prems: &[&Sequent], sys: Option<SystemId>) -> std::result::Result<Sequent, String> {
    use StdRule::*;
    let want = match rule {
        Ax(_) | Bot => 0,
        AndR(..) | Cut(_) => 2,
        _ => 1,
    };
    if prems.len() != want {
        return Err(format!("{} takes {want} premises, got {}", rule.name(), prems.len()));
    }
    if prems.iter().any(|s| s.sort != Sort::Plain) {
        return Err("premise is not a → sequent".into());
    }
    let mut t = prems.first().map_or(Sequent::empty(Sort::Plain), |s| (*s).clone());
    match rule {
        Ax(a) => t = Sequent::plain(vec![a.clone()], vec![a.clone()]),
        Bot => t = Sequent::plain(vec![Formula::Bot], vec![]),
        NegL(a) => {
            take(&mut t.succ, a)?;
            t.ante.push(Formula::neg(a.clone()));
        }
        NegR(a) => {
            take(&mut t.ante, a)?;
            t.succ.push(Formula::neg(a.clone()));
        }
        AndL1(a, b) | AndL2(a, b) => {
            take(&mut t.ante, if matches!(rule, AndL1(..)) { a } else { b })?;
            t.ante.push(Formula::and(a.clone(), b.clone()));
        }
        AndR(a, b) => {
            take(&mut t.succ, a)?;
            let mut r = prems[1].clone();
            take(&mut r.succ, b)?;
            if !t.same(&r) {
                return Err(format!("contexts {t} and {r} differ"));
            }
            t.succ.push(Formula::and(a.clone(), b.clone()));
        }
        IcL(a) | IcR(a) => {
            let side = if matches!(rule, IcL(_)) { Side::Left } else { Side::Right };
            take(t.side_mut(side), a)?;
            if !t.side(side).contains(a) {
                return Err(format!("only one copy of {a}"));
            }
        }
        IwL(a) => t.ante.push(a.clone()),
        IwR(a) => t.succ.push(a.clone()),
        Cut(a) => {
            take(&mut t.succ, a)?;
            let mut r = prems[1].clone();
            take(&mut r.ante, a)?;
            t.ante.extend(r.ante);
            t.succ.extend(r.succ);
        }
        BoxL(a) => {
            if sys.is_some_and(|s| !s.has_axiom('T')) {
                return Err("box_l needs the T axiom".into());
            }
            take(&mut t.ante, a)?;
            t.ante.push(Formula::boxed(a.clone()));
        }
        Modal { unboxed, kept } => {
            let want: Vec<Formula> = unboxed.iter().chain(kept).cloned().collect();
            if !Sequent::plain(want.clone(), t.succ.clone()).same(&t) {
                return Err(format!("premise {t} is not {{{}}} → E", want.len()));
            }
            if t.succ.len() > 1 {
                return Err("modal premise has several succedent formulas".into());
            }
            if !kept.iter().all(Formula::is_boxed) {
                return Err("kept formulas must be boxed".into());
            }
            if let Some(s) = sys {
                if !kept.is_empty() && !s.has_axiom('4') {
                    return Err("keeping boxed formulas needs the 4 axiom".into());
                }
                if t.succ.is_empty() && !s.has_axiom('D') {
                    return Err("empty succedent needs the D axiom".into());
                }
            }
            t.ante = unboxed.iter().map(|a| Formula::boxed(a.clone())).chain(kept.iter().cloned()).collect();
            t.succ = t.succ.into_iter().map(Formula::boxed).collect();
        }
    }
    Ok(t)
}

impl StdProof {
    pub fn infer(rule: StdRule, premises: Vec<StdProof>) -> std::result::Result<StdProof, String> {
        let ends: Vec<&Sequent> = premises.iter().map(|p| &p.end).collect();
        let end = conclude(&rule, &ends, None)?;
        Ok(StdProof { end, rule, premises })
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(StdProof::node_count).sum::<usize>()
    }

    pub fn count_modal(&self) -> usize {
        usize::from(matches!(self.rule, StdRule::Modal { .. }))
            + self.premises.iter().map(StdProof::count_modal).sum::<usize>()
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{:width$}{}  [{}]", "", self.end, self.rule.name(), width = 2 * depth)?;
        for p in &self.premises {
            p.fmt_at(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for StdProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Check every node of a standard proof against the rules of `sys`.
pub fn check_standard(p: &StdProof, sys: SystemId) -> std::result::Result<(), String> {
    for q in &p.premises {
        check_standard(q, sys)?;
    }
    let ends: Vec<&Sequent> = p.premises.iter().map(|q| &q.end).collect();
    let t = conclude(&p.rule, &ends, Some(sys)).map_err(|e| format!("{} at {}: {e}", p.rule.name(), p.end))?;
    if !t.same(&p.end) {
        return Err(format!("{} yields {t}, node claims {}", p.rule.name(), p.end));
    }
    Ok(())
}

fn flat(h: &Hypersequent) -> Sequent {
    let plain = Hypersequent(h.0.iter().map(|s| s.with_sort(Sort::Plain)).collect());
    concat_hyper(&plain).expect("all sequents are plain")
}

pub fn to_standard(p: &Proof, sys: SystemId) -> Result<StdProof> {
    require_group("standard extraction", sys, &[Group::Alpha])?;
    validate(p, sys, None)?;
    let rep = is_regular(p, sys)?;
    if !rep.regular {
        return Err(TransformError::NotRegular(rep.offending_nodes));
    }
    if !p.conclusion.all_sort(Sort::Plain) {
        return Err(TransformError::EndNotPlain(p.conclusion.clone()));
    }
    let out = extract(p)?;
    check_standard(&out, sys).map_err(TransformError::Invalid)?;
    Ok(out)
}

fn node(rule: StdRule, prems: Vec<StdProof>) -> Result<StdProof> {
    StdProof::infer(rule, prems).map_err(TransformError::Invalid)
}

/// Rename the end of `q` to `h`'s concatenation, which has the same formulas.
fn relabel(mut q: StdProof, h: &Hypersequent) -> Result<StdProof> {
    let e = flat(h);
    if !q.end.same(&e) {
        return Err(TransformError::Invalid(format!("{} does not match {e}", q.end)));
    }
    q.end = e;
    Ok(q)
}

fn extract(p: &Proof) -> Result<StdProof> {
    use RuleId::*;
    let app = p.app.as_ref().ok_or_else(|| TransformError::Invalid("open leaf".into()))?;
    let (rule, args) = (app.rule, &app.args);
    let prem = |k: usize| &p.premises[k];
    let at = |side: Side| -> Formula { prem(0).seq(args.seq[0]).side(side)[args.idx[0]].clone() };
    let q = match rule {
        InitAx => node(StdRule::Ax(p.seq(0).ante[0].clone()), vec![])?,
        InitBot => node(StdRule::Bot, vec![])?,
        Nec1 | D => {
            let mut unboxed = vec![];
            let mut kept = vec![];
            let mut cur = prem(0);
            let mut c = args.seq[0];
            while let Some(r @ (K | FourL)) = cur.rule() {
                let pos = stored_to_applied(cur)?;
                let i = cur.args().seq[0];
                if pos[c] != i {
                    break;
                }
                let a = cur.premises[0].seq(i).ante[cur.args().idx[0]].clone();
                if r == K {
                    unboxed.push(a);
                } else {
                    kept.push(a);
                }
                c = i;
                cur = &cur.premises[0];
            }
            node(StdRule::Modal { unboxed, kept }, vec![extract(cur)?])?
        }
        _ => {
            let mut qs = p.premises.iter().map(extract).collect::<Result<Vec<_>>>()?;
            match rule {
                NegL => node(StdRule::NegL(at(Side::Right)), qs)?,
                NegR => node(StdRule::NegR(at(Side::Left)), qs)?,
                AndL1 => node(StdRule::AndL1(at(Side::Left), args.formula.clone().unwrap()), qs)?,
                AndL2 => node(StdRule::AndL2(args.formula.clone().unwrap(), at(Side::Left)), qs)?,
                IcL => node(StdRule::IcL(at(Side::Left)), qs)?,
                IcR => node(StdRule::IcR(at(Side::Right)), qs)?,
                IwL => node(StdRule::IwL(args.formula.clone().unwrap()), qs)?,
                IwR => node(StdRule::IwR(args.formula.clone().unwrap()), qs)?,
                T1 | K => node(StdRule::BoxL(at(Side::Left)), qs)?,
                AndR => {
                    let b = prem(1).seq(args.seq[1]).succ[args.idx[1]].clone();
                    node(StdRule::AndR(at(Side::Right), b), qs)?
                }
                Cut => {
                    let mut q = node(StdRule::Cut(at(Side::Right)), qs)?;
                    let mut side = prem(0).conclusion.clone();
                    side.0.remove(args.seq[0]);
                    let y = flat(&side);
                    for a in &y.ante {
                        q = node(StdRule::IcL(a.clone()), vec![q])?;
                    }
                    for a in &y.succ {
                        q = node(StdRule::IcR(a.clone()), vec![q])?;
                    }
                    q
                }
                Ew => {
                    let mut q = qs.pop().unwrap();
                    let s = args.sequent.clone().unwrap();
                    for a in s.ante {
                        q = node(StdRule::IwL(a), vec![q])?;
                    }
                    for a in s.succ {
                        q = node(StdRule::IwR(a), vec![q])?;
                    }
                    q
                }
                Merge | Split | Nec2 | T2 | FourL => qs.pop().unwrap(),
                _ => return Err(TransformError::Invalid(format!("{rule} has no standard reading"))),
            }
        }
    };
    relabel(q, &p.conclusion)
}

/// Rebuild a hypersequent proof of the single sequent `p.end` in `sys`.
pub fn embed(p: &StdProof, sys: SystemId) -> Result<Proof> {
    let q = rebuild(p)?;
    validate(&q, sys, None)?;
    Ok(q)
}

fn rebuild(p: &StdProof) -> Result<Proof> {
    let prems = p.premises.iter().map(rebuild).collect::<Result<Vec<_>>>()?;
    let mut it = prems.into_iter();
    let mut next = || it.next().unwrap();
    let pos = |q: &Proof, side: Side, a: &Formula| -> Result<usize> {
        q.seq(0)
            .side(side)
            .iter()
            .rposition(|x| x == a)
            .ok_or_else(|| TransformError::Invalid(format!("{a} missing from {}", q.conclusion)))
    };
    let q = match &p.rule {
        StdRule::Ax(a) => Proof::ax(Sort::Plain, a.clone()),
        StdRule::Bot => Proof::bot(Sort::Plain),
        StdRule::NegL(a) => {
            let q = next();
            let j = pos(&q, Side::Right, a)?;
            q.neg_l(0, j)?
        }
        StdRule::NegR(a) => {
            let q = next();
            let j = pos(&q, Side::Left, a)?;
            q.neg_r(0, j)?
        }
        StdRule::AndL1(a, b) => {
            let q = next();
            let j = pos(&q, Side::Left, a)?;
            q.and_l1(0, j, b.clone())?
        }
        StdRule::AndL2(a, b) => {
            let q = next();
            let j = pos(&q, Side::Left, b)?;
            q.and_l2(0, j, a.clone())?
        }
        StdRule::AndR(a, b) => {
            let (q, r) = (next(), next());
            let (j1, j2) = (pos(&q, Side::Right, a)?, pos(&r, Side::Right, b)?);
            Proof::and_r(q, 0, j1, r, 0, j2)?
        }
        StdRule::IcL(a) | StdRule::IcR(a) => {
            let side = if matches!(p.rule, StdRule::IcL(_)) { Side::Left } else { Side::Right };
            let q = next();
            let v = q.seq(0).side(side);
            let k = pos(&q, side, a)?;
            let j = v[..k].iter().rposition(|x| x == a).ok_or_else(|| TransformError::Invalid(format!("one copy of {a}")))?;
            q.ic(side, 0, j, k)?
        }
        StdRule::IwL(a) => next().iw_l(0, a.clone())?,
        StdRule::IwR(a) => next().iw_r(0, a.clone())?,
        StdRule::Cut(a) => {
            let (q, r) = (next(), next());
            let (j1, j2) = (pos(&q, Side::Right, a)?, pos(&r, Side::Left, a)?);
            Proof::cut(q, 0, j1, r, 0, j2)?
        }
        StdRule::BoxL(a) => {
            let q = next();
            let j = pos(&q, Side::Left, a)?;
            q.t1(0, j)?
        }
        StdRule::Modal { unboxed, kept } => {
            let q = next();
            let to_err = |e: crate::checker::derived::ShapeError| TransformError::Invalid(e.to_string());
            if q.seq(0).succ.is_empty() {
                let gamma: Vec<usize> = (0..q.seq(0).ante.len()).filter(|&j| unboxed.contains(&q.seq(0).ante[j])).collect();
                expand_derived(&Derived::Kd4 { gamma }, vec![q]).map_err(to_err)?
            } else if unboxed.is_empty() {
                expand_derived(&Derived::S4BoxR, vec![q]).map_err(to_err)?
            } else {
                let mut q = q.nec2()?;
                for a in unboxed {
                    let j = pos(&q, Side::Left, a)?;
                    q = q.k(0, j)?;
                }
                for a in kept {
                    let j = pos(&q, Side::Left, a)?;
                    q = q.four_l(0, j)?;
                }
                let q = q.nec1(0)?;
                merge_sort(q, Sort::Plain, &[])?.0
            }
        }
    };
    if q.conclusion.len() != 1 || !q.seq(0).same(&p.end) {
        return Err(TransformError::Invalid(format!("embedding gave {}, expected {}", q.conclusion, p.end)));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{axiom_template, check_proof, AxiomName};
    use crate::syntax::{f, sq};
    use crate::transform::regularize;

    #[test]
    fn four_template_extracts_to_one_modal_rule() {
        let p = axiom_template(AxiomName::Four, &[f("p")]).unwrap();
        let q = regularize(&p, SystemId::K4).unwrap();
        let s = to_standard(&q, SystemId::K4).unwrap();
        assert!(s.end.same(&sq("box p -> box box p")));
        assert!(matches!(s.rule, StdRule::Modal { .. }));
        assert!(s.premises[0].end.same(&sq("box p -> box p")));
        let e = embed(&s, SystemId::K4).unwrap();
        assert!(check_proof(&e, SystemId::K4).ok);
    }

    #[test]
    fn propositional_proof_has_no_modal_rule() {
        let p = Proof::ax(Sort::Plain, f("p")).neg_r(0, 0).unwrap();
        let s = to_standard(&p, SystemId::K).unwrap();
        assert_eq!(s.count_modal(), 0);
        assert!(s.end.same(&sq("-> p, ~p")));
    }

    #[test]
    fn d_template_ends_with_empty_succedent() {
        let p = axiom_template(AxiomName::D, &[]).unwrap();
        let q = regularize(&p, SystemId::D).unwrap();
        let s = to_standard(&q, SystemId::D).unwrap();
        assert_eq!(s.count_modal(), 1);
        assert!(check_standard(&s, SystemId::D).is_ok());
        assert!(check_standard(&s, SystemId::K).is_err());
    }

    #[test]
    fn irregular_proof_rejected() {
        let p = axiom_template(AxiomName::Four, &[f("p")]).unwrap();
        assert!(matches!(to_standard(&p, SystemId::K4), Err(TransformError::NotRegular(_))));
    }
}
