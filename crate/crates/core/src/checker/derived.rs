//! Derived rules expanded into primitive steps.
//!
//! Every expansion works on arbitrary premise proofs, so passing
//! [`Proof::open`] leaves yields a fragment with one open leaf per premise.

use thiserror::Error;

use super::templates::five_lemma;
use super::Proof;
use crate::calculus::{RuleId, StepError};
use crate::syntax::{Formula, Sequent, Side, Sort};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Step(#[from] StepError),
}

fn shape<T>(msg: impl Into<String>) -> Result<T, ShapeError> {
    Err(ShapeError::Shape(msg.into()))
}

/// Derived rules with their addressing. Positions refer to the premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derived {
    /// `A,Γ→Δ / □A,Γ→Δ` (S4).
    S4BoxL { idx: usize },
    /// `□Γ→A / □Γ→□A` (S4).
    S4BoxR,
    /// `□Γ→□Δ,A / □Γ→□Δ,□A` (S5), `idx` is the position of `A`.
    S5BoxR { idx: usize },
    /// `Γ,□Δ→ / □Γ,□Δ→` (KD4); `gamma` lists the positions of `Γ`.
    Kd4 { gamma: Vec<usize> },
    /// `H|A,Γ⇒Δ / H|□A,Γ⇒Δ` in the all-⇒ calculus.
    StdBoxL { seq: usize, idx: usize },
    /// `H|□Γ⇒A / H|□Γ⇒□A` in the all-⇒ calculus.
    StdBoxR { seq: usize },
    /// `H|Θ⇒Π|□A,Γ⇒Δ / H|□A,Θ⇒Π|Γ⇒Δ` in the all-⇒ calculus.
    StdMove { from: usize, idx: usize, to: usize },
    /// `H|Γ≫Δ,A` and `H'|B,Π≫Θ` give `H|H'|A⊃B,Γ,Π≫Δ,Θ`.
    ImpL { seq: [usize; 2], idx: [usize; 2] },
    /// `H|A,Γ≫Δ,B / H|Γ≫Δ,A⊃B`; `ante` is the position of `A`, `succ` of `B`.
    ImpR { seq: usize, ante: usize, succ: usize },
    /// `H|A,Γ≫Δ` and `H'|B,Π≫Θ` give `H|H'|A∨B,Γ,Π≫Δ,Θ`.
    OrL { seq: [usize; 2], idx: [usize; 2] },
    /// `H|Γ≫Δ,A,B / H|Γ≫Δ,A∨B`.
    OrR { seq: usize, idx: [usize; 2] },
    /// Multiplicative cut: `H|Γ≫Δ,A` and `H'|A,Π≫Θ` give `H|H'|Γ,Π≫Δ,Θ`.
    MCut { seq: [usize; 2], idx: [usize; 2] },
}

impl Derived {
    pub fn arity(&self) -> usize {
        match self {
            Derived::ImpL { .. } | Derived::OrL { .. } | Derived::MCut { .. } => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Derived::S4BoxL { .. } => "s4-box-l",
            Derived::S4BoxR => "s4-box-r",
            Derived::S5BoxR { .. } => "s5-box-r",
            Derived::Kd4 { .. } => "kd4",
            Derived::StdBoxL { .. } => "std-box-l",
            Derived::StdBoxR { .. } => "std-box-r",
            Derived::StdMove { .. } => "std-move",
            Derived::ImpL { .. } => "imp-l",
            Derived::ImpR { .. } => "imp-r",
            Derived::OrL { .. } => "or-l",
            Derived::OrR { .. } => "or-r",
            Derived::MCut { .. } => "mcut",
        }
    }
}

/// Expand a derived rule over the given premise proofs.
pub fn expand_derived(d: &Derived, premises: Vec<Proof>) -> Result<Proof, ShapeError> {
    if premises.len() != d.arity() {
        return shape(format!("{} takes {} premises, got {}", d.name(), d.arity(), premises.len()));
    }
    let mut it = premises.into_iter();
    let p = it.next().unwrap();
    match d {
        Derived::S4BoxL { idx } => s4_box_l(p, *idx),
        Derived::S4BoxR => s4_box_r(p),
        Derived::S5BoxR { idx } => s5_box_r(p, *idx),
        Derived::Kd4 { gamma } => kd4(p, gamma),
        Derived::StdBoxL { seq, idx } => std_box_l(p, *seq, *idx),
        Derived::StdBoxR { seq } => std_box_r(p, *seq),
        Derived::StdMove { from, idx, to } => std_move(p, *from, *idx, *to),
        Derived::ImpL { seq, idx } => imp_l(p, seq[0], idx[0], it.next().unwrap(), seq[1], idx[1]),
        Derived::ImpR { seq, ante, succ } => imp_r(p, *seq, *ante, *succ),
        Derived::OrL { seq, idx } => or_l(p, seq[0], idx[0], it.next().unwrap(), seq[1], idx[1]),
        Derived::OrR { seq, idx } => or_r(p, *seq, idx[0], idx[1]),
        Derived::MCut { seq, idx } => mcut(p, seq[0], idx[0], it.next().unwrap(), seq[1], idx[1]),
    }
}

fn get_seq(p: &Proof, i: usize) -> Result<&Sequent, ShapeError> {
    p.conclusion
        .0
        .get(i)
        .ok_or_else(|| ShapeError::Shape(format!("no sequent {i} in {}", p.conclusion)))
}

fn get_formula(p: &Proof, i: usize, side: Side, j: usize) -> Result<Formula, ShapeError> {
    get_seq(p, i)?
        .side(side)
        .get(j)
        .cloned()
        .ok_or_else(|| ShapeError::Shape(format!("no {side:?} formula {j} in sequent {i}")))
}

fn single(p: &Proof, sort: Sort) -> Result<Sequent, ShapeError> {
    if p.conclusion.len() != 1 || p.seq(0).sort != sort {
        return shape(format!("premise must be a single {} sequent, got {}", sort.arrow(), p.conclusion));
    }
    Ok(p.seq(0).clone())
}

/// Last position of `a` on `side` of sequent `i`.
pub(crate) fn find(p: &Proof, i: usize, side: Side, a: &Formula) -> Result<usize, StepError> {
    p.seq(i).side(side).iter().rposition(|x| x == a).ok_or_else(|| StepError {
        rule: RuleId::Ew,
        kind: crate::calculus::StepErrorKind::BadAddressing,
        at: format!("{a} not found in sequent {i}"),
    })
}

/// Merge every sequent of `sort` other than those in `keep` into one;
/// returns the proof and the merged sequent's position, if any.
pub(crate) fn merge_sort(mut p: Proof, sort: Sort, keep: &[usize]) -> Result<(Proof, Option<usize>), StepError> {
    loop {
        let ks: Vec<usize> = (0..p.conclusion.len())
            .filter(|k| p.seq(*k).sort == sort && !keep.contains(k))
            .collect();
        if ks.len() < 2 {
            return Ok((p, ks.first().copied()));
        }
        p = p.merge(ks[0], ks[ks.len() - 1])?;
    }
}

/// Merge two sequents, returning the proof and the merged position.
pub(crate) fn merge_pair(p: Proof, i: usize, k: usize) -> Result<(Proof, usize), StepError> {
    let pos = if k < i { i - 1 } else { i };
    Ok((p.merge(i, k)?, pos))
}

/// Append the sequents of `extra` (all but position `skip`) via `ew`.
pub(crate) fn ew_all(mut p: Proof, extra: &[Sequent]) -> Result<Proof, StepError> {
    for s in extra {
        p = p.ew(s.clone())?;
    }
    Ok(p)
}

fn others(p: &Proof, i: usize) -> Vec<Sequent> {
    p.conclusion
        .0
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|x| x.1.clone())
        .collect()
}

fn weaken(mut p: Proof, i: usize, ante: &[Formula], succ: &[Formula]) -> Result<Proof, StepError> {
    for a in ante {
        p = p.iw_l(i, a.clone())?;
    }
    for a in succ {
        p = p.iw_r(i, a.clone())?;
    }
    Ok(p)
}

pub fn mcut(p: Proof, i1: usize, j1: usize, q: Proof, i2: usize, j2: usize) -> Result<Proof, ShapeError> {
    let a = get_formula(&p, i1, Side::Right, j1)?;
    let b = get_formula(&q, i2, Side::Left, j2)?;
    if a != b {
        return shape(format!("cut formulas {a} and {b} differ"));
    }
    let (hp, hq) = (others(&p, i1), others(&q, i2));
    let p = ew_all(p, &hq)?;
    let q = ew_all(q, &hp)?;
    Ok(Proof::cut(p, i1, j1, q, i2, j2)?)
}

/// Bring two premises to a shared context: each gets the other's side
/// sequents and the other's principal-sequent rest.
fn align(
    p: Proof,
    i1: usize,
    rest1: &Sequent,
    q: Proof,
    i2: usize,
    rest2: &Sequent,
) -> Result<(Proof, Proof), ShapeError> {
    if get_seq(&p, i1)?.sort != get_seq(&q, i2)?.sort {
        return shape("principal sequents differ in sort");
    }
    let (hp, hq) = (others(&p, i1), others(&q, i2));
    let p = weaken(p, i1, &rest2.ante, &rest2.succ)?;
    let q = weaken(q, i2, &rest1.ante, &rest1.succ)?;
    Ok((ew_all(p, &hq)?, ew_all(q, &hp)?))
}

fn rest(s: &Sequent, side: Side, j: usize) -> Sequent {
    let mut t = s.clone();
    t.side_mut(side).remove(j);
    t
}

pub fn imp_l(p: Proof, i1: usize, j1: usize, q: Proof, i2: usize, j2: usize) -> Result<Proof, ShapeError> {
    let a = get_formula(&p, i1, Side::Right, j1)?;
    let b = get_formula(&q, i2, Side::Left, j2)?;
    let r1 = rest(p.seq(i1), Side::Right, j1);
    let r2 = rest(q.seq(i2), Side::Left, j2);
    let q = q.neg_r(i2, j2)?;
    let (p, q) = align(p, i1, &r1, q, i2, &r2)?;
    let nb = Formula::neg(b);
    let (ja, jb) = (find(&p, i1, Side::Right, &a)?, find(&q, i2, Side::Right, &nb)?);
    let c = Proof::and_r(p, i1, ja, q, i2, jb)?;
    let j = c.seq(i1).succ.len() - 1;
    Ok(c.neg_l(i1, j)?)
}

pub fn imp_r(p: Proof, i: usize, ja: usize, jb: usize) -> Result<Proof, ShapeError> {
    let a = get_formula(&p, i, Side::Left, ja)?;
    let b = get_formula(&p, i, Side::Right, jb)?;
    let nb = Formula::neg(b);
    let conj = Formula::and(a.clone(), nb.clone());
    let p = p.neg_l(i, jb)?;
    let n = p.seq(i).ante.len() - 1;
    let p = p.and_l1(i, ja, nb)?.and_l2(i, n, a)?.ic(Side::Left, i, ja, n)?;
    let j = find(&p, i, Side::Left, &conj)?;
    Ok(p.neg_r(i, j)?)
}

pub fn or_r(p: Proof, i: usize, ja: usize, jb: usize) -> Result<Proof, ShapeError> {
    if ja == jb {
        return shape("or-r needs two distinct positions");
    }
    let a = get_formula(&p, i, Side::Right, ja)?;
    let b = get_formula(&p, i, Side::Right, jb)?;
    let (na, nb) = (Formula::neg(a), Formula::neg(b));
    let conj = Formula::and(na.clone(), nb.clone());
    let p = p.neg_l(i, ja.max(jb))?.neg_l(i, ja.min(jb))?;
    let n = p.seq(i).ante.len();
    let (pa, pb) = if ja > jb { (n - 2, n - 1) } else { (n - 1, n - 2) };
    let p = p.and_l1(i, pa, nb)?.and_l2(i, pb, na)?.ic(Side::Left, i, n - 2, n - 1)?;
    let j = find(&p, i, Side::Left, &conj)?;
    Ok(p.neg_r(i, j)?)
}

pub fn or_l(p: Proof, i1: usize, j1: usize, q: Proof, i2: usize, j2: usize) -> Result<Proof, ShapeError> {
    let a = get_formula(&p, i1, Side::Left, j1)?;
    let b = get_formula(&q, i2, Side::Left, j2)?;
    let r1 = rest(p.seq(i1), Side::Left, j1);
    let r2 = rest(q.seq(i2), Side::Left, j2);
    let p = p.neg_r(i1, j1)?;
    let q = q.neg_r(i2, j2)?;
    let (p, q) = align(p, i1, &r1, q, i2, &r2)?;
    let (na, nb) = (Formula::neg(a), Formula::neg(b));
    let (ja, jb) = (find(&p, i1, Side::Right, &na)?, find(&q, i2, Side::Right, &nb)?);
    let c = Proof::and_r(p, i1, ja, q, i2, jb)?;
    let j = c.seq(i1).succ.len() - 1;
    Ok(c.neg_l(i1, j)?)
}

pub fn s4_box_l(p: Proof, idx: usize) -> Result<Proof, ShapeError> {
    let s = single(&p, Sort::Plain)?;
    if idx >= s.ante.len() {
        return shape(format!("no antecedent formula {idx}"));
    }
    let p = p.nec2()?.k(0, idx)?.t2(0)?;
    Ok(p.merge(1, 0)?)
}

fn all_boxed(v: &[Formula]) -> bool {
    v.iter().all(Formula::is_boxed)
}

/// `4l` on every antecedent formula of sequent `i`, merging the resulting
/// `→`-sequents into one; returns its position.
fn four_l_all(mut p: Proof, i: usize) -> Result<(Proof, Option<usize>), StepError> {
    let mut block: Option<usize> = None;
    while !p.seq(i).ante.is_empty() {
        p = p.four_l(i, 0)?;
        let new = p.last();
        block = Some(match block {
            None => new,
            Some(b) => {
                let (q, pos) = merge_pair(p, b, new)?;
                p = q;
                pos
            }
        });
    }
    Ok((p, block))
}

pub fn s4_box_r(p: Proof) -> Result<Proof, ShapeError> {
    let s = single(&p, Sort::Plain)?;
    if !all_boxed(&s.ante) || s.succ.len() != 1 {
        return shape(format!("s4-box-r needs □Γ → A, got {s}"));
    }
    let (p, block) = four_l_all(p.nec2()?, 0)?;
    let p = p.nec1(0)?;
    Ok(match block {
        Some(b) => p.merge(0, b)?,
        None => p,
    })
}

pub fn s5_box_r(p: Proof, idx: usize) -> Result<Proof, ShapeError> {
    let s = single(&p, Sort::Plain)?;
    if idx >= s.succ.len() {
        return shape(format!("no succedent formula {idx}"));
    }
    let mut delta = s.succ.clone();
    delta.remove(idx);
    if !all_boxed(&s.ante) || !all_boxed(&delta) {
        return shape(format!("s5-box-r needs □Γ → □Δ, A, got {s}"));
    }
    let (mut p, _) = four_l_all(p.nec2()?, 0)?;
    for d in &delta {
        let j = find(&p, 0, Side::Right, d)?;
        p = p.neg_l(0, j)?;
    }
    for d in &delta {
        let nd = Formula::neg(d.clone());
        let j = find(&p, 0, Side::Left, &nd)?;
        p = p.k(0, j)?;
        let target = Formula::boxed(nd);
        let lemma = five_lemma(d.unbox().unwrap().clone())?;
        let lj = find(&lemma, 0, Side::Right, &target)?;
        let pos = p.last();
        p = mcut(lemma, 0, lj, p, pos, 0)?;
    }
    let i = (0..p.conclusion.len())
        .find(|&k| p.seq(k).sort == Sort::Modal)
        .unwrap();
    let p = p.nec1(i)?;
    let (p, _) = merge_sort(p, Sort::Plain, &[])?;
    Ok(p)
}

pub fn kd4(p: Proof, gamma: &[usize]) -> Result<Proof, ShapeError> {
    let s = single(&p, Sort::Plain)?;
    if !s.succ.is_empty() {
        return shape(format!("kd4 needs an empty succedent, got {s}"));
    }
    let mut g = vec![];
    let mut d = vec![];
    for (j, a) in s.ante.iter().enumerate() {
        if gamma.contains(&j) {
            g.push(a.clone());
        } else if a.is_boxed() {
            d.push(a.clone());
        } else {
            return shape(format!("kd4: {a} is neither in Γ nor boxed"));
        }
    }
    if gamma.iter().any(|&j| j >= s.ante.len()) {
        return shape("kd4: Γ position out of range");
    }
    let mut p = p.nec2()?;
    for a in &g {
        let j = find(&p, 0, Side::Left, a)?;
        p = p.k(0, j)?;
    }
    for a in &d {
        let j = find(&p, 0, Side::Left, a)?;
        p = p.four_l(0, j)?;
    }
    let p = p.d(0)?;
    let (p, _) = merge_sort(p, Sort::Plain, &[])?;
    Ok(p)
}

fn all_modal(p: &Proof) -> Result<(), ShapeError> {
    if p.conclusion.all_sort(Sort::Modal) {
        Ok(())
    } else {
        shape(format!("expected an all-⇒ hypersequent, got {}", p.conclusion))
    }
}

pub fn std_box_l(p: Proof, seq: usize, idx: usize) -> Result<Proof, ShapeError> {
    all_modal(&p)?;
    get_formula(&p, seq, Side::Left, idx)?;
    Ok(p.t1(seq, idx)?)
}

pub fn std_box_r(p: Proof, seq: usize) -> Result<Proof, ShapeError> {
    all_modal(&p)?;
    let s = get_seq(&p, seq)?;
    if !all_boxed(&s.ante) || s.succ.len() != 1 {
        return shape(format!("std-box-r needs □Γ ⇒ A, got {s}"));
    }
    let (p, block) = four_l_all(p, seq)?;
    let p = p.nec1(seq)?;
    let (p, pos) = match block {
        Some(b) => merge_pair(p, seq, b)?,
        None => (p, seq),
    };
    Ok(p.five2(pos)?)
}

pub fn std_move(p: Proof, from: usize, idx: usize, to: usize) -> Result<Proof, ShapeError> {
    all_modal(&p)?;
    if from == to {
        return shape("std-move needs two distinct sequents");
    }
    get_seq(&p, to)?;
    if !get_formula(&p, from, Side::Left, idx)?.is_boxed() {
        return shape("std-move moves a boxed formula");
    }
    let p = p.four_l(from, idx)?;
    let last = p.last();
    Ok(p.five2(last)?.merge(to, last)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SystemId;
    use crate::checker::{check_fragment, check_proof};
    use crate::syntax::{f, hs, sq};

    fn frag(d: Derived, goals: &[&str]) -> Proof {
        let ps = goals.iter().map(|g| Proof::open(hs(g))).collect();
        expand_derived(&d, ps).unwrap()
    }

    #[test]
    fn s4_box_l_shape() {
        let p = frag(Derived::S4BoxL { idx: 0 }, &["p, q -> r"]);
        assert!(p.conclusion.equiv(&hs("box p, q -> r")));
        let rules: Vec<RuleId> = [&p, &p.premises[0], &p.premises[0].premises[0], &p.premises[0].premises[0].premises[0]]
            .iter()
            .map(|x| x.rule().unwrap())
            .collect();
        assert_eq!(rules, vec![RuleId::Merge, RuleId::T2, RuleId::K, RuleId::Nec2]);
        assert!(check_fragment(&p, SystemId::S4).ok);
    }

    #[test]
    fn s4_box_r_shape() {
        let p = frag(Derived::S4BoxR, &["box p, box q -> r"]);
        assert!(p.conclusion.equiv(&hs("box p, box q -> box r")));
        assert!(check_fragment(&p, SystemId::K4).ok);
        let e = expand_derived(&Derived::S4BoxR, vec![Proof::open(hs("p -> r"))]).unwrap_err();
        assert!(matches!(e, ShapeError::Shape(_)));
    }

    #[test]
    fn s5_box_r_embeds_cut() {
        let p = frag(Derived::S5BoxR { idx: 1 }, &["box p -> box q, r"]);
        assert!(p.conclusion.equiv(&hs("box p -> box q, box r")));
        assert!(check_fragment(&p, SystemId::S5).ok);
        assert_eq!(p.count_rule(RuleId::Cut), 1);
    }

    #[test]
    fn kd4_shape() {
        let p = frag(Derived::Kd4 { gamma: vec![0] }, &["p, box q ->"]);
        assert!(p.conclusion.equiv(&hs("box p, box q ->")));
        assert!(check_fragment(&p, SystemId::KD4).ok);
        assert!(!check_fragment(&p, SystemId::K4).ok);
    }

    #[test]
    fn std_rules() {
        let p = frag(Derived::StdBoxR { seq: 1 }, &["=> q || box p => r"]);
        assert!(p.conclusion.equiv(&hs("=> q || box p => box r")));
        assert!(check_fragment(&p, SystemId::S5).ok);
        let p = frag(Derived::StdMove { from: 1, idx: 0, to: 0 }, &["s => q || box p, r =>"]);
        assert!(p.conclusion.equiv(&hs("s, box p => q || r =>")));
        assert!(check_fragment(&p, SystemId::S5).ok);
        let p = frag(Derived::StdBoxL { seq: 0, idx: 0 }, &["p => q"]);
        assert!(p.conclusion.equiv(&hs("box p => q")));
    }

    #[test]
    fn propositional_macros() {
        let p = frag(Derived::ImpR { seq: 0, ante: 0, succ: 1 }, &["p, s -> r, q"]);
        assert!(p.conclusion.equiv(&hs("s -> r, p > q")));
        assert!(check_fragment(&p, SystemId::K).ok);
        let p = frag(Derived::ImpL { seq: [0, 0], idx: [0, 0] }, &["-> p", "q -> r"]);
        assert!(p.conclusion.equiv(&hs("p > q -> r")));
        let p = frag(Derived::OrR { seq: 0, idx: [1, 0] }, &["s -> p, q"]);
        assert!(p.conclusion.equiv(&hs("s -> q | p")));
        let p = frag(Derived::OrL { seq: [0, 0], idx: [0, 0] }, &["p -> r", "q -> s"]);
        assert!(p.conclusion.equiv(&hs("p | q -> r, s")));
        assert!(check_fragment(&p, SystemId::K).ok);
    }

    #[test]
    fn mcut_concatenates() {
        let p = frag(Derived::MCut { seq: [1, 1], idx: [0, 0] }, &["u => || -> a", "=> v || a -> b"]);
        assert!(p.conclusion.equiv(&hs("u => || -> b || => v")));
        assert!(check_fragment(&p, SystemId::K).ok);
    }

    #[test]
    fn plugging_checked_premises() {
        let ax = Proof::ax(Sort::Plain, f("p"));
        let p = expand_derived(&Derived::S4BoxL { idx: 0 }, vec![ax]).unwrap();
        assert_eq!(p.conclusion, hs("box p -> p"));
        assert!(check_proof(&p, SystemId::S4).ok);
        let _ = sq("p -> p");
    }
}
