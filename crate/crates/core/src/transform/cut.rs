//! Cut-formula reduction and cut-elimination for α and β.
//!
//! Cuts are removed uppermost first. A cut on `A∧B` or `¬A` is first
//! reduced to cuts on the components by inverting both premises. A cut on
//! an atom, `⊥` or `□B` is removed by replaying one premise with the cut
//! formula replaced by the other premise's context. The replay of the
//! left premise stops where the cut formula is introduced, and there the
//! right premise is replayed against that introduction. When both sides are
//! principal the modal rules are matched: `nec1`/`4r` against `K`, `T1`,
//! `4l`, `5₁` or `B1`, leaving a cut on `B` that is removed later.
//! A `nec2` on a replayed path whose context cannot be carried is cut off
//! and its premise is used as the new cut partner.

use std::collections::BTreeSet;

use super::atomize::eta;
use super::occ::{origins, stored_to_applied, transport_occ, Origin};
use super::subst::{contract_tracked, finish, map_idx, to_stuck, Intro, Occs, Replay, Subst};
use super::t2::lower;
use super::{require_group, stuck, uppermost, validate, Engine, Options, Result, TransformError};
use crate::calculus::{Group, RuleId, SystemId};
use crate::checker::derived::mcut;
use crate::checker::Proof;
use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};

type Occ = (usize, Side, usize);

fn cut_formula(node: &Proof) -> &Formula {
    let a = node.args();
    &node.premises[0].seq(a.seq[0]).succ[a.idx[0]]
}

/// Degrees of all cut formulas, largest first.
pub fn cut_degrees(p: &Proof) -> Vec<usize> {
    let mut v = vec![];
    p.visit(&mut |_, n| {
        if n.rule() == Some(RuleId::Cut) {
            v.push(cut_formula(n).degree());
        }
    });
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn intro_occs(node: &Proof, t: &Occs) -> Result<Vec<Occ>> {
    let orig = origins(node)?;
    Ok(t.iter()
        .copied()
        .filter(|&(i, side, j)| !matches!(orig[i].side(side)[j], Origin::From(_)))
        .collect())
}

fn without(t: &Occs, o: Occ) -> Occs {
    t.iter().copied().filter(|&x| x != o).collect()
}

fn remap(others: &Occs, o: Occ) -> Result<Occ> {
    match map_idx(others, o.0, o.1, o.2) {
        Some(j) => Ok((o.0, o.1, j)),
        None => stuck("occurrence vanished"),
    }
}

enum Inv {
    AndR(bool),
    AndL,
    NegR,
    NegL,
}

impl Intro for Inv {
    fn intro(&mut self, rp: &mut Replay<'_>, node: &Proof, t: &Occs) -> Result<Option<Proof>> {
        if intro_occs(node, t)?.is_empty() {
            return Ok(None);
        }
        use RuleId::*;
        let rule = node.rule().unwrap();
        let orig = origins(node)?;
        let k = match (&*self, rule) {
            (_, InitAx) => {
                let e = eta(node.seq(0).sort, &node.seq(0).ante[0])?;
                if e.rule() == Some(InitAx) {
                    return stuck("initial sequent on an atom");
                }
                return Ok(Some(rp.run(self, &e, t)?));
            }
            (Inv::AndR(left), AndR) => usize::from(!*left),
            (Inv::AndL, AndL1 | AndL2) | (Inv::NegR, NegR) | (Inv::NegL, NegL) => 0,
            _ => return Ok(None),
        };
        let tk = transport_occ(&orig, t, k);
        Ok(Some(rp.run(self, &node.premises[k], &tk)?))
    }
}

fn invert(eng: &mut Engine, mode: Inv, p: &Proof, o: Occ, ante: Vec<Formula>, succ: Vec<Formula>) -> Result<Proof> {
    let s = Subst { ante, succ, ctx: vec![] };
    let mut mode = mode;
    Replay::new(eng, s).run(&mut mode, p, &vec![o])
}

/// Reduce a final cut on a conjunction or negation to cuts on atoms, `⊥`
/// and boxed formulas.
pub fn reduce_cut_formula(p: &Proof) -> Result<Proof> {
    let mut eng = Engine::new(SystemId::K, Options::default());
    reduce_in(&mut eng, p)
}

pub fn reduce_in(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    if p.rule() != Some(RuleId::Cut) {
        return Ok(p.clone());
    }
    let (l, r) = (&p.premises[0], &p.premises[1]);
    let a = p.args();
    let (i1, i2, j1, j2) = (a.seq[0], a.seq[1], a.idx[0], a.idx[1]);
    let out = match cut_formula(p).clone() {
        Formula::Neg(b) => {
            let b = *b;
            let l2 = invert(eng, Inv::NegR, l, (i1, Side::Right, j1), vec![b.clone()], vec![])?;
            let r2 = invert(eng, Inv::NegL, r, (i2, Side::Left, j2), vec![], vec![b])?;
            let (jr, jl) = (r2.seq(i2).succ.len() - 1, l2.seq(i1).ante.len() - 1);
            let c = Proof::cut(r2, i2, jr, l2, i1, jl)?;
            reduce_in(eng, &c)?
        }
        Formula::And(b, c) => {
            let (b, c) = (*b, *c);
            let lb = invert(eng, Inv::AndR(true), l, (i1, Side::Right, j1), vec![], vec![b.clone()])?;
            let lc = invert(eng, Inv::AndR(false), l, (i1, Side::Right, j1), vec![], vec![c.clone()])?;
            let rbc = invert(eng, Inv::AndL, r, (i2, Side::Left, j2), vec![b, c], vec![])?;
            let (jb, n) = (lb.seq(i1).succ.len() - 1, rbc.seq(i2).ante.len());
            let c1 = Proof::cut(lb, i1, jb, rbc, i2, n - 2)?;
            let c1 = reduce_in(eng, &c1)?;
            let (jc, n) = (lc.seq(i1).succ.len() - 1, c1.seq(i1).ante.len());
            let (ga, gs) = (lc.seq(i1).ante.len(), lc.seq(i1).succ.len() - 1);
            let c2 = Proof::cut(lc, i1, jc, c1, i1, n - 1)?;
            let mut q = reduce_in(eng, &c2)?;
            for k in (0..ga).rev() {
                q = q.ic(Side::Left, i1, k, ga + k)?;
            }
            for k in (0..gs).rev() {
                q = q.ic(Side::Right, i1, k, gs + k)?;
            }
            q
        }
        _ => return Ok(p.clone()),
    };
    super::relayout(out, &p.conclusion)
}

/// Substitutions standing for "the rest of `h` without occurrence `o`":
/// the rest of `o`'s sequent goes into that sequent, or all `→`-parts are
/// merged into it.
fn variants(h: &Hypersequent, o: Occ) -> Vec<Subst> {
    let mut rest = h.clone();
    rest.0[o.0].side_mut(o.1).remove(o.2);
    let own = rest.0[o.0].clone();
    let others: Vec<Sequent> = rest.0.iter().enumerate().filter(|(k, _)| *k != o.0).map(|x| x.1.clone()).collect();
    let mut out = vec![Subst {
        ante: own.ante.clone(),
        succ: own.succ.clone(),
        ctx: others.clone(),
    }];
    if own.sort == Sort::Plain && others.iter().any(|s| s.sort == Sort::Plain) {
        let mut merged = own;
        for s in others.iter().filter(|s| s.sort == Sort::Plain) {
            merged = merged.concat(s).unwrap();
        }
        out.push(Subst {
            ante: merged.ante,
            succ: merged.succ,
            ctx: others.into_iter().filter(|s| s.sort == Sort::Modal).collect(),
        });
    }
    out
}

/// Replay `l` with its occurrence `lo` replaced by the rest of `r`.
fn left_first(eng: &mut Engine, l: &Proof, lo: Occ, r: &Proof, ro: Occ) -> Result<Proof> {
    let mut msgs = vec![];
    for s in variants(&r.conclusion, ro) {
        let mut h = LSide { r: r.clone(), ro };
        match Replay::new(eng, s).run(&mut h, l, &vec![lo]) {
            Err(TransformError::Stuck(m)) => msgs.push(m),
            other => return other,
        }
    }
    stuck(msgs.join("; "))
}

/// Replay `r` with its occurrence `ro` replaced by the rest of `l`.
fn right_first(eng: &mut Engine, l: &Proof, lo: Occ, r: &Proof, ro: Occ) -> Result<Proof> {
    let mut msgs = vec![];
    for s in variants(&l.conclusion, lo) {
        let mut h = RSide { l: l.clone(), lo };
        match Replay::new(eng, s).run(&mut h, r, &vec![ro]) {
            Err(TransformError::Stuck(m)) => msgs.push(m),
            other => return other,
        }
    }
    stuck(msgs.join("; "))
}

struct Erase;

impl Intro for Erase {
    fn intro(&mut self, _: &mut Replay<'_>, node: &Proof, t: &Occs) -> Result<Option<Proof>> {
        if node.rule() == Some(RuleId::InitAx) && node.seq(0).ante[0] == Formula::Bot && t.iter().all(|o| o.1 == Side::Right) {
            return Ok(Some(Proof::bot(node.seq(0).sort)));
        }
        Ok(None)
    }
}

fn erase(eng: &mut Engine, p: &Proof, o: Occ) -> Result<Proof> {
    Replay::new(eng, Subst::default()).run(&mut Erase, p, &vec![o])
}

/// At a tracked `nec2`, first try to carry the substitution through; when
/// that is impossible, cut the premise against the partner instead.
fn nec2_cutoff(
    rp: &mut Replay<'_>,
    h: &mut dyn Intro,
    node: &Proof,
    t: &Occs,
    partner: impl FnOnce(&mut Engine, Proof, Occ) -> Result<Proof>,
) -> Result<Option<Proof>> {
    match rp.generic(h, node, t) {
        Ok(q) => return Ok(Some(q)),
        Err(TransformError::Stuck(_)) => {}
        Err(e) => return Err(e),
    }
    let orig = origins(node)?;
    let tk = transport_occ(&orig, t, 0);
    let (p0, o) = contract_tracked(node.premises[0].clone(), &tk)?;
    let mut q = partner(rp.eng, p0, o)?;
    if q.conclusion.len() == 1 && q.seq(0).sort == Sort::Plain {
        q = to_stuck(q.nec2())?;
    }
    Ok(Some(q))
}

/// Replaying the left premise; `r` holds the cut formula at `ro`.
struct LSide {
    r: Proof,
    ro: Occ,
}

impl Intro for LSide {
    fn intro(&mut self, rp: &mut Replay<'_>, n: &Proof, t: &Occs) -> Result<Option<Proof>> {
        use RuleId::*;
        let intros = intro_occs(n, t)?;
        if intros.is_empty() {
            if n.rule() == Some(Nec2) {
                let (r, ro) = (self.r.clone(), self.ro);
                return nec2_cutoff(rp, self, n, t, |eng, p0, o| right_first(eng, &p0, o, &r, ro));
            }
            return Ok(None);
        }
        if intros.len() > 1 {
            return stuck("several tracked occurrences introduced at once");
        }
        let o = intros[0];
        match n.rule().unwrap() {
            IwL | IwR | Ew => Ok(None),
            InitAx => {
                if n.seq(0).sort == self.r.seq(self.ro.0).sort {
                    Ok(Some(self.r.clone()))
                } else {
                    stuck("initial sequent and cut partner differ in sort")
                }
            }
            Nec1 | FourR => {
                let others = without(t, o);
                let nc = rp.run(self, n, &others)?;
                let o2 = remap(&others, o)?;
                Ok(Some(right_first(rp.eng, &nc, o2, &self.r, self.ro)?))
            }
            rule => stuck(format!("{rule} introduces the cut formula on the left")),
        }
    }
}

/// Replaying the right premise; `l` holds the cut formula at `lo`.
struct RSide {
    l: Proof,
    lo: Occ,
}

fn principal(p: &Proof, o: Occ) -> Result<bool> {
    if !matches!(p.rule(), Some(RuleId::Nec1 | RuleId::FourR)) {
        return Ok(false);
    }
    Ok(matches!(origins(p)?[o.0].side(o.1)[o.2], Origin::New))
}

impl Intro for RSide {
    fn intro(&mut self, rp: &mut Replay<'_>, s: &Proof, t: &Occs) -> Result<Option<Proof>> {
        use RuleId::*;
        let intros = intro_occs(s, t)?;
        if intros.is_empty() {
            if s.rule() == Some(Nec2) {
                let (l, lo) = (self.l.clone(), self.lo);
                return nec2_cutoff(rp, self, s, t, |eng, p0, o| left_first(eng, &l, lo, &p0, o));
            }
            return Ok(None);
        }
        if intros.len() > 1 {
            return stuck("several tracked occurrences introduced at once");
        }
        let o = intros[0];
        match s.rule().unwrap() {
            IwL | IwR | Ew => Ok(None),
            InitAx => {
                if s.seq(0).sort == self.l.seq(self.lo.0).sort {
                    Ok(Some(self.l.clone()))
                } else {
                    stuck("initial sequent and cut partner differ in sort")
                }
            }
            InitBot => Ok(Some(erase(rp.eng, &self.l, self.lo)?)),
            K | T1 | FourL | Five1 | B1 => {
                if principal(&self.l, self.lo)? {
                    return Ok(Some(self.principal_case(rp, s, t, o)?));
                }
                let others = without(t, o);
                let sc = rp.run(self, s, &others)?;
                let o2 = remap(&others, o)?;
                Ok(Some(left_first(rp.eng, &self.l, self.lo, &sc, o2)?))
            }
            rule => stuck(format!("{rule} introduces the cut formula on the right")),
        }
    }
}

impl RSide {
    /// `l` ends with `nec1` or `4r` on `□B`; `s` introduces `□B` on the left.
    fn principal_case(&mut self, rp: &mut Replay<'_>, s: &Proof, t: &Occs, o: Occ) -> Result<Proof> {
        use RuleId::*;
        let prem = self.l.premises[0].clone();
        let c = self.l.args().seq[0];
        let orig = origins(s)?;
        let mut tk = transport_occ(&orig, &without(t, o), 0);
        if let Origin::Moved(src) = &orig[o.0].side(o.1)[o.2] {
            tk.push((src.seq, src.side, src.idx));
            tk.sort();
        }
        let s0 = rp.run(self, &s.premises[0], &tk)?;
        let rule = s.rule().unwrap();
        let (i, j) = (s.args().seq[0], s.args().idx[0]);
        let jj = || -> Result<usize> {
            match map_idx(&tk, i, Side::Left, j) {
                Some(x) => Ok(x),
                None => stuck("principal formula is tracked"),
            }
        };
        let lowered = |eng: &mut Engine| lower(eng, &prem, &BTreeSet::from([c]));
        Ok(match rule {
            K => to_stuck(mcut(prem, c, 0, s0, i, jj()?))?,
            B1 => to_stuck(mcut(lowered(rp.eng)?, c, 0, s0, i, jj()?))?,
            T1 if s0.seq(i).sort == Sort::Plain => to_stuck(mcut(lowered(rp.eng)?, c, 0, s0, i, jj()?))?,
            T1 => {
                if !rp.eng.sys.has_rule(T1) {
                    return stuck("T1 unavailable");
                }
                let (q, c2) = column(&prem, c)?;
                let b = q.seq(c2).succ.iter().position(|x| *x == prem.seq(c).succ[0]).unwrap();
                to_stuck(mcut(q, c2, b, s0, i, jj()?))?
            }
            FourL | Five1 => {
                if !rp.subst.succ.is_empty() {
                    return stuck("moved formula replaced by a succedent");
                }
                let mut q = s0;
                for a in rp.subst.ante.clone() {
                    if !a.is_boxed() {
                        return stuck(format!("{a} cannot be moved by {rule}"));
                    }
                    let k = match q.seq(i).ante.iter().rposition(|x| *x == a) {
                        Some(k) => k,
                        None => return stuck("substitute formula missing"),
                    };
                    q = to_stuck(if rule == FourL { q.four_l(i, k) } else { q.five1(i, k) })?;
                }
                q
            }
            _ => return stuck(format!("{rule} against {}", self.l.rule().unwrap())),
        })
    }
}

/// Climb the K/4l column above the `⇒`-sequent `c` of `p` and rebuild its
/// top with the extracted formulas kept in place, using T1 for the K steps.
fn column(p: &Proof, c: usize) -> Result<(Proof, usize)> {
    let mut cur = p;
    let mut c = c;
    let mut ks = vec![];
    while let Some(rule @ (RuleId::K | RuleId::FourL)) = cur.rule() {
        let pos = stored_to_applied(cur)?;
        let i = cur.args().seq[0];
        if pos[c] != i {
            break;
        }
        if rule == RuleId::K {
            ks.push(cur.premises[0].seq(i).ante[cur.args().idx[0]].clone());
        }
        c = i;
        cur = &cur.premises[0];
    }
    let mut q = cur.clone();
    for d in ks {
        let j = q.seq(c).ante.iter().rposition(|x| *x == d).unwrap();
        q = q.t1(c, j)?;
    }
    Ok((q, c))
}

/// Remove the cut at the root of `node`, whose premises are cut-free and
/// whose cut formula is an atom, `⊥` or boxed.
fn surgery(eng: &mut Engine, node: &Proof) -> Result<Proof> {
    let (l, r) = (&node.premises[0], &node.premises[1]);
    let a = node.args();
    let lo = (a.seq[0], Side::Right, a.idx[0]);
    let ro = (a.seq[1], Side::Left, a.idx[1]);
    let mut msgs = vec![];
    for k in 0..4 {
        let q = match k {
            0 => erase(eng, l, lo),
            1 => erase(eng, r, ro),
            2 => left_first(eng, l, lo, r, ro),
            _ => right_first(eng, l, lo, r, ro),
        };
        match q.and_then(|q| finish(q, &node.conclusion)) {
            Ok(q) => return Ok(q),
            Err(TransformError::Stuck(m)) => msgs.push(m),
            Err(e) => return Err(e),
        }
    }
    stuck(format!("cut on {} at {}: {}", cut_formula(node), node.conclusion, msgs.join(" | ")))
}

/// Bring a cut-free premise into the form the surgery expects.
fn normalize(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    let mut q = super::atomize_initials(p)?;
    let sys = eng.sys;
    if sys.group() == Group::Alpha {
        q = eng.nested(|e| super::t2::eliminate_t2_in(e, &q))?;
        if let Ok(r) = eng.nested(|e| super::regular::regularize_in(e, &q)) {
            q = r;
        }
    }
    if sys.has_rule(RuleId::Five2) && sys.has_rule(RuleId::FourR) && sys.has_rule(RuleId::FourL) {
        if let Ok(r) = eng.nested(|e| super::five::restrict_52_in(e, &q)) {
            q = r;
        }
    }
    Ok(q)
}

pub fn eliminate_cut(p: &Proof, sys: SystemId) -> Result<Proof> {
    eliminate_cut_in(&mut Engine::new(sys, Options::default()), p)
}

pub fn eliminate_cut_in(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    require_group("cut-elimination", eng.sys, &[Group::Alpha, Group::Beta])?;
    validate(p, eng.sys, None)?;
    eng.start(p);
    super::with_stack(|| cut_loop(eng, p))
}

fn cut_loop(eng: &mut Engine, p: &Proof) -> Result<Proof> {
    let mut out = p.clone();
    let is_cut = |q: &Proof| q.rule() == Some(RuleId::Cut);
    while let Some(path) = uppermost(&out, &is_cut).into_iter().next() {
        let before = out.node_count();
        let node = out.at(&path).clone();
        let d = cut_formula(&node).degree();
        let mut prems = vec![];
        for pr in &node.premises {
            prems.push(normalize(eng, pr)?);
        }
        let node = super::reinfer(&node, prems).and_then(|n| super::relayout(n, &out.at(&path).conclusion))?;
        let new = match cut_formula(&node) {
            Formula::And(..) | Formula::Neg(..) => reduce_in(eng, &node)?,
            _ => surgery(eng, &node)?,
        };
        if let Some(&m) = cut_degrees(&new).first() {
            if m >= d {
                return Err(TransformError::Invalid(format!(
                    "cut of degree {d} replaced by a cut of degree {m}"
                )));
            }
        }
        super::replace_at(&mut out, &path, new)?;
        eng.step("cut", before, &out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{axiom_template, check_proof, AxiomName};
    use crate::syntax::{f, hs};

    fn sides(a: &str) -> (Proof, Proof) {
        let l = Proof::ax(Sort::Plain, f(a)).iw_l(0, f("r")).unwrap();
        let r = Proof::ax(Sort::Plain, f(a)).iw_r(0, f("s")).unwrap();
        (l, r)
    }

    #[test]
    fn reduce_conjunction_and_negation() {
        for a in ["p & q", "~p", "~(p & q)"] {
            let (l, r) = sides(a);
            let p = Proof::cut(l, 0, 0, r, 0, 0).unwrap();
            let q = reduce_cut_formula(&p).unwrap();
            assert_eq!(q.conclusion, p.conclusion, "{a}");
            assert!(check_proof(&q, SystemId::K).ok, "{a}");
            assert!(cut_degrees(&q).iter().all(|&d| d == 0), "{a}: {:?}", cut_degrees(&q));
        }
    }

    #[test]
    fn boxed_cut_unchanged_by_reduction() {
        let (l, r) = sides("box p");
        let p = Proof::cut(l, 0, 0, r, 0, 0).unwrap();
        assert_eq!(reduce_cut_formula(&p).unwrap(), p);
    }

    #[test]
    fn t_example() {
        let l = axiom_template(AxiomName::T, &[f("p")]).unwrap();
        assert_eq!(l.conclusion, hs("box p -> p"));
        let r = Proof::ax(Sort::Plain, f("p")).iw_r(0, f("q")).unwrap();
        let p = Proof::cut(l, 0, 0, r, 0, 0).unwrap();
        let q = eliminate_cut(&p, SystemId::T).unwrap();
        assert!(q.is_cut_free());
        assert_eq!(q.conclusion, p.conclusion);
        assert!(check_proof(&q, SystemId::T).ok);
    }

    #[test]
    fn boxed_cut_in_k() {
        let e = eta(Sort::Plain, &f("box p")).unwrap();
        let p = Proof::cut(e.clone(), 0, 0, e, 0, 0).unwrap();
        let q = eliminate_cut(&p, SystemId::K).unwrap();
        assert!(q.is_cut_free());
        assert_eq!(q.conclusion, hs("box p -> box p"));
    }

    #[test]
    fn gamma_rejected() {
        let p = Proof::ax(Sort::Plain, f("p"));
        let e = eliminate_cut(&p, SystemId::KB).unwrap_err();
        assert_eq!(e.to_string(), "cut-elimination unavailable for group γ");
    }
}
