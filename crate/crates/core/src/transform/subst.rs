//! Replaying a proof with some formula occurrences replaced.
//!
//! A replay follows the ancestors of the tracked occurrences upward. Each
//! node is rebuilt with the tracked formulas removed, the substitute
//! formulas added to their sequents, and a context hypersequent added once.
//! Nodes that create a tracked occurrence are given to an [`Intro`] handler.

use std::fmt::Display;

use super::occ::{origins, transport_occ, Origin};
use super::{stuck, Engine, Result, TransformError};
use crate::calculus::{Args, RuleId};
use crate::checker::{fit, Proof};
use crate::syntax::{Formula, Hypersequent, Sequent, Side};

/// Tracked occurrences `(sequent, side, index)`, sorted.
pub type Occs = Vec<(usize, Side, usize)>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Subst {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
    pub ctx: Vec<Sequent>,
}

pub(crate) fn to_stuck<T, E: Display>(r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| TransformError::Stuck(e.to_string()))
}

/// `h` with the occurrences `t` replaced according to `s`.
pub fn target(h: &Hypersequent, t: &Occs, s: &Subst) -> Hypersequent {
    let mut out = h.clone();
    for &(i, side, j) in t.iter().rev() {
        out.0[i].side_mut(side).remove(j);
    }
    for &(i, _, _) in t {
        out.0[i].ante.extend(s.ante.iter().cloned());
        out.0[i].succ.extend(s.succ.iter().cloned());
    }
    if !t.is_empty() {
        for c in &s.ctx {
            out.push(c.clone());
        }
    }
    out
}

/// Position of the untracked occurrence `(i, side, j)` after removing `t`.
pub fn map_idx(t: &Occs, i: usize, side: Side, j: usize) -> Option<usize> {
    if t.contains(&(i, side, j)) {
        return None;
    }
    Some(j - t.iter().filter(|o| o.0 == i && o.1 == side && o.2 < j).count())
}

fn contained(a: &[Formula], b: &[Formula]) -> bool {
    let mut used = vec![false; b.len()];
    a.iter().all(|x| match (0..b.len()).find(|&k| !used[k] && b[k] == *x) {
        Some(k) => {
            used[k] = true;
            true
        }
        None => false,
    })
}

fn seq_in(a: &Sequent, b: &Sequent) -> bool {
    a.sort == b.sort && contained(&a.ante, &b.ante) && contained(&a.succ, &b.succ)
}

fn assign(ps: &[Sequent], qs: &[Sequent], used: &mut Vec<bool>, out: &mut Vec<usize>) -> bool {
    let k = out.len();
    if k == ps.len() {
        return true;
    }
    for j in 0..qs.len() {
        if !used[j] && seq_in(&ps[k], &qs[j]) {
            used[j] = true;
            out.push(j);
            if assign(ps, qs, used, out) {
                return true;
            }
            out.pop();
            used[j] = false;
        }
    }
    false
}

fn missing(have: &[Formula], want: &[Formula]) -> Vec<Formula> {
    let mut used = vec![false; have.len()];
    want.iter()
        .filter(|x| match (0..have.len()).find(|&k| !used[k] && have[k] == **x) {
            Some(k) => {
                used[k] = true;
                false
            }
            None => true,
        })
        .cloned()
        .collect()
}

/// Weaken `q` up to `tgt` without merging or contracting.
fn grow(mut q: Proof, tgt: &Hypersequent) -> Option<Proof> {
    let mut out = vec![];
    if !assign(&q.conclusion.0, &tgt.0, &mut vec![false; tgt.len()], &mut out) {
        return None;
    }
    for (k, &j) in out.iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            for a in missing(q.seq(k).side(side), tgt.0[j].side(side)) {
                q = q.iw(side, k, a).ok()?;
            }
        }
    }
    for (j, s) in tgt.0.iter().enumerate() {
        if !out.contains(&j) {
            q = q.ew(s.clone()).ok()?;
        }
    }
    Some(q)
}

/// Bring `q` to exactly `tgt` by weakening, or by contraction, merging and
/// splitting when plain weakening does not suffice.
pub fn finish(q: Proof, tgt: &Hypersequent) -> Result<Proof> {
    let q = if q.conclusion.equiv(tgt) {
        q
    } else if let Some(g) = grow(q.clone(), tgt) {
        g
    } else {
        to_stuck(fit(q, tgt))?
    };
    super::relayout(q, tgt)
}

/// Handler for nodes where the generic treatment does not apply.
pub trait Intro {
    /// A proof of a hypersequent that [`finish`] can bring to
    /// `target(node, t)`, or `None` for the generic treatment.
    fn intro(&mut self, rp: &mut Replay<'_>, node: &Proof, t: &Occs) -> Result<Option<Proof>>;
}

pub struct Replay<'e> {
    pub eng: &'e mut Engine,
    pub subst: Subst,
}

fn is_intro(o: &Origin) -> bool {
    !matches!(o, Origin::From(_))
}

impl<'e> Replay<'e> {
    pub fn new(eng: &'e mut Engine, subst: Subst) -> Replay<'e> {
        Replay { eng, subst }
    }

    pub fn target(&self, h: &Hypersequent, t: &Occs) -> Hypersequent {
        target(h, t, &self.subst)
    }

    pub fn run(&mut self, h: &mut dyn Intro, node: &Proof, t: &Occs) -> Result<Proof> {
        if t.is_empty() {
            return Ok(node.clone());
        }
        self.eng.tick()?;
        let tgt = self.target(&node.conclusion, t);
        if let Some(q) = h.intro(self, node, t)? {
            return finish(q, &tgt);
        }
        let q = self.generic(h, node, t)?;
        finish(q, &tgt)
    }

    /// The treatment used when the handler declines: weakening for
    /// occurrences created by `iw`/`ew`, otherwise the rule is re-applied
    /// to the replayed premises.
    pub fn generic(&mut self, h: &mut dyn Intro, node: &Proof, t: &Occs) -> Result<Proof> {
        let Some(app) = &node.app else {
            return stuck("open leaf");
        };
        let rule = app.rule;
        let orig = origins(node)?;
        let intro = t.iter().any(|&(i, side, j)| is_intro(&orig[i].side(side)[j]));
        if intro {
            return match rule {
                RuleId::IwL | RuleId::IwR | RuleId::Ew => {
                    let tk = transport_occ(&orig, t, 0);
                    let q = self.run(h, &node.premises[0], &tk)?;
                    self.with_ctx(q, &tk)
                }
                _ => stuck(format!("{rule} introduces a tracked occurrence in {}", node.conclusion)),
            };
        }
        let mut ts = vec![];
        let mut prems = vec![];
        for (k, pr) in node.premises.iter().enumerate() {
            let tk = transport_occ(&orig, t, k);
            let q = self.run(h, pr, &tk)?;
            prems.push(self.with_ctx(q, &tk)?);
            ts.push(tk);
        }
        if matches!(rule, RuleId::IcL | RuleId::IcR) {
            let side = rule.side().unwrap();
            let (i, j, k) = (app.args.seq[0], app.args.idx[0], app.args.idx[1]);
            if ts[0].contains(&(i, side, j)) && ts[0].contains(&(i, side, k)) {
                return self.contract_copies(prems.pop().unwrap(), i);
            }
        }
        let args = self.translate(node, &ts)?;
        to_stuck(Proof::infer(rule, args, prems))
    }

    fn with_ctx(&self, mut q: Proof, tk: &Occs) -> Result<Proof> {
        if tk.is_empty() {
            for c in &self.subst.ctx {
                q = to_stuck(q.ew(c.clone()))?;
            }
        }
        Ok(q)
    }

    /// Contract one copy of the substitute formulas in sequent `i`.
    fn contract_copies(&self, mut q: Proof, i: usize) -> Result<Proof> {
        for (side, fs) in [(Side::Left, &self.subst.ante), (Side::Right, &self.subst.succ)] {
            for a in fs {
                let v = q.seq(i).side(side);
                let k = v.iter().rposition(|x| x == a);
                let j = k.and_then(|k| v[..k].iter().rposition(|x| x == a));
                match (j, k) {
                    (Some(j), Some(k)) => q = to_stuck(q.ic(side, i, j, k))?,
                    _ => return stuck("substitute copies missing for contraction"),
                }
            }
        }
        Ok(q)
    }

    fn translate(&self, node: &Proof, ts: &[Occs]) -> Result<Args> {
        use RuleId::*;
        let app = node.app.as_ref().unwrap();
        let mut args = app.args.clone();
        let m = |k: usize, i: usize, side: Side, j: usize| -> Result<usize> {
            match map_idx(&ts[k], i, side, j) {
                Some(x) => Ok(x),
                None => stuck(format!("{} acts on a tracked occurrence", app.rule)),
            }
        };
        let s = |k: usize| args.seq.get(k).copied().unwrap_or(0);
        match app.rule {
            AndL1 | AndL2 | NegR | T1 | K | FourL | B1 | Five1 => {
                args.idx[0] = m(0, s(0), Side::Left, args.idx[0])?;
            }
            NegL => args.idx[0] = m(0, s(0), Side::Right, args.idx[0])?,
            IcL | IcR => {
                let side = app.rule.side().unwrap();
                args.idx[0] = m(0, s(0), side, args.idx[0])?;
                args.idx[1] = m(0, s(0), side, args.idx[1])?;
            }
            AndR => {
                args.idx[0] = m(0, s(0), Side::Right, args.idx[0])?;
                args.idx[1] = m(1, s(1), Side::Right, args.idx[1])?;
            }
            Cut => {
                args.idx[0] = m(0, s(0), Side::Right, args.idx[0])?;
                args.idx[1] = m(1, s(1), Side::Left, args.idx[1])?;
            }
            Split => {
                let i = s(0);
                let (la, ls) = args.split.clone().unwrap_or_default();
                let prem = node.premises[0].seq(i);
                let mine: Vec<&(usize, Side, usize)> = ts[0].iter().filter(|o| o.0 == i).collect();
                let gone = |side: Side| mine.iter().filter(|o| o.1 == side).count();
                let base_a = prem.ante.len() - gone(Side::Left);
                let base_s = prem.succ.len() - gone(Side::Right);
                let mut na: Vec<usize> = la.iter().filter_map(|&j| map_idx(&ts[0], i, Side::Left, j)).collect();
                let mut ns: Vec<usize> = ls.iter().filter_map(|&j| map_idx(&ts[0], i, Side::Right, j)).collect();
                let (xa, xs) = (self.subst.ante.len(), self.subst.succ.len());
                for (n, o) in mine.iter().enumerate() {
                    let first = match o.1 {
                        Side::Left => la.contains(&o.2),
                        Side::Right => ls.contains(&o.2),
                    };
                    if first {
                        na.extend((0..xa).map(|f| base_a + n * xa + f));
                        ns.extend((0..xs).map(|f| base_s + n * xs + f));
                    }
                }
                args.split = Some((na, ns));
            }
            _ => {}
        }
        Ok(args)
    }
}

/// Contract all tracked occurrences `t` (same sequent and side) of `p`
/// into the first; returns the proof and that occurrence's position.
pub fn contract_tracked(mut p: Proof, t: &Occs) -> Result<(Proof, (usize, Side, usize))> {
    let Some(&first) = t.first() else {
        return stuck("nothing to contract");
    };
    for &(i, side, k) in t[1..].iter().rev() {
        if i != first.0 || side != first.1 {
            return stuck("tracked occurrences lie in different sequents");
        }
        p = to_stuck(p.ic(side, i, first.2, k))?;
    }
    Ok((p, first))
}

/// Handler that leaves everything to the generic treatment.
pub struct Plain;

impl Intro for Plain {
    fn intro(&mut self, _: &mut Replay<'_>, _: &Proof, _: &Occs) -> Result<Option<Proof>> {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SystemId;
    use crate::checker::check_proof;
    use crate::syntax::{f, hs, Sort};
    use crate::transform::Options;

    #[test]
    fn target_replaces_and_appends() {
        let h = hs("p, q -> r || s => t");
        let s = Subst {
            ante: vec![f("a")],
            succ: vec![f("b")],
            ctx: vec![crate::syntax::sq("=> c")],
        };
        let t = vec![(0, Side::Left, 0)];
        assert_eq!(target(&h, &t, &s), hs("q, a -> r, b || s => t || => c"));
        assert_eq!(map_idx(&t, 0, Side::Left, 1), Some(0));
    }

    #[test]
    fn erase_weakened_formula() {
        let p = Proof::ax(Sort::Plain, f("p")).iw_r(0, f("q")).unwrap().iw_l(0, f("r")).unwrap();
        let mut eng = Engine::new(SystemId::K, Options::default());
        let mut rp = Replay::new(&mut eng, Subst::default());
        let q = rp.run(&mut Plain, &p, &vec![(0, Side::Right, 1)]).unwrap();
        assert_eq!(q.conclusion, hs("p, r -> p"));
        assert!(check_proof(&q, SystemId::K).ok);
    }

    #[test]
    fn substitution_through_split_and_contraction() {
        let p = Proof::ax(Sort::Plain, f("p"))
            .iw_l(0, f("q"))
            .unwrap()
            .iw_l(0, f("q"))
            .unwrap()
            .ic(Side::Left, 0, 1, 2)
            .unwrap()
            .split(0, vec![1], vec![])
            .unwrap();
        assert_eq!(p.conclusion, hs("q -> || p -> p"));
        let mut eng = Engine::new(SystemId::K, Options::default());
        let s = Subst {
            ante: vec![f("a"), f("b")],
            succ: vec![f("c")],
            ctx: vec![],
        };
        let mut rp = Replay::new(&mut eng, s);
        let q = rp.run(&mut Plain, &p, &vec![(0, Side::Left, 0)]).unwrap();
        assert_eq!(q.conclusion, hs("a, b -> c || p -> p"));
        assert!(check_proof(&q, SystemId::K).ok);
    }
}
