//! Occurrence ancestry: where each sequent and formula of a conclusion
//! comes from in the premises.

use crate::calculus::{apply, RuleId, StepError};
use crate::checker::Proof;
use crate::syntax::{Formula, Hypersequent, Sequent, Side};

/// A formula occurrence in premise `prem`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occ {
    pub prem: usize,
    pub seq: usize,
    pub side: Side,
    pub idx: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Created by the rule (principal formula or weakening).
    New,
    /// Carried over unchanged; several sources after contraction or from
    /// the shared context of a two-premise rule.
    From(Vec<Occ>),
    /// Moved to a new sequent by `4l` or `5₁`.
    Moved(Occ),
}

#[derive(Clone, Debug)]
pub struct SeqOrigin {
    pub from: Vec<(usize, usize)>,
    pub ante: Vec<Origin>,
    pub succ: Vec<Origin>,
}

impl SeqOrigin {
    pub fn side(&self, side: Side) -> &Vec<Origin> {
        match side {
            Side::Left => &self.ante,
            Side::Right => &self.succ,
        }
    }
}

/// Origins for every sequent of the stored conclusion of `node`.
pub fn origins(node: &Proof) -> Result<Vec<SeqOrigin>, StepError> {
    let app = match &node.app {
        Some(a) => a,
        None => return Ok(fresh(&node.conclusion)),
    };
    if app.rule.arity() == 0 {
        return Ok(fresh(&node.conclusion));
    }
    let hs: Vec<Hypersequent> = node.premises.iter().map(|p| p.conclusion.clone()).collect();
    let applied = apply(app, &hs)?;
    let raw = applied_origins(app.rule, &app.args, &hs);
    let (perm, fperm) = layout_map(&node.conclusion, &applied);
    Ok(perm
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let r = &raw[a];
            let (fa, fs) = &fperm[k];
            SeqOrigin {
                from: r.from.clone(),
                ante: fa.iter().map(|&x| r.ante[x].clone()).collect(),
                succ: fs.iter().map(|&x| r.succ[x].clone()).collect(),
            }
        })
        .collect())
}

/// For each stored conclusion position, its position in the layout that
/// [`apply`] produces.
pub fn stored_to_applied(node: &Proof) -> Result<Vec<usize>, StepError> {
    let app = match &node.app {
        Some(a) if a.rule.arity() > 0 => a,
        _ => return Ok((0..node.conclusion.len()).collect()),
    };
    let hs: Vec<Hypersequent> = node.premises.iter().map(|p| p.conclusion.clone()).collect();
    let applied = apply(app, &hs)?;
    Ok(match_sequents(&node.conclusion.0, &applied.0).expect("stored conclusion is not a permutation"))
}

fn fresh(h: &Hypersequent) -> Vec<SeqOrigin> {
    h.0.iter()
        .map(|s| SeqOrigin {
            from: vec![],
            ante: vec![Origin::New; s.ante.len()],
            succ: vec![Origin::New; s.succ.len()],
        })
        .collect()
}

/// Match formulas of `a` to equal formulas of `b`; `out[j]` is the index in
/// `b` of `a[j]`.
pub fn match_formulas(a: &[Formula], b: &[Formula]) -> Vec<usize> {
    let mut used = vec![false; b.len()];
    a.iter()
        .map(|x| {
            let k = (0..b.len()).find(|&k| !used[k] && b[k] == *x).expect("formula multisets differ");
            used[k] = true;
            k
        })
        .collect()
}

/// Match sequents of `a` to equal (as multisets) sequents of `b`.
pub fn match_sequents(a: &[Sequent], b: &[Sequent]) -> Option<Vec<usize>> {
    let mut used = vec![false; b.len()];
    let mut out = vec![];
    for s in a {
        let c = s.canonical();
        let k = (0..b.len()).find(|&k| !used[k] && b[k].canonical() == c)?;
        used[k] = true;
        out.push(k);
    }
    Some(out)
}

type FormulaPerm = Vec<(Vec<usize>, Vec<usize>)>;

/// For each stored sequent, the applied sequent it corresponds to, and per
/// formula the applied index.
fn layout_map(stored: &Hypersequent, applied: &Hypersequent) -> (Vec<usize>, FormulaPerm) {
    let perm = match_sequents(&stored.0, &applied.0).expect("stored conclusion is not a permutation");
    let fperm = perm
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            (
                match_formulas(&stored.0[k].ante, &applied.0[a].ante),
                match_formulas(&stored.0[k].succ, &applied.0[a].succ),
            )
        })
        .collect();
    (perm, fperm)
}

fn same_seq(prem: usize, seq: usize, s: &Sequent) -> SeqOrigin {
    let occ = |side, idx| Origin::From(vec![Occ { prem, seq, side, idx }]);
    SeqOrigin {
        from: vec![(prem, seq)],
        ante: (0..s.ante.len()).map(|j| occ(Side::Left, j)).collect(),
        succ: (0..s.succ.len()).map(|j| occ(Side::Right, j)).collect(),
    }
}

fn occ(prem: usize, seq: usize, side: Side, idx: usize) -> Occ {
    Occ { prem, seq, side, idx }
}

fn from1(o: Occ) -> Origin {
    Origin::From(vec![o])
}

fn join(a: &mut SeqOrigin, b: &SeqOrigin) {
    a.from.extend(b.from.iter().copied());
    for (x, y) in a.ante.iter_mut().zip(&b.ante).chain(a.succ.iter_mut().zip(&b.succ)) {
        if let (Origin::From(v), Origin::From(w)) = (x, y) {
            v.extend(w.iter().copied());
        }
    }
}

/// Origins in the layout produced by `apply`.
fn applied_origins(rule: RuleId, args: &crate::calculus::Args, hs: &[Hypersequent]) -> Vec<SeqOrigin> {
    use RuleId::*;
    let h = &hs[0];
    let mut out: Vec<SeqOrigin> = h.0.iter().enumerate().map(|(k, s)| same_seq(0, k, s)).collect();
    let seq0 = args.seq.first().copied().unwrap_or(0);
    let idx = |n: usize| args.idx.get(n).copied().unwrap_or(0);
    match rule {
        InitAx | InitBot => unreachable!(),
        AndL1 | AndL2 | T1 => out[seq0].ante[idx(0)] = Origin::New,
        NegL => {
            let j = idx(0);
            let o = &mut out[seq0];
            o.succ.remove(j);
            o.ante.push(Origin::New);
        }
        NegR => {
            let j = idx(0);
            let o = &mut out[seq0];
            o.ante.remove(j);
            o.succ.push(Origin::New);
        }
        IcL | IcR => {
            let side = rule.side().unwrap();
            let (j, k) = (idx(0), idx(1));
            let v = match side {
                Side::Left => &mut out[seq0].ante,
                Side::Right => &mut out[seq0].succ,
            };
            v[j] = Origin::From(vec![occ(0, seq0, side, j), occ(0, seq0, side, k)]);
            v.remove(k);
        }
        IwL => out[seq0].ante.push(Origin::New),
        IwR => out[seq0].succ.push(Origin::New),
        Nec1 | FourR => out[seq0].succ[0] = Origin::New,
        Nec2 | D | T2 | B2 | Five2 | B25 => {}
        K | B1 | FourL | Five1 => {
            let j = idx(0);
            out[seq0].ante.remove(j);
            let o = if matches!(rule, FourL | Five1) {
                Origin::Moved(occ(0, seq0, Side::Left, j))
            } else {
                Origin::New
            };
            out.push(SeqOrigin {
                from: vec![],
                ante: vec![o],
                succ: vec![],
            });
        }
        Ew => {
            let s = args.sequent.as_ref().unwrap();
            out.push(SeqOrigin {
                from: vec![],
                ante: vec![Origin::New; s.ante.len()],
                succ: vec![Origin::New; s.succ.len()],
            });
        }
        Merge => {
            let (i, k) = (args.seq[0], args.seq[1]);
            let b = out[k].clone();
            let a = &mut out[i];
            a.from.extend(b.from);
            a.ante.extend(b.ante);
            a.succ.extend(b.succ);
            out.remove(k);
        }
        Split => {
            let (la, ls) = args.split.clone().unwrap();
            let o = out[seq0].clone();
            let part = |v: &Vec<Origin>, sel: &Vec<usize>, first: bool| -> Vec<Origin> {
                v.iter()
                    .enumerate()
                    .filter(|(j, _)| sel.contains(j) == first)
                    .map(|x| x.1.clone())
                    .collect()
            };
            out[seq0] = SeqOrigin {
                from: o.from.clone(),
                ante: part(&o.ante, &la, true),
                succ: part(&o.succ, &ls, true),
            };
            out.push(SeqOrigin {
                from: o.from.clone(),
                ante: part(&o.ante, &la, false),
                succ: part(&o.succ, &ls, false),
            });
        }
        AndR | Cut => {
            let h2 = &hs[1];
            let (i1, i2) = (args.seq[0], args.seq[1]);
            let (j1, j2) = (args.idx[0], args.idx[1]);
            let side1: Vec<usize> = (0..h.len()).filter(|&k| k != i1).collect();
            let side2: Vec<usize> = (0..h2.len()).filter(|&k| k != i2).collect();
            let s1: Vec<Sequent> = side1.iter().map(|&k| h.0[k].clone()).collect();
            let s2: Vec<Sequent> = side2.iter().map(|&k| h2.0[k].clone()).collect();
            let m = match_sequents(&s1, &s2).expect("side hypersequents differ");
            for (n, &k1) in side1.iter().enumerate() {
                let k2 = side2[m[n]];
                let mut other = same_seq(1, k2, &h2.0[k2]);
                let fa = match_formulas(&h.0[k1].ante, &h2.0[k2].ante);
                let fs = match_formulas(&h.0[k1].succ, &h2.0[k2].succ);
                other.ante = fa.iter().map(|&x| other.ante[x].clone()).collect();
                other.succ = fs.iter().map(|&x| other.succ[x].clone()).collect();
                join(&mut out[k1], &other);
            }
            let (a, b) = (&h.0[i1], &h2.0[i2]);
            let mut o = SeqOrigin {
                from: vec![(0, i1), (1, i2)],
                ante: vec![],
                succ: vec![],
            };
            if rule == AndR {
                let r1: Vec<usize> = (0..a.succ.len()).filter(|&x| x != j1).collect();
                let r2: Vec<usize> = (0..b.succ.len()).filter(|&x| x != j2).collect();
                let fa = match_formulas(&a.ante, &b.ante);
                o.ante = (0..a.ante.len())
                    .map(|x| Origin::From(vec![occ(0, i1, Side::Left, x), occ(1, i2, Side::Left, fa[x])]))
                    .collect();
                let rs1: Vec<Formula> = r1.iter().map(|&x| a.succ[x].clone()).collect();
                let rs2: Vec<Formula> = r2.iter().map(|&x| b.succ[x].clone()).collect();
                let fs = match_formulas(&rs1, &rs2);
                o.succ = (0..r1.len())
                    .map(|n| Origin::From(vec![occ(0, i1, Side::Right, r1[n]), occ(1, i2, Side::Right, r2[fs[n]])]))
                    .collect();
                o.succ.push(Origin::New);
            } else {
                o.ante = (0..a.ante.len()).map(|x| from1(occ(0, i1, Side::Left, x))).collect();
                o.ante.extend((0..b.ante.len()).filter(|&x| x != j2).map(|x| from1(occ(1, i2, Side::Left, x))));
                o.succ = (0..a.succ.len()).filter(|&x| x != j1).map(|x| from1(occ(0, i1, Side::Right, x))).collect();
                o.succ.extend((0..b.succ.len()).map(|x| from1(occ(1, i2, Side::Right, x))));
            }
            out[i1] = o;
        }
    }
    out
}

/// Premise positions feeding the conclusion positions in `set`.
pub fn transport(orig: &[SeqOrigin], set: &std::collections::BTreeSet<usize>, prem: usize) -> std::collections::BTreeSet<usize> {
    set.iter()
        .flat_map(|&k| orig[k].from.iter().filter(|x| x.0 == prem).map(|x| x.1))
        .collect()
}

/// Premise occurrences feeding the tracked conclusion occurrences, and the
/// tracked occurrences whose origin is `New` or `Moved` (the introductions).
pub fn transport_occ(
    orig: &[SeqOrigin],
    tracked: &[(usize, Side, usize)],
    prem: usize,
) -> Vec<(usize, Side, usize)> {
    let mut out = vec![];
    for &(s, side, j) in tracked {
        if let Origin::From(v) = &orig[s].side(side)[j] {
            for o in v {
                if o.prem == prem && !out.contains(&(o.seq, o.side, o.idx)) {
                    out.push((o.seq, o.side, o.idx));
                }
            }
        }
    }
    out.sort();
    out
}
