//! Bounded backward cut-free proof search.
//!
//! Goals are kept in a normal form: all `→`-sequents merged into one
//! "center", formulas as sets, and no two identical `⇒`-sequents. Rules
//! that lose nothing (propositional rules, moving a boxed formula's content
//! into a `⇒`-sequent, `nec1` on a boxed succedent formula of the center)
//! are applied cumulatively and without backtracking. The remaining steps
//! (focusing on one `⇒`-sequent via `nec2`, and the `B2`, `B25` and `5₂`
//! perspective switches) branch and count towards the depth bound. A proof
//! is rebuilt from the successful branch and re-checked.

use std::collections::BTreeSet;

use crate::calculus::{RuleId, StepError, SystemId};
use crate::checker::{check_proof, fit, Proof};
use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};
use crate::transform::relayout;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Bound on branching steps along one branch.
    pub max_depth: usize,
    pub allow_rules: BTreeSet<RuleId>,
    pub loop_check: bool,
    /// Bound on the total number of visited goals.
    pub node_budget: usize,
}

impl SearchConfig {
    pub fn for_system(sys: SystemId) -> SearchConfig {
        let mut allow = sys.rules();
        allow.remove(&RuleId::Cut);
        SearchConfig {
            max_depth: 12,
            allow_rules: allow,
            loop_check: true,
            node_budget: 100_000,
        }
    }

    pub fn depth(mut self, d: usize) -> SearchConfig {
        self.max_depth = d.max(1);
        self
    }

    /// Only the propositional and structural rules of the base calculus.
    pub fn propositional(depth: usize) -> SearchConfig {
        use RuleId::*;
        SearchConfig {
            max_depth: depth.max(1),
            allow_rules: [InitAx, InitBot, AndL1, AndL2, AndR, NegL, NegR, IcL, IcR, IwL, IwR, Ew, Merge, Split]
                .into_iter()
                .collect(),
            loop_check: true,
            node_budget: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Proof),
    ExhaustedBound,
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn proof(self) -> Option<Proof> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Goal {
    center: Option<Sequent>,
    boxes: Vec<Sequent>,
}

fn norm_seq(mut s: Sequent) -> Sequent {
    s.ante.sort();
    s.ante.dedup();
    s.succ.sort();
    s.succ.dedup();
    s
}

impl Goal {
    fn from_hs(h: &Hypersequent) -> Goal {
        let mut center: Option<Sequent> = None;
        let mut boxes = vec![];
        for s in &h.0 {
            match s.sort {
                Sort::Plain => {
                    center = Some(match center {
                        None => s.clone(),
                        Some(c) => c.concat(s).unwrap(),
                    })
                }
                Sort::Modal => boxes.push(norm_seq(s.clone())),
            }
        }
        boxes.sort();
        boxes.dedup();
        Goal {
            center: center.map(norm_seq),
            boxes,
        }
    }

    fn to_hs(&self) -> Hypersequent {
        let mut v = vec![];
        if let Some(c) = &self.center {
            v.push(c.clone());
        }
        v.extend(self.boxes.iter().cloned());
        Hypersequent(v)
    }

    /// Sequents in `to_hs` order.
    fn seqs(&self) -> Vec<&Sequent> {
        self.center.iter().chain(self.boxes.iter()).collect()
    }
}

#[derive(Clone, Debug)]
enum Move {
    Close { s: usize, rule: RuleId, a: Formula },
    NegL { s: usize, a: Formula },
    NegR { s: usize, a: Formula },
    AndL { s: usize, a: Formula, b: Formula },
    AndR { s: usize, a: Formula, b: Formula },
    Nec1 { a: Formula },
    /// `K` or `4l` into `⇒`-sequent `s`; `a` is the formula added there.
    Into { rule: RuleId, s: usize, a: Formula },
    T1 { s: usize, a: Formula },
    /// `B1` or `5₁` from `⇒`-sequent `s`; `a` is added to the center.
    Back { rule: RuleId, s: usize, a: Formula },
    D,
    Focus,
    B2,
    B25,
    Five2,
}

/// Replace sequent `s` of the goal's hypersequent form.
fn with_seq(h: &Hypersequent, s: usize, t: Sequent) -> Hypersequent {
    let mut out = h.clone();
    out.0[s] = t;
    out
}

fn add(s: &Sequent, side: Side, a: &Formula) -> Sequent {
    let mut t = s.clone();
    t.side_mut(side).push(a.clone());
    t
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    nodes: usize,
    exceeded: bool,
}

impl<'a> Searcher<'a> {
    fn allowed(&self, r: RuleId) -> bool {
        self.cfg.allow_rules.contains(&r)
    }

    /// The first invertible step that changes the goal, if any.
    fn invertible(&self, g: &Goal) -> Option<(Move, Vec<Hypersequent>)> {
        let h = g.to_hs();
        let seqs = g.seqs();
        let has_center = g.center.is_some();
        let off = usize::from(has_center);
        for (s, q) in seqs.iter().enumerate() {
            if q.ante.contains(&Formula::Bot) && self.allowed(RuleId::InitBot) {
                return Some((Move::Close { s, rule: RuleId::InitBot, a: Formula::Bot }, vec![]));
            }
            if let Some(a) = q.ante.iter().find(|a| q.succ.contains(a)) {
                if self.allowed(RuleId::InitAx) {
                    return Some((Move::Close { s, rule: RuleId::InitAx, a: a.clone() }, vec![]));
                }
            }
        }
        for (s, q) in seqs.iter().enumerate() {
            for a in &q.ante {
                match a {
                    Formula::Neg(x) if self.allowed(RuleId::NegL) && !q.succ.contains(x) => {
                        let t = norm_seq(add(q, Side::Right, x));
                        return Some((Move::NegL { s, a: (**x).clone() }, vec![with_seq(&h, s, t)]));
                    }
                    Formula::And(x, y)
                        if self.allowed(RuleId::AndL1)
                            && self.allowed(RuleId::AndL2)
                            && !(q.ante.contains(x) && q.ante.contains(y)) =>
                    {
                        let t = norm_seq(add(&add(q, Side::Left, x), Side::Left, y));
                        let mv = Move::AndL { s, a: (**x).clone(), b: (**y).clone() };
                        return Some((mv, vec![with_seq(&h, s, t)]));
                    }
                    _ => {}
                }
            }
            for a in &q.succ {
                if let Formula::Neg(x) = a {
                    if self.allowed(RuleId::NegR) && !q.ante.contains(x) {
                        let t = norm_seq(add(q, Side::Left, x));
                        return Some((Move::NegR { s, a: (**x).clone() }, vec![with_seq(&h, s, t)]));
                    }
                }
            }
        }
        for (s, q) in seqs.iter().enumerate() {
            for a in &q.succ {
                if let Formula::And(x, y) = a {
                    if self.allowed(RuleId::AndR) && !q.succ.contains(x) && !q.succ.contains(y) {
                        let t1 = norm_seq(add(q, Side::Right, x));
                        let t2 = norm_seq(add(q, Side::Right, y));
                        let mv = Move::AndR { s, a: (**x).clone(), b: (**y).clone() };
                        return Some((mv, vec![with_seq(&h, s, t1), with_seq(&h, s, t2)]));
                    }
                }
            }
        }
        if let Some(c) = &g.center {
            if self.allowed(RuleId::Nec1) {
                for a in &c.succ {
                    if let Formula::Box(x) = a {
                        if !g.boxes.iter().any(|b| b.succ.contains(x)) {
                            let mut out = h.clone();
                            out.push(Sequent::modal(vec![], vec![(**x).clone()]));
                            return Some((Move::Nec1 { a: (**x).clone() }, vec![out]));
                        }
                    }
                }
            }
            for a in &c.ante {
                if let Formula::Box(x) = a {
                    for (k, b) in g.boxes.iter().enumerate() {
                        let s = k + off;
                        if self.allowed(RuleId::K) && !b.ante.contains(x) {
                            let t = norm_seq(add(b, Side::Left, x));
                            let mv = Move::Into { rule: RuleId::K, s, a: (**x).clone() };
                            return Some((mv, vec![with_seq(&h, s, t)]));
                        }
                        if self.allowed(RuleId::FourL) && !b.ante.contains(a) {
                            let t = norm_seq(add(b, Side::Left, a));
                            let mv = Move::Into { rule: RuleId::FourL, s, a: a.clone() };
                            return Some((mv, vec![with_seq(&h, s, t)]));
                        }
                    }
                }
            }
        }
        if self.allowed(RuleId::T1) {
            for (s, q) in seqs.iter().enumerate() {
                for a in &q.ante {
                    if let Formula::Box(x) = a {
                        if !q.ante.contains(x) {
                            let t = norm_seq(add(q, Side::Left, x));
                            return Some((Move::T1 { s, a: (**x).clone() }, vec![with_seq(&h, s, t)]));
                        }
                    }
                }
            }
        }
        if let Some(c) = &g.center {
            for (k, b) in g.boxes.iter().enumerate() {
                let s = k + off;
                for a in &b.ante {
                    if let Formula::Box(x) = a {
                        if self.allowed(RuleId::B1) && !c.ante.contains(x) {
                            let t = norm_seq(add(c, Side::Left, x));
                            let mv = Move::Back { rule: RuleId::B1, s, a: (**x).clone() };
                            return Some((mv, vec![with_seq(&h, 0, t)]));
                        }
                        if self.allowed(RuleId::Five1) && !c.ante.contains(a) {
                            let t = norm_seq(add(c, Side::Left, a));
                            let mv = Move::Back { rule: RuleId::Five1, s, a: a.clone() };
                            return Some((mv, vec![with_seq(&h, 0, t)]));
                        }
                    }
                }
            }
            if self.allowed(RuleId::D) && g.boxes.is_empty() {
                let mut out = h.clone();
                out.push(Sequent::empty(Sort::Modal));
                return Some((Move::D, vec![out]));
            }
        }
        None
    }

    fn branching(&self, g: &Goal) -> Vec<(Move, Hypersequent)> {
        let mut out = vec![];
        for b in &g.boxes {
            if self.allowed(RuleId::Nec2) && self.allowed(RuleId::Ew) {
                out.push((Move::Focus, Hypersequent::single(b.with_sort(Sort::Plain))));
            }
        }
        for (k, b) in g.boxes.iter().enumerate() {
            let others = g.boxes.iter().enumerate().filter(|(j, _)| *j != k).map(|x| x.1.clone());
            if let Some(c) = &g.center {
                if self.allowed(RuleId::B25) {
                    let mut v: Vec<Sequent> = others.clone().collect();
                    v.push(c.with_sort(Sort::Modal));
                    v.push(b.with_sort(Sort::Plain));
                    out.push((Move::B25, Hypersequent(v)));
                } else if self.allowed(RuleId::B2) {
                    let v = vec![c.with_sort(Sort::Modal), b.with_sort(Sort::Plain)];
                    out.push((Move::B2, Hypersequent(v)));
                }
            }
            if self.allowed(RuleId::Five2) && g.boxes.len() > 1 {
                let mut v: Vec<Sequent> = others.collect();
                v.push(b.with_sort(Sort::Plain));
                out.push((Move::Five2, Hypersequent(v)));
            }
        }
        out
    }

    fn search(&mut self, g: Goal, depth: usize, trail: &mut Vec<Goal>) -> Option<Proof> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget {
            self.exceeded = true;
            return None;
        }
        let h = g.to_hs();
        if let Some((mv, prems)) = self.invertible(&g) {
            let mut proofs = vec![];
            for ph in &prems {
                let p = self.search(Goal::from_hs(ph), depth, trail)?;
                proofs.push(fit(p, ph).ok()?);
            }
            return build(&mv, &h, proofs).ok();
        }
        if self.cfg.loop_check && trail.contains(&g) {
            return None;
        }
        if depth >= self.cfg.max_depth {
            return None;
        }
        trail.push(g.clone());
        let mut found = None;
        for (mv, ph) in self.branching(&g) {
            if let Some(p) = self.search(Goal::from_hs(&ph), depth + 1, trail) {
                if let Ok(p) = fit(p, &ph).and_then(|p| build(&mv, &h, vec![p])) {
                    found = Some(p);
                    break;
                }
            }
            if self.exceeded {
                break;
            }
        }
        trail.pop();
        found
    }
}

fn seq_pos(p: &Proof, s: &Sequent) -> usize {
    (0..p.conclusion.len())
        .find(|&k| p.seq(k).same(s))
        .expect("premise sequent present")
}

fn last_pos(p: &Proof, k: usize, side: Side, a: &Formula) -> usize {
    p.seq(k).side(side).iter().rposition(|x| x == a).expect("formula present")
}

fn build(mv: &Move, goal: &Hypersequent, mut ps: Vec<Proof>) -> Result<Proof, StepError> {
    use crate::checker::derived::merge_sort;
    let gs = |s: usize| goal.0[s].clone();
    let p = if ps.is_empty() { None } else { Some(ps.remove(0)) };
    let out = match mv {
        Move::Close { s, rule, a } => {
            let sort = gs(*s).sort;
            if *rule == RuleId::InitBot {
                Proof::bot(sort)
            } else {
                Proof::ax(sort, a.clone())
            }
        }
        Move::NegL { s, a } => {
            let p = p.unwrap();
            let k = seq_pos(&p, &norm_seq(add(&gs(*s), Side::Right, a)));
            let j = last_pos(&p, k, Side::Right, a);
            p.neg_l(k, j)?
        }
        Move::NegR { s, a } => {
            let p = p.unwrap();
            let k = seq_pos(&p, &norm_seq(add(&gs(*s), Side::Left, a)));
            let j = last_pos(&p, k, Side::Left, a);
            p.neg_r(k, j)?
        }
        Move::AndL { s, a, b } => {
            let p = p.unwrap();
            let t = norm_seq(add(&add(&gs(*s), Side::Left, a), Side::Left, b));
            let k = seq_pos(&p, &t);
            let mut p = p;
            let count = |v: &[Formula], x: &Formula| v.iter().filter(|y| *y == x).count();
            for x in [a, b] {
                let need = count(&gs(*s).ante, x) + count(&[a.clone(), b.clone()], x);
                while count(&p.seq(k).ante, x) < need {
                    p = p.iw_l(k, x.clone())?;
                }
            }
            let ja = last_pos(&p, k, Side::Left, a);
            let p = p.and_l1(k, ja, b.clone())?;
            let jb = last_pos(&p, k, Side::Left, b);
            p.and_l2(k, jb, a.clone())?
        }
        Move::AndR { s, a, b } => {
            let q = ps.remove(0);
            let p = p.unwrap();
            let k1 = seq_pos(&p, &norm_seq(add(&gs(*s), Side::Right, a)));
            let k2 = seq_pos(&q, &norm_seq(add(&gs(*s), Side::Right, b)));
            let j1 = last_pos(&p, k1, Side::Right, a);
            let j2 = last_pos(&q, k2, Side::Right, b);
            Proof::and_r(p, k1, j1, q, k2, j2)?
        }
        Move::Nec1 { a } => {
            let p = p.unwrap();
            let k = seq_pos(&p, &Sequent::modal(vec![], vec![a.clone()]));
            merge_sort(p.nec1(k)?, Sort::Plain, &[])?.0
        }
        Move::Into { rule, s, a } => {
            let p = p.unwrap();
            let k = seq_pos(&p, &norm_seq(add(&gs(*s), Side::Left, a)));
            let j = last_pos(&p, k, Side::Left, a);
            let p = if *rule == RuleId::K { p.k(k, j)? } else { p.four_l(k, j)? };
            merge_sort(p, Sort::Plain, &[])?.0
        }
        Move::T1 { s, a } => {
            let p = p.unwrap();
            let k = seq_pos(&p, &norm_seq(add(&gs(*s), Side::Left, a)));
            let j = last_pos(&p, k, Side::Left, a);
            p.t1(k, j)?
        }
        Move::Back { rule, s, a } => {
            let p = p.unwrap();
            let c = norm_seq(add(&gs(0), Side::Left, a));
            let k = seq_pos(&p, &c);
            let j = last_pos(&p, k, Side::Left, a);
            let p = if *rule == RuleId::B1 { p.b1(k, j)? } else { p.five1(k, j)? };
            let last = p.last();
            let target = gs(*s);
            let t = (0..last).find(|&i| p.seq(i).same(&target)).expect("target sequent present");
            p.merge(t, last)?
        }
        Move::D => {
            let p = p.unwrap();
            let k = seq_pos(&p, &Sequent::empty(Sort::Modal));
            merge_sort(p.d(k)?, Sort::Plain, &[])?.0
        }
        Move::Focus => p.unwrap().nec2()?,
        Move::B2 | Move::Five2 | Move::B25 => {
            let p = p.unwrap();
            let k = (0..p.conclusion.len()).find(|&i| p.seq(i).sort == Sort::Plain).unwrap();
            match mv {
                Move::B2 => p.b2(k)?,
                Move::Five2 => p.five2(k)?,
                _ => {
                    let c = gs(0).with_sort(Sort::Modal);
                    let i = (0..p.conclusion.len()).find(|&i| i != k && p.seq(i).same(&c)).unwrap();
                    p.b25(k, &[i])?
                }
            }
        }
    };
    fit(out, goal)
}

/// Search for a cut-free proof of `goal` in `sys`.
pub fn prove(goal: &Hypersequent, sys: SystemId, cfg: &SearchConfig) -> SearchOutcome {
    prove_counted(goal, sys, cfg).0
}

/// Like [`prove`], also returning the number of visited goals.
pub fn prove_counted(goal: &Hypersequent, sys: SystemId, cfg: &SearchConfig) -> (SearchOutcome, usize) {
    let mut cfg = cfg.clone();
    let rules = sys.rules();
    cfg.allow_rules.retain(|r| rules.contains(r));
    let mut s = Searcher {
        cfg: &cfg,
        nodes: 0,
        exceeded: false,
    };
    let found = s.search(Goal::from_hs(goal), 0, &mut vec![]);
    let outcome = match found.and_then(|p| fit(p, goal).ok()).and_then(|p| relayout(p, goal).ok()) {
        Some(p) => {
            let report = check_proof(&p, sys);
            assert!(report.ok, "search produced an invalid proof: {:?}", report.first_failure());
            SearchOutcome::Found(p)
        }
        None if s.exceeded => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::ExhaustedBound,
    };
    (outcome, s.nodes)
}

/// Cut-free propositional search with the default depth `2·size`.
pub fn prove_tautology(phi: &Formula) -> SearchOutcome {
    let goal = Hypersequent::single(Sequent::plain(vec![], vec![phi.clone()]));
    prove(&goal, SystemId::K, &SearchConfig::propositional(2 * phi.size()))
}
