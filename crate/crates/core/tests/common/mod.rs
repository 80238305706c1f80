#![allow(dead_code)]

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use hyperseq::calculus::{RuleId, SystemId};
use hyperseq::checker::derived::mcut;
use hyperseq::checker::Proof;
use hyperseq::syntax::{Formula, Sequent, Side, Sort};

pub fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::Bot),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    })
}

pub type Op = (u8, u8, u8, u8);

pub fn ops(max: usize) -> impl Strategy<Value = Vec<Op>> {
    prop::collection::vec(any::<Op>(), 1..max)
}

fn pick<T>(v: &[T], k: u8) -> Option<usize> {
    (!v.is_empty()).then(|| k as usize % v.len())
}

/// One attempted rule application driven by `op`; `None` if it does not apply.
pub fn step(p: &Proof, sys: SystemId, op: Op, extra: &Formula) -> Option<Proof> {
    let (code, a, b, c) = op;
    let h = &p.conclusion;
    let i = pick(&h.0, a)?;
    let s = &h.0[i];
    let jl = pick(&s.ante, b);
    let jr = pick(&s.succ, b);
    let q = p.clone();
    let rule_of = |code: u8| match code % 28 {
        0 | 1 => RuleId::NegL,
        2 | 3 => RuleId::NegR,
        4 => RuleId::AndL1,
        5 => RuleId::AndL2,
        6 => RuleId::AndR,
        7 => RuleId::IwL,
        8 => RuleId::IwR,
        9 => RuleId::IcL,
        10 => RuleId::Ew,
        11 => RuleId::Merge,
        12 => RuleId::Split,
        13 | 14 => RuleId::K,
        15 => RuleId::Nec1,
        16 => RuleId::T1,
        17 => RuleId::T2,
        18 => RuleId::FourL,
        19 => RuleId::FourR,
        20 => RuleId::Five1,
        21 => RuleId::Five2,
        22 => RuleId::D,
        23 => RuleId::Nec2,
        24 => RuleId::B1,
        25 => RuleId::B25,
        _ => RuleId::Cut,
    };
    let rule = rule_of(code);
    if !sys.has_rule(rule) {
        return None;
    }
    match rule {
        RuleId::NegL => q.neg_l(i, jr?).ok(),
        RuleId::NegR => q.neg_r(i, jl?).ok(),
        RuleId::AndL1 => q.and_l1(i, jl?, extra.clone()).ok(),
        RuleId::AndL2 => q.and_l2(i, jl?, extra.clone()).ok(),
        RuleId::AndR => Proof::and_r(q.clone(), i, jr?, q, i, pick(&s.succ, c)?).ok(),
        RuleId::IwL => q.iw_l(i, extra.clone()).ok(),
        RuleId::IwR => q.iw_r(i, extra.clone()).ok(),
        RuleId::IcL => {
            let j = jl?;
            let k = s.ante.iter().enumerate().position(|(k, x)| k != j && *x == s.ante[j])?;
            q.ic(Side::Left, i, j, k).ok()
        }
        RuleId::Ew => q
            .ew(Sequent::new(
                if c % 2 == 0 { Sort::Modal } else { Sort::Plain },
                vec![],
                vec![],
            ))
            .ok(),
        RuleId::Merge => {
            let k = pick(&h.0, c)?;
            q.merge(i, k).ok()
        }
        RuleId::Split => {
            let ante = (0..s.ante.len()).filter(|x| c >> (x % 8) & 1 == 1).collect();
            q.split(i, ante, vec![]).ok()
        }
        RuleId::K => q.k(i, jl?).ok(),
        RuleId::Nec1 => q.nec1(i).ok(),
        RuleId::T1 => q.t1(i, jl?).ok(),
        RuleId::T2 => q.t2(i).ok(),
        RuleId::FourL => q.four_l(i, jl?).ok(),
        RuleId::FourR => q.four_r(i).ok(),
        RuleId::Five1 => q.five1(i, jl?).ok(),
        RuleId::Five2 => q.five2(i).ok(),
        RuleId::D => q.d(i).ok(),
        RuleId::Nec2 => q.nec2().ok(),
        RuleId::B1 => q.b1(i, jl?).ok(),
        RuleId::B25 => {
            let block: Vec<usize> = (0..h.len()).filter(|&k| k != i && c >> (k % 8) & 1 == 1).collect();
            q.b25(i, &block).ok()
        }
        RuleId::Cut => {
            let j = jr?;
            let a = s.succ[j].clone();
            mcut(q, i, j, Proof::ax(s.sort, a).iw_l(0, extra.clone()).ok()?, 0, 0).ok()
        }
        _ => None,
    }
}

/// A proof of `sys` grown from an initial sequent by the applicable `ops`.
pub fn grow(sys: SystemId, sort: Sort, base: &Formula, ops: &[Op], extra: &Formula) -> Proof {
    let mut p = Proof::ax(sort, base.clone());
    for &op in ops {
        if let Some(q) = step(&p, sys, op, extra) {
            if q.conclusion.0.iter().map(|s| s.ante.len() + s.succ.len()).sum::<usize>() <= 8 && q.conclusion.len() <= 4 {
                p = q;
            }
        }
    }
    p
}

/// Deterministic samples of a strategy.
pub fn samples<S: Strategy>(s: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).expect("sample").current()).collect()
}

pub fn random_proofs(sys: SystemId, n: usize, want: impl Fn(&Proof) -> bool) -> Vec<Proof> {
    let strat = (formula(), formula(), ops(40), any::<bool>());
    let mut runner = TestRunner::deterministic();
    let mut out = vec![];
    for _ in 0..(200 * n) {
        if out.len() == n {
            break;
        }
        let (base, extra, ops, modal) = strat.new_tree(&mut runner).expect("sample").current();
        let sort = if modal { Sort::Modal } else { Sort::Plain };
        let p = grow(sys, sort, &base, &ops, &extra);
        if want(&p) {
            out.push(p);
        }
    }
    out
}

/// Open every initial leaf of `p`.
pub fn open_initials(p: &Proof) -> Proof {
    match p.rule() {
        Some(RuleId::InitAx) | Some(RuleId::InitBot) => Proof::open(p.conclusion.clone()),
        _ => Proof {
            conclusion: p.conclusion.clone(),
            app: p.app.clone(),
            premises: p.premises.iter().map(open_initials).collect(),
        },
    }
}

/// Append `s` to every hypersequent of `p`.
pub fn append_everywhere(p: &Proof, s: &Sequent) -> Proof {
    let mut conclusion = p.conclusion.clone();
    conclusion.push(s.clone());
    Proof {
        conclusion,
        app: p.app.clone(),
        premises: p.premises.iter().map(|q| append_everywhere(q, s)).collect(),
    }
}
