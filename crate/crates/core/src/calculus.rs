//! Rule schemas, the fifteen systems, and single-step validation.
//!
//! A step is checked by applying its rule forward to the premises at the
//! addressed positions and comparing the result with the stated conclusion
//! up to permutation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RuleId {
    InitAx,
    InitBot,
    AndL1,
    AndL2,
    AndR,
    NegL,
    NegR,
    IcL,
    IcR,
    IwL,
    IwR,
    Cut,
    Ew,
    Merge,
    Split,
    Nec1,
    Nec2,
    K,
    D,
    T1,
    T2,
    FourR,
    FourL,
    B1,
    B2,
    Five1,
    Five2,
    B25,
}

impl RuleId {
    pub const ALL: [RuleId; 28] = [
        RuleId::InitAx,
        RuleId::InitBot,
        RuleId::AndL1,
        RuleId::AndL2,
        RuleId::AndR,
        RuleId::NegL,
        RuleId::NegR,
        RuleId::IcL,
        RuleId::IcR,
        RuleId::IwL,
        RuleId::IwR,
        RuleId::Cut,
        RuleId::Ew,
        RuleId::Merge,
        RuleId::Split,
        RuleId::Nec1,
        RuleId::Nec2,
        RuleId::K,
        RuleId::D,
        RuleId::T1,
        RuleId::T2,
        RuleId::FourR,
        RuleId::FourL,
        RuleId::B1,
        RuleId::B2,
        RuleId::Five1,
        RuleId::Five2,
        RuleId::B25,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::InitAx => "ax",
            RuleId::InitBot => "bot",
            RuleId::AndL1 => "and_l1",
            RuleId::AndL2 => "and_l2",
            RuleId::AndR => "and_r",
            RuleId::NegL => "neg_l",
            RuleId::NegR => "neg_r",
            RuleId::IcL => "ic_l",
            RuleId::IcR => "ic_r",
            RuleId::IwL => "iw_l",
            RuleId::IwR => "iw_r",
            RuleId::Cut => "cut",
            RuleId::Ew => "ew",
            RuleId::Merge => "merge",
            RuleId::Split => "split",
            RuleId::Nec1 => "nec1",
            RuleId::Nec2 => "nec2",
            RuleId::K => "k",
            RuleId::D => "d",
            RuleId::T1 => "t1",
            RuleId::T2 => "t2",
            RuleId::FourR => "4r",
            RuleId::FourL => "4l",
            RuleId::B1 => "b1",
            RuleId::B2 => "b2",
            RuleId::Five1 => "51",
            RuleId::Five2 => "52",
            RuleId::B25 => "b25",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleId::InitAx | RuleId::InitBot => 0,
            RuleId::AndR | RuleId::Cut => 2,
            _ => 1,
        }
    }

    /// The side a principal formula sits on, for rules that have one.
    pub fn side(self) -> Option<Side> {
        match self {
            RuleId::AndL1 | RuleId::AndL2 | RuleId::NegL | RuleId::IcL | RuleId::IwL => {
                Some(Side::Left)
            }
            RuleId::AndR | RuleId::NegR | RuleId::IcR | RuleId::IwR => Some(Side::Right),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown name {0:?}")]
pub struct UnknownName(pub String);

impl FromStr for RuleId {
    type Err = UnknownName;
    fn from_str(s: &str) -> Result<RuleId, UnknownName> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SystemId {
    K,
    D,
    T,
    K4,
    KB,
    K5,
    B,
    K45,
    KD4,
    KD5,
    KDB,
    KB5,
    KD45,
    S4,
    S5,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Group {
    Alpha,
    Beta,
    Gamma,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Alpha => "α",
            Group::Beta => "β",
            Group::Gamma => "γ",
        })
    }
}

impl SystemId {
    pub const ALL: [SystemId; 15] = [
        SystemId::K,
        SystemId::D,
        SystemId::T,
        SystemId::K4,
        SystemId::KB,
        SystemId::K5,
        SystemId::B,
        SystemId::K45,
        SystemId::KD4,
        SystemId::KD5,
        SystemId::KDB,
        SystemId::KB5,
        SystemId::KD45,
        SystemId::S4,
        SystemId::S5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::K => "K",
            SystemId::D => "D",
            SystemId::T => "T",
            SystemId::K4 => "K4",
            SystemId::KB => "KB",
            SystemId::K5 => "K5",
            SystemId::B => "B",
            SystemId::K45 => "K45",
            SystemId::KD4 => "KD4",
            SystemId::KD5 => "KD5",
            SystemId::KDB => "KDB",
            SystemId::KB5 => "KB5",
            SystemId::KD45 => "KD45",
            SystemId::S4 => "S4",
            SystemId::S5 => "S5",
        }
    }

    /// Axiom letters beyond K.
    pub fn axioms(self) -> &'static [char] {
        match self {
            SystemId::K => &[],
            SystemId::D => &['D'],
            SystemId::T => &['T'],
            SystemId::K4 => &['4'],
            SystemId::KB => &['B'],
            SystemId::K5 => &['5'],
            SystemId::B => &['T', 'B'],
            SystemId::K45 => &['4', '5'],
            SystemId::KD4 => &['D', '4'],
            SystemId::KD5 => &['D', '5'],
            SystemId::KDB => &['D', 'B'],
            SystemId::KB5 => &['B', '5'],
            SystemId::KD45 => &['D', '4', '5'],
            SystemId::S4 => &['T', '4'],
            SystemId::S5 => &['T', '5'],
        }
    }

    pub fn has_axiom(self, c: char) -> bool {
        self.axioms().contains(&c)
    }

    pub fn group(self) -> Group {
        group_of(self)
    }

    pub fn rules(self) -> BTreeSet<RuleId> {
        system_rules(self)
    }

    pub fn has_rule(self, r: RuleId) -> bool {
        system_rules(self).contains(&r)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = UnknownName;
    fn from_str(s: &str) -> Result<SystemId, UnknownName> {
        let up = s.to_ascii_uppercase();
        let alias = match up.as_str() {
            "KD" => "D",
            "KT" => "T",
            "KTB" => "B",
            "KT4" => "S4",
            "KT5" => "S5",
            other => other,
        };
        SystemId::ALL
            .iter()
            .copied()
            .find(|sys| sys.name() == alias)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

pub const BASE_RULES: [RuleId; 18] = [
    RuleId::InitAx,
    RuleId::InitBot,
    RuleId::AndL1,
    RuleId::AndL2,
    RuleId::AndR,
    RuleId::NegL,
    RuleId::NegR,
    RuleId::IcL,
    RuleId::IcR,
    RuleId::IwL,
    RuleId::IwR,
    RuleId::Cut,
    RuleId::Ew,
    RuleId::Merge,
    RuleId::Split,
    RuleId::Nec1,
    RuleId::Nec2,
    RuleId::K,
];

pub fn system_rules(sys: SystemId) -> BTreeSet<RuleId> {
    let mut set: BTreeSet<RuleId> = BASE_RULES.iter().copied().collect();
    match sys {
        SystemId::KB5 => set.extend([RuleId::Five1, RuleId::Five2, RuleId::B1, RuleId::B25]),
        SystemId::S5 => set.extend([
            RuleId::T1,
            RuleId::T2,
            RuleId::Five1,
            RuleId::Five2,
            RuleId::FourR,
            RuleId::FourL,
        ]),
        _ => {
            for c in sys.axioms() {
                match c {
                    'D' => set.extend([RuleId::D]),
                    'T' => set.extend([RuleId::T1, RuleId::T2]),
                    '4' => set.extend([RuleId::FourR, RuleId::FourL]),
                    'B' => set.extend([RuleId::B1, RuleId::B2]),
                    '5' => set.extend([RuleId::Five1, RuleId::Five2]),
                    _ => unreachable!(),
                }
            }
        }
    }
    set
}

pub fn group_of(sys: SystemId) -> Group {
    match sys {
        SystemId::K | SystemId::D | SystemId::T | SystemId::K4 | SystemId::KD4 | SystemId::S4 => {
            Group::Alpha
        }
        SystemId::K5
        | SystemId::K45
        | SystemId::KD5
        | SystemId::KD45
        | SystemId::KB5
        | SystemId::S5 => Group::Beta,
        SystemId::KB | SystemId::KDB | SystemId::B => Group::Gamma,
    }
}

/// Addressing for one rule application. Positions refer to the premises.
///
/// * `seq`: principal sequent per premise (`and_r`, `cut`), the two merged
///   sequents (`merge`), or the `S` sequent followed by the `I` block (`b25`).
/// * `idx`: principal formula position per premise, or the two contracted
///   positions for `ic`.
/// * `formula`: the other conjunct for `and_l*`, the weakened formula for `iw`.
/// * `sequent`: the added sequent for `ew`.
/// * `split`: antecedent and succedent positions that go to the first part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Args {
    pub seq: Vec<usize>,
    pub idx: Vec<usize>,
    pub formula: Option<Formula>,
    pub sequent: Option<Sequent>,
    pub split: Option<(Vec<usize>, Vec<usize>)>,
}

impl Args {
    pub fn none() -> Args {
        Args::default()
    }

    pub fn at(seq: usize) -> Args {
        Args {
            seq: vec![seq],
            ..Args::default()
        }
    }

    pub fn at_idx(seq: usize, idx: usize) -> Args {
        Args {
            seq: vec![seq],
            idx: vec![idx],
            ..Args::default()
        }
    }

    pub fn with_formula(mut self, a: Formula) -> Args {
        self.formula = Some(a);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApp {
    pub rule: RuleId,
    pub args: Args,
}

impl RuleApp {
    pub fn new(rule: RuleId, args: Args) -> RuleApp {
        RuleApp { rule, args }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepErrorKind {
    WrongArity,
    BadAddressing,
    SchemaMismatch,
    SortViolation,
    ContextMismatch,
    /// Rule not available in the ambient system.
    RuleNotInSystem,
    /// An unproved leaf.
    OpenPremise,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{rule}: {kind:?} at {at}")]
pub struct StepError {
    pub rule: RuleId,
    pub kind: StepErrorKind,
    pub at: String,
}

fn err<T>(rule: RuleId, kind: StepErrorKind, at: impl Into<String>) -> Result<T, StepError> {
    Err(StepError {
        rule,
        kind,
        at: at.into(),
    })
}

struct Ctx<'a> {
    rule: RuleId,
    args: &'a Args,
}

impl<'a> Ctx<'a> {
    fn fail<T>(&self, kind: StepErrorKind, at: impl Into<String>) -> Result<T, StepError> {
        err(self.rule, kind, at)
    }

    fn seq_arg(&self, k: usize) -> Result<usize, StepError> {
        self.args
            .seq
            .get(k)
            .or_else(|| self.args.seq.first())
            .copied()
            .ok_or_else(|| StepError {
                rule: self.rule,
                kind: StepErrorKind::BadAddressing,
                at: "missing `seq`".into(),
            })
    }

    fn idx_arg(&self, k: usize) -> Result<usize, StepError> {
        self.args
            .idx
            .get(k)
            .or_else(|| self.args.idx.first())
            .copied()
            .ok_or_else(|| StepError {
                rule: self.rule,
                kind: StepErrorKind::BadAddressing,
                at: "missing `idx`".into(),
            })
    }

    fn formula_arg(&self) -> Result<Formula, StepError> {
        self.args.formula.clone().ok_or_else(|| StepError {
            rule: self.rule,
            kind: StepErrorKind::BadAddressing,
            at: "missing `formula`".into(),
        })
    }

    fn sequent<'h>(&self, h: &'h Hypersequent, i: usize, p: usize) -> Result<&'h Sequent, StepError> {
        h.0.get(i).ok_or_else(|| StepError {
            rule: self.rule,
            kind: StepErrorKind::BadAddressing,
            at: format!("premise {p}, sequent {i} out of range"),
        })
    }

    fn formula<'s>(
        &self,
        s: &'s Sequent,
        side: Side,
        j: usize,
        p: usize,
        i: usize,
    ) -> Result<&'s Formula, StepError> {
        s.side(side).get(j).ok_or_else(|| StepError {
            rule: self.rule,
            kind: StepErrorKind::BadAddressing,
            at: format!("premise {p}, sequent {i}, {side:?} formula {j} out of range"),
        })
    }

    fn want_sort(&self, s: &Sequent, sort: Sort, where_: String) -> Result<(), StepError> {
        if s.sort != sort {
            return self.fail(
                StepErrorKind::SortViolation,
                format!("{where_}: expected {} sequent", sort.arrow()),
            );
        }
        Ok(())
    }
}

fn remove_at(v: &[Formula], j: usize) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.remove(j);
    out
}

fn replace_seq(h: &Hypersequent, i: usize, s: Sequent) -> Hypersequent {
    let mut out = h.clone();
    out.0[i] = s;
    out
}

fn without(h: &Hypersequent, i: usize) -> Hypersequent {
    let mut out = h.clone();
    out.0.remove(i);
    out
}

/// Apply `rule` forward. Conclusion layout: the principal sequent keeps its
/// position, sequents created by the rule are appended, and `merge` keeps
/// the merged sequent at the first address.
pub fn apply(app: &RuleApp, premises: &[Hypersequent]) -> Result<Hypersequent, StepError> {
    let rule = app.rule;
    let c = Ctx {
        rule,
        args: &app.args,
    };
    if premises.len() != rule.arity() {
        return c.fail(
            StepErrorKind::WrongArity,
            format!("expected {} premises, got {}", rule.arity(), premises.len()),
        );
    }
    use RuleId::*;
    use StepErrorKind::*;
    match rule {
        InitAx | InitBot => c.fail(BadAddressing, "initial sequents have no forward form"),
        AndL1 | AndL2 | NegL | NegR | IcL | IcR | IwL | IwR | T1 => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?.clone();
            let mut t = s.clone();
            match rule {
                AndL1 | AndL2 => {
                    let j = c.idx_arg(0)?;
                    let a = c.formula(&s, Side::Left, j, 0, i)?.clone();
                    let other = c.formula_arg()?;
                    t.ante[j] = if rule == AndL1 {
                        Formula::and(a, other)
                    } else {
                        Formula::and(other, a)
                    };
                }
                NegL => {
                    let j = c.idx_arg(0)?;
                    let a = c.formula(&s, Side::Right, j, 0, i)?.clone();
                    t.succ.remove(j);
                    t.ante.push(Formula::neg(a));
                }
                NegR => {
                    let j = c.idx_arg(0)?;
                    let a = c.formula(&s, Side::Left, j, 0, i)?.clone();
                    t.ante.remove(j);
                    t.succ.push(Formula::neg(a));
                }
                IcL | IcR => {
                    let side = rule.side().unwrap();
                    let (j, k) = (c.idx_arg(0)?, c.idx_arg(1)?);
                    if j == k {
                        return c.fail(BadAddressing, "contraction needs two distinct positions");
                    }
                    let a = c.formula(&s, side, j, 0, i)?;
                    let b = c.formula(&s, side, k, 0, i)?;
                    if a != b {
                        return c.fail(
                            SchemaMismatch,
                            format!("sequent {i}: contracted formulas {a} and {b} differ"),
                        );
                    }
                    t.side_mut(side).remove(k);
                }
                IwL => t.ante.push(c.formula_arg()?),
                IwR => t.succ.push(c.formula_arg()?),
                T1 => {
                    let j = c.idx_arg(0)?;
                    let a = c.formula(&s, Side::Left, j, 0, i)?.clone();
                    t.ante[j] = Formula::boxed(a);
                }
                _ => unreachable!(),
            }
            Ok(replace_seq(h, i, t))
        }
        AndR | Cut => {
            let (h1, h2) = (&premises[0], &premises[1]);
            let (i1, i2) = (c.seq_arg(0)?, c.seq_arg(1)?);
            let (j1, j2) = (c.idx_arg(0)?, c.idx_arg(1)?);
            let s1 = c.sequent(h1, i1, 0)?;
            let s2 = c.sequent(h2, i2, 1)?;
            if s1.sort != s2.sort {
                return c.fail(SortViolation, "principal sequents differ in sort");
            }
            if !without(h1, i1).equiv(&without(h2, i2)) {
                return c.fail(ContextMismatch, "side hypersequents differ");
            }
            if rule == AndR {
                let a = c.formula(s1, Side::Right, j1, 0, i1)?.clone();
                let b = c.formula(s2, Side::Right, j2, 1, i2)?.clone();
                let r1 = Sequent::new(s1.sort, s1.ante.clone(), remove_at(&s1.succ, j1));
                let r2 = Sequent::new(s2.sort, s2.ante.clone(), remove_at(&s2.succ, j2));
                if !r1.same(&r2) {
                    return c.fail(ContextMismatch, "principal sequent contexts differ");
                }
                let mut t = r1;
                t.succ.push(Formula::and(a, b));
                Ok(replace_seq(h1, i1, t))
            } else {
                let a = c.formula(s1, Side::Right, j1, 0, i1)?;
                let b = c.formula(s2, Side::Left, j2, 1, i2)?;
                if a != b {
                    return c.fail(SchemaMismatch, format!("cut formulas {a} and {b} differ"));
                }
                let mut ante = s1.ante.clone();
                ante.extend(remove_at(&s2.ante, j2));
                let mut succ = remove_at(&s1.succ, j1);
                succ.extend(s2.succ.iter().cloned());
                Ok(replace_seq(h1, i1, Sequent::new(s1.sort, ante, succ)))
            }
        }
        Ew => {
            let s = app.args.sequent.clone().ok_or_else(|| StepError {
                rule,
                kind: BadAddressing,
                at: "missing `sequent`".into(),
            })?;
            let mut out = premises[0].clone();
            out.push(s);
            Ok(out)
        }
        Merge => {
            let h = &premises[0];
            let (i, k) = match app.args.seq.as_slice() {
                [i, k] => (*i, *k),
                _ => return c.fail(BadAddressing, "merge needs two sequent positions"),
            };
            if i == k {
                return c.fail(BadAddressing, "merge needs two distinct sequents");
            }
            let a = c.sequent(h, i, 0)?;
            let b = c.sequent(h, k, 0)?;
            if a.sort != b.sort {
                return c.fail(SortViolation, format!("sequents {i} and {k} differ in sort"));
            }
            let m = a.concat(b).unwrap();
            let mut out = replace_seq(h, i, m);
            out.0.remove(k);
            Ok(out)
        }
        Split => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            c.want_sort(s, Sort::Plain, format!("sequent {i}"))?;
            let (la, ls) = app.args.split.clone().ok_or_else(|| StepError {
                rule,
                kind: BadAddressing,
                at: "missing `split` partition".into(),
            })?;
            let pick = |v: &Vec<Formula>, sel: &Vec<usize>| -> Result<(Vec<Formula>, Vec<Formula>), StepError> {
                let mut seen = BTreeSet::new();
                for &j in sel {
                    if j >= v.len() || !seen.insert(j) {
                        return err(rule, BadAddressing, format!("sequent {i}: bad partition index {j}"));
                    }
                }
                let first = v.iter().enumerate().filter(|(j, _)| seen.contains(j)).map(|x| x.1.clone()).collect();
                let second = v.iter().enumerate().filter(|(j, _)| !seen.contains(j)).map(|x| x.1.clone()).collect();
                Ok((first, second))
            };
            let (a1, a2) = pick(&s.ante, &la)?;
            let (s1, s2) = pick(&s.succ, &ls)?;
            let mut out = replace_seq(h, i, Sequent::plain(a1, s1));
            out.push(Sequent::plain(a2, s2));
            Ok(out)
        }
        Nec1 | FourR => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            c.want_sort(s, Sort::Modal, format!("sequent {i}"))?;
            if !s.ante.is_empty() || s.succ.len() != 1 {
                return c.fail(SchemaMismatch, format!("sequent {i} must have the form => A"));
            }
            let a = Formula::boxed(s.succ[0].clone());
            let sort = if rule == Nec1 { Sort::Plain } else { Sort::Modal };
            Ok(replace_seq(h, i, Sequent::new(sort, vec![], vec![a])))
        }
        Nec2 => {
            let h = &premises[0];
            if h.len() != 1 {
                return c.fail(ContextMismatch, "nec2 admits no side hypersequent");
            }
            c.want_sort(&h.0[0], Sort::Plain, "sequent 0".into())?;
            Ok(Hypersequent::single(h.0[0].with_sort(Sort::Modal)))
        }
        K | FourL | B1 | Five1 => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let j = c.idx_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            let from = if matches!(rule, K | FourL) { Sort::Modal } else { Sort::Plain };
            c.want_sort(s, from, format!("sequent {i}"))?;
            let a = c.formula(s, Side::Left, j, 0, i)?.clone();
            let boxed = if matches!(rule, FourL | Five1) {
                if !a.is_boxed() {
                    return c.fail(SchemaMismatch, format!("sequent {i}: {a} is not boxed"));
                }
                a
            } else {
                Formula::boxed(a)
            };
            let rest = Sequent::new(from, remove_at(&s.ante, j), s.succ.clone());
            let other = if from == Sort::Modal { Sort::Plain } else { Sort::Modal };
            let mut out = replace_seq(h, i, rest);
            out.push(Sequent::new(other, vec![boxed], vec![]));
            Ok(out)
        }
        D => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            c.want_sort(s, Sort::Modal, format!("sequent {i}"))?;
            if !s.is_empty() {
                return c.fail(SchemaMismatch, format!("sequent {i} must be empty"));
            }
            Ok(replace_seq(h, i, Sequent::empty(Sort::Plain)))
        }
        T2 => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            c.want_sort(s, Sort::Modal, format!("sequent {i}"))?;
            Ok(replace_seq(h, i, s.with_sort(Sort::Plain)))
        }
        B2 | Five2 | B25 => {
            let h = &premises[0];
            let i = c.seq_arg(0)?;
            let s = c.sequent(h, i, 0)?;
            c.want_sort(s, Sort::Plain, format!("sequent {i}"))?;
            let flip: BTreeSet<usize> = match rule {
                B2 => (0..h.len()).filter(|&k| k != i).collect(),
                Five2 => BTreeSet::new(),
                _ => {
                    let mut set = BTreeSet::new();
                    for &k in &app.args.seq[1..] {
                        if k >= h.len() || k == i || !set.insert(k) {
                            return c.fail(BadAddressing, format!("bad I position {k}"));
                        }
                    }
                    set
                }
            };
            let mut out = h.clone();
            for (k, t) in h.0.iter().enumerate() {
                if k == i {
                    continue;
                }
                if t.sort != Sort::Modal {
                    return c.fail(
                        SortViolation,
                        format!("context sequent {k} must be a => sequent"),
                    );
                }
                if flip.contains(&k) {
                    out.0[k] = t.with_sort(Sort::Plain);
                }
            }
            out.0[i] = s.with_sort(Sort::Modal);
            Ok(out)
        }
    }
}

fn check_initial(rule: RuleId, conclusion: &Hypersequent) -> Result<(), StepError> {
    if conclusion.len() != 1 {
        return err(rule, StepErrorKind::ContextMismatch, "initial sequents have no side hypersequent");
    }
    let s = &conclusion.0[0];
    let ok = match rule {
        RuleId::InitAx => s.ante.len() == 1 && s.succ.len() == 1 && s.ante[0] == s.succ[0],
        _ => s.ante == vec![Formula::Bot] && s.succ.is_empty(),
    };
    if ok {
        Ok(())
    } else {
        err(rule, StepErrorKind::SchemaMismatch, format!("sequent 0: {s} is not an initial sequent"))
    }
}

pub fn check_step(
    app: &RuleApp,
    premises: &[Hypersequent],
    conclusion: &Hypersequent,
) -> Result<(), StepError> {
    if premises.len() != app.rule.arity() {
        return err(
            app.rule,
            StepErrorKind::WrongArity,
            format!("expected {} premises, got {}", app.rule.arity(), premises.len()),
        );
    }
    if app.rule.arity() == 0 {
        return check_initial(app.rule, conclusion);
    }
    let expected = apply(app, premises)?;
    if expected.equiv(conclusion) {
        Ok(())
    } else {
        err(
            app.rule,
            StepErrorKind::SchemaMismatch,
            format!("conclusion: expected {expected}, found {conclusion}"),
        )
    }
}
