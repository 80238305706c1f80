//! Proof trees, whole-proof checking, derived rules, axiom templates and
//! the bridge from Hilbert-style proofs.

use std::collections::BTreeMap;

use crate::calculus::{apply, check_step, Args, RuleApp, RuleId, StepError, StepErrorKind, SystemId};
use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};

pub mod derived;
pub mod fit;
pub mod format;
pub mod hilbert;
pub mod templates;

pub use derived::{expand_derived, Derived, ShapeError};
pub use fit::{contract, fit};
pub use format::{proof_from_json, proof_from_str, proof_to_json, proof_to_string, read_proof, write_proof, FormatError};
pub use hilbert::{hilbert_to_hyperseq, HilbertError, HilbertProof, HilbertStep};
pub use templates::{axiom_template, AxiomName};

/// A proof node. `app == None` marks an open leaf, used for fragments.
#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub conclusion: Hypersequent,
    pub app: Option<RuleApp>,
    pub premises: Vec<Proof>,
}

pub type Path = Vec<usize>;

impl Proof {
    pub fn open(h: Hypersequent) -> Proof {
        Proof {
            conclusion: h,
            app: None,
            premises: vec![],
        }
    }

    pub fn ax(sort: Sort, a: Formula) -> Proof {
        Proof {
            conclusion: Hypersequent::single(Sequent::new(sort, vec![a.clone()], vec![a])),
            app: Some(RuleApp::new(RuleId::InitAx, Args::none())),
            premises: vec![],
        }
    }

    pub fn bot(sort: Sort) -> Proof {
        Proof {
            conclusion: Hypersequent::single(Sequent::new(sort, vec![Formula::Bot], vec![])),
            app: Some(RuleApp::new(RuleId::InitBot, Args::none())),
            premises: vec![],
        }
    }

    /// Apply a rule forward; the conclusion is computed by the kernel.
    pub fn infer(rule: RuleId, args: Args, premises: Vec<Proof>) -> Result<Proof, StepError> {
        let app = RuleApp::new(rule, args);
        let hs: Vec<Hypersequent> = premises.iter().map(|p| p.conclusion.clone()).collect();
        let conclusion = apply(&app, &hs)?;
        Ok(Proof {
            conclusion,
            app: Some(app),
            premises,
        })
    }

    pub fn rule(&self) -> Option<RuleId> {
        self.app.as_ref().map(|a| a.rule)
    }

    pub fn args(&self) -> &Args {
        static EMPTY: std::sync::OnceLock<Args> = std::sync::OnceLock::new();
        match &self.app {
            Some(a) => &a.args,
            None => EMPTY.get_or_init(Args::none),
        }
    }

    pub fn is_open(&self) -> bool {
        self.app.is_none()
    }

    pub fn h(&self) -> &Hypersequent {
        &self.conclusion
    }

    pub fn seq(&self, i: usize) -> &Sequent {
        &self.conclusion.0[i]
    }

    pub fn last(&self) -> usize {
        self.conclusion.len() - 1
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_, _| n += 1);
        n
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn count_rule(&self, r: RuleId) -> usize {
        let mut n = 0;
        self.visit(&mut |_, p| {
            if p.rule() == Some(r) {
                n += 1
            }
        });
        n
    }

    pub fn is_cut_free(&self) -> bool {
        self.count_rule(RuleId::Cut) == 0
    }

    pub fn rules_used(&self) -> BTreeMap<RuleId, usize> {
        let mut m = BTreeMap::new();
        self.visit(&mut |_, p| {
            if let Some(r) = p.rule() {
                *m.entry(r).or_insert(0) += 1;
            }
        });
        m
    }

    /// Pre-order traversal with paths (premise indices from the root).
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&Path, &'a Proof)) {
        let mut stack: Vec<(Path, &'a Proof)> = vec![(vec![], self)];
        while let Some((path, p)) = stack.pop() {
            f(&path, p);
            for (k, q) in p.premises.iter().enumerate().rev() {
                let mut child = path.clone();
                child.push(k);
                stack.push((child, q));
            }
        }
    }

    pub fn paths_where(&self, pred: impl Fn(&Proof) -> bool) -> Vec<Path> {
        let mut out = vec![];
        self.visit(&mut |path, p| {
            if pred(p) {
                out.push(path.clone())
            }
        });
        out
    }

    pub fn at(&self, path: &[usize]) -> &Proof {
        path.iter().fold(self, |p, &k| &p.premises[k])
    }

    pub fn at_mut(&mut self, path: &[usize]) -> &mut Proof {
        path.iter().fold(self, |p, &k| &mut p.premises[k])
    }

    pub fn open_leaves(&self) -> Vec<Path> {
        self.paths_where(|p| p.is_open())
    }

    /// Replace open leaves, in pre-order, by the given proofs.
    pub fn plug(mut self, fillers: Vec<Proof>) -> Result<Proof, StepError> {
        let paths = self.open_leaves();
        if paths.len() != fillers.len() {
            return Err(StepError {
                rule: RuleId::Ew,
                kind: StepErrorKind::WrongArity,
                at: format!("{} open leaves, {} fillers", paths.len(), fillers.len()),
            });
        }
        for (path, mut filler) in paths.iter().zip(fillers) {
            let slot = self.at_mut(path);
            if !slot.conclusion.equiv(&filler.conclusion) {
                return Err(StepError {
                    rule: RuleId::Ew,
                    kind: StepErrorKind::SchemaMismatch,
                    at: format!("filler proves {}, leaf needs {}", filler.conclusion, slot.conclusion),
                });
            }
            filler.conclusion = slot.conclusion.clone();
            *slot = filler;
        }
        Ok(self)
    }

    // --- forward builders -------------------------------------------------

    pub fn neg_l(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::NegL, Args::at_idx(i, j), vec![self])
    }

    pub fn neg_r(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::NegR, Args::at_idx(i, j), vec![self])
    }

    pub fn and_l1(self, i: usize, j: usize, other: Formula) -> Result<Proof, StepError> {
        Proof::infer(RuleId::AndL1, Args::at_idx(i, j).with_formula(other), vec![self])
    }

    pub fn and_l2(self, i: usize, j: usize, other: Formula) -> Result<Proof, StepError> {
        Proof::infer(RuleId::AndL2, Args::at_idx(i, j).with_formula(other), vec![self])
    }

    pub fn and_r(p: Proof, i1: usize, j1: usize, q: Proof, i2: usize, j2: usize) -> Result<Proof, StepError> {
        let args = Args {
            seq: vec![i1, i2],
            idx: vec![j1, j2],
            ..Args::default()
        };
        Proof::infer(RuleId::AndR, args, vec![p, q])
    }

    pub fn ic(self, side: Side, i: usize, j: usize, k: usize) -> Result<Proof, StepError> {
        let rule = if side == Side::Left { RuleId::IcL } else { RuleId::IcR };
        let args = Args {
            seq: vec![i],
            idx: vec![j, k],
            ..Args::default()
        };
        Proof::infer(rule, args, vec![self])
    }

    pub fn iw(self, side: Side, i: usize, a: Formula) -> Result<Proof, StepError> {
        let rule = if side == Side::Left { RuleId::IwL } else { RuleId::IwR };
        Proof::infer(rule, Args::at(i).with_formula(a), vec![self])
    }

    pub fn iw_l(self, i: usize, a: Formula) -> Result<Proof, StepError> {
        self.iw(Side::Left, i, a)
    }

    pub fn iw_r(self, i: usize, a: Formula) -> Result<Proof, StepError> {
        self.iw(Side::Right, i, a)
    }

    pub fn cut(p: Proof, i1: usize, j1: usize, q: Proof, i2: usize, j2: usize) -> Result<Proof, StepError> {
        let args = Args {
            seq: vec![i1, i2],
            idx: vec![j1, j2],
            ..Args::default()
        };
        Proof::infer(RuleId::Cut, args, vec![p, q])
    }

    pub fn ew(self, s: Sequent) -> Result<Proof, StepError> {
        let args = Args {
            sequent: Some(s),
            ..Args::default()
        };
        Proof::infer(RuleId::Ew, args, vec![self])
    }

    pub fn merge(self, i: usize, k: usize) -> Result<Proof, StepError> {
        let args = Args {
            seq: vec![i, k],
            ..Args::default()
        };
        Proof::infer(RuleId::Merge, args, vec![self])
    }

    pub fn split(self, i: usize, ante: Vec<usize>, succ: Vec<usize>) -> Result<Proof, StepError> {
        let args = Args {
            seq: vec![i],
            split: Some((ante, succ)),
            ..Args::default()
        };
        Proof::infer(RuleId::Split, args, vec![self])
    }

    pub fn nec1(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::Nec1, Args::at(i), vec![self])
    }

    pub fn nec2(self) -> Result<Proof, StepError> {
        Proof::infer(RuleId::Nec2, Args::at(0), vec![self])
    }

    pub fn k(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::K, Args::at_idx(i, j), vec![self])
    }

    pub fn d(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::D, Args::at(i), vec![self])
    }

    pub fn t1(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::T1, Args::at_idx(i, j), vec![self])
    }

    pub fn t2(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::T2, Args::at(i), vec![self])
    }

    pub fn four_r(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::FourR, Args::at(i), vec![self])
    }

    pub fn four_l(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::FourL, Args::at_idx(i, j), vec![self])
    }

    pub fn b1(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::B1, Args::at_idx(i, j), vec![self])
    }

    pub fn b2(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::B2, Args::at(i), vec![self])
    }

    pub fn five1(self, i: usize, j: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::Five1, Args::at_idx(i, j), vec![self])
    }

    pub fn five2(self, i: usize) -> Result<Proof, StepError> {
        Proof::infer(RuleId::Five2, Args::at(i), vec![self])
    }

    pub fn b25(self, i: usize, block: &[usize]) -> Result<Proof, StepError> {
        let mut seq = vec![i];
        seq.extend_from_slice(block);
        let args = Args {
            seq,
            ..Args::default()
        };
        Proof::infer(RuleId::B25, args, vec![self])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub ok: bool,
    pub system: SystemId,
    pub node_count: usize,
    pub rules_used: BTreeMap<RuleId, usize>,
    pub failures: Vec<(Path, StepError)>,
}

impl CheckReport {
    pub fn first_failure(&self) -> Option<String> {
        self.failures
            .first()
            .map(|(path, e)| format!("at {path:?}: {e}"))
    }
}

fn check_node(p: &Proof, sys: SystemId) -> Result<(), StepError> {
    let app = match &p.app {
        Some(a) => a,
        None => {
            return Err(StepError {
                rule: RuleId::Ew,
                kind: StepErrorKind::OpenPremise,
                at: format!("open leaf {}", p.conclusion),
            })
        }
    };
    if !sys.has_rule(app.rule) {
        return Err(StepError {
            rule: app.rule,
            kind: StepErrorKind::RuleNotInSystem,
            at: format!("{} is not a rule of {}", app.rule, sys),
        });
    }
    let hs: Vec<Hypersequent> = p.premises.iter().map(|q| q.conclusion.clone()).collect();
    check_step(app, &hs, &p.conclusion)
}

pub fn check_proof(p: &Proof, sys: SystemId) -> CheckReport {
    let mut failures = vec![];
    let mut node_count = 0;
    p.visit(&mut |path, q| {
        node_count += 1;
        if let Err(e) = check_node(q, sys) {
            failures.push((path.clone(), e));
        }
    });
    CheckReport {
        ok: failures.is_empty(),
        system: sys,
        node_count,
        rules_used: p.rules_used(),
        failures,
    }
}

/// Like [`check_proof`] but open leaves are accepted as assumptions.
pub fn check_fragment(p: &Proof, sys: SystemId) -> CheckReport {
    let mut r = check_proof(p, sys);
    r.failures.retain(|(_, e)| e.kind != StepErrorKind::OpenPremise);
    r.ok = r.failures.is_empty();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{f, hs};

    #[test]
    fn single_axiom_checks_everywhere() {
        let p = Proof::ax(Sort::Plain, f("p"));
        for sys in SystemId::ALL {
            assert!(check_proof(&p, sys).ok);
        }
    }

    #[test]
    fn rule_membership_is_enforced() {
        let p = Proof::ax(Sort::Plain, f("p")).t1(0, 0).unwrap();
        assert_eq!(p.conclusion, hs("box p -> p"));
        assert!(check_proof(&p, SystemId::T).ok);
        let r = check_proof(&p, SystemId::K);
        assert!(!r.ok);
        assert_eq!(r.failures[0].1.kind, StepErrorKind::RuleNotInSystem);
    }

    #[test]
    fn tampered_conclusion_is_reported_with_path() {
        let mut p = Proof::ax(Sort::Plain, f("p")).nec2().unwrap().k(0, 0).unwrap();
        p.premises[0].conclusion = hs("q => q");
        let r = check_proof(&p, SystemId::K);
        assert!(!r.ok);
        let paths: Vec<Path> = r.failures.iter().map(|x| x.0.clone()).collect();
        assert!(paths.contains(&vec![]) && paths.contains(&vec![0]));
    }

    #[test]
    fn plug_fills_open_leaves() {
        let frag = Proof::open(hs("p -> p")).nec2().unwrap();
        assert!(check_fragment(&frag, SystemId::K).ok);
        assert!(!check_proof(&frag, SystemId::K).ok);
        let full = frag.plug(vec![Proof::ax(Sort::Plain, f("p"))]).unwrap();
        assert!(check_proof(&full, SystemId::K).ok);
    }
}
