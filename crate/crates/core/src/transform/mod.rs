//! Proof transformations: atomization, T2-elimination, regularization,
//! extraction of standard sequent proofs, 5₂-restriction, cut-formula
//! reduction and cut-elimination.
//!
//! Every transformation runs under an [`Engine`] that counts rewrites
//! against a fuel budget and, when asked, re-checks the whole proof and its
//! end hypersequent after each individual rewrite.

use std::fmt;

use thiserror::Error;

use crate::calculus::{Group, StepError, SystemId};
use crate::checker::{check_proof, Path, Proof};
use crate::syntax::Hypersequent;

pub mod atomize;
pub mod cut;
pub mod five;
pub mod occ;
pub mod regular;
pub mod standard;
pub mod subst;
pub mod t2;

pub use atomize::atomize_initials;
pub use cut::{cut_degrees, eliminate_cut, reduce_cut_formula};
pub use five::{restrict_52, unrestricted_52};
pub use regular::{is_regular, regularize, RegularityReport};
pub use standard::{check_standard, embed, to_standard, StdProof, StdRule};
pub use t2::eliminate_t2;

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformTrace {
    /// (rewrite name, node count before, node count after)
    pub steps: Vec<(String, usize, usize)>,
    pub fuel_used: u64,
}

impl fmt::Display for TransformTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fuel used: {}", self.fuel_used)?;
        for (name, before, after) in &self.steps {
            writeln!(f, "{name}\t{before}\t{after}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error)]
pub enum TransformError {
    #[error("{op} unavailable for group {group}")]
    WrongGroup { op: &'static str, group: Group },
    #[error("{op} requires {needs}; {sys} does not qualify")]
    WrongSystem {
        op: &'static str,
        sys: SystemId,
        needs: &'static str,
    },
    #[error("proof is not regular: offending nodes {0:?}")]
    NotRegular(Vec<Path>),
    #[error("end hypersequent {0} is not all-plain")]
    EndNotPlain(Hypersequent),
    #[error("fuel exhausted after {} rewrites", .0.fuel_used)]
    FuelExhausted(TransformTrace),
    #[error("no rewrite applies: {0}")]
    Stuck(String),
    #[error("rule application failed: {0}")]
    Step(#[from] StepError),
    #[error("rewrite produced an invalid proof: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, TransformError>;

pub(crate) fn stuck<T>(msg: impl Into<String>) -> Result<T> {
    Err(TransformError::Stuck(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub fuel: u64,
    pub assert_each_step: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            fuel: DEFAULT_FUEL,
            assert_each_step: cfg!(debug_assertions),
        }
    }
}

/// Fuel accounting and per-rewrite validation for one transformation run.
pub struct Engine {
    pub sys: SystemId,
    pub opts: Options,
    pub trace: TransformTrace,
    end: Option<Hypersequent>,
}

impl Engine {
    pub fn new(sys: SystemId, opts: Options) -> Engine {
        Engine {
            sys,
            opts,
            trace: TransformTrace::default(),
            end: None,
        }
    }

    /// Record the end hypersequent every later state must keep.
    pub fn start(&mut self, p: &Proof) {
        self.end = Some(p.conclusion.clone());
    }

    pub fn tick(&mut self) -> Result<()> {
        if self.trace.fuel_used >= self.opts.fuel {
            return Err(TransformError::FuelExhausted(self.trace.clone()));
        }
        self.trace.fuel_used += 1;
        Ok(())
    }

    /// Run a sub-transformation with its own end hypersequent, charging its
    /// fuel and steps to this run.
    pub fn nested<T>(&mut self, f: impl FnOnce(&mut Engine) -> Result<T>) -> Result<T> {
        let opts = Options {
            fuel: self.opts.fuel.saturating_sub(self.trace.fuel_used),
            ..self.opts
        };
        let mut sub = Engine::new(self.sys, opts);
        let r = f(&mut sub);
        self.trace.fuel_used += sub.trace.fuel_used;
        self.trace.steps.extend(sub.trace.steps);
        r
    }

    /// Account for one completed rewrite of the whole proof.
    pub fn step(&mut self, name: &str, before: usize, after: &Proof) -> Result<()> {
        self.tick()?;
        self.trace.steps.push((name.to_string(), before, after.node_count()));
        if self.opts.assert_each_step {
            validate(after, self.sys, self.end.as_ref())?;
        }
        Ok(())
    }
}

/// Check `p` in `sys` and, when given, compare its end hypersequent.
pub fn validate(p: &Proof, sys: SystemId, end: Option<&Hypersequent>) -> Result<()> {
    let r = check_proof(p, sys);
    if !r.ok {
        return Err(TransformError::Invalid(r.first_failure().unwrap_or_default()));
    }
    if let Some(e) = end {
        if p.conclusion != *e {
            return Err(TransformError::Invalid(format!(
                "end hypersequent changed from {e} to {}",
                p.conclusion
            )));
        }
    }
    Ok(())
}

/// Give `p` the stored layout `target`, which must be a permutation of its
/// conclusion.
pub fn relayout(mut p: Proof, target: &Hypersequent) -> Result<Proof> {
    if !p.conclusion.equiv(target) {
        return Err(TransformError::Invalid(format!(
            "layout mismatch: {} is not a permutation of {target}",
            p.conclusion
        )));
    }
    p.conclusion = target.clone();
    Ok(p)
}

/// Apply the rule of `node` to new premises.
pub fn reinfer(node: &Proof, premises: Vec<Proof>) -> Result<Proof> {
    let app = node.app.as_ref().expect("open leaf has no rule");
    Ok(Proof::infer(app.rule, app.args.clone(), premises)?)
}

/// Replace the subproof at `path`, keeping its stored conclusion.
pub fn replace_at(root: &mut Proof, path: &[usize], new: Proof) -> Result<()> {
    let slot = root.at_mut(path);
    *slot = relayout(new, &slot.conclusion)?;
    Ok(())
}

/// Paths of nodes satisfying `pred` with no such node strictly above them.
pub fn uppermost(p: &Proof, pred: &dyn Fn(&Proof) -> bool) -> Vec<Path> {
    let all = p.paths_where(pred);
    all.iter()
        .filter(|a| !all.iter().any(|b| b.len() > a.len() && b.starts_with(a)))
        .cloned()
        .collect()
}

/// Run `f` on a thread with room for the deeply recursive replays.
pub(crate) fn with_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("spawn worker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

const STACK_BYTES: usize = 512 << 20;

pub(crate) fn require_group(op: &'static str, sys: SystemId, allowed: &[Group]) -> Result<()> {
    let group = sys.group();
    if allowed.contains(&group) {
        Ok(())
    } else {
        Err(TransformError::WrongGroup { op, group })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{f, hs, Sort};

    #[test]
    fn fuel_runs_out() {
        let mut e = Engine::new(SystemId::K, Options { fuel: 2, assert_each_step: false });
        e.tick().unwrap();
        e.tick().unwrap();
        assert!(matches!(e.tick(), Err(TransformError::FuelExhausted(t)) if t.fuel_used == 2));
    }

    #[test]
    fn wrong_group_message() {
        let e = require_group("cut-elimination", SystemId::KB, &[Group::Alpha, Group::Beta]).unwrap_err();
        assert_eq!(e.to_string(), "cut-elimination unavailable for group γ");
    }

    #[test]
    fn relayout_checks_permutation() {
        let p = Proof::ax(Sort::Modal, f("p")).k(0, 0).unwrap();
        assert!(relayout(p.clone(), &hs("box p -> || => p")).is_ok());
        assert!(relayout(p, &hs("box p -> || => q")).is_err());
    }
}
