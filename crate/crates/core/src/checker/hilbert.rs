//! Translating Hilbert-style proofs into hypersequent proofs.

use thiserror::Error;

use super::derived::{imp_l, imp_r, mcut, ShapeError};
use super::templates::{axiom_template, b_via_b1, five_lemma, AxiomName};
use super::{check_proof, Proof};
use crate::calculus::{RuleId, SystemId};
use crate::search::{prove_tautology, SearchOutcome};
use crate::syntax::{Formula, Hypersequent, Sequent, Sort};

#[derive(Clone, Debug, PartialEq)]
pub enum HilbertStep {
    /// A propositional tautology, optionally with its own proof of `→ φ`.
    Tautology { formula: Formula, proof: Option<Proof> },
    /// An instance of a modal axiom.
    Axiom { name: AxiomName, args: Vec<Formula> },
    /// From step `i` proving `A` and step `j` proving `A ⊃ B`, infer `B`.
    ModusPonens(usize, usize),
    /// From step `i` proving `A`, infer `□A`.
    Necessitation(usize),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HilbertProof {
    pub steps: Vec<HilbertStep>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("axiom {axiom} is not available in {system}")]
    UnavailableAxiom { axiom: AxiomName, system: SystemId },
    #[error("could not discharge tautology {0}")]
    TautologyDischargeFailed(Formula),
    #[error("step {step}: {msg}")]
    BadStep { step: usize, msg: String },
    #[error("empty Hilbert proof")]
    Empty,
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

impl From<crate::calculus::StepError> for HilbertError {
    fn from(e: crate::calculus::StepError) -> Self {
        HilbertError::Shape(ShapeError::Step(e))
    }
}

impl HilbertProof {
    pub fn new(steps: Vec<HilbertStep>) -> HilbertProof {
        HilbertProof { steps }
    }

    /// The formula proved at each step.
    pub fn formulas(&self) -> Result<Vec<Formula>, HilbertError> {
        let mut out: Vec<Formula> = vec![];
        for (k, st) in self.steps.iter().enumerate() {
            let earlier = |i: usize| {
                out.get(i).cloned().filter(|_| i < k).ok_or_else(|| HilbertError::BadStep {
                    step: k,
                    msg: format!("reference {i} is not an earlier step"),
                })
            };
            let phi = match st {
                HilbertStep::Tautology { formula, .. } => formula.clone(),
                HilbertStep::Axiom { name, args } => {
                    if args.len() != name.arity() {
                        return Err(HilbertError::BadStep {
                            step: k,
                            msg: format!("axiom {name} takes {} formulas", name.arity()),
                        });
                    }
                    name.formula(args)
                }
                HilbertStep::ModusPonens(i, j) => {
                    let (a, imp) = (earlier(*i)?, earlier(*j)?);
                    match imp {
                        Formula::Neg(inner) => match *inner {
                            Formula::And(x, nb) if *x == a => match *nb {
                                Formula::Neg(b) => *b,
                                _ => return Err(bad_mp(k, &a)),
                            },
                            _ => return Err(bad_mp(k, &a)),
                        },
                        _ => return Err(bad_mp(k, &a)),
                    }
                }
                HilbertStep::Necessitation(i) => Formula::boxed(earlier(*i)?),
            };
            out.push(phi);
        }
        Ok(out)
    }

    pub fn conclusion(&self) -> Result<Formula, HilbertError> {
        self.formulas()?.pop().ok_or(HilbertError::Empty)
    }
}

fn bad_mp(k: usize, a: &Formula) -> HilbertError {
    HilbertError::BadStep {
        step: k,
        msg: format!("second premise is not an implication from {a}"),
    }
}

fn goal(phi: &Formula) -> Hypersequent {
    Hypersequent::single(Sequent::plain(vec![], vec![phi.clone()]))
}

/// `Γ → Δ` with one antecedent and one succedent formula turned into `→ A ⊃ B`.
fn close_imp(p: Proof) -> Result<Proof, ShapeError> {
    imp_r(p, 0, 0, 0)
}

fn axiom_proof(name: AxiomName, args: &[Formula], sys: SystemId) -> Result<Proof, HilbertError> {
    let has = |r: RuleId| sys.has_rule(r);
    let unavailable = HilbertError::UnavailableAxiom { axiom: name, system: sys };
    let p = match name {
        AxiomName::K => close_imp(axiom_template(name, args)?)?,
        AxiomName::T if has(RuleId::T1) => close_imp(axiom_template(name, args)?)?,
        AxiomName::D if has(RuleId::D) => axiom_template(name, args)?,
        AxiomName::D if has(RuleId::T1) => Proof::bot(Sort::Plain).t1(0, 0)?.neg_r(0, 0)?,
        AxiomName::Four if has(RuleId::FourR) => close_imp(axiom_template(name, args)?)?,
        AxiomName::Five if has(RuleId::Five2) => close_imp(axiom_template(name, args)?)?,
        AxiomName::B if has(RuleId::B2) => close_imp(axiom_template(name, args)?)?,
        AxiomName::B if has(RuleId::B1) => close_imp(b_via_b1(&args[0])?)?,
        AxiomName::B if has(RuleId::T1) && has(RuleId::Five2) => {
            // → □¬□A, □A cut against □A → A
            let a = &args[0];
            let lemma = five_lemma(a.clone())?;
            let t = Proof::ax(Sort::Plain, a.clone()).t1(0, 0)?;
            let j = lemma.seq(0).succ.iter().position(|x| *x == Formula::boxed(a.clone())).unwrap();
            let p = mcut(lemma, 0, j, t, 0, 0)?;
            let j = p.seq(0).succ.iter().position(|x| x == a).unwrap();
            close_imp(p.neg_l(0, j)?)?
        }
        _ => return Err(unavailable),
    };
    Ok(p)
}

/// Simulate `hp` in `sys`: the result proves `→ φ` for the final formula `φ`.
pub fn hilbert_to_hyperseq(hp: &HilbertProof, sys: SystemId) -> Result<Proof, HilbertError> {
    let phis = hp.formulas()?;
    if phis.is_empty() {
        return Err(HilbertError::Empty);
    }
    let mut proofs: Vec<Proof> = vec![];
    for (k, st) in hp.steps.iter().enumerate() {
        let p = match st {
            HilbertStep::Tautology { formula, proof } => match proof {
                Some(p) => {
                    if !p.conclusion.equiv(&goal(formula)) || !check_proof(p, sys).ok {
                        return Err(HilbertError::BadStep {
                            step: k,
                            msg: "supplied tautology proof does not check".into(),
                        });
                    }
                    p.clone()
                }
                None => match prove_tautology(formula) {
                    SearchOutcome::Found(p) => p,
                    _ => return Err(HilbertError::TautologyDischargeFailed(formula.clone())),
                },
            },
            HilbertStep::Axiom { name, args } => axiom_proof(*name, args, sys)?,
            HilbertStep::ModusPonens(i, j) => {
                let b = phis[k].clone();
                // A ⊃ B → B, then cut with → A ⊃ B
                let left = imp_l(proofs[*i].clone(), 0, 0, Proof::ax(Sort::Plain, b), 0, 0)?;
                let imp = &phis[*j];
                let jj = left.seq(0).ante.iter().position(|x| x == imp).unwrap();
                mcut(proofs[*j].clone(), 0, 0, left, 0, jj)?
            }
            HilbertStep::Necessitation(i) => proofs[*i].clone().nec2()?.nec1(0)?,
        };
        debug_assert!(p.conclusion.equiv(&goal(&phis[k])), "step {k}: {}", p.conclusion);
        proofs.push(p);
    }
    Ok(proofs.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::f;

    #[test]
    fn t_axiom() {
        let hp = HilbertProof::new(vec![HilbertStep::Axiom { name: AxiomName::T, args: vec![f("p")] }]);
        let p = hilbert_to_hyperseq(&hp, SystemId::T).unwrap();
        assert!(p.conclusion.equiv(&goal(&f("box p > p"))));
        assert!(check_proof(&p, SystemId::T).ok);
        assert!(matches!(
            hilbert_to_hyperseq(&hp, SystemId::K),
            Err(HilbertError::UnavailableAxiom { .. })
        ));
    }

    #[test]
    fn modus_ponens_has_one_cut() {
        let hp = HilbertProof::new(vec![
            HilbertStep::Tautology { formula: f("p > p"), proof: None },
            HilbertStep::Tautology { formula: f("(p > p) > (p > p)"), proof: None },
            HilbertStep::ModusPonens(0, 1),
        ]);
        let p = hilbert_to_hyperseq(&hp, SystemId::K).unwrap();
        assert!(p.conclusion.equiv(&goal(&f("p > p"))));
        assert_eq!(p.count_rule(RuleId::Cut), 1);
        assert!(check_proof(&p, SystemId::K).ok);
    }

    #[test]
    fn necessitation_is_nec1_over_nec2() {
        let hp = HilbertProof::new(vec![
            HilbertStep::Tautology { formula: f("p > p"), proof: None },
            HilbertStep::Necessitation(0),
        ]);
        let p = hilbert_to_hyperseq(&hp, SystemId::K).unwrap();
        assert_eq!(p.rule(), Some(RuleId::Nec1));
        assert_eq!(p.premises[0].rule(), Some(RuleId::Nec2));
        assert!(p.conclusion.equiv(&goal(&f("box(p > p)"))));
    }

    #[test]
    fn b_axiom_routes() {
        let hp = HilbertProof::new(vec![HilbertStep::Axiom { name: AxiomName::B, args: vec![f("q")] }]);
        for sys in [SystemId::KB, SystemId::KB5, SystemId::S5, SystemId::B] {
            let p = hilbert_to_hyperseq(&hp, sys).unwrap();
            assert!(check_proof(&p, sys).ok, "{sys}");
        }
        assert!(hilbert_to_hyperseq(&hp, SystemId::S4).is_err());
    }

    #[test]
    fn bad_references() {
        let hp = HilbertProof::new(vec![HilbertStep::Necessitation(0)]);
        assert!(matches!(hp.formulas(), Err(HilbertError::BadStep { .. })));
    }
}
