//! The golden corpus: every displayed derivation as a closed proof together
//! with the system it is checked in.

use crate::calculus::SystemId;
use crate::checker::derived::{expand_derived, mcut, Derived, ShapeError};
use crate::checker::{axiom_template, AxiomName, Proof};
use crate::syntax::{f, Formula, Hypersequent, Sort};
use crate::transform::atomize::eta;
use crate::transform::relayout;

#[derive(Clone, Debug)]
pub struct Figure {
    /// File stem under `proofs/`.
    pub name: &'static str,
    pub system: SystemId,
    pub proof: Proof,
}

fn fig(name: &'static str, system: SystemId, proof: Proof) -> Figure {
    Figure { name, system, proof }
}

fn d(rule: Derived, p: Proof) -> Proof {
    expand_derived(&rule, vec![p]).expect("derived rule expands")
}

/// `(⇒□¬□□□p | ⇒p | →)` by a cut on `□p`; the empty `→`-sequent left by
/// the multiplicative cut is kept.
pub fn gamma_counterexample() -> Result<Proof, ShapeError> {
    let left = eta(Sort::Modal, &f("box p"))
        .expect("eta")
        .k(0, 0)?
        .b1(1, 0)?
        .neg_r(2, 0)?
        .nec1(2)?
        .merge(1, 2)?
        .b2(1)?;
    let right = eta(Sort::Modal, &f("p")).expect("eta").k(0, 0)?;
    let p = mcut(left, 0, 0, right, 1, 0)?;
    Ok(relayout(p, &gamma_end()).expect("same hypersequent"))
}

pub fn gamma_end() -> Hypersequent {
    crate::syntax::hs("=> box ~box box box p || => p || ->")
}

/// The hypersequent as displayed, without the empty sequent.
pub fn gamma_goal() -> Hypersequent {
    crate::syntax::hs("=> box ~box box box p || => p")
}

pub fn figures() -> Vec<Figure> {
    use SystemId::*;
    let p = f("p");
    let q = f("q");
    let t = |n: AxiomName, args: &[Formula]| axiom_template(n, args).expect("template builds");
    let ax = |a: &str| Proof::ax(Sort::Plain, f(a));
    let necessitation = crate::checker::hilbert::hilbert_to_hyperseq(
        &crate::checker::HilbertProof::new(vec![
            crate::checker::HilbertStep::Tautology {
                formula: f("p > p"),
                proof: None,
            },
            crate::checker::HilbertStep::Necessitation(0),
        ]),
        K,
    )
    .expect("necessitation");
    let s4_box_l = d(Derived::S4BoxL { idx: 0 }, ax("p"));
    let s4_box_r = d(Derived::S4BoxR, s4_box_l.clone());
    let s5_box_r = d(
        Derived::S5BoxR { idx: 1 },
        eta(Sort::Plain, &f("box p")).unwrap().iw_r(0, p.clone()).unwrap(),
    );
    let kd4 = d(Derived::Kd4 { gamma: vec![0, 1] }, ax("p").neg_l(0, 0).unwrap());
    let std_box_r = d(Derived::StdBoxR { seq: 0 }, eta(Sort::Modal, &p).unwrap().t1(0, 0).unwrap());
    let std_move = d(
        Derived::StdMove { from: 0, idx: 0, to: 1 },
        eta(Sort::Modal, &f("box p"))
            .unwrap()
            .ew(crate::syntax::sq("=>"))
            .unwrap(),
    );
    let gamma = gamma_counterexample().expect("counterexample builds");
    vec![
        fig("template_k", K, t(AxiomName::K, &[p.clone(), q.clone()])),
        fig("template_t", T, t(AxiomName::T, std::slice::from_ref(&p))),
        fig("template_d", D, t(AxiomName::D, &[])),
        fig("template_4", K4, t(AxiomName::Four, std::slice::from_ref(&p))),
        fig("template_b", KB, t(AxiomName::B, std::slice::from_ref(&p))),
        fig("template_5", K5, t(AxiomName::Five, std::slice::from_ref(&p))),
        fig("necessitation", K, necessitation),
        fig("box_a_expansion", K, eta(Sort::Modal, &f("box p")).unwrap()),
        fig("s4_box_l", S4, s4_box_l),
        fig("s4_box_r", S4, s4_box_r),
        fig("s5_box_r", S5, s5_box_r),
        fig("kd4_rule", KD4, kd4),
        fig("s5_std_box_r", S5, std_box_r),
        fig("s5_std_move", S5, std_move),
        fig("kb_cut", KB, gamma.clone()),
        fig("kdb_cut", KDB, gamma.clone()),
        fig("ktb_cut", B, gamma),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check_proof;

    #[test]
    fn every_figure_checks() {
        for fg in figures() {
            let r = check_proof(&fg.proof, fg.system);
            assert!(r.ok, "{}: {:?}", fg.name, r.first_failure());
        }
    }

    #[test]
    fn counterexample_has_one_cut() {
        let p = gamma_counterexample().unwrap();
        assert_eq!(p.count_rule(crate::calculus::RuleId::Cut), 1);
        assert_eq!(p.conclusion, gamma_end());
    }
}
