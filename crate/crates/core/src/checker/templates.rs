//! Hypersequent proofs whose end sequents have the modal axioms as images.

use std::fmt;
use std::str::FromStr;

use super::derived::{imp_l, merge_sort, ShapeError};
use super::Proof;
use crate::calculus::{StepError, SystemId, UnknownName};
use crate::syntax::{Formula, Sort};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomName {
    K,
    T,
    D,
    Four,
    B,
    Five,
}

impl AxiomName {
    pub const ALL: [AxiomName; 6] = [
        AxiomName::K,
        AxiomName::T,
        AxiomName::D,
        AxiomName::Four,
        AxiomName::B,
        AxiomName::Five,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomName::K => "K",
            AxiomName::T => "T",
            AxiomName::D => "D",
            AxiomName::Four => "4",
            AxiomName::B => "B",
            AxiomName::Five => "5",
        }
    }

    /// Smallest system the template checks in.
    pub fn minimal_system(self) -> SystemId {
        match self {
            AxiomName::K => SystemId::K,
            AxiomName::T => SystemId::T,
            AxiomName::D => SystemId::D,
            AxiomName::Four => SystemId::K4,
            AxiomName::B => SystemId::KB,
            AxiomName::Five => SystemId::K5,
        }
    }

    /// Number of instantiation formulas.
    pub fn arity(self) -> usize {
        match self {
            AxiomName::K => 2,
            AxiomName::D => 0,
            _ => 1,
        }
    }

    /// The axiom formula itself, in the shape the templates conclude with.
    pub fn formula(self, args: &[Formula]) -> Formula {
        let a = || args[0].clone();
        let bx = Formula::boxed;
        let neg = Formula::neg;
        match self {
            AxiomName::K => {
                let b = args[1].clone();
                Formula::implies(
                    bx(Formula::implies(a(), b.clone())),
                    Formula::implies(bx(a()), bx(b)),
                )
            }
            AxiomName::T => Formula::implies(bx(a()), a()),
            AxiomName::D => neg(bx(Formula::Bot)),
            AxiomName::Four => Formula::implies(bx(a()), bx(bx(a()))),
            AxiomName::B => Formula::implies(neg(a()), bx(neg(bx(a())))),
            AxiomName::Five => Formula::implies(neg(bx(a())), bx(neg(bx(a())))),
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomName {
    type Err = UnknownName;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

/// `→ □¬□A, □A` from `A⇒A` via K, ¬:r, 5₂, nec1 twice and merge.
pub fn five_lemma(a: Formula) -> Result<Proof, StepError> {
    let p = Proof::ax(Sort::Modal, a)
        .k(0, 0)? // ⇒A | □A→
        .neg_r(1, 0)? // ⇒A | →¬□A
        .five2(1)? // ⇒A | ⇒¬□A
        .nec1(1)? // ⇒A | →□¬□A
        .nec1(0)?; // →□A | →□¬□A
    p.merge(1, 0)
}

/// The displayed derivation of an axiom, instantiated at `args`.
pub fn axiom_template(name: AxiomName, args: &[Formula]) -> Result<Proof, ShapeError> {
    if args.len() != name.arity() {
        return Err(ShapeError::Shape(format!(
            "axiom {name} takes {} formulas, got {}",
            name.arity(),
            args.len()
        )));
    }
    let plain = |a: &Formula| Proof::ax(Sort::Plain, a.clone());
    let modal = |a: &Formula| Proof::ax(Sort::Modal, a.clone());
    Ok(match name {
        AxiomName::K => {
            let (a, b) = (&args[0], &args[1]);
            // A, A⊃B → B
            let p = imp_l(plain(a), 0, 0, plain(b), 0, 0)?;
            let p = p.nec2()?;
            let imp = Formula::implies(a.clone(), b.clone());
            let j = p.seq(0).ante.iter().position(|x| *x == imp).unwrap();
            let p = p.k(0, j)?;
            let j = p.seq(0).ante.iter().position(|x| x == a).unwrap();
            let p = p.k(0, j)?.nec1(0)?;
            let (p, _) = merge_sort(p, Sort::Plain, &[])?;
            let ba = Formula::boxed(a.clone());
            let ja = p.seq(0).ante.iter().position(|x| *x == ba).unwrap();
            super::derived::imp_r(p, 0, ja, 0)?
        }
        AxiomName::T => plain(&args[0]).t1(0, 0)?,
        AxiomName::D => Proof::bot(Sort::Modal)
            .k(0, 0)? // ⇒ | □⊥→
            .d(0)? // → | □⊥→
            .merge(1, 0)? // □⊥→
            .neg_r(0, 0)?,
        AxiomName::Four => modal(&args[0])
            .k(0, 0)? // ⇒A | □A→
            .four_r(0)? // ⇒□A | □A→
            .nec1(0)? // →□□A | □A→
            .merge(1, 0)?,
        AxiomName::B => modal(&args[0])
            .k(0, 0)? // ⇒A | □A→
            .neg_r(1, 0)? // ⇒A | →¬□A
            .b2(1)? // →A | ⇒¬□A
            .nec1(1)? // →A | →□¬□A
            .merge(1, 0)? // →□¬□A, A
            .neg_l(0, 1)?,
        AxiomName::Five => five_lemma(args[0].clone())?.neg_l(0, 1)?,
    })
}

/// B-axiom derivation through `B1`, for systems with `B1` but no `B2`.
pub fn b_via_b1(a: &Formula) -> Result<Proof, StepError> {
    Proof::ax(Sort::Plain, a.clone())
        .b1(0, 0)? // →A | □A⇒
        .neg_r(1, 0)? // →A | ⇒¬□A
        .nec1(1)? // →A | →□¬□A
        .merge(1, 0)? // →□¬□A, A
        .neg_l(0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::RuleId;
    use crate::checker::check_proof;
    use crate::syntax::{f, hs, Hypersequent};

    fn concl(name: AxiomName, args: &[Formula]) -> Hypersequent {
        axiom_template(name, args).unwrap().conclusion
    }

    #[test]
    fn conclusions() {
        let (p, q) = (f("p"), f("q"));
        assert!(concl(AxiomName::Four, std::slice::from_ref(&p)).equiv(&hs("box p -> box box p")));
        assert!(concl(AxiomName::D, &[]).equiv(&hs("-> ~box bot")));
        assert!(concl(AxiomName::T, std::slice::from_ref(&p)).equiv(&hs("box p -> p")));
        assert!(concl(AxiomName::B, std::slice::from_ref(&p)).equiv(&hs("~p -> box ~box p")));
        assert!(concl(AxiomName::Five, std::slice::from_ref(&p)).equiv(&hs("~box p -> box ~box p")));
        assert!(concl(AxiomName::K, &[p, q]).equiv(&hs("box(p > q) -> box p > box q")));
    }

    #[test]
    fn templates_check_in_minimal_systems() {
        for name in AxiomName::ALL {
            let args: Vec<Formula> = ["p", "q"][..name.arity()].iter().map(|s| f(s)).collect();
            let t = axiom_template(name, &args).unwrap();
            assert!(check_proof(&t, name.minimal_system()).ok, "{name}");
            assert_eq!(t.conclusion.0[0].sort, Sort::Plain);
            assert_eq!(t.conclusion.len(), 1);
        }
    }

    #[test]
    fn five_uses_52_outside_k() {
        let t = axiom_template(AxiomName::Five, &[f("p")]).unwrap();
        let r = check_proof(&t, SystemId::K);
        assert!(!r.ok);
        assert!(t.count_rule(RuleId::Five2) == 1);
        assert!(t.premises[0].conclusion.equiv(&hs("-> box ~box p, box p")));
    }

    #[test]
    fn four_ends_merge_nec1_4r_k() {
        let t = axiom_template(AxiomName::Four, &[f("p")]).unwrap();
        let mut rules = vec![];
        let mut cur = &t;
        while let Some(r) = cur.rule() {
            rules.push(r);
            match cur.premises.first() {
                Some(n) => cur = n,
                None => break,
            }
        }
        assert_eq!(
            rules,
            vec![RuleId::Merge, RuleId::Nec1, RuleId::FourR, RuleId::K, RuleId::InitAx]
        );
    }

    #[test]
    fn b_through_b1() {
        let t = b_via_b1(&f("p")).unwrap();
        assert!(t.conclusion.equiv(&hs("~p -> box ~box p")));
        assert!(check_proof(&t, SystemId::KB5).ok);
    }
}
