//! Atomization of initial sequents: every leaf becomes `p→p` or `⊥→`.

use super::{replace_at, Result};
use crate::calculus::RuleId;
use crate::checker::Proof;
use crate::syntax::{Formula, Sort};

/// A proof of `A≫A` from atomic plain initials.
pub fn eta(sort: Sort, a: &Formula) -> Result<Proof> {
    if sort == Sort::Modal {
        return Ok(eta(Sort::Plain, a)?.nec2()?);
    }
    Ok(match a {
        Formula::Atom(_) | Formula::Bot => Proof::ax(Sort::Plain, a.clone()),
        Formula::Neg(b) => eta(sort, b)?.neg_r(0, 0)?.neg_l(0, 0)?,
        Formula::And(b, c) => {
            let l = eta(sort, b)?.and_l1(0, 0, (**c).clone())?;
            let r = eta(sort, c)?.and_l2(0, 0, (**b).clone())?;
            Proof::and_r(l, 0, 0, r, 0, 0)?
        }
        // A→A, nec2, K, nec1, merge: □A→□A
        Formula::Box(b) => eta(Sort::Plain, b)?.nec2()?.k(0, 0)?.nec1(0)?.merge(1, 0)?,
    })
}

fn is_atomic_initial(p: &Proof) -> bool {
    match p.rule() {
        Some(RuleId::InitAx) => p.seq(0).sort == Sort::Plain && p.seq(0).ante[0].is_atomic(),
        Some(RuleId::InitBot) => p.seq(0).sort == Sort::Plain,
        _ => true,
    }
}

fn expand(p: &Proof) -> Result<Proof> {
    let s = p.seq(0);
    match p.rule() {
        Some(RuleId::InitBot) => Ok(Proof::bot(Sort::Plain).nec2()?),
        _ => eta(s.sort, &s.ante[0]),
    }
}

/// Replace every non-atomic or `⇒`-sorted initial sequent by its expansion.
pub fn atomize_initials(p: &Proof) -> Result<Proof> {
    let mut out = p.clone();
    for path in p.paths_where(|q| !is_atomic_initial(q)) {
        let new = expand(p.at(&path))?;
        replace_at(&mut out, &path, new)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SystemId;
    use crate::checker::check_proof;
    use crate::syntax::f;

    #[test]
    fn boxed_modal_initial_expands_to_figure() {
        let p = Proof::ax(Sort::Modal, f("box p"));
        let q = atomize_initials(&p).unwrap();
        assert_eq!(q.conclusion, p.conclusion);
        assert!(check_proof(&q, SystemId::K).ok);
        let rules: Vec<RuleId> = {
            let mut v = vec![];
            q.visit(&mut |_, n| v.push(n.rule().unwrap()));
            v
        };
        use RuleId::*;
        assert_eq!(rules, vec![Nec2, Merge, Nec1, K, Nec2, InitAx]);
    }

    #[test]
    fn conjunction_and_negation() {
        for a in ["p & q", "~(p & ~q)", "box (p & q)", "bot"] {
            for sort in [Sort::Plain, Sort::Modal] {
                let p = if a == "bot" { Proof::bot(sort) } else { Proof::ax(sort, f(a)) };
                let q = atomize_initials(&p).unwrap();
                assert_eq!(q.conclusion, p.conclusion);
                assert!(check_proof(&q, SystemId::K).ok, "{a}");
                assert!(q.paths_where(|n| !is_atomic_initial(n)).is_empty());
            }
        }
    }

    #[test]
    fn atomic_proof_unchanged() {
        let p = Proof::ax(Sort::Plain, f("p")).iw_l(0, f("q")).unwrap();
        assert_eq!(atomize_initials(&p).unwrap(), p);
    }
}
