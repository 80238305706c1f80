//! Adjusting a proof's conclusion by contraction and weakening.

use super::derived::merge_sort;
use super::Proof;
use crate::calculus::{RuleId, StepError, StepErrorKind};
use crate::syntax::{Formula, Hypersequent, Sequent, Side, Sort};

fn fail<T>(msg: String) -> Result<T, StepError> {
    Err(StepError {
        rule: RuleId::Ew,
        kind: StepErrorKind::SchemaMismatch,
        at: msg,
    })
}

fn dup_pair(v: &[Formula]) -> Option<(usize, usize)> {
    for j in 0..v.len() {
        for k in j + 1..v.len() {
            if v[j] == v[k] {
                return Some((j, k));
            }
        }
    }
    None
}

fn contract_seq(mut p: Proof, i: usize) -> Result<Proof, StepError> {
    for side in [Side::Left, Side::Right] {
        while let Some((j, k)) = dup_pair(p.seq(i).side(side)) {
            p = p.ic(side, i, j, k)?;
        }
    }
    Ok(p)
}

/// Merge all `→`-sequents into one, remove repeated formulas inside each
/// sequent, and collapse identical `⇒`-sequents.
pub fn contract(p: Proof) -> Result<Proof, StepError> {
    let (mut p, _) = merge_sort(p, Sort::Plain, &[])?;
    for i in 0..p.conclusion.len() {
        p = contract_seq(p, i)?;
    }
    loop {
        let n = p.conclusion.len();
        let pair = (0..n)
            .flat_map(|i| (i + 1..n).map(move |k| (i, k)))
            .find(|&(i, k)| p.seq(i).sort == Sort::Modal && p.seq(i).same(p.seq(k)));
        match pair {
            Some((i, k)) => p = contract_seq(p.merge(i, k)?, i)?,
            None => return Ok(p),
        }
    }
}

fn count(v: &[Formula], a: &Formula) -> usize {
    v.iter().filter(|x| *x == a).count()
}

fn covers(small: &Sequent, big: &Sequent) -> bool {
    small.sort == big.sort
        && small.ante.iter().all(|a| big.ante.contains(a))
        && small.succ.iter().all(|a| big.succ.contains(a))
}

/// Weaken sequent `i` (duplicate-free) up to exactly `target`.
fn weaken_seq(mut p: Proof, i: usize, target: &Sequent) -> Result<Proof, StepError> {
    for side in [Side::Left, Side::Right] {
        let want = target.side(side).clone();
        let mut seen: Vec<&Formula> = vec![];
        for a in &want {
            if seen.contains(&a) {
                continue;
            }
            seen.push(a);
            let have = count(p.seq(i).side(side), a);
            for _ in have..count(&want, a) {
                p = p.iw(side, i, a.clone())?;
            }
        }
    }
    Ok(p)
}

fn matching(ps: &[Sequent], qs: &[Sequent], used: &mut Vec<bool>, out: &mut Vec<usize>) -> bool {
    let k = out.len();
    if k == ps.len() {
        return true;
    }
    for j in 0..qs.len() {
        if !used[j] && covers(&ps[k], &qs[j]) {
            used[j] = true;
            out.push(j);
            if matching(ps, qs, used, out) {
                return true;
            }
            out.pop();
            used[j] = false;
        }
    }
    false
}

/// Turn a proof into one of `target` by contraction, internal and external
/// weakening, and splitting the `→`-part. Fails when the conclusion is not
/// contained in `target`.
pub fn fit(p: Proof, target: &Hypersequent) -> Result<Proof, StepError> {
    if p.conclusion.equiv(target) {
        return Ok(p);
    }
    let mut p = contract(p)?;
    let plain_t: Vec<&Sequent> = target.0.iter().filter(|s| s.sort == Sort::Plain).collect();
    let modal_t: Vec<Sequent> = target.0.iter().filter(|s| s.sort == Sort::Modal).cloned().collect();
    let modal_p: Vec<(usize, Sequent)> = p
        .conclusion
        .0
        .iter()
        .cloned()
        .enumerate()
        .filter(|(_, s)| s.sort == Sort::Modal)
        .collect();
    let ps: Vec<Sequent> = modal_p.iter().map(|x| x.1.clone()).collect();
    let mut out = vec![];
    if !matching(&ps, &modal_t, &mut vec![false; modal_t.len()], &mut out) {
        return fail(format!("cannot fit {} into {}", p.conclusion, target));
    }
    for (k, &j) in out.iter().enumerate() {
        p = weaken_seq(p, modal_p[k].0, &modal_t[j])?;
    }
    let plain_p = (0..p.conclusion.len()).find(|&k| p.seq(k).sort == Sort::Plain);
    match plain_p {
        None => {
            for s in &plain_t {
                p = p.ew((*s).clone())?;
            }
        }
        Some(c) => {
            if plain_t.is_empty() {
                return fail(format!("cannot fit {} into {}", p.conclusion, target));
            }
            let mut all = Sequent::empty(Sort::Plain);
            for s in &plain_t {
                all = all.concat(s).unwrap();
            }
            if !covers(p.seq(c), &all) {
                return fail(format!("cannot fit {} into {}", p.conclusion, target));
            }
            p = weaken_seq(p, c, &all)?;
            let mut cur = c;
            for s in &plain_t[..plain_t.len() - 1] {
                let pick = |have: &[Formula], want: &[Formula]| -> Vec<usize> {
                    let mut taken = vec![false; have.len()];
                    want.iter()
                        .map(|a| {
                            let j = (0..have.len()).find(|&j| !taken[j] && have[j] == *a).unwrap();
                            taken[j] = true;
                            j
                        })
                        .collect()
                };
                let ante = pick(&p.seq(cur).ante, &s.ante);
                let succ = pick(&p.seq(cur).succ, &s.succ);
                p = p.split(cur, ante, succ)?;
                cur = p.last();
            }
        }
    }
    let used: Vec<bool> = {
        let mut u = vec![false; modal_t.len()];
        for &j in &out {
            u[j] = true;
        }
        u
    };
    for (j, s) in modal_t.iter().enumerate() {
        if !used[j] {
            p = p.ew(s.clone())?;
        }
    }
    if !p.conclusion.equiv(target) {
        return fail(format!("fit produced {}, wanted {}", p.conclusion, target));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SystemId;
    use crate::checker::check_proof;
    use crate::syntax::{f, hs};

    #[test]
    fn fits_by_weakening_and_splitting() {
        let p = Proof::ax(Sort::Plain, f("p"));
        let t = hs("p -> q || r -> p, p || s => t");
        let q = fit(p, &t).unwrap();
        assert!(q.conclusion.equiv(&t));
        assert!(check_proof(&q, SystemId::K).ok);
    }

    #[test]
    fn contracts_duplicates() {
        let p = Proof::ax(Sort::Modal, f("p"))
            .iw_l(0, f("p"))
            .unwrap()
            .ew(crate::syntax::sq("p, p => p"))
            .unwrap();
        let q = contract(p).unwrap();
        assert!(q.conclusion.equiv(&hs("p => p")));
        assert!(check_proof(&q, SystemId::K).ok);
    }

    #[test]
    fn refuses_non_inclusion() {
        let p = Proof::ax(Sort::Plain, f("p"));
        assert!(fit(p.clone(), &hs("p => p")).is_err());
        assert!(fit(p, &hs("q -> p")).is_err());
    }
}
