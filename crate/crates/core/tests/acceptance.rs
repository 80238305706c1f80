//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::time::Instant;

use hyperseq::calculus::{check_step, Args, RuleApp, RuleId, StepErrorKind, SystemId};
use hyperseq::checker::{
    axiom_template, check_fragment, check_proof, hilbert_to_hyperseq, AxiomName, HilbertProof, HilbertStep, Proof,
};
use hyperseq::corpus::{figures, gamma_counterexample, gamma_goal};
use hyperseq::search::{prove, prove_counted, prove_tautology, SearchConfig, SearchOutcome};
use hyperseq::semantics::{bounded_valid, frame_class};
use hyperseq::syntax::{f, hs, hyper_image, sq, Formula, Hypersequent, Sequent, Sort};
use hyperseq::transform::{
    cut_degrees, eliminate_cut, eliminate_t2, is_regular, reduce_cut_formula, regularize, restrict_52, to_standard,
    unrestricted_52, TransformError,
};
use hyperseq::transform::standard::check_standard;

use SystemId::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn figure_proofs(systems: &[SystemId]) -> Vec<(String, SystemId, Proof)> {
    figures()
        .into_iter()
        .filter(|fg| systems.contains(&fg.system))
        .map(|fg| (fg.name.to_string(), fg.system, fg.proof))
        .collect()
}

fn golden_corpus() -> Outcome {
    let figs = figures();
    let mut slowest = 0u128;
    for fg in &figs {
        let t = Instant::now();
        let r = check_proof(&fg.proof, fg.system);
        let ms = t.elapsed().as_millis();
        slowest = slowest.max(ms);
        ensure(r.ok, format!("{} fails: {:?}", fg.name, r.first_failure()))?;
        ensure(ms < 50, format!("{} took {ms} ms", fg.name))?;
    }
    Ok(format!("{} figures check, slowest {slowest} ms", figs.len()))
}

fn app(rule: RuleId, args: Args) -> RuleApp {
    RuleApp::new(rule, args)
}

fn two(seq: [usize; 2], idx: [usize; 2]) -> Args {
    Args {
        seq: seq.to_vec(),
        idx: idx.to_vec(),
        ..Args::default()
    }
}

/// Deliberately broken steps with the error kind each must raise.
pub fn broken_steps() -> Vec<(&'static str, RuleApp, Vec<Hypersequent>, Hypersequent, StepErrorKind)> {
    use RuleId::*;
    use StepErrorKind::*;
    let split = |s: usize| Args {
        seq: vec![s],
        split: Some((vec![0], vec![])),
        ..Args::default()
    };
    vec![
        ("ax with distinct sides", app(InitAx, Args::none()), vec![], hs("p -> q"), SchemaMismatch),
        ("bot with context", app(InitBot, Args::none()), vec![], hs("bot -> || p -> p"), ContextMismatch),
        ("and_l1 index out of range", app(AndL1, Args::at_idx(0, 5).with_formula(f("q"))), vec![hs("p -> r")], hs("p & q -> r"), BadAddressing),
        ("and_l2 without formula", app(AndL2, Args::at_idx(0, 0)), vec![hs("p -> r")], hs("q & p -> r"), BadAddressing),
        ("and_r contexts differ", app(AndR, two([0, 0], [0, 0])), vec![hs("r -> p"), hs("s -> q")], hs("r -> p & q"), ContextMismatch),
        ("and_r side hypersequents differ", app(AndR, two([0, 0], [0, 0])), vec![hs("-> p || => r"), hs("-> q")], hs("-> p & q || => r"), ContextMismatch),
        ("neg_l wrong formula", app(NegL, Args::at_idx(0, 0)), vec![hs("-> p")], hs("~q ->"), SchemaMismatch),
        ("neg_r index out of range", app(NegR, Args::at_idx(0, 1)), vec![hs("p -> ")], hs("-> ~p"), BadAddressing),
        ("ic_l distinct formulas", app(IcL, two([0, 0], [0, 1])), vec![hs("p, q -> r")], hs("p -> r"), SchemaMismatch),
        ("ic_r same position", app(IcR, two([0, 0], [0, 0])), vec![hs("-> p, p")], hs("-> p"), BadAddressing),
        ("iw_l wrong conclusion", app(IwL, Args::at(0).with_formula(f("q"))), vec![hs("p -> p")], hs("p, q -> p, q"), SchemaMismatch),
        ("iw_r two premises", app(IwR, Args::at(0).with_formula(f("q"))), vec![hs("p -> p"), hs("p -> p")], hs("p -> p, q"), WrongArity),
        ("cut formulas differ", app(Cut, two([0, 0], [0, 0])), vec![hs("-> p"), hs("q -> r")], hs("-> r"), SchemaMismatch),
        ("cut across sorts", app(Cut, two([0, 0], [0, 0])), vec![hs("=> p"), hs("p -> q")], hs("=> q"), SortViolation),
        ("ew without sequent", app(Ew, Args::none()), vec![hs("p -> p")], hs("p -> p || =>"), BadAddressing),
        ("merge across sorts", app(Merge, Args { seq: vec![0, 1], ..Args::default() }), vec![hs("p => || q ->")], hs("p, q =>"), SortViolation),
        ("split on =>", app(Split, split(0)), vec![hs("p, q => r")], hs("p => || q => r"), SortViolation),
        ("nec1 with antecedent", app(Nec1, Args::at(0)), vec![hs("p => q")], hs("-> box q"), SchemaMismatch),
        ("nec2 with context", app(Nec2, Args::none()), vec![hs("p -> p || q -> q")], hs("p => p || q -> q"), ContextMismatch),
        ("nec2 on =>", app(Nec2, Args::none()), vec![hs("p => p")], hs("p => p"), SortViolation),
        ("k on ->", app(K, Args::at_idx(0, 0)), vec![hs("p, q -> r")], hs("box p -> || q -> r"), SortViolation),
        ("d on non-empty sequent", app(D, Args::at(0)), vec![hs("p =>")], hs("p ->"), SchemaMismatch),
        ("t1 wrong formula", app(T1, Args::at_idx(0, 0)), vec![hs("p -> q")], hs("box q -> q"), SchemaMismatch),
        ("t2 on ->", app(T2, Args::at(0)), vec![hs("p -> p")], hs("p -> p"), SortViolation),
        ("4r on ->", app(FourR, Args::at(0)), vec![hs("-> p")], hs("=> box p"), SortViolation),
        ("4l on unboxed formula", app(FourL, Args::at_idx(0, 0)), vec![hs("p => q")], hs("=> q || p ->"), SchemaMismatch),
        ("b1 on =>", app(B1, Args::at_idx(0, 0)), vec![hs("p => q")], hs("=> q || box p =>"), SortViolation),
        ("b2 with -> context", app(B2, Args::at(1)), vec![hs("p -> q || r -> s")], hs("p -> q || r => s"), SortViolation),
        ("5_1 on unboxed formula", app(Five1, Args::at_idx(0, 0)), vec![hs("p -> q")], hs("-> q || p =>"), SchemaMismatch),
        ("5_2 with -> context", app(Five2, Args::at(0)), vec![hs("p -> || q ->")], hs("p => || q ->"), SortViolation),
        ("b25 block repeats the principal", app(B25, Args { seq: vec![0, 0], ..Args::default() }), vec![hs("p -> || q =>")], hs("p => || q ->"), BadAddressing),
        ("b25 with -> context", app(B25, Args { seq: vec![0, 1], ..Args::default() }), vec![hs("p -> || q ->")], hs("p => || q ->"), SortViolation),
    ]
}

fn negative_schema() -> Outcome {
    let cases = broken_steps();
    ensure(cases.len() >= 24, "fewer than 24 cases")?;
    let mut rules = std::collections::BTreeSet::new();
    for (name, a, prems, concl, kind) in &cases {
        match check_step(a, prems, concl) {
            Ok(()) => return Err(format!("{name}: accepted")),
            Err(e) if e.kind != *kind => return Err(format!("{name}: got {:?}, want {kind:?}", e.kind)),
            Err(_) => {}
        }
        rules.insert(a.rule);
    }
    ensure(rules.len() == RuleId::ALL.len(), format!("only {} rules covered", rules.len()))?;
    Ok(format!("{} broken steps rejected, {} rules covered", cases.len(), rules.len()))
}

fn soundness_oracle() -> Outcome {
    let figs = figures();
    for fg in &figs {
        let img = hyper_image(&fg.proof.conclusion);
        let atoms = img.atoms();
        ensure(atoms.len() <= 2, format!("{}: more than two atoms", fg.name))?;
        let v = bounded_valid(&img, frame_class(fg.system), 3, &atoms);
        ensure(v.is_valid(), format!("{} in {}: {v}", fg.name, fg.system))?;
    }
    Ok(format!("{} corpus ends valid on frames up to 3 worlds", figs.len()))
}

fn t2_elimination() -> Outcome {
    let mut inputs = figure_proofs(&[S4])
        .into_iter()
        .filter(|(n, ..)| n.starts_with("s4_box"))
        .collect::<Vec<_>>();
    for sys in [T, S4] {
        for (k, p) in common::random_proofs(sys, 6, |p| p.count_rule(RuleId::T2) > 0).into_iter().enumerate() {
            inputs.push((format!("random {sys} #{k}"), sys, p));
        }
    }
    let randoms = inputs.iter().filter(|x| x.0.starts_with("random")).count();
    ensure(randoms >= 10, format!("only {randoms} randomized proofs"))?;
    for (name, sys, p) in &inputs {
        ensure(p.count_rule(RuleId::T2) > 0, format!("{name}: no T2 in input"))?;
        let q = eliminate_t2(p, *sys).map_err(|e| format!("{name}: {e}"))?;
        ensure(q.count_rule(RuleId::T2) == 0, format!("{name}: T2 left"))?;
        ensure(q.conclusion == p.conclusion, format!("{name}: end changed"))?;
        ensure(check_proof(&q, *sys).ok, format!("{name}: result does not check"))?;
    }
    Ok(format!("{} proofs ({randoms} randomized) made T2-free", inputs.len()))
}

fn regularization() -> Outcome {
    let mut inputs = vec![("template_4".to_string(), K4, axiom_template(AxiomName::Four, &[f("p")]).unwrap())];
    inputs.extend(figure_proofs(&[S4]));
    for sys in [K4, KD4, S4] {
        let rs = common::random_proofs(sys, 5, |p| {
            p.count_rule(RuleId::FourR) + p.count_rule(RuleId::Nec1) + p.count_rule(RuleId::D) > 0
        });
        for (k, p) in rs.into_iter().enumerate() {
            inputs.push((format!("random {sys} #{k}"), sys, p));
        }
    }
    let randoms = inputs.iter().filter(|x| x.0.starts_with("random")).count();
    ensure(randoms >= 10, format!("only {randoms} randomized proofs"))?;
    let mut irregular = 0;
    for (name, sys, p) in &inputs {
        irregular += usize::from(!is_regular(p, *sys).unwrap().regular);
        let q = regularize(p, *sys).map_err(|e| format!("{name}: {e}"))?;
        ensure(is_regular(&q, *sys).unwrap().regular, format!("{name}: not regular"))?;
        ensure(q.count_rule(RuleId::FourR) == 0, format!("{name}: 4r left"))?;
        ensure(q.conclusion == p.conclusion, format!("{name}: end changed"))?;
        ensure(check_proof(&q, *sys).ok, format!("{name}: result does not check"))?;
        let again = regularize(&q, *sys).map_err(|e| format!("{name} (again): {e}"))?;
        ensure(again == q, format!("{name}: not idempotent"))?;
    }
    Ok(format!("{} proofs ({randoms} randomized, {irregular} irregular) regularized", inputs.len()))
}

fn flat(h: &Hypersequent) -> Sequent {
    let mut s = Sequent::new(Sort::Plain, vec![], vec![]);
    for t in &h.0 {
        s.ante.extend(t.ante.iter().cloned());
        s.succ.extend(t.succ.iter().cloned());
    }
    s
}

fn standard_extraction() -> Outcome {
    let systems = [S4, K4, KD4, K, T, D];
    let mut done = 0;
    let mut per_sys = std::collections::BTreeSet::new();
    for (name, sys, p) in figure_proofs(&systems) {
        if p.conclusion.0.iter().any(|s| s.sort == Sort::Modal) {
            continue;
        }
        let q = regularize(&p, sys).map_err(|e| format!("{name}: {e}"))?;
        let s = to_standard(&q, sys).map_err(|e| format!("{name}: {e}"))?;
        check_standard(&s, sys).map_err(|e| format!("{name}: {e}"))?;
        ensure(s.end.same(&flat(&p.conclusion)), format!("{name}: end {} is not flat", s.end))?;
        done += 1;
        per_sys.insert(sys);
    }
    ensure(per_sys.len() == systems.len(), format!("systems covered: {per_sys:?}"))?;
    Ok(format!("{done} corpus proofs extracted in {} systems", per_sys.len()))
}

fn five_restriction() -> Outcome {
    let mut inputs = vec![];
    for sys in [K45, KD45, S5] {
        inputs.push((format!("template_5 in {sys}"), sys, axiom_template(AxiomName::Five, &[f("p")]).unwrap()));
        for (k, p) in common::random_proofs(sys, 4, |p| p.count_rule(RuleId::Five2) > 0).into_iter().enumerate() {
            inputs.push((format!("random {sys} #{k}"), sys, p));
        }
    }
    inputs.extend(figure_proofs(&[S5]).into_iter().filter(|x| x.2.count_rule(RuleId::Five2) > 0));
    let minimal = Proof::ax(Sort::Modal, f("p")).k(0, 0).unwrap().five2(1).unwrap();
    inputs.push(("=> p || box p => in K45".into(), K45, minimal));
    let mut failures = vec![];
    for (name, sys, p) in &inputs {
        let r = restrict_52(p, *sys).map_err(|e| e.to_string()).and_then(|q| {
            ensure(unrestricted_52(&q).is_empty(), "unrestricted 5_2 left")?;
            ensure(q.conclusion == p.conclusion, "end changed")?;
            ensure(check_proof(&q, *sys).ok, "result does not check")
        });
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    }
    ensure(
        failures.is_empty(),
        format!("{} of {} proofs not restricted: {}", failures.len(), inputs.len(), failures.join("; ")),
    )?;
    Ok(format!("{} proofs with 5_2 restricted", inputs.len()))
}

/// `Γ → Δ, A` and `A, Γ → Δ` built from initials, joined by a cut on `A`.
fn cut_on(a: &str) -> Proof {
    let a = f(a);
    let (left, right) = match &a {
        Formula::And(x, y) => {
            let l = Proof::and_r(
                Proof::ax(Sort::Plain, (**x).clone()).iw_l(0, (**y).clone()).unwrap(),
                0,
                0,
                Proof::ax(Sort::Plain, (**y).clone()).iw_l(0, (**x).clone()).unwrap(),
                0,
                0,
            );
            let r = Proof::ax(Sort::Plain, (**x).clone()).and_l1(0, 0, (**y).clone()).unwrap();
            (l.unwrap(), r)
        }
        Formula::Neg(x) => {
            let l = Proof::ax(Sort::Plain, (**x).clone()).neg_r(0, 0).unwrap();
            let r = Proof::ax(Sort::Plain, (**x).clone()).neg_l(0, 0).unwrap();
            (l, r)
        }
        _ => unreachable!(),
    };
    let j = left.conclusion.0[0].succ.iter().position(|b| *b == a).unwrap();
    let k = right.conclusion.0[0].ante.iter().position(|b| *b == a).unwrap();
    Proof::cut(left, 0, j, right, 0, k).unwrap()
}

/// Strict decrease in the multiset extension of `>` on degrees.
fn multiset_less(new: &[usize], old: &[usize]) -> bool {
    let mut n = new.to_vec();
    let mut o = old.to_vec();
    let mut k = 0;
    while k < n.len() {
        if let Some(pos) = o.iter().position(|x| *x == n[k]) {
            o.remove(pos);
            n.remove(k);
        } else {
            k += 1;
        }
    }
    !o.is_empty() && n.iter().all(|y| o.iter().any(|x| x > y))
}

fn cut_formula_reduction() -> Outcome {
    let mut out = vec![];
    for a in ["p & q", "~p", "~(p & q)"] {
        let p = cut_on(a);
        ensure(check_proof(&p, K).ok, format!("{a}: input does not check"))?;
        let q = reduce_cut_formula(&p).map_err(|e| format!("{a}: {e}"))?;
        let (before, after) = (cut_degrees(&p), cut_degrees(&q));
        ensure(multiset_less(&after, &before), format!("{a}: {before:?} -> {after:?}"))?;
        ensure(q.conclusion == p.conclusion, format!("{a}: end changed"))?;
        ensure(check_proof(&q, K).ok, format!("{a}: result does not check"))?;
        out.push(format!("{a}: {before:?}->{after:?}"));
    }
    Ok(out.join(", "))
}

fn taut(s: &str) -> HilbertStep {
    HilbertStep::Tautology {
        formula: f(s),
        proof: None,
    }
}

fn axiom(name: AxiomName, args: &[&str]) -> HilbertStep {
    HilbertStep::Axiom {
        name,
        args: args.iter().map(|a| f(a)).collect(),
    }
}

/// Hilbert proofs whose translations carry cuts, with the axioms each needs.
fn cut_sources() -> Vec<(&'static str, HilbertProof)> {
    use HilbertStep::*;
    vec![
        ("mp", HilbertProof::new(vec![taut("p > p"), taut("(p > p) > (p > p)"), ModusPonens(0, 1)])),
        (
            "nec_k",
            HilbertProof::new(vec![taut("p > p"), Necessitation(0), axiom(AxiomName::K, &["p", "p"]), ModusPonens(1, 2)]),
        ),
        (
            "k_mp",
            HilbertProof::new(vec![
                axiom(AxiomName::K, &["p", "q"]),
                taut("(box(p > q) > (box p > box q)) > (box(p > q) > (box p > box q))"),
                ModusPonens(0, 1),
            ]),
        ),
        (
            "t_mp",
            HilbertProof::new(vec![axiom(AxiomName::T, &["p"]), taut("(box p > p) > (~p > ~box p)"), ModusPonens(0, 1)]),
        ),
        (
            "four_mp",
            HilbertProof::new(vec![
                axiom(AxiomName::Four, &["p"]),
                taut("(box p > box box p) > (~box box p > ~box p)"),
                ModusPonens(0, 1),
            ]),
        ),
        (
            "five_mp",
            HilbertProof::new(vec![
                axiom(AxiomName::Five, &["p"]),
                taut("(~box p > box ~box p) > (~box ~box p > box p)"),
                ModusPonens(0, 1),
            ]),
        ),
    ]
}

fn cut_elimination() -> Outcome {
    let systems = [K, D, T, K4, KD4, S4, K5, K45, KD5, KD45, KB5, S5];
    let mut per_sys = vec![];
    let mut agree = 0;
    let mut goals = 0;
    let mut limits = vec![];
    for sys in systems {
        let mut ok = 0;
        for (name, hp) in cut_sources() {
            let Ok(p) = hilbert_to_hyperseq(&hp, sys) else { continue };
            if p.is_cut_free() {
                continue;
            }
            match eliminate_cut(&p, sys) {
                Ok(q) => {
                    ensure(q.is_cut_free(), format!("{name} in {sys}: cut left"))?;
                    ensure(q.conclusion == p.conclusion, format!("{name} in {sys}: end changed"))?;
                    ensure(check_proof(&q, sys).ok, format!("{name} in {sys}: result does not check"))?;
                    ok += 1;
                    goals += 1;
                    let cfg = SearchConfig::for_system(sys).depth(12);
                    if let SearchOutcome::Found(r) = prove(&p.conclusion, sys, &cfg) {
                        agree += usize::from(r.is_cut_free() && check_proof(&r, sys).ok);
                    }
                }
                Err(e) => {
                    let kind = e.to_string().split(':').next().unwrap_or_default().to_string();
                    limits.push(format!("{name} in {sys} ({kind})"));
                }
            }
        }
        ensure(ok >= 2, format!("{sys}: only {ok} with-cut proofs eliminated; {}", limits.join("; ")))?;
        per_sys.push(format!("{sys}={ok}"));
    }
    ensure(agree >= 6, format!("prover agrees on only {agree} goals"))?;
    let mut msg = format!("{goals} cuts eliminated ({}), prover agrees on {agree}", per_sys.join(" "));
    if !limits.is_empty() {
        msg += &format!("; not eliminated: {}", limits.join("; "));
    }
    Ok(msg)
}

fn gamma_failure() -> Outcome {
    let p = gamma_counterexample().map_err(|e| e.to_string())?;
    for sys in [KB, KDB, B] {
        let r = check_proof(&p, sys);
        ensure(r.ok, format!("{sys}: {:?}", r.first_failure()))?;
        let mut cfg = SearchConfig::for_system(sys).depth(12);
        cfg.node_budget = 100_000;
        let (res, nodes) = prove_counted(&gamma_goal(), sys, &cfg);
        ensure(
            matches!(res, SearchOutcome::ExhaustedBound),
            format!("{sys}: search did not exhaust its bound ({nodes} goals)"),
        )?;
        match eliminate_cut(&p, sys) {
            Err(TransformError::WrongGroup { .. }) => {}
            other => return Err(format!("{sys}: expected WrongGroup, got {:?}", other.map(|_| ()))),
        }
    }
    Ok("with-cut proof checks in KB/KDB/B, no cut-free proof within bound, cut-elimination refused".into())
}

fn rules_in(p: &Proof) -> std::collections::BTreeSet<RuleId> {
    p.rules_used().into_keys().collect()
}

fn f7_property() -> Outcome {
    let systems = [K, D, T, K4, KD4, S4, K5, K45, KD5, KD45, KB5, S5];
    let modal = sq("q => r");
    let plain = sq("q -> r");
    let blocking = [RuleId::Five2, RuleId::B25, RuleId::Nec2];
    let (mut n, mut with_block, mut with_nec2) = (0, 0, 0);
    for sys in systems {
        for p in common::random_proofs(sys, 12, |p| p.node_count() > 2) {
            let mut frags = vec![];
            p.visit(&mut |_, q| {
                if q.premises.iter().any(|r| r.app.is_some()) {
                    frags.push(common::open_initials(q));
                }
            });
            for frag in frags {
                ensure(check_fragment(&frag, sys).ok, "harvested fragment does not check")?;
                let rules = rules_in(&frag);
                let nec2 = rules.contains(&RuleId::Nec2);
                let blocked = blocking.iter().any(|r| rules.contains(r));
                let m = check_fragment(&common::append_everywhere(&frag, &modal), sys);
                let pl = check_fragment(&common::append_everywhere(&frag, &plain), sys);
                ensure(
                    m.ok != nec2,
                    format!("{sys}: appending => gives {} on {frag:?}", m.ok),
                )?;
                ensure(
                    pl.ok == !blocked,
                    format!("{sys}: appending -> gives {} with blocking rules {blocked}", pl.ok),
                )?;
                n += 1;
                with_block += usize::from(blocked);
                with_nec2 += usize::from(nec2);
            }
        }
    }
    ensure(n >= 100, format!("only {n} fragments"))?;
    Ok(format!(
        "{n} fragments ({with_block} with 5_2/B25/nec2, {with_nec2} with nec2 where => also fails)"
    ))
}

fn hilbert_bridge() -> Outcome {
    use HilbertStep::*;
    let proofs = vec![
        (K, cut_sources().remove(1).1),
        (T, cut_sources().remove(3).1),
        (K4, cut_sources().remove(4).1),
        (K5, cut_sources().remove(5).1),
        (S4, HilbertProof::new(vec![axiom(AxiomName::T, &["p"]), Necessitation(0)])),
        (
            S5,
            HilbertProof::new(vec![
                axiom(AxiomName::Four, &["p"]),
                axiom(AxiomName::Five, &["q"]),
                taut("(box p > box box p) > ((~box q > box ~box q) > ((box p > box box p) & (~box q > box ~box q)))"),
                ModusPonens(0, 2),
                ModusPonens(1, 3),
                Necessitation(4),
            ]),
        ),
    ];
    for (sys, hp) in &proofs {
        let goal = hp.formulas().map_err(|e| e.to_string())?.pop().unwrap();
        let p = hilbert_to_hyperseq(hp, *sys).map_err(|e| format!("{sys}: {e}"))?;
        ensure(check_proof(&p, *sys).ok, format!("{sys}: translation does not check"))?;
        let img = hyper_image(&p.conclusion);
        let iff = Formula::and(Formula::implies(img.clone(), goal.clone()), Formula::implies(goal.clone(), img));
        ensure(
            matches!(prove_tautology(&iff), SearchOutcome::Found(_)),
            format!("{sys}: image of {} differs from {goal}", p.conclusion),
        )?;
    }
    Ok(format!("{} Hilbert proofs translated", proofs.len()))
}

/// Criteria that cannot hold for this calculus; see the README.
///
/// 7: `=> p || box p =>` is provable in K45 and S5 with a 5_2 whose premise
/// is `=> p || box p ->`. With 5_2 restricted to initial premises, a
/// hypersequent with two or more sequents, all `=>`, can only be derived
/// from hypersequents of the same kind through ew, merge, cut, 4r and the
/// propositional rules, and each of these keeps some single sequent valid on
/// its own. Neither `=> p` nor `box p =>` is valid, so no transformation can
/// restrict that 5_2 and keep the end.
const EXPECTED_FAILURES: &[usize] = &[7];

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("golden corpus", golden_corpus),
        ("negative schema suite", negative_schema),
        ("soundness oracle", soundness_oracle),
        ("T2 elimination", t2_elimination),
        ("regularization", regularization),
        ("standard extraction", standard_extraction),
        ("5_2 restriction", five_restriction),
        ("cut-formula reduction", cut_formula_reduction),
        ("cut elimination", cut_elimination),
        ("failure for B-systems", gamma_failure),
        ("sequent addition", f7_property),
        ("Hilbert bridge", hilbert_bridge),
    ];
    let mut failed = vec![];
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2}s): {msg}", k + 1),
            Err(msg) => {
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES, "failing criteria differ from the recorded ones");
}
