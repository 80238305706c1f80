mod common;

use proptest::prelude::*;

use hyperseq::calculus::{RuleId, SystemId};
use hyperseq::checker::{check_proof, proof_from_str, proof_to_string};
use hyperseq::search::{prove, SearchConfig, SearchOutcome};
use hyperseq::semantics::valid_in;
use hyperseq::syntax::{hyper_image, parse_formula, parse_hypersequent, print_formula, Sort};
use hyperseq::transform::{atomize_initials, eliminate_t2, regularize};

fn system() -> impl Strategy<Value = SystemId> {
    prop::sample::select(SystemId::ALL.to_vec())
}

fn sort() -> impl Strategy<Value = Sort> {
    prop_oneof![Just(Sort::Plain), Just(Sort::Modal)]
}

fn grown() -> impl Strategy<Value = (SystemId, hyperseq::checker::Proof)> {
    (system(), sort(), common::formula(), common::formula(), common::ops(30))
        .prop_map(|(sys, s, a, b, ops)| (sys, common::grow(sys, s, &a, &ops, &b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn formula_print_parse_round_trip(a in common::formula()) {
        prop_assert_eq!(parse_formula(&print_formula(&a)).unwrap(), a);
    }

    #[test]
    fn hypersequent_print_parse_round_trip((_, p) in grown()) {
        let h = &p.conclusion;
        prop_assert_eq!(&parse_hypersequent(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn grown_proofs_check((sys, p) in grown()) {
        let r = check_proof(&p, sys);
        prop_assert!(r.ok, "{:?}", r.first_failure());
    }

    #[test]
    fn grown_proofs_are_sound((sys, p) in grown()) {
        let img = hyper_image(&p.conclusion);
        prop_assume!(img.atoms().len() <= 2);
        prop_assert!(valid_in(&img, sys, 2).is_valid(), "{} in {}", p.conclusion, sys);
    }

    #[test]
    fn proof_file_round_trip((_, p) in grown()) {
        let text = proof_to_string(&p);
        let q = proof_from_str(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(proof_to_string(&q), text);
    }

    #[test]
    fn atomization_keeps_end((sys, p) in grown()) {
        let q = atomize_initials(&p).unwrap();
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(check_proof(&q, sys).ok);
        let atomic = q.paths_where(|n| {
            n.rule().is_some_and(|r| r.arity() == 0)
                && (n.seq(0).sort == Sort::Modal || n.seq(0).ante.iter().any(|a| a.degree() > 0))
        });
        prop_assert!(atomic.is_empty());
    }

    #[test]
    fn t2_elimination_on_t_and_s4(s in sort(), a in common::formula(), b in common::formula(), ops in common::ops(30), s4 in any::<bool>()) {
        let sys = if s4 { SystemId::S4 } else { SystemId::T };
        let p = common::grow(sys, s, &a, &ops, &b);
        let q = eliminate_t2(&p, sys).unwrap();
        prop_assert_eq!(q.count_rule(RuleId::T2), 0);
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(check_proof(&q, sys).ok);
    }

    #[test]
    fn regularization_in_alpha(s in sort(), a in common::formula(), b in common::formula(), ops in common::ops(30), k in 0usize..6) {
        use SystemId::*;
        let sys = [K, D, T, K4, KD4, S4][k];
        let p = common::grow(sys, s, &a, &ops, &b);
        let q = regularize(&p, sys).unwrap();
        prop_assert_eq!(q.count_rule(RuleId::FourR), 0);
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(check_proof(&q, sys).ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_results_check_and_are_sound(sys in system(), s in sort(), a in common::formula(), b in common::formula(), ops in common::ops(12)) {
        let p = common::grow(sys, s, &a, &ops, &b);
        let cfg = SearchConfig { node_budget: 5_000, ..SearchConfig::for_system(sys).depth(8) };
        if let SearchOutcome::Found(q) = prove(&p.conclusion, sys, &cfg) {
            prop_assert!(q.is_cut_free());
            prop_assert!(check_proof(&q, sys).ok);
            prop_assert_eq!(&q.conclusion, &p.conclusion);
        }
    }
}
