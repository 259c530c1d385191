mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use common::fixtures::{lexicon, FIXTURES};
use common::generators::{random_dag, term_signature, SubtypeGen, TermGen};
use mglex::lexicon::Lexicon;
use mglex::logic::{presuppositions, tau_epsilon_rewrite, term_to_formula, Direction};
use mglex::reduction::{is_normal, normalize, Normalizer, Strategy};
use mglex::subtyping::{coercion_term, derive_subtype};
use mglex::terms::{alpha_eq, check_type, type_eq, type_of, Env, Type};

fn term_case(seed: u64) -> (mglex::terms::Signature, mglex::terms::Term, Type) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = term_signature(rng.gen_range(1..=4));
    let budget = rng.gen_range(1..=60);
    let mut g = TermGen::new(&sig, rng);
    let ty = if g.rng.gen_bool(0.6) { Type::prop() } else { g.ty(2) };
    let t = g.closed_at_most(&ty, budget, 200);
    (sig, t, ty)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_terms_are_well_typed(seed in any::<u64>()) {
        let (sig, t, ty) = term_case(seed);
        prop_assert!(t.size() <= 200);
        prop_assert!(type_eq(&type_of(&sig, &t).unwrap(), &ty));
    }

    #[test]
    fn normalization_preserves_type_and_is_strategy_independent(seed in any::<u64>()) {
        let (sig, t, ty) = term_case(seed);
        let lo = Normalizer::new(Strategy::LeftmostOutermost).with_limit(100_000).normalize(&t).unwrap();
        let ri = Normalizer::new(Strategy::RightmostInnermost).with_limit(100_000).normalize(&t).unwrap();
        prop_assert!(is_normal(&lo));
        prop_assert!(alpha_eq(&lo, &ri), "{lo} vs {ri}");
        prop_assert!(type_eq(&type_of(&sig, &lo).unwrap(), &ty));
        prop_assert!(alpha_eq(&normalize(&lo), &lo));
    }

    #[test]
    fn normal_propositions_round_trip_through_formulas(seed in any::<u64>()) {
        let (sig, t, ty) = term_case(seed);
        prop_assume!(ty.is_prop());
        let n = normalize(&t);
        let f = term_to_formula(&sig, &n).unwrap();
        prop_assert!(alpha_eq(&f.to_term(), &n), "{n}");
        let again = term_to_formula(&sig, &f.to_term()).unwrap();
        prop_assert_eq!(again.unicode(), f.unicode());
    }

    #[test]
    fn tau_epsilon_rewrite_preserves_types(seed in any::<u64>()) {
        let (sig, t, ty) = term_case(seed);
        let n = normalize(&t);
        for dir in [Direction::TauToEpsilon, Direction::EpsilonToTau] {
            let r = tau_epsilon_rewrite(&n, dir);
            prop_assert!(type_eq(&type_of(&sig, &r).unwrap(), &ty));
        }
        if ty.is_prop() {
            let mut consts = std::collections::BTreeSet::new();
            n.constants(&mut consts);
            // Each direction is inverted by the other on terms free of its target operator.
            for (there, back, target) in [
                (Direction::TauToEpsilon, Direction::EpsilonToTau, "epsilon"),
                (Direction::EpsilonToTau, Direction::TauToEpsilon, "tau"),
            ] {
                if consts.contains(target) {
                    continue;
                }
                let round = tau_epsilon_rewrite(&tau_epsilon_rewrite(&n, there), back);
                let f = term_to_formula(&sig, &normalize(&round)).unwrap().simplify();
                let g = term_to_formula(&sig, &n).unwrap().simplify();
                prop_assert_eq!(f.unicode(), g.unicode());
            }
        }
    }

    #[test]
    fn presuppositions_are_closed_propositions(seed in any::<u64>()) {
        let (sig, t, _) = term_case(seed);
        for p in presuppositions(&normalize(&t)) {
            prop_assert!(p.free_vars().is_empty());
            prop_assert!(type_of(&sig, &p).unwrap().is_prop());
        }
    }

    #[test]
    fn coercions_are_sound_and_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_dag(&mut rng, 6, 0.35);
        let mut g = SubtypeGen { sig: &sig, rng: &mut rng };
        let sub = g.ty(2);
        let sup = g.gen_super(&sub);
        let d = derive_subtype(&sig, &sub, &sup).unwrap();
        prop_assert!(d.is_valid(&sig));
        let c = coercion_term(&d, "u");
        prop_assert!(c.is_linear(), "{}", c.term);
        let env = Env::from([("u".to_string(), sub.clone())]);
        prop_assert!(type_eq(&check_type(&sig, &env, &c.term).unwrap(), &sup));
    }

    #[test]
    fn lexicons_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let sig = random_dag(&mut rng, n, 0.4);
        let doc = random_document(&sig, &mut rng);
        let lex = Lexicon::from_json(&doc.to_string()).unwrap();
        let again = Lexicon::from_json(&lex.to_json()).unwrap();
        prop_assert_eq!(again.to_document(), lex.to_document());
        prop_assert_eq!(again.len(), lex.len());
    }
}

fn random_document(sig: &mglex::terms::Signature, rng: &mut ChaCha8Rng) -> serde_json::Value {
    let sorts: Vec<String> = sig.sorts().filter(|s| *s != "t").map(String::from).collect();
    let mut constants = Vec::new();
    for s in &sorts {
        constants.push(json!({"name": format!("a_{s}"), "type": s}));
        constants.push(json!({"name": format!("p_{s}"), "type": format!("{s} -> t")}));
    }
    for (i, s) in sorts.iter().enumerate() {
        let other = &sorts[(i + 1) % sorts.len()];
        constants.push(json!({"name": format!("g_{s}"), "type": format!("{s} -> {other}")}));
    }
    let flag = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { "flexible" } else { "rigid" };
    let mut entries = Vec::new();
    for (i, s) in sorts.iter().enumerate() {
        let mut optional = Vec::new();
        if rng.gen_bool(0.7) {
            optional.push(json!({"label": format!("m{i}"), "term": format!("g_{s}"), "flag": flag(rng)}));
        }
        for c in sig.base_coercions().iter().filter(|c| &c.from == s) {
            if rng.gen_bool(0.5) {
                optional.push(json!({"label": c.name, "term": c.name, "flag": flag(rng)}));
            }
        }
        entries.push(json!({
            "word": format!("w{i}"),
            "principal": format!("a_{s}"),
            "optional": optional,
            "identity_flag": flag(rng),
        }));
        entries.push(json!({"word": format!("v{i}"), "principal": format!("p_{s}")}));
    }
    json!({
        "schema_version": 1,
        "sorts": sorts,
        "base_coercions": sig.base_coercions(),
        "constants": constants,
        "entries": entries,
    })
}

#[test]
fn fixture_lexicons_round_trip() {
    for name in FIXTURES.iter().chain(&["chain3"]) {
        let lex = lexicon(name);
        let again = Lexicon::from_json(&lex.to_json()).unwrap();
        assert_eq!(again.to_document(), lex.to_document(), "{name}");
    }
}
