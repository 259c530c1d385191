mod common;

use common::fixtures::{lexicon, readings, tree, tree_ids, FIXTURES};
use mglex::assembly::assemble_report;
use mglex::logic::term_to_formula;

const COUNTS: &[(&str, &str, usize)] = &[
    ("montague", "some_club_defeated_leeds", 1),
    ("sample", "liverpool_is_vast", 1),
    ("sample", "liverpool_is_vast_and_voted", 1),
    ("sample", "liverpool_voted_and_won", 0),
    ("sample", "liverpool_won", 1),
    ("sample", "liverpool_won_and_won", 1),
    ("sample", "the_book_is_heavy_and_interesting", 1),
    ("sample", "the_town_is_vast", 1),
    ("sample", "the_town_voted_and_won", 0),
    ("determiners", "the_dog_barks", 1),
    ("determiners", "every_dog_barks", 1),
    ("determiners", "some_cat_barks", 1),
    ("determiners", "most_dogs_bark", 1),
    ("determiners", "a_cat_chases_the_dog", 1),
    ("determiners", "the_owner_of_the_dog_barks", 1),
    ("determiners", "the_animal_barks", 1),
    ("determiners", "the_chair_barks", 0),
    ("ontology", "socrates_runs", 1),
    ("ontology", "fido_runs", 1),
    ("ontology", "socrates_thinks", 1),
    ("ontology", "fido_thinks", 0),
    ("ontology", "socrates_thinks_and_runs", 1),
    ("fictive", "path_gr3_descends", 1),
    ("deverbals", "the_building_took_two_years", 1),
    ("deverbals", "the_building_is_tall", 1),
    ("deverbals", "the_building_took_two_years_and_is_tall", 0),
    ("deverbals", "the_signature_took_a_minute_and_is_illegible", 1),
    ("plurals", "keith_met", 0),
    ("plurals", "keith_and_john_met", 1),
    ("plurals", "the_student_met", 0),
    ("plurals", "the_students_met", 1),
    ("plurals", "the_committee_met", 1),
    ("plurals", "the_committees_met", 3),
    ("plurals", "the_students_wrote_a_paper", 1),
    ("plurals", "the_students_wrote_three_papers", 1),
];

#[test]
fn every_fixture_tree_has_a_recorded_count() {
    for lex in FIXTURES {
        for id in tree_ids(lex) {
            assert!(COUNTS.iter().any(|(l, i, _)| *l == lex && *i == id), "{lex}/{id} has no golden count");
        }
    }
}

#[test]
fn reading_counts() {
    for (lex, id, n) in COUNTS {
        assert_eq!(readings(lex, id).len(), *n, "{lex}/{id}");
    }
}

#[test]
fn readings_are_well_typed_propositions() {
    for (lex_name, id, _) in COUNTS {
        let lex = lexicon(lex_name);
        for r in readings(lex_name, id) {
            assert!(r.ty.is_prop(), "{lex_name}/{id}");
            assert_eq!(mglex::terms::type_of(&lex.signature, &r.logical_form).unwrap(), r.ty);
            term_to_formula(&lex.signature, &r.logical_form).unwrap();
        }
    }
}

#[test]
fn committees_readings_use_three_distinct_coercions() {
    let mut labels: Vec<Vec<String>> = readings("plurals", "the_committees_met")
        .iter()
        .map(|r| r.labels().into_iter().map(String::from).collect())
        .collect();
    labels.sort();
    let flat: Vec<String> = labels.concat();
    for l in ["m_cover", "m_dist", "m_union"] {
        assert!(flat.iter().any(|x| x == l), "missing {l} in {flat:?}");
    }
}

#[test]
fn vast_and_voted_term() {
    let lex = lexicon("sample");
    let r = &readings("sample", "liverpool_is_vast_and_voted")[0];
    assert_eq!(
        term_to_formula(&lex.signature, &r.logical_form).unwrap().unicode(),
        "vast(t3(liverpool)) ∧ voted(t2(liverpool))"
    );
    let mut labels = r.labels();
    labels.sort();
    assert_eq!(labels, ["t2", "t3"]);
}

#[test]
fn definites_carry_presuppositions() {
    let r = &readings("determiners", "the_owner_of_the_dog_barks")[0];
    assert_eq!(r.presuppositions.len(), 2);
}

#[test]
fn assembly_is_deterministic() {
    for (lex_name, id, _) in COUNTS {
        let lex = lexicon(lex_name);
        let t = tree(lex_name, id);
        let a = assemble_report(&lex, &t).unwrap();
        let b = assemble_report(&lex, &t).unwrap();
        let key = |x: &mglex::assembly::Assembly| {
            x.readings.iter().map(|r| (r.logical_form.to_string(), r.trace.clone())).collect::<Vec<_>>()
        };
        assert_eq!(key(&a), key(&b), "{lex_name}/{id}");
    }
}
