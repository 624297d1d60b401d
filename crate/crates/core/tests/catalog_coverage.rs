//! Every result the library claims to check is reachable from the identity
//! catalog or from an operation's formula id.

use std::collections::HashSet;

use mgt_core::families;
use mgt_core::ops::{self, Factor};
use mgt_core::optimizer;
use mgt_core::suite::identity_catalog;
use mgt_core::{int, ratio};

/// Result label and the catalog ids that check it.
const COVERAGE: &[(&str, &[&str])] = &[
    ("voltage from resistance", &["voltage-resistance-split"]),
    ("edge-sum tau", &["proptau-base-independence", "family-closed-form"]),
    ("canonical measure", &["mucan-total-mass"]),
    ("genus identity", &["genus-identity"]),
    ("two-term decomposition", &["lem2term", "rem2term"]),
    ("voltage power integrals", &["thmjpq2njpq-n0", "thmjpq2njpq-n1", "thmjpq2njpq-n2", "thmjpq2njpq-n3"]),
    ("orthogonality", &["lemorthogonality"]),
    ("tau as an integral", &["thmbasic"]),
    ("A equivalences", &["thmremain-equivalences", "apq-routes"]),
    ("global bounds", &["FMM1-bounds", "corbasic2"]),
    ("equal-length bounds", &["thmeqlength", "thmeqlength2"]),
    ("sum-R bounds", &["thmcorineqsumR4", "thm2term"]),
    ("parallel division", &["thmdouble", "thmdoubledivision", "lemdivisione", "thmdoubleimp-implication"]),
    ("subdivision", &["lemdivision1"]),
    ("immersion", &["thmmagnificent", "thmmaggen", "cormaggen1", "cormaggen2"]),
    ("tau-reducing construction", &["thm-smaller-tau-decrease"]),
    ("two-point union", &["thmtwopunion", "cor1twopunion", "cor2twopunion", "cor2twopunion2"]),
    ("edge length change", &["lemedgeext", "lemsuccessedgeext", "lem-diff-euler"]),
    ("bridgeless identity", &["thmbasic2"]),
    ("contraction", &["lemcontract1", "lemcontract2", "coradd-bridge-contraction"]),
    ("adding an edge, identifying points", &["coradding1", "coradding2"]),
    ("A under unions", &["thm-twopunion-Apq", "corlem-twopunion-Apq", "propAadditive", "additive"]),
    ("union tower", &["thm-twopunion2-tower"]),
    ("A closed forms", &["corpropAcircle", "propAtree", "propAbanana", "proplembanana", "lemApq"]),
];

#[test]
fn every_listed_result_has_a_catalog_entry() {
    let ids: HashSet<&str> = identity_catalog().iter().map(|i| i.id).collect();
    for (label, wanted) in COVERAGE {
        for id in *wanted {
            assert!(ids.contains(id), "{label}: `{id}` missing from the catalog");
        }
    }
}

#[test]
fn catalog_ids_are_unique_and_all_listed() {
    let mut seen = HashSet::new();
    for i in identity_catalog() {
        assert!(seen.insert(i.id), "duplicate id {}", i.id);
        assert!(!i.description.is_empty() && !i.statement.is_empty(), "{} lacks text", i.id);
    }
    let listed: HashSet<&str> = COVERAGE.iter().flat_map(|(_, ids)| ids.iter().copied()).collect();
    let unlisted: Vec<&str> = seen.iter().copied().filter(|id| !listed.contains(id)).collect();
    // the rest are structural checks (scaling, valence, bound suites)
    assert!(unlisted.len() <= 4, "unlisted ids: {unlisted:?}");
    assert!(seen.len() >= 44);
}

#[test]
fn operations_name_their_formula() {
    let d = families::diamond(&ratio(1, 5));
    let c = families::circle(&int(1));
    let results = vec![
        ops::delete_edge(&d, 4).unwrap(),
        ops::contract_edge(&d, 4).unwrap(),
        ops::identify_points(&d, 0, 3).unwrap(),
        ops::add_edge(&d, 0, 3, &int(1)).unwrap(),
        ops::union_one_point(&d, 0, &c, 0).unwrap(),
        ops::union_two_points(&d, &d, (0, 0), (3, 3)).unwrap(),
        ops::da_n(&d, 2).unwrap(),
        ops::immerse(&d, &vec![Factor::new(d.clone(), 0, 3); 5]).unwrap(),
        ops::c_tower(&d, 0, 3, 1).unwrap(),
        optimizer::tau_reducing_construction(&d, 0, 3, 1).unwrap(),
    ];
    let ids: HashSet<&str> = identity_catalog().iter().map(|i| i.id).collect();
    for r in results {
        assert!(!r.formula_id.is_empty());
        assert!(
            ids.iter().any(|id| id.starts_with(r.formula_id) || r.formula_id.starts_with(*id)),
            "formula `{}` has no catalog entry",
            r.formula_id
        );
        assert_eq!(r.prediction_holds(), Some(true), "{}", r.formula_id);
    }
}
