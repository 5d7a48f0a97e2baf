mod common;

use common::{conforms, fails_with, fixture, json, ok, run};

#[test]
fn cabello_set_has_no_valuation() {
    let text = ok(["ks".as_ref(), fixture("cabello18.json").as_os_str()]);
    assert!(text.contains("result: no global binary valuation"), "{text}");
    assert!(text.contains("9 resolve the identity"));
    assert!(text.contains("parity check: obstructed"));
}

#[test]
fn single_basis_has_a_valuation() {
    let v = json([
        "ks".as_ref(),
        fixture("single_basis.json").as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    assert_eq!(v["outcome"]["kind"], "found");
    let values: Vec<u64> = v["outcome"]["valuation"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(values.iter().sum::<u64>(), 1);
    conforms(&v, "ks");
}

#[test]
fn json_report_conforms_to_schema() {
    let v = json([
        "ks".as_ref(),
        fixture("cabello18.json").as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    assert_eq!(v["outcome"]["kind"], "exhausted");
    assert_eq!(v["resolving_contexts"], 9);
    conforms(&v, "ks");
}

#[test]
fn mixed_dimensions_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    std::fs::write(&path, "[[[1,0],[0,0]],[[1,0],[0,0],[0,0]]]").unwrap();
    fails_with(&run(["ks".as_ref(), path.as_os_str()]), 3);
}

#[test]
fn set_without_resolving_context_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lonely.json");
    std::fs::write(&path, "[[[1,0],[0,0],[0,0]]]").unwrap();
    fails_with(&run(["ks".as_ref(), path.as_os_str()]), 4);
}

#[test]
fn csv_format_is_a_usage_error() {
    fails_with(
        &run([
            "ks".as_ref(),
            fixture("single_basis.json").as_os_str(),
            "--format".as_ref(),
            "csv".as_ref(),
        ]),
        4,
    );
}
