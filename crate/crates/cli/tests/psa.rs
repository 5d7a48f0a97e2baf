mod common;

use common::{conforms, fails_with, fixture, json, ok, run};

fn potentia(v: &serde_json::Value) -> Vec<f64> {
    v["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["potentia"].as_f64().unwrap())
        .collect()
}

#[test]
fn maximally_mixed_qubit_gives_halves() {
    let v = json([
        "psa".as_ref(),
        fixture("mixed.json").as_os_str(),
        fixture("qubit_basis.json").as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    for p in potentia(&v) {
        assert!((p - 0.5).abs() < 1e-12);
    }
    assert_eq!(v["contexts"][0]["resolves_identity"], true);
    conforms(&v, "psa");
}

#[test]
fn bell_state_on_product_basis() {
    let v = json([
        "psa".as_ref(),
        fixture("bell.json").as_os_str(),
        fixture("product_basis_2x2.json").as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    let expected = [0.5, 0.0, 0.0, 0.5];
    for (p, e) in potentia(&v).iter().zip(expected) {
        assert!((p - e).abs() < 1e-12, "{p} vs {e}");
    }
    assert!(v["max_normalization_defect"].as_f64().unwrap() < 1e-12);
    conforms(&v, "psa");
}

#[test]
fn csv_rows_carry_context_sums() {
    let text = ok([
        "psa".as_ref(),
        fixture("bell.json").as_os_str(),
        fixture("product_basis_2x2.json").as_os_str(),
        "--format".as_ref(),
        "csv".as_ref(),
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "node_index,vector_fingerprint,potentia,context,context_sum");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].ends_with(",0.5,0,1.0"), "{}", lines[1]);
}

#[test]
fn dimension_mismatch_exits_3() {
    fails_with(
        &run([
            "psa".as_ref(),
            fixture("bell.json").as_os_str(),
            fixture("qubit_basis.json").as_os_str(),
        ]),
        3,
    );
}

#[test]
fn non_unit_vector_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("long.json");
    std::fs::write(&path, "[[[1,0],[1,0]]]").unwrap();
    fails_with(
        &run(["psa".as_ref(), fixture("mixed.json").as_os_str(), path.as_os_str()]),
        3,
    );
}
