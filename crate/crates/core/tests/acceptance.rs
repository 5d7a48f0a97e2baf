//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use logos_core::bell::{ChshSetting, TSIRELSON_BOUND};
use logos_core::haar::{random_haar_basis, random_mixed_state, random_pure_state, random_unitary, rng_from_seed};
use logos_core::relations::{ContextFamily, StandardClass, DEFAULT_FAMILY_SEED, DEFAULT_HAAR_CONTEXTS};
use logos_core::state::{basis_projectors, computational_basis, fourier_basis};
use logos_core::{
    bell_state, build_power_graph, chsh_value, classify_entanglement, compare_with_standard, convex_mix,
    effective_related, enumerate_maximal_contexts, find_global_binary_valuation, fixtures, intensive_related,
    optimal_chsh, psa_from_state, reconstruct_state, sample_effective_valuation, trace_distance, Classification,
    Complex64, ComplexMatrix, DensityOperator, KsOutcome, PowerGraph, Projector, PureState, Tolerances,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn default_family(rho: &DensityOperator) -> ContextFamily {
    ContextFamily::default_for(rho, DEFAULT_HAAR_CONTEXTS, DEFAULT_FAMILY_SEED, &tol()).expect("default family")
}

fn max_entry_diff(m: &ComplexMatrix, expected: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in expected.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            worst = worst.max((m[(i, j)] - z).norm());
        }
    }
    worst
}

/// The printed 2×2 density matrix of `α|0⟩ + β|1⟩`.
fn printed_qubit(alpha: Complex64, beta: Complex64) -> Vec<Vec<Complex64>> {
    vec![
        vec![c(alpha.norm_sqr(), 0.0), alpha * beta.conj()],
        vec![alpha.conj() * beta, c(beta.norm_sqr(), 0.0)],
    ]
}

/// The printed 4×4 product matrix, entry by entry.
fn printed_product(a: Complex64, b: Complex64, a2: Complex64, b2: Complex64) -> Vec<Vec<Complex64>> {
    let (na, nb, na2, nb2) = (
        c(a.norm_sqr(), 0.0),
        c(b.norm_sqr(), 0.0),
        c(a2.norm_sqr(), 0.0),
        c(b2.norm_sqr(), 0.0),
    );
    let ab = a * b.conj();
    let ba = a.conj() * b;
    let ab2 = a2 * b2.conj();
    let ba2 = a2.conj() * b2;
    vec![
        vec![na * na2, na * ab2, ab * na2, ab * ab2],
        vec![na * ba2, na * nb2, ab * ba2, ab * nb2],
        vec![ba * na2, ba * ab2, nb * na2, nb * ab2],
        vec![ba * ba2, ba * nb2, nb * ba2, nb * nb2],
    ]
}

fn qubit(alpha: Complex64, beta: Complex64) -> PureState {
    PureState::new(vec![alpha, beta]).expect("normalized")
}

fn worked_example_matrices() -> Outcome {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst: f64 = 0.0;

    let rho_pure = DensityOperator::from_ket(&PureState::basis(2, 0));
    worst = worst.max(max_entry_diff(
        rho_pure.matrix(),
        &[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]],
    ));

    let qubit_case = DensityOperator::from_ket(&qubit(c(s, 0.0), c(0.0, s)));
    worst = worst.max(max_entry_diff(
        qubit_case.matrix(),
        &printed_qubit(c(s, 0.0), c(0.0, s)),
    ));

    let rho_mixed = DensityOperator::maximally_mixed(2);
    worst = worst.max(max_entry_diff(
        rho_mixed.matrix(),
        &[vec![c(0.5, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]],
    ));

    let instances = [
        (c(s, 0.0), c(s, 0.0), c(s, 0.0), c(s, 0.0)),
        (c(s, 0.0), c(s, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        (c(s, 0.0), c(0.0, s), c(0.5, 0.0), c(0.0, 0.75f64.sqrt())),
    ];
    for (a, b, a2, b2) in instances {
        let product = DensityOperator::from_ket(&qubit(a, b)).tensor(&DensityOperator::from_ket(&qubit(a2, b2)));
        worst = worst.max(max_entry_diff(product.matrix(), &printed_product(a, b, a2, b2)));
        // the same state from the joint vector αα'|00⟩ + αβ'|01⟩ + βα'|10⟩ + ββ'|11⟩
        let joint = DensityOperator::from_ket(&PureState::new(vec![a * a2, a * b2, b * a2, b * b2]).unwrap());
        worst = worst.max(product.matrix().max_abs_diff(joint.matrix()));
    }

    let (alpha, beta, alpha2, beta2) = (c(s, 0.0), c(s, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let (a, b, a2, b2) = (c(s, 0.0), c(-s, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    let first =
        DensityOperator::from_ket(&qubit(alpha, beta)).tensor(&DensityOperator::from_ket(&qubit(alpha2, beta2)));
    let second = DensityOperator::from_ket(&qubit(a, b)).tensor(&DensityOperator::from_ket(&qubit(a2, b2)));
    let rho_sep = convex_mix(&[(1.0 / 3.0, first), (2.0 / 3.0, second)]).unwrap();
    let p1 = printed_product(alpha, beta, alpha2, beta2);
    let p2 = printed_product(a, b, a2, b2);
    let expected_sep: Vec<Vec<Complex64>> = (0..4)
        .map(|i| (0..4).map(|j| p1[i][j] / 3.0 + p2[i][j] * (2.0 / 3.0)).collect())
        .collect();
    worst = worst.max(max_entry_diff(rho_sep.matrix(), &expected_sep));

    let h = c(0.5, 0.0);
    let z = c(0.0, 0.0);
    let expected_ent = vec![vec![h, z, z, h], vec![z, z, z, z], vec![z, z, z, z], vec![h, z, z, h]];
    worst = worst.max(max_entry_diff(bell_state().matrix(), &expected_ent));

    outcome(worst <= 1e-12, format!("max entry deviation {worst:.2e} (limit 1e-12)"))
}

fn classical_mixture() -> DensityOperator {
    let p00 = DensityOperator::diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    let p11 = DensityOperator::diagonal(&[0.0, 0.0, 0.0, 1.0]).unwrap();
    convex_mix(&[(0.5, p00), (0.5, p11)])
        .unwrap()
        .with_factors(vec![2, 2])
        .unwrap()
}

fn classification_triple() -> Outcome {
    let product = DensityOperator::diagonal(&[0.75, 0.25])
        .unwrap()
        .tensor(&DensityOperator::maximally_mixed(2));
    let cases = [
        ("bell", bell_state(), Classification::Strong),
        ("classical mixture", classical_mixture(), Classification::Weak),
        ("diag(3/4,1/4)⊗I/2", product, Classification::Separable),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, rho, expected) in cases {
        let got = classify_entanglement(&rho, &default_family(&rho), &tol()).map(|v| v.classification);
        let ok = matches!(got, Ok(ref g) if *g == expected);
        pass &= ok;
        parts.push(format!(
            "{name} → {}",
            got.map_or_else(|e| e.to_string(), |g| g.to_string())
        ));
    }
    outcome(pass, parts.join(", "))
}

fn implication_suite() -> Outcome {
    let t = tol();
    let mut rng = rng_from_seed(2024);
    let mut states = Vec::new();
    for k in 0..500 {
        states.push(random_mixed_state(&[2, 2], 1 + k % 4, &mut rng));
    }
    // locally rotated Bell states exercise the effective branch
    for _ in 0..40 {
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(2, &mut rng);
        states.push(bell_state().conjugate_by(&u.kron(&v)));
    }
    let mut counterexamples = 0;
    let mut effective_count = 0;
    let mut intensive_count = 0;
    for rho in &states {
        let family = ContextFamily::default_for(rho, DEFAULT_HAAR_CONTEXTS, DEFAULT_FAMILY_SEED, &t).unwrap();
        let intensive = intensive_related(rho, &t).unwrap().related;
        let effective = effective_related(rho, &family, &t).unwrap().related;
        intensive_count += usize::from(intensive);
        effective_count += usize::from(effective);
        if effective && !intensive {
            counterexamples += 1;
        }
    }
    outcome(
        counterexamples == 0 && effective_count > 0,
        format!(
            "{} states, {intensive_count} intensive, {effective_count} effective, {counterexamples} counterexamples",
            states.len()
        ),
    )
}

fn informationally_complete(d: usize) -> Vec<Projector> {
    let mut bases = vec![computational_basis(d), fourier_basis(d)];
    if d == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        bases.push(vec![
            PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap(),
            PureState::new(vec![c(s, 0.0), c(0.0, -s)]).unwrap(),
        ]);
    } else {
        for seed in 0..(d as u64 - 1) {
            bases.push(random_haar_basis(d, 900 + seed));
        }
    }
    bases.iter().flat_map(|b| basis_projectors(b)).collect()
}

fn psa_round_trip() -> Outcome {
    let t = tol();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in [2, 3] {
        let g = build_power_graph(informationally_complete(d), t.commutation).unwrap();
        let mut rng = rng_from_seed(40 + d as u64);
        for k in 0..100 {
            let rho = random_mixed_state(&[d], 1 + k % d, &mut rng);
            let psa = psa_from_state(&rho, &g, &t).unwrap();
            let rec = reconstruct_state(&psa).unwrap();
            worst = worst.max(trace_distance(rec.state.matrix(), rho.matrix()));
            count += 1;
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{count} states, max trace distance {worst:.2e} (limit 1e-8)"),
    )
}

fn ks_search() -> Outcome {
    let t = tol();
    let nodes: Vec<Projector> = fixtures::cabello18()
        .unwrap()
        .iter()
        .map(Projector::from_state)
        .collect();
    let g = build_power_graph(nodes, t.commutation).unwrap();
    let report = find_global_binary_valuation(&g, &t).unwrap();
    let exhausted = report.outcome == KsOutcome::Exhausted;

    let single = build_power_graph(basis_projectors(&computational_basis(4)), t.commutation).unwrap();
    let single_found = matches!(
        find_global_binary_valuation(&single, &t).unwrap().outcome,
        KsOutcome::Found { .. }
    );
    outcome(
        exhausted && report.parity.obstructed && report.resolving_contexts == 9 && single_found,
        format!(
            "cabello18: {} resolving contexts, exhausted={exhausted}, parity obstructed={}, {} decisions; single basis valuation={single_found}",
            report.resolving_contexts, report.parity.obstructed, report.stats.decisions
        ),
    )
}

fn chsh_suite() -> Outcome {
    let bell = optimal_chsh(&bell_state()).unwrap();
    let bell_ok =
        (bell.search_value - TSIRELSON_BOUND).abs() <= 1e-6 && (bell.formula_value - TSIRELSON_BOUND).abs() <= 1e-6;

    let mut rng = rng_from_seed(77);
    let mut worst_product: f64 = 0.0;
    for k in 0..200 {
        let a = random_mixed_state(&[2], 1 + k % 2, &mut rng);
        let b = random_mixed_state(&[2], 1 + (k / 2) % 2, &mut rng);
        let o = optimal_chsh(&a.tensor(&b)).unwrap();
        worst_product = worst_product.max(o.search_value.max(o.formula_value));
    }
    let product_ok = worst_product <= 2.0 + 1e-6;

    let w = std::f64::consts::FRAC_1_SQRT_2;
    let werner = convex_mix(&[(w, bell_state()), (1.0 - w, DensityOperator::maximally_mixed(4))]).unwrap();
    let o = optimal_chsh(&werner).unwrap();
    let werner_ok = (o.search_value - 2.0).abs() <= 1e-4 && (o.formula_value - 2.0).abs() <= 1e-4;

    outcome(
        bell_ok && product_ok && werner_ok,
        format!(
            "bell search {:.9} formula {:.9}; max product S {worst_product:.9}; werner search {:.9} formula {:.9}",
            bell.search_value, bell.formula_value, o.search_value, o.formula_value
        ),
    )
}

fn effective_statistics() -> Outcome {
    let t = tol();
    let samples = 10_000u64;
    let mut worst_p = 1.0f64;
    let mut failures = 0;
    for k in 0..20u64 {
        let d = 2 + (k % 3) as usize;
        let basis = random_haar_basis(d, 500 + k);
        let g = build_power_graph(basis_projectors(&basis), t.commutation).unwrap();
        let contexts = enumerate_maximal_contexts(&g, &t);
        let mut rng = rng_from_seed(600 + k);
        let rho = random_mixed_state(&[d], 2, &mut rng);
        let psa = psa_from_state(&rho, &g, &t).unwrap();
        let ctx = &contexts[0];
        let mut counts = vec![0u64; g.len()];
        for s in 0..samples {
            let v = sample_effective_valuation(&psa, ctx, k * 1_000_000 + s, &t).unwrap();
            counts[v.selected] += 1;
        }
        let cells: Vec<(f64, f64)> = ctx
            .nodes
            .iter()
            .map(|&i| (counts[i] as f64, psa.value(i) * samples as f64))
            .filter(|(_, e)| *e > 0.0)
            .collect();
        let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
        let df = (cells.len() - 1) as f64;
        let p = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
        worst_p = worst_p.min(p);
        if p < 0.01 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("20 contexts × {samples} samples, smallest p-value {worst_p:.4}, {failures} rejections at 0.01"),
    )
}

fn normalization_invariant() -> Outcome {
    let t = tol();
    let mut graphs: Vec<PowerGraph> = vec![
        build_power_graph(informationally_complete(2), t.commutation).unwrap(),
        build_power_graph(informationally_complete(3), t.commutation).unwrap(),
        build_power_graph(
            fixtures::cabello18()
                .unwrap()
                .iter()
                .map(Projector::from_state)
                .collect(),
            t.commutation,
        )
        .unwrap(),
    ];
    let mut nodes = basis_projectors(&computational_basis(4));
    nodes.extend(basis_projectors(&random_haar_basis(4, 3)));
    nodes.extend(basis_projectors(&fourier_basis(4)));
    graphs.push(build_power_graph(nodes, t.commutation).unwrap());

    let mut rng = rng_from_seed(8);
    let mut worst_ratio: f64 = 0.0;
    let mut checked = 0;
    for g in &graphs {
        let d = g.dim();
        let contexts = enumerate_maximal_contexts(g, &t);
        for k in 0..50 {
            let rho = if k % 2 == 0 {
                DensityOperator::from_ket(&random_pure_state(d, &mut rng))
            } else {
                random_mixed_state(&[d], 3, &mut rng)
            };
            let psa = psa_from_state(&rho, g, &t).unwrap();
            let defect = psa.max_normalization_defect(&contexts);
            worst_ratio = worst_ratio.max(defect / (d as f64 * 1e-9));
            checked += contexts.iter().filter(|c| c.resolves_identity).count();
        }
    }
    outcome(
        worst_ratio <= 1.0,
        format!(
            "{checked} context sums, worst defect/budget ratio {:.2e} (budget d·1e-9)",
            worst_ratio
        ),
    )
}

fn divergence_report() -> Outcome {
    let t = tol();
    let mut rng = rng_from_seed(99);
    let candidates = vec![
        DensityOperator::diagonal(&[0.75, 0.25]).unwrap(),
        random_mixed_state(&[2], 2, &mut rng),
        random_mixed_state(&[3], 3, &mut rng),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for rho in candidates {
        let joint = rho.tensor(&rho);
        let report = compare_with_standard(&joint, &default_family(&joint), &t).unwrap();
        let flagged = report
            .divergences
            .iter()
            .any(|d| d == "standard-separable but classified Weak");
        let ok = report.standard_class == StandardClass::Separable
            && report.classification == Classification::Weak
            && flagged;
        pass &= ok;
        parts.push(format!(
            "{}⊗{}: {:?}/{} flagged={flagged}",
            rho.dim(),
            rho.dim(),
            report.standard_class,
            report.classification
        ));
    }
    outcome(pass, parts.join(", "))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    // sanity anchor for the CHSH machinery used above
    assert!((chsh_value(&bell_state(), &ChshSetting::standard()).unwrap() - TSIRELSON_BOUND).abs() < 1e-9);

    let criteria: [Criterion; 9] = [
        (
            1,
            "worked-example matrices",
            Duration::from_secs(1),
            worked_example_matrices,
        ),
        (
            2,
            "classification triple",
            Duration::from_secs(5),
            classification_triple,
        ),
        (3, "effective ⇒ intensive", Duration::from_secs(120), implication_suite),
        (4, "PSA round trip", Duration::from_secs(60), psa_round_trip),
        (5, "KS non-colourability", Duration::from_secs(30), ks_search),
        (6, "CHSH optimum and bounds", Duration::from_secs(120), chsh_suite),
        (
            7,
            "effective-valuation statistics",
            Duration::from_secs(60),
            effective_statistics,
        ),
        (
            8,
            "normalization invariant",
            Duration::from_secs(60),
            normalization_invariant,
        ),
        (9, "divergence report", Duration::from_secs(60), divergence_report),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = result.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "criterion {id} [{name}]: {} ({}; {:.2}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
