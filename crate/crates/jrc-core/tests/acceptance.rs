//! Acceptance suite: runs all ten criteria, prints one pass/fail line per
//! criterion, and asserts the expected outcome pattern.
//!
//! Criteria 1 and 4 are genuine failures of the published reference data
//! against this implementation's cross-validated numbers (see the validation
//! module docs); the suite asserts they fail *for the frozen, understood
//! reason* — any drift in their measured values is itself a regression.

use std::time::Instant;

use jrc_core::validation::{
    run_criterion, runtime_budget_seconds, table2_report, Table2Target, CRITERION_IDS,
};

/// Criteria that fail honestly: the published values they compare against
/// disagree with the published formulas (1) or with measured behaviour (4).
const EXPECTED_FAILURES: [usize; 2] = [1, 4];

#[test]
fn acceptance_criteria() {
    let seed = 12345;
    let mut all_ok = true;
    for id in CRITERION_IDS {
        let started = Instant::now();
        let outcome = run_criterion(id, seed).unwrap_or_else(|e| {
            panic!("criterion {id} errored instead of reporting an outcome: {e}")
        });
        let elapsed = started.elapsed().as_secs_f64();
        println!(
            "criterion {:02} {} {} ({elapsed:.1}s)",
            outcome.id,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.name
        );
        for d in &outcome.details {
            println!("    {d}");
        }

        let expected_pass = !EXPECTED_FAILURES.contains(&id);
        if outcome.passed != expected_pass {
            all_ok = false;
            println!(
                "    ^ UNEXPECTED: criterion {id} should {}",
                if expected_pass {
                    "pass"
                } else {
                    "fail (known discrepancy)"
                }
            );
        }
        if let Some(budget) = runtime_budget_seconds(id) {
            assert!(
                elapsed < budget,
                "criterion {id} took {elapsed:.1}s, over its {budget:.0}s budget"
            );
        }

        match id {
            1 => check_criterion_1_frozen(),
            4 => check_criterion_4_frozen(&outcome.details),
            _ => {}
        }
    }
    assert!(all_ok, "criterion outcomes deviated from the frozen pattern");
}

/// Criterion 1: the computed Table 2 differences are pinned so any numerical
/// drift is caught, independent of the pass/fail bookkeeping.
fn check_criterion_1_frozen() {
    let report = table2_report().expect("table 2 report");

    let frozen_row1 = [
        (8usize, Some(8.358602981e-4)),
        (16, Some(3.517200397e-7)),
        (32, None), // double-precision noise; bounded, not pinned
    ];
    let frozen_row2 = [
        (8usize, Some(3.410028651e-3)),
        (16, Some(1.854243495e-6)),
        (32, None),
    ];
    for (cells, frozen) in [
        (&report.rcsi_vs_no_constraint, frozen_row1),
        (&report.approx_vs_exact_single_side, frozen_row2),
    ] {
        for (cell, (m, pinned)) in cells.iter().zip(frozen) {
            assert_eq!(cell.m, m);
            match pinned {
                Some(v) => assert!(
                    (cell.computed / v - 1.0).abs() < 1e-6,
                    "Table 2 computed difference drifted at M={m}: {} vs frozen {v}",
                    cell.computed
                ),
                None => {
                    assert!(matches!(cell.target, Table2Target::Below(b) if cell.computed < b))
                }
            }
        }
    }

    let pattern: Vec<bool> = report
        .rcsi_vs_no_constraint
        .iter()
        .chain(&report.approx_vs_exact_single_side)
        .map(|c| c.passes)
        .collect();
    assert_eq!(
        pattern,
        vec![true, false, true, false, false, true],
        "Table 2 pass/fail cells changed"
    );
}

/// Criterion 4: iteration totals over the fixed seeds 0..49 are pinned —
/// they are a pure function of the generator's RNG layout.
fn check_criterion_4_frozen(details: &[String]) {
    for frozen in [
        "total_iterations=136677",
        "total_iterations=298283",
        "total_iterations=30217614",
    ] {
        assert!(
            details.iter().any(|d| d.contains(frozen)),
            "frozen iteration total {frozen} missing from criterion 4 details: {details:?}"
        );
    }
    assert!(details[0].contains("=> pass"), "{:?}", details[0]);
    assert!(details[1].contains("=> pass"), "{:?}", details[1]);
    assert!(details[2].contains("=> FAIL"), "{:?}", details[2]);
}
