//! Acceptance gate: one line per numbered criterion, PASS or FAIL with the
//! reason, and a nonzero exit code if anything fails or overruns its budget.
//!
//! Every expectation here is embedded directly in this file on purpose, as
//! an independent copy of what the unit and integration suites derive, so
//! the gate does not share fixtures with the code under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ncnet_core::algebra::arith::gcd;
use ncnet_core::algebra::factor::{min_pow_at_least, partner_modulus, radical_quotient};
use ncnet_core::algebra::Alphabet;
use ncnet_core::build::counts::node_count_breakdown;
use ncnet_core::build::families::{build_n0, build_n1, build_n2, build_n3};
use ncnet_core::build::n4::{build_n4, n4_components, Component};
use ncnet_core::codes::fractional::{n1_fractional, n3_fractional};
use ncnet_core::codes::n4::n4_solution;
use ncnet_core::codes::nonlinear::{n2_nonlinear, n3_nonlinear};
use ncnet_core::codes::perm_family::PermutationFamily;
use ncnet_core::net::code::Code;
use ncnet_core::net::network::NetworkSpec;
use ncnet_core::net::property::check_property_p;
use ncnet_core::net::verify::{verify_exhaustive, verify_linear_basis, Verdict, VerifyOptions};
use ncnet_core::search::{
    enumerate_all_codes, find_p_witness, search_p_structured, search_scalar_linear,
    EnumerationOutcome, SearchOptions, SearchOutcome,
};

macro_rules! expect {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type CheckResult = Result<(), String>;

fn expect_solution(
    net: &NetworkSpec,
    code: &Code,
    assignments: u64,
    workers: usize,
    what: &str,
) -> CheckResult {
    let opts = VerifyOptions { workers, ..VerifyOptions::default() };
    match verify_exhaustive(net, code, &opts) {
        Ok(Verdict::Solution { assignments_checked }) => {
            expect!(
                assignments_checked == assignments,
                "{what}: checked {assignments_checked} assignments, expected {assignments}"
            );
            Ok(())
        }
        Ok(other) => Err(format!("{what}: expected a solution, got {other:?}")),
        Err(e) => Err(format!("{what}: verification error: {e}")),
    }
}

/// Node totals and per-part splits of the composite union at the three
/// published sizes.
fn composite_node_totals() -> CheckResult {
    let cases: [(u64, u64, &[u64]); 3] = [
        (6, 97, &[53, 44]),
        (27, 256, &[15, 27, 35, 119, 60]),
        (100, 1691, &[19, 35, 627, 438, 220, 352]),
    ];
    for (m, total, split) in cases {
        let net = build_n4(m).map_err(|e| format!("build_n4({m}): {e}"))?;
        expect!(
            net.nodes.len() as u64 == total,
            "build_n4({m}) has {} nodes, expected {total}",
            net.nodes.len()
        );
        let breakdown = node_count_breakdown(m).map_err(|e| e.to_string())?;
        let counts: Vec<u64> = breakdown.iter().map(|(_, n)| *n).collect();
        expect!(counts == split, "node split for m={m} is {counts:?}, expected {split:?}");
    }
    Ok(())
}

/// Part lists at the three published sizes plus the arithmetic helpers that
/// generate them.
fn composite_part_lists() -> CheckResult {
    let expected_6 = vec![Component::N2 { m: 2, w: 3 }, Component::N2 { m: 3, w: 2 }];
    let expected_27 = vec![
        Component::N1 { m: 2 },
        Component::N1 { m: 5 },
        Component::N1 { m: 7 },
        Component::N2 { m: 27, w: 1 },
        Component::N3 { m1: 3, m2: 9 },
    ];
    let expected_100 = vec![
        Component::N1 { m: 3 },
        Component::N1 { m: 7 },
        Component::N2 { m: 4, w: 25 },
        Component::N2 { m: 25, w: 4 },
        Component::N3 { m1: 2, m2: 50 },
        Component::N3 { m1: 5, m2: 80 },
    ];
    for (m, expected) in [(6, expected_6), (27, expected_27), (100, expected_100)] {
        let parts = n4_components(m).map_err(|e| e.to_string())?;
        expect!(parts == expected, "part list for m={m} is {parts:?}, expected {expected:?}");
    }
    expect!(radical_quotient(100).map_err(|e| e.to_string())? == 10, "radical_quotient(100) != 10");
    expect!(min_pow_at_least(2, 10) == 4, "min_pow_at_least(2, 10) != 4");
    expect!(min_pow_at_least(5, 10) == 2, "min_pow_at_least(5, 10) != 2");
    expect!(partner_modulus(100, 0).map_err(|e| e.to_string())? == 50, "partner_modulus(100, 0) != 50");
    expect!(partner_modulus(100, 1).map_err(|e| e.to_string())? == 80, "partner_modulus(100, 1) != 80");
    Ok(())
}

/// Both permutation-family tables, cell for cell via their CSV layout.
fn permutation_tables() -> CheckResult {
    let shift_expected = "\
a,pi_2(a),pi_1(a),3pi_3(a),3pi_2(a),3pi_1(a)
0,0,0,0,0,0
1,1,1,3,3,3
2,2,2,6,6,6
3,3,3,9,9,9
4,4,5,0,0,3
5,5,6,3,3,6
6,6,7,6,6,9
7,7,4,9,9,0
8,9,8,0,3,0
9,10,9,3,6,3
10,11,10,6,9,6
11,8,11,9,0,9
";
    let fam = PermutationFamily::shift_family(4, 3).map_err(|e| e.to_string())?;
    expect!(fam.carrier() == 12, "shift family carrier is {}, expected 12", fam.carrier());
    let got = fam.to_csv();
    expect!(got == shift_expected, "stratified-shift table mismatch:\n{got}");

    let digit_expected = "\
a,pi_1(a),12pi_2(a),2pi_1(a)
0,0,0,0
1,4,4,0
2,1,0,2
3,5,4,2
4,2,0,4
5,6,4,4
6,3,0,6
7,7,4,6
";
    let fam = PermutationFamily::digit_family(2, 12).map_err(|e| e.to_string())?;
    expect!(fam.carrier() == 8, "digit family carrier is {}, expected 8", fam.carrier());
    let got = fam.to_csv();
    expect!(got == digit_expected, "digit-rotation table mismatch:\n{got}");
    Ok(())
}

/// The two nonlinear designs verify exhaustively at the pinned sizes.
fn nonlinear_solutions() -> CheckResult {
    let net = build_n2(2, 2).map_err(|e| e.to_string())?;
    let code = n2_nonlinear(2, 2).map_err(|e| e.to_string())?;
    expect_solution(&net, &code, 16384, 1, "n2_nonlinear(2,2) over 4^7 assignments")?;

    let net = build_n3(2, 2).map_err(|e| e.to_string())?;
    let code = n3_nonlinear(2, 2).map_err(|e| e.to_string())?;
    expect_solution(&net, &code, 1024, 1, "n3_nonlinear(2,2) over 4^5 assignments")?;
    Ok(())
}

/// The fractional designs hit their stated dimensions and verify by basis
/// and, where feasible, exhaustively with the same verdict.
fn fractional_solutions() -> CheckResult {
    let net = build_n1(2).map_err(|e| e.to_string())?;
    let code = n1_fractional(2, 2).map_err(|e| e.to_string())?;
    expect!(
        code.params.k == 5 && code.params.n == 6,
        "n1_fractional(2,2) is a ({},{}) code, expected (5,6)",
        code.params.k,
        code.params.n
    );
    let basis = verify_linear_basis(&net, &code).map_err(|e| e.to_string())?;
    expect!(
        basis == Verdict::Solution { assignments_checked: 15 },
        "n1_fractional(2,2) basis verdict: {basis:?}"
    );
    expect_solution(&net, &code, 1 << 15, 1, "n1_fractional(2,2) over 2^15 assignments")?;
    let exhaustive = verify_exhaustive(&net, &code, &VerifyOptions::default())
        .map_err(|e| e.to_string())?;
    expect!(
        basis.is_solution() == exhaustive.is_solution(),
        "basis and exhaustive verdicts disagree"
    );

    let net = build_n3(2, 2).map_err(|e| e.to_string())?;
    let code = n3_fractional(2, 2, 2).map_err(|e| e.to_string())?;
    expect!(
        code.params.k == 10 && code.params.n == 11,
        "n3_fractional(2,2,2) is a ({},{}) code, expected (10,11)",
        code.params.k,
        code.params.n
    );
    let basis = verify_linear_basis(&net, &code).map_err(|e| e.to_string())?;
    expect!(
        basis == Verdict::Solution { assignments_checked: 50 },
        "n3_fractional(2,2,2) basis verdict: {basis:?}"
    );
    Ok(())
}

/// The three characterization grids: a code is found exactly where the
/// modulus arithmetic says one exists, and exhaustion certifies the rest.
fn characterization_grids() -> CheckResult {
    let opts = SearchOptions::default();
    let run = |net: &NetworkSpec, n: u64, label: &str, solvable: bool| -> CheckResult {
        let out = search_scalar_linear(net, &Alphabet::ring(n), &opts)
            .map_err(|e| format!("{label}: {e}"))?;
        match &out {
            SearchOutcome::Found { value, .. } => {
                expect!(solvable, "{label}: found a code where none should exist");
                let verdict = verify_exhaustive(net, value, &VerifyOptions::default())
                    .map_err(|e| format!("{label}: {e}"))?;
                expect!(verdict.is_solution(), "{label}: found code fails verification");
            }
            SearchOutcome::Exhausted { .. } => {
                expect!(!solvable, "{label}: exhausted where a code should exist");
            }
            SearchOutcome::Capped { space, cap } => {
                return Err(format!("{label}: capped at {cap} with space {space}"));
            }
        }
        Ok(())
    };
    for m in [2u64, 3, 4] {
        let net = build_n1(m).map_err(|e| e.to_string())?;
        for n in 2..=5u64 {
            run(&net, n, &format!("n1 m={m} n={n}"), gcd(n, m) == 1)?;
        }
    }
    for m in [2u64, 3] {
        for w in [1u64, 2] {
            let net = build_n2(m, w).map_err(|e| e.to_string())?;
            for n in 2..=4u64 {
                run(&net, n, &format!("n2 m={m} w={w} n={n}"), m % n == 0)?;
            }
        }
    }
    for m1 in [2u64, 3] {
        for m2 in [2u64, 3] {
            let net = build_n3(m1, m2).map_err(|e| e.to_string())?;
            for n in 2..=5u64 {
                run(&net, n, &format!("n3 m1={m1} m2={m2} n={n}"), gcd(n, gcd(m1, m2)) == 1)?;
            }
        }
    }
    Ok(())
}

/// Every binary solution of the base gadget carries a group-translate
/// witness, and the structured search certifies the two unsolvable sizes of
/// the tap-receiver family.
fn witness_oracle_equivalence() -> CheckResult {
    let opts = SearchOptions::default();
    let net = build_n0(2).map_err(|e| e.to_string())?;
    let (codes, space) = match enumerate_all_codes(&net, 2, &opts).map_err(|e| e.to_string())? {
        EnumerationOutcome::Complete { codes, space } => (codes, space),
        EnumerationOutcome::Capped { space, cap } => {
            return Err(format!("enumeration capped at {cap} with space {space}"));
        }
    };
    expect!(space == 1_048_576, "candidate space is {space}, expected 1048576");
    expect!(!codes.is_empty(), "no binary solutions found on the base gadget");
    for (i, code) in codes.iter().enumerate() {
        let witness = match find_p_witness(&net, code, &opts).map_err(|e| e.to_string())? {
            SearchOutcome::Found { value, .. } => value,
            other => return Err(format!("solution {i} of {}: no witness ({other:?})", codes.len())),
        };
        let ok = check_property_p(&net, code, &witness).map_err(|e| e.to_string())?;
        expect!(ok, "witness for solution {i} fails the structural check");
    }

    let tap = build_n1(2).map_err(|e| e.to_string())?;
    for size in [2u64, 4] {
        let out = search_p_structured(&tap, size, &opts).map_err(|e| e.to_string())?;
        expect!(
            out.is_exhausted(),
            "structured search at size {size} should exhaust, got {out:?}"
        );
    }
    Ok(())
}

/// The composite design at size 4: each part verifies on its own network
/// and the merged code verifies on the merged network.
fn composite_solution() -> CheckResult {
    let parts = n4_components(4).map_err(|e| e.to_string())?;
    let expected = vec![Component::N2 { m: 4, w: 1 }, Component::N3 { m1: 2, m2: 2 }];
    expect!(parts == expected, "part list for m=4 is {parts:?}, expected {expected:?}");

    let net = build_n2(4, 1).map_err(|e| e.to_string())?;
    let code = n2_nonlinear(4, 1).map_err(|e| e.to_string())?;
    expect_solution(&net, &code, 4096, 1, "n2_nonlinear(4,1) over 4^6 assignments")?;

    let net = build_n3(2, 2).map_err(|e| e.to_string())?;
    let code = n3_nonlinear(2, 2).map_err(|e| e.to_string())?;
    expect_solution(&net, &code, 1024, 1, "n3_nonlinear(2,2) over 4^5 assignments")?;

    let union = build_n4(4).map_err(|e| e.to_string())?;
    let combined = n4_solution(4).map_err(|e| e.to_string())?;
    expect_solution(&union, &combined, 1 << 22, 4, "n4_solution(4) over 4^11 assignments")?;
    Ok(())
}

fn run_criterion(
    number: usize,
    name: &str,
    budget: Duration,
    check: impl FnOnce() -> CheckResult,
) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check));
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(Ok(())) if elapsed <= budget => (true, format!("{:.2}s", elapsed.as_secs_f64())),
        Ok(Ok(())) => (
            false,
            format!("over budget: {:.2}s > {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64()),
        ),
        Ok(Err(msg)) => (false, msg),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            (false, format!("panicked: {msg}"))
        }
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {verdict} ({detail})");
    pass
}

fn main() {
    let mut results = Vec::new();
    results.push(run_criterion(
        1,
        "composite node totals",
        Duration::from_secs(1),
        composite_node_totals,
    ));
    results.push(run_criterion(
        2,
        "composite part lists",
        Duration::from_secs(1),
        composite_part_lists,
    ));
    results.push(run_criterion(
        3,
        "permutation tables",
        Duration::from_secs(1),
        permutation_tables,
    ));
    results.push(run_criterion(
        4,
        "nonlinear solutions",
        Duration::from_secs(5),
        nonlinear_solutions,
    ));
    results.push(run_criterion(
        5,
        "fractional solutions",
        Duration::from_secs(10),
        fractional_solutions,
    ));
    results.push(run_criterion(
        6,
        "characterization grids",
        Duration::from_secs(120),
        characterization_grids,
    ));
    results.push(run_criterion(
        7,
        "witness oracle equivalence",
        Duration::from_secs(300),
        witness_oracle_equivalence,
    ));
    results.push(run_criterion(
        8,
        "composite solution",
        Duration::from_secs(30),
        composite_solution,
    ));
    // The large-scale converse bounds are not computable directly; criteria
    // 5-7 are their intended desk-scale stand-ins, so this criterion holds
    // exactly when those three do.
    let stand_ins_pass = results[4] && results[5] && results[6];
    results.push(run_criterion(9, "converse stand-ins", Duration::from_secs(1), || {
        if stand_ins_pass {
            Ok(())
        } else {
            Err("criteria 5-7 must pass to cover the converse bounds".into())
        }
    }));

    if results.iter().all(|&r| r) {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        let failed = results.iter().filter(|&&r| !r).count();
        println!("acceptance: {failed} of {} criteria fail", results.len());
        std::process::exit(1);
    }
}
