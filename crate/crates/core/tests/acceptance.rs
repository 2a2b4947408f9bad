//! Acceptance criteria A1-A11. Prints one line per criterion and exits
//! nonzero if any fails. All comparisons are exact.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use riesz_limits::suites::{self, Config, Report, Status, Suite};

const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(s: Suite, trials: usize, depth: usize) -> Report {
    suites::run(
        s,
        &Config {
            depth,
            trials,
            seed: SEED,
        },
    )
    .expect("suite runs")
}

/// Pass iff the named properties (all of them when `names` is empty) pass.
fn judge(report: &Report, names: &[&str]) -> Outcome {
    let picked: Vec<_> = report
        .results
        .iter()
        .filter(|r| names.is_empty() || names.contains(&r.name))
        .collect();
    assert!(
        !picked.is_empty(),
        "no properties selected from {}",
        report.suite
    );
    let failed: Vec<_> = picked.iter().filter(|r| r.status == Status::Fail).collect();
    let cases: usize = picked.iter().map(|r| r.cases).sum();
    if failed.is_empty() {
        Outcome {
            ok: true,
            detail: format!("{} properties, {cases} cases", picked.len()),
        }
    } else {
        let f = failed[0];
        Outcome {
            ok: false,
            detail: format!("{} failed: {:?}", f.name, f.counterexample),
        }
    }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    out.detail = format!("{}; {:.2}s", out.detail, took.as_secs_f64());
    if let Some(b) = budget {
        if took > b {
            out.ok = false;
            out.detail = format!("{} exceeds budget of {}s", out.detail, b.as_secs());
        }
    }
    out
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-limits"))
        .args(args)
        .env_remove("RIESZ_LIMITS_SEED")
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn a11() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    for name in ["inclusion", "restriction", "collapse"] {
        let (code, stdout) = cli(&["check", &format!("samples/{name}.sys"), "--depth", "6"]);
        let golden = std::fs::read(root.join("tests/golden").join(format!("{name}.check")))
            .expect("golden file");
        if code != 0 || stdout != golden {
            return Outcome {
                ok: false,
                detail: format!("check {name} differs from its golden table (exit {code})"),
            };
        }
    }
    for args in [
        &["verify", "adjoints", "--trials", "40", "--seed", "7"][..],
        &["verify", "functoriality", "--trials", "6"],
    ] {
        let (c1, first) = cli(args);
        let (c2, second) = cli(args);
        if c1 != 0 || c2 != 0 || first != second {
            return Outcome {
                ok: false,
                detail: format!("{args:?} is not deterministic"),
            };
        }
    }
    Outcome {
        ok: true,
        detail: "3 golden tables, 2 repeated verify runs".into(),
    }
}

fn main() -> ExitCode {
    let oracle = std::cell::OnceCell::new();
    let interval = || {
        oracle
            .get_or_init(|| suite(Suite::IntervalOracle, 200, 8))
            .clone()
    };

    type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            "A1 adjoint laws",
            Box::new(|| timed(secs(10), || judge(&suite(Suite::Adjoints, 500, 8), &[]))),
        ),
        (
            "A2 predicate and oracle agree",
            Box::new(|| {
                timed(secs(10), || {
                    judge(
                        &interval(),
                        &[
                            "predicate_implies_oracle_feasible",
                            "violation_witness_is_infeasible",
                            "fourier_motzkin_agrees_with_simplex",
                        ],
                    )
                })
            }),
        ),
        (
            "A3 injective interval preserving maps onto bands",
            Box::new(|| {
                timed(None, || {
                    judge(
                        &interval(),
                        &["injective_ip_image_is_band", "preimage_inverts_apply"],
                    )
                })
            }),
        ),
        (
            "A4 direct limit duality",
            Box::new(|| {
                timed(secs(30), || {
                    judge(&suite(Suite::ColimitDuality, 50, 8), &[])
                })
            }),
        ),
        (
            "A5 inverse limit duality",
            Box::new(|| timed(secs(30), || judge(&suite(Suite::LimitDuality, 50, 8), &[]))),
        ),
        (
            "A6 band projection scenarios",
            Box::new(|| timed(secs(5), || judge(&suite(Suite::PmScenarios, 50, 8), &[]))),
        ),
        (
            "A7 disjointification",
            Box::new(|| {
                timed(None, || {
                    judge(
                        &suite(Suite::Disjointify, 500, 8),
                        &[
                            "parts_are_disjoint",
                            "first_part_below_phi",
                            "second_part_below_psi",
                            "supremum_is_preserved",
                        ],
                    )
                })
            }),
        ),
        (
            "A8 sum and product duality",
            Box::new(|| timed(None, || judge(&suite(Suite::SumProductDuality, 50, 8), &[]))),
        ),
        (
            "A9 carriers as a finite inverse limit",
            Box::new(|| {
                timed(secs(5), || {
                    judge(&suite(Suite::FiniteCarrierIso, 1, 8), &[])
                })
            }),
        ),
        (
            "A10 functoriality",
            Box::new(|| timed(None, || judge(&suite(Suite::Functoriality, 100, 6), &[]))),
        ),
        (
            "A11 cli goldens and determinism",
            Box::new(|| timed(None, a11)),
        ),
    ];

    let mut all = true;
    for (name, run) in criteria {
        let out = run();
        all &= out.ok;
        println!(
            "{} {name} ({})",
            if out.ok { "pass" } else { "FAIL" },
            out.detail
        );
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failures above");
        ExitCode::FAILURE
    }
}
