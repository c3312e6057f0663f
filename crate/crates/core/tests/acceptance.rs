//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Criteria 1-8 are run twice, on a multi-threaded pool and on a single
//! thread; criterion 9 compares the serialized artifacts of both runs.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use zagier_padic::completion::{
    completed_series, difference_support, is_neg_square_mod, scaled_cohen_residues,
    verify_completion,
};
use zagier_padic::eisenstein::{
    cohen_series, hurwitz_forms, hurwitz_l, koblitz_congruence_check, koblitz_negative_control,
    zagier_series, HalfIntWeight,
};
use zagier_padic::numtheory::negative_fundamental_characters;
use zagier_padic::padic::{kummer_chain_check, proof_coefficient_congruence, zeta_scaling_check};

struct Outcome {
    pass: bool,
    detail: String,
    artifact: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>, artifact: String) -> Self {
        Self {
            pass,
            detail: detail.into(),
            artifact,
        }
    }
}

fn weight(twice_k: u64) -> HalfIntWeight {
    HalfIntWeight::new(twice_k).unwrap()
}

fn integer_coefficients(series: &zagier_padic::QExpansion, exps: &[u64]) -> Option<Vec<i64>> {
    exps.iter()
        .map(|&e| {
            let c = series.coefficient(e);
            c.is_integer()
                .then(|| i64::try_from(c.to_integer()).ok())
                .flatten()
        })
        .collect()
}

const DISPLAY_EXPONENTS: [u64; 6] = [3, 4, 7, 8, 11, 12];
const TABLE_EXPONENTS: [u64; 9] = [0, 3, 4, 7, 8, 11, 12, 15, 16];

fn golden_series() -> Outcome {
    let expected: [(u64, [i64; 6]); 3] = [
        (7, [56, 126, 576, 756, 1512, 2072]),
        (11, [-88, -330, -4224, -7524, -30600, -46552]),
        (15, [56, 366, 14016, 33156, 260712, 462392]),
    ];
    let mut pass = true;
    let mut artifact = String::new();
    for (tk, want) in expected {
        let s = cohen_series(weight(tk), 12).unwrap();
        let got = integer_coefficients(&s, &DISPLAY_EXPONENTS);
        let constant_ok = s.coefficient(0) == BigRational::from_integer(1.into());
        pass &= got.as_deref() == Some(&want[..]) && constant_ok;
        artifact.push_str(&s.to_json());
    }
    Outcome::new(pass, "E_7/2, E_11/2, E_15/2 through q^12", artifact)
}

fn zagier_display() -> Outcome {
    let z = zagier_series(12);
    let got = integer_coefficients(&z, &(0..=12).collect::<Vec<_>>());
    let want = vec![1, 0, 0, -4, -6, 0, 0, -12, -12, 0, 0, -12, -16];
    Outcome::new(got == Some(want), "1 - 4q^3 - 6q^4 - 12q^7 - 12q^8 - 12q^11 - 16q^12", z.to_json())
}

fn example_tables() -> Outcome {
    let zagier = zagier_series(16);
    let mut pass = true;
    let mut artifact = String::new();
    let cases: [(u32, [u64; 9], [u64; 9]); 2] = [
        (1, [1, 3, 1, 2, 2, 2, 5, 4, 3], [4, 0, 1, 1, 2, 2, 0, 4, 3]),
        (2, [1, 45, 43, 37, 37, 37, 33, 25, 31], [46, 0, 43, 43, 37, 37, 0, 25, 31]),
    ];
    for (l, zagier_table, scaled_table) in cases {
        let z = zagier.reduce_mod(7, l).unwrap().table(&TABLE_EXPONENTS);
        let scaled = scaled_cohen_residues(7, l, 16).unwrap();
        let completed = completed_series(7, 16).unwrap().reduce_mod(7, l).unwrap();
        let cert = verify_completion(7, l, 16).unwrap();
        pass &= z == zagier_table
            && scaled.table(&TABLE_EXPONENTS) == scaled_table
            && completed.table(&TABLE_EXPONENTS) == scaled_table
            && cert.passed();
        artifact.push_str(&scaled.to_json());
        artifact.push_str(&cert.to_json());
    }
    Outcome::new(pass, "p=7 tables mod 7 and mod 49 (weights 15/2, 87/2)", artifact)
}

fn support_at_seven() -> Outcome {
    let support = difference_support(7, 1, 16).unwrap();
    Outcome::new(support == vec![0, 3, 7, 12], format!("support {support:?}"), format!("{support:?}"))
}

fn brute_divisor_max_sum(n: i64) -> BigRational {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d.max(n / d)).sum();
    BigRational::from_integer(s.into())
}

fn hurwitz_oracles() -> Outcome {
    let mismatches: Vec<u64> = (0..=5000).filter(|&n| hurwitz_forms(n) != hurwitz_l(n)).collect();
    let relation_failures: Vec<i64> = (1..=500i64)
        .filter(|&n| {
            let mut lhs = BigRational::from_integer(BigInt::from(0));
            let mut r = 0i64;
            while r * r <= 4 * n {
                let h = hurwitz_forms((4 * n - r * r) as u64);
                lhs += h.value();
                if r != 0 {
                    lhs += h.value();
                }
                r += 1;
            }
            lhs != brute_divisor_max_sum(n)
        })
        .collect();
    Outcome::new(
        mismatches.is_empty() && relation_failures.is_empty(),
        format!(
            "{} route mismatches (n<=5000), {} class-number relation failures (n<=500)",
            mismatches.len(),
            relation_failures.len()
        ),
        format!("{mismatches:?}{relation_failures:?}"),
    )
}

fn proposition_grid() -> Outcome {
    let mut failures = Vec::new();
    let mut artifact = String::new();
    for p in [5u64, 7, 11, 13] {
        for (l, n) in [(1u32, 200u64), (2, 100)] {
            let cert = verify_completion(p, l, n).unwrap();
            let support = difference_support(p, l, n).unwrap();
            let contained = support.iter().all(|&m| is_neg_square_mod(m, p));
            if !cert.passed() || !contained {
                failures.push(format!("p={p} l={l}: diffs {:?}", cert.diff_indices()));
            }
            artifact.push_str(&cert.to_json());
            artifact.push_str(&format!("{support:?}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            "p in {5,7,11,13}, l in {1,2}".to_string()
        } else {
            failures.join("; ")
        },
        artifact,
    )
}

fn proof_steps() -> Outcome {
    let mut failures = Vec::new();
    let mut artifact = String::new();
    let mut count = 0;
    for p in [5u64, 7, 11, 13] {
        for l in 1..=3 {
            let c = zeta_scaling_check(p, l).unwrap();
            if !c.passed() {
                failures.push(format!("zeta p={p} l={l}"));
            }
            artifact.push_str(&c.to_json());
            count += 1;
        }
    }
    for p in [5u64, 7] {
        for l in 1..=2 {
            for chi in negative_fundamental_characters(100) {
                let c = kummer_chain_check(chi, p, l).unwrap();
                if !c.passed() {
                    failures.push(format!("kummer D0={} p={p} l={l}", chi.d0()));
                }
                artifact.push_str(&c.to_json());
                count += 1;
            }
        }
    }
    for l in 1..=2 {
        for m in (3..=100u64).filter(|m| m % 4 == 0 || m % 4 == 3) {
            let c = proof_coefficient_congruence(m, 7, l).unwrap();
            if !c.passed() {
                failures.push(format!("coefficient m={m} l={l}"));
            }
            artifact.push_str(&c.to_json());
            count += 1;
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{count} checks, failures: {failures:?}"),
        artifact,
    )
}

fn koblitz_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut artifact = String::new();
    for tk in [7u64, 11] {
        for p in [3u64, 5, 7] {
            let c = koblitz_congruence_check(weight(tk), p, 500).unwrap();
            if !c.passed() {
                failures.push(format!("k={tk}/2 p={p}: {:?}", c.diff_indices()));
            }
            artifact.push_str(&c.to_json());
        }
    }
    let neg = koblitz_negative_control(5, 12).unwrap();
    let q3 = neg.diffs().iter().find(|d| d.0 == 3).copied();
    // -4 = 1 and -88 = 2 mod 5
    let negative_ok = !neg.passed() && q3.map(|d| (d.1, d.2)) == Some((1, 2));
    artifact.push_str(&neg.to_json());
    Outcome::new(
        failures.is_empty() && negative_ok,
        format!("failures {failures:?}; negative control at q^3: {q3:?}"),
        artifact,
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

const CRITERIA: [Criterion; 8] = [
    ("1 golden Cohen series", golden_series, Duration::from_secs(5)),
    ("2 weight 3/2 series", zagier_display, Duration::from_secs(1)),
    ("3 p=7 example tables", example_tables, Duration::from_secs(30)),
    ("4 difference support at p=7", support_at_seven, Duration::from_secs(5)),
    ("5 dual Hurwitz oracle", hurwitz_oracles, Duration::from_secs(60)),
    ("6 completion grid", proposition_grid, Duration::from_secs(600)),
    ("7 proof-step congruences", proof_steps, Duration::from_secs(300)),
    ("8 Koblitz congruences", koblitz_suite, Duration::from_secs(120)),
];

fn run_all(report: bool) -> (bool, Vec<String>) {
    let mut all_pass = true;
    let mut artifacts = Vec::new();
    for (name, check, limit) in CRITERIA {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= limit;
        all_pass &= pass;
        if report {
            println!(
                "[{}] criterion {name}: {} ({:.2}s, limit {}s)",
                if pass { "PASS" } else { "FAIL" },
                outcome.detail,
                elapsed.as_secs_f64(),
                limit.as_secs()
            );
        }
        artifacts.push(outcome.artifact);
    }
    (all_pass, artifacts)
}

fn main() -> ExitCode {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();

    let (mut all_pass, first) = parallel.install(|| run_all(true));
    let (_, second) = serial.install(|| run_all(false));
    let identical = first == second;
    all_pass &= identical;
    println!(
        "[{}] criterion 9 determinism: artifacts from {workers} workers and 1 worker are {}",
        if identical { "PASS" } else { "FAIL" },
        if identical { "byte-identical" } else { "different" }
    );

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
