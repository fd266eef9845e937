//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use pseudoknot_core::asymptotics::{solve_growth, RootEquation, RootKind, DEFAULT_TOLERANCE};
use pseudoknot_core::diagram::{BruteForce, StructureClass};
use pseudoknot_core::enumeration::{secondary_count, t4_sigma, t4_sigma_total, tk21, StarTables};
use pseudoknot_core::series::{gf_k4sigma, gf_secondary, moebius_identity_check};
use pseudoknot_core::walks::{f_partial, f_perfect};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn rat(v: &BigUint) -> BigRational {
    BigRational::from_integer(v.clone().into())
}

const T000_SIGMA3: [u64; 17] = [
    1, 2, 4, 8, 15, 28, 52, 96, 176, 316, 557, 965, 1660, 2860, 4974, 8754, 15562,
];
const T000_SIGMA4: [u64; 17] = [
    1, 1, 1, 2, 4, 8, 14, 23, 36, 56, 88, 141, 231, 382, 633, 1038, 1679,
];

fn t000_rows() -> Check {
    let tables = StarTables::build(3, 24);
    for (sigma, row) in [(3, T000_SIGMA3), (4, T000_SIGMA4)] {
        for (i, &want) in row.iter().enumerate() {
            let n = 8 + i;
            let got = tables.t4_sigma_total(sigma, n);
            ensure(got == big(want), || {
                format!("sigma={sigma} n={n}: got {got}, want {want}")
            })?;
        }
    }
    Ok("34 counts, sigma = 3, 4, n = 8..24".into())
}

fn brute_force_agreement() -> Check {
    let oracle = BruteForce::default();
    let mut checked = 0;
    for sigma in [3, 4] {
        let class = StructureClass::new(3, 4, sigma).map_err(|e| e.to_string())?;
        for n in 0..=14 {
            let by_h = oracle
                .class_counts_by_arcs(n, &class)
                .map_err(|e| e.to_string())?;
            let total: BigUint = by_h.iter().sum();
            let formula = t4_sigma_total(3, sigma, n);
            ensure(total == formula, || {
                format!("sigma={sigma} n={n}: brute {total}, formula {formula}")
            })?;
            for (h, brute) in by_h.iter().enumerate() {
                let formula = t4_sigma(3, sigma, n, h);
                ensure(*brute == formula, || {
                    format!("sigma={sigma} n={n} h={h}: brute {brute}, formula {formula}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (n, h) cells, k = 3, sigma = 3, 4, n <= 14"
    ))
}

fn series_matches_inflation() -> Check {
    for k in 3..=5 {
        for sigma in 3..=5 {
            let s = gf_k4sigma(k, sigma, 30).map_err(|e| e.to_string())?;
            for n in 0..=30 {
                let want = rat(&t4_sigma_total(k, sigma, n));
                ensure(*s.coeff(n) == want, || {
                    format!(
                        "k={k} sigma={sigma} n={n}: series {}, formula {want}",
                        s.coeff(n)
                    )
                })?;
            }
        }
    }
    Ok("k, sigma in 3..=5, n <= 30".into())
}

const TABLE1: [[f64; 7]; 7] = [
    [2.0348, 2.2644, 2.4432, 2.5932, 2.7243, 2.8414, 2.9480],
    [1.7898, 1.9370, 2.0488, 2.1407, 2.2198, 2.2896, 2.3523],
    [1.6465, 1.7532, 1.8330, 1.8979, 1.9532, 2.0016, 2.0449],
    [1.5515, 1.6345, 1.6960, 1.7457, 1.7877, 1.8243, 1.8569],
    [1.4834, 1.5510, 1.6008, 1.6408, 1.6745, 1.7038, 1.7297],
    [1.4319, 1.4888, 1.5305, 1.5639, 1.5919, 1.6162, 1.6376],
    [1.3915, 1.4405, 1.4763, 1.5049, 1.5288, 1.5494, 1.5677],
];
const TAB1B: [f64; 9] = [
    2.6180, 4.7913, 6.8541, 8.8875, 10.9083, 12.9226, 14.9330, 16.9410, 18.9472,
];
const TAB2: [f64; 6] = [6.5290, 8.6483, 10.7176, 12.7635, 14.7963, 16.8210];
const TAB3: [[f64; 9]; 4] = [
    [
        1.9680, 2.5881, 3.0382, 3.4138, 3.7438, 4.0420, 4.3162, 4.5715, 4.8115,
    ],
    [
        1.7160, 2.0477, 2.2704, 2.4466, 2.5955, 2.7259, 2.8427, 2.9490, 3.0469,
    ],
    [
        1.5782, 1.7984, 1.9410, 2.0511, 2.1423, 2.2209, 2.2904, 2.3529, 2.4100,
    ],
    [
        1.4899, 1.6528, 1.7561, 1.8347, 1.8991, 1.9540, 2.0022, 2.0454, 2.0845,
    ],
];

fn growth_tables() -> Check {
    let mut entries = Vec::new();
    for (i, row) in TABLE1.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            entries.push((RootKind::K4Sigma, 3 + j, 3 + i, r));
        }
    }
    entries.extend(
        TAB1B
            .iter()
            .enumerate()
            .map(|(j, &r)| (RootKind::K21, 2 + j, 1, r)),
    );
    entries.extend(
        TAB2.iter()
            .enumerate()
            .map(|(j, &r)| (RootKind::K41, 4 + j, 1, r)),
    );
    for (i, row) in TAB3.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            entries.push((RootKind::K2Sigma, 2 + j, 2 + i, r));
        }
    }
    let mut worst: f64 = 0.0;
    for &(kind, k, sigma, want) in &entries {
        let eq = RootEquation::new(kind, k, sigma).map_err(|e| e.to_string())?;
        let res = solve_growth(&eq, DEFAULT_TOLERANCE)
            .map_err(|e| format!("{kind} k={k} sigma={sigma}: {e}"))?;
        let err = (res.rate_f64() - want).abs();
        worst = worst.max(err);
        ensure(err <= 5e-4, || {
            format!(
                "{kind} k={k} sigma={sigma}: rate {:.6}, table {want}",
                res.rate_f64()
            )
        })?;
    }
    Ok(format!(
        "{} entries, worst deviation {worst:.1e}",
        entries.len()
    ))
}

fn walks_match_brute_force() -> Check {
    let oracle = BruteForce::default();
    for k in 2..=4 {
        for n in 0..=10usize {
            if n % 2 == 0 {
                let brute = oracle
                    .count_perfect_matchings(n, k)
                    .map_err(|e| e.to_string())?;
                let walks = f_perfect(k, n / 2);
                ensure(brute == walks, || {
                    format!("k={k} 2m={n}: walks {walks}, brute {brute}")
                })?;
            }
            for ell in 0..=n {
                let brute = oracle
                    .count_partial_matchings(n, ell, k)
                    .map_err(|e| e.to_string())?;
                let formula = f_partial(k, n as i64, ell as i64);
                ensure(brute == formula, || {
                    format!("k={k} n={n} isolated={ell}: formula {formula}, brute {brute}")
                })?;
            }
        }
    }
    Ok("k = 2, 3, 4, n <= 10 (perfect and partial)".into())
}

fn secondary_three_routes() -> Check {
    let gf = gf_secondary(2, 60).map_err(|e| e.to_string())?;
    for n in 0..=20 {
        let rec = secondary_count(2, n);
        let alt = tk21(2, n);
        ensure(rec == alt, || {
            format!("n={n}: recursion {rec}, arc-removal sum {alt}")
        })?;
        ensure(*gf.coeff(n) == rat(&rec), || {
            format!("n={n}: recursion {rec}, series {}", gf.coeff(n))
        })?;
    }
    Ok("recursion, closed form and 1-arc sum agree for n <= 20".into())
}

fn ratio_convergence() -> Check {
    let s = gf_k4sigma(3, 3, 200).map_err(|e| e.to_string())?;
    let ratio = |n: usize| (s.coeff(n + 1) / s.coeff(n)).to_f64().unwrap_or(f64::NAN);
    for n in 20..199 {
        let (a, b) = (ratio(n), ratio(n + 1));
        ensure(b > a, || {
            format!("ratio not increasing at n={n}: {a:.6} then {b:.6}")
        })?;
    }
    let last = ratio(199);
    let rel = (2.0348 - last).abs() / 2.0348;
    ensure(rel <= 0.15, || {
        format!("T(200)/T(199) = {last:.5}, {:.1}% from 2.0348", rel * 100.0)
    })?;
    Ok(format!(
        "T(200)/T(199) = {last:.5}, {:.1}% below 2.0348",
        rel * 100.0
    ))
}

fn moebius_identities() -> Check {
    for sigma in [3, 4] {
        let ok = moebius_identity_check(3, sigma, 20).map_err(|e| e.to_string())?;
        ensure(ok, || format!("identity fails for k=3 sigma={sigma}"))?;
    }
    Ok("k = 3, sigma = 3, 4, order 20".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("reference counts T000 reproduced exactly", t000_rows),
        (
            "formula counts equal brute force per n and per arc count",
            brute_force_agreement,
        ),
        (
            "generating function coefficients equal inflation formula",
            series_matches_inflation,
        ),
        ("all 100 growth rates within 5e-4", growth_tables),
        (
            "lattice walk counts equal brute-force matchings",
            walks_match_brute_force,
        ),
        (
            "secondary structure counts agree across three routes",
            secondary_three_routes,
        ),
        (
            "coefficient ratios increase towards 2.0348",
            ratio_convergence,
        ),
        ("Moebius inversion identities hold", moebius_identities),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
